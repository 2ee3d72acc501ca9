"""Figure output: a byte-deterministic SVG and a matplotlib PNG.

The SVG writer is hand-rolled so that identical inputs yield identical
bytes: one path per boundary piece, one path per cycle (exact arc
commands), markers at the crossing points, fixed element order, and a
viewBox computed from the drawn extents.  The PNG is a convenience
figure for humans and is not byte-pinned.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .detect import VerifiedCycle
from .geometry import (
    AxisSegment,
    LineGraph,
    SeparationBoundary,
    Segment,
    SineGraph,
    VerticalSegment,
)

_SAMPLES = 256


def _fmt(v: float) -> str:
    out = f"{v:.6f}"
    return "0.000000" if out == "-0.000000" else out


def _segment_points(seg: Segment) -> List[Tuple[float, float]]:
    if isinstance(seg, VerticalSegment):
        return [(seg.x, seg.y0), (seg.x, seg.y1)]
    x0, x1 = seg.domain
    if isinstance(seg, SineGraph):
        xs = np.linspace(x0, x1, _SAMPLES)
        return [(float(x), float(seg.value(x))) for x in xs]
    return [(x0, float(seg.value(x0))), (x1, float(seg.value(x1)))]


def _path_from_points(pts: Sequence[Tuple[float, float]]) -> str:
    head = f"M {_fmt(pts[0][0])} {_fmt(pts[0][1])}"
    rest = " ".join(f"L {_fmt(x)} {_fmt(y)}" for x, y in pts[1:])
    return f"{head} {rest}"


def _cycle_path(cycle: VerifiedCycle) -> str:
    parts = []
    first = cycle.arcs[0].start_point
    parts.append(f"M {_fmt(first[0])} {_fmt(first[1])}")
    for arc in cycle.arcs:
        large = 1 if arc.angle_span > math.pi else 0
        # sweep flag 1: counterclockwise in the y-up frame used here
        parts.append(
            f"A {_fmt(arc.radius)} {_fmt(arc.radius)} 0 {large} 1 "
            f"{_fmt(arc.end_point[0])} {_fmt(arc.end_point[1])}"
        )
    parts.append("Z")
    return " ".join(parts)


def render_svg(
    boundary: SeparationBoundary,
    cycles: Sequence[VerifiedCycle] = (),
    title: str = "two-zone realization",
) -> str:
    """Deterministic SVG 1.1 document for a boundary and its cycles."""
    xs: List[float] = []
    ys: List[float] = []
    for seg in boundary.loop_segments():
        for x, y in _segment_points(seg):
            xs.append(x)
            ys.append(y)
    for cyc in cycles:
        for arc in cyc.arcs:
            xs.extend((arc.center[0] - arc.radius, arc.center[0] + arc.radius))
            ys.extend((arc.center[1] - arc.radius, arc.center[1] + arc.radius))
    pad = 0.5
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    w, h = x1 - x0, y1 - y0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}">',
        f"<title>{title}</title>",
        '<g transform="scale(1,-1)" fill="none">',
    ]
    for i, seg in enumerate(boundary.loop_segments()):
        d = _path_from_points(_segment_points(seg))
        lines.append(
            f'<path class="boundary" id="seg{i}" d="{d}" '
            'stroke="#1f3a5f" stroke-width="0.02"/>'
        )
    for i, cyc in enumerate(cycles):
        lines.append(
            f'<path class="cycle" id="cyc{i}" d="{_cycle_path(cyc)}" '
            'stroke="#b03030" stroke-width="0.015"/>'
        )
    for i, cyc in enumerate(cycles):
        for j, (pt, _) in enumerate(cyc.crossings):
            lines.append(
                f'<circle class="crossing" id="x{i}_{j}" cx="{_fmt(pt[0])}" '
                f'cy="{_fmt(pt[1])}" r="0.03" fill="#b03030"/>'
            )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_figure(
    boundary: SeparationBoundary,
    cycles: Sequence[VerifiedCycle],
    path: str,
    title: Optional[str] = None,
) -> None:
    """Matplotlib rendering of the boundary, zones, and cycles to a file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(9, 6), dpi=150)
    for seg in boundary.loop_segments():
        pts = _segment_points(seg)
        ax.plot([p[0] for p in pts], [p[1] for p in pts],
                color="#1f3a5f", lw=1.2)
    for cyc in cycles:
        for arc in cyc.arcs:
            ts = np.linspace(arc.start_angle, arc.end_angle, 200)
            ax.plot(arc.center[0] + arc.radius * np.cos(ts),
                    arc.center[1] + arc.radius * np.sin(ts),
                    color="#b03030", lw=1.0)
        for pt, _ in cyc.crossings:
            ax.plot([pt[0]], [pt[1]], "o", ms=3, color="#b03030")
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.25)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
