"""Separation boundary geometry for the two-zone piecewise field.

The boundary is an ordered chain of analytic pieces: sine graphs, line
graphs, vertical segments, and a portion of the x-axis.  Together with a
closing vertical segment at the left truncation abscissa the chain forms
a simple closed loop.  The bounded side of the loop is the serpentine
Inner zone (carrying the lifted-center field), the unbounded side is the
Outer zone.

Zone membership is decided by the even-odd rule with an upward vertical
ray.  Each graph piece meets a vertical line at most once, so every
crossing is solved in closed form; ties against vertical pieces or
domain endpoints are broken by nudging the query abscissa.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union, List, Tuple

import numpy as np

# Tolerances (see module tests for the stability checks that pin them).
EPS_TIE = 1e-12     # nudge for vertical-ray ties
TOL_ON = 1e-9       # distance band reported as Boundary
EPS_PROBE = 1e-11   # offset used to orient normals by zone parity

Point = Tuple[float, float]


class ParamOutOfDomain(ValueError):
    pass


@dataclass(frozen=True)
class SineGraph:
    """Graph of y = amplitude * sin(omega * x + phase) + offset on [x0, x1]."""

    amplitude: float
    omega: float
    phase: float
    offset: float
    x0: float
    x1: float

    def value(self, x):
        return self.amplitude * np.sin(self.omega * x + self.phase) + self.offset

    def slope(self, x):
        return self.amplitude * self.omega * np.cos(self.omega * x + self.phase)

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.x0, self.x1)


@dataclass(frozen=True)
class LineGraph:
    """Graph of y = slope_m * x + intercept on [x0, x1]."""

    slope_m: float
    intercept: float
    x0: float
    x1: float

    def value(self, x):
        return self.slope_m * x + self.intercept

    def slope(self, x):
        return self.slope_m * np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else self.slope_m

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.x0, self.x1)


@dataclass(frozen=True)
class AxisSegment:
    """The portion [x0, x1] of the x-axis belonging to the boundary."""

    x0: float
    x1: float

    def value(self, x):
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0

    def slope(self, x):
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.x0, self.x1)


@dataclass(frozen=True)
class VerticalSegment:
    """Vertical piece x = const, y in [y0, y1]."""

    x: float
    y0: float
    y1: float


Segment = Union[SineGraph, LineGraph, AxisSegment, VerticalSegment]
GraphSegment = Union[SineGraph, LineGraph, AxisSegment]


def is_graph(seg: Segment) -> bool:
    return not isinstance(seg, VerticalSegment)


class Zone(enum.Enum):
    INNER = "inner"
    OUTER = "outer"
    BOUNDARY = "boundary"

    def other(self) -> "Zone":
        if self is Zone.INNER:
            return Zone.OUTER
        if self is Zone.OUTER:
            return Zone.INNER
        raise ValueError("BOUNDARY has no opposite zone")


@dataclass(frozen=True)
class SeparationBoundary:
    """Closed separation loop.

    ``segments`` holds the axis portion followed by the curve chain
    walking from the right anchor (x_anchor, 0) to the left truncation
    abscissa; ``closure`` is the vertical piece at x_left closing the
    loop.  The Inner zone is the bounded region enclosed by the loop.
    """

    segments: Tuple[Segment, ...]
    closure: VerticalSegment
    x_anchor: float
    x_left: float

    def loop_segments(self) -> Tuple[Segment, ...]:
        return self.segments + (self.closure,)

    def graph_segments(self) -> List[Tuple[int, GraphSegment]]:
        """Indexed sine/line pieces (the axis and verticals are excluded)."""
        return [
            (i, s)
            for i, s in enumerate(self.segments)
            if isinstance(s, (SineGraph, LineGraph))
        ]


def _needs_tie_nudge(boundary: SeparationBoundary, px: float) -> bool:
    for seg in boundary.loop_segments():
        if isinstance(seg, VerticalSegment):
            if abs(seg.x - px) <= EPS_TIE:
                return True
        else:
            if abs(seg.x0 - px) <= EPS_TIE or abs(seg.x1 - px) <= EPS_TIE:
                return True
    return False


def zone_parity(boundary: SeparationBoundary, p: Point) -> Zone:
    """Exact even-odd membership (no boundary band).

    Counts crossings of the upward ray from ``p`` with every loop piece.
    Graph pieces use the half-open domain convention [x0, x1) so shared
    chain corners are counted once.
    """
    px, py = p
    if _needs_tie_nudge(boundary, px):
        px = px + EPS_TIE
    crossings = 0
    for seg in boundary.loop_segments():
        if isinstance(seg, VerticalSegment):
            continue  # nudged off all vertical abscissas
        if seg.x0 <= px < seg.x1:
            if float(seg.value(px)) > py:
                crossings += 1
    return Zone.INNER if crossings % 2 == 1 else Zone.OUTER


def _segment_distance(seg: Segment, p: Point) -> float:
    """Distance from ``p`` to ``seg``, exact for straight pieces and a
    slope-corrected vertical-offset estimate for sine graphs (adequate
    inside the narrow Boundary band)."""
    px, py = p
    if isinstance(seg, VerticalSegment):
        lo, hi = sorted((seg.y0, seg.y1))
        dy = 0.0 if lo <= py <= hi else min(abs(py - lo), abs(py - hi))
        return math.hypot(px - seg.x, dy)
    x0, x1 = seg.domain
    if px < x0 or px > x1:
        xe = x0 if px < x0 else x1
        return math.hypot(px - xe, py - float(seg.value(xe)))
    dv = abs(py - float(seg.value(px)))
    s = float(seg.slope(px))
    return dv / math.sqrt(1.0 + s * s)


def boundary_distance(boundary: SeparationBoundary, p: Point) -> float:
    return min(_segment_distance(seg, p) for seg in boundary.loop_segments())


def classify_zone(boundary: SeparationBoundary, p: Point, tol_on: float = TOL_ON) -> Zone:
    """Even-odd zone membership with a Boundary band of width ``tol_on``."""
    if boundary_distance(boundary, p) <= tol_on:
        return Zone.BOUNDARY
    return zone_parity(boundary, p)


def segment_point_and_normal(
    boundary: SeparationBoundary, seg: Segment, param: float, eps: float = EPS_PROBE
) -> Tuple[Point, Point]:
    """Point on ``seg`` at ``param`` plus the unit normal toward Outer.

    ``param`` is the abscissa for graph pieces and the ordinate for
    vertical pieces.  The normal sign is fixed by an even-odd probe a
    distance ``eps`` off the curve.
    """
    if isinstance(seg, VerticalSegment):
        lo, hi = sorted((seg.y0, seg.y1))
        if not (lo <= param <= hi):
            raise ParamOutOfDomain(f"ordinate {param} outside [{lo}, {hi}]")
        pt = (seg.x, float(param))
        n = (1.0, 0.0)
    else:
        x0, x1 = seg.domain
        if not (x0 <= param <= x1):
            raise ParamOutOfDomain(f"abscissa {param} outside [{x0}, {x1}]")
        s = float(seg.slope(param))
        norm = math.sqrt(1.0 + s * s)
        pt = (float(param), float(seg.value(param)))
        n = (-s / norm, 1.0 / norm)
    probe = (pt[0] + eps * n[0], pt[1] + eps * n[1])
    if zone_parity(boundary, probe) is Zone.OUTER:
        return pt, n
    return pt, (-n[0], -n[1])


# ---------------------------------------------------------------------------
# simplicity certification
# ---------------------------------------------------------------------------

N_SCAN_SIMPLE = 4096
CORNER_SHARE_TOL = 1e-9


@dataclass
class SimpleViolation:
    seg_a: int
    seg_b: int
    point: Point


def _seg_endpoints(seg: Segment) -> Tuple[Point, Point]:
    if isinstance(seg, VerticalSegment):
        return (seg.x, seg.y0), (seg.x, seg.y1)
    x0, x1 = seg.domain
    return (x0, float(seg.value(x0))), (x1, float(seg.value(x1)))


def _shares_endpoint(a: Segment, b: Segment) -> bool:
    ea = _seg_endpoints(a)
    eb = _seg_endpoints(b)
    return any(
        math.hypot(p[0] - q[0], p[1] - q[1]) <= CORNER_SHARE_TOL
        for p in ea
        for q in eb
    )


def _near_any_endpoint(pt: Point, segs: Iterable[Segment]) -> bool:
    for s in segs:
        for e in _seg_endpoints(s):
            if math.hypot(pt[0] - e[0], pt[1] - e[1]) <= 10 * CORNER_SHARE_TOL:
                return True
    return False


def _graph_pair_crossings(a: GraphSegment, b: GraphSegment, n_scan: int) -> List[float]:
    lo = max(a.domain[0], b.domain[0])
    hi = min(a.domain[1], b.domain[1])
    if hi <= lo:
        return []
    # sample density follows the fastest oscillation present
    omega = 0.0
    for s in (a, b):
        if isinstance(s, SineGraph):
            omega = max(omega, abs(s.omega))
    n = min(max(64, int(8 * (hi - lo) * (omega + 1.0) / math.pi), n_scan // 8), 200000)
    xs = np.linspace(lo, hi, n)
    f = np.asarray(a.value(xs)) - np.asarray(b.value(xs))
    roots = []
    sign = np.sign(f)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in flips:
        xa, xb = xs[i], xs[i + 1]
        fa = float(f[i])
        for _ in range(80):
            xm = 0.5 * (xa + xb)
            fm = float(a.value(xm)) - float(b.value(xm))
            if fa * fm <= 0:
                xb = xm
            else:
                xa, fa = xm, fm
        roots.append(0.5 * (xa + xb))
    # exact zeros sitting on sample points
    for i in np.nonzero(np.abs(f) == 0.0)[0]:
        roots.append(float(xs[i]))
    return roots


def check_simple(boundary: SeparationBoundary, n_scan: int = N_SCAN_SIMPLE) -> Optional[SimpleViolation]:
    """Pairwise interior-intersection scan over the closed loop.

    Returns None when the loop is simple, otherwise a violation record
    with the indices of the offending pieces and an approximate point.
    Crossings at shared chain corners are not violations.
    """
    segs = boundary.loop_segments()
    n = len(segs)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = segs[i], segs[j]
            pts: List[Point] = []
            if isinstance(a, VerticalSegment) and isinstance(b, VerticalSegment):
                if abs(a.x - b.x) < 1e-12:
                    alo, ahi = sorted((a.y0, a.y1))
                    blo, bhi = sorted((b.y0, b.y1))
                    lo, hi = max(alo, blo), min(ahi, bhi)
                    if hi - lo > CORNER_SHARE_TOL:
                        pts.append((a.x, 0.5 * (lo + hi)))
            elif isinstance(a, VerticalSegment) or isinstance(b, VerticalSegment):
                v, g = (a, b) if isinstance(a, VerticalSegment) else (b, a)
                x0, x1 = g.domain
                if x0 <= v.x <= x1:
                    y = float(g.value(v.x))
                    lo, hi = sorted((v.y0, v.y1))
                    if lo < y < hi:
                        pts.append((v.x, y))
            else:
                for x in _graph_pair_crossings(a, b, n_scan):
                    pts.append((x, float(a.value(x))))
            for pt in pts:
                if _shares_endpoint(a, b) and _near_any_endpoint(pt, (a, b)):
                    continue
                return SimpleViolation(i, j, pt)
    return None


def check_continuity(boundary: SeparationBoundary, tol: float = 1e-9) -> bool:
    """True when consecutive chain endpoints coincide and the closure
    joins the chain back to the axis."""
    segs = boundary.segments
    for prev, nxt in zip(segs[:-1], segs[1:]):
        pe = _seg_endpoints(prev)
        ne = _seg_endpoints(nxt)
        best = min(
            math.hypot(p[0] - q[0], p[1] - q[1]) for p in pe for q in ne
        )
        if best > tol:
            return False
    first, last = segs[0], segs[-1]
    ce = _seg_endpoints(boundary.closure)
    ok_last = min(
        math.hypot(p[0] - q[0], p[1] - q[1])
        for p in _seg_endpoints(last)
        for q in ce
    ) <= tol
    ok_first = min(
        math.hypot(p[0] - q[0], p[1] - q[1])
        for p in _seg_endpoints(first)
        for q in ce
    ) <= tol
    return ok_last and ok_first


# ---------------------------------------------------------------------------
# serialization (one record per piece, 17 significant digits)
# ---------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def serialize_boundary(boundary: SeparationBoundary) -> str:
    lines = ["# boundary v1"]
    lines.append(f"anchor {_fmt(boundary.x_anchor)}")
    lines.append(f"left {_fmt(boundary.x_left)}")
    c = boundary.closure
    lines.append(f"closure {_fmt(c.x)} {_fmt(c.y0)} {_fmt(c.y1)}")
    for seg in boundary.segments:
        if isinstance(seg, AxisSegment):
            lines.append(f"seg axis {_fmt(seg.x0)} {_fmt(seg.x1)}")
        elif isinstance(seg, SineGraph):
            lines.append(
                "seg sine "
                f"{_fmt(seg.amplitude)} {_fmt(seg.omega)} {_fmt(seg.phase)} "
                f"{_fmt(seg.offset)} {_fmt(seg.x0)} {_fmt(seg.x1)}"
            )
        elif isinstance(seg, LineGraph):
            lines.append(
                f"seg line {_fmt(seg.slope_m)} {_fmt(seg.intercept)} "
                f"{_fmt(seg.x0)} {_fmt(seg.x1)}"
            )
        elif isinstance(seg, VerticalSegment):
            lines.append(f"seg vert {_fmt(seg.x)} {_fmt(seg.y0)} {_fmt(seg.y1)}")
        else:  # pragma: no cover
            raise TypeError(f"unknown segment {seg!r}")
    return "\n".join(lines) + "\n"


def parse_boundary(text: str) -> SeparationBoundary:
    anchor = left = None
    closure = None
    segments: List[Segment] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        key = parts[0]
        if key == "anchor":
            anchor = float(parts[1])
        elif key == "left":
            left = float(parts[1])
        elif key == "closure":
            closure = VerticalSegment(float(parts[1]), float(parts[2]), float(parts[3]))
        elif key == "seg":
            kind = parts[1]
            vals = [float(v) for v in parts[2:]]
            if kind == "axis":
                segments.append(AxisSegment(*vals))
            elif kind == "sine":
                segments.append(SineGraph(*vals))
            elif kind == "line":
                segments.append(LineGraph(*vals))
            elif kind == "vert":
                segments.append(VerticalSegment(*vals))
            else:
                raise ValueError(f"unknown segment kind {kind!r}")
        else:
            raise ValueError(f"unknown record {key!r}")
    if anchor is None or left is None or closure is None:
        raise ValueError("incomplete boundary file")
    return SeparationBoundary(tuple(segments), closure, anchor, left)


def locate_on_boundary(
    boundary: SeparationBoundary, p: Point, tol: float = 1e-6
) -> Optional[Tuple[int, float]]:
    """Index and parameter of the loop piece closest to ``p``.

    Returns None when ``p`` is farther than ``tol`` from every piece.
    The closure gets index ``len(segments)``.
    """
    best = None
    best_d = tol
    for i, seg in enumerate(boundary.loop_segments()):
        d = _segment_distance(seg, p)
        if d <= best_d:
            if isinstance(seg, VerticalSegment):
                lo, hi = sorted((seg.y0, seg.y1))
                param = min(max(p[1], lo), hi)
            else:
                param = min(max(p[0], seg.domain[0]), seg.domain[1])
            best = (i, float(param))
            best_d = d
    return best
