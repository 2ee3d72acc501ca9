"""Exact orbit flow: counterclockwise circular arcs between boundary hits.

Within a zone the orbit is a circle about that zone's center, so the
flow reduces to finding, for each arc, the smallest positive angle at
which the circle meets the separation loop again.  Straight pieces
(lines, verticals, the axis) are intersected in closed form; sine
graphs are intersected by a frequency-aware sampled scan restricted to
the angular windows where the circle's abscissa lies in the piece's
domain, followed by bisection.

Arcs are stored as center + radius + angle span, so the zone first
integral is constant along an arc by construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .geometry import (
    AxisSegment,
    LineGraph,
    Point,
    SeparationBoundary,
    Segment,
    SineGraph,
    VerticalSegment,
    Zone,
)
from .system import (
    CORNER_MARGIN,
    NearCorner,
    PointClass,
    TwoCenterSystem,
    classify_boundary_point,
    field_at,
)

N_SCAN = 4096        # baseline angular sampling budget per circle
THETA_MIN = 1e-10    # angle offset used to leave the departing crossing
TOL_HIT = 1e-12      # bisection tolerance on the hit angle
TOL_CLOSE = 1e-9     # positional closure tolerance for traces

TWO_PI = 2.0 * math.pi


class DegenerateRadius(ValueError):
    pass


class StartsOnNonSewingBoundary(ValueError):
    pass


@dataclass(frozen=True)
class ArcStep:
    zone: Zone
    center: Point
    radius: float
    start_angle: float
    end_angle: float  # counterclockwise, end > start
    start_point: Point
    end_point: Point
    hit_segment: int
    hit_class: PointClass
    corner_hit: bool = False

    @property
    def angle_span(self) -> float:
        return self.end_angle - self.start_angle

    def point_at(self, angle: float) -> Point:
        return (
            self.center[0] + self.radius * math.cos(angle),
            self.center[1] + self.radius * math.sin(angle),
        )


class TraceOutcome(enum.Enum):
    CLOSED = "closed"
    HIT_NON_SEWING = "hit-non-sewing"
    BUDGET = "budget"
    LEFT_WINDOW = "left-window"


@dataclass
class OrbitTrace:
    arcs: List[ArcStep]
    outcome: TraceOutcome
    detail: Optional[PointClass] = None

    @property
    def closed(self) -> bool:
        return self.outcome is TraceOutcome.CLOSED


# ---------------------------------------------------------------------------
# per-segment first-crossing search on a circle
# ---------------------------------------------------------------------------


def _delta_from(theta0: float, angle: float) -> float:
    """Counterclockwise offset of ``angle`` past ``theta0`` in (0, 2*pi]."""
    d = (angle - theta0) % TWO_PI
    return d if d > 0 else TWO_PI


def _vertical_candidates(c: Point, r: float, theta0: float, seg: VerticalSegment):
    dx = seg.x - c[0]
    if abs(dx) > r:
        return
    phi = math.acos(max(-1.0, min(1.0, dx / r)))
    lo, hi = sorted((seg.y0, seg.y1))
    for ang in (phi, -phi):
        y = c[1] + r * math.sin(ang)
        if lo <= y <= hi:
            yield _delta_from(theta0, ang), float(y)


def _line_candidates(c: Point, r: float, theta0: float, m: float, b: float,
                     x0: float, x1: float):
    # circle meets y = m x + b where r (sin t - m cos t) = b + m cx - cy
    k = b + m * c[0] - c[1]
    rad = r * math.hypot(1.0, m)
    if abs(k) > rad:
        return
    psi = math.atan2(-m, 1.0)  # sin t - m cos t = sqrt(1+m^2) sin(t + psi)
    base = math.asin(max(-1.0, min(1.0, k / rad)))
    for ang in (base - psi, math.pi - base - psi):
        x = c[0] + r * math.cos(ang)
        if x0 <= x <= x1:
            yield _delta_from(theta0, ang), float(x)


def _x_windows(c: Point, r: float, x0: float, x1: float) -> List[Tuple[float, float]]:
    """Absolute-angle intervals where the circle abscissa lies in [x0, x1]."""
    lo = max(-1.0, min(1.0, (x0 - c[0]) / r))
    hi = max(-1.0, min(1.0, (x1 - c[0]) / r))
    if (x1 - c[0]) / r < -1.0 or (x0 - c[0]) / r > 1.0:
        return []
    a_hi = math.acos(hi)   # smaller angle (cos decreasing on [0, pi])
    a_lo = math.acos(lo)
    out = []
    if a_lo > a_hi:
        out.append((a_hi, a_lo))            # upper half
        out.append((-a_lo, -a_hi))          # lower half
    else:
        out.append((a_hi, a_hi))
    return out


def _sine_candidates(c: Point, r: float, theta0: float, seg: SineGraph,
                     n_scan: int):
    for lo, hi in _x_windows(c, r, seg.x0, seg.x1):
        if hi - lo <= 0:
            continue
        span = hi - lo
        dens = 8.0 * span * (1.0 + r * abs(seg.omega)) / math.pi
        n = int(min(max(48, dens, n_scan * span / TWO_PI), 400000))
        ang = np.linspace(lo, hi, n)
        x = c[0] + r * np.cos(ang)
        f = (c[1] + r * np.sin(ang)) - (
            seg.amplitude * np.sin(seg.omega * x + seg.phase) + seg.offset
        )
        sign = np.sign(f)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        zero = np.nonzero(f == 0.0)[0]
        roots: List[float] = []
        for i in flips:
            aa, bb = float(ang[i]), float(ang[i + 1])
            fa = float(f[i])
            for _ in range(64):
                mm = 0.5 * (aa + bb)
                xm = c[0] + r * math.cos(mm)
                fm = (c[1] + r * math.sin(mm)) - (
                    seg.amplitude * math.sin(seg.omega * xm + seg.phase)
                    + seg.offset
                )
                if fa * fm <= 0.0:
                    bb = mm
                else:
                    aa, fa = mm, fm
                if bb - aa < TOL_HIT:
                    break
            roots.append(0.5 * (aa + bb))
        for i in zero:
            roots.append(float(ang[i]))
        for ang_root in roots:
            x_hit = c[0] + r * math.cos(ang_root)
            yield _delta_from(theta0, ang_root), float(x_hit)


def _segment_candidates(c: Point, r: float, theta0: float, seg: Segment,
                        n_scan: int):
    if isinstance(seg, VerticalSegment):
        yield from _vertical_candidates(c, r, theta0, seg)
    elif isinstance(seg, SineGraph):
        yield from _sine_candidates(c, r, theta0, seg, n_scan)
    elif isinstance(seg, (LineGraph, AxisSegment)):
        if isinstance(seg, AxisSegment):
            m, b, x0, x1 = 0.0, 0.0, seg.x0, seg.x1
        else:
            m, b, x0, x1 = seg.slope_m, seg.intercept, seg.x0, seg.x1
        yield from _line_candidates(c, r, theta0, m, b, x0, x1)
    else:  # pragma: no cover
        raise TypeError(f"unknown segment {seg!r}")


def _snap_to_segment(seg: Segment, c: Point, r: float, angle: float,
                     param: float) -> Tuple[Point, float]:
    """Exact on-curve hit point for the located crossing angle."""
    if isinstance(seg, VerticalSegment):
        y = c[1] + r * math.sin(angle)
        lo, hi = sorted((seg.y0, seg.y1))
        y = min(max(y, lo), hi)
        return (seg.x, float(y)), float(y)
    x = min(max(param, seg.domain[0]), seg.domain[1])
    return (float(x), float(seg.value(x))), float(x)


def _param_near_corner(seg: Segment, param: float) -> bool:
    if isinstance(seg, VerticalSegment):
        lo, hi = sorted((seg.y0, seg.y1))
    else:
        lo, hi = seg.domain
    return param < lo + CORNER_MARGIN or param > hi - CORNER_MARGIN


def next_boundary_hit(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    start: Point,
    zone: Zone,
    n_scan: int = N_SCAN,
    theta_min: float = THETA_MIN,
) -> Optional[ArcStep]:
    """First boundary crossing of the circle through ``start`` in ``zone``.

    Sweeps counterclockwise from the start angle; returns None when the
    full circle never meets the loop (the orbit circulates freely).
    Raises :class:`DegenerateRadius` when the start coincides with the
    zone center and :class:`StartsOnNonSewingBoundary` when the start
    sits on the loop without a transversal entry into ``zone``.
    """
    c = sys.zone_center(zone)
    r = math.hypot(start[0] - c[0], start[1] - c[1])
    if r < 1e-15:
        raise DegenerateRadius("start point equals the zone center")
    theta0 = math.atan2(start[1] - c[1], start[0] - c[0])

    best: Optional[Tuple[float, int, float]] = None  # (delta, seg index, param)
    for idx, seg in enumerate(boundary.loop_segments()):
        for delta, param in _segment_candidates(c, r, theta0, seg, n_scan):
            if delta <= theta_min:
                continue
            if best is None or delta < best[0]:
                best = (delta, idx, param)
    if best is None:
        return None

    delta, idx, param = best
    seg = boundary.loop_segments()[idx]
    end_angle = theta0 + delta
    end_point, param = _snap_to_segment(seg, c, r, end_angle, param)
    corner = _param_near_corner(seg, param)
    if corner:
        hit_class = PointClass.TANGENCY
    else:
        try:
            hit_class = classify_boundary_point(sys, boundary, seg, param)
        except NearCorner:
            hit_class = PointClass.TANGENCY
            corner = True
    return ArcStep(
        zone=zone,
        center=c,
        radius=r,
        start_angle=theta0,
        end_angle=end_angle,
        start_point=start,
        end_point=end_point,
        hit_segment=idx,
        hit_class=hit_class,
        corner_hit=corner,
    )


def _expected_entry(hit_class: PointClass) -> Optional[Zone]:
    if hit_class is PointClass.SEWING_INNER_TO_OUTER:
        return Zone.OUTER
    if hit_class is PointClass.SEWING_OUTER_TO_INNER:
        return Zone.INNER
    return None


def trace_orbit(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    start: Point,
    entering: Zone,
    max_arcs: int = 64,
    tol_close: float = TOL_CLOSE,
    n_scan: int = N_SCAN,
) -> OrbitTrace:
    """Chain arcs from a sewing crossing until closure or termination.

    ``start`` must lie on the loop at a sewing point whose crossing
    direction agrees with ``entering``; the trace alternates zones at
    every sewing hit, stops with HIT_NON_SEWING at any other class,
    BUDGET after ``max_arcs`` arcs, LEFT_WINDOW when an arc never meets
    the loop again, and CLOSED on return to the start within
    ``tol_close``.
    """
    loc = _locate_entry(sys, boundary, start, entering)
    if loc is None:
        raise StartsOnNonSewingBoundary(
            f"start {start} is not a sewing point entering {entering.value}"
        )
    arcs: List[ArcStep] = []
    zone = entering
    point = start
    for _ in range(max_arcs):
        arc = next_boundary_hit(sys, boundary, point, zone, n_scan=n_scan)
        if arc is None:
            return OrbitTrace(arcs, TraceOutcome.LEFT_WINDOW)
        arcs.append(arc)
        if not arc.hit_class.is_sewing:
            return OrbitTrace(arcs, TraceOutcome.HIT_NON_SEWING, arc.hit_class)
        nxt = _expected_entry(arc.hit_class)
        closes = (
            math.hypot(arc.end_point[0] - start[0], arc.end_point[1] - start[1])
            <= tol_close
        )
        if closes and nxt is entering and len(arcs) >= 2:
            return OrbitTrace(arcs, TraceOutcome.CLOSED)
        zone = nxt
        point = arc.end_point
    return OrbitTrace(arcs, TraceOutcome.BUDGET)


def _locate_entry(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    start: Point,
    entering: Zone,
) -> Optional[Tuple[int, float]]:
    from .geometry import locate_on_boundary

    loc = locate_on_boundary(boundary, start, tol=1e-7)
    if loc is None:
        return None
    idx, param = loc
    seg = boundary.loop_segments()[idx]
    try:
        cls = classify_boundary_point(sys, boundary, seg, param)
    except NearCorner:
        return None
    if _expected_entry(cls) is not entering:
        return None
    return loc


def trace_period(trace: OrbitTrace) -> float:
    """Duration of one closed turn: both fields rotate at unit speed, so
    each arc lasts exactly its subtended angle."""
    return sum(a.angle_span for a in trace.arcs)


def trace_point_at_time(trace: OrbitTrace, t: float) -> Point:
    """Position along the closed arc chain at time ``t`` from its start."""
    total = trace_period(trace)
    t = t % total if total > 0 else 0.0
    for arc in trace.arcs:
        if t <= arc.angle_span:
            return arc.point_at(arc.start_angle + t)
        t -= arc.angle_span
    return trace.arcs[-1].end_point
