"""Independent fixed-step RK4 integrator with boundary-event location.

This is the cross-validation route for the exact arc tracer: it never
uses circle geometry.  Each step integrates the active zone's linear
field; when the even-odd zone indicator flips between consecutive
points, the event time is bisected to ``TOL_EVENT``, the event point is
classified, and (for sewing events) the active zone switches.

Both zone fields are rigid unit-speed rotations, so a closed chain of
arcs lasts exactly the sum of its subtended angles; cross-checks match
positions by time along the cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .flow import OrbitTrace, trace_period, trace_point_at_time
from .geometry import Point, SeparationBoundary, Zone, locate_on_boundary, zone_parity
from .system import NearCorner, PointClass, TwoCenterSystem, classify_boundary_point, field_at

TOL_EVENT = 1e-12


class StepUnstable(RuntimeError):
    pass


class NotClosed(RuntimeError):
    pass


@dataclass
class EventTrajectory:
    samples: List[Tuple[float, Point]] = field(default_factory=list)
    events: List[Tuple[float, Point, int, PointClass]] = field(default_factory=list)
    terminated: Optional[str] = None


def _rk4_step(sys: TwoCenterSystem, zone: Zone, p: Point, h: float) -> Point:
    k1 = field_at(sys, zone, p)
    k2 = field_at(sys, zone, (p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1]))
    k3 = field_at(sys, zone, (p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1]))
    k4 = field_at(sys, zone, (p[0] + h * k3[0], p[1] + h * k3[1]))
    return (
        p[0] + h * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6.0,
        p[1] + h * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6.0,
    )


def integrate_with_events(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    start: Point,
    zone: Zone,
    t_max: float,
    h: float,
) -> EventTrajectory:
    """RK4 trajectory with bisected zone-crossing events.

    Terminates at ``t_max`` or at the first non-sewing event.  Raises
    :class:`StepUnstable` when an event bracket cannot be resolved,
    which indicates ``h`` is too large for the local geometry.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    traj = EventTrajectory()
    t = 0.0
    p = start
    traj.samples.append((t, p))
    guard = 0
    while t < t_max - 1e-15:
        step = min(h, t_max - t)
        q = _rk4_step(sys, zone, p, step)
        if zone_parity(boundary, q) is zone:
            t += step
            p = q
            traj.samples.append((t, p))
            continue
        # event inside (t, t + step]: bisect the substep length
        lo, hi = 0.0, step
        for _ in range(200):
            if hi - lo <= TOL_EVENT:
                break
            mid = 0.5 * (lo + hi)
            qm = _rk4_step(sys, zone, p, mid)
            if zone_parity(boundary, qm) is zone:
                lo = mid
            else:
                hi = mid
        else:  # pragma: no cover
            raise StepUnstable("event bisection failed to converge")
        t_event = t + hi
        p_event = _rk4_step(sys, zone, p, hi)
        loc = locate_on_boundary(boundary, p_event, tol=1e-5)
        if loc is None:
            raise StepUnstable(
                f"event point {p_event} not resolvable on the boundary at h={h}"
            )
        seg_idx, param = loc
        seg = boundary.loop_segments()[seg_idx]
        try:
            cls = classify_boundary_point(sys, boundary, seg, param)
        except NearCorner:
            cls = PointClass.TANGENCY
        traj.events.append((t_event, p_event, seg_idx, cls))
        traj.samples.append((t_event, p_event))
        if cls is PointClass.SEWING_INNER_TO_OUTER:
            zone = Zone.OUTER
        elif cls is PointClass.SEWING_OUTER_TO_INNER:
            zone = Zone.INNER
        else:
            traj.terminated = "non-sewing"
            return traj
        t = t_event
        p = p_event
        guard += 1
        if guard > 100000:  # pragma: no cover
            raise StepUnstable("event count runaway")
    traj.terminated = "t_max"
    return traj


def cross_check_cycle(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    trace: OrbitTrace,
    h: float,
) -> float:
    """Max pointwise distance between one RK4 period and the exact chain.

    The input must be a closed trace.  Samples are matched by time along
    the cycle (angular speed is one in both zones).  Raises
    :class:`NotClosed` when the integrated endpoint misses the start by
    more than ten times the a-priori fourth-order deviation bound,
    flagging a genuine disagreement rather than step error.
    """
    if not trace.closed:
        raise NotClosed("cross-check requires a closed trace")
    period = trace_period(trace)
    start = trace.arcs[0].start_point
    zone = trace.arcs[0].zone
    traj = integrate_with_events(sys, boundary, start, zone, period, h)
    r_max = max(a.radius for a in trace.arcs)
    dev = 0.0
    for t, p in traj.samples:
        q = trace_point_at_time(trace, t)
        dev = max(dev, math.hypot(p[0] - q[0], p[1] - q[1]))
    end = traj.samples[-1][1]
    end_err = math.hypot(end[0] - start[0], end[1] - start[1])
    tol_oracle = max(1e-6, 0.2 * (h ** 4) * period * r_max)
    if end_err > 10.0 * tol_oracle:
        raise NotClosed(
            f"oracle endpoint misses the start by {end_err:.3e} at h={h}"
        )
    return dev
