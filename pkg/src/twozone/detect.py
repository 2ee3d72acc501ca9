"""Crossing limit-cycle detection.

Every crossing periodic orbit of the two-center field meets the
boundary graphs in symmetric pairs (x*, y*), (-x*, y*): matching both
zone integrals across a crossing pair forces x_left = -x_right and
equal ordinates.  The detector therefore

1. isolates every positive root of the mirror defect
   D(x) = f_right(x) - f_left(-x) over all mirror-overlapping graph
   pairs (reporting identically-zero stretches as degenerate bands),
2. assembles each root into a two-arc or four-arc candidate from the
   two first integrals (the four-arc kind also crosses the axis at
   +/- sqrt(H_inner - a^2)), and
3. certifies candidates by Filippov classification at every predicted
   crossing plus an exact-arc trace that must close on the predicted
   crossing sequence.

Isolation evidence comes from the return-map displacement along the
crossing segment, sampled at probe offsets around the pair abscissa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .geometry import (
    GraphSegment,
    Point,
    SeparationBoundary,
    Segment,
    VerticalSegment,
    Zone,
)
from .system import (
    CORNER_MARGIN,
    NearCorner,
    PointClass,
    TwoCenterSystem,
    classify_boundary_point,
    first_integral,
)
from .flow import (
    ArcStep,
    OrbitTrace,
    StartsOnNonSewingBoundary,
    TraceOutcome,
    trace_orbit,
)

N_PAIR = 8192        # samples per mirrored-domain overlap
TOL_PAIR = 1e-11     # root isolation tolerance in x
DELTA_ISO_FRAC = 0.05
MATCH_TOL = 1e-6     # traced crossings must land this close to predictions


class TangentAxis(ValueError):
    pass


class NoReturnError(RuntimeError):
    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class SymmetricPair:
    x_star: float
    y_star: float
    left_segment: int
    right_segment: int

    @property
    def right_point(self) -> Point:
        return (self.x_star, self.y_star)

    @property
    def left_point(self) -> Point:
        return (-self.x_star, self.y_star)


@dataclass(frozen=True)
class DegenerateBand:
    left_segment: int
    right_segment: int
    x_lo: float
    x_hi: float


@dataclass(frozen=True)
class CandidateCycle:
    pair: SymmetricPair
    h_outer: float
    h_inner: float
    kind: str  # "two-arc" | "four-arc"
    x3: float = 0.0  # axis crossing abscissa, four-arc only


@dataclass
class Rejection:
    candidate: CandidateCycle
    reason: str  # "non-sewing" | "tangent-axis" | "extra-crossing" | "trace-mismatch" | "trace-error"
    detail: str = ""


@dataclass
class IsolationReport:
    pair_abscissa: float
    delta: float
    displacements: Tuple[Tuple[float, float], ...]  # (offset, d)
    center_displacement: float
    verdict: str  # "isolated" | "inconclusive"


@dataclass
class VerifiedCycle:
    pair: SymmetricPair
    candidate: CandidateCycle
    crossings: List[Tuple[Point, PointClass]]
    arcs: List[ArcStep]
    trace: OrbitTrace
    isolation: Optional[IsolationReport] = None

    @property
    def kind(self) -> str:
        return self.candidate.kind

    def apex(self) -> Point:
        """Topmost point of the arc chain (containment probe)."""
        best = None
        for arc in self.arcs:
            cands = [arc.start_point, arc.end_point]
            # interior top of the arc when the 90-degree ray is inside it
            k = math.ceil((arc.start_angle - math.pi / 2) / (2 * math.pi))
            top_angle = math.pi / 2 + 2 * math.pi * k
            if arc.start_angle <= top_angle <= arc.end_angle:
                cands.append(arc.point_at(top_angle))
            for p in cands:
                if best is None or p[1] > best[1]:
                    best = p
        return best


@dataclass
class DetectionReport:
    verified: List[VerifiedCycle]
    rejected: List[Rejection]
    degenerate: List[DegenerateBand]

    def counts(self) -> Tuple[int, int, int]:
        return len(self.verified), len(self.rejected), len(self.degenerate)


# ---------------------------------------------------------------------------
# symmetric pairs
# ---------------------------------------------------------------------------


def _mirror_overlap(left: GraphSegment, right: GraphSegment) -> Tuple[float, float]:
    lo = max(right.domain[0], -left.domain[1])
    hi = min(right.domain[1], -left.domain[0])
    return max(lo, 0.0), hi


def _height_ranges_disjoint(left: GraphSegment, right: GraphSegment) -> bool:
    def rng(s: GraphSegment) -> Tuple[float, float]:
        if hasattr(s, "amplitude"):
            return (s.offset - abs(s.amplitude), s.offset + abs(s.amplitude))
        v0, v1 = float(s.value(s.domain[0])), float(s.value(s.domain[1]))
        return (min(v0, v1), max(v0, v1))

    a0, a1 = rng(left)
    b0, b1 = rng(right)
    return a1 < b0 - 1e-12 or b1 < a0 - 1e-12


def _refine_root(left: GraphSegment, right: GraphSegment, xa: float, xb: float,
                 fa: float) -> float:
    for _ in range(80):
        xm = 0.5 * (xa + xb)
        fm = float(right.value(xm)) - float(left.value(-xm))
        if fa * fm <= 0.0:
            xb = xm
        else:
            xa, fa = xm, fm
        if xb - xa <= TOL_PAIR * 0.01:
            break
    x = 0.5 * (xa + xb)
    # Newton polish so the pair ordinates agree to machine precision
    for _ in range(3):
        f = float(right.value(x)) - float(left.value(-x))
        fp = float(right.slope(x)) + float(left.slope(-x))
        if fp == 0.0:
            break
        step = f / fp
        if not math.isfinite(step) or abs(step) > (xb - xa) + TOL_PAIR:
            break
        x -= step
    return x


def find_symmetric_pairs(
    boundary: SeparationBoundary,
    n_samples: int = N_PAIR,
    tol: float = TOL_PAIR,
) -> Tuple[List[SymmetricPair], List[DegenerateBand]]:
    """All mirror pairs on graph pieces, plus degenerate bands.

    Scans every ordered pair of sine/line pieces whose domains overlap
    under mirroring, including self-pairs of pieces straddling the axis
    of symmetry.  Roots within the corner margin of an overlap end are
    discarded (crossings at chain junctions are out of scope).  Stretches
    where the defect vanishes identically are reported as bands, never
    as pairs.
    """
    graphs = boundary.graph_segments()
    pairs: List[SymmetricPair] = []
    bands: List[DegenerateBand] = []
    seen: set = set()
    for li, lseg in graphs:
        for ri, rseg in graphs:
            lo, hi = _mirror_overlap(lseg, rseg)
            if hi - lo <= 2 * CORNER_MARGIN:
                continue
            if _height_ranges_disjoint(lseg, rseg):
                continue
            omega = 0.0
            for s in (lseg, rseg):
                if hasattr(s, "omega"):
                    omega = max(omega, abs(s.omega))
            n = int(min(max(256, 8 * (hi - lo) * (omega + 1.0) / math.pi, n_samples),
                        400000))
            xs = np.linspace(lo, hi, n)
            f = np.asarray(rseg.value(xs), dtype=float) - np.asarray(
                lseg.value(-xs), dtype=float
            )
            flat = np.abs(f) <= tol
            if np.all(flat):
                bands.append(DegenerateBand(li, ri, float(lo), float(hi)))
                continue
            # identically-flat stretches (>= 3 consecutive samples)
            run = 0
            for k in range(n + 1):
                if k < n and flat[k]:
                    run += 1
                    continue
                if run >= 3:
                    bands.append(
                        DegenerateBand(li, ri, float(xs[k - run]), float(xs[k - 1]))
                    )
                run = 0
            sign = np.sign(f)
            sign[flat] = 0.0
            idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
            roots = [_refine_root(lseg, rseg, float(xs[i]), float(xs[i + 1]), float(f[i]))
                     for i in idx]
            for i in np.nonzero((f == 0.0) & ~flat)[0]:  # pragma: no cover
                roots.append(float(xs[i]))
            for x in roots:
                if x <= lo + CORNER_MARGIN or x >= hi - CORNER_MARGIN:
                    continue
                y = 0.5 * (float(rseg.value(x)) + float(lseg.value(-x)))
                key = (round(x, 10), round(y, 10))
                if key in seen:
                    continue
                seen.add(key)
                pairs.append(SymmetricPair(x, y, li, ri))
    pairs.sort(key=lambda p: (p.y_star, p.x_star))
    bands.sort(key=lambda b: (b.x_lo, b.left_segment, b.right_segment))
    return pairs, bands


# ---------------------------------------------------------------------------
# candidates and verification
# ---------------------------------------------------------------------------


def assemble_candidate(
    sys: TwoCenterSystem, pair: SymmetricPair, tol: float = TOL_PAIR
) -> CandidateCycle:
    """Candidate kind and integrals from the pair alone.

    H_inner above a^2 means the inner circle reaches the axis portion,
    giving the four-arc kind with axis abscissa sqrt(H_inner - a^2);
    equality within ``tol`` is a tangency and rejected outright.
    """
    h_outer = first_integral(0.0, pair.right_point)
    h_inner = first_integral(sys.a, pair.right_point)
    gap = h_inner - sys.a * sys.a
    if abs(gap) < tol:
        raise TangentAxis(f"inner circle tangent to the axis at pair x*={pair.x_star}")
    if gap > 0:
        return CandidateCycle(pair, h_outer, h_inner, "four-arc", math.sqrt(gap))
    return CandidateCycle(pair, h_outer, h_inner, "two-arc")


def _predicted_crossings(cand: CandidateCycle) -> List[Tuple[Point, PointClass]]:
    p = cand.pair
    out = [
        (p.right_point, PointClass.SEWING_INNER_TO_OUTER),
        (p.left_point, PointClass.SEWING_OUTER_TO_INNER),
    ]
    if cand.kind == "four-arc":
        out.insert(2, ((-cand.x3, 0.0), PointClass.SEWING_INNER_TO_OUTER))
        out.append(((cand.x3, 0.0), PointClass.SEWING_OUTER_TO_INNER))
    return out


def _classify_at_point(
    sys: TwoCenterSystem, boundary: SeparationBoundary, pt: Point
) -> Optional[PointClass]:
    from .geometry import locate_on_boundary

    loc = locate_on_boundary(boundary, pt, tol=1e-6)
    if loc is None:
        return None
    idx, param = loc
    seg = boundary.loop_segments()[idx]
    try:
        return classify_boundary_point(sys, boundary, seg, param)
    except NearCorner:
        return None


def verify_candidate(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    cand: CandidateCycle,
    max_arcs: int = 64,
) -> VerifiedCycle | Rejection:
    """Certify one candidate by classification plus an exact trace."""
    predicted = _predicted_crossings(cand)
    for pt, expected in predicted:
        cls = _classify_at_point(sys, boundary, pt)
        if cls is not expected:
            got = cls.value if cls is not None else "unlocatable"
            return Rejection(cand, "non-sewing", f"{pt}: {got}")
    try:
        trace = trace_orbit(
            sys, boundary, cand.pair.right_point, Zone.OUTER, max_arcs=max_arcs
        )
    except (StartsOnNonSewingBoundary, ValueError) as exc:
        return Rejection(cand, "trace-error", str(exc))
    if trace.outcome is not TraceOutcome.CLOSED:
        return Rejection(cand, "trace-mismatch", f"outcome {trace.outcome.value}")
    expected_n = 2 if cand.kind == "two-arc" else 4
    if len(trace.arcs) != expected_n:
        reason = "extra-crossing" if len(trace.arcs) > expected_n else "trace-mismatch"
        return Rejection(cand, reason, f"{len(trace.arcs)} arcs")
    hits = [a.end_point for a in trace.arcs]
    want = [pt for pt, _ in predicted[1:]] + [predicted[0][0]]
    for got, exp in zip(hits, want):
        if math.hypot(got[0] - exp[0], got[1] - exp[1]) > MATCH_TOL:
            return Rejection(cand, "trace-mismatch", f"hit {got} expected {exp}")
    crossings = [(a.end_point, a.hit_class) for a in trace.arcs]
    return VerifiedCycle(cand.pair, cand, crossings, list(trace.arcs), trace)


def detect_all(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    max_arcs: int = 64,
) -> DetectionReport:
    """Pair scan, assembly, and verification over the whole boundary.

    Deterministic: candidates are processed in ascending (y*, x*) order
    and the report preserves that order.
    """
    pairs, bands = find_symmetric_pairs(boundary)
    verified: List[VerifiedCycle] = []
    rejected: List[Rejection] = []
    for pair in pairs:
        try:
            cand = assemble_candidate(sys, pair)
        except TangentAxis as exc:
            rejected.append(
                Rejection(
                    CandidateCycle(pair, first_integral(0.0, pair.right_point),
                                   first_integral(sys.a, pair.right_point),
                                   "tangent"),
                    "tangent-axis",
                    str(exc),
                )
            )
            continue
        result = verify_candidate(sys, boundary, cand, max_arcs=max_arcs)
        if isinstance(result, VerifiedCycle):
            verified.append(result)
        else:
            rejected.append(result)
    return DetectionReport(verified, rejected, bands)


# ---------------------------------------------------------------------------
# exclusion beyond the right anchor
# ---------------------------------------------------------------------------


@dataclass
class RayViolation:
    cycle_index: int
    point: Point


def _arc_axis_crossings(arc: ArcStep) -> List[Point]:
    cx, cy = arc.center
    if abs(cy) > arc.radius:
        return []
    dx = math.sqrt(arc.radius * arc.radius - cy * cy)
    pts = []
    for x in (cx - dx, cx + dx):
        ang = math.atan2(-cy, x - cx)
        k = math.ceil((arc.start_angle - ang) / (2 * math.pi))
        if arc.start_angle <= ang + 2 * math.pi * k <= arc.end_angle:
            pts.append((x, 0.0))
    return pts


def check_right_ray_exclusion(
    boundary_anchor: float, verified: Sequence[VerifiedCycle]
) -> Optional[RayViolation]:
    """None when no verified cycle meets {(x, 0) : x >= anchor}."""
    for i, cyc in enumerate(verified):
        for arc in cyc.arcs:
            for pt in _arc_axis_crossings(arc):
                if pt[0] >= boundary_anchor - 1e-12:
                    return RayViolation(i, pt)
    return None


def axis_ray_contradiction(a: float, f_value: float) -> float:
    """Residual forced by a hypothetical crossing beyond the anchor.

    If a periodic orbit crossed the open axis ray at (x1, 0) and the
    graph at (x2, f2), matching both integrals gives
    x1^2 = x2^2 + f2^2 and x1^2 + a^2 = x2^2 + (f2 - a)^2, whose
    difference is 2*a*f2 = 0.  With f2 > 0 this forces a = 0, so the
    returned residual 2*a*f2 is the margin by which a > 0 contradicts
    the crossing.
    """
    if f_value <= 0:
        raise ValueError("graph values are positive by construction")
    outer_gap = lambda x1sq, x2, f2: x1sq - (x2 * x2 + f2 * f2)
    inner_gap = lambda x1sq, x2, f2: (x1sq + a * a) - (x2 * x2 + (f2 - a) ** 2)
    # eliminate x1^2 between the two equations: the residual is exact
    x2 = 1.0  # arbitrary, cancels
    x1sq = x2 * x2 + f_value * f_value
    residual = inner_gap(x1sq, x2, f_value) - outer_gap(x1sq, x2, f_value)
    assert abs(residual - 2.0 * a * f_value) < 1e-12 * max(1.0, abs(residual))
    return residual


# ---------------------------------------------------------------------------
# return-map displacement and isolation
# ---------------------------------------------------------------------------


def poincare_displacement(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    seg_index: int,
    x: float,
    max_arcs: int = 64,
) -> float:
    """Return-map displacement along a graph piece.

    Starts at (x, f(x)), which must be a sewing point, follows the flow
    until the orbit re-crosses the same piece in the same direction, and
    returns (returning abscissa - x).  Raises :class:`NoReturnError`
    when the orbit dies at a non-sewing point or exhausts the budget.
    """
    seg = boundary.loop_segments()[seg_index]
    if isinstance(seg, VerticalSegment):
        raise ValueError("displacement is defined on graph pieces")
    try:
        cls = classify_boundary_point(sys, boundary, seg, x)
    except NearCorner as exc:
        raise NoReturnError(f"near-corner start: {exc}") from exc
    if not cls.is_sewing:
        raise NoReturnError(f"hit-non-sewing: start class {cls.value}")
    entering = Zone.OUTER if cls is PointClass.SEWING_INNER_TO_OUTER else Zone.INNER
    start = (float(x), float(seg.value(x)))
    from .flow import next_boundary_hit

    point, zone = start, entering
    for _ in range(max_arcs):
        arc = next_boundary_hit(sys, boundary, point, zone)
        if arc is None:
            raise NoReturnError("left-window")
        if not arc.hit_class.is_sewing:
            raise NoReturnError(f"hit-non-sewing: {arc.hit_class.value}")
        if arc.hit_segment == seg_index and arc.hit_class is cls:
            if isinstance(seg, VerticalSegment):  # pragma: no cover
                raise NoReturnError("vertical return")
            return arc.end_point[0] - start[0]
        zone = (
            Zone.OUTER
            if arc.hit_class is PointClass.SEWING_INNER_TO_OUTER
            else Zone.INNER
        )
        point = arc.end_point
    raise NoReturnError("budget")


def pair_probe_delta(boundary: SeparationBoundary, pairs: Sequence[SymmetricPair],
                     pair: SymmetricPair) -> float:
    """Probe radius: DELTA_ISO_FRAC of the local pair spacing bound."""
    spacing = pair.x_star
    for other in pairs:
        gap = abs(other.x_star - pair.x_star)
        if gap < 1e-9 and abs(other.y_star - pair.y_star) < 1e-9:
            continue  # the pair itself (possibly re-detected)
        if other.right_segment == pair.right_segment:
            spacing = min(spacing, gap)
    seg = boundary.loop_segments()[pair.right_segment]
    if not isinstance(seg, VerticalSegment):
        lo, hi = seg.domain
        spacing = min(spacing, pair.x_star - lo, hi - pair.x_star)
    return DELTA_ISO_FRAC * spacing


def isolation_report(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    cycle: VerifiedCycle,
    pairs: Sequence[SymmetricPair],
    threshold: float = 1e-6,
    tol_close: float = 1e-9,
    max_arcs: int = 64,
) -> IsolationReport:
    """Displacement samples at +/- delta and +/- 2 delta around the pair."""
    delta = pair_probe_delta(boundary, pairs, cycle.pair)
    x0 = cycle.pair.x_star
    seg_index = cycle.pair.right_segment
    samples: List[Tuple[float, float]] = []
    ok = True
    try:
        d0 = poincare_displacement(sys, boundary, seg_index, x0, max_arcs=max_arcs)
    except NoReturnError:
        d0 = math.nan
        ok = False
    for off in (-2 * delta, -delta, delta, 2 * delta):
        try:
            d = poincare_displacement(sys, boundary, seg_index, x0 + off,
                                      max_arcs=max_arcs)
            samples.append((off, d))
            if not abs(d) > threshold:
                ok = False
        except NoReturnError:
            samples.append((off, math.nan))
            ok = False
    if not (math.isfinite(d0) and abs(d0) < tol_close):
        ok = False
    return IsolationReport(
        pair_abscissa=x0,
        delta=delta,
        displacements=tuple(samples),
        center_displacement=d0,
        verdict="isolated" if ok else "inconclusive",
    )


# ---------------------------------------------------------------------------
# statistical completeness sweep
# ---------------------------------------------------------------------------


def completeness_sweep(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    n_starts: int,
    seed: int,
    iterations: int = 200,
    settle_tol: float = 1e-8,
) -> List[float]:
    """Iterated-return abscissas from random sewing starts.

    Random starts are drawn on the graph pieces; each is iterated under
    the return map until the displacement settles below ``settle_tol``
    or the orbit dies at a non-sewing point.  The returned abscissas are
    where orbits converged; callers check that each lies near some
    detected pair (no cycle family escapes the pair mechanism).
    """
    import random as _random

    rng = _random.Random(seed)
    graphs = boundary.graph_segments()
    found: List[float] = []
    for _ in range(n_starts):
        idx, seg = graphs[rng.randrange(len(graphs))]
        lo, hi = seg.domain
        x = lo + (hi - lo) * rng.random()
        if x <= 0:
            continue
        x_prev = d_prev = None
        for _ in range(iterations):
            try:
                d = poincare_displacement(sys, boundary, idx, x, max_arcs=8)
            except (NoReturnError, ValueError):
                break
            if abs(d) < settle_tol:
                found.append(x)
                break
            # secant acceleration of the slowly contracting return map
            step = d
            if d_prev is not None and d != d_prev:
                secant = -d * (x - x_prev) / (d - d_prev)
                if abs(secant) < 64.0 * abs(d):
                    step = secant
            x_prev, d_prev = x, d
            x = x + step
            if not (lo < x < hi):
                break
    return found
