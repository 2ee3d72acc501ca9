"""Constructive realization of a nesting forest by a two-zone field.

The separation curve is a serpentine "tooth stack": sine caps stacked
about the symmetry axis, joined by vertical walls and gently tilted
shelves, entered from the right along a low channel that ramps down to
the axis anchor and closed on the left by a truncation wall.  Each cap
whose odd part has m positive roots carries m nested crossing cycles;
stacked caps carry coordinated families; an optional low envelope pair
(one root between the left channel graph and the right ramp) carries a
cycle surrounding the whole stack.  A cap hosting a sub-configuration
is cut open around the symmetry axis and a scaled copy of the stack is
grafted into the window, which places the grafted cycles strictly
between the host cycle's two arcs.

All free constants are chosen from explicit first-order sufficient
bounds (slope bounds for sewing, sagitta bounds for clearance) scaled
by a safety factor; a verify-and-shrink loop certifies the emitted
geometry and halves the safety factor on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

from .detect import (
    DetectionReport,
    check_right_ray_exclusion,
    detect_all,
    find_symmetric_pairs,
)
from .forest import ConfigForest, ForestNode, canonical_code, parse_forest
from .geometry import (
    AxisSegment,
    LineGraph,
    Point,
    SeparationBoundary,
    Segment,
    SineGraph,
    VerticalSegment,
    Zone,
    check_continuity,
    check_simple,
    classify_zone,
)
from .system import TwoCenterSystem
from .verify import MatchReport, verify_realization


class ContinuityBug(AssertionError):
    pass


class BuildFailed(RuntimeError):
    def __init__(self, message: str, report: Optional["MarginReport"] = None) -> None:
        super().__init__(message)
        self.report = report


class UnknownName(KeyError):
    pass


@dataclass
class BuildParams:
    safety: float = 0.5
    max_shrink: int = 40
    tooth_spacing: float = 2.0
    x_unit_top: float = 0.5
    envelope_height: float = 1.0 / 16.0   # pair ordinate on the ramp
    channel_height: float = 1.0 / 8.0     # right channel plateau
    suppressed_left_height: float = 1.0 / 4.0
    shelf_tilt: float = 0.02
    anchor_min: float = 7.0
    seed: int = 0  # reserved; the layout itself is deterministic


@dataclass
class PlanTooth:
    """One cap in a stack: m nested roots plus an optional grafted window."""

    m: int
    x_unit: float
    c: float
    amplitude: float
    omega: float
    dom_left: float
    dom_right: float
    window: Optional["PlanWindow"] = None
    depth: int = 0

    @property
    def roots(self) -> Tuple[float, ...]:
        return tuple(q * self.x_unit for q in range(1, self.m + 1))

    def cap_value(self, x: float) -> float:
        return self.amplitude * math.sin(self.omega * x) + self.c


@dataclass
class PlanWindow:
    """A scaled stack grafted into a cap cut at abscissae +/- u."""

    u: float
    teeth: List[PlanTooth]
    shelf_heights: List[float]
    shelf_slope: float
    band_lo: float
    band_hi: float


@dataclass
class PlanEnvelope:
    active: bool
    pair_x: float = 0.0       # root abscissa on the ramp (active only)
    height: float = 0.0       # pair ordinate
    amplitude: float = 0.0
    omega: float = 0.0
    channel: float = 0.0      # right plateau height
    left_height: float = 0.0  # left channel height (suppressed only)


@dataclass
class RealizationPlan:
    target: ConfigForest
    teeth: List[PlanTooth]            # bottom to top
    shelf_heights: List[float]
    shelf_slope: float
    envelope: PlanEnvelope
    a: float
    x_anchor: float
    x_rise: float
    x_left: float
    ramp_width: float
    lid_height: float = 0.0  # only used when there are no teeth
    safety: float = 0.5

    def planned_cycles(self) -> List[Tuple[float, float]]:
        """(x*, y*) of every intended crossing pair, envelope included."""
        out: List[Tuple[float, float]] = []

        def walk(teeth: Sequence[PlanTooth]) -> None:
            for t in teeth:
                for r in t.roots:
                    out.append((r, t.c))
                if t.window is not None:
                    walk(t.window.teeth)

        walk(self.teeth)
        if self.envelope.active:
            out.append((self.envelope.pair_x, self.envelope.height))
        return sorted(out, key=lambda p: (p[1], p[0]))


@dataclass
class Realization:
    boundary: SeparationBoundary
    system: TwoCenterSystem
    plan: RealizationPlan
    target: ConfigForest
    detection: DetectionReport
    report: MatchReport


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------


def _spine(node: ForestNode, cap: int = 4) -> Tuple[int, List[ForestNode]]:
    """Compress the maximal unary prefix chain (length <= cap).

    Returns (m, remainder-children): the chain node_1 -> ... -> node_m of
    single-child links collapses onto one cap with m roots; the children
    of node_m (if any) are grafted into the innermost root's window.
    """
    m = 1
    cur = node
    while m < cap and len(cur.children) == 1:
        cur = cur.children[0]
        m += 1
    return m, list(cur.children)


def _sorted_children(children: Sequence[ForestNode]) -> List[ForestNode]:
    def key(n: ForestNode) -> Tuple[int, str]:
        return (n.node_count(), _code_of(n))

    return sorted(children, key=key)


def _code_of(node: ForestNode) -> str:
    return canonical_code(ConfigForest([node]))


def _amplitude_bounds(x1: float, c: float, a: float, omega: float,
                      safety: float) -> float:
    """First-order sufficient amplitude: sewing slope bound at the
    innermost root plus sagitta clearance of the innermost arcs."""
    slope_cap = safety * min(x1 / c, x1 / abs(a - c)) / omega
    arch = safety * x1 * x1 / (2.0 * c)
    chan = safety * x1 * x1 / (2.0 * abs(a - c))
    return min(slope_cap, arch, chan)


def _layout_tooth(node: ForestNode, c: float, a: float, headroom_up: float,
                  headroom_down: float, x_cap: float, params: BuildParams,
                  depth: int, slot_h: Optional[float]) -> PlanTooth:
    theta = params.safety
    m, remainder = _spine(node)
    # keep the outermost arch inside the vertical headroom
    arch_room = math.sqrt(max((c + 0.8 * headroom_up) ** 2 - c * c, 1e-30))
    dip_room = math.sqrt(
        max((abs(a - c) + 0.8 * headroom_down) ** 2 - (a - c) ** 2, 1e-30)
    )
    x_unit = min(x_cap, 0.9 * arch_room / m, 0.9 * dip_room / m)
    if slot_h is not None:
        x_unit = min(
            x_unit,
            math.sqrt(0.5 * slot_h * c) / m,
            math.sqrt(0.5 * slot_h * abs(a - c)) / m,
        )
    omega = math.pi / x_unit
    amp = _amplitude_bounds(x_unit, c, a, omega, theta)
    if slot_h is not None:
        amp = min(amp, 0.15 * slot_h)
    tooth = PlanTooth(
        m=m,
        x_unit=x_unit,
        c=c,
        amplitude=amp,
        omega=omega,
        dom_left=-(m + 0.5) * x_unit,
        dom_right=(m + 0.6) * x_unit,
        depth=depth,
    )
    if remainder:
        tooth.window = _layout_window(tooth, _sorted_children(remainder), a,
                                      params, depth + 1)
    return tooth


def _layout_window(parent: PlanTooth, children: List[ForestNode], a: float,
                   params: BuildParams, depth: int) -> PlanWindow:
    theta = params.safety
    scale = theta / 0.5
    j = len(children)
    c, amp = parent.c, parent.amplitude
    if j == 1:
        # the single grafted cap spans the whole window [-u, u]; the cut
        # height and the window width are coupled, so fixed-point iterate
        m1, _ = _spine(children[0])
        u = 0.45 * parent.x_unit
        for _ in range(4):
            cut = amp * math.sin(parent.omega * u)
            h_avail = 1.7 * cut
            x_v = min(
                math.sqrt(0.5 * h_avail * c),
                math.sqrt(0.5 * h_avail * abs(a - c)),
            ) / m1
            u = min((m1 + 0.5) * x_v * scale, 0.45 * parent.x_unit)
    else:
        u = 0.5 * parent.x_unit
    cut = amp * math.sin(parent.omega * u)
    mu = 0.15 * cut
    band_lo = c - cut + mu
    band_hi = c + cut - mu
    h = band_hi - band_lo
    h_slot = h / j
    shelf_heights = [band_lo + p * h_slot for p in range(1, j)]
    shelf_slope = -0.05 * h_slot / u
    teeth: List[PlanTooth] = []
    for p, child in enumerate(children, start=1):
        c_child = band_lo + (p - 0.5) * h_slot
        m_child, _ = _spine(child)
        if j == 1:
            x_cap = u / (m_child + 0.5)
        else:
            x_cap = 0.85 * u / (m_child + 1) * scale
        tooth = _layout_tooth(
            child, c_child, a,
            headroom_up=0.5 * h_slot,
            headroom_down=0.5 * h_slot,
            x_cap=x_cap,
            params=params,
            depth=depth,
            slot_h=h_slot,
        )
        if j == 1:
            tooth.x_unit = u / (tooth.m + 0.5)
            tooth.omega = math.pi / tooth.x_unit
            tooth.amplitude = min(
                _amplitude_bounds(tooth.x_unit, tooth.c, a, tooth.omega, theta),
                0.15 * h_slot,
            )
            tooth.dom_left = -u
            tooth.dom_right = u
        else:
            if p == 1:
                tooth.dom_left = -u
            if p == j:
                tooth.dom_right = u
        teeth.append(tooth)
    return PlanWindow(u, teeth, shelf_heights, shelf_slope, band_lo, band_hi)


def plan_layout(forest: ConfigForest, params: Optional[BuildParams] = None) -> RealizationPlan:
    """Assign geometry slots to every forest node.

    A single root with children becomes the envelope cycle surrounding a
    stack of its children; any other forest (empty, one childless root,
    or several roots) suppresses the envelope and puts the roots on the
    stack directly.
    """
    params = params or BuildParams()
    roots = _sorted_children(forest.roots)
    envelope_active = len(roots) == 1 and bool(roots[0].children)
    if envelope_active:
        stack_nodes = _sorted_children(roots[0].children)
    else:
        stack_nodes = roots
    k = len(stack_nodes)
    spacing = params.tooth_spacing
    heights = [spacing * i - 1.0 for i in range(1, k + 1)]
    a = (heights[-1] if heights else 1.0) + spacing
    teeth: List[PlanTooth] = []
    for i, node in enumerate(stack_nodes):
        c = heights[i]
        up = spacing / 2 if i + 1 < k else spacing
        down = spacing / 2 if i > 0 else max(c - 2.5 * params.channel_height, 0.3)
        teeth.append(
            _layout_tooth(node, c, a, up, down, params.x_unit_top, params, 0, None)
        )
    shelf_heights = [spacing * i for i in range(1, k)]
    walls = [abs(t.dom_left) for t in teeth] + [t.dom_right for t in teeth]
    x_rise = -(max(walls, default=1.0) + 0.5)
    if teeth:
        teeth[-1].dom_left = x_rise  # top cap spans the rise wall
    x_anchor = max(params.anchor_min, 2.0 * a - 2.0, -x_rise + 3.0)
    envelope = PlanEnvelope(active=envelope_active)
    envelope.channel = params.channel_height
    if envelope_active:
        envelope.pair_x = x_anchor - 0.5
        envelope.height = params.envelope_height
        envelope.amplitude = params.envelope_height / 2.0
        envelope.omega = math.pi
    else:
        envelope.left_height = params.suppressed_left_height
    # truncation beyond the largest intended arc radius
    h_max = 0.0
    plan = RealizationPlan(
        target=forest,
        teeth=teeth,
        shelf_heights=shelf_heights,
        shelf_slope=-params.shelf_tilt,
        envelope=envelope,
        a=a,
        x_anchor=x_anchor,
        x_rise=x_rise,
        x_left=0.0,
        ramp_width=1.0,
        lid_height=1.0,
        safety=params.safety,
    )
    for x, y in plan.planned_cycles():
        h_max = max(h_max, x * x + y * y, x * x + (y - a) ** 2)
    plan.x_left = -(math.ceil(math.sqrt(h_max) if h_max > 0 else 2.0) + 2.0)
    plan.x_left = min(plan.x_left, x_rise - 2.0)
    return plan


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


class _ChainWriter:
    """Appends pieces right-to-left, asserting endpoint continuity."""

    def __init__(self, start: Point) -> None:
        self.segments: List[Segment] = []
        self.cursor = start

    def _check(self, pt: Point) -> None:
        if math.hypot(pt[0] - self.cursor[0], pt[1] - self.cursor[1]) > 1e-9:
            raise ContinuityBug(f"chain gap at {self.cursor} -> {pt}")

    def vertical(self, x: float, y_to: float) -> None:
        self._check((x, self.cursor[1]))
        if abs(y_to - self.cursor[1]) < 1e-15:
            return
        self.segments.append(VerticalSegment(x, self.cursor[1], y_to))
        self.cursor = (x, y_to)

    def graph(self, seg: Segment, x_to: float) -> None:
        y_here = float(seg.value(self.cursor[0]))
        self._check((self.cursor[0], y_here))
        self.segments.append(seg)
        self.cursor = (x_to, float(seg.value(x_to)))


def _emit_cap(writer: _ChainWriter, tooth: PlanTooth, shelves_slope: float) -> None:
    """Cap pieces walking right-to-left, grafting the window if present."""
    cap = lambda x0, x1: SineGraph(
        tooth.amplitude, tooth.omega, 0.0, tooth.c, x0, x1
    )
    if tooth.window is None:
        writer.graph(cap(tooth.dom_left, tooth.dom_right), tooth.dom_left)
        return
    win = tooth.window
    u = win.u
    writer.graph(cap(u, tooth.dom_right), u)
    _emit_window(writer, tooth, win)
    writer.graph(cap(tooth.dom_left, -u), tooth.dom_left)


def _emit_window(writer: _ChainWriter, parent: PlanTooth, win: PlanWindow) -> None:
    u = win.u
    teeth = win.teeth
    j = len(teeth)
    shelf_line = lambda height: LineGraph(
        win.shelf_slope, height, min(-abs(t.dom_left) for t in teeth), u
    )
    # descend from the right cut end onto the top grafted cap
    top = teeth[-1]
    writer.vertical(u, top.cap_value(u))
    _emit_cap(writer, top, win.shelf_slope)
    for p in range(j - 2, -1, -1):
        below = teeth[p]
        above = teeth[p + 1]
        height = win.shelf_heights[p]
        shelf = LineGraph(win.shelf_slope, height, above.dom_left, below.dom_right)
        writer.vertical(above.dom_left, float(shelf.value(above.dom_left)))
        writer.graph(shelf, below.dom_right)
        writer.vertical(below.dom_right, below.cap_value(below.dom_right))
        _emit_cap(writer, below, win.shelf_slope)
    writer.vertical(-u, parent.cap_value(-u))


def emit_realization(plan: RealizationPlan) -> Tuple[SeparationBoundary, TwoCenterSystem]:
    """Materialize the plan as a boundary chain plus the field."""
    env = plan.envelope
    xq = plan.x_anchor
    writer = _ChainWriter((xq, 0.0))
    ramp = LineGraph(-env.channel / plan.ramp_width,
                     env.channel * xq / plan.ramp_width,
                     xq - plan.ramp_width, xq)
    writer.graph(ramp, xq - plan.ramp_width)
    if plan.teeth:
        first = plan.teeth[0]
        plateau = LineGraph(0.0, env.channel, first.dom_right, xq - plan.ramp_width)
        writer.graph(plateau, first.dom_right)
        writer.vertical(first.dom_right, first.cap_value(first.dom_right))
        _emit_cap(writer, first, plan.shelf_slope)
        for i in range(1, len(plan.teeth)):
            below, above = plan.teeth[i - 1], plan.teeth[i]
            shelf = LineGraph(plan.shelf_slope, plan.shelf_heights[i - 1],
                              below.dom_left, above.dom_right)
            writer.vertical(below.dom_left, float(shelf.value(below.dom_left)))
            writer.graph(shelf, above.dom_right)
            writer.vertical(above.dom_right, above.cap_value(above.dom_right))
            _emit_cap(writer, above, plan.shelf_slope)
        if abs(plan.teeth[-1].dom_left - plan.x_rise) > 1e-12:
            raise ContinuityBug("top cap must reach the rise wall")
    else:
        lid = LineGraph(plan.shelf_slope, plan.lid_height, plan.x_rise, 1.0)
        plateau = LineGraph(0.0, env.channel, 1.0, xq - plan.ramp_width)
        writer.graph(plateau, 1.0)
        writer.vertical(1.0, float(lid.value(1.0)))
        writer.graph(lid, plan.x_rise)
    # descend the left side onto the left channel graph
    if env.active:
        g_left = SineGraph(env.amplitude, env.omega, env.omega * env.pair_x,
                           env.height, plan.x_left, plan.x_rise)
    else:
        g_left = LineGraph(0.0, env.left_height, plan.x_left, plan.x_rise)
    writer.vertical(plan.x_rise, float(g_left.value(plan.x_rise)))
    writer.graph(g_left, plan.x_left)
    closure = VerticalSegment(plan.x_left, float(g_left.value(plan.x_left)), 0.0)
    segments: Tuple[Segment, ...] = (
        AxisSegment(plan.x_left, xq),
        *writer.segments,
    )
    boundary = SeparationBoundary(segments, closure, xq, plan.x_left)
    if not check_continuity(boundary):
        raise ContinuityBug("emitted chain is not continuous")
    return boundary, TwoCenterSystem(plan.a)


# ---------------------------------------------------------------------------
# margins
# ---------------------------------------------------------------------------


@dataclass
class MarginRecord:
    label: str
    value: float
    threshold: float
    ok: bool


@dataclass
class MarginReport:
    records: List[MarginRecord] = field(default_factory=list)

    def add(self, label: str, value: float, threshold: float) -> None:
        self.records.append(MarginRecord(label, value, threshold, value >= threshold))

    def add_flag(self, label: str, ok: bool) -> None:
        self.records.append(MarginRecord(label, 1.0 if ok else 0.0, 1.0, ok))

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def format(self) -> str:
        lines = []
        for r in self.records:
            lines.append(
                f"{'PASS' if r.ok else 'FAIL'} {r.label} value={r.value:.6e} "
                f"threshold={r.threshold:.6e}"
            )
        return "\n".join(lines) + "\n"


def _ccw_to(t0: float, t1: float) -> float:
    while t1 < t0:
        t1 += 2 * math.pi
    return t1


def _planned_arcs(plan: RealizationPlan) -> List[Tuple[Point, float, float, float, str]]:
    """(center, radius, angle0, angle1, tag) spans of every intended arc."""
    arcs = []
    a = plan.a
    for x, y in plan.planned_cycles():
        ho = x * x + y * y
        hi = x * x + (y - a) ** 2
        ro, ri = math.sqrt(ho), math.sqrt(hi)
        th = math.atan2(y, x)
        tag = f"({x:.6g},{y:.6g})"
        arcs.append(((0.0, 0.0), ro, th, math.pi - th, "arch" + tag))
        gap = hi - a * a
        if gap <= 0:
            t0 = math.atan2(y - a, -x)
            arcs.append(((0.0, a), ri, t0, _ccw_to(t0, math.atan2(y - a, x)),
                         "channel" + tag))
        else:
            x3 = math.sqrt(gap)
            tl0 = math.atan2(y - a, -x)
            arcs.append(((0.0, a), ri, tl0, _ccw_to(tl0, math.atan2(-a, -x3)),
                         "dive" + tag))
            arcs.append(((0.0, 0.0), x3, math.pi, 2 * math.pi, "subaxis" + tag))
            tr0 = math.atan2(-a, x3)
            arcs.append(((0.0, a), ri, tr0, _ccw_to(tr0, math.atan2(y - a, x)),
                         "rise" + tag))
    return arcs


def _arc_interior_crossings(center: Point, radius: float, t0: float, t1: float,
                            segs: Sequence[Segment]) -> int:
    """Exact count of boundary crossings strictly inside the arc span.

    The arc's own endpoints are crossings by construction; an angular
    margin around 0 and the span excludes them.
    """
    from .flow import _segment_candidates

    span = t1 - t0
    margin = max(1e-9, 1e-5 * span)
    hits = 0
    for seg in segs:
        for delta, _ in _segment_candidates(center, radius, t0, seg, 4096):
            if margin < delta < span - margin:
                hits += 1
    return hits


def check_margins(plan: RealizationPlan,
                  system: Optional[TwoCenterSystem] = None) -> MarginReport:
    """Institutional margins S1..S5 on the emitted geometry.

    S1 root counts per cap, S2 sewing margins at every intended
    crossing, S3 arc clearance against non-crossed pieces, S4 loop
    simplicity and continuity, S5 virtual-center condition.
    """
    report = MarginReport()
    try:
        boundary, sys_ = emit_realization(plan)
    except ContinuityBug as exc:
        report.add_flag(f"S4 continuity ({exc})", False)
        return report
    if system is not None:
        sys_ = system
    pairs, bands = find_symmetric_pairs(boundary)
    planned = plan.planned_cycles()
    found = [(p.x_star, p.y_star) for p in pairs]
    remaining = list(found)
    match = len(found) == len(planned)
    if match:
        for ex, ey in planned:
            hit = next(
                (
                    i
                    for i, (fx, fy) in enumerate(remaining)
                    if abs(fx - ex) < 1e-7 and abs(fy - ey) < 1e-7
                ),
                None,
            )
            if hit is None:
                match = False
                break
            remaining.pop(hit)
    report.add_flag(
        f"S1 pair-set ({len(found)} found / {len(planned)} planned)", match
    )

    from .system import normal_components

    eps_sew = 1e-7
    for pair in pairs:
        for idx, x in ((pair.right_segment, pair.x_star),
                       (pair.left_segment, -pair.x_star)):
            seg = boundary.loop_segments()[idx]
            try:
                _, _, di, do = normal_components(sys_, boundary, seg, x)
            except Exception:
                report.add_flag(f"S2 sewing at x={x:.6g}", False)
                continue
            margin = min(abs(di), abs(do)) if di * do > 0 else -min(abs(di), abs(do))
            report.add(f"S2 sewing margin x={x:.6g} y={pair.y_star:.6g}", margin, eps_sew)

    segs = boundary.loop_segments()
    for center, radius, t0, t1, tag in _planned_arcs(plan):
        hits = _arc_interior_crossings(center, radius, t0, t1, segs)
        report.add_flag(f"S3 {tag} r={radius:.6g} interior-crossing-free", hits == 0)
    violation = check_simple(boundary)
    report.add_flag("S4 simple", violation is None)
    report.add_flag("S4 continuity", check_continuity(boundary))
    inner_center_zone = classify_zone(boundary, (0.0, plan.a))
    outer_center_zone = classify_zone(boundary, (0.0, 0.0))
    report.add_flag(
        "S5 inner center non-interior",
        inner_center_zone in (Zone.OUTER, Zone.BOUNDARY),
    )
    report.add_flag(
        "S5 outer center non-interior",
        outer_center_zone in (Zone.INNER, Zone.BOUNDARY),
    )
    return report


# ---------------------------------------------------------------------------
# build loop
# ---------------------------------------------------------------------------


def build(forest: ConfigForest, params: Optional[BuildParams] = None) -> Realization:
    """Plan, emit, detect, verify; halve the safety factor on failure."""
    params = params or BuildParams()
    last_report: Optional[MarginReport] = None
    theta = params.safety
    for _ in range(max(1, params.max_shrink)):
        p = replace(params, safety=theta)
        plan = plan_layout(forest, p)
        margins = check_margins(plan)
        last_report = margins
        if margins.ok:
            boundary, system = emit_realization(plan)
            detection = detect_all(system, boundary)
            report = verify_realization(system, boundary, detection, forest)
            if report.match:
                return Realization(boundary, system, plan, forest, detection, report)
        theta *= 0.5
    raise BuildFailed(
        f"no passing layout after {params.max_shrink} shrink rounds", last_report
    )


def build_text(text: str, params: Optional[BuildParams] = None) -> Realization:
    return build(parse_forest(text), params)


# ---------------------------------------------------------------------------
# bundled reference instances (exact published constants)
# ---------------------------------------------------------------------------


def _instance_single_cap(amplitude: float, a: float) -> Tuple[SeparationBoundary, TwoCenterSystem]:
    """Single sine cap with unequal plateau continuations, truncated and
    anchored; the classic one-cycle configuration."""
    left_h = 1.0 + amplitude   # value of the cap at -3/2, continued left
    right_h = 1.0 - amplitude  # value at +3/2, continued right
    xq = 7.0
    h_max = max(2.0, 1.0 + (1.0 + amplitude - a) ** 2 + 1.0)
    x_left = -(math.ceil(math.sqrt(1.0 + (1.0 + amplitude) ** 2)) + 2.0)
    segments: Tuple[Segment, ...] = (
        AxisSegment(x_left, xq),
        VerticalSegment(xq, 0.0, right_h),
        LineGraph(0.0, right_h, 1.5, xq),
        SineGraph(amplitude, math.pi, 0.0, 1.0, -1.5, 1.5),
        LineGraph(0.0, left_h, x_left, -1.5),
    )
    closure = VerticalSegment(x_left, left_h, 0.0)
    return (
        SeparationBoundary(segments, closure, xq, x_left),
        TwoCenterSystem(a),
    )


def _keycurve_segments(f1: SineGraph, f2: SineGraph) -> Tuple[SeparationBoundary, TwoCenterSystem]:
    """Three-tooth stack with the published constants; ``f1``/``f2`` are
    the two lower caps (the corollary variant swaps in faster caps)."""
    x_left = -11.0
    xq = 7.0
    f3 = SineGraph(0.25, 1.5 * math.pi, 0.0, 5.0, -1.0, 1.0)
    g1 = SineGraph(1.0 / 32.0, math.pi, math.pi * 6.5, 1.0 / 16.0, x_left, -1.0)
    segments: Tuple[Segment, ...] = (
        AxisSegment(x_left, xq),
        LineGraph(-0.125, 0.875, 6.0, 7.0),          # ramp to the anchor
        LineGraph(0.0, 0.125, 1.0, 6.0),             # right channel
        VerticalSegment(1.0, 0.125, float(f1.value(1.0))),
        f1,
        VerticalSegment(-0.75, float(f1.value(-0.75)), 2.0),
        LineGraph(0.0, 2.0, -0.75, 1.0),
        VerticalSegment(1.0, 2.0, float(f2.value(1.0))),
        f2,
        VerticalSegment(-0.75, float(f2.value(-0.75)), 4.0),
        LineGraph(0.0, 4.0, -0.75, 1.0),
        VerticalSegment(1.0, 4.0, float(f3.value(1.0))),
        f3,
        VerticalSegment(-1.0, float(f3.value(-1.0)), float(g1.value(-1.0))),
        g1,
    )
    closure = VerticalSegment(x_left, float(g1.value(x_left)), 0.0)
    return (
        SeparationBoundary(segments, closure, xq, x_left),
        TwoCenterSystem(5.0),
    )


def _instance_substitution() -> Tuple[SeparationBoundary, TwoCenterSystem]:
    """Three-tooth stack whose first tooth is cut open and grafted with a
    two-cap micro stack (published constants)."""
    x_left = -11.0
    xq = 7.0
    h2 = SineGraph(0.25, 2 * math.pi, 0.0, 1.0, 1.0 / 16.0, 1.0)
    h1 = SineGraph(0.25, 2 * math.pi, 0.0, 1.0, -0.75, -1.0 / 16.0)
    f11 = SineGraph(1.0 / 192.0, 32 * math.pi, 0.0, 97.0 / 96.0, -1.0 / 16.0, 1.0 / 16.0)
    f12 = SineGraph(1.0 / 192.0, 32 * math.pi, 0.0, 99.0 / 96.0, -3.0 / 64.0, 1.0 / 16.0)
    dshelf = LineGraph(0.0, 98.0 / 96.0, -3.0 / 64.0, 1.0 / 16.0)
    f2 = SineGraph(0.25, 2 * math.pi, 0.0, 3.0, -0.75, 1.0)
    f3 = SineGraph(0.25, 1.5 * math.pi, 0.0, 5.0, -1.0, 1.0)
    g1 = SineGraph(1.0 / 32.0, math.pi, math.pi * 6.5, 1.0 / 16.0, x_left, -1.0)
    segments: Tuple[Segment, ...] = (
        AxisSegment(x_left, xq),
        LineGraph(-0.125, 0.875, 6.0, 7.0),
        LineGraph(0.0, 0.125, 1.0, 6.0),
        VerticalSegment(1.0, 0.125, float(h2.value(1.0))),
        h2,
        VerticalSegment(1.0 / 16.0, float(h2.value(1.0 / 16.0)), 99.0 / 96.0),
        f12,
        VerticalSegment(-3.0 / 64.0, float(f12.value(-3.0 / 64.0)), 98.0 / 96.0),
        dshelf,
        VerticalSegment(1.0 / 16.0, 98.0 / 96.0, 97.0 / 96.0),
        f11,
        VerticalSegment(-1.0 / 16.0, 97.0 / 96.0, float(h1.value(-1.0 / 16.0))),
        h1,
        VerticalSegment(-0.75, float(h1.value(-0.75)), 2.0),
        LineGraph(0.0, 2.0, -0.75, 1.0),
        VerticalSegment(1.0, 2.0, float(f2.value(1.0))),
        f2,
        VerticalSegment(-0.75, float(f2.value(-0.75)), 4.0),
        LineGraph(0.0, 4.0, -0.75, 1.0),
        VerticalSegment(1.0, 4.0, float(f3.value(1.0))),
        f3,
        VerticalSegment(-1.0, float(f3.value(-1.0)), float(g1.value(-1.0))),
        g1,
    )
    closure = VerticalSegment(x_left, float(g1.value(x_left)), 0.0)
    return (
        SeparationBoundary(segments, closure, xq, x_left),
        TwoCenterSystem(5.0),
    )


REFERENCE_NAMES = (
    "example-2.1",
    "corrected-2.1",
    "keycurve-3",
    "corollary-chains",
    "substitution",
)


def reference_instance(name: str) -> Tuple[SeparationBoundary, TwoCenterSystem]:
    """Bundled instances with exact published constants, bit-reproducible.

    ``example-2.1``      single cap, amplitude 1/2, a = 2
    ``corrected-2.1``    the same shape with amplitude 1/16 (valid sewing)
    ``keycurve-3``       three-tooth stack, a = 5, anchor (7, 0)
    ``corollary-chains`` the stack with tripled-frequency lower caps
    ``substitution``     first tooth grafted with a two-cap micro stack
    """
    if name == "example-2.1":
        return _instance_single_cap(0.5, 2.0)
    if name == "corrected-2.1":
        return _instance_single_cap(1.0 / 16.0, 2.0)
    if name == "keycurve-3":
        return _keycurve_segments(
            SineGraph(0.25, 2 * math.pi, 0.0, 1.0, -0.75, 1.0),
            SineGraph(0.25, 2 * math.pi, 0.0, 3.0, -0.75, 1.0),
        )
    if name == "corollary-chains":
        return _keycurve_segments(
            SineGraph(0.25, 3 * math.pi, 0.0, 1.0, -0.75, 1.0),
            SineGraph(0.25, 3 * math.pi, 0.0, 3.0, -0.75, 1.0),
        )
    if name == "substitution":
        return _instance_substitution()
    raise UnknownName(name)
