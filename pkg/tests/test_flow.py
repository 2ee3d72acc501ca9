import math

import pytest

from twozone.builder import reference_instance
from twozone.flow import (
    DegenerateRadius,
    StartsOnNonSewingBoundary,
    TraceOutcome,
    next_boundary_hit,
    trace_orbit,
)
from twozone.geometry import Zone
from twozone.system import first_integral


def test_next_hit_outer_arc():
    boundary, system = reference_instance("corrected-2.1")
    arc = next_boundary_hit(system, boundary, (1.0, 1.0), Zone.OUTER)
    assert arc is not None
    assert arc.center == (0.0, 0.0)
    assert arc.radius == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert arc.end_point[0] == pytest.approx(-1.0, abs=1e-9)
    assert arc.end_point[1] == pytest.approx(1.0, abs=1e-9)


def test_next_hit_inner_arc():
    boundary, system = reference_instance("corrected-2.1")
    arc = next_boundary_hit(system, boundary, (-1.0, 1.0), Zone.INNER)
    assert arc is not None
    assert arc.center == (0.0, 2.0)
    assert arc.radius == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert arc.end_point[0] == pytest.approx(1.0, abs=1e-9)
    assert arc.end_point[1] == pytest.approx(1.0, abs=1e-9)


def test_start_on_sliding_stretch_rejected():
    # published single-cap constants: the descending flank slides
    boundary, system = reference_instance("example-2.1")
    cap = boundary.segments[3]
    start = (0.75, float(cap.value(0.75)))
    with pytest.raises(StartsOnNonSewingBoundary):
        trace_orbit(system, boundary, start, Zone.OUTER)


def test_degenerate_radius():
    boundary, system = reference_instance("corrected-2.1")
    with pytest.raises(DegenerateRadius):
        next_boundary_hit(system, boundary, (0.0, 0.0), Zone.OUTER)


def test_two_arc_closure():
    boundary, system = reference_instance("corrected-2.1")
    trace = trace_orbit(system, boundary, (1.0, 1.0), Zone.OUTER)
    assert trace.outcome is TraceOutcome.CLOSED
    assert len(trace.arcs) == 2
    end = trace.arcs[-1].end_point
    assert math.hypot(end[0] - 1.0, end[1] - 1.0) < 1e-9


def test_budget_outcome():
    boundary, system = reference_instance("corrected-2.1")
    trace = trace_orbit(system, boundary, (1.0, 1.0), Zone.OUTER, max_arcs=1)
    assert trace.outcome is TraceOutcome.BUDGET


def test_four_arc_envelope_trace():
    boundary, system = reference_instance("keycurve-3")
    trace = trace_orbit(system, boundary, (6.5, 0.0625), Zone.OUTER)
    assert trace.outcome is TraceOutcome.CLOSED
    assert len(trace.arcs) == 4
    x3 = math.sqrt(66.62890625 - 25.0)
    assert trace.arcs[1].end_point[0] == pytest.approx(-x3, abs=1e-6)
    assert trace.arcs[2].end_point[0] == pytest.approx(x3, abs=1e-6)
    zones = [a.zone for a in trace.arcs]
    assert zones == [Zone.OUTER, Zone.INNER, Zone.OUTER, Zone.INNER]


def test_zone_alternation_and_integral_consistency():
    boundary, system = reference_instance("keycurve-3")
    trace = trace_orbit(system, boundary, (6.5, 0.0625), Zone.OUTER)
    inner_h = [
        first_integral(system.a, a.start_point)
        for a in trace.arcs
        if a.zone is Zone.INNER
    ]
    assert max(inner_h) - min(inner_h) < 1e-12 * max(inner_h)
    # each arc conserves its own integral exactly (stored center+radius)
    for a in trace.arcs:
        c = system.zone_center(a.zone)
        h0 = first_integral(c[1], a.start_point)
        h1 = first_integral(c[1], a.end_point)
        assert abs(h0 - a.radius**2) < 1e-9
        assert abs(h1 - a.radius**2) < 1e-9
    # four-arc outer integrals differ by exactly 2 a y* (the two outer
    # arcs are not concentric copies; the identity pins their gap)
    outer_h = [a.radius**2 for a in trace.arcs if a.zone is Zone.OUTER]
    gap = outer_h[0] - outer_h[1]
    assert gap == pytest.approx(2 * system.a * 0.0625, rel=1e-9)


def test_mirror_symmetry_of_closed_trace():
    """Reflecting a closed trace across the symmetry axis maps its arc
    set onto itself with reversed orientation."""
    boundary, system = reference_instance("corrected-2.1")
    trace = trace_orbit(system, boundary, (1.0, 1.0), Zone.OUTER)
    arcs = trace.arcs
    for arc in arcs:
        # mirrored arc: same center (both centers sit on the axis), same
        # radius, angles mapped t -> pi - t with endpoints swapped
        mirrored_start = (-arc.end_point[0], arc.end_point[1])
        mirrored_end = (-arc.start_point[0], arc.start_point[1])
        matched = False
        for other in arcs:
            if other.zone is not arc.zone:
                continue
            if (
                math.hypot(other.start_point[0] - mirrored_start[0],
                           other.start_point[1] - mirrored_start[1]) < 1e-8
                and math.hypot(other.end_point[0] - mirrored_end[0],
                               other.end_point[1] - mirrored_end[1]) < 1e-8
            ):
                matched = True
        assert matched


def test_doubling_scan_stability():
    """Doubling the angular sampling budget must not change any hit."""
    boundary, system = reference_instance("keycurve-3")
    t1 = trace_orbit(system, boundary, (6.5, 0.0625), Zone.OUTER, n_scan=4096)
    t2 = trace_orbit(system, boundary, (6.5, 0.0625), Zone.OUTER, n_scan=8192)
    assert [a.hit_segment for a in t1.arcs] == [a.hit_segment for a in t2.arcs]
    for a, b in zip(t1.arcs, t2.arcs):
        assert math.hypot(a.end_point[0] - b.end_point[0],
                          a.end_point[1] - b.end_point[1]) < 1e-9
