import math

import pytest

from twozone.builder import (
    BuildParams,
    ContinuityBug,
    UnknownName,
    build,
    build_text,
    check_margins,
    emit_realization,
    plan_layout,
    reference_instance,
)
from twozone.detect import detect_all, find_symmetric_pairs
from twozone.forest import canonical_code, parse_forest
from twozone.geometry import SineGraph, check_continuity, check_simple


def test_plan_three_teeth_shape():
    plan = plan_layout(parse_forest("(()()())"))
    assert plan.envelope.active
    assert len(plan.teeth) == 3
    heights = [t.c for t in plan.teeth]
    assert heights == sorted(heights)
    assert all(h2 - h1 > 0.5 for h1, h2 in zip(heights, heights[1:]))
    assert plan.a > heights[-1]


def test_plan_single_leaf_suppresses_envelope():
    plan = plan_layout(parse_forest("()"))
    assert not plan.envelope.active
    assert len(plan.teeth) == 1
    assert plan.teeth[0].m == 1


def test_plan_substitution_shape():
    plan = plan_layout(parse_forest("((()())()())"))
    assert plan.envelope.active
    assert len(plan.teeth) == 3
    windowed = [t for t in plan.teeth if t.window is not None]
    assert len(windowed) == 1
    win = windowed[0].window
    assert len(win.teeth) == 2
    assert win.u < windowed[0].x_unit
    assert win.band_lo < min(t.c for t in win.teeth)
    assert win.band_hi > max(t.c for t in win.teeth)


def test_plan_chain_compression():
    # single root with children: the envelope carries the root and the
    # remaining chain of three compresses onto one three-root cap
    plan = plan_layout(parse_forest("(((())))"))
    assert plan.envelope.active
    assert len(plan.teeth) == 1
    assert plan.teeth[0].m == 3
    assert plan.teeth[0].window is None


def test_emitted_boundary_is_simple_and_continuous():
    for text in ("", "()", "(()()())", "((()())()())"):
        plan = plan_layout(parse_forest(text))
        boundary, system = emit_realization(plan)
        assert check_continuity(boundary)
        assert check_simple(boundary) is None


def test_margins_pass_at_default_safety():
    plan = plan_layout(parse_forest("(()()())"))
    report = check_margins(plan)
    assert report.ok, report.format()


def test_margins_fail_for_oversized_amplitude():
    plan = plan_layout(parse_forest("()"))
    tooth = plan.teeth[0]
    tooth.amplitude = 0.45  # violates the sewing slope bound
    report = check_margins(plan)
    assert not report.ok


def test_monotone_safety():
    """Halving the safety factor keeps a passing plan passing."""
    for safety in (0.5, 0.25, 0.125):
        plan = plan_layout(parse_forest("(()())"), BuildParams(safety=safety))
        assert check_margins(plan).ok


def test_build_three_teeth():
    rz = build_text("(()()())")
    assert rz.report.match
    assert len(rz.detection.verified) == 4
    assert not rz.detection.rejected
    kinds = sorted(c.kind for c in rz.detection.verified)
    assert kinds == ["four-arc", "two-arc", "two-arc", "two-arc"]


def test_build_empty_forest():
    rz = build_text("")
    assert rz.report.match
    assert not rz.detection.verified
    pairs, bands = find_symmetric_pairs(rz.boundary)
    assert not pairs
    assert not bands


def test_build_substitution_shape():
    rz = build_text("((()())()())")
    assert rz.report.match
    assert len(rz.detection.verified) == 6
    assert rz.report.realized_code == canonical_code(parse_forest("((()())()())"))


def test_build_determinism():
    a = build_text("(()(()))")
    b = build_text("(()(()))")
    from twozone.geometry import serialize_boundary

    assert serialize_boundary(a.boundary) == serialize_boundary(b.boundary)
    assert a.report.format() == b.report.format()


def test_nested_cycles_between_host_arcs():
    """Grafted cycles must lie strictly between the host cycle's arcs."""
    rz = build_text("((()()))")
    env_children = [t for t in rz.plan.teeth if t.window is not None]
    assert env_children
    host = env_children[0]
    win = host.window
    arch_at_u = math.sqrt(host.x_unit**2 + host.c**2 - win.u**2)
    inner_at_u = rz.plan.a - math.sqrt(
        host.x_unit**2 + (host.c - rz.plan.a) ** 2 - win.u**2
    )
    assert inner_at_u < win.band_lo < win.band_hi < arch_at_u


def test_reference_instance_unknown_name():
    with pytest.raises(UnknownName):
        reference_instance("no-such-instance")


def test_reference_instance_exact_constants():
    boundary, system = reference_instance("keycurve-3")
    assert system.a == 5.0
    assert boundary.x_anchor == 7.0
    f1 = boundary.segments[4]
    assert isinstance(f1, SineGraph)
    assert f1.amplitude == 0.25
    assert f1.omega == 2 * math.pi
    assert (f1.x0, f1.x1) == (-0.75, 1.0)

    boundary, system = reference_instance("example-2.1")
    assert system.a == 2.0
    cap = boundary.segments[3]
    assert cap.amplitude == 0.5
    assert (cap.x0, cap.x1) == (-1.5, 1.5)

    boundary, system = reference_instance("substitution")
    f12 = next(
        s
        for s in boundary.segments
        if isinstance(s, SineGraph) and s.offset == pytest.approx(99.0 / 96.0)
    )
    assert (f12.x0, f12.x1) == (-3.0 / 64.0, 1.0 / 16.0)


def test_reference_instances_detect_consistently():
    boundary, system = reference_instance("corollary-chains")
    report = detect_all(system, boundary)
    # published constants: only the envelope survives, the tooth pairs
    # at thirds are sliding
    assert len(report.verified) == 1
    assert len(report.rejected) == 5
    rejected_x = sorted(round(r.candidate.pair.x_star, 6) for r in report.rejected)
    third, two_thirds = round(1.0 / 3.0, 6), round(2.0 / 3.0, 6)
    assert rejected_x == [third, third, two_thirds, two_thirds, two_thirds]
