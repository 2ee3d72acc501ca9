import math
import random

import numpy as np
import pytest

from twozone.builder import reference_instance
from twozone.geometry import (
    AxisSegment,
    LineGraph,
    SeparationBoundary,
    SineGraph,
    VerticalSegment,
    Zone,
    boundary_distance,
    check_simple,
    classify_zone,
    parse_boundary,
    segment_point_and_normal,
    serialize_boundary,
    zone_parity,
)


def _upward_crossing_oracle(boundary, p):
    """Independent even-odd oracle: count graph crossings by dense
    per-segment closed-form evaluation (no shared code path)."""
    px, py = p
    count = 0
    for seg in boundary.loop_segments():
        if isinstance(seg, VerticalSegment):
            continue
        x0, x1 = seg.domain
        if x0 <= px < x1 and float(seg.value(px)) > py:
            count += 1
    return Zone.INNER if count % 2 else Zone.OUTER


KEYCURVE_POINTS = [
    ((0.0, -1.0), Zone.OUTER),   # below the axis portion
    ((0.0, 0.5), Zone.INNER),    # finger under the first cap
    ((0.0, 1.5), Zone.OUTER),    # gap between cap one and the first shelf
    ((0.0, 2.5), Zone.INNER),    # second finger
    ((-0.9, 0.5), Zone.INNER),   # left riser column
    ((3.0, 0.05), Zone.INNER),   # right channel
    ((8.0, 0.5), Zone.OUTER),    # beyond the anchor
]


def test_classify_zone_keycurve():
    boundary, _ = reference_instance("keycurve-3")
    for p, zone in KEYCURVE_POINTS:
        assert classify_zone(boundary, p) is zone
        assert _upward_crossing_oracle(boundary, p) is zone


def test_classify_zone_boundary_band():
    boundary, _ = reference_instance("keycurve-3")
    assert classify_zone(boundary, (3.0, 0.0)) is Zone.BOUNDARY
    assert classify_zone(boundary, (0.5, 1.0)) is Zone.BOUNDARY


def test_classify_stability_away_from_boundary():
    boundary, _ = reference_instance("keycurve-3")
    rng = random.Random(3)
    for _ in range(200):
        p = (rng.uniform(-10, 8), rng.uniform(-2, 7))
        if boundary_distance(boundary, p) <= 2e-9:
            continue
        z = zone_parity(boundary, p)
        for _ in range(5):
            q = (p[0] + rng.uniform(-4e-10, 4e-10), p[1] + rng.uniform(-4e-10, 4e-10))
            assert zone_parity(boundary, q) is z


def test_normals_point_outward():
    boundary, _ = reference_instance("keycurve-3")
    # axis: Outer is below
    axis = boundary.segments[0]
    pt, n = segment_point_and_normal(boundary, axis, 3.0)
    assert pt == (3.0, 0.0)
    assert n == (0.0, -1.0)
    # first cap at x = 1/2: slope -pi/2, Outer above
    cap = boundary.segments[4]
    pt, n = segment_point_and_normal(boundary, cap, 0.5)
    assert pt[1] == pytest.approx(1.0)
    expected = np.array([math.pi / 2, 1.0])
    expected = expected / np.linalg.norm(expected)
    assert n[0] == pytest.approx(expected[0], abs=1e-12)
    assert n[1] == pytest.approx(expected[1], abs=1e-12)
    # right wall of the first tooth: Outer is to the right
    wall = boundary.segments[3]
    pt, n = segment_point_and_normal(boundary, wall, 0.5625)
    assert n == (1.0, 0.0)


def test_normal_probe_property():
    boundary, _ = reference_instance("keycurve-3")
    rng = random.Random(11)
    eps = 1e-7
    for seg in boundary.loop_segments():
        if isinstance(seg, VerticalSegment):
            lo, hi = sorted((seg.y0, seg.y1))
        else:
            lo, hi = seg.domain
        if hi - lo < 1e-6:
            continue
        for _ in range(100):
            param = lo + (hi - lo) * rng.uniform(0.05, 0.95)
            pt, n = segment_point_and_normal(boundary, seg, param)
            assert classify_zone(boundary, pt) is Zone.BOUNDARY
            outside = (pt[0] + eps * n[0], pt[1] + eps * n[1])
            inside = (pt[0] - eps * n[0], pt[1] - eps * n[1])
            assert zone_parity(boundary, outside) is Zone.OUTER
            assert zone_parity(boundary, inside) is Zone.INNER


def test_check_simple_accepts_reference_instances():
    for name in ("example-2.1", "corrected-2.1", "keycurve-3",
                  "corollary-chains", "substitution"):
        boundary, _ = reference_instance(name)
        assert check_simple(boundary) is None


def test_check_simple_detects_crossing_caps():
    # two caps of amplitude 1 on the same domain at offsets 1 and 1.5 cross
    a = SineGraph(1.0, 2 * math.pi, 0.0, 1.0, -1.0, 1.0)
    b = SineGraph(1.0, 2 * math.pi, math.pi, 1.5, -1.0, 1.0)
    axis = AxisSegment(-2.0, 2.0)
    boundary = SeparationBoundary(
        (axis, a, b), VerticalSegment(-2.0, 0.0, 0.0), 2.0, -2.0
    )
    violation = check_simple(boundary)
    assert violation is not None


def test_check_simple_minimal_loop():
    axis = AxisSegment(-2.0, 2.0)
    lid = LineGraph(0.0, 1.0, -2.0, 2.0)
    wall = VerticalSegment(2.0, 0.0, 1.0)
    boundary = SeparationBoundary(
        (axis, wall, lid), VerticalSegment(-2.0, 1.0, 0.0), 2.0, -2.0
    )
    assert check_simple(boundary) is None


def test_serialization_roundtrip():
    for name in ("keycurve-3", "substitution"):
        boundary, _ = reference_instance(name)
        text = serialize_boundary(boundary)
        back = parse_boundary(text)
        assert serialize_boundary(back) == text
        assert back.x_anchor == boundary.x_anchor
        assert back.x_left == boundary.x_left
        assert len(back.segments) == len(boundary.segments)
