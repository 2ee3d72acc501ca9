import math

import pytest

from twozone.builder import reference_instance
from twozone.geometry import Zone
from twozone.system import (
    NearCorner,
    PointClass,
    TwoCenterSystem,
    classify_boundary_point,
    field_at,
    first_integral,
    normal_components,
    sewing_sign_identity,
)


def test_field_values():
    s5 = TwoCenterSystem(5.0)
    assert field_at(s5, Zone.OUTER, (1.0, 1.0)) == (-1.0, 1.0)
    assert field_at(s5, Zone.INNER, (0.5, 1.0)) == (4.0, 0.5)
    assert field_at(s5, Zone.OUTER, (0.0, 0.0)) == (0.0, 0.0)


def test_first_integral_values():
    assert first_integral(0.0, (1.0, 1.0)) == 2.0
    assert first_integral(2.0, (1.0, 1.0)) == 2.0
    for c in (0.5, 2.0, 7.0):
        assert first_integral(c, (0.0, c)) == 0.0


def test_system_requires_positive_height():
    with pytest.raises(ValueError):
        TwoCenterSystem(0.0)


def _dot_product_oracle(a, slope, x, y):
    """Independent classification from raw dot products."""
    n = (-slope, 1.0)
    vi = (a - y, x)
    vo = (-y, x)
    di = vi[0] * n[0] + vi[1] * n[1]
    do = vo[0] * n[0] + vo[1] * n[1]
    if di > 0 and do > 0:
        return PointClass.SEWING_INNER_TO_OUTER
    if di < 0 and do < 0:
        return PointClass.SEWING_OUTER_TO_INNER
    if di > 0 and do < 0:
        return PointClass.SLIDING
    return PointClass.ESCAPING


def test_keycurve_classifications():
    boundary, system = reference_instance("keycurve-3")
    segs = boundary.loop_segments()
    # the three published tooth crossings are sliding, not sewing
    for idx, x in ((4, 0.5), (8, 0.5), (12, 2.0 / 3.0)):
        cls = classify_boundary_point(system, boundary, segs[idx], x)
        assert cls is PointClass.SLIDING
        slope = float(segs[idx].slope(x))
        y = float(segs[idx].value(x))
        assert _dot_product_oracle(5.0, slope, x, y) is cls
        assert not sewing_sign_identity(5.0, x, y, slope)
    # the envelope crossing on the ramp is sewing
    cls = classify_boundary_point(system, boundary, segs[1], 6.5)
    assert cls is PointClass.SEWING_INNER_TO_OUTER
    assert sewing_sign_identity(5.0, 6.5, 1.0 / 16.0, -0.125)
    # on the axis below the first tooth both fields push downward
    pt, n, di, do = normal_components(system, boundary, segs[0], 3.0)
    assert n == (0.0, -1.0)
    assert di == pytest.approx(-3.0 / math.hypot(5.0, 3.0))
    assert do == pytest.approx(-3.0 / math.hypot(0.0, 3.0))
    cls = classify_boundary_point(system, boundary, segs[0], 3.0)
    assert cls is PointClass.SEWING_OUTER_TO_INNER


def test_mirror_antisymmetry():
    """Sewing inner-to-outer at (x, y) pairs with outer-to-inner at (-x, y)."""
    boundary, system = reference_instance("corrected-2.1")
    cap = boundary.segments[3]
    right = classify_boundary_point(system, boundary, cap, 1.0)
    left = classify_boundary_point(system, boundary, cap, -1.0)
    assert right is PointClass.SEWING_INNER_TO_OUTER
    assert left is PointClass.SEWING_OUTER_TO_INNER


def test_sliding_on_paper_single_cap():
    """With the published amplitude 1/2 the descending flank slides and
    the ascending flank escapes."""
    boundary, system = reference_instance("example-2.1")
    cap = boundary.segments[3]
    assert classify_boundary_point(system, boundary, cap, 0.75) is PointClass.SLIDING
    assert classify_boundary_point(system, boundary, cap, 0.25) is PointClass.ESCAPING
    # at the crest the slope vanishes and the crossing sews
    assert (
        classify_boundary_point(system, boundary, cap, 0.5)
        is PointClass.SEWING_INNER_TO_OUTER
    )


def test_near_corner_raises():
    boundary, system = reference_instance("keycurve-3")
    cap = boundary.segments[4]
    with pytest.raises(NearCorner):
        classify_boundary_point(system, boundary, cap, cap.x1)
