"""The two-zone piecewise-linear field and its boundary-point classes.

Both zone fields are rigid counterclockwise rotations at angular speed
one: the Inner (serpentine) zone rotates about the lifted center
(0, a), the Outer zone about the origin,

    Inner:  x' = -(y - a),  y' = x
    Outer:  x' = -y,        y' = x.

Orbits inside a zone are therefore level circles of the corresponding
first integral H_c(x, y) = x^2 + (y - c)^2.  A boundary point is a
sewing, sliding, escaping, or tangency point according to the signs of
the two fields against the normal pointing toward Outer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

from .geometry import (
    SeparationBoundary,
    Segment,
    VerticalSegment,
    Zone,
    segment_point_and_normal,
)

TOL_T = 1e-9          # transversality threshold on normalized components
CORNER_MARGIN = 1e-9  # params this close to a junction are not classified

Point = Tuple[float, float]


class NearCorner(ValueError):
    pass


@dataclass(frozen=True)
class TwoCenterSystem:
    """Inner center at (0, a), Outer center at (0, 0); requires a > 0."""

    a: float

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError("inner-center height a must be positive")

    def zone_center(self, zone: Zone) -> Point:
        if zone is Zone.INNER:
            return (0.0, self.a)
        if zone is Zone.OUTER:
            return (0.0, 0.0)
        raise ValueError("no field is attached to BOUNDARY")


def field_at(sys: TwoCenterSystem, zone: Zone, p: Point) -> Point:
    """Velocity of the active zone's field at ``p``."""
    cx, cy = sys.zone_center(zone)
    return (-(p[1] - cy), p[0] - cx)


def first_integral(center_height: float, p: Point) -> float:
    """H_c(p) = x^2 + (y - c)^2, conserved by the rotation about (0, c)."""
    return p[0] * p[0] + (p[1] - center_height) * (p[1] - center_height)


class PointClass(enum.Enum):
    SEWING_INNER_TO_OUTER = "sewing-inner-to-outer"
    SEWING_OUTER_TO_INNER = "sewing-outer-to-inner"
    SLIDING = "sliding"
    ESCAPING = "escaping"
    TANGENCY = "tangency"

    @property
    def is_sewing(self) -> bool:
        return self in (
            PointClass.SEWING_INNER_TO_OUTER,
            PointClass.SEWING_OUTER_TO_INNER,
        )


def _param_in_interior(seg: Segment, param: float, margin: float) -> bool:
    if isinstance(seg, VerticalSegment):
        lo, hi = sorted((seg.y0, seg.y1))
    else:
        lo, hi = seg.domain
    return (lo + margin) <= param <= (hi - margin)


def normal_components(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    seg: Segment,
    param: float,
) -> Tuple[Point, Point, float, float]:
    """Point, outward normal, and normalized field-normal products.

    Returns (point, normal, dI, dO) where dI and dO are the projections
    of the Inner and Outer fields onto the normal toward Outer, each
    divided by the field magnitude (the normal is already unit).
    """
    pt, n = segment_point_and_normal(boundary, seg, param)
    vi = field_at(sys, Zone.INNER, pt)
    vo = field_at(sys, Zone.OUTER, pt)
    mi = math.hypot(*vi)
    mo = math.hypot(*vo)
    di = (vi[0] * n[0] + vi[1] * n[1]) / mi if mi > 0 else 0.0
    do = (vo[0] * n[0] + vo[1] * n[1]) / mo if mo > 0 else 0.0
    return pt, n, di, do


def classify_boundary_point(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    seg: Segment,
    param: float,
    tol: float = TOL_T,
    corner_margin: float = CORNER_MARGIN,
) -> PointClass:
    """Filippov class of the boundary point at ``param`` on ``seg``.

    Points within ``corner_margin`` of a segment junction raise
    :class:`NearCorner`; crossings are only meaningful in segment
    interiors.
    """
    if not _param_in_interior(seg, param, corner_margin):
        raise NearCorner(f"param {param} within {corner_margin} of a junction")
    _, _, di, do = normal_components(sys, boundary, seg, param)
    if abs(di) <= tol or abs(do) <= tol:
        return PointClass.TANGENCY
    if di > 0 and do > 0:
        return PointClass.SEWING_INNER_TO_OUTER
    if di < 0 and do < 0:
        return PointClass.SEWING_OUTER_TO_INNER
    if di > 0 and do < 0:
        return PointClass.SLIDING
    return PointClass.ESCAPING


def sewing_sign_identity(a: float, x: float, y: float, slope: float) -> bool:
    """Closed-form restatement of the sewing condition on a graph piece.

    A crossing at (x, y) with local slope s is sewing exactly when
    x + s*y and x - s*(a - y) share a strict sign; used as an
    independent cross-check of the dot-product classifier.
    """
    lhs = x + slope * y
    rhs = x - slope * (a - y)
    return lhs * rhs > 0
