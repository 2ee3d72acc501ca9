"""Realization and certification of crossing limit-cycle configurations
for planar piecewise-linear fields with two zones."""

from .forest import (
    ConfigForest,
    ForestNode,
    StrayCharacter,
    UnbalancedBrackets,
    canonical_code,
    is_equivalent,
    parse_forest,
    random_forest,
)
from .geometry import (
    AxisSegment,
    LineGraph,
    SeparationBoundary,
    SineGraph,
    VerticalSegment,
    Zone,
    check_simple,
    classify_zone,
    parse_boundary,
    serialize_boundary,
)
from .system import (
    PointClass,
    TwoCenterSystem,
    classify_boundary_point,
    field_at,
    first_integral,
)
from .flow import ArcStep, OrbitTrace, TraceOutcome, next_boundary_hit, trace_orbit
from .detect import (
    DetectionReport,
    SymmetricPair,
    VerifiedCycle,
    detect_all,
    find_symmetric_pairs,
    poincare_displacement,
)
from .verify import MatchReport, contains, extract_forest, verify_realization
from .builder import (
    BuildFailed,
    BuildParams,
    Realization,
    build,
    build_text,
    check_margins,
    emit_realization,
    plan_layout,
    reference_instance,
)
from .rk4 import cross_check_cycle, integrate_with_events

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
