"""From verified cycles to a nesting forest, and equivalence with a target.

Containment between two disjoint closed arc chains is decided by the
even-odd rule: an upward ray from a probe point on the inner cycle
(its topmost arc apex, far from any boundary crossing) is intersected
exactly against every arc of the outer cycle.  The strict-containment
partial order then yields the nesting forest, which is compared with
the target through canonical codes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .detect import DetectionReport, IsolationReport, VerifiedCycle, isolation_report
from .forest import ConfigForest, ForestNode, canonical_code, is_equivalent
from .geometry import SeparationBoundary
from .system import TwoCenterSystem


class SameCycle(ValueError):
    pass


def _ray_arc_crossings(arc, px: float, py: float) -> int:
    """Crossings of the upward ray x = px, y > py with one arc."""
    cx, cy = arc.center
    dx = px - cx
    if abs(dx) >= arc.radius:
        return 0
    count = 0
    for sign in (1.0, -1.0):
        y = cy + sign * math.sqrt(arc.radius * arc.radius - dx * dx)
        if y <= py:
            continue
        ang = math.atan2(y - cy, px - cx)
        k = math.ceil((arc.start_angle - ang) / (2 * math.pi))
        if arc.start_angle <= ang + 2 * math.pi * k <= arc.end_angle + 1e-15:
            count += 1
    return count


def contains(outer: VerifiedCycle, inner: VerifiedCycle) -> bool:
    """True when ``inner`` lies strictly inside the region bounded by
    ``outer``; the two cycles must be distinct (disjoint by integrals)."""
    if outer is inner or (
        abs(outer.pair.x_star - inner.pair.x_star) < 1e-12
        and abs(outer.pair.y_star - inner.pair.y_star) < 1e-12
    ):
        raise SameCycle("containment is irreflexive")
    px, py = inner.apex()
    crossings = sum(_ray_arc_crossings(arc, px, py) for arc in outer.arcs)
    return crossings % 2 == 1


def extract_forest(cycles: Sequence[VerifiedCycle]) -> ConfigForest:
    """Nesting forest of the strict-containment partial order.

    The parent of a cycle is its minimal container.  Input order does
    not matter; children end up unordered as required.
    """
    n = len(cycles)
    inside = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                inside[i][j] = contains(cycles[j], cycles[i])
    nodes = [ForestNode() for _ in range(n)]
    forest = ConfigForest()
    for i in range(n):
        containers = [j for j in range(n) if inside[i][j]]
        if not containers:
            forest.roots.append(nodes[i])
            continue
        # minimal container: the one lying inside all other containers of i
        parent = max(
            containers,
            key=lambda j: sum(1 for k in containers if inside[j][k]),
        )
        nodes[parent].children.append(nodes[i])
    return forest


@dataclass
class MatchReport:
    match: bool
    realized_code: str
    target_code: str
    isolation: List[IsolationReport]
    exclusion_ok: bool
    n_verified: int
    n_rejected: int
    n_bands: int

    def format(self) -> str:
        lines = [
            f"target    {self.target_code or '(empty)'}",
            f"realized  {self.realized_code or '(empty)'}",
            f"cycles    verified={self.n_verified} rejected={self.n_rejected} "
            f"bands={self.n_bands}",
            f"exclusion {'ok' if self.exclusion_ok else 'VIOLATED'}",
        ]
        for rep in self.isolation:
            probes = " ".join(
                f"{off:+.6e}:{d:+.6e}" for off, d in rep.displacements
            )
            lines.append(
                f"isolation x*={rep.pair_abscissa:.12g} d0={rep.center_displacement:.3e} "
                f"probes {probes} -> {rep.verdict}"
            )
        lines.append(f"match     {'true' if self.match else 'false'}")
        return "\n".join(lines) + "\n"


def verify_realization(
    sys: TwoCenterSystem,
    boundary: SeparationBoundary,
    detection: DetectionReport,
    target: ConfigForest,
) -> MatchReport:
    """Match = forest equivalence + isolation of every cycle + exclusion."""
    from .detect import check_right_ray_exclusion, find_symmetric_pairs

    realized = extract_forest(detection.verified)
    pairs, _ = find_symmetric_pairs(boundary)
    reports = [
        isolation_report(sys, boundary, cyc, pairs) for cyc in detection.verified
    ]
    exclusion = check_right_ray_exclusion(boundary.x_anchor, detection.verified)
    all_isolated = all(r.verdict == "isolated" for r in reports)
    ok = (
        is_equivalent(realized, target)
        and all_isolated
        and exclusion is None
    )
    return MatchReport(
        match=ok,
        realized_code=canonical_code(realized),
        target_code=canonical_code(target),
        isolation=reports,
        exclusion_ok=exclusion is None,
        n_verified=len(detection.verified),
        n_rejected=len(detection.rejected),
        n_bands=len(detection.degenerate),
    )
