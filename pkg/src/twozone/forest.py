"""Nesting forests of disjoint Jordan curves.

A finite family of disjoint simple closed curves in the plane is
determined, up to a homeomorphism of the plane, by its nesting
structure: each curve is a node, and the parent of a curve is the
smallest curve strictly containing it.  Curves that contain one another
form chains; curves none of which contains another ("coordinated"
curves) are siblings.  Sibling order carries no meaning, so forests are
compared through a canonical bracket code obtained by sorting child
codes recursively.

The bracket grammar is ``forest := cycle*``, ``cycle := '(' forest ')'``
with whitespace ignored.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field


class ForestParseError(ValueError):
    """Malformed bracket string; ``position`` is the offending raw index."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnbalancedBrackets(ForestParseError):
    def __init__(self, position: int) -> None:
        super().__init__("unbalanced brackets", position)


class StrayCharacter(ForestParseError):
    def __init__(self, position: int) -> None:
        super().__init__("stray character", position)


@dataclass
class ForestNode:
    children: list["ForestNode"] = field(default_factory=list)

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


@dataclass
class ConfigForest:
    roots: list[ForestNode] = field(default_factory=list)

    def node_count(self) -> int:
        return sum(r.node_count() for r in self.roots)

    def depth(self) -> int:
        return max((r.depth() for r in self.roots), default=0)

    def is_empty(self) -> bool:
        return not self.roots


def parse_forest(text: str) -> ConfigForest:
    """Parse a bracket string into a forest, one node per '(' .

    Whitespace (including newlines) is ignored.  Raises
    :class:`UnbalancedBrackets` or :class:`StrayCharacter` with the raw
    character position of the defect.
    """
    roots: list[ForestNode] = []
    stack: list[ForestNode] = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch == "(":
            node = ForestNode()
            if stack:
                stack[-1].children.append(node)
            else:
                roots.append(node)
            stack.append(node)
        elif ch == ")":
            if not stack:
                raise UnbalancedBrackets(pos)
            stack.pop()
        else:
            raise StrayCharacter(pos)
    if stack:
        raise UnbalancedBrackets(len(text))
    return ConfigForest(roots)


def _node_code(node: ForestNode) -> str:
    return "(" + "".join(sorted(_node_code(c) for c in node.children)) + ")"


def canonical_code(forest: ConfigForest) -> str:
    """Canonical bracket code: equal codes iff the forests are isomorphic.

    Children are encoded recursively and sorted lexicographically, so any
    permutation of siblings yields the same code.
    """
    return "".join(sorted(_node_code(r) for r in forest.roots))


def is_equivalent(a: ConfigForest, b: ConfigForest) -> bool:
    return canonical_code(a) == canonical_code(b)


def random_forest(node_budget: int, depth_budget: int, seed: int) -> ConfigForest:
    """Deterministic random forest with exactly ``node_budget`` nodes.

    Every node sits at depth <= ``depth_budget`` (roots have depth 1).
    The same (budget, depth, seed) triple always yields the same forest.
    """
    if node_budget < 0:
        raise ValueError("node_budget must be >= 0")
    rng = random.Random(seed)
    forest = ConfigForest()
    # open slots: (parent or None, depth of the would-be child)
    nodes: list[tuple[ForestNode, int]] = []
    for _ in range(node_budget):
        choices: list[ForestNode | None] = [None]
        choices.extend(n for n, d in nodes if d < depth_budget)
        parent = rng.choice(choices)
        child = ForestNode()
        if parent is None:
            forest.roots.append(child)
            nodes.append((child, 1))
        else:
            parent.children.append(child)
            pdepth = next(d for n, d in nodes if n is parent)
            nodes.append((child, pdepth + 1))
    return forest
