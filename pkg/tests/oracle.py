"""Independent reference implementation of the nested-mean formula.

Deliberately minimal and separate from the engine under test: a leaf's value
is its score, every other node's value is the plain arithmetic mean of its
children's values, computed by direct recursion over the tree. Unscored
subtrees yield None and are left out of their parent's mean.
"""

from __future__ import annotations

from fractions import Fraction

from readiness.catalog import CatalogNode, NodeKind


def oracle_achievement(node: CatalogNode, scores: dict) -> Fraction | None:
    if node.kind is NodeKind.ISSUE:
        if node.id in scores:
            return Fraction(scores[node.id])
        return None
    values = []
    for child in node.children:
        value = oracle_achievement(child, scores)
        if value is not None:
            values.append(value)
    if not values:
        return None
    return sum(values) / len(values)


def oracle_all_nodes(node: CatalogNode, scores: dict) -> dict:
    """node id -> oracle achievement, for every node with a defined value."""
    results: dict = {}

    def collect(current: CatalogNode) -> None:
        value = oracle_achievement(current, scores)
        if value is not None:
            results[current.id] = value
        for child in current.children:
            collect(child)

    collect(node)
    return results
