"""Recursive-mean rollup scoring over a control catalog.

Every internal node's achievement is the arithmetic mean of its children's
achievements, evaluated bottom-up from the scored issue leaves; with six
domains under the root this collapses to the six-way mean of the domain
values. All arithmetic is exact (fractions.Fraction, no intermediate
rounding); display rounding is half-up to 2 decimals and happens only at
serialization time.

Two modes:
  strict (default)  every leaf must be scored; missing leaves are an error.
  partial           means are taken over scored leaves only; nodes with no
                    scored descendant are excluded from their parent's mean
                    rather than counted as zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Mapping

from .catalog import Catalog, CatalogNode, NodeKind, leaves

SCALE_MAX = 4

#: Meaning of each point on the integer answer scale.
SCALE_LABELS = {
    0: "not implementing",
    1: "below average",
    2: "average",
    3: "above average",
    4: "excellent",
}


class ScoringError(ValueError):
    """Base error for assessment validation and rollup."""


class EmptyMeanError(ScoringError):
    """A mean was requested over no values (node with no scored descendants)."""


class UnknownLeafError(ScoringError):
    """The assessment scores ids that are not issue leaves of the catalog."""

    def __init__(self, leaf_ids: list[str]):
        super().__init__(f"unknown leaf ids: {', '.join(leaf_ids)}")
        self.leaf_ids = leaf_ids


class ScoreOutOfRangeError(ScoringError):
    """A leaf score is outside the integer 0..4 scale."""

    def __init__(self, leaf_id: str, value: object):
        super().__init__(
            f"score for {leaf_id!r} must be an integer in 0..{SCALE_MAX}, "
            f"got {value!r}"
        )
        self.leaf_id = leaf_id
        self.value = value


class IncompleteAssessmentError(ScoringError):
    """Strict-mode rollup of an assessment that leaves issues unscored."""

    def __init__(self, missing: list[str]):
        super().__init__(
            f"assessment is incomplete; {len(missing)} unscored leaves: "
            f"{', '.join(missing)}"
        )
        self.missing = missing


class CatalogMismatchError(ScoringError):
    """The assessment references a different catalog name/version."""


class Predicate(IntEnum):
    """Five-band qualitative rating of an achievement value, ordered."""

    NOT_IMPLEMENTING = 0
    BELOW_AVERAGE = 1
    AVERAGE = 2
    ABOVE_AVERAGE = 3
    EXCELLENT = 4

    @property
    def code(self) -> str:
        """Stable machine name, e.g. 'above_average'."""
        return self.name.lower()

    @property
    def label(self) -> str:
        """Human label, e.g. 'above average'."""
        return self.name.lower().replace("_", " ")


@dataclass(frozen=True)
class Assessment:
    """A set of integer answers keyed by issue-leaf id, bound to a catalog."""

    catalog_name: str
    catalog_version: str
    scores: Mapping[str, int]

    @property
    def catalog_ref(self) -> tuple[str, str]:
        return (self.catalog_name, self.catalog_version)


@dataclass(frozen=True)
class NodeScore:
    """Rolled-up result for one catalog node."""

    node_id: str
    achievement: Fraction
    priority: Fraction
    scored_leaf_count: int
    total_leaf_count: int


@dataclass(frozen=True)
class ScoreReport:
    """Full rollup result.

    per_node holds a NodeScore for every node with at least one scored
    descendant; overall/percentage/predicate are None only for a partial
    report with zero scored leaves.
    """

    catalog_name: str
    catalog_version: str
    per_node: Mapping[str, NodeScore]
    overall: NodeScore | None
    percentage: Fraction | None
    predicate: Predicate | None
    complete: bool
    scored_leaves: int
    total_leaves: int


def node_mean(child_values: list[Fraction | int]) -> Fraction:
    """Exact arithmetic mean of the children's values.

    Raises EmptyMeanError for an empty list, which signals a catalog node
    with no scored descendants.
    """
    if not child_values:
        raise EmptyMeanError("cannot take the mean of no values")
    return Fraction(sum(Fraction(v) for v in child_values), len(child_values))


def priority_of(achievement: Fraction | int) -> Fraction:
    """Gap between the ideal value (4) and the achievement; their inverse."""
    achievement = Fraction(achievement)
    _check_range(achievement)
    return SCALE_MAX - achievement


def to_percentage(achievement: Fraction | int) -> Fraction:
    """Linear map of the 0..4 achievement onto 0..100."""
    achievement = Fraction(achievement)
    _check_range(achievement)
    return achievement / SCALE_MAX * 100


def predicate_of(achievement: Fraction | int) -> Predicate:
    """Band an achievement by rounding half-up to the nearest scale point:
    [0,0.5) not implementing, [0.5,1.5) below average, [1.5,2.5) average,
    [2.5,3.5) above average, [3.5,4] excellent.
    """
    achievement = Fraction(achievement)
    _check_range(achievement)
    band = math.floor(achievement + Fraction(1, 2))
    return Predicate(min(band, SCALE_MAX))


def _check_range(value: Fraction) -> None:
    if not 0 <= value <= SCALE_MAX:
        raise ScoringError(f"achievement {value} is outside [0, {SCALE_MAX}]")


def validate_scores(catalog: Catalog, scores: Mapping[str, int]) -> None:
    """Reject unknown leaf ids and out-of-range or non-integer values."""
    leaf_ids = {node.id for node in leaves(catalog)}
    unknown = sorted(set(scores) - leaf_ids)
    if unknown:
        raise UnknownLeafError(unknown)
    for node in leaves(catalog):
        if node.id not in scores:
            continue
        value = scores[node.id]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScoreOutOfRangeError(node.id, value)
        if not 0 <= value <= SCALE_MAX:
            raise ScoreOutOfRangeError(node.id, value)


def rollup(
    catalog: Catalog, assessment: Assessment, *, partial: bool = False
) -> ScoreReport:
    """Evaluate the recursive mean bottom-up over the whole tree.

    In strict mode (default) every issue leaf must be scored; the error for
    an incomplete assessment lists the unscored leaf ids in document order.
    In partial mode unscored leaves are simply absent from every mean and
    the report is flagged incomplete.
    """
    if assessment.catalog_ref != catalog.ref:
        raise CatalogMismatchError(
            f"assessment references catalog {assessment.catalog_name!r} "
            f"v{assessment.catalog_version}, expected {catalog.name!r} "
            f"v{catalog.version}"
        )
    validate_scores(catalog, assessment.scores)
    if not partial:
        missing = [
            node.id for node in leaves(catalog) if node.id not in assessment.scores
        ]
        if missing:
            raise IncompleteAssessmentError(missing)

    per_node: dict[str, NodeScore] = {}

    def visit(node: CatalogNode) -> tuple[Fraction | None, int, int]:
        if node.kind is NodeKind.ISSUE:
            if node.id in assessment.scores:
                value = Fraction(assessment.scores[node.id])
                scored, total = 1, 1
            else:
                value, scored, total = None, 0, 1
        else:
            child_values = []
            scored = total = 0
            for child in node.children:
                child_value, child_scored, child_total = visit(child)
                if child_value is not None:
                    child_values.append(child_value)
                scored += child_scored
                total += child_total
            value = node_mean(child_values) if child_values else None
        if value is not None:
            per_node[node.id] = NodeScore(
                node_id=node.id,
                achievement=value,
                priority=priority_of(value),
                scored_leaf_count=scored,
                total_leaf_count=total,
            )
        return value, scored, total

    root_value, scored_leaves, total_leaves = visit(catalog.root)
    overall = per_node.get(catalog.root.id)
    return ScoreReport(
        catalog_name=catalog.name,
        catalog_version=catalog.version,
        per_node=per_node,
        overall=overall,
        percentage=to_percentage(root_value) if root_value is not None else None,
        predicate=predicate_of(root_value) if root_value is not None else None,
        complete=scored_leaves == total_leaves,
        scored_leaves=scored_leaves,
        total_leaves=total_leaves,
    )


# --- display rounding -------------------------------------------------------

def format_fraction(value: Fraction, places: int = 2) -> str:
    """Render an exact rational as a decimal string, rounded half-up.

    Done in integer arithmetic so boundary cases (e.g. 2.865) never depend
    on binary floating point.
    """
    scale = 10**places
    sign = "-" if value < 0 else ""
    magnitude = abs(value) * scale
    units = math.floor(magnitude)
    if magnitude - units >= Fraction(1, 2):
        units += 1
    whole, frac = divmod(units, scale)
    return f"{sign}{whole}.{frac:0{places}d}"


# --- JSON (de)serialization -------------------------------------------------

def assessment_to_dict(assessment: Assessment) -> dict:
    return {
        "catalog": {
            "name": assessment.catalog_name,
            "version": assessment.catalog_version,
        },
        "scores": dict(assessment.scores),
    }


def assessment_from_dict(doc: object) -> Assessment:
    if not isinstance(doc, dict):
        raise ScoringError("assessment document must be a JSON object")
    catalog_ref = doc.get("catalog")
    if not isinstance(catalog_ref, dict) or not {"name", "version"} <= set(catalog_ref):
        raise ScoringError(
            "assessment document must carry a 'catalog' object with name and version"
        )
    scores = doc.get("scores")
    if not isinstance(scores, dict):
        raise ScoringError("assessment document must carry a 'scores' object")
    return Assessment(
        catalog_name=str(catalog_ref["name"]),
        catalog_version=str(catalog_ref["version"]),
        scores=dict(scores),
    )


def load_assessment(text: str) -> Assessment:
    """Parse an assessment document: {"catalog": {...}, "scores": {...}}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScoringError(f"assessment document is not valid JSON: {exc}") from exc
    return assessment_from_dict(doc)


def dump_assessment(assessment: Assessment) -> str:
    return json.dumps(assessment_to_dict(assessment), indent=2) + "\n"


def _node_score_to_dict(score: NodeScore) -> dict:
    return {
        "node_id": score.node_id,
        "achievement": format_fraction(score.achievement),
        "achievement_num": score.achievement.numerator,
        "achievement_den": score.achievement.denominator,
        "priority": format_fraction(score.priority),
        "priority_num": score.priority.numerator,
        "priority_den": score.priority.denominator,
        "scored_leaves": score.scored_leaf_count,
        "total_leaves": score.total_leaf_count,
    }


def _node_score_from_dict(obj: dict) -> NodeScore:
    return NodeScore(
        node_id=obj["node_id"],
        achievement=Fraction(obj["achievement_num"], obj["achievement_den"]),
        priority=Fraction(obj["priority_num"], obj["priority_den"]),
        scored_leaf_count=obj["scored_leaves"],
        total_leaf_count=obj["total_leaves"],
    )


def report_to_dict(report: ScoreReport) -> dict:
    """Serialize a report; decimal strings for display, num/den for exactness."""
    doc: dict = {
        "catalog": {"name": report.catalog_name, "version": report.catalog_version},
        "complete": report.complete,
        "scored_leaves": report.scored_leaves,
        "total_leaves": report.total_leaves,
        "overall": _node_score_to_dict(report.overall) if report.overall else None,
        "percentage": None,
        "percentage_num": None,
        "percentage_den": None,
        "predicate": report.predicate.code if report.predicate is not None else None,
        "per_node": {
            node_id: _node_score_to_dict(score)
            for node_id, score in report.per_node.items()
        },
    }
    if report.percentage is not None:
        doc["percentage"] = format_fraction(report.percentage)
        doc["percentage_num"] = report.percentage.numerator
        doc["percentage_den"] = report.percentage.denominator
    return doc


def report_from_dict(doc: dict) -> ScoreReport:
    """Rebuild a report, exactly, from its serialized form."""
    percentage = None
    if doc.get("percentage_num") is not None:
        percentage = Fraction(doc["percentage_num"], doc["percentage_den"])
    predicate = None
    if doc.get("predicate") is not None:
        predicate = Predicate[doc["predicate"].upper()]
    overall = _node_score_from_dict(doc["overall"]) if doc.get("overall") else None
    return ScoreReport(
        catalog_name=doc["catalog"]["name"],
        catalog_version=doc["catalog"]["version"],
        per_node={
            node_id: _node_score_from_dict(obj)
            for node_id, obj in doc["per_node"].items()
        },
        overall=overall,
        percentage=percentage,
        predicate=predicate,
        complete=doc["complete"],
        scored_leaves=doc["scored_leaves"],
        total_leaves=doc["total_leaves"],
    )
