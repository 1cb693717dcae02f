"""Summary artifacts over a score report: grade, percentage, predicate,
strongest/weakest advice, histogram datasets, and text/CSV/JSON renders.

Everything here is a pure function of (report, catalog); identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .catalog import Catalog, NodeKind, find_node, nodes_of_kind
from .scoring import (
    NodeScore,
    Predicate,
    ScoreReport,
    format_fraction,
    report_to_dict,
)

#: Controls at or above this priority are called out as needing work
#: (achievement at or below the scale midpoint).
DEFAULT_FLAG_THRESHOLD = Fraction(2)

#: How many strongest/weakest domains the narrative names.
NARRATIVE_TOP_K = 2


class ReportError(ValueError):
    """Report requested against the wrong catalog or an unsupported level."""


@dataclass(frozen=True)
class Advice:
    """Ranked strong/weak areas plus a generated narrative.

    strongest_domains: (node_id, achievement), achievement descending.
    weakest_domains: (node_id, priority), priority descending.
    flagged_controls: (node_id, priority) for controls at/above the
    threshold, priority descending. All ties break by catalog document
    order. Domains or controls without any scored descendant are omitted.
    """

    strongest_domains: list[tuple[str, Fraction]]
    weakest_domains: list[tuple[str, Fraction]]
    flagged_controls: list[tuple[str, Fraction]]
    narrative: str


@dataclass(frozen=True)
class HistogramBar:
    node_id: str
    label: str
    achievement: Fraction | None
    priority: Fraction | None


@dataclass(frozen=True)
class HistogramSeries:
    """Achievement/priority pairs per node of one kind, in document order."""

    level: NodeKind
    bars: list[HistogramBar]


@dataclass(frozen=True)
class Summary:
    """The four summarize features, mutually consistent by construction."""

    grade: Fraction | None
    percentage: Fraction | None
    predicate: Predicate | None
    advice: Advice
    complete: bool
    scored_leaves: int
    total_leaves: int


def _check_catalog(report: ScoreReport, catalog: Catalog) -> None:
    if (report.catalog_name, report.catalog_version) != catalog.ref:
        raise ReportError(
            f"report was produced from catalog {report.catalog_name!r} "
            f"v{report.catalog_version}, not {catalog.name!r} v{catalog.version}"
        )


def advice_for(
    report: ScoreReport,
    catalog: Catalog,
    flag_threshold: Fraction = DEFAULT_FLAG_THRESHOLD,
) -> Advice:
    """Rank domains by strength/weakness and flag controls needing work."""
    _check_catalog(report, catalog)
    domain_scores = _scored(report, catalog, NodeKind.DOMAIN)
    control_scores = _scored(report, catalog, NodeKind.CONTROL)

    # sorted() is stable, so document order is the tie-break for free
    strongest = [
        (s.node_id, s.achievement)
        for s in sorted(domain_scores, key=lambda s: s.achievement, reverse=True)
    ]
    weakest = [
        (s.node_id, s.priority)
        for s in sorted(domain_scores, key=lambda s: s.priority, reverse=True)
    ]
    flagged = [
        (s.node_id, s.priority)
        for s in sorted(control_scores, key=lambda s: s.priority, reverse=True)
        if s.priority >= flag_threshold
    ]
    narrative = _narrative(report, catalog, strongest, weakest, flagged)
    return Advice(
        strongest_domains=strongest,
        weakest_domains=weakest,
        flagged_controls=flagged,
        narrative=narrative,
    )


def _scored(
    report: ScoreReport, catalog: Catalog, kind: NodeKind
) -> list[NodeScore]:
    return [
        report.per_node[node.id]
        for node in nodes_of_kind(catalog, kind)
        if node.id in report.per_node
    ]


def _narrative(
    report: ScoreReport,
    catalog: Catalog,
    strongest: list[tuple[str, Fraction]],
    weakest: list[tuple[str, Fraction]],
    flagged: list[tuple[str, Fraction]],
) -> str:
    def label(node_id: str) -> str:
        node = find_node(catalog, node_id)
        return node.name if node else node_id

    if report.overall is None:
        return (
            "No issues have been scored yet "
            f"(0 of {report.total_leaves}); no advice can be derived."
        )

    parts = [
        f"Overall readiness is {format_fraction(report.overall.achievement)} "
        f"of 4 ({format_fraction(report.percentage)}%), "
        f"rated {report.predicate.label}."
    ]
    if not report.complete:
        parts.append(
            f"Only {report.scored_leaves} of {report.total_leaves} issues are "
            "scored, so these figures cover the answered part of the catalog."
        )
    if strongest:
        top = strongest[:NARRATIVE_TOP_K]
        parts.append(
            "Strongest areas: "
            + ", ".join(f"{label(i)} ({format_fraction(v)})" for i, v in top)
            + "."
        )
        weak = [w for w in weakest[:NARRATIVE_TOP_K] if w[1] > 0]
        if weak:
            parts.append(
                "Weakest areas: "
                + ", ".join(
                    f"{label(i)} (priority {format_fraction(v)})" for i, v in weak
                )
                + "."
            )
    if flagged:
        lead_id, lead_priority = flagged[0]
        parts.append(
            f"{len(flagged)} control(s) need attention, led by "
            f"{label(lead_id)} (priority {format_fraction(lead_priority)})."
        )
    else:
        parts.append("No controls fall below the attention threshold.")
    return " ".join(parts)


def summarize(
    report: ScoreReport,
    catalog: Catalog,
    flag_threshold: Fraction = DEFAULT_FLAG_THRESHOLD,
) -> Summary:
    """The four summarize features: grade out of 4, percentage, predicate,
    and advice, all derived from the same rollup."""
    _check_catalog(report, catalog)
    return Summary(
        grade=report.overall.achievement if report.overall else None,
        percentage=report.percentage,
        predicate=report.predicate,
        advice=advice_for(report, catalog, flag_threshold),
        complete=report.complete,
        scored_leaves=report.scored_leaves,
        total_leaves=report.total_leaves,
    )


def histogram(
    report: ScoreReport, catalog: Catalog, level: NodeKind
) -> HistogramSeries:
    """One (achievement, priority) bar per node of the requested kind, in
    document order; bars for unscored nodes carry None values so the series
    length never depends on assessment content."""
    _check_catalog(report, catalog)
    if level not in (NodeKind.DOMAIN, NodeKind.CONTROL):
        raise ReportError(f"unsupported histogram level {level.value!r}")
    bars = []
    for node in nodes_of_kind(catalog, level):
        score = report.per_node.get(node.id)
        bars.append(
            HistogramBar(
                node_id=node.id,
                label=node.name,
                achievement=score.achievement if score else None,
                priority=score.priority if score else None,
            )
        )
    return HistogramSeries(level=level, bars=bars)


# --- renders ----------------------------------------------------------------

def render_csv(series: HistogramSeries) -> str:
    """CSV with columns node_id,label,achievement,priority (2-decimal)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["node_id", "label", "achievement", "priority"])
    for bar in series.bars:
        writer.writerow(
            [
                bar.node_id,
                bar.label,
                format_fraction(bar.achievement) if bar.achievement is not None else "",
                format_fraction(bar.priority) if bar.priority is not None else "",
            ]
        )
    return out.getvalue()


def render_json(
    report: ScoreReport,
    catalog: Catalog,
    flag_threshold: Fraction = DEFAULT_FLAG_THRESHOLD,
) -> str:
    """The report's JSON form plus the advice block."""
    doc = report_to_dict(report)
    doc["advice"] = advice_to_dict(advice_for(report, catalog, flag_threshold), catalog)
    return json.dumps(doc, indent=2) + "\n"


def advice_to_dict(advice: Advice, catalog: Catalog) -> dict:
    def pair(node_id: str, value: Fraction, key: str) -> dict:
        node = find_node(catalog, node_id)
        return {
            "node_id": node_id,
            "label": node.name if node else node_id,
            key: format_fraction(value),
            f"{key}_num": value.numerator,
            f"{key}_den": value.denominator,
        }

    return {
        "strongest_domains": [
            pair(i, v, "achievement") for i, v in advice.strongest_domains
        ],
        "weakest_domains": [pair(i, v, "priority") for i, v in advice.weakest_domains],
        "flagged_controls": [
            pair(i, v, "priority") for i, v in advice.flagged_controls
        ],
        "narrative": advice.narrative,
    }


def histogram_to_dict(series: HistogramSeries) -> dict:
    """JSON form of a histogram series; unscored bars carry nulls."""
    bars = []
    for bar in series.bars:
        obj: dict = {
            "node_id": bar.node_id,
            "label": bar.label,
            "achievement": None,
            "achievement_num": None,
            "achievement_den": None,
            "priority": None,
            "priority_num": None,
            "priority_den": None,
        }
        if bar.achievement is not None:
            obj["achievement"] = format_fraction(bar.achievement)
            obj["achievement_num"] = bar.achievement.numerator
            obj["achievement_den"] = bar.achievement.denominator
        if bar.priority is not None:
            obj["priority"] = format_fraction(bar.priority)
            obj["priority_num"] = bar.priority.numerator
            obj["priority_den"] = bar.priority.denominator
        bars.append(obj)
    return {"level": series.level.value, "bars": bars}


def render_text(
    report: ScoreReport,
    catalog: Catalog,
    flag_threshold: Fraction = DEFAULT_FLAG_THRESHOLD,
) -> str:
    """Plain-text report: status, the four summarize features, a domain
    table and the flagged controls."""
    _check_catalog(report, catalog)
    summary = summarize(report, catalog, flag_threshold)
    status = "COMPLETE" if report.complete else "INCOMPLETE"

    lines = [
        "ISO 27001 compliance readiness report",
        f"catalog: {catalog.name} v{catalog.version}",
        f"status: {status} ({report.scored_leaves}/{report.total_leaves} leaves scored)",
        "",
    ]
    if summary.grade is not None:
        lines += [
            f"overall achievement: {format_fraction(summary.grade)} / 4",
            f"readiness: {format_fraction(summary.percentage)}%",
            f"predicate: {summary.predicate.label}",
        ]
    else:
        lines += [
            "overall achievement: n/a",
            "readiness: n/a",
            "predicate: n/a",
        ]

    domain_series = histogram(report, catalog, NodeKind.DOMAIN)
    if domain_series.bars:
        lines += ["", "domains", "-------"]
        width = max(len(bar.label) for bar in domain_series.bars)
        lines.append(f"{'name':<{width}}  achievement  priority")
        for bar in domain_series.bars:
            achievement = (
                format_fraction(bar.achievement)
                if bar.achievement is not None
                else "n/a"
            )
            priority = (
                format_fraction(bar.priority) if bar.priority is not None else "n/a"
            )
            lines.append(f"{bar.label:<{width}}  {achievement:>11}  {priority:>8}")

    advice = summary.advice
    lines += ["", "controls needing attention", "--------------------------"]
    if advice.flagged_controls:
        for node_id, priority in advice.flagged_controls:
            node = find_node(catalog, node_id)
            label = node.name if node else node_id
            lines.append(f"priority {format_fraction(priority)}  {label}")
    else:
        lines.append("none")

    lines += ["", "advice", "------", advice.narrative, ""]
    return "\n".join(lines)
