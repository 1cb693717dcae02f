"""ISO 27001 compliance-readiness assessment toolkit.

A six-domain control catalog (organization, stakeholder, tools & technology,
policy, culture, knowledge) is scored on a 0..4 scale at its issue leaves;
achievements roll up by recursive arithmetic means, priorities are the gap
to the ideal value 4, and sessions track repeated assessment experiments.
"""

from .catalog import (
    Catalog,
    CatalogError,
    CatalogNode,
    CatalogParseError,
    CatalogValidationError,
    NodeKind,
    dump_catalog,
    find_node,
    leaves,
    load_bundled_catalog,
    load_catalog,
    load_catalog_file,
    nodes_of_kind,
)
from .report import (
    Advice,
    HistogramSeries,
    Summary,
    advice_for,
    histogram,
    render_csv,
    render_json,
    render_text,
    summarize,
)
from .scoring import (
    Assessment,
    IncompleteAssessmentError,
    NodeScore,
    Predicate,
    ScoreReport,
    ScoringError,
    UnknownLeafError,
    dump_assessment,
    format_fraction,
    load_assessment,
    node_mean,
    predicate_of,
    priority_of,
    rollup,
    to_percentage,
)
from .session import (
    Experiment,
    Session,
    SessionError,
    SessionStore,
    UnknownSessionError,
)

__version__ = "0.1.0"

__all__ = [
    "Advice",
    "Assessment",
    "Catalog",
    "CatalogError",
    "CatalogNode",
    "CatalogParseError",
    "CatalogValidationError",
    "Experiment",
    "HistogramSeries",
    "IncompleteAssessmentError",
    "NodeKind",
    "NodeScore",
    "Predicate",
    "ScoreReport",
    "ScoringError",
    "Session",
    "SessionError",
    "SessionStore",
    "Summary",
    "UnknownLeafError",
    "UnknownSessionError",
    "advice_for",
    "dump_assessment",
    "dump_catalog",
    "find_node",
    "format_fraction",
    "histogram",
    "leaves",
    "load_assessment",
    "load_bundled_catalog",
    "load_catalog",
    "load_catalog_file",
    "node_mean",
    "nodes_of_kind",
    "predicate_of",
    "priority_of",
    "render_csv",
    "render_json",
    "render_text",
    "rollup",
    "summarize",
    "to_percentage",
]
