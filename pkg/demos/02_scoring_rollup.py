"""
Recursive-mean rollup
=====================

Each issue is answered on the five-point scale (0 = not implementing ...
4 = excellent). A control's achievement is the mean of its issues, a
class's the mean of its controls, and so on up to the root, whose value
is the organization's overall readiness level. Arithmetic is exact: the
engine works in rationals and only rounds for display.
"""

import json
from pathlib import Path

from readiness import (
    Assessment,
    format_fraction,
    load_bundled_catalog,
    predicate_of,
    priority_of,
    rollup,
    to_percentage,
)

catalog = load_bundled_catalog()

# a complete worked assessment of all 21 issues
fixture = Path(__file__).parent.parent / "tests/fixtures/worked-example-assessment.json"
doc = json.loads(fixture.read_text())
assessment = Assessment(catalog.name, catalog.version, doc["scores"])

report = rollup(catalog, assessment)

print("domain achievements (exact, then display-rounded):")
for domain in catalog.root.children:
    score = report.per_node[domain.id]
    print(
        f"  {domain.name:<20} {str(score.achievement):>7}"
        f"  = {format_fraction(score.achievement)}"
        f"  (priority {format_fraction(score.priority)})"
    )

overall = report.overall.achievement
print(f"\noverall: {overall} = {format_fraction(overall)} / 4")
print(f"percentage: {format_fraction(to_percentage(overall))}%")
print(f"predicate: {predicate_of(overall).label}")

# priority is always the exact complement to the ideal value 4
assert priority_of(overall) + overall == 4

# partial mode: score two issues, means cover only what was answered
draft = Assessment(
    catalog.name, catalog.version,
    {"tech.output_validation.q1": 1, "tech.input_validation.q1": 3},
)
live = rollup(catalog, draft, partial=True)
print(f"\npartial draft: {live.scored_leaves}/{live.total_leaves} answered")
print(f"  tools & technology so far: {live.per_node['tech'].achievement}")
print(f"  complete: {live.complete}")
