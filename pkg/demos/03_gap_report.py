"""
Gap analysis and report rendering
=================================

From one rollup the report module derives the summarize view (grade,
percentage, predicate, advice naming strongest/weakest areas), paired
achievement/priority histograms per domain or control, and three render
formats: text, CSV and JSON.
"""

import json
from pathlib import Path

from readiness import Assessment, NodeKind, load_bundled_catalog, rollup, summarize
from readiness.report import histogram, render_csv, render_text

catalog = load_bundled_catalog()
fixture = Path(__file__).parent.parent / "tests/fixtures/worked-example-assessment.json"
scores = json.loads(fixture.read_text())["scores"]
report = rollup(catalog, Assessment(catalog.name, catalog.version, scores))

summary = summarize(report, catalog)
print("strongest domains:", [i for i, _ in summary.advice.strongest_domains[:2]])
print("weakest domains:  ", [i for i, _ in summary.advice.weakest_domains[:2]])
print("flagged controls: ", len(summary.advice.flagged_controls))
print()
print(summary.advice.narrative)

print("\ndomain histogram as CSV:")
print(render_csv(histogram(report, catalog, NodeKind.DOMAIN)))

print("full text report:")
print(render_text(report, catalog))
