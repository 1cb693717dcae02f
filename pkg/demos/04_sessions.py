"""
Session tracking and grade progression
======================================

Sessions persist a user's repeated assessment experiments in an
append-only JSON-Lines store. Re-running an assessment after remediation
shows up as a grade delta between experiments.
"""

import json
import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

from readiness import Assessment, SessionStore, format_fraction, load_bundled_catalog

catalog = load_bundled_catalog()
fixture = Path(__file__).parent.parent / "tests/fixtures/worked-example-assessment.json"
first_scores = json.loads(fixture.read_text())["scores"]

with tempfile.TemporaryDirectory() as tmp:
    store = SessionStore(Path(tmp) / "store")
    t0 = datetime(2026, 8, 10, 9, 0, 0, tzinfo=timezone.utc)

    session = store.create_session("alice", catalog.ref, t0)
    print(f"session {session.session_id} for {session.user}")

    # first experiment: the baseline assessment, 40 minutes of work
    store.record_experiment(
        session.session_id,
        catalog,
        Assessment(catalog.name, catalog.version, first_scores),
        t0,
        t0 + timedelta(minutes=40),
    )

    # second experiment a week later: every answer one step better
    improved = {k: min(v + 1, 4) for k, v in first_scores.items()}
    store.record_experiment(
        session.session_id,
        catalog,
        Assessment(catalog.name, catalog.version, improved),
        t0 + timedelta(days=7),
        t0 + timedelta(days=7, minutes=35),
    )

    print("\nprogression:")
    for row in store.progression(session.session_id):
        delta = "" if row.delta is None else f"  ({'+' if row.delta >= 0 else ''}{format_fraction(row.delta)})"
        print(f"  experiment {row.index}: {format_fraction(row.achievement)}{delta}")

    # the store is plain JSONL: one header line, one line per experiment
    raw = (Path(tmp) / "store" / f"{session.session_id}.jsonl").read_text()
    kinds = [json.loads(line)["type"] for line in raw.splitlines()]
    print(f"\nstore file events: {kinds}")
