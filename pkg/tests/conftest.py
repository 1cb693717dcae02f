import json
from pathlib import Path

import pytest

from readiness import Assessment, load_bundled_catalog

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    name = report.nodeid.split("::")[-1]
    print(f"\nACCEPTANCE {outcome}: {name}")


@pytest.fixture(scope="session")
def catalog():
    return load_bundled_catalog()


@pytest.fixture(scope="session")
def worked_example_scores():
    doc = json.loads((FIXTURES / "worked-example-assessment.json").read_text())
    return doc["scores"]


@pytest.fixture(scope="session")
def worked_example_assessment(catalog, worked_example_scores):
    return Assessment(
        catalog_name=catalog.name,
        catalog_version=catalog.version,
        scores=worked_example_scores,
    )
