"""The randomized invariant suites themselves: every suite must run
green on seeded inputs, and the report plumbing must be reproducible."""

import pytest

from seqent import CheckReport, CheckViolation, run_suite, suite_names
from seqent.checks import SUITES


def test_suite_names_sorted_and_complete():
    names = suite_names()
    assert names == sorted(names)
    assert set(names) == set(SUITES)
    assert "counter-inequalities" in names
    assert "counting-identities" in names
    assert "parser-roundtrip" in names


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_at_reduced_size(name):
    report = run_suite(name, cases=30)
    assert report.passed, report.violations[:3]
    assert report.suite == name
    assert report.cases == 30
    assert report.violations == ()


def test_unknown_suite_is_keyerror():
    with pytest.raises(KeyError, match="unknown suite"):
        run_suite("no-such-suite")


def test_default_case_counts():
    assert SUITES["counter-inequalities"][0] == 200
    assert SUITES["counting-identities"][0] == 500
    assert SUITES["parser-roundtrip"][0] == 500


def test_seed_reproducibility():
    a = run_suite("count-bounds", cases=20, seed=5)
    b = run_suite("count-bounds", cases=20, seed=5)
    assert a == b


def test_counting_identities_notes_cost_guard():
    report = run_suite("counting-identities", cases=40)
    assert len(report.notes) == 1
    assert "evaluated" in report.notes[0]


def test_report_summary_lines():
    ok = CheckReport("demo", 7, True, ())
    assert ok.summary() == "demo: pass (7 cases)"
    bad = CheckReport(
        "demo", 7, False, (CheckViolation("case 0", "count dropped"),)
    )
    assert bad.summary() == "demo: FAIL (7 cases, 1 violations)"
