"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run directly with ``python3 tests/test_acceptance.py`` for the bare report.
"""

from __future__ import annotations

import sys

import pytest

from distqla.acceptance import CRITERIA, parse_suite, run_criterion, run_suite
from distqla.acceptance import Context


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[f"criterion-{k}-{CRITERIA[k][0].replace(' ', '-')}" for k in sorted(CRITERIA)])
def test_criterion(number, capsys):
    res = run_criterion(number, Context(seed=0))
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail


def test_injected_fault_is_caught():
    res = run_criterion(1, Context(seed=0, faults=frozenset({"perturbed-dilation"})))
    assert not res.passed


@pytest.mark.parametrize("bad", ["", "0", "11", "3-1", "x"])
def test_suite_names_validated(bad):
    with pytest.raises(ValueError):
        parse_suite(bad)


def test_suite_selection():
    assert parse_suite("all") == list(range(1, 11))
    assert parse_suite("1,3-5") == [1, 3, 4, 5]


if __name__ == "__main__":
    results = run_suite("all")
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
