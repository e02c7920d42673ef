"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria and tolerances live in loccdisc.selftest; the CLI ``selftest``
command runs the same checks.
"""

import pytest

from loccdisc import selftest


@pytest.mark.parametrize("criterion", selftest.CRITERIA, ids=lambda fn: fn.__name__)
def test_criterion(criterion):
    result = criterion()
    tag = "PASS" if result.passed else "FAIL"
    print(f"[{tag}] {result.name}: {result.detail} ({result.elapsed_s:.2f}s)")
    assert result.passed, f"{result.name}: {result.detail}"


def test_runtime_budgets():
    # stated budgets: triples < 10 s, subsets < 30 s, Monte-Carlo < 60 s
    budgets = {
        "three-qutrit-end-to-end": 10.0,
        "unbiased-bell-subsets": 30.0,
        "monte-carlo-agreement": 60.0,
    }
    for fn in selftest.CRITERIA:
        result = fn()
        limit = budgets.get(result.name)
        if limit is not None:
            assert result.elapsed_s < limit, f"{result.name} took {result.elapsed_s:.1f}s"
