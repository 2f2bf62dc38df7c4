"""Acceptance criteria 1-10, one pass/fail line printed per criterion.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the table;
criteria 6-10 need the three reference simulations (a few minutes).
"""

import json

import pytest

from pmefront import verify


def report(result):
    print()
    print(verify.format_line(result))
    print("      " + json.dumps(result.metrics, default=float, sort_keys=True))
    if result.detail:
        print("      " + result.detail)


@pytest.fixture(scope="module", autouse=True)
def _warm():
    verify.warm_up()


@pytest.mark.parametrize("number", verify.QUICK)
def test_quick_tier(number):
    result = verify.run_criterion(number)
    report(result)
    assert result.passed, result.metrics


@pytest.mark.slow
@pytest.mark.parametrize("number", verify.FULL)
def test_full_tier(number, reference_runs):
    result = verify.run_criterion(number, reference_runs)
    report(result)
    assert result.passed, result.metrics
