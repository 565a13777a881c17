"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The lines are repeated in the pytest terminal summary.
"""

import pytest

from deltacasimir.verify import CRITERIA, run_criterion

LINES = {}


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number):
    result = run_criterion(number)
    LINES[number] = result.line()
    print(result.line())
    assert result.passed, result.line()
