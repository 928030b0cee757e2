"""Acceptance gate: one test and one summary line per criterion.

Criteria 1-8 come from the property suites in ``depth2pit.suites`` at their
full sizes; criterion 9 reruns them with the same seed and compares reports.
"""

from __future__ import annotations

import pytest

from depth2pit.suites import SuiteConfig, report, run_suite

from .conftest import ACCEPTANCE_LINES

SEED = 0
RUNTIME_HINTS = {1: 30.0, 4: 60.0, 8: 10.0}  # seconds, informational only


@pytest.fixture(scope="module")
def first_run():
    return run_suite(SuiteConfig(seed=SEED))


def _note(number: int, passed: bool, text: str):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.parametrize("number", range(1, 9))
def test_criterion(first_run, number):
    result = first_run[number - 1]
    assert result.name.startswith(f"{number} ")
    hint = RUNTIME_HINTS.get(number)
    timing = f" ({result.seconds:.1f}s" + (f", budget {hint:.0f}s)" if hint else ")")
    _note(number, result.passed, result.line().split(" ", 1)[1] + timing)
    assert result.passed, "\n".join(result.failures)


def test_criterion_9_determinism(first_run):
    again = run_suite(SuiteConfig(seed=SEED))
    same = report(first_run).encode() == report(again).encode()
    _note(9, same, f"repeat run with seed {SEED} gives {'identical' if same else 'different'} report bytes")
    assert same
