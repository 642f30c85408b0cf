"""The twelve acceptance criteria, one test each; every test prints a PASS/FAIL line."""

from __future__ import annotations

import pytest

from surfdiss.acceptance import CHECKS, run_check

LINES: list[str] = []


@pytest.mark.parametrize("number", [n for n, _, _ in CHECKS], ids=[f"criterion-{n:02d}" for n, _, _ in CHECKS])
def test_criterion(number):
    result = run_check(number)
    LINES.append(result.line())
    print(result.line())
    assert result.passed, result.detail
