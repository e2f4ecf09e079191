"""Acceptance suite: one pass/fail line per criterion (run with ``-s`` to see them)."""
import pytest

from planepovm import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    result = acceptance.CRITERIA[number]()
    print(result.line())
    assert result.passed, result.line()
