"""Acceptance criteria: one PASS/FAIL line per criterion (run with ``-s`` to see them)."""
import pytest

from nlho.validation import CRITERIA, ValidationConfig


@pytest.fixture(scope="module")
def cfg():
    # shared so the FD oracle is built once for criteria 1 and 5
    return ValidationConfig()


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__.replace("criterion_", "") for c in CRITERIA])
def test_criterion(criterion, cfg, capsys):
    result = criterion(cfg)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
