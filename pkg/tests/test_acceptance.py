"""The eleven acceptance criteria, each at its own tolerance and wall-clock limit.

Each test prints one PASS/FAIL line; failures include the recorded details.
"""

import json

import pytest

from cubic_orchard.acceptance import CRITERIA, DEFAULT_SEED, run_criterion, select


def test_registry_has_eleven_criteria():
    assert [c.number for c in CRITERIA] == list(range(1, 12))
    with pytest.raises(KeyError):
        select(["no-such-criterion"])


@pytest.mark.parametrize("crit", CRITERIA, ids=lambda c: f"{c.number:02d}-{c.name}")
def test_criterion(crit, capsys):
    result = run_criterion(crit, DEFAULT_SEED)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, json.dumps(result.details, indent=2, default=str)
    assert result.seconds <= crit.limit
