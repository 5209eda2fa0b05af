"""The full acceptance suite at its stated sizes and tolerances.

Each criterion prints one PASS/FAIL line as it finishes, and the lines are
repeated in the terminal summary.
"""

import json

import pytest

from betafreq import acceptance
from betafreq.orbit import default_backend

from conftest import ACCEPTANCE_RESULTS


@pytest.mark.parametrize("criterion", acceptance.CRITERIA,
                         ids=[c.__name__.removeprefix("criterion_") for c in acceptance.CRITERIA])
def test_criterion(criterion):
    result = criterion()
    ACCEPTANCE_RESULTS.append(result)
    print(f"\n{result.line()}  [backend: {default_backend()}]")
    assert result.passed, json.dumps(result.detail, indent=1, default=str)[:4000]
