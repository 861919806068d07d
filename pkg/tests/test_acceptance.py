"""Runs every acceptance criterion at its stated tolerance, one line each.

Each test prints the criterion's PASS/FAIL line (visible with -s, and in
the failure report otherwise) and asserts the criterion holds.  Details of
what each criterion checks live in vveis.acceptance.
"""

import pytest

from vveis import acceptance

_IDS = [f"{num}-{name.replace(' ', '-')}"
        for num, name, _ in acceptance.CRITERIA]


@pytest.mark.parametrize("number", [num for num, _, _ in acceptance.CRITERIA],
                         ids=_IDS)
def test_criterion(number):
    result = acceptance.run_one(number)
    print(result.line)
    assert result.ok, result.line
