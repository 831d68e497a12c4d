"""The twelve acceptance criteria, one test each, at their stated tolerances.

Each test prints a ``criterion N PASS|FAIL ...`` line to the terminal (output
capture is bypassed so the lines reach ``pytest -v`` logs).
"""

import json

import pytest

from shiftaut import acceptance


@pytest.mark.parametrize("number, title, check", acceptance.CRITERIA, ids=[f"c{i:02d}" for i, _, _ in acceptance.CRITERIA])
def test_criterion(number, title, check, capsys):
    rep = check()
    with capsys.disabled():
        print("\n" + acceptance.format_line(number, title, rep))
    assert rep.passed, json.dumps(rep.to_json(), default=repr)[:2000]
