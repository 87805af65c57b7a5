"""Runs every acceptance criterion at its stated tolerance, one line each."""

import pytest

from georate.acceptance import CRITERIA, run_all


@pytest.fixture(scope="module")
def results():
    lines = []
    out = run_all(echo=lines.append)
    print()
    print("\n".join(lines))
    return {r.number: r for r in out}


@pytest.mark.parametrize("number, name", [(num, name) for num, name, _ in CRITERIA])
def test_criterion(results, number, name, capsys):
    res = results[number]
    with capsys.disabled():
        print(f"\n{res.line()}")
    assert res.passed, res.line()
