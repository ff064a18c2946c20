"""Acceptance criteria 1-10, one test each.

Every criterion runs at its stated tolerance from seed 0. Each test prints a
``[PASS]``/``[FAIL]`` line; the lines are also collected into the pytest
terminal summary. Run as a script for the lines alone:
``python tests/test_acceptance.py``.
"""

import sys

import pytest

from gaborapprox import suite

SEED = 0
ACCEPTANCE_LINES = []


@pytest.fixture(scope="module")
def results():
    return suite.run_all(SEED)


def _report(result):
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    return result


@pytest.mark.parametrize("name", list(suite.CHECKS) + ["determinism"])
def test_criterion(results, name):
    res = _report(results[name])
    assert res.passed, f"{res.name}: {res.data}"


def test_direct_rate_details(results):
    data = results["direct-rate"].data
    assert data["alpha_hat"] >= 0.35
    assert data["partial_sum_growth"] <= 0.05


def test_bernstein_details(results):
    for label, alpha, growth in (("diagonal", 1.5, 1.6), ("mixed", 3.0, 3.1)):
        d = results["bernstein"].data[label]
        assert d["alpha_theory"] == alpha
        assert 0.5 <= d["stability"] <= 2 and d["fitted_growth"] <= growth


def test_inverse_records_spread(results):
    for d in results["inverse"].data.values():
        assert d["spread"] <= 1e3 and d["homogeneity_error"] <= 1e-10


if __name__ == "__main__":
    out = suite.run_all(SEED)
    for res in out.values():
        print(res.line())
    sys.exit(0 if all(r.passed for r in out.values()) else 1)
