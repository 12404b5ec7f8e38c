import pytest

import verification
from verification import (SuiteResult, energy_suite, extension_suite,
                          ground_suite, group_suite, decomposition_suite,
                          peierls_verification, run_all, sweep_orders)


def test_sweep_orders():
    assert sweep_orders(2) == [1, 2, 3]
    assert sweep_orders(4) == [1, 2, 3, 4]


def test_suite_result_caps_failures():
    result = SuiteResult("demo")
    for index in range(25):
        result.check(False, {"index": index})
    assert result.checks == 25
    assert len(result.failures) == verification.MAX_FAILURES
    assert not result.to_dict()["passed"]


def test_group_suite():
    result = group_suite(2, seed=1)
    assert result.passed, result.failures
    assert result.checks > 1000


def test_energy_suite():
    result = energy_suite(2, seed=1, couplings=5)
    assert result.passed, result.failures


def test_decomposition_suite():
    result = decomposition_suite(2, seed=1, trials=30)
    assert result.passed, result.failures


@pytest.mark.parametrize("k", [1, 2])
def test_extension_suite(k):
    result = extension_suite(k, seed=1, depth=3, samples=20)
    assert result.passed, result.failures
    assert result.checks == 2 * 4 ** (k + 2)


def test_ground_suite():
    result = ground_suite(2, seed=1, directions=20)
    assert result.passed, result.failures


def test_peierls_verification():
    result = peierls_verification(1, seed=1, trials=30)
    assert result.passed, result.failures


def test_run_all_reports_a_crashing_suite(monkeypatch):
    def broken(k, seed):
        raise RuntimeError("boom")

    monkeypatch.setattr(verification, "SUITES", (broken,))
    results = run_all(2, seed=0)
    assert len(results) == 1
    assert not results[0].passed
    assert results[0].failures == [{"error": "boom"}]
