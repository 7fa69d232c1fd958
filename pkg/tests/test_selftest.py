import math

import pytest

from src.core import measures, selftest
from src.core.selftest import SUITES, SuiteResult, run_selftest


class TestSuiteResult:
    def test_check_records_worst(self):
        result = SuiteResult("demo")
        result.check("small", 1e-14, 1e-12)
        result.check("large", 1e-13, 1e-12)
        assert result.passed
        assert result.checks == 2
        assert result.worst_check == "large"

    def test_failure(self):
        result = SuiteResult("demo")
        result.check("bad", 1e-3, 1e-8)
        result.check("nan", math.nan, 1.0)
        assert not result.passed
        assert len(result.failures) == 2
        assert result.to_dict()["failed"] == 2


class TestRunSelftest:
    @pytest.mark.parametrize("suite", SUITES)
    def test_each_suite_passes(self, suite):
        report = run_selftest(7, suites=(suite,))
        assert report.passed, report.suites[0].failures
        assert report.suites[0].checks > 0

    def test_report_document(self):
        report = run_selftest(42, suites=("specfun",))
        document = report.to_dict()
        assert document["seed"] == 42
        assert document["passed"] is True
        assert [s["suite"] for s in document["suites"]] == ["specfun"]

    def test_crashing_suite_is_a_failure(self, monkeypatch):
        def explode(result, seed):
            raise RuntimeError("boom")

        monkeypatch.setitem(selftest._RUNNERS, "qstate", explode)
        report = run_selftest(42, suites=("qstate",))
        assert not report.passed
        assert "RuntimeError" in report.suites[0].failures[0]

    def test_zeroed_metric_is_caught(self, monkeypatch):
        monkeypatch.setattr("src.core.measures.monotone_metric", lambda spec, rho, A, B: 0.0)
        report = run_selftest(42, suites=("measures",))
        assert not report.passed
        assert any("K(i[rho,H], i[rho,H]) = I" in failure for failure in report.suites[0].failures)

    def test_basis_dependent_correlation_is_caught(self, monkeypatch):
        original = measures.local_correlation

        def skewed(spec, state, keep='a', basis=None):
            return original(spec, state, keep, basis) + (0.5 if basis is not None else 0.0)

        monkeypatch.setattr("src.core.detect.local_correlation", skewed)
        report = run_selftest(42, suites=("detect",))
        assert not report.passed
        assert any("F_bar basis independence" in failure for failure in report.suites[0].failures)

    def test_sample_sizes(self):
        report = run_selftest(3, suites=("detect",))
        # 50 product states and 50 separable states, four functions each
        assert report.suites[0].checks >= 4 * 50 + 5 * 50
