"""Empirical summaries, exact KS, DKW bounds, and the validation report."""

import math

import numpy as np
import pytest

from skewsim import (
    InfiniteMomentError,
    RngStream,
    SkewConfig,
    hitting_law,
)
from skewsim.stats import (
    DEFAULT_BIAS_ALLOWANCE,
    EmpiricalSummary,
    dkw_bound,
    exact_ks,
    ks_against,
    merge,
    moment_check,
    summarize,
    validation_report,
)

LAW = hitting_law(SkewConfig(x=1.0, beta1=0.5, beta2=0.25))


class TestDkwBound:
    def test_frozen_values(self):
        assert math.isclose(dkw_bound(1000), 0.05146997846583985, rel_tol=1e-15)
        assert math.isclose(dkw_bound(10000), 0.016276236307187292, rel_tol=1e-15)
        assert math.isclose(dkw_bound(100000), 0.005146997846583986, rel_tol=1e-15)

    def test_scales_as_inverse_sqrt(self):
        assert math.isclose(dkw_bound(1000) / dkw_bound(100000), 10.0, rel_tol=1e-12)

    def test_alpha_dependency(self):
        assert dkw_bound(100, alpha=0.05) < dkw_bound(100, alpha=0.01)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            dkw_bound(0)
        with pytest.raises(ValueError):
            dkw_bound(100, alpha=0.0)


class TestExactKs:
    def test_hand_computed_case(self):
        samples = np.array([0.1, 0.5, 0.9])
        ks = exact_ks(lambda x: x, samples)
        # d+ = max(i/3 - F_i) = 7/30 at the first point, d- matches it
        assert math.isclose(ks, 7.0 / 30.0, rel_tol=1e-14)

    def test_perfect_quantile_fit(self):
        n = 100
        samples = (np.arange(1, n + 1) - 0.5) / n
        assert math.isclose(exact_ks(lambda x: x, samples), 0.5 / n, rel_tol=1e-12)

    def test_constant_samples_degenerate(self):
        # all-equal samples against a continuous CDF: gap is max(F(c), 1-F(c))
        samples = np.full(50, 0.3)
        assert math.isclose(exact_ks(lambda x: x, samples), 0.7, rel_tol=1e-14)

    def test_dkw_guarantee_pass_rate(self):
        # uniform draws against the uniform CDF: the 99% bound plus the
        # default allowance must hold in at least 98 of 100 repetitions
        n = 100000
        passes = 0
        for rep in range(100):
            gen = RngStream(900, rep).generator()
            samples = np.sort(gen.random(n))
            ks = exact_ks(lambda x: x, samples)
            passes += ks <= dkw_bound(n) + DEFAULT_BIAS_ALLOWANCE
        assert passes >= 98

    def test_shifted_samples_fail(self):
        # a deliberate 0.1*x/beta1 shift must blow through the DKW band
        draws = LAW.sample(RngStream(901, 0), 20000) + 0.2
        summary = ks_against(lambda u: LAW.cdf(u), draws)
        assert summary.ks_statistic > summary.dkw_bound_99 + DEFAULT_BIAS_ALLOWANCE


class TestSummaries:
    def test_summarize_moments(self):
        samples = np.array([1.0, 2.0, 3.0, 4.0])
        s = summarize(samples)
        assert s.n == 4
        m1, m2 = s.moment_table
        assert m1.k == 1 and math.isclose(m1.value, 2.5)
        assert m2.k == 2 and math.isclose(m2.value, 7.5)
        expected_se = float(np.std(samples, ddof=1)) / 2.0
        assert math.isclose(m1.standard_error, expected_se, rel_tol=1e-12)
        assert math.isnan(s.ks_statistic)

    def test_censored_fraction(self):
        s = summarize(np.ones(90), censored_count=10)
        assert math.isclose(s.censored_fraction, 0.1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize(np.array([]))

    def test_permutation_invariance(self):
        gen = RngStream(902, 0).generator()
        samples = gen.random(500)
        a = ks_against(lambda x: x, samples)
        b = ks_against(lambda x: x, gen.permutation(samples))
        assert a.ks_statistic == b.ks_statistic

    def test_merge_equals_single_shard(self):
        gen = RngStream(903, 0).generator()
        samples = gen.random(1000)
        whole = ks_against(lambda x: x, samples)
        left = summarize(samples[:400], censored_count=3)
        right = summarize(samples[400:], censored_count=2)
        merged = ks_against(lambda x: x, merge(left, right))
        assert merged.ks_statistic == whole.ks_statistic
        assert merged.n == 1000
        assert merged.censored_count == 5
        for a, b in zip(merged.moment_table, whole.moment_table):
            assert math.isclose(a.value, b.value, rel_tol=1e-13)


class TestMomentCheck:
    def test_posneg_unit_mean(self):
        # Beta(1.5, 0.5) mean = 0.75
        from skewsim.samplers import sample_beta

        draws = sample_beta(1.5, 0.5, RngStream(904, 0), size=50000)
        checks = moment_check(draws, [0.75], orders=(1,))
        assert len(checks) == 1
        assert checks[0].passed
        assert abs(checks[0].z_score) <= 4.0

    def test_beta_second_moment(self):
        # Beta(2, 0.5): a(a+1)/((a+b)(a+b+1)) = 0.6857...
        from skewsim.samplers import sample_beta

        draws = sample_beta(2.0, 0.5, RngStream(905, 0), size=50000)
        checks = moment_check(draws, [0.8, 0.6857142857142857], orders=(1, 2))
        assert all(c.passed for c in checks)

    def test_detects_wrong_moment(self):
        gen = RngStream(906, 0).generator()
        draws = gen.random(20000)
        checks = moment_check(draws, [0.6], orders=(1,))
        assert not checks[0].passed

    def test_refuses_infinite_analytic(self):
        with pytest.raises(InfiniteMomentError):
            moment_check(np.ones(10), [math.inf], orders=(1,))
        with pytest.raises(InfiniteMomentError):
            moment_check(np.ones(10), [None], orders=(1,))

    def test_rejects_bad_orders(self):
        with pytest.raises(ValueError):
            moment_check(np.ones(10), [1.0], orders=(3,))
        with pytest.raises(ValueError):
            moment_check(np.ones(10), [1.0, 2.0], orders=(1,))


class TestValidationReport:
    def _summary(self, ks=0.004):
        return EmpiricalSummary(
            n=100000,
            samples=np.array([1.0]),
            ks_statistic=ks,
            dkw_bound_99=dkw_bound(100000),
            moment_table=(),
            censored_count=0,
        )

    def test_exact_key_set(self):
        rep = validation_report("test-law", self._summary(), seed=7, config={"x": 1.0})
        assert set(rep) == {
            "law",
            "n",
            "ks",
            "dkw99",
            "biasAllowance",
            "pass",
            "moments",
            "censoredFraction",
            "seed",
            "config",
        }
        assert rep["law"] == "test-law"
        assert rep["seed"] == 7
        assert isinstance(rep["pass"], bool)

    def test_pass_rule(self):
        assert validation_report("x", self._summary(ks=0.007))["pass"]
        assert not validation_report("x", self._summary(ks=0.0072))["pass"]

    def test_nan_ks_serializes_null(self):
        rep = validation_report("x", self._summary(ks=float("nan")))
        assert rep["ks"] is None
        assert rep["pass"]

    def test_moment_rows(self):
        checks = moment_check(np.array([1.0, 2.0, 3.0]), [2.0], orders=(1,))
        rep = validation_report("x", self._summary(), moments=checks)
        row = rep["moments"][0]
        assert set(row) == {"k", "empirical", "standardError", "analytic", "zScore", "pass"}

    def test_refused_rows_do_not_fail(self):
        refused = {"k": 2, "empirical": 5.0, "standardError": 0.1, "analytic": None,
                   "refused": True, "pass": True}
        rep = validation_report("x", self._summary(), moments=[refused])
        assert rep["pass"]

    def test_failed_moment_fails_report(self):
        checks = moment_check(np.linspace(0.0, 1.0, 1000), [0.9], orders=(1,))
        rep = validation_report("x", self._summary(), moments=checks)
        assert not rep["pass"]

    def test_default_allowance(self):
        assert DEFAULT_BIAS_ALLOWANCE == 0.002
