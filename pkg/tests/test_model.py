"""Configuration validation, derived constants, and regime classification."""

import dataclasses
import json
import math

import pytest

from skewsim import RegimeError, SkewConfig, classify_regime, derive_constants

REFERENCE = SkewConfig(x=1.0, beta1=0.5, beta2=0.25)


class TestSkewConfig:
    def test_reference_accepted(self):
        assert REFERENCE.x == 1.0
        assert REFERENCE.beta1 == 0.5
        assert REFERENCE.beta2 == 0.25

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf, -math.inf, math.nan])
    def test_rejects_bad_gap(self, x):
        with pytest.raises(ValueError):
            SkewConfig(x=x, beta1=0.5, beta2=0.25)

    @pytest.mark.parametrize("b", [0.0, 1.0, -1.0, 1.5, -2.0, math.nan, math.inf])
    def test_rejects_bad_skewness(self, b):
        with pytest.raises(ValueError):
            SkewConfig(x=1.0, beta1=b, beta2=0.25)
        with pytest.raises(ValueError):
            SkewConfig(x=1.0, beta1=0.5, beta2=b)

    def test_frozen(self):
        with pytest.raises(dataclasses.FrozenInstanceError):
            REFERENCE.x = 2.0

    def test_json_round_trip(self):
        text = REFERENCE.to_json()
        assert SkewConfig.from_json(text) == REFERENCE
        assert json.loads(text) == {"x": 1.0, "beta1": 0.5, "beta2": 0.25}

    def test_json_dict_round_trip(self):
        d = REFERENCE.to_json_dict()
        assert set(d) == {"x", "beta1", "beta2"}
        assert SkewConfig.from_json_dict(d) == REFERENCE

    def test_from_json_rejects_unknown_keys(self):
        with pytest.raises(ValueError, match="unknown"):
            SkewConfig.from_json('{"x": 1, "beta1": 0.5, "beta2": 0.25, "extra": 1}')

    def test_from_json_rejects_missing_keys(self):
        with pytest.raises(ValueError, match="missing"):
            SkewConfig.from_json('{"x": 1, "beta1": 0.5}')

    def test_from_json_rejects_non_object(self):
        with pytest.raises(ValueError):
            SkewConfig.from_json("[1, 0.5, 0.25]")


class TestDerivedConstants:
    def test_reference_values(self):
        d = derive_constants(REFERENCE)
        # 1/(2*0.5) - 1/(2*0.25), (1+0.75)/0.5, 0.5*1.25/1, -0.5/1.25
        assert d.coalescence_index == -1.0
        assert d.jump_tail_exponent == 3.5
        assert d.jump_intensity_coeff == 0.625
        assert d.log_drift_rate == -0.4

    def test_mixed_sign_values(self):
        d = derive_constants(SkewConfig(x=1.0, beta1=0.5, beta2=-0.5))
        assert d.coalescence_index == 2.0
        assert d.jump_tail_exponent == 0.5
        assert d.jump_intensity_coeff == -0.125
        assert d.log_drift_rate == -1.0

    def test_equal_skew_drift_rate(self):
        d = derive_constants(SkewConfig(x=1.0, beta1=0.5, beta2=0.5))
        assert math.isclose(d.log_drift_rate, -1.0 / 3.0, rel_tol=1e-15)

    def test_drift_rate_sign_flip(self):
        # beta2 large enough relative to beta1 makes the log-gap grow
        d = derive_constants(SkewConfig(x=1.0, beta1=0.2, beta2=0.9))
        assert d.log_drift_rate > 0.0

    def test_drift_rate_negative_iff_condition(self):
        for b1, b2 in [(0.5, 0.25), (0.3, 0.6), (0.2, 0.9), (0.7, 0.1)]:
            cfg = SkewConfig(x=1.0, beta1=b1, beta2=b2)
            d = derive_constants(cfg)
            cond = b1 > b2 / (1.0 + 2.0 * b2)
            assert (d.log_drift_rate < 0.0) == cond


class TestClassifyRegime:
    def test_pospos_guaranteed(self):
        r = classify_regime(REFERENCE)
        assert r.tag == "PosPos"
        assert r.coalescence_guaranteed
        assert r.coalescence_condition
        assert r.note == ""

    def test_pospos_condition_violated(self):
        r = classify_regime(SkewConfig(x=1.0, beta1=0.2, beta2=0.9))
        assert r.tag == "PosPos"
        assert not r.coalescence_guaranteed
        assert r.note != ""

    def test_posneg_always_guaranteed(self):
        r = classify_regime(SkewConfig(x=1.0, beta1=0.5, beta2=-0.5))
        assert r.tag == "PosNeg"
        assert r.coalescence_guaranteed

    def test_negpos_never_meets(self):
        r = classify_regime(SkewConfig(x=1.0, beta1=-0.3, beta2=0.4))
        assert r.tag == "NegPos"
        assert not r.coalescence_guaranteed
        assert "never" in r.note

    def test_negneg_guaranteed(self):
        # |beta2| = 0.5 > |beta1|/(1+2|beta1|) = 1/6
        r = classify_regime(SkewConfig(x=1.0, beta1=-0.25, beta2=-0.5))
        assert r.tag == "NegNeg"
        assert r.coalescence_guaranteed

    def test_negneg_condition_violated(self):
        # |beta2| = 0.1 < 0.5/2 = 0.25
        r = classify_regime(SkewConfig(x=1.0, beta1=-0.5, beta2=-0.1))
        assert r.tag == "NegNeg"
        assert not r.coalescence_guaranteed

    def test_regime_error_is_value_error(self):
        assert issubclass(RegimeError, ValueError)
