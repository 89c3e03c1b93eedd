"""Chain engine: exact trajectories, the two-stage reduction, diagnostics."""

import math

import numpy as np
import pytest

from skewsim import (
    RegimeError,
    RngStream,
    SkewConfig,
    derive_constants,
    log_drift_diagnostic,
    run_chain,
    run_negneg,
)

REFERENCE = SkewConfig(x=1.0, beta1=0.5, beta2=0.25)
POSNEG = SkewConfig(x=1.0, beta1=0.5, beta2=-0.5)
NEGNEG = SkewConfig(x=1.0, beta1=-0.25, beta2=-0.5)


class TestRunChain:
    def test_basic_sample(self):
        traj = run_chain(REFERENCE, RngStream(1, 0))
        r = traj.result
        assert not r.censored
        # the drift alone needs x/beta1 of clock time, jumps only add to it
        assert r.u_star >= REFERENCE.x / REFERENCE.beta1
        assert r.jump_count >= 0
        assert r.truncation_level == 1e-9
        assert traj.config == REFERENCE

    def test_balance_identity(self):
        # beta1*u - x = beta2 * (offset path local time) must be nonnegative
        for i in range(50):
            r = run_chain(REFERENCE, RngStream(2, i)).result
            implied = (REFERENCE.beta1 * r.u_star - REFERENCE.x) / REFERENCE.beta2
            assert r.second_local_time == implied
            assert r.second_local_time >= 0.0

    def test_posneg_bounded_by_drift_time(self):
        # downward jumps only shorten the run: u_star <= x/beta1
        for i in range(200):
            r = run_chain(POSNEG, RngStream(3, i)).result
            assert r.u_star <= POSNEG.x / POSNEG.beta1 + 1e-12

    def test_deterministic_given_stream(self):
        a = run_chain(REFERENCE, RngStream(7, 5), record=True)
        b = run_chain(REFERENCE, RngStream(7, 5), record=True)
        assert a.result == b.result
        assert np.array_equal(a.events, b.events)

    def test_event_log_shape(self):
        traj = run_chain(REFERENCE, RngStream(8, 0), record=True)
        assert traj.events.shape == (traj.result.jump_count, 3)
        # columns: clock at jump, gap just before, drawn mass
        if traj.events.shape[0]:
            assert np.all(traj.events[:, 1] > 0.0)
            assert np.all(traj.events[:, 2] > 0.0)
            assert np.all(np.diff(traj.events[:, 0]) > 0.0)

    def test_no_recording_by_default(self):
        traj = run_chain(REFERENCE, RngStream(8, 1))
        assert traj.events.shape == (0, 3)

    def test_max_jumps_censors(self):
        r = run_chain(REFERENCE, RngStream(9, 0), max_jumps=1).result
        if r.jump_count == 1:
            assert r.censored

    def test_rejects_nonpositive_beta1(self):
        with pytest.raises(RegimeError):
            run_chain(SkewConfig(x=1.0, beta1=-0.25, beta2=-0.5), RngStream(0, 0))

    def test_rejects_bad_eps(self):
        with pytest.raises(ValueError):
            run_chain(REFERENCE, RngStream(0, 0), eps=0.0)
        with pytest.raises(ValueError):
            run_chain(REFERENCE, RngStream(0, 0), eps=2.0)

    def test_rejects_bad_max_jumps(self):
        with pytest.raises(ValueError):
            run_chain(REFERENCE, RngStream(0, 0), max_jumps=0)

    def test_self_similarity_bitwise(self):
        # doubling x doubles every event and the clock value, bit for bit;
        # the truncation level is part of the state and must scale with x
        small = run_chain(
            SkewConfig(x=1.0, beta1=0.5, beta2=0.25), RngStream(20, 3), eps=1e-9, record=True
        )
        big = run_chain(
            SkewConfig(x=2.0, beta1=0.5, beta2=0.25), RngStream(20, 3), eps=2e-9, record=True
        )
        assert big.result.u_star == 2.0 * small.result.u_star
        assert big.result.jump_count == small.result.jump_count
        assert np.array_equal(big.events, 2.0 * small.events)


class TestRunNegneg:
    def test_basic_sample(self):
        r = run_negneg(NEGNEG, RngStream(4, 0))
        assert r.u_star > 0.0
        assert not r.censored

    def test_deterministic(self):
        assert run_negneg(NEGNEG, RngStream(4, 9)) == run_negneg(NEGNEG, RngStream(4, 9))

    def test_rejects_wrong_signs(self):
        with pytest.raises(RegimeError):
            run_negneg(REFERENCE, RngStream(0, 0))
        with pytest.raises(RegimeError):
            run_negneg(SkewConfig(x=1.0, beta1=-0.3, beta2=0.4), RngStream(0, 0))

    def test_rejects_unguaranteed(self):
        # |beta2| = 0.1 < |beta1|/(1+2|beta1|) = 0.25
        with pytest.raises(RegimeError):
            run_negneg(SkewConfig(x=1.0, beta1=-0.5, beta2=-0.1), RngStream(0, 0))

    def test_second_local_time_positive(self):
        for i in range(50):
            r = run_negneg(NEGNEG, RngStream(5, i))
            # (beta1*u - x)/beta2 with both negative: the offset path must
            # have collected enough local time to close the gap
            assert r.second_local_time > 0.0


class TestLogDriftDiagnostic:
    def test_reference_rate(self):
        # [DERIVED] theta = -0.4 for (0.5, 0.25); MC tolerance 0.05 at N=1e4
        trajs = [run_chain(REFERENCE, RngStream(30, i), record=True) for i in range(10000)]
        est = log_drift_diagnostic(trajs)
        theta = derive_constants(REFERENCE).log_drift_rate
        assert math.isclose(theta, -0.4, rel_tol=1e-15)
        assert abs(est - theta) <= 0.05

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            log_drift_diagnostic([])

    def test_rejects_bad_budget(self):
        traj = run_chain(REFERENCE, RngStream(31, 0), record=True)
        with pytest.raises(ValueError):
            log_drift_diagnostic([traj], clock_budget=0.0)
