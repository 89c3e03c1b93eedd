"""Exact event-driven simulation of the gap process.

Between jumps the gap declines deterministically at rate beta1 in the
local-time clock of the clock path; at excursion-driven events it jumps by
beta2 times a drawn local-time mass.  Because both the waiting times and
the jump masses have closed-form inverses, each trajectory is exact in law
up to a single epsilon-truncation at the accumulation of jumps near level
zero, whose deterministic remainder h/beta1 is the almost-sure minimum of
the leftover clock time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import RegimeError, SkewConfig, classify_regime
from .samplers import _as_generator, draw_jump, sample_initial_hit_localtime

__all__ = [
    "ChainState",
    "HittingSample",
    "ChainTrajectory",
    "run_chain",
    "run_negneg",
    "log_drift_diagnostic",
]

_LEVEL_CAP_FACTOR = 1e12  # runaway-growth cap, in units of the starting gap


@dataclass(frozen=True)
class ChainState:
    """Snapshot of a running chain: current gap, elapsed clock, events so far."""

    level: float
    local_time: float
    jump_count: int


@dataclass(frozen=True)
class HittingSample:
    """One draw of the meeting local time.

    ``censored`` marks trajectories cut off by the jump cap or the
    runaway-level cap rather than finished; censored draws carry the clock
    value reached so far, a lower bound.  ``second_local_time`` is the
    local time the offset path accumulated at its own zero by the meeting,
    implied by the balance identity (beta1*u_star - x)/beta2.
    """

    u_star: float
    censored: bool
    jump_count: int
    second_local_time: float
    truncation_level: float


@dataclass(frozen=True)
class ChainTrajectory:
    """One chain realization: the event log plus the resulting sample.

    ``events`` is a (k, 3) array with one row per jump: the clock value at
    the jump, the gap just before it, and the drawn local-time mass.  The
    log is filled only when the run requested recording; it is empty
    otherwise.  ``config`` makes the trajectory self-describing for
    diagnostics.
    """

    config: SkewConfig
    events: np.ndarray
    result: HittingSample


def run_chain(
    cfg: SkewConfig,
    rng,
    eps: float = 1e-9,
    max_jumps: int = 100000,
    record: bool = False,
) -> ChainTrajectory:
    """Simulate the gap process from x until absorption at zero.

    Requires beta1 > 0: the chain representation drifts downward in the
    clock path's local time.  Both-negative skewnesses go through
    run_negneg instead; beta1 < 0 with beta2 > 0 never meets.

    Termination: a drawn waiting time reaching the segment end is exact
    absorption; a gap below eps ends the run with the deterministic
    remainder h/beta1 added to the clock; hitting max_jumps (or a runaway
    gap of 1e12 times the start, possible only when meeting is not
    guaranteed) censors the sample.
    """
    b1, b2 = cfg.beta1, cfg.beta2
    if b1 <= 0.0:
        raise RegimeError(
            f"the chain needs beta1 > 0, got beta1={b1}; "
            "use run_negneg when both skewnesses are negative"
        )
    if not 0.0 < eps < cfg.x:
        raise ValueError(f"eps must lie in (0, x), got eps={eps} with x={cfg.x}")
    if max_jumps < 1:
        raise ValueError(f"max_jumps must be at least 1, got {max_jumps}")

    gen = _as_generator(rng)
    level_cap = cfg.x * _LEVEL_CAP_FACTOR
    h = cfg.x
    u = 0.0
    jumps = 0
    censored = False
    events: list[tuple[float, float, float]] = []

    while True:
        if h < eps:
            u += h / b1
            break
        if jumps >= max_jumps or h > level_cap:
            censored = True
            break
        d = draw_jump(h, cfg, gen)
        u += d.waiting_time
        if d.absorbed:
            break
        pre = h - b1 * d.waiting_time
        if record:
            events.append((u, pre, d.local_time_mass))
        h = pre + d.jump_size
        jumps += 1

    result = HittingSample(
        u_star=u,
        censored=censored,
        jump_count=jumps,
        second_local_time=(b1 * u - cfg.x) / b2,
        truncation_level=eps,
    )
    log = np.asarray(events, dtype=np.float64).reshape(len(events), 3)
    return ChainTrajectory(config=cfg, events=log, result=result)


def run_negneg(
    cfg: SkewConfig,
    rng,
    eps: float = 1e-9,
    max_jumps: int = 100000,
) -> HittingSample:
    """Meeting local time when both skewnesses are negative.

    Two stages: first the clock path alone pushes the gap up until the
    offset path's first zero visit (closed-form draw), then the two roles
    are exchanged and the chain runs with the skewness magnitudes swapped,
    since from that point it is the offset path's local time that drives
    the gap downward.  The result is mapped back to the clock path's own
    local time at the meeting.
    """
    b1, b2 = cfg.beta1, cfg.beta2
    if not (b1 < 0.0 and b2 < 0.0):
        raise RegimeError(f"run_negneg needs both skewnesses negative, got ({b1}, {b2})")
    regime = classify_regime(cfg)
    if not regime.coalescence_guaranteed:
        raise RegimeError(
            "meeting is not guaranteed here: need |beta2| > |beta1|/(1+2|beta1|), "
            f"got |beta2|={abs(b2)} vs {abs(b1)/(1.0+2.0*abs(b1)):.6g}"
        )
    gen = _as_generator(rng)
    a1, a2 = -b1, -b2
    first_stage = sample_initial_hit_localtime(cfg, gen)
    gap = cfg.x + a1 * first_stage
    exchanged = SkewConfig(x=gap, beta1=a2, beta2=a1)
    inner = run_chain(exchanged, gen, eps=eps, max_jumps=max_jumps).result
    u_star = (a2 * inner.u_star - cfg.x) / a1
    return HittingSample(
        u_star=u_star,
        censored=inner.censored,
        jump_count=inner.jump_count,
        second_local_time=(b1 * u_star - cfg.x) / b2,
        truncation_level=eps,
    )


def log_drift_diagnostic(trajectories, clock_budget: float = 8.0) -> float:
    """Estimate the log-gap drift rate from recorded trajectories.

    Each trajectory is followed along its drift segments while the
    additive clock (time integral of 1/gap) accumulates; at the fixed
    budget the log of the stopped level, centered at log x and divided by
    the budget, estimates the drift rate of the log-gap.  The average over
    trajectories converges to the log_drift_rate constant; in particular
    its sign decides whether the gap collapses.

    Censored trajectories are skipped: extrapolating their final segment
    would pretend jumps stopped.  Uncensored ones always reach the budget
    because the additive clock diverges as the level drops.
    """
    if clock_budget <= 0.0:
        raise ValueError(f"clock_budget must be positive, got {clock_budget}")
    vals = []
    for traj in trajectories:
        if traj.result.censored:
            continue
        cfg = traj.config
        b1, b2 = cfg.beta1, cfg.beta2
        if b1 <= 0.0:
            raise RegimeError("the diagnostic walks drift segments, which needs beta1 > 0")
        clock = 0.0
        level = cfg.x
        stop_level = None
        for u_k, pre_k, ell_k in traj.events:
            seg = math.log(level / pre_k) / b1
            if clock + seg >= clock_budget:
                stop_level = level * math.exp(-b1 * (clock_budget - clock))
                break
            clock += seg
            level = pre_k + b2 * ell_k
        if stop_level is None:
            # final segment: pure drift to absorption, clock diverges
            stop_level = level * math.exp(-b1 * (clock_budget - clock))
        vals.append((math.log(stop_level) - math.log(cfg.x)) / clock_budget)
    if not vals:
        raise ValueError("no uncensored trajectories to diagnose")
    return float(np.mean(vals))
