"""Random streams and exact inverse-transform samplers for the gap process.

Every distribution the chain engine draws from has a closed-form survival
function, so every sampler here is a one-uniform analytic inversion.  The
pure inversion maps are exposed separately from the drawing wrappers: the
maps are deterministic and unit-testable at endpoints, the wrappers bind
them to a stream.  Streams are counter-based so that trajectory i is
reproducible without generating trajectories 0..i-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import RegimeError, SkewConfig

__all__ = [
    "RngStream",
    "JumpDraw",
    "invert_jump_time",
    "invert_jump_size_pos",
    "invert_jump_size_neg",
    "invert_initial_hit_localtime",
    "sample_jump_time",
    "sample_jump_size_pos",
    "sample_jump_size_neg",
    "sample_beta",
    "sample_initial_hit_localtime",
    "draw_jump",
]


@dataclass(frozen=True)
class RngStream:
    """Keyed random source: (seed, stream_index) fully determines the draws.

    Distinct stream indices give statistically independent streams without
    any coordination, which is what makes trajectory-level parallelism
    deterministic regardless of scheduling.
    """

    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        # 128-bit key: high word = seed, low word = stream index
        return np.random.Generator(
            np.random.Philox(key=((int(self.seed) & 0xFFFFFFFFFFFFFFFF) << 64)
                             + (int(self.stream_index) & 0xFFFFFFFFFFFFFFFF))
        )


@dataclass(frozen=True)
class JumpDraw:
    """One chain event: wait along the drift, then either jump or be absorbed.

    ``waiting_time`` is in local-time units of the clock path.  When
    ``absorbed`` the drift segment reached level zero before any jump, the
    waiting time equals h/beta1 exactly and ``jump_size`` is zero.
    Otherwise ``jump_size`` is the signed gap increment beta2 * ell, with
    the drawn mass ell kept in ``local_time_mass`` so event logs never
    reconstruct it by division.
    """

    waiting_time: float
    jump_size: float
    absorbed: bool
    local_time_mass: float = 0.0


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def _uniform_pos(gen: np.random.Generator) -> float:
    # in (0, 1]: zero is excluded so power-law inversions stay finite
    return 1.0 - gen.random()


def invert_jump_time(h: float, beta1: float, v: float) -> float:
    """Quantile map of the jump waiting time at gap h: survival level v -> t.

    The waiting time has survival S(t) = ((h - beta1*t)/h)**((1-beta1)/(2*beta1))
    on [0, h/beta1]; this returns the exact inverse.  v = 1 gives 0, and a v
    small enough to underflow the power gives h/beta1 (absorption).
    """
    if not h > 0.0:
        raise ValueError(f"h must be positive, got {h}")
    if not beta1 > 0.0:
        raise ValueError(f"beta1 must be positive for the chain clock, got {beta1}")
    return (h / beta1) * (1.0 - v ** (2.0 * beta1 / (1.0 - beta1)))


def invert_jump_size_pos(h: float, beta2: float, s: float) -> float:
    """Quantile map of the upward jump's local-time mass: survival level s -> ell.

    ell has survival (1 + beta2*a/h)**(-(1+beta2)/(2*beta2)) on (0, inf).
    """
    if not h > 0.0:
        raise ValueError(f"h must be positive, got {h}")
    if not 0.0 < beta2 < 1.0:
        raise ValueError(f"beta2 must lie in (0,1) for upward jumps, got {beta2}")
    return (h / beta2) * (s ** (-2.0 * beta2 / (1.0 + beta2)) - 1.0)


def invert_jump_size_neg(h: float, beta2: float, u: float) -> float:
    """Quantile map of the downward jump's local-time mass: survival level u -> ell.

    ell has survival (1 - |beta2|*a/h)**((1+beta2)/(2*|beta2|)) on [0, h/|beta2|];
    u = 0 gives the maximal mass h/|beta2| (the jump lands exactly at zero).
    """
    if not h > 0.0:
        raise ValueError(f"h must be positive, got {h}")
    if not -1.0 < beta2 < 0.0:
        raise ValueError(f"beta2 must lie in (-1,0) for downward jumps, got {beta2}")
    b = -beta2
    return (h / b) * (1.0 - u ** (2.0 * b / (1.0 + beta2)))


def invert_initial_hit_localtime(x: float, beta1: float, u: float) -> float:
    """Quantile map for the clock path's local time until the offset path
    first reaches zero (both skewnesses negative): survival level u -> L.

    L has survival (1 + |beta1|*a/x)**(-c) with c = (1+|beta1|)/(2*|beta1|);
    equivalently (1 + |beta1|*L/x)**(-1) is Beta(c, 1).
    """
    if not x > 0.0:
        raise ValueError(f"x must be positive, got {x}")
    if not -1.0 < beta1 < 0.0:
        raise ValueError(f"beta1 must lie in (-1,0) here, got {beta1}")
    a1 = -beta1
    c = (1.0 + a1) / (2.0 * a1)
    b2_draw = u ** (1.0 / c)
    return (x / a1) * (1.0 / b2_draw - 1.0)


def sample_jump_time(h: float, cfg: SkewConfig, rng) -> float:
    """Draw the local-time wait until the next gap jump, at current gap h."""
    gen = _as_generator(rng)
    return invert_jump_time(h, cfg.beta1, _uniform_pos(gen))


def sample_jump_size_pos(h: float, cfg: SkewConfig, rng) -> float:
    """Draw the local-time mass ell of one upward jump (beta2 > 0).

    The gap increment is beta2 * ell; this returns ell itself.
    """
    gen = _as_generator(rng)
    return invert_jump_size_pos(h, cfg.beta2, _uniform_pos(gen))


def sample_jump_size_neg(h: float, cfg: SkewConfig, rng) -> float:
    """Draw the local-time mass ell of one downward jump (beta2 < 0)."""
    gen = _as_generator(rng)
    return invert_jump_size_neg(h, cfg.beta2, _uniform_pos(gen))


def sample_beta(a: float, b: float, rng, size=None):
    """Draw Beta(a, b) through two gamma variates on the given stream.

    Returns a scalar when size is None, otherwise an array of that shape.
    """
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"Beta parameters must be positive, got ({a}, {b})")
    gen = _as_generator(rng)
    g1 = gen.standard_gamma(a, size=size)
    g2 = gen.standard_gamma(b, size=size)
    return g1 / (g1 + g2)


def sample_initial_hit_localtime(cfg: SkewConfig, rng) -> float:
    """Draw the clock path's local time collected before the offset path's
    first visit to zero.  Defined only when both skewnesses are negative;
    it is the first stage of the exchanged-parameter reduction."""
    if not (cfg.beta1 < 0.0 and cfg.beta2 < 0.0):
        raise RegimeError(
            f"initial-hit local time requires both skewnesses negative, got "
            f"({cfg.beta1}, {cfg.beta2})"
        )
    gen = _as_generator(rng)
    return invert_initial_hit_localtime(cfg.x, cfg.beta1, _uniform_pos(gen))


_ABSORB_TOL = 1e-15  # relative width of the absorption window at the segment end


def draw_jump(h: float, cfg: SkewConfig, rng) -> JumpDraw:
    """Draw one full chain event at gap h: wait, then jump or absorb.

    A waiting time within 1e-15 * h of the segment end h/beta1 counts as
    absorption: the theoretical event has probability zero but floating
    point realizes it when the survival power underflows.
    """
    gen = _as_generator(rng)
    b1, b2 = cfg.beta1, cfg.beta2
    t = invert_jump_time(h, b1, _uniform_pos(gen))
    if h - b1 * t <= _ABSORB_TOL * h:
        return JumpDraw(waiting_time=h / b1, jump_size=0.0, absorbed=True)
    if b2 > 0.0:
        ell = invert_jump_size_pos(h - b1 * t, b2, _uniform_pos(gen))
    else:
        ell = invert_jump_size_neg(h - b1 * t, b2, _uniform_pos(gen))
    return JumpDraw(waiting_time=t, jump_size=b2 * ell, absorbed=False, local_time_mass=ell)
