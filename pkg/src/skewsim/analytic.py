"""Closed-form laws and transform-side analytics for the gap process.

Everything here is deterministic: hitting-time laws as transformed Beta
distributions, survival functions for the local-time mass carried by a
single excursion, Laplace transforms of the meeting local time, confluent
hypergeometric evaluations, and raw residuals of the generator identity
and of the second-order ODE satisfied by the Laplace transform.  The
simulation layer never imports from this module, so agreement between the
two is a genuine cross-check rather than a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .model import RegimeError, SkewConfig, classify_regime, derive_constants
from .samplers import _as_generator, sample_beta
from .special import SpecialFnContext, default_context

__all__ = [
    "InfiniteMomentError",
    "LawDescriptor",
    "hitting_law",
    "hitting_density",
    "hitting_cdf",
    "localtime_survival",
    "excursion_jump_law",
    "laplace_ustar",
    "kummer_m",
    "kummer_u",
    "apply_generator",
    "dynkin_residual",
    "ode_residual",
    "residual_tolerances",
]

_GUARANTEE_SLACK = 1e-6

ArrayLike = Union[float, np.ndarray, Sequence[float]]


class InfiniteMomentError(ValueError):
    """Requested moment of the hitting law does not exist."""


def _beta_log_pdf(v: float, a: float, b: float, ctx: SpecialFnContext) -> float:
    lb = ctx.log_gamma(a) + ctx.log_gamma(b) - ctx.log_gamma(a + b)
    return (a - 1.0) * math.log(v) + (b - 1.0) * math.log1p(-v) - lb


def _beta_pdf(v: float, a: float, b: float, ctx: SpecialFnContext) -> float:
    if v <= 0.0 or v >= 1.0:
        return 0.0
    return math.exp(_beta_log_pdf(v, a, b, ctx))


def _beta_power_moment(a: float, b: float, m: float, ctx: SpecialFnContext) -> float:
    # E[B^m] for B ~ Beta(a, b); exists iff a + m > 0
    if a + m <= 0.0:
        raise InfiniteMomentError(f"E[B^{m}] diverges for Beta({a}, {b})")
    lg = ctx.log_gamma
    return math.exp(lg(a + m) - lg(a) + lg(a + b) - lg(a + b + m))


@dataclass(frozen=True)
class LawDescriptor:
    """Hitting law expressed as a fixed transform of Beta variables.

    transform semantics, with s = scale:
      "reciprocal"          sample = s / B,            B ~ Beta(beta_a, beta_b)
      "direct"              sample = s * B,            B ~ Beta(beta_a, beta_b)
      "product_reciprocal"  sample = s * (1/(B1*B2) - 1),
                            B1 ~ Beta(beta_a, beta_b), B2 ~ Beta(beta_a2, beta_b2)

    For the product form the unit-interval variable is W = B1*B2, related
    to the sample by W = s / (s + sample).
    """

    transform: str
    beta_a: float
    beta_b: float
    scale: float
    beta_a2: float = float("nan")
    beta_b2: float = float("nan")

    def __post_init__(self) -> None:
        if self.transform not in ("reciprocal", "direct", "product_reciprocal"):
            raise ValueError(f"unknown transform {self.transform!r}")
        if not (self.beta_a > 0.0 and self.beta_b > 0.0):
            raise ValueError(
                f"Beta parameters must be positive, got ({self.beta_a}, {self.beta_b})"
            )
        if not self.scale > 0.0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.transform == "product_reciprocal":
            if not (self.beta_a2 > 0.0 and self.beta_b2 > 0.0):
                raise ValueError(
                    "second Beta pair must be positive, got "
                    f"({self.beta_a2}, {self.beta_b2})"
                )

    def support(self) -> tuple[float, float]:
        if self.transform == "reciprocal":
            return (self.scale, math.inf)
        if self.transform == "direct":
            return (0.0, self.scale)
        return (0.0, math.inf)

    def label(self) -> str:
        core = f"Beta({self.beta_a:g},{self.beta_b:g})"
        if self.transform == "product_reciprocal":
            core += f"*Beta({self.beta_a2:g},{self.beta_b2:g})"
        return f"{self.transform}[{core},scale={self.scale:g}]"

    # unit-interval reduction: maps a sample to the Beta-scale variable
    def to_unit(self, u: ArrayLike) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.transform == "reciprocal":
            return self.scale / u
        if self.transform == "direct":
            return u / self.scale
        return self.scale / (self.scale + u)

    def unit_moment(self, k: int, ctx: Optional[SpecialFnContext] = None) -> float:
        """E[W^k] of the unit-interval variable (W = B, or B1*B2)."""
        ctx = ctx or default_context()
        m = _beta_power_moment(self.beta_a, self.beta_b, float(k), ctx)
        if self.transform == "product_reciprocal":
            m *= _beta_power_moment(self.beta_a2, self.beta_b2, float(k), ctx)
        return m

    def _product_unit_cdf(self, w: float, ctx: SpecialFnContext) -> float:
        # P(B1*B2 <= w) with B2 ~ Beta(c, 1), so P(B2 <= v) = v^c
        if w <= 0.0:
            return 0.0
        if w >= 1.0:
            return 1.0
        if self.beta_b2 != 1.0:
            raise NotImplementedError("product form requires a Beta(c, 1) second factor")
        a1, b1, c = self.beta_a, self.beta_b, self.beta_a2
        head = ctx.reg_inc_beta(a1, b1, w)
        lb = ctx.log_gamma(a1) + ctx.log_gamma(b1) - ctx.log_gamma(a1 + b1)

        def g(v: float) -> float:
            return math.exp((a1 - c - 1.0) * math.log(v) - lb)

        tail, _ = ctx.quad(g, w, 1.0, weight="alg", wvar=(0.0, b1 - 1.0), epsabs=1e-12)
        return head + w**c * tail

    def _product_unit_pdf(self, w: float, ctx: SpecialFnContext) -> float:
        if w <= 0.0 or w >= 1.0:
            return 0.0
        if self.beta_b2 != 1.0:
            raise NotImplementedError("product form requires a Beta(c, 1) second factor")
        a1, b1, c = self.beta_a, self.beta_b, self.beta_a2
        lb = ctx.log_gamma(a1) + ctx.log_gamma(b1) - ctx.log_gamma(a1 + b1)

        def g(v: float) -> float:
            return math.exp((a1 - c - 1.0) * math.log(v) - lb)

        tail, _ = ctx.quad(g, w, 1.0, weight="alg", wvar=(0.0, b1 - 1.0), epsabs=1e-12)
        return c * w ** (c - 1.0) * tail

    def cdf(self, u: ArrayLike, ctx: Optional[SpecialFnContext] = None) -> np.ndarray:
        ctx = ctx or default_context()
        arr = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty_like(arr)
        s = self.scale
        for i, ui in enumerate(arr):
            if self.transform == "reciprocal":
                if ui <= s:
                    out[i] = 0.0
                else:
                    out[i] = 1.0 - ctx.reg_inc_beta(self.beta_a, self.beta_b, s / ui)
            elif self.transform == "direct":
                if ui <= 0.0:
                    out[i] = 0.0
                elif ui >= s:
                    out[i] = 1.0
                else:
                    out[i] = ctx.reg_inc_beta(self.beta_a, self.beta_b, ui / s)
            else:
                if ui <= 0.0:
                    out[i] = 0.0
                else:
                    out[i] = 1.0 - self._product_unit_cdf(s / (s + ui), ctx)
        return out if np.ndim(u) else out[0]

    def density(self, u: ArrayLike, ctx: Optional[SpecialFnContext] = None) -> np.ndarray:
        ctx = ctx or default_context()
        arr = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty_like(arr)
        s = self.scale
        for i, ui in enumerate(arr):
            if self.transform == "reciprocal":
                if ui <= s:
                    out[i] = 0.0
                else:
                    v = s / ui
                    out[i] = _beta_pdf(v, self.beta_a, self.beta_b, ctx) * s / (ui * ui)
            elif self.transform == "direct":
                if ui <= 0.0 or ui >= s:
                    out[i] = 0.0
                else:
                    out[i] = _beta_pdf(ui / s, self.beta_a, self.beta_b, ctx) / s
            else:
                if ui <= 0.0:
                    out[i] = 0.0
                else:
                    w = s / (s + ui)
                    out[i] = self._product_unit_pdf(w, ctx) * w * w / s
        return out if np.ndim(u) else out[0]

    def moment(self, k: int, ctx: Optional[SpecialFnContext] = None) -> float:
        """E[sample^k] for integer k >= 1; raises InfiniteMomentError when divergent."""
        ctx = ctx or default_context()
        if k < 1 or k != int(k):
            raise ValueError(f"moment order must be a positive integer, got {k}")
        k = int(k)
        s = self.scale
        if self.transform == "reciprocal":
            return s**k * _beta_power_moment(self.beta_a, self.beta_b, -float(k), ctx)
        if self.transform == "direct":
            return s**k * _beta_power_moment(self.beta_a, self.beta_b, float(k), ctx)
        # sample = s*(1/W - 1): expand ((1-W)/W)^k over powers of W
        total = 0.0
        for j in range(k + 1):
            m = float(j - k)
            if m == 0.0:
                w_mom = 1.0
            else:
                w_mom = _beta_power_moment(self.beta_a, self.beta_b, m, ctx)
                w_mom *= _beta_power_moment(self.beta_a2, self.beta_b2, m, ctx)
            total += math.comb(k, j) * (-1.0) ** j * w_mom
        return s**k * total

    def sample(self, rng, n: int) -> np.ndarray:
        gen = _as_generator(rng)
        b = sample_beta(self.beta_a, self.beta_b, gen, size=n)
        if self.transform == "reciprocal":
            return self.scale / b
        if self.transform == "direct":
            return self.scale * b
        b2 = sample_beta(self.beta_a2, self.beta_b2, gen, size=n)
        return self.scale * (1.0 / (b * b2) - 1.0)


def hitting_law(cfg: SkewConfig) -> LawDescriptor:
    """Closed-form law of the meeting local time for the given skew pair.

    Raises RegimeError when the pair never meets (clock skew negative,
    offset skew positive) or when meeting is not guaranteed, including
    the boundary case where the coalescence index reaches 1.
    """
    regime = classify_regime(cfg)
    consts = derive_constants(cfg)
    b1, b2, x = cfg.beta1, cfg.beta2, cfg.x
    xi = consts.coalescence_index
    if regime.tag == "NegPos":
        raise RegimeError("the gap never closes in this regime; no hitting law exists")
    if regime.tag == "PosPos":
        if xi >= 1.0 - _GUARANTEE_SLACK:
            raise RegimeError(
                f"coalescence index {xi} is at or above 1; "
                "the meeting local time is defective and has no proper law"
            )
        return LawDescriptor(
            transform="reciprocal",
            beta_a=1.0 - xi,
            beta_b=(1.0 - b1) / (2.0 * b1),
            scale=x / b1,
        )
    if regime.tag == "PosNeg":
        return LawDescriptor(
            transform="direct",
            beta_a=(b2 - 1.0) / (2.0 * b2),
            beta_b=(1.0 - b1) / (2.0 * b1),
            scale=x / b1,
        )
    # NegNeg
    if not regime.coalescence_guaranteed or xi >= 1.0 - _GUARANTEE_SLACK:
        raise RegimeError(
            "meeting is not guaranteed for this doubly negative pair; "
            "no closed-form hitting law is available"
        )
    a1 = abs(b1)
    a2 = abs(b2)
    return LawDescriptor(
        transform="product_reciprocal",
        beta_a=1.0 - xi,
        beta_b=(1.0 - a2) / (2.0 * a2),
        scale=x / a1,
        beta_a2=(1.0 + a1) / (2.0 * a1),
        beta_b2=1.0,
    )


def hitting_density(
    cfg: SkewConfig, u: ArrayLike, ctx: Optional[SpecialFnContext] = None
) -> np.ndarray:
    return hitting_law(cfg).density(u, ctx)


def hitting_cdf(
    cfg: SkewConfig, u: ArrayLike, ctx: Optional[SpecialFnContext] = None
) -> np.ndarray:
    return hitting_law(cfg).cdf(u, ctx)


def localtime_survival(h: float, beta2: float, a: ArrayLike) -> np.ndarray:
    """P(local-time mass carried by one offset-path zero visit >= a), at gap h.

    Positive offset skew gives a polynomial tail; negative skew gives
    bounded support [0, h/|beta2|].
    """
    if not h > 0.0:
        raise ValueError(f"gap must be positive, got {h}")
    if beta2 == 0.0 or not -1.0 < beta2 < 1.0:
        raise ValueError(f"offset skew must lie in (-1,0)u(0,1), got {beta2}")
    arr = np.atleast_1d(np.asarray(a, dtype=float))
    if np.any(arr < 0.0):
        raise ValueError("mass threshold must be nonnegative")
    if beta2 > 0.0:
        out = (1.0 + beta2 * arr / h) ** (-(1.0 + beta2) / (2.0 * beta2))
    else:
        m = abs(beta2)
        base = np.clip(1.0 - m * arr / h, 0.0, None)
        out = base ** ((1.0 + beta2) / (2.0 * m))
    return out if np.ndim(a) else out[0]


def excursion_jump_law(cfg: SkewConfig, h: float, a: ArrayLike) -> np.ndarray:
    """Rate (per unit of clock-path local time) of zero visits whose
    local-time mass is at least a, when the gap sits at h.

    At a = 0 this is the total visit rate (1 - beta1) / (2h).
    """
    rate = (1.0 - cfg.beta1) / (2.0 * h)
    out = rate * localtime_survival(h, cfg.beta2, a)
    return out


def _require_guaranteed(cfg: SkewConfig) -> None:
    regime = classify_regime(cfg)
    if not regime.coalescence_guaranteed:
        raise RegimeError(
            f"transform requires guaranteed meeting; regime {regime.tag} "
            "does not provide it for these parameters"
        )


def laplace_ustar(
    cfg: SkewConfig, lam: float, ctx: Optional[SpecialFnContext] = None
) -> float:
    """E[exp(-lam * meeting local time)], by exact Beta-expectation quadrature.

    Only defined when meeting is guaranteed.  The integrand's endpoint
    singularities are carried by the quadrature weight, so the zero-rate
    value is the Beta normalization itself and equals 1 to integrator
    tolerance.
    """
    if lam < 0.0:
        raise ValueError(f"rate must be nonnegative, got {lam}")
    _require_guaranteed(cfg)
    if lam == 0.0:
        return 1.0
    ctx = ctx or default_context()
    law = hitting_law(cfg)
    a, b, s = law.beta_a, law.beta_b, law.scale
    lb = ctx.log_gamma(a) + ctx.log_gamma(b) - ctx.log_gamma(a + b)
    norm = math.exp(-lb)
    if law.transform == "reciprocal":

        def f(v: float) -> float:
            if v <= 0.0:
                # limit of exp(-lam*s/v) as v -> 0+
                return 0.0
            return norm * math.exp(-lam * s / v)

        val, _ = ctx.quad(f, 0.0, 1.0, weight="alg", wvar=(a - 1.0, b - 1.0), epsabs=1e-13)
        return val
    if law.transform == "direct":

        def f(v: float) -> float:
            return norm * math.exp(-lam * s * v)

        val, _ = ctx.quad(f, 0.0, 1.0, weight="alg", wvar=(a - 1.0, b - 1.0), epsabs=1e-13)
        return val
    # product form: condition on the first factor, integrate the second
    a2, b2 = law.beta_a2, law.beta_b2
    lb2 = ctx.log_gamma(a2) + ctx.log_gamma(b2) - ctx.log_gamma(a2 + b2)
    norm2 = math.exp(-lb2)

    def inner(b1v: float) -> float:
        if b1v <= 0.0:
            return 0.0

        def g(v: float) -> float:
            if v <= 0.0:
                return 0.0
            return norm2 * math.exp(-lam * s * (1.0 / (b1v * v) - 1.0))

        val, _ = ctx.quad(g, 0.0, 1.0, weight="alg", wvar=(a2 - 1.0, b2 - 1.0), epsabs=1e-12)
        return norm * val

    val, _ = ctx.quad(inner, 0.0, 1.0, weight="alg", wvar=(a - 1.0, b - 1.0), epsabs=1e-11)
    return val


def kummer_m(a: float, b: float, z: float, tol: float = 1e-15, max_terms: int = 20000) -> float:
    """Confluent hypergeometric M(a, b, z) by power series.

    Negative arguments are routed through M(a,b,z) = exp(z) M(b-a, b, -z)
    to avoid catastrophic cancellation.  b must not be zero or a negative
    integer.
    """
    if b <= 0.0 and b == math.floor(b):
        raise ValueError(f"second parameter must not be a nonpositive integer, got {b}")
    if z < 0.0:
        return math.exp(z) * kummer_m(b - a, b, -z, tol=tol, max_terms=max_terms)
    term = 1.0
    total = 1.0
    for k in range(max_terms):
        term *= (a + k) * z / ((b + k) * (k + 1.0))
        total += term
        if abs(term) <= tol * abs(total):
            return total
    raise ArithmeticError(f"series for M({a}, {b}, {z}) did not converge")


def kummer_u(
    a: float, b: float, z: float, ctx: Optional[SpecialFnContext] = None
) -> float:
    """Confluent hypergeometric U(a, b, z) for a > 0 and z >= 0.

    z > 0 uses the Laplace-type integral representation; z = 0 uses the
    closed form, which requires b < 1.
    """
    ctx = ctx or default_context()
    if not a > 0.0:
        raise ValueError(f"first parameter must be positive, got {a}")
    if z < 0.0:
        raise ValueError(f"argument must be nonnegative, got {z}")
    if z == 0.0:
        if b >= 1.0:
            raise ValueError(f"U(a, b, 0) diverges for b >= 1, got b={b}")
        return math.exp(ctx.log_gamma(1.0 - b) - ctx.log_gamma(a - b + 1.0))
    norm = math.exp(-ctx.log_gamma(a))
    expo = b - a - 1.0

    def head(t: float) -> float:
        return norm * math.exp(-z * t + expo * math.log1p(t))

    val1, _ = ctx.quad(head, 0.0, 1.0, weight="alg", wvar=(a - 1.0, 0.0), epsabs=1e-13)

    def tail(t: float) -> float:
        return norm * math.exp(-z * t + (a - 1.0) * math.log(t) + expo * math.log1p(t))

    val2, _ = ctx.quad(tail, 1.0, np.inf, epsabs=1e-13)
    return val1 + val2


def _laplace_fn(cfg: SkewConfig, lam: float, ctx: SpecialFnContext) -> Callable[[float], float]:
    def u_of(y: float) -> float:
        if y <= 0.0:
            # gap already closed: the meeting local time is zero
            return 1.0
        return laplace_ustar(replace(cfg, x=y), lam, ctx)

    return u_of


def apply_generator(
    cfg: SkewConfig,
    f: Callable[[float], float],
    h: float,
    ctx: Optional[SpecialFnContext] = None,
    *,
    fprime: Optional[Callable[[float], float]] = None,
    tail: float = 50.0,
    f_limit: float = 0.0,
) -> float:
    """Generator of the gap process applied to f at gap h.

    Drift part -beta1 * f'(h) plus the jump integral against the
    excursion-mass compensator.  For positive offset skew the integral is
    truncated at relative jump `tail` and closed with the exact tail mass
    times (f_limit - f(h)), so f must converge to f_limit at infinity.
    f' defaults to a central difference.
    """
    ctx = ctx or default_context()
    if not cfg.beta1 > 0.0:
        raise RegimeError("generator form requires a positive clock-path skew")
    consts = derive_constants(cfg)
    gamma = consts.jump_tail_exponent
    kappa = consts.jump_intensity_coeff
    fh = f(h)
    if fprime is not None:
        dfh = fprime(h)
    else:
        step = max(1e-4, 1e-4 * h)
        dfh = (f(h + step) - f(h - step)) / (2.0 * step)
    drift = -cfg.beta1 * dfh
    if cfg.beta2 > 0.0:

        def g(s: float) -> float:
            return (f(h * (1.0 + s)) - fh) * (kappa / h) * (1.0 + s) ** (-gamma)

        jump, _ = ctx.quad(g, 0.0, tail, epsabs=1e-12, limit=400)
        jump += (f_limit - fh) * (kappa / h) * (1.0 + tail) ** (1.0 - gamma) / (gamma - 1.0)
    else:
        mag = abs(kappa)

        def g(s: float) -> float:
            return (f(h * (1.0 - s)) - fh) * (mag / h)

        jump, _ = ctx.quad(g, 0.0, 1.0, weight="alg", wvar=(0.0, -gamma), epsabs=1e-12)
    return drift + jump


def _validate_grid(cfg: SkewConfig, x_grid: np.ndarray) -> np.ndarray:
    grid = np.atleast_1d(np.asarray(x_grid, dtype=float))
    lo, hi = 0.05 * cfg.x, 10.0 * cfg.x
    if np.any(grid < lo) or np.any(grid > hi):
        raise ValueError(f"grid points must lie within [{lo}, {hi}]")
    return grid


def dynkin_residual(
    cfg: SkewConfig,
    lam: float,
    x_grid: ArrayLike,
    ctx: Optional[SpecialFnContext] = None,
) -> np.ndarray:
    """Raw residuals A u - lam * u of the generator identity on a gap grid.

    u is the Laplace transform of the meeting local time, evaluated by
    quadrature; both sides are computed independently of the jump-chain
    sampler.
    """
    ctx = ctx or default_context()
    if lam <= 0.0:
        raise ValueError(f"rate must be positive, got {lam}")
    _require_guaranteed(cfg)
    if cfg.beta1 < 0.0:
        raise RegimeError("generator residuals support positive clock-path skew only")
    grid = _validate_grid(cfg, np.asarray(x_grid))
    u_of = _laplace_fn(cfg, lam, ctx)
    out = np.empty_like(grid)
    for i, h in enumerate(grid):
        tail = max(50.0, 60.0 * cfg.beta1 / (lam * h))
        lhs = apply_generator(cfg, u_of, h, ctx, tail=tail, f_limit=0.0)
        out[i] = lhs - lam * u_of(h)
    return out


def _ode_pieces(
    cfg: SkewConfig,
    lam: float,
    h: float,
    u_of: Callable[[float], float],
) -> tuple[float, float]:
    # second-order ODE in the gap variable satisfied by the Laplace transform:
    #   beta1*h*u'' + (beta1*xi + lam*h)*u' - lam*(gamma - 2)*u = 0
    consts = derive_constants(cfg)
    xi = consts.coalescence_index
    gamma = consts.jump_tail_exponent
    d1 = max(1e-4, 1e-4 * h)
    d2 = 1e-3 * h
    uh = u_of(h)
    du = (u_of(h + d1) - u_of(h - d1)) / (2.0 * d1)
    ddu = (u_of(h + d2) - 2.0 * uh + u_of(h - d2)) / (d2 * d2)
    t1 = cfg.beta1 * h * ddu
    t2 = (cfg.beta1 * xi + lam * h) * du
    t3 = -lam * (gamma - 2.0) * uh
    residual = t1 + t2 + t3
    scale = abs(t1) + abs(t2) + abs(t3)
    return residual, scale


def ode_residual(
    cfg: SkewConfig,
    lam: float,
    x_grid: ArrayLike,
    ctx: Optional[SpecialFnContext] = None,
) -> np.ndarray:
    """Raw residuals of the hypergeometric-type ODE for the Laplace transform."""
    ctx = ctx or default_context()
    if lam <= 0.0:
        raise ValueError(f"rate must be positive, got {lam}")
    _require_guaranteed(cfg)
    if cfg.beta1 < 0.0:
        raise RegimeError("ODE residuals support positive clock-path skew only")
    grid = _validate_grid(cfg, np.asarray(x_grid))
    u_of = _laplace_fn(cfg, lam, ctx)
    out = np.empty_like(grid)
    for i, h in enumerate(grid):
        out[i], _ = _ode_pieces(cfg, lam, h, u_of)
    return out


def residual_tolerances(
    cfg: SkewConfig,
    lam: float,
    x_grid: ArrayLike,
    ctx: Optional[SpecialFnContext] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Acceptance thresholds for the two residual checks on a grid.

    Generator identity: 1e-4 * (1 + |lam * u|) pointwise.  ODE: 1e-3 times
    the sum of the three term magnitudes (relative, so stiff-grid points
    are judged fairly).
    """
    ctx = ctx or default_context()
    grid = _validate_grid(cfg, np.asarray(x_grid))
    u_of = _laplace_fn(cfg, lam, ctx)
    dynkin_tol = np.empty_like(grid)
    ode_tol = np.empty_like(grid)
    for i, h in enumerate(grid):
        uh = u_of(h)
        dynkin_tol[i] = 1e-4 * (1.0 + abs(lam * uh))
        _, scale = _ode_pieces(cfg, lam, h, u_of)
        ode_tol[i] = 1e-3 * scale
    return dynkin_tol, ode_tol
