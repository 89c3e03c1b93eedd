"""Empirical-distribution machinery for validating samplers against laws.

Finite-sample, distribution-free acceptance: the exact one-sample KS
statistic is compared against the 99% DKW band plus a small allowance for
truncation bias, and raw moments are compared at four standard errors.
Summaries merge associatively so multi-worker runs reduce to exactly the
single-worker result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .analytic import InfiniteMomentError

__all__ = [
    "MomentEntry",
    "MomentCheck",
    "EmpiricalSummary",
    "dkw_bound",
    "exact_ks",
    "summarize",
    "ks_against",
    "merge",
    "moment_check",
    "validation_report",
]

DEFAULT_BIAS_ALLOWANCE = 0.002


@dataclass(frozen=True)
class MomentEntry:
    """Empirical raw moment of order k with its standard error."""

    k: int
    value: float
    standard_error: float


@dataclass(frozen=True)
class MomentCheck:
    """Comparison of one empirical moment against its analytic value."""

    k: int
    empirical: float
    standard_error: float
    analytic: float
    z_score: float
    passed: bool


@dataclass(frozen=True)
class EmpiricalSummary:
    """Sorted-sample summary; ks_statistic is NaN until a CDF is applied."""

    n: int
    samples: np.ndarray
    ks_statistic: float
    dkw_bound_99: float
    moment_table: tuple[MomentEntry, ...]
    censored_count: int = 0

    @property
    def censored_fraction(self) -> float:
        total = self.n + self.censored_count
        return self.censored_count / total if total else 0.0


def dkw_bound(n: int, alpha: float = 0.01) -> float:
    """Two-sided DKW envelope half-width at confidence 1 - alpha."""
    if n < 1:
        raise ValueError(f"sample count must be positive, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def _empirical_moments(samples: np.ndarray, orders: Sequence[int] = (1, 2)) -> tuple[MomentEntry, ...]:
    n = samples.size
    rows = []
    for k in orders:
        powered = samples**k
        value = float(np.mean(powered))
        if n > 1:
            se = float(np.std(powered, ddof=1) / math.sqrt(n))
        else:
            se = float("inf")
        rows.append(MomentEntry(k=int(k), value=value, standard_error=se))
    return tuple(rows)


def summarize(samples: np.ndarray, censored_count: int = 0) -> EmpiricalSummary:
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise ValueError("cannot summarize an empty sample set")
    return EmpiricalSummary(
        n=int(arr.size),
        samples=arr,
        ks_statistic=float("nan"),
        dkw_bound_99=dkw_bound(int(arr.size)),
        moment_table=_empirical_moments(arr),
        censored_count=int(censored_count),
    )


def exact_ks(cdf: Callable[[np.ndarray], np.ndarray], sorted_samples: np.ndarray) -> float:
    """Exact sup|F_n - F| over the whole line, not just at sample points.

    Both one-sided gaps are taken at every sorted sample, which is where
    the supremum of the two-sided statistic is attained.
    """
    n = sorted_samples.size
    f = np.asarray(cdf(sorted_samples), dtype=float)
    if f.shape != sorted_samples.shape:
        raise ValueError("reference CDF must return one value per sample")
    i = np.arange(1, n + 1, dtype=float)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1.0) / n)
    return float(max(d_plus, d_minus, 0.0))


def ks_against(
    cdf: Callable[[np.ndarray], np.ndarray],
    samples: Union[np.ndarray, EmpiricalSummary],
    censored_count: int = 0,
) -> EmpiricalSummary:
    """Summary with the exact KS statistic against the given reference CDF."""
    if isinstance(samples, EmpiricalSummary):
        base = samples
    else:
        base = summarize(samples, censored_count=censored_count)
    return replace(base, ks_statistic=exact_ks(cdf, base.samples))


def merge(a: EmpiricalSummary, b: EmpiricalSummary) -> EmpiricalSummary:
    """Associative combine; the KS statistic is reset and must be re-applied."""
    combined = np.sort(np.concatenate([a.samples, b.samples]))
    return EmpiricalSummary(
        n=int(combined.size),
        samples=combined,
        ks_statistic=float("nan"),
        dkw_bound_99=dkw_bound(int(combined.size)),
        moment_table=_empirical_moments(combined),
        censored_count=a.censored_count + b.censored_count,
    )


def moment_check(
    samples: np.ndarray,
    analytic_moments: Sequence[float],
    orders: Sequence[int] = (1, 2),
) -> tuple[MomentCheck, ...]:
    """Four-standard-error agreement check for raw moments.

    analytic_moments must align with orders and be finite; a non-finite
    entry raises InfiniteMomentError rather than producing a meaningless
    comparison.
    """
    if len(analytic_moments) != len(orders):
        raise ValueError("one analytic moment required per requested order")
    for k in orders:
        if k not in (1, 2):
            raise ValueError(f"moment order must be 1 or 2, got {k}")
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot check moments of an empty sample set")
    entries = _empirical_moments(arr, orders)
    out = []
    for entry, analytic in zip(entries, analytic_moments):
        if analytic is None or not math.isfinite(analytic):
            raise InfiniteMomentError(
                f"analytic moment of order {entry.k} is not finite; "
                "comparison refused (the empirical moment would not converge)"
            )
        gap = entry.value - analytic
        z = gap / entry.standard_error if entry.standard_error > 0 else math.inf
        out.append(
            MomentCheck(
                k=entry.k,
                empirical=entry.value,
                standard_error=entry.standard_error,
                analytic=float(analytic),
                z_score=float(z),
                passed=bool(abs(gap) <= 4.0 * entry.standard_error),
            )
        )
    return tuple(out)


def validation_report(
    law: str,
    summary: EmpiricalSummary,
    *,
    bias_allowance: float = DEFAULT_BIAS_ALLOWANCE,
    moments: Sequence[Union[MomentCheck, dict]] = (),
    seed: int = 0,
    config: Optional[dict] = None,
) -> dict:
    """Assemble the validation verdict as a JSON-ready mapping.

    The distribution side passes when ks <= dkw99 + biasAllowance; the
    moment side when every non-refused row is within four standard
    errors.  A NaN KS (moments-only validation) leaves the verdict to the
    moment rows and serializes as null.
    """
    moment_rows = []
    moments_pass = True
    for m in moments:
        if isinstance(m, MomentCheck):
            row = {
                "k": m.k,
                "empirical": m.empirical,
                "standardError": m.standard_error,
                "analytic": m.analytic,
                "zScore": m.z_score,
                "pass": m.passed,
            }
            moments_pass &= m.passed
        else:
            row = dict(m)
            if not row.get("refused", False):
                moments_pass &= bool(row.get("pass", True))
        moment_rows.append(row)
    ks = summary.ks_statistic
    if math.isnan(ks):
        ks_pass = True
        ks_json = None
    else:
        ks_pass = ks <= summary.dkw_bound_99 + bias_allowance
        ks_json = ks
    return {
        "law": law,
        "n": summary.n,
        "ks": ks_json,
        "dkw99": summary.dkw_bound_99,
        "biasAllowance": bias_allowance,
        "pass": bool(ks_pass and moments_pass),
        "moments": moment_rows,
        "censoredFraction": summary.censored_fraction,
        "seed": seed,
        "config": config or {},
    }
