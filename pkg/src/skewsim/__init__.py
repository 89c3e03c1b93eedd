"""Simulation-and-verification laboratory for the gap between two skew
Brownian motions driven by one Brownian path.

Three independent routes to the same object: an exact jump-chain sampler
of the meeting local time, closed-form hitting laws with their Laplace
and confluent-hypergeometric analytics, and a coarse coupled-path Euler
simulator; plus the statistical machinery to make them confront each
other.
"""

from .model import (
    DerivedConstants,
    Regime,
    RegimeError,
    SkewConfig,
    classify_regime,
    derive_constants,
)
from .samplers import (
    JumpDraw,
    RngStream,
    draw_jump,
    invert_initial_hit_localtime,
    invert_jump_size_neg,
    invert_jump_size_pos,
    invert_jump_time,
    sample_beta,
    sample_initial_hit_localtime,
    sample_jump_size_neg,
    sample_jump_size_pos,
    sample_jump_time,
)
from .chain import (
    ChainState,
    ChainTrajectory,
    HittingSample,
    log_drift_diagnostic,
    run_chain,
    run_negneg,
)
from .special import (
    QuadratureError,
    SpecialFnContext,
    adaptive_quad,
    default_context,
    log_beta,
    log_gamma,
    reg_inc_beta,
)
from .analytic import (
    InfiniteMomentError,
    LawDescriptor,
    apply_generator,
    dynkin_residual,
    excursion_jump_law,
    hitting_cdf,
    hitting_density,
    hitting_law,
    kummer_m,
    kummer_u,
    laplace_ustar,
    localtime_survival,
    ode_residual,
    residual_tolerances,
)
from .pathsim import (
    EulerConfig,
    LocalTimeSurvivalEstimate,
    PathEstimate,
    StabilityWarning,
    localtime_survival_empirical,
    mollified_path,
    simulate_pair,
    skew_drift_coefficient,
    triangular_mollifier,
)
from .stats import (
    DEFAULT_BIAS_ALLOWANCE,
    EmpiricalSummary,
    MomentCheck,
    MomentEntry,
    dkw_bound,
    exact_ks,
    ks_against,
    merge,
    moment_check,
    summarize,
    validation_report,
)
from .report import (
    ChainBatch,
    PathBatch,
    RunManifest,
    TOOL_VERSION,
    run_chain_batch,
    run_paths_batch,
    write_csv,
    write_json,
)

__version__ = "0.1.0"

__all__ = [
    "DerivedConstants",
    "Regime",
    "RegimeError",
    "SkewConfig",
    "classify_regime",
    "derive_constants",
    "JumpDraw",
    "RngStream",
    "draw_jump",
    "invert_initial_hit_localtime",
    "invert_jump_size_neg",
    "invert_jump_size_pos",
    "invert_jump_time",
    "sample_beta",
    "sample_initial_hit_localtime",
    "sample_jump_size_neg",
    "sample_jump_size_pos",
    "sample_jump_time",
    "ChainState",
    "ChainTrajectory",
    "HittingSample",
    "log_drift_diagnostic",
    "run_chain",
    "run_negneg",
    "QuadratureError",
    "SpecialFnContext",
    "adaptive_quad",
    "default_context",
    "log_beta",
    "log_gamma",
    "reg_inc_beta",
    "InfiniteMomentError",
    "LawDescriptor",
    "apply_generator",
    "dynkin_residual",
    "excursion_jump_law",
    "hitting_cdf",
    "hitting_density",
    "hitting_law",
    "kummer_m",
    "kummer_u",
    "laplace_ustar",
    "localtime_survival",
    "ode_residual",
    "residual_tolerances",
    "EulerConfig",
    "LocalTimeSurvivalEstimate",
    "PathEstimate",
    "StabilityWarning",
    "localtime_survival_empirical",
    "mollified_path",
    "simulate_pair",
    "skew_drift_coefficient",
    "triangular_mollifier",
    "DEFAULT_BIAS_ALLOWANCE",
    "EmpiricalSummary",
    "MomentCheck",
    "MomentEntry",
    "dkw_bound",
    "exact_ks",
    "ks_against",
    "merge",
    "moment_check",
    "summarize",
    "validation_report",
    "ChainBatch",
    "PathBatch",
    "RunManifest",
    "TOOL_VERSION",
    "run_chain_batch",
    "run_paths_batch",
    "write_csv",
    "write_json",
    "__version__",
]
