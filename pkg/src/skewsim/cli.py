"""Command-line front end.

Seven subcommands: chain (hitting-time Monte Carlo), validate (Monte
Carlo vs closed-form law), law (density/CDF tables), laplace (transform
tables), residuals (generator and ODE identity checks), paths (coupled
Euler cross-check), excursion (zero-visit mass law, analytic and
empirical).  Exit codes: 0 success, 2 configuration error, 3 regime
error, 4 statistical or tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .analytic import (
    InfiniteMomentError,
    excursion_jump_law,
    dynkin_residual,
    hitting_law,
    laplace_ustar,
    localtime_survival,
    ode_residual,
    residual_tolerances,
)
from .model import RegimeError, SkewConfig, classify_regime
from .pathsim import EulerConfig, localtime_survival_empirical
from .report import (
    CHAIN_CSV_HEADER,
    PATHS_CSV_HEADER,
    TOOL_VERSION,
    RunManifest,
    run_chain_batch,
    run_paths_batch,
    write_csv,
    write_json,
)
from .samplers import RngStream
from .special import QuadratureError
from . import stats

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGIME = 3
EXIT_STAT = 4

_COMMANDS = ("chain", "validate", "law", "laplace", "residuals", "paths", "excursion")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with x/beta1/beta2 and optional per-command blocks")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--beta1", type=float, default=None)
    p.add_argument("--beta2", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--threads", type=int, default=None)


def _add_euler_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--mollifier-scale", type=int, default=None, dest="mollifier_scale")
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--meeting-delta", type=float, default=None, dest="meeting_delta")
    p.add_argument("--bandwidth", type=float, default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewsim",
        description="Jump-chain and coupled-path laboratory for the gap "
        "between two skew Brownian motions sharing one driving noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chain", help="exact hitting-time Monte Carlo")
    _add_model_flags(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--max-jumps", type=int, default=None, dest="max_jumps")

    p = sub.add_parser("validate", help="Monte Carlo against the closed-form law")
    _add_model_flags(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--max-jumps", type=int, default=None, dest="max_jumps")
    p.add_argument("--bias-allowance", type=float, default=None, dest="bias_allowance")

    p = sub.add_parser("law", help="density/CDF table of the hitting law")
    _add_model_flags(p)
    p.add_argument("--grid", default=None, help="start:stop:count")

    p = sub.add_parser("laplace", help="Laplace-transform table")
    _add_model_flags(p)
    p.add_argument("--lambda", dest="lam", default=None, help="comma-separated rates")

    p = sub.add_parser("residuals", help="generator and ODE identity residuals")
    _add_model_flags(p)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--grid", default=None, help="start:stop:count")

    p = sub.add_parser("paths", help="coupled mollified-Euler cross-check")
    _add_model_flags(p)
    _add_euler_flags(p)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("excursion", help="zero-visit local-time mass law")
    _add_model_flags(p)
    _add_euler_flags(p)
    p.add_argument("--h", type=float, default=None, dest="level")
    p.add_argument("--a", default=None, help="comma-separated mass thresholds")
    p.add_argument("--empirical-n", type=int, default=None, dest="empirical_n")
    return parser


def _load_config(args) -> tuple[SkewConfig, dict]:
    """Merge config file and flags; flags win.  Returns (config, command block)."""
    core: dict = {}
    block: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        blocks = {k: data.pop(k) for k in list(data) if k in _COMMANDS}
        block = blocks.get(args.command, {})
        if not isinstance(block, dict):
            raise ValueError(f"per-command block {args.command!r} must be an object")
        unknown = set(data) - {"x", "beta1", "beta2"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        core = data
    for name in ("x", "beta1", "beta2"):
        v = getattr(args, name, None)
        if v is not None:
            core[name] = v
    missing = {"x", "beta1", "beta2"} - set(core)
    if missing:
        raise ValueError(
            f"missing model parameters {sorted(missing)}; pass flags or a config file"
        )
    return SkewConfig.from_json_dict(core), block


def _param(args, block: dict, name: str, block_key: str, default):
    v = getattr(args, name, None)
    if v is not None:
        return v
    if block_key in block:
        return block[block_key]
    return default


def _resolve_threads(args, block: dict) -> int:
    v = _param(args, block, "threads", "threads", None)
    if v is None:
        v = os.environ.get("SKEWSIM_THREADS", "1")
    threads = int(v)
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:count, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"grid count must be positive, got {count}")
    return np.linspace(start, stop, count)


def _parse_floats(text: str) -> list[float]:
    vals = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    if not vals:
        raise ValueError(f"no numbers found in {text!r}")
    return vals


def _euler_from(args, block: dict) -> EulerConfig:
    return EulerConfig(
        dt=float(_param(args, block, "dt", "dt", 1e-4)),
        mollifier_scale=int(_param(args, block, "mollifier_scale", "mollifierScale", 100)),
        horizon=float(_param(args, block, "horizon", "horizon", 300.0)),
        meeting_delta=float(_param(args, block, "meeting_delta", "meetingDelta", 0.01)),
        localtime_bandwidth=_param(args, block, "bandwidth", "localTimeBandwidth", None),
    )


def _manifest(cfg_echo: dict, seed: int, n: int, eps, max_jumps, wall, censored) -> dict:
    return RunManifest(
        config_echo=cfg_echo,
        seed=seed,
        trajectory_count=n,
        eps=eps,
        max_jumps=max_jumps,
        tool_version=TOOL_VERSION,
        wall_time=wall,
        censored_fraction=censored,
    ).to_json_dict()


def _reject_negpos(cfg: SkewConfig) -> None:
    regime = classify_regime(cfg)
    if regime.tag == "NegPos":
        raise RegimeError(
            "no coalescence in this regime: a negative clock skew and positive "
            "offset skew make the gap nondecreasing, so the paths never meet "
            "and there is nothing to sample"
        )


def _cmd_chain(args, cfg: SkewConfig, block: dict) -> int:
    _reject_negpos(cfg)
    n = int(_param(args, block, "n", "n", 1000))
    eps = float(_param(args, block, "eps", "eps", 1e-9))
    max_jumps = int(_param(args, block, "max_jumps", "maxJumps", 100000))
    seed = int(_param(args, block, "seed", "seed", 0))
    threads = _resolve_threads(args, block)
    negneg = classify_regime(cfg).tag == "NegNeg"
    batch = run_chain_batch(
        cfg, seed, n, eps=eps, max_jumps=max_jumps, threads=threads, negneg=negneg
    )
    out = args.out or "chain"
    write_csv(out + ".csv", CHAIN_CSV_HEADER, batch.rows())
    write_json(
        out + ".manifest.json",
        _manifest(cfg.to_json_dict(), seed, n, eps, max_jumps, batch.wall_time, batch.censored_fraction),
    )
    print(
        f"wrote {out}.csv: {n} trajectories, censored fraction "
        f"{batch.censored_fraction:.6g}, wall time {batch.wall_time:.2f}s"
    )
    return EXIT_OK


def _cmd_validate(args, cfg: SkewConfig, block: dict) -> int:
    _reject_negpos(cfg)
    law = hitting_law(cfg)
    n = int(_param(args, block, "n", "n", 100000))
    eps = float(_param(args, block, "eps", "eps", 1e-9))
    max_jumps = int(_param(args, block, "max_jumps", "maxJumps", 100000))
    seed = int(_param(args, block, "seed", "seed", 0))
    allowance = float(
        _param(args, block, "bias_allowance", "biasAllowance", stats.DEFAULT_BIAS_ALLOWANCE)
    )
    threads = _resolve_threads(args, block)
    regime = classify_regime(cfg)
    negneg = regime.tag == "NegNeg"
    batch = run_chain_batch(
        cfg, seed, n, eps=eps, max_jumps=max_jumps, threads=threads, negneg=negneg
    )
    clean = batch.u_star[~batch.censored]
    if clean.size == 0:
        raise ValueError("all trajectories were censored; nothing to validate")
    censored_count = int(batch.censored.sum())
    rows: list = []
    if negneg:
        # bounded transformed variable: all moments exist, so the verdict
        # rests on the moment table rather than a KS distance
        w = law.to_unit(clean)
        summary = stats.summarize(w, censored_count=censored_count)
        targets = [law.unit_moment(k) for k in (1, 2)]
        rows.extend(stats.moment_check(w, targets, orders=(1, 2)))
    else:
        summary = stats.ks_against(lambda v: law.cdf(v), clean, censored_count=censored_count)
        for k in (1, 2):
            try:
                target = law.moment(k)
            except InfiniteMomentError:
                powered = clean ** float(k)
                rows.append(
                    {
                        "k": k,
                        "empirical": float(np.mean(powered)),
                        "standardError": float(np.std(powered, ddof=1) / math.sqrt(clean.size)),
                        "analytic": None,
                        "refused": True,
                        "pass": True,
                    }
                )
                continue
            rows.extend(stats.moment_check(clean, [target], orders=(k,)))
    report = stats.validation_report(
        law.label(),
        summary,
        bias_allowance=allowance,
        moments=rows,
        seed=seed,
        config=cfg.to_json_dict(),
    )
    out = args.out or "validation.json"
    write_json(out, report)
    ks_text = "n/a" if report["ks"] is None else f"{report['ks']:.6f} (dkw99 {report['dkw99']:.6f})"
    print(f"wrote {out}: law {report['law']}, n {report['n']}, ks {ks_text}, pass {report['pass']}")
    return EXIT_OK if report["pass"] else EXIT_STAT


def _default_law_grid(law) -> np.ndarray:
    lo, hi = law.support()
    if math.isinf(hi):
        hi = lo + 6.0 * law.scale if lo > 0.0 else 20.0 * law.scale
    return np.linspace(lo, hi, 200)


def _cmd_law(args, cfg: SkewConfig, block: dict) -> int:
    law = hitting_law(cfg)
    grid_text = _param(args, block, "grid", "grid", None)
    grid = _parse_grid(grid_text) if grid_text else _default_law_grid(law)
    dens = law.density(grid)
    cdf = law.cdf(grid)
    out = args.out or "law.csv"
    write_csv(out, ("u", "density", "cdf"), zip(grid, dens, cdf))
    print(f"wrote {out}: {grid.size} rows for {law.label()}")
    return EXIT_OK


def _cmd_laplace(args, cfg: SkewConfig, block: dict) -> int:
    law = hitting_law(cfg)
    lam_text = _param(args, block, "lam", "lambda", None)
    lams = _parse_floats(lam_text) if lam_text else [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    lo = law.support()[0]
    rows = []
    for lam in lams:
        if lam < 0.0:
            raise ValueError(f"rates must be nonnegative, got {lam}")
        u_lam = laplace_ustar(cfg, lam)
        rows.append((lam, u_lam, math.exp(-lam * lo)))
    out = args.out or "laplace.csv"
    write_csv(out, ("lambda", "u_lambda", "upper_bound"), rows)
    print(f"wrote {out}: {len(rows)} rates for {law.label()}")
    return EXIT_OK


def _cmd_residuals(args, cfg: SkewConfig, block: dict) -> int:
    lam = _param(args, block, "lam", "lambda", 1.0)
    lam = float(lam)
    grid_text = _param(args, block, "grid", "grid", None)
    grid = _parse_grid(grid_text) if grid_text else np.linspace(0.1, 5.0, 15) * cfg.x
    dyn = dynkin_residual(cfg, lam, grid)
    ode = ode_residual(cfg, lam, grid)
    dyn_tol, ode_tol = residual_tolerances(cfg, lam, grid)
    out = args.out or "residuals.csv"
    write_csv(
        out,
        ("x", "dynkinResidual", "dynkinTolerance", "odeResidual", "odeTolerance"),
        zip(grid, dyn, dyn_tol, ode, ode_tol),
    )
    dyn_ok = bool(np.all(np.abs(dyn) <= dyn_tol))
    ode_ok = bool(np.all(np.abs(ode) <= ode_tol))
    print(
        f"wrote {out}: max |generator residual| {np.max(np.abs(dyn)):.3g} "
        f"(tol floor {np.min(dyn_tol):.3g}), max |ode residual| {np.max(np.abs(ode)):.3g}; "
        f"pass {dyn_ok and ode_ok}"
    )
    return EXIT_OK if (dyn_ok and ode_ok) else EXIT_STAT


def _cmd_paths(args, cfg: SkewConfig, block: dict) -> int:
    ecfg = _euler_from(args, block)
    n = int(_param(args, block, "n", "n", 1000))
    seed = int(_param(args, block, "seed", "seed", 0))
    threads = _resolve_threads(args, block)
    batch = run_paths_batch(cfg, ecfg, seed, n, threads=threads)
    out = args.out or "paths"
    write_csv(out + ".csv", PATHS_CSV_HEADER, batch.rows())
    echo = cfg.to_json_dict()
    echo["euler"] = {
        "dt": ecfg.dt,
        "mollifierScale": ecfg.mollifier_scale,
        "horizon": ecfg.horizon,
        "meetingDelta": ecfg.meeting_delta,
        "localTimeBandwidth": ecfg.bandwidth,
    }
    write_json(
        out + ".manifest.json",
        _manifest(echo, seed, n, None, None, batch.wall_time, batch.censored_fraction),
    )
    print(
        f"wrote {out}.csv: {n} paths, hit fraction {1.0 - batch.censored_fraction:.4f}, "
        f"wall time {batch.wall_time:.2f}s"
    )
    return EXIT_OK


def _cmd_excursion(args, cfg: SkewConfig, block: dict) -> int:
    level = float(_param(args, block, "level", "h", cfg.x))
    a_text = _param(args, block, "a", "a", None)
    a_vals = np.asarray(_parse_floats(a_text) if a_text else [0.5, 1.0, 2.0])
    emp_n = int(_param(args, block, "empirical_n", "empiricalN", 0))
    seed = int(_param(args, block, "seed", "seed", 0))
    survival = localtime_survival(level, cfg.beta2, a_vals)
    rate = excursion_jump_law(cfg, level, a_vals)
    out = args.out or "excursion.csv"
    if emp_n > 0:
        ecfg = _euler_from(args, block)
        est = localtime_survival_empirical(
            level, cfg.beta2, ecfg, RngStream(seed=seed, stream_index=0), emp_n, a_vals
        )
        write_csv(
            out,
            ("a", "survival", "jumpRate", "empiricalSurvival"),
            zip(a_vals, survival, rate, est.survival),
        )
        echo = cfg.to_json_dict()
        echo["h"] = level
        write_json(
            out + ".manifest.json",
            _manifest(echo, seed, emp_n, None, None, 0.0, est.censored_fraction),
        )
        print(
            f"wrote {out}: {a_vals.size} thresholds at level {level}, "
            f"empirical n {emp_n}, censored fraction {est.censored_fraction:.4f}"
        )
    else:
        write_csv(out, ("a", "survival", "jumpRate"), zip(a_vals, survival, rate))
        print(f"wrote {out}: {a_vals.size} thresholds at level {level}")
    return EXIT_OK


_DISPATCH = {
    "chain": _cmd_chain,
    "validate": _cmd_validate,
    "law": _cmd_law,
    "laplace": _cmd_laplace,
    "residuals": _cmd_residuals,
    "paths": _cmd_paths,
    "excursion": _cmd_excursion,
}


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        cfg, block = _load_config(args)
        return _DISPATCH[args.command](args, cfg, block)
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_STAT
    except (ValueError, KeyError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
