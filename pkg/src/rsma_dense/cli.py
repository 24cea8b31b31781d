"""Command-line front end.

Subcommands::

    rate    per-scheme rate breakdown (CSV)
    sweep   rate/ASE curves over a beta, antenna-count, or density grid (CSV)
    mc      Monte Carlo cross-validation report (JSON)
    ase     area spectral efficiency per scheme (CSV)
    ee      antenna-count energy-efficiency optimization (JSON + CSV sidecar)

Every command is a pure function of (config, seed): rerunning writes
byte-identical artifacts.  Wall-clock timings therefore go to stderr, never
into report files.

Exit codes: 2 config error, 3 numeric failure, 4 simulation failure,
5 optimization failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import metrics, rates
from .config import RunConfig, load_config
from .errors import (
    BracketError,
    ConfigError,
    DomainError,
    InsufficientWindow,
    NoConvergence,
    SingularChannel,
)
from .model import SCHEMES, KernelContext
from .montecarlo import run_trials

_ENV_CONFIG = "RSMA_DENSE_CONFIG"
_LN2 = math.log(2.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsma-dense",
        description="Rate, coverage, and energy-efficiency analysis of a "
        "rate-splitting downlink over a Poisson field of base stations.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON config path (default ${_ENV_CONFIG})")
    common.add_argument("--seed", type=_u64, help="RNG seed (overrides config)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--bits", action="store_true",
                        help="report rates in bits instead of nats")
    common.add_argument("--scheme", action="append", choices=SCHEMES,
                        help="scheme to evaluate; repeatable (overrides config)")
    common.add_argument("--mode", choices=("gain", "physical"),
                        help="Monte Carlo mode (overrides config)")
    common.add_argument("--threads", type=int,
                        help="Monte Carlo worker threads (overrides config)")
    common.add_argument("--plot", action="store_true",
                        help="render a PNG figure next to the output file")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rate", parents=[common],
                   help="per-scheme rate breakdown at the configured operating point")
    sub.add_parser("sweep", parents=[common],
                   help="rate and ASE columns over the configured grid")
    sub.add_parser("mc", parents=[common],
                   help="simulation cross-check of the analytic rates")
    sub.add_parser("ase", parents=[common],
                   help="area spectral efficiency per scheme")
    sub.add_parser("ee", parents=[common],
                   help="optimize the antenna count for energy efficiency")
    return parser


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        command = {
            "rate": cmd_rate,
            "sweep": cmd_sweep,
            "mc": cmd_mc,
            "ase": cmd_ase,
            "ee": cmd_ee,
        }[args.command]
        command(cfg, args)
    except ConfigError as exc:
        return _fail(2, exc)
    except (NoConvergence, DomainError) as exc:
        return _fail(3, exc)
    except (InsufficientWindow, SingularChannel) as exc:
        return _fail(4, exc)
    except BracketError as exc:
        return _fail(5, exc)
    return 0


def _fail(code: int, exc: Exception) -> int:
    print(f"rsma-dense: error: {exc}", file=sys.stderr)
    return code


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    path = args.config or os.environ.get(_ENV_CONFIG)
    cfg = load_config(path) if path else RunConfig()
    updates: dict = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.scheme:
        updates["schemes"] = tuple(dict.fromkeys(args.scheme))
    if args.mode:
        updates["mc_mode"] = args.mode
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        updates["threads"] = args.threads
    if args.plot and not args.out:
        raise ConfigError("--plot needs --out to know where the figure goes")
    return replace(cfg, **updates) if updates else cfg


# --------------------------------------------------------------------------
# serialization helpers


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _round12(x: float | None) -> float | None:
    return None if x is None else float(f"{x:.12g}")


def _csv(schema: str, header: list[str], rows: list[list], unit: str | None = None) -> str:
    lines = [f"# schema: rsma-dense/{schema} v1"]
    if unit:
        lines.append(f"# unit: {unit}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
    return "\n".join(lines) + "\n"


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _unit(args: argparse.Namespace) -> tuple[str, float]:
    return ("bits", 1.0 / _LN2) if args.bits else ("nats", 1.0)


# --------------------------------------------------------------------------
# subcommands


def cmd_rate(cfg: RunConfig, args: argparse.Namespace) -> None:
    ctx = cfg.context()
    unit, scale = _unit(args)
    rows = []
    for scheme in cfg.schemes:
        bd = rates.sum_rate(ctx, scheme)
        rows.append([
            scheme,
            scale * bd.common_rate,
            scale * bd.private_rates[0],
            scale * bd.private_rates[1],
            scale * bd.sum_rate,
        ])
    header = ["scheme", "common", "private_near", "private_far", "sum"]
    _emit(_csv("rate", header, rows, unit=unit), args.out)


def _swept_context(cfg: RunConfig, axis: str, value: float) -> KernelContext:
    p = cfg.network
    if axis == "beta":
        p = replace(p, beta=value)
    elif axis == "antennas":
        p = replace(p, antennas=int(value))
    else:
        p = replace(p, lambda_b=value)
    return KernelContext.for_network(
        p, fading=cfg.fading, series=cfg.series, quad=cfg.quadrature
    )


def cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> None:
    if cfg.sweep_axis is None:
        raise ConfigError("sweep command needs a 'sweep' section in the config")
    unit, scale = _unit(args)
    schemes = cfg.schemes
    header = [cfg.sweep_axis]
    for s in schemes:
        header += [f"{s}_common", f"{s}_private_sum", f"{s}_sum", f"{s}_ase"]
    gap_name = None
    if len(schemes) == 2:
        gap_name = f"gap_{schemes[0]}_minus_{schemes[1]}"
        header.append(gap_name)

    rows = []
    series = {s: [] for s in schemes}
    for value in cfg.sweep_grid:
        ctx = _swept_context(cfg, cfg.sweep_axis, value)
        row: list = [value]
        sums = {}
        for s in schemes:
            bd = rates.sum_rate(ctx, s)
            sums[s] = bd.sum_rate
            series[s].append(bd.sum_rate * scale)
            row += [
                scale * bd.common_rate,
                scale * sum(bd.private_rates),
                scale * bd.sum_rate,
                scale * ctx.params.lambda_b * bd.sum_rate,
            ]
        if gap_name:
            a, b = schemes
            if a == "rsma":
                gap = rates.rate_gap(ctx, b)
            elif b == "rsma":
                gap = -rates.rate_gap(ctx, a)
            else:
                gap = sums[a] - sums[b]
            row.append(scale * gap)
        rows.append(row)

    _emit(_csv("sweep", header, rows, unit=unit), args.out)
    if args.plot:
        from .plots import plot_sweep

        png = str(Path(args.out).with_suffix(".png"))
        plot_sweep(cfg.sweep_axis, cfg.sweep_grid, series, png, unit=unit)
        print(f"rsma-dense: figure written to {png}", file=sys.stderr)


def cmd_mc(cfg: RunConfig, args: argparse.Namespace) -> None:
    if cfg.seed is None:
        raise ConfigError("Monte Carlo needs a seed (--seed or mc.seed in the config)")
    ctx = cfg.context()
    started = time.perf_counter()
    run = run_trials(
        ctx,
        mode=cfg.mc_mode,
        trials=cfg.trials,
        seed=cfg.seed,
        window=cfg.window,
        threads=cfg.threads,
    )
    elapsed = time.perf_counter() - started

    r_min, r1c, r2c = rates.common_rate(ctx)
    p1, p2 = rates.private_rates(ctx)
    analytic = {
        "rate_common_near": r1c,
        "rate_common_far": r2c,
        # The per-trial minimum estimates E[min], not min(E[.]); it has no
        # analytic counterpart here and never enters the gate.
        "rate_common_min": None,
        "rate_private_near": p1,
        "rate_private_far": p2,
        "sum_rate": r_min + p1 + p2,
    }

    quantities = {}
    worst = 0.0
    for name, est in run.estimates.items():
        ref = analytic[name]
        z = est.z_score(ref) if ref is not None else None
        if z is not None and ref is not None:
            worst = max(worst, abs(z))
        quantities[name] = {
            "analytic": _round12(ref),
            "mc_mean": _round12(est.mean),
            "std_error": _round12(est.std_error),
            "z": _round12(z),
        }

    gated = cfg.mc_mode == "gain"
    payload = {
        "schema": "rsma-dense/mc-report v1",
        "mode": cfg.mc_mode,
        "trials": run.trials,
        "seed": run.seed,
        "network": {
            "lambda_b": _round12(ctx.params.lambda_b),
            "alpha": _round12(ctx.params.alpha),
            "power": _round12(ctx.params.power),
            "noise": _round12(ctx.params.noise),
            "antennas": ctx.params.antennas,
            "beta": _round12(ctx.params.beta),
        },
        "window": {"half_side": _round12(cfg.window.half_side), "mode": cfg.window.mode},
        "quantities": quantities,
        "zf_cross_leakage": _round12(run.zf_cross_leakage),
        "resampled_trials": run.resampled_trials,
        "overall": ("PASS" if worst <= 3.0 else "FAIL") if gated else None,
    }
    _emit(_json_text(payload), args.out)
    print(
        f"rsma-dense: mc ran {run.trials} trials in {elapsed:.3f} s "
        f"({cfg.threads} thread(s))",
        file=sys.stderr,
    )


def cmd_ase(cfg: RunConfig, args: argparse.Namespace) -> None:
    ctx = cfg.context()
    unit, scale = _unit(args)
    rows = []
    for scheme in cfg.schemes:
        bd = rates.sum_rate(ctx, scheme)
        rows.append([scheme, scale * bd.sum_rate, scale * ctx.params.lambda_b * bd.sum_rate])
    _emit(_csv("ase", ["scheme", "sum", "ase"], rows, unit=unit), args.out)


def cmd_ee(cfg: RunConfig, args: argparse.Namespace) -> None:
    ctx = cfg.context()
    unit, scale = _unit(args)
    scheme = cfg.schemes[0]
    solution = metrics.optimize_antennas(ctx, cfg.energy, scheme=scheme, m_max=cfg.ee_m_max)
    profile = metrics.ee_profile(ctx, cfg.energy, scheme=scheme, m_max=cfg.ee_m_max)
    brute_m = max(profile, key=lambda pair: pair[1])[0]

    payload = {
        "schema": "rsma-dense/ee-solution v1",
        "scheme": scheme,
        "unit": f"{unit}/joule",
        "m_star": solution.m_star,
        "m_tilde": _round12(solution.m_tilde),
        "ee_at_star": _round12(scale * solution.ee_at_star),
        "m_star_ceiling": solution.m_star_ceiling,
        "bracket": [_round12(solution.bracket[0]), _round12(solution.bracket[1])],
        "iterations": solution.iterations,
        "brute_force_m": brute_m,
        "matches_brute_force": brute_m == solution.m_star,
    }
    _emit(_json_text(payload), args.out)

    if args.out:
        sidecar = str(Path(args.out).with_suffix(".curve.csv"))
        rows = [[m, scale * ee, "1" if m == brute_m else "0"] for m, ee in profile]
        Path(sidecar).write_text(
            _csv("ee-curve", ["antennas", "energy_efficiency", "brute_force_max"],
                 rows, unit=f"{unit}/joule")
        )
        print(f"rsma-dense: EE curve written to {sidecar}", file=sys.stderr)
        if args.plot:
            from .plots import plot_ee

            png = str(Path(args.out).with_suffix(".png"))
            plot_ee(profile, solution.m_star, png, unit=unit, scale=scale)
            print(f"rsma-dense: figure written to {png}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
