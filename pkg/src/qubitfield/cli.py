"""Command-line entry point: ``qubitfield <command> [options]``.

Commands: ``simulate``, ``table1``, ``error-profile``, ``optimize-lambda``.
Exit status is 0 on success, 1 on a runtime error (bad field, precision limit,
counter overflow) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .analysis import PROTOCOLS, ExperimentSpec, run_experiment, table1_experiment
from .classical import (
    CONVENTIONAL_LAMBDA_TIMES_M,
    ClassicalConfig,
    CounterConfig,
    optimize_lambda,
    uncertainty,
)
from .field import MagnitudeScale, integrate, load_field
from .quantum import DEFAULT_GUARD, QuantumConfig, choose_alpha, error_probability, tail_probability

DEFAULT_M = 5.0
DEFAULT_CARRIERS = 30


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="master seed (64-bit unsigned, default 0)")
    common.add_argument("--out", help="write output to this path instead of stdout")

    carriers = argparse.ArgumentParser(add_help=False)
    carriers.add_argument(
        "--n-qubits", "--n-bits", dest="n_carriers", type=_positive_int, default=DEFAULT_CARRIERS,
        help="number of carriers (bits or qubits), default 30",
    )
    carriers.add_argument("--m-scale", type=float, help="order of magnitude M of the integral (default 5)")
    carriers.add_argument("--guard", type=float, help="range guard factor (default 10)")

    parser = argparse.ArgumentParser(prog="qubitfield", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common, carriers], help="Monte Carlo run of one protocol")
    sim.add_argument("--protocol", "--mode", dest="protocol", required=True, choices=PROTOCOLS)
    source = sim.add_mutually_exclusive_group(required=True)
    source.add_argument("--target-i", type=float, nargs="+", help="true integral value(s)")
    source.add_argument("--field", help="field document to integrate for the true value")
    sim.add_argument("--trials", type=_positive_int, default=1)
    sim.add_argument("--lambda", dest="lam", type=float, help="classical coupling (default 1.2/M)")
    sim.add_argument("--n0", type=int, default=0, help="qubits for the remainder in combined mode")
    sim.add_argument("--alpha", type=float, help="ladder quantum override (excludes --m-scale/--guard)")
    sim.add_argument("--workers", type=_positive_int, default=1)
    sim.add_argument("--format", choices=("csv", "json"), default="csv")

    t1 = sub.add_parser("table1", parents=[common, carriers], help="ten-value bits vs qubits comparison")
    t1.add_argument("--lambda", dest="lam", type=float, help="classical coupling (default 1.2/M)")
    t1.add_argument("--format", choices=("text", "json"), default="text")

    ep = sub.add_parser("error-profile", parents=[common, carriers], help="analytic method II error model")
    ep.add_argument("--max-n-alpha", type=_positive_int, default=10)
    ep.add_argument("--format", choices=("text", "json"), default="text")

    ol = sub.add_parser("optimize-lambda", parents=[common, carriers], help="classical coupling optimum")
    ol.add_argument("--samples", type=_positive_int, default=14, help="curve points to print")
    ol.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _protocol_config(args, parser: argparse.ArgumentParser):
    if args.alpha is not None and (args.m_scale is not None or args.guard is not None):
        parser.error("--alpha cannot be combined with --m-scale or --guard")
    M = DEFAULT_M if args.m_scale is None else args.m_scale
    guard = DEFAULT_GUARD if args.guard is None else args.guard
    N = args.n_carriers
    if args.protocol == "classical":
        return ClassicalConfig.default(M, N, args.lam)
    if args.protocol == "counter":
        return CounterConfig(N, MagnitudeScale(M), guard)
    if args.protocol == "combined" and args.n0 < 2:
        parser.error("combined protocol needs --n0 >= 2")
    if args.protocol != "combined" and args.n0:
        parser.error("--n0 only applies to the combined protocol")
    if args.alpha is not None:
        return QuantumConfig(args.alpha, N, args.n0, guard, MagnitudeScale(M), args.protocol)
    return QuantumConfig.for_scale(M, N, args.n0, guard, args.protocol)


def cmd_simulate(args, parser) -> int:
    cfg = _protocol_config(args, parser)
    if args.field:
        field = load_field(args.field)
        targets = [integrate(field, nonnegative=args.protocol in ("classical", "counter"))]
    else:
        targets = args.target_i
    spec = ExperimentSpec(args.protocol, cfg, tuple(targets), args.trials, args.seed)
    result = run_experiment(spec, workers=args.workers)
    _emit(result.to_csv() if args.format == "csv" else result.to_json(), args.out)
    return 0


def cmd_table1(args) -> int:
    M = DEFAULT_M if args.m_scale is None else args.m_scale
    guard = DEFAULT_GUARD if args.guard is None else args.guard
    table = table1_experiment(args.seed, M, args.n_carriers, guard, args.lam)
    if args.format == "json":
        _emit(json.dumps(table.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
        return 0
    q_err = [abs(r.quantum - r.I) for r in table.rows]
    c_err = [abs(r.classical - r.I) for r in table.rows]
    lines = [
        f"# seed={table.seed} M={table.M} carriers={table.n_carriers} guard={table.guard} "
        f"lambda={table.lam!r} alpha={table.alpha!r}",
        table.format(),
        "",
        f"quantum   |error|: max {max(q_err):.3e}, rows within 10*alpha: "
        f"{sum(e <= 10 * table.alpha for e in q_err)}/{len(q_err)}",
        f"classical |error|: mean {np.mean(c_err):.3f}, max {max(c_err):.3f}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_error_profile(args) -> int:
    M = DEFAULT_M if args.m_scale is None else args.m_scale
    guard = DEFAULT_GUARD if args.guard is None else args.guard
    N, T = args.n_carriers, args.max_n_alpha
    alpha = choose_alpha(M, N, 0, guard)
    steps = np.arange(0, 2 * T + 1) / 2.0
    profile = [(float(s), float(error_probability(s * alpha, M, N, guard))) for s in steps]
    tails = [(t, tail_probability(t, N), tail_probability(t, N, symmetric=True)) for t in range(1, T + 1)]
    if args.format == "json":
        doc = {
            "n_qubits": N, "m_scale": M, "guard": guard, "alpha": alpha,
            "profile": [{"delta_over_alpha": s, "probability": p} for s, p in profile],
            "tail": [{"threshold": t, "published_range": a, "symmetric_range": b} for t, a, b in tails],
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    lines = [f"# n_qubits={N} m_scale={M} guard={guard} alpha={alpha!r}", "delta/alpha  p(delta)"]
    lines += [f"{s:>11.1f}  {p:.6e}" for s, p in profile]
    lines += ["", "T   p(|delta| > T alpha), n=-(T-1)..T   symmetric n=-T..T-1"]
    lines += [f"{t:<3} {a:.6f}                            {b:.6f}" for t, a, b in tails]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_optimize_lambda(args) -> int:
    M = DEFAULT_M if args.m_scale is None else args.m_scale
    N = args.n_carriers
    best = optimize_lambda(M, N)
    conv = CONVENTIONAL_LAMBDA_TIMES_M / M
    d_best, d_conv = uncertainty(M, best, N), uncertainty(M, conv, N)
    xs = np.linspace(0.4, 3.0, args.samples)
    curve = [(float(x), uncertainty(M, x / M, N)) for x in xs]
    note = (
        f"minimum at lambda*M = {best * M:.4f}; the quoted choice lambda*M = {CONVENTIONAL_LAMBDA_TIMES_M} "
        f"gives {100 * (d_conv / d_best - 1):.2f}% larger uncertainty"
    )
    if args.format == "json":
        doc = {
            "m_scale": M, "n_bits": N, "lambda_opt": best, "lambda_opt_times_m": best * M,
            "uncertainty_opt": d_best, "lambda_conventional": conv, "uncertainty_conventional": d_conv,
            "discrepancy": note, "curve": [{"lambda_times_m": x, "uncertainty": u} for x, u in curve],
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    lines = [
        f"# m_scale={M} n_bits={N}",
        f"lambda*   = {best!r}  (lambda*M = {best * M:.6f}), uncertainty {d_best:.6f}",
        f"lambda1.2 = {conv!r}  (lambda*M = {CONVENTIONAL_LAMBDA_TIMES_M}), uncertainty {d_conv:.6f}",
        f"note: {note}",
        "",
        "lambda*M  uncertainty",
    ]
    lines += [f"{x:8.3f}  {u:.6f}" for x, u in curve]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args, parser)
        if args.command == "table1":
            return cmd_table1(args)
        if args.command == "error-profile":
            return cmd_error_profile(args)
        return cmd_optimize_lambda(args)
    except (ValueError, OverflowError, OSError) as exc:
        print(f"qubitfield: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
