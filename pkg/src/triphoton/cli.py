"""Batch command-line front end.

Subcommands:

  e3f       exact tripartite entanglement of formation of a triple-Gaussian
  sweep     witness and exact value versus pump width, CSV output
  rate      triplet generation rate for a material/pump configuration
  simulate  adaptive coincidence-scan simulation and witness report
  validate  numerical check of the correlation-entanglement inequality

Exit codes: 0 success, 1 computation/domain error, 2 input or config error.
All RNG-bearing commands are reproducible from --seed; file outputs are
written atomically (temp file then rename).
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .entropy import gaussian_differential_entropy
from .report import EntanglementReport, json_dumps
from .scan import default_threshold, scan_pair
from .spdc import (
    ConfigError,
    gaussian_fit_widths,
    load_config,
    qpm_penalty,
    triplet_rate,
    witness_sweep,
)
from .states import TripleGaussianState, exact_e3f, to_momentum
from .witness import SPDC_COEFFICIENTS, continuous_witness, verify_correlation_relation


def _positive_float(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(val) or val <= 0.0:
        raise argparse.ArgumentTypeError(f"must be a positive number: {text!r}")
    return val


def _positive_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return val


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _state_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> TripleGaussianState:
    """Triple-Gaussian state from either --config or explicit widths."""
    have_widths = args.sigma_u is not None or args.sigma_v is not None
    if args.config is not None and have_widths:
        parser.error("give either --config or --sigma-u/--sigma-v, not both")
    if args.config is not None:
        cfg = load_config(args.config)
        return to_momentum(gaussian_fit_widths(cfg))
    if args.sigma_u is None or args.sigma_v is None:
        parser.error("need --config, or both --sigma-u and --sigma-v")
    sigma_w = args.sigma_w if args.sigma_w is not None else args.sigma_v
    return TripleGaussianState(args.sigma_u, args.sigma_v, sigma_w)


def _analytic_report(s: TripleGaussianState) -> EntanglementReport:
    """Exact E3F plus the witness evaluated with exact Gaussian entropies."""
    coeffs = SPDC_COEFFICIENTS
    dual = to_momentum(s)
    h_x = gaussian_differential_entropy(math.sqrt(1.5) * s.sigma_v)
    h_k = gaussian_differential_entropy(math.sqrt(3.0) * dual.sigma_u)
    return EntanglementReport(
        inputs={
            "sigma_u": s.sigma_u,
            "sigma_v": s.sigma_v,
            "sigma_w": s.sigma_w,
            "eta": list(coeffs.eta),
            "beta": list(coeffs.beta),
        },
        witness_gebits=continuous_witness(coeffs, h_x, h_k),
        entropy_x_bits=h_x,
        entropy_k_bits=h_k,
        exact_e3f_gebits=exact_e3f(s),
    )


def _cmd_e3f(args, parser) -> int:
    sigma_w = args.sigma_w if args.sigma_w is not None else args.sigma_v
    s = TripleGaussianState(args.sigma_u, args.sigma_v, sigma_w)
    if args.json:
        print(_analytic_report(s).to_json())
    else:
        print(format(exact_e3f(s), ".12g"))
    return 0


def _cmd_sweep(args, parser) -> int:
    cfg = load_config(args.config)
    if args.sigma_p_max < args.sigma_p_min:
        parser.error("--sigma-p-max must be >= --sigma-p-min")
    if args.points == 1:
        grid = np.array([args.sigma_p_min])
    else:
        grid = np.geomspace(args.sigma_p_min, args.sigma_p_max, args.points)
    rows = witness_sweep(cfg, grid)
    lines = ["sigma_p_m,witness_gebits,exact_gebits"]
    for sigma_p, witness, exact in rows:
        lines.append(
            f"{format(sigma_p, '.17g')},{format(witness, '.17g')},{format(exact, '.17g')}"
        )
    out = Path(args.out)
    _atomic_write(out, "\n".join(lines) + "\n")
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def _cmd_rate(args, parser) -> int:
    cfg = load_config(args.config)
    if args.qpm_order is not None:
        cfg = dataclasses.replace(cfg, qpm_order=args.qpm_order)
    bare = triplet_rate(cfg)
    penalty = qpm_penalty(cfg.qpm_order) if cfg.qpm_order is not None else 1.0
    rate = bare * penalty
    print(
        json_dumps(
            {
                "inputs": {
                    "config": args.config,
                    **{k: getattr(cfg, k) for k in cfg.__dataclass_fields__},
                },
                "triplets_per_second": rate,
                "triplets_per_minute": rate * 60.0,
                "qpm_penalty": penalty,
                "tool_version": __version__,
            }
        )
    )
    return 0


def _cmd_simulate(args, parser) -> int:
    s = _state_from_args(args, parser)
    threshold = args.threshold if args.threshold is not None else default_threshold(args.samples)
    tree_x, tree_k, report = scan_pair(
        s,
        SPDC_COEFFICIENTS,
        n_samples=args.samples,
        threshold=threshold,
        max_depth=args.depth,
        seed=args.seed,
    )
    if args.out is not None:
        prefix = Path(args.out)
        report_path = prefix.parent / f"{prefix.name}.json"
        _atomic_write(report_path, report.to_json() + "\n")
        for tree, tag in ((tree_x, "position"), (tree_k, "momentum")):
            _atomic_write(
                prefix.parent / f"{prefix.name}_{tag}.csv",
                "\n".join(tree.record_lines()) + "\n",
            )
        print(f"wrote {report_path} and two tree files")
        print(
            f"witness {report.witness_gebits:.6f} gebits "
            f"(certified {report.certified_gebits:.6f})"
        )
    else:
        print(report.to_json())
    return 0


def _cmd_validate(args, parser) -> int:
    rep = verify_correlation_relation(args.dim, args.trials, args.seed)
    print(
        json_dumps(
            {
                "inputs": {"dim": rep.dim, "trials": rep.trials, "seed": rep.seed},
                "max_violation": rep.max_violation,
                "max_mutual_information_bits": rep.max_mutual_information_bits,
                "tool_version": __version__,
            }
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triphoton",
        description="Tripartite entanglement of triple-Gaussian photon states: "
        "exact values, conservative entropic witnesses, generation rates, and "
        "scan simulations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("e3f", help="exact entanglement of formation (gebits)")
    p.add_argument("--sigma-u", type=_positive_float, required=True, help="width along the symmetric axis, m")
    p.add_argument("--sigma-v", type=_positive_float, required=True, help="width along the first difference axis, m")
    p.add_argument("--sigma-w", type=_positive_float, help="width along the second difference axis (default: same as --sigma-v)")
    p.add_argument("--json", action="store_true", help="emit a full JSON report instead of the bare number")
    p.set_defaults(func=_cmd_e3f)

    p = sub.add_parser("sweep", help="witness and exact value vs pump width (CSV)")
    p.add_argument("--config", required=True, help="material/pump config file")
    p.add_argument("--sigma-p-min", type=_positive_float, required=True, help="smallest pump width, m")
    p.add_argument("--sigma-p-max", type=_positive_float, required=True, help="largest pump width, m")
    p.add_argument("--points", type=_positive_int, default=200, help="grid size (geometric spacing)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("rate", help="triplet generation rate (JSON)")
    p.add_argument("--config", required=True, help="material/pump config file")
    p.add_argument("--qpm-order", type=_positive_int, help="apply the quasi-phase-matching penalty of this order")
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("simulate", help="adaptive scan simulation and witness report")
    p.add_argument("--config", help="derive the state from this config's phase-matching fit")
    p.add_argument("--sigma-u", type=_positive_float, help="state width, m (alternative to --config)")
    p.add_argument("--sigma-v", type=_positive_float, help="state width, m")
    p.add_argument("--sigma-w", type=_positive_float, help="state width, m (default: same as --sigma-v)")
    p.add_argument("-n", "--samples", type=_positive_int, default=100_000, help="triplets per basis")
    p.add_argument("--threshold", type=_positive_int, help="cell refinement count (default: max(16, n/4096))")
    p.add_argument("--depth", type=_positive_int, default=8, help="maximum refinement depth")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--out", help="output prefix: writes PREFIX.json, PREFIX_position.csv, PREFIX_momentum.csv")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("validate", help="correlation-entanglement inequality check")
    p.add_argument("--dim", type=int, choices=range(2, 9), default=3, help="local Hilbert dimension")
    p.add_argument("--trials", type=_positive_int, default=1000, help="random states to test")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
