"""Command-line entry point for batch verification.

Verbs
-----
``verify``
    Run the full check suite for a config; exit 0 when every check
    passes, 1 on any failure, 2 on configuration errors.
``converge``
    Emit residual-decay and quadrature-degradation CSV tables over a
    dimension sweep.
``emit-wavefunctions``
    Write one plot-ready wavefunction CSV per configured amplitude.

Common flags: ``--config <path>`` (required), ``--out <dir>``,
``--seed <n>``, ``--dim <n>``, ``--strict`` (out-of-regime checks count
as failures).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import load_config
from .coordinate import write_wavefunction_csv
from .errors import ConfigError, PseudoBosonError
from .reports import format_report_table
from .suite import convergence_study, run_suite, suite_failed

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudoboson",
        description="Residual-quantified verification of pseudo-bosonic "
        "operator pairs and bicoherent states on a truncated Fock space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--dim", type=int, default=None, help="dimension override")
        p.add_argument(
            "--strict",
            action="store_true",
            help="treat out-of-regime checks as failures",
        )

    add_common(sub.add_parser("verify", help="run the full check suite"))
    converge = sub.add_parser("converge", help="residual decay over a dimension sweep")
    add_common(converge)
    converge.add_argument(
        "--dims",
        default="16,32,64",
        help="comma-separated ascending dimensions (default 16,32,64)",
    )
    add_common(sub.add_parser("emit-wavefunctions", help="write per-z wavefunction CSVs"))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(
            args.config,
            dim_override=args.dim,
            seed_override=args.seed,
            out_override=args.out,
        )
        if args.command == "verify":
            reports = run_suite(config)
            print(format_report_table(reports))
            print(f"reports written to {config.outputs}")
            return 1 if suite_failed(reports, strict=args.strict) else 0
        if args.command == "converge":
            try:
                dims = [int(d) for d in args.dims.split(",") if d.strip()]
            except ValueError as exc:
                raise ConfigError(f"--dims must be comma-separated integers: {exc}") from exc
            conv_path, quad_path = convergence_study(config, dims)
            print(f"wrote {conv_path}")
            print(f"wrote {quad_path}")
            return 0
        if args.command == "emit-wavefunctions":
            out_dir = Path(config.outputs)
            out_dir.mkdir(parents=True, exist_ok=True)
            x = np.linspace(-8.0, 8.0, 801)
            for i, z in enumerate(config.z_samples):
                path = out_dir / f"wavefunctions_z{i}_{z.real:g}{z.imag:+g}j.csv"
                write_wavefunction_csv(path, z, x)
                print(f"wrote {path}")
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except PseudoBosonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
