"""Command-line interface.

Subcommands: ``steady-state``, ``measure``, ``sweep``, ``wigner``,
``validate-config``.  Exit codes: 0 success, 2 config error, 3 numerical
failure (any cell), 4 quality-gate failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .config import SweepConfig, parse_config
from .errors import ConfigError, QsyncError
from .lindblad import solve_steady_state
from .models import has_oscillator, model_liouvillian
from .sweep import (
    _fmt,
    emit,
    evaluate_measures,
    failed_cells,
    measure_labels,
    quality_gate_violations,
    run_sweep,
    wigner_command,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_QUALITY_GATE = 4


def _load_config(path: str) -> SweepConfig:
    return parse_config(Path(path).read_bytes())


def _write_output(data: bytes, out_path: str | None):
    if out_path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(out_path).write_bytes(data)


def _cmd_validate_config(args) -> int:
    _load_config(args.config)
    print(f"{args.config}: valid")
    return EXIT_OK


def _cmd_steady_state(args) -> int:
    config = _load_config(args.config)
    solved = solve_steady_state(model_liouvillian(config.model))
    rho = solved.state
    if args.format == "json":
        document = {
            "schema_version": "1",
            "dims": list(rho.dims),
            "residual": solved.residual,
            "matrix_real": np.real(rho.matrix).tolist(),
            "matrix_imag": np.imag(rho.matrix).tolist(),
        }
        payload = (json.dumps(document, indent=2) + "\n").encode("utf-8")
    else:
        lines = [f"# schema_version=1 dims={'x'.join(str(d) for d in rho.dims)} "
                 f"residual={_fmt(solved.residual)}", "i,j,re,im"]
        for i in range(rho.dim):
            for j in range(rho.dim):
                entry = rho.matrix[i, j]
                lines.append(f"{i},{j},{_fmt(entry.real)},{_fmt(entry.imag)}")
        payload = ("\n".join(lines) + "\n").encode("utf-8")
    _write_output(payload, args.out)
    return EXIT_OK


def _cmd_measure(args) -> int:
    config = _load_config(args.config)
    if not config.measures:
        raise ConfigError(["measures: at least one measure is required"])
    values, residual = evaluate_measures(config.model, config.measures, seed=args.seed)
    delta = 0.0
    convergence = config.convergence_check and not args.no_convergence_check
    if convergence and has_oscillator(config.model):
        from .models import fock_padded
        from .sweep import CONVERGENCE_PADDING

        padded, _ = evaluate_measures(
            fock_padded(config.model, CONVERGENCE_PADDING), config.measures, seed=args.seed
        )
        delta = max((abs(values[k] - padded[k]) for k in values), default=0.0)
    labels = measure_labels(config.measures)
    fmt = args.format or config.output_format
    if fmt == "json":
        document = {
            "schema_version": "1",
            "values": {label: values.get(label, math.nan) for label in labels},
            "residual": residual,
            "truncation_delta": delta,
        }
        payload = (json.dumps(document, indent=2) + "\n").encode("utf-8")
    else:
        header = ",".join(labels) + ",residual,truncation_delta"
        row = ",".join(
            [_fmt(values.get(label, math.nan)) for label in labels]
            + [_fmt(residual), _fmt(delta)]
        )
        payload = (header + "\n" + row + "\n").encode("utf-8")
    _write_output(payload, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = _load_config(args.config)
    if config.axis1 is None or config.axis2 is None:
        raise ConfigError(["sweep: both axes are required for the sweep command"])
    if not config.measures:
        raise ConfigError(["measures: at least one measure is required"])
    overrides = {}
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.no_convergence_check:
        overrides["convergence_check"] = False
    if overrides:
        import dataclasses

        config = dataclasses.replace(config, **overrides)
    grid = run_sweep(config, seed=args.seed)
    fmt = args.format or config.output_format
    out_path = args.out if args.out is not None else config.output_path
    _write_output(emit(grid, fmt), out_path)
    failures = failed_cells(grid)
    for i, j, message in failures:
        print(f"cell ({i}, {j}) failed: {message}", file=sys.stderr)
    if failures:
        return EXIT_NUMERICAL
    if config.convergence_check:
        violations = quality_gate_violations(grid)
        for i, j, delta in violations:
            print(f"cell ({i}, {j}) truncation delta {delta:.3e} exceeds gate", file=sys.stderr)
        if violations:
            return EXIT_QUALITY_GATE
    return EXIT_OK


def _cmd_wigner(args) -> int:
    config = _load_config(args.config)
    if config.wigner is None:
        raise ConfigError(["wigner: config section required for the wigner command"])
    payload = wigner_command(config.model, config.wigner)
    _write_output(payload, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsync",
        description="Steady states and synchronization measures of limit-cycle Lindblad models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, formats=("csv", "json")):
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if formats:
            p.add_argument("--format", choices=formats, default=None,
                           help="output format (default: from config)")

    p_validate = sub.add_parser("validate-config", help="check a config file")
    p_validate.add_argument("--config", required=True)
    p_validate.set_defaults(func=_cmd_validate_config)

    p_steady = sub.add_parser("steady-state", help="solve one steady state")
    add_common(p_steady)
    p_steady.set_defaults(func=_cmd_steady_state, format_default="json")

    p_measure = sub.add_parser("measure", help="evaluate measures on one model instance")
    add_common(p_measure)
    p_measure.add_argument("--seed", type=int, default=0, help="seed for sampling oracles")
    p_measure.add_argument("--no-convergence-check", action="store_true")
    p_measure.set_defaults(func=_cmd_measure)

    p_sweep = sub.add_parser("sweep", help="run a 2-D parameter sweep")
    add_common(p_sweep)
    p_sweep.add_argument("--workers", type=int, default=None, help="worker process count")
    p_sweep.add_argument("--seed", type=int, default=0, help="seed for sampling oracles")
    p_sweep.add_argument("--no-convergence-check", action="store_true")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_wigner = sub.add_parser("wigner", help="phase-space map of a steady state")
    p_wigner.add_argument("--config", required=True)
    p_wigner.add_argument("--out", default=None)
    p_wigner.set_defaults(func=_cmd_wigner)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "format", None) is None and hasattr(args, "format"):
        args.format = getattr(args, "format_default", None) or args.format
    try:
        return args.func(args)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QsyncError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
