"""Command-line interface.

Subcommands: ``point`` (single evaluation), ``sweep`` (grid to file),
``presets`` (list or run shipped presets), ``validate`` (self-check
suites).  Exit codes: 0 success, 1 configuration error, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, MagnomechError
from .params import SYSTEM_KEYS, TWO_PI
from .presets import PRESETS, get_preset
from .sweep import emit, run_point, run_sweep, sweep_spec_from_config
from . import validate as validation
from .params import load_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnomech",
        description=(
            "Steady-state quantum correlations of the feedback-assisted "
            "opto-magnomechanical model: stability gate, Lyapunov solve, "
            "Gaussian entanglement/steering measures, parameter sweeps."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    point = sub.add_parser("point", help="evaluate one parameter point and print the report")
    point.add_argument("--config", required=True, help="flat key/value parameter file")
    point.add_argument("--out", help="write the JSON report here instead of stdout")

    sweep = sub.add_parser("sweep", help="run a 1D/2D parameter sweep to a file")
    sweep.add_argument("--config", required=True, help="parameter file with axis1[/axis2] keys")
    sweep.add_argument("--out", required=True, help="output file")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--workers", type=int, default=1)

    presets = sub.add_parser("presets", help="list shipped presets, or run one with --preset")
    presets.add_argument("--preset", help="name of the preset to run")
    presets.add_argument("--out", help="output file (required when running)")
    presets.add_argument("--format", choices=("csv", "json"), default="csv")
    presets.add_argument("--workers", type=int, default=1)

    sub.add_parser("validate", help="run the solver and measure self-check suites")
    return parser


def _params_echo(params) -> dict:
    """SystemParams in config-file units, for human-readable reports."""
    echo = {}
    for key, unit in SYSTEM_KEYS.items():
        value = getattr(params, key)
        echo[key] = value / TWO_PI if unit == "hz" else value
    return echo


def _cmd_point(args) -> int:
    config = load_config(args.config)
    report = run_point(config)
    payload = {
        "params": _params_echo(report.params),
        "report": {k: v for k, v in report.to_record().items()},
    }
    text = json.dumps(payload, indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    spec = sweep_spec_from_config(config)
    table = run_sweep(spec, workers=args.workers)
    emit(table, args.format, args.out)
    return 0


def _cmd_presets(args) -> int:
    if not args.preset:
        width = max(len(name) for name in PRESETS)
        for name, preset in PRESETS.items():
            print(f"{name:<{width}}  {preset.description}")
        return 0
    if not args.out:
        raise ConfigError("running a preset requires --out")
    preset = get_preset(args.preset)
    table = run_sweep(preset.spec, workers=args.workers)
    emit(table, args.format, args.out)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "point":
            return _cmd_point(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "presets":
            return _cmd_presets(args)
        if args.command == "validate":
            return 0 if validation.run_all() else 2
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MagnomechError as exc:
        print(f"numerical failure [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
