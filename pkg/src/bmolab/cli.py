"""Command line: ``bmolab <experiment> [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on a
configuration error.  ``--config FILE`` reads flat ``key = value`` lines;
any key there is overridden by the command-line flag of the same name.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FilePath

from .experiments import (
    DEFAULT_THRESHOLDS,
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    parse_geometric_ladder,
    parse_grid,
    parse_ladder,
    run_experiment,
)

# config-file keys and how to parse them
_KEYS = {
    "experiment": str,
    "seed": int,
    "ladder": parse_ladder,
    "ladder_geom": parse_geometric_ladder,
    "grid": parse_grid,
    "replicas": int,
    "out": str,
    "format": str,
    "workers": int,
    "constants": str,
    "theta": float,
    "cells": int,
}


def read_config_file(path) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = FilePath(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    out, thresholds = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in DEFAULT_THRESHOLDS:
            thresholds[key] = _number(value, key)
            continue
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    out["thresholds"] = thresholds
    return out


def _number(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bmolab", description="Run a numerical experiment and write its report.")
    p.add_argument("experiment", nargs="?", choices=EXPERIMENTS)
    p.add_argument("--seed", type=int)
    ladder = p.add_mutually_exclusive_group()
    ladder.add_argument("--ladder", help="comma-separated control values, e.g. 0.1,0.03,0.01")
    ladder.add_argument("--ladder-geom", help="geometric ladder start:ratio:count")
    p.add_argument("--grid", help="grid d:n:X")
    p.add_argument("--replicas", type=int)
    p.add_argument("--out", help="report path (default $BMOLAB_OUTPUT_DIR/<experiment>.<format>)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="flat key = value file")
    p.add_argument("--constants", help="constants JSON (default: the packaged file)")
    p.add_argument("--theta", type=float, help="Brownian variance parameter")
    p.add_argument("--cells", type=int, help="time cells per replica (thm1)")
    p.add_argument("--threshold", action="append", default=[], metavar="KEY=VALUE",
                   help="override an acceptance threshold, e.g. thm1.r2_min=0.98")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = read_config_file(args.config) if args.config else {"thresholds": {}}
    if "ladder_geom" in values:
        values["ladder"] = values.pop("ladder_geom")
    flags = {
        "experiment": args.experiment,
        "seed": args.seed,
        "ladder": parse_ladder(args.ladder) if args.ladder else
        parse_geometric_ladder(args.ladder_geom) if args.ladder_geom else None,
        "grid": parse_grid(args.grid) if args.grid else None,
        "replicas": args.replicas,
        "out": args.out,
        "format": args.format,
        "workers": args.workers,
        "constants": args.constants,
        "theta": args.theta,
        "cells": args.cells,
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    for item in args.threshold:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"bad threshold {item!r}; expected KEY=VALUE")
        values["thresholds"][key.strip()] = _number(val, key)
    if "experiment" not in values:
        raise ConfigError("no experiment given")
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = run_experiment(cfg)
    except ConfigError as exc:
        print(f"bmolab: error: {exc}", file=sys.stderr)
        return 2
    fit = report.body["fit"]
    if fit:
        print(f"fit: slope={fit['slope']:.6g} r2={fit['r2']:.6f} against {fit['against']}")
    for c in report.body["checks"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}")
    for path in report.metadata.get("written", []):
        print(f"wrote {path}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
