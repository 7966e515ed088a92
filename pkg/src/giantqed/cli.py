"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
degeneracy, 3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
import yaml

from . import core, oracles, sweeps, three_level, two_level
from .errors import ScatteringError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_VERIFY_FAILED = 3

SUBCOMMANDS = ("amplitudes", "fk", "g2", "chi", "poles", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    model: str = "two_level"
    omega0: float = 100.0
    gamma: float = 1.0
    theta: str = "0"
    omega_rabi: float = 0.5
    delta: float = 0.0
    k: float | None = None
    k_min: float | None = None
    k_max: float | None = None
    k_steps: int | None = None
    theta_steps: int | None = None
    x_max: float | None = None
    x_steps: int | None = None
    direction: str = "R"
    scope: str = "all"
    workers: int = 1
    output: str | None = None
    format: str = "csv"


CONFIG_KEYS = {f.name for f in fields(RunConfig)}


def parse_angle(text) -> float:
    """Radians, optionally with a trailing 'pi' multiplier ('0.85pi', 'pi', '-0.5pi')."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower().replace(" ", "")
    try:
        if s.endswith("pi"):
            head = s[:-2].rstrip("*")
            factor = 1.0 if head in ("", "+") else -1.0 if head == "-" else float(head)
            value = factor * math.pi
        else:
            value = float(s)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r} (use radians or a multiple like 0.85pi)") from None
    if not math.isfinite(value):
        raise UsageError(f"angle {text!r} is not finite")
    return value


def parse_angles(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [parse_angle(t) for t in text]
    return [parse_angle(t) for t in str(text).split(",") if t.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="giantqed", description="Two-photon scattering observables of giant atoms.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        # every option defaults to None so config-file values are only overridden when given
        p.add_argument("--config")
        p.add_argument("--model", choices=("two_level", "three_level"), default=None)
        p.add_argument("--omega0", type=float, default=None)
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--theta", default=None)
        p.add_argument("--omega-rabi", dest="omega_rabi", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--k", type=float, default=None)
        p.add_argument("--k-min", dest="k_min", type=float, default=None)
        p.add_argument("--k-max", dest="k_max", type=float, default=None)
        p.add_argument("--k-steps", dest="k_steps", type=int, default=None)
        p.add_argument("--theta-steps", dest="theta_steps", type=int, default=None)
        p.add_argument("--x-max", dest="x_max", type=float, default=None)
        p.add_argument("--x-steps", dest="x_steps", type=int, default=None)
        p.add_argument("--direction", choices=("R", "L"), default=None)
        p.add_argument("--scope", choices=("two_level", "three_level", "all"), default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--output", default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def load_config_file(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise UsageError(f"config {path} is not valid YAML/JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a mapping of options")
    data = {str(k).replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file, then command-line flags."""
    merged = {}
    if args.config:
        merged.update(load_config_file(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    cfg = RunConfig(**merged)
    if cfg.model not in ("two_level", "three_level"):
        raise UsageError(f"unknown model {cfg.model!r}")
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"unknown format {cfg.format!r}")
    if cfg.direction not in ("R", "L"):
        raise UsageError("direction must be R or L")
    for name in ("omega0", "gamma", "omega_rabi", "delta"):
        try:
            setattr(cfg, name, float(getattr(cfg, name)))
        except (TypeError, ValueError):
            raise UsageError(f"{name} must be a number") from None
    return cfg


def _params(cfg: RunConfig, theta: float | None = None):
    th = parse_angle(cfg.theta) if theta is None else theta
    try:
        if cfg.model == "two_level":
            return core.TwoLevelParams(cfg.omega0, cfg.gamma, th)
        return core.ThreeLevelParams(cfg.omega0, cfg.gamma, th, cfg.omega_rabi, cfg.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _k_grid(cfg: RunConfig, params) -> sweeps.GridSpec:
    default = sweeps.default_k_grid(params)
    return sweeps.GridSpec(
        "k",
        default.start if cfg.k_min is None else cfg.k_min,
        default.stop if cfg.k_max is None else cfg.k_max,
        default.steps if cfg.k_steps is None else cfg.k_steps,
    )


def cmd_amplitudes(cfg: RunConfig) -> sweeps.SweepDataset:
    params = _params(cfg)
    ks = np.array([cfg.k]) if cfg.k is not None else _k_grid(cfg, params).values()
    amp = two_level.amplitudes2 if cfg.model == "two_level" else three_level.amplitudes3
    rows = []
    for k in ks:
        a = amp(params, float(k))
        row = [float(k)]
        for name in ("t1", "t2", "r1", "r2"):
            v = complex(getattr(a, name))
            row += [v.real, v.imag]
        row.append(float(a.flux))
        rows.append(tuple(row))
    columns = ("k", "re_t1", "im_t1", "re_t2", "im_t2", "re_r1", "im_r1", "re_r2", "im_r2", "flux_check")
    header = {"model": cfg.model, **_asdict(params)}
    return sweeps.SweepDataset(header, columns, rows)


def cmd_fk(cfg: RunConfig) -> sweeps.SweepDataset:
    params = _params(cfg)
    grid = _k_grid(cfg, params)
    if cfg.model == "two_level":
        return sweeps.sweep_F_two_level(params, grid, workers=cfg.workers)
    return sweeps.sweep_F_three_level(params, grid, workers=cfg.workers)


def cmd_g2(cfg: RunConfig) -> sweeps.SweepDataset:
    params = _params(cfg)
    default = sweeps.default_x_grid(params)
    grid = sweeps.GridSpec(
        "x", 0.0,
        default.stop if cfg.x_max is None else cfg.x_max,
        default.steps if cfg.x_steps is None else cfg.x_steps,
    )
    k = params.omega0 if cfg.k is None else cfg.k
    return sweeps.sweep_g2(cfg.model, params, k, cfg.direction, grid, workers=cfg.workers)


def cmd_chi(cfg: RunConfig) -> sweeps.SweepDataset:
    params = _params(cfg)
    default = sweeps.default_chi_grid(params)
    k_grid = _k_grid(cfg, params) if any(v is not None for v in (cfg.k_min, cfg.k_max, cfg.k_steps)) else default
    theta_steps = default.second.steps if cfg.theta_steps is None else cfg.theta_steps
    grid = sweeps.GridSpec(
        "k", k_grid.start, k_grid.stop, k_grid.steps,
        second=sweeps.GridSpec("theta", default.second.start, default.second.stop, theta_steps),
    )
    return sweeps.sweep_chi_map(cfg.model, params, grid, workers=cfg.workers)


def cmd_poles(cfg: RunConfig) -> sweeps.SweepDataset:
    params_list = [_params(cfg, th) for th in parse_angles(cfg.theta)]
    return sweeps.pole_table(cfg.model, params_list)


def cmd_verify(cfg: RunConfig, out) -> int:
    reports = oracles.run_verification_suite(cfg.scope)
    for r in reports:
        print(r.line(), file=out)
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed", file=out)
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def _asdict(params) -> dict:
    return {f.name: getattr(params, f.name) for f in fields(params)}


COMMANDS = {"amplitudes": cmd_amplitudes, "fk": cmd_fk, "g2": cmd_g2, "chi": cmd_chi, "poles": cmd_poles}


def main(argv=None, stdout=None) -> int:
    out = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        if args.command == "verify":
            return cmd_verify(cfg, out)
        dataset = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"giantqed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScatteringError as exc:
        print(f"giantqed: numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, TypeError) as exc:
        print(f"giantqed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - keep the exit-code contract closed
        print(f"giantqed: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    text = dataset.to_csv() if cfg.format == "csv" else dataset.to_json()
    if cfg.output:
        try:
            Path(cfg.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"giantqed: error: cannot write {cfg.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        out.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
