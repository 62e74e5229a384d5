"""Config files, figure presets, sweep driver, and CSV/JSON emission.

A sweep varies one parameter over a monotone grid, optionally slaving a
second parameter to it through a named coupling rule, solves the steady state
at every point, and tabulates the probe response plus every inversion
diagnostic.  Output is deterministic: the same spec produces byte-identical
files, with or without worker threads.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Sequence, TextIO

import numpy as np

from .analysis import (autler_townes_eigenvalues, inversion_diagnostics,
                       probe_response)
from .model import Level, ParameterError, SystemParams, validate_params
from .solve import SteadyStateError, steady_state


class ConfigError(ValueError):
    """A config file is missing, malformed, or fails validation."""


class SweepError(RuntimeError):
    """Too many grid points failed for the sweep to be meaningful."""


# parameters that may be swept directly
SWEEPABLE = ("delta1", "delta2", "delta_common", "omega", "g", "gamma_ab",
             "gamma_ac", "gamma_bd", "gamma_cd", "r_bd", "r_cd")

# coupling rules: name -> callable(params after the swept value is applied)
_COUPLING_RULES = {
    "delta2 = delta1":
        lambda p: p.replace(delta2=p.delta1),
    "delta2 = lambda_plus(delta1)":
        lambda p: p.replace(
            delta2=autler_townes_eigenvalues(p.delta1, p.omega)[0]),
}


def _normalize_rule(rule: str) -> str:
    return " ".join(rule.split())


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep: base params, swept name, grid, optional coupling."""

    base: SystemParams
    parameter: str
    grid: tuple[float, ...]
    coupling_rule: str | None = None

    def __post_init__(self) -> None:
        if self.parameter not in SWEEPABLE:
            raise ConfigError(
                f"cannot sweep {self.parameter!r}; choose one of {SWEEPABLE}")
        grid = tuple(float(x) for x in self.grid)
        if not grid:
            raise ConfigError("sweep grid is empty")
        if not all(math.isfinite(x) for x in grid):
            raise ConfigError("sweep grid contains non-finite values")
        diffs = [b - a for a, b in zip(grid, grid[1:])]
        if diffs and not (all(d > 0 for d in diffs)
                          or all(d < 0 for d in diffs)):
            raise ConfigError("sweep grid must be strictly monotone")
        object.__setattr__(self, "grid", grid)
        if self.coupling_rule is not None:
            rule = _normalize_rule(self.coupling_rule)
            if rule not in _COUPLING_RULES:
                raise ConfigError(
                    f"unknown coupling rule {self.coupling_rule!r}; "
                    f"known: {sorted(_COUPLING_RULES)}")
            object.__setattr__(self, "coupling_rule", rule)


def resolve_point(spec: SweepSpec, value: float) -> SystemParams:
    """Parameters at one grid point: swept value applied, then the coupling."""
    if spec.parameter == "delta_common":
        p = spec.base.replace(delta1=value, delta2=value)
    else:
        p = spec.base.replace(**{spec.parameter: value})
    if spec.coupling_rule is not None:
        p = _COUPLING_RULES[spec.coupling_rule](p)
    return p


@dataclass(frozen=True)
class SweepRow:
    """All observables at one grid point; ``ok`` is False on solver failure."""

    value: float
    im_rho_ba: float
    re_rho_ba: float
    re_rho_bc: float
    rho_aa: float
    rho_bb: float
    rho_cc: float
    rho_dd: float
    rho_pp: float
    rho_mm: float
    rho_upup: float
    rho_00: float
    lambda1: float
    lambda2: float
    residual: float
    ok: bool = True


ROW_FIELDS = tuple(f.name for f in fields(SweepRow))


def _observables(p: SystemParams) -> dict[str, float]:
    result = steady_state(p)
    rho = result.rho
    pr = probe_response(rho)
    diag = inversion_diagnostics(p, rho)
    return {
        "im_rho_ba": pr.im_rho_ba,
        "re_rho_ba": pr.re_rho_ba,
        "re_rho_bc": pr.re_rho_bc,
        "rho_aa": rho[Level.A, Level.A].real,
        "rho_bb": rho[Level.B, Level.B].real,
        "rho_cc": rho[Level.C, Level.C].real,
        "rho_dd": rho[Level.D, Level.D].real,
        "rho_pp": diag.rho_pp,
        "rho_mm": diag.rho_mm,
        "rho_upup": diag.rho_upup,
        "rho_00": diag.rho_00,
        "lambda1": diag.lambda1,
        "lambda2": diag.lambda2,
        "residual": result.residual,
    }


def _solve_row(spec: SweepSpec, value: float) -> tuple[SweepRow, str | None]:
    try:
        obs = _observables(resolve_point(spec, value))
    except (SteadyStateError, ParameterError, ValueError) as exc:
        nan = float("nan")
        blank = {name: nan for name in ROW_FIELDS if name not in ("value", "ok")}
        return SweepRow(value=value, ok=False, **blank), f"{value:g}: {exc}"
    return SweepRow(value=value, ok=True, **obs), None


def run_sweep(spec: SweepSpec, *, workers: int = 1) -> list[SweepRow]:
    """Solve every grid point, in grid order.

    Individual failures become flagged rows (all observables NaN) so one
    singular corner cannot kill a figure; if more than half the points fail,
    raises :class:`SweepError` carrying the first failure.  Results do not
    depend on ``workers``.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1:
        outcomes = [_solve_row(spec, x) for x in spec.grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda x: _solve_row(spec, x), spec.grid))
    rows = [row for row, _ in outcomes]
    errors = [err for _, err in outcomes if err is not None]
    if len(errors) * 2 > len(spec.grid):
        raise SweepError(
            f"{len(errors)}/{len(spec.grid)} grid points failed; "
            f"first failure at {errors[0]}")
    return rows


_PRESET_RANGES = {
    "fig3": ("gamma_ac", 0.0, 30.0),
    "fig4": ("delta1", -100.0, 100.0),
    "fig5": ("delta1", -100.0, 100.0),
    "fig6": ("delta1", -100.0, 100.0),
}


def preset(name: str, points: int = 401) -> SweepSpec:
    """Built-in sweep protocols.

    ``fig3``: decay-ratio sweep at exact two-field resonance, pumps given as
    photon numbers (rates in units of the a->b decay).  ``fig4``: probe locked
    to the lower drive-dressed eigenvalue while the drive detuning sweeps.
    ``fig5``/``fig6``: both detunings swept together (they differ only in
    which columns one plots).  Rates for fig4-6 are in units of the b->d
    decay.
    """
    if points < 2:
        raise ConfigError(f"a preset needs at least 2 points, got {points}")
    if name == "fig3":
        base = validate_params({
            "omega": 10.0, "g": 1.0, "gamma_ab": 1.0, "gamma_ac": 12.0,
            "gamma_bd": 0.5, "gamma_cd": 0.5, "n_bd": 2.0, "n_cd": 1.0,
            "unit_label": "gamma_ab",
        })
        rule = None
    elif name in ("fig4", "fig5", "fig6"):
        base = validate_params({
            "omega": 10.0, "g": 1.0, "gamma_ab": 2.0, "gamma_ac": 2.0,
            "gamma_bd": 1.0, "gamma_cd": 1.5, "r_bd": 0.0, "r_cd": 1.0,
            "unit_label": "gamma_bd",
        })
        rule = ("delta2 = lambda_plus(delta1)" if name == "fig4"
                else "delta2 = delta1")
    else:
        raise ConfigError(f"unknown preset {name!r}; "
                          f"choose from {sorted(_PRESET_RANGES)}")
    parameter, lo, hi = _PRESET_RANGES[name]
    grid = tuple(np.linspace(lo, hi, points))
    return SweepSpec(base=base, parameter=parameter, grid=grid,
                     coupling_rule=rule)


def load_config(path: str) -> SweepSpec | SystemParams:
    """Read a JSON config: params alone, or params plus a sweep block.

    Schema::

        {"params": {<SystemParams fields, n_bd/n_cd aliases allowed>},
         "sweep": {"parameter": <name>,
                   "grid": [..] | {"start": x, "stop": y, "points": n},
                   "coupling_rule": <optional rule string>}}

    The sweep block is optional; without it the file denotes a single
    parameter point.  Unknown keys anywhere are rejected.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {path!r} at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}") from exc

    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - {"params", "sweep"}
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    if "params" not in raw or not isinstance(raw["params"], dict):
        raise ConfigError('config needs a "params" object')
    base = validate_params(raw["params"])
    if "sweep" not in raw:
        return base

    sweep = raw["sweep"]
    if not isinstance(sweep, dict):
        raise ConfigError('"sweep" must be an object')
    unknown = set(sweep) - {"parameter", "grid", "coupling_rule"}
    if unknown:
        raise ConfigError(f"unknown sweep key(s): {sorted(unknown)}")
    try:
        parameter = sweep["parameter"]
        grid_spec = sweep["grid"]
    except KeyError as exc:
        raise ConfigError(f"sweep block is missing {exc}") from exc
    if isinstance(grid_spec, dict):
        unknown = set(grid_spec) - {"start", "stop", "points"}
        if unknown:
            raise ConfigError(f"unknown grid key(s): {sorted(unknown)}")
        try:
            start, stop = grid_spec["start"], grid_spec["stop"]
            points = int(grid_spec["points"])
        except KeyError as exc:
            raise ConfigError(f"grid range is missing {exc}") from exc
        if points < 1:
            raise ConfigError("grid points must be >= 1")
        grid: Sequence[float] = np.linspace(start, stop, points)
    elif isinstance(grid_spec, list):
        grid = grid_spec
    else:
        raise ConfigError('"grid" must be a list or a start/stop/points object')
    return SweepSpec(base=base, parameter=parameter, grid=tuple(grid),
                     coupling_rule=sweep.get("coupling_rule"))


def _format_cell(value: float | bool) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return format(value, ".17g")


def _row_record(row: SweepRow) -> dict[str, float | bool | None]:
    record: dict[str, float | bool | None] = {}
    for name in ROW_FIELDS:
        value = getattr(row, name)
        if isinstance(value, float) and math.isnan(value):
            record[name] = None
        else:
            record[name] = value
    return record


def write_output(rows: Iterable[SweepRow], fmt: str, stream: TextIO) -> None:
    """Emit rows as CSV (17 significant digits) or JSON (NaN becomes null)."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    if fmt == "csv":
        stream.write(",".join(ROW_FIELDS) + "\n")
        for row in rows:
            stream.write(",".join(_format_cell(getattr(row, name))
                                  for name in ROW_FIELDS) + "\n")
    elif fmt == "json":
        json.dump([_row_record(row) for row in rows], stream, indent=2,
                  allow_nan=False)
        stream.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def read_rows_json(path: str) -> list[SweepRow]:
    """Load rows previously written as JSON (inverse of :func:`write_output`)."""
    with open(path, encoding="utf-8") as fh:
        records = json.load(fh)
    rows = []
    for record in records:
        clean = {k: (float("nan") if v is None else v)
                 for k, v in record.items()}
        rows.append(SweepRow(**clean))
    return rows


def _log_provenance(spec: SweepSpec, label: str, stream: TextIO) -> None:
    p = spec.base
    param_text = ", ".join(
        f"{f.name}={getattr(p, f.name):g}" for f in fields(SystemParams)
        if f.name != "unit_label")
    stream.write(f"# {label}: sweep {spec.parameter} over "
                 f"[{spec.grid[0]:g}, {spec.grid[-1]:g}] "
                 f"({len(spec.grid)} points)"
                 + (f", rule '{spec.coupling_rule}'" if spec.coupling_rule
                    else "") + "\n")
    stream.write(f"# base params ({p.unit_label}): {param_text}\n")


def _emit(rows: list[SweepRow], fmt: str, out: str | None) -> None:
    if out is None:
        write_output(rows, fmt, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_output(rows, fmt, fh)


def _emit_single(obs: dict[str, float], fmt: str, out: str | None) -> None:
    # a single point has no swept value and no failure flag
    def _write(stream: TextIO) -> None:
        if fmt == "csv":
            stream.write(",".join(obs) + "\n")
            stream.write(",".join(_format_cell(v) for v in obs.values()) + "\n")
        else:
            json.dump(obs, stream, indent=2, allow_nan=False)
            stream.write("\n")

    if out is None:
        _write(sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            _write(fh)


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point; returns a process exit code."""
    parser = argparse.ArgumentParser(
        prog="lwi4",
        description="Steady-state gain and inversion diagnostics for the "
                    "driven four-level atom")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one parameter point")
    p_solve.add_argument("--config", required=True,
                         help="JSON file with a params block")
    p_solve.add_argument("--format", choices=("csv", "json"), default="csv")
    p_solve.add_argument("--out", help="output path (default: stdout)")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    source = p_sweep.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=sorted(_PRESET_RANGES))
    source.add_argument("--config", help="JSON file with params + sweep blocks")
    p_sweep.add_argument("--points", type=int,
                         help="regrid a preset range uniformly (presets only)")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--out", help="output path (default: stdout)")
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="worker threads (output is identical either way)")

    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            loaded = load_config(args.config)
            if isinstance(loaded, SweepSpec):
                raise ConfigError(
                    "'solve' wants a params-only config; use 'sweep' for "
                    "configs with a sweep block")
            _emit_single(_observables(loaded), args.format, args.out)
        else:
            if args.preset is not None:
                spec = (preset(args.preset) if args.points is None
                        else preset(args.preset, args.points))
                label = f"preset {args.preset}"
            else:
                if args.points is not None:
                    raise ConfigError("--points only applies to --preset runs")
                loaded = load_config(args.config)
                if not isinstance(loaded, SweepSpec):
                    raise ConfigError(
                        "'sweep' needs a config with a sweep block")
                spec = loaded
                label = f"config {args.config}"
            log_stream = sys.stdout if args.out else sys.stderr
            _log_provenance(spec, label, log_stream)
            rows = run_sweep(spec, workers=args.workers)
            _emit(rows, args.format, args.out)
    except (ConfigError, ParameterError, SteadyStateError, SweepError,
            OSError, ValueError) as exc:
        print(f"lwi4: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
