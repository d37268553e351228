"""Single-point evaluation, parameter sweeps and result serialization.

A sweep is described by the same flat configuration mapping as a single
point plus axis keys (``axis1``, ``axis1_start``, ``axis1_stop``,
``axis1_count`` and optionally the ``axis2`` family).  Grid points are
independent, may be evaluated by any number of worker processes, and are
always emitted in row-major grid order, so output files are byte-identical
regardless of parallelism.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    ConvergenceError,
    MagnomechError,
    PhysicalityError,
    SingularPointError,
    SolverError,
    StabilityError,
)
from .lyapunov import solve_lyapunov, stability_check
from .measures import MeasureReport, contrast_ratio, evaluate_measures
from .meanfield import solve_self_consistent
from .model import (
    build_diffusion,
    build_drift,
    drive_conversions,
    feedback_rates,
)
from .params import (
    SYSTEM_KEYS,
    SystemParams,
    resolve_drive_params,
    resolve_system_params,
)

DEFAULT_MEASURES = ("entanglement", "steering", "contangle", "occupation")

_SWEEP_ONLY_KEYS = {
    "axis1", "axis1_start", "axis1_stop", "axis1_count",
    "axis2", "axis2_start", "axis2_stop", "axis2_count",
    "nonreciprocity", "measures", "coupling_mode",
}

_DRIVE_ONLY_KEYS = {
    "rabi", "laser_coupling", "bare_D_mb1", "bare_D_cb2", "spin_count",
    "gyromagnetic_ratio", "drive_field", "drive_power", "laser_power",
    "sphere_radius", "drive_freq_1", "drive_freq_2",
}

_UNIT_SUFFIX = {"hz": "hz", "k": "K", "rad": "rad", "1": "", "m": "m"}


@dataclass(frozen=True)
class SweepAxis:
    """One linearly spaced sweep axis over a named parameter."""

    name: str
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def column(self) -> str:
        suffix = _UNIT_SUFFIX[SYSTEM_KEYS[self.name]]
        return f"{self.name}_{suffix}" if suffix else self.name


@dataclass
class SweepSpec:
    """A full sweep: axes, fixed overrides and evaluation options."""

    axis1: SweepAxis
    axis2: SweepAxis | None = None
    fixed: dict = dataclasses.field(default_factory=dict)
    measures: tuple = DEFAULT_MEASURES
    nonreciprocity: bool = False
    coupling_mode: str = "direct"

    def __post_init__(self):
        for axis in filter(None, (self.axis1, self.axis2)):
            if axis.name not in SYSTEM_KEYS:
                raise ConfigError(f"axis parameter {axis.name!r} is not a model parameter")
            if axis.count < 2:
                raise ConfigError(f"axis {axis.name!r} needs count >= 2")
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise ConfigError("the two sweep axes must address distinct parameters")
        for m in self.measures:
            if m not in DEFAULT_MEASURES:
                raise ConfigError(f"unknown measure family {m!r}")
        if self.coupling_mode not in ("direct", "meanfield"):
            raise ConfigError("coupling_mode must be 'direct' or 'meanfield'")


@dataclass
class ResultTable:
    """Rows of a finished sweep in deterministic grid order."""

    columns: list
    rows: list


def split_config(config: dict):
    """Partition a parsed config mapping into system/drive/sweep parts."""
    system, drive, control = {}, {}, {}
    for key, value in config.items():
        if key in SYSTEM_KEYS:
            system[key] = value
        elif key in _DRIVE_ONLY_KEYS:
            drive[key] = value
        elif key in _SWEEP_ONLY_KEYS:
            control[key] = value
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    return system, drive, control


def _parse_measures(raw) -> tuple:
    if raw is None:
        return DEFAULT_MEASURES
    names = tuple(part.strip() for part in str(raw).split(",") if part.strip())
    for name in names:
        if name not in DEFAULT_MEASURES:
            raise ConfigError(f"unknown measure family {name!r}")
    return names or DEFAULT_MEASURES


def _parse_axis(control: dict, which: str) -> SweepAxis | None:
    name = control.get(which)
    if name is None:
        for part in ("start", "stop", "count"):
            if f"{which}_{part}" in control:
                raise ConfigError(f"{which}_{part} given without {which}")
        return None
    try:
        start = float(control[f"{which}_start"])
        stop = float(control[f"{which}_stop"])
        count = int(control[f"{which}_count"])
    except KeyError as exc:
        raise ConfigError(f"{which} needs {which}_start/_stop/_count") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{which} bounds must be numeric") from exc
    return SweepAxis(str(name), start, stop, count)


def sweep_spec_from_config(config: dict) -> SweepSpec:
    """Build a :class:`SweepSpec` from a parsed configuration mapping."""
    system, drive, control = split_config(config)
    axis1 = _parse_axis(control, "axis1")
    axis2 = _parse_axis(control, "axis2")
    if axis1 is None:
        raise ConfigError("a sweep needs at least axis1")
    fixed = dict(system)
    fixed.update(drive)
    return SweepSpec(
        axis1=axis1,
        axis2=axis2,
        fixed=fixed,
        measures=_parse_measures(control.get("measures")),
        nonreciprocity=bool(control.get("nonreciprocity", False)),
        coupling_mode=str(control.get("coupling_mode", "direct")),
    )


def resolve_point(config: dict, coupling_mode: str = "direct") -> SystemParams:
    """Resolve a config mapping to :class:`SystemParams`.

    In ``meanfield`` mode the effective couplings and the displacement-
    shifted detunings are produced by the self-consistent amplitude
    solve; the real parts of the complex effective couplings enter the
    drift matrix (their imaginary parts are negligible in the supported
    detuning regime).
    """
    system, drive, _ = split_config(config)
    params = resolve_system_params(system)
    if coupling_mode == "direct":
        return params
    drives = resolve_drive_params(drive)
    needs_rabi = drives.rabi == 0.0 and drives.drive_power > 0.0
    needs_laser = drives.laser_coupling == 0.0 and drives.laser_power > 0.0
    if needs_rabi or needs_laser:
        rabi, laser_coupling, _ = drive_conversions(drives, params.gamma_c)
        drives = dataclasses.replace(
            drives,
            rabi=drives.rabi or rabi,
            laser_coupling=drives.laser_coupling or laser_coupling,
        )
    amplitudes = solve_self_consistent(params, drives)
    _, fb_shift, _ = feedback_rates(params.gamma_c, params.reflectivity, params.theta)
    return dataclasses.replace(
        params,
        G_m=amplitudes.g_m_eff.real,
        G_c=amplitudes.g_c_eff.real,
        delta_m_tilde=amplitudes.delta_m_eff - params.barnett_shift,
        delta_c_tilde=amplitudes.delta_c_eff - fb_shift,
    )


def evaluate_point(params: SystemParams, measures=DEFAULT_MEASURES) -> MeasureReport:
    """Gate on stability, solve for the covariance, evaluate measures."""
    drift = build_drift(params)
    gate = stability_check(drift)
    if not gate.stable:
        return MeasureReport(
            stable=False, margin=gate.margin, params=params, reason="unstable"
        )
    cov = solve_lyapunov(drift, build_diffusion(params))
    return evaluate_measures(cov, params, gate.margin, measures)


def run_point(config: dict, measures=None) -> MeasureReport:
    """Full pipeline for one configuration mapping."""
    _, _, control = split_config(config)
    selected = _parse_measures(control.get("measures")) if measures is None else measures
    params = resolve_point(config, str(control.get("coupling_mode", "direct")))
    return evaluate_point(params, selected)


def _reason_code(exc: MagnomechError) -> str:
    if isinstance(exc, StabilityError):
        return "unstable"
    if isinstance(exc, (SingularPointError, ConvergenceError)):
        return "singular"
    if isinstance(exc, (SolverError, PhysicalityError)):
        return "nonphysical"
    return "nonphysical"


def _empty_record() -> dict:
    empty = MeasureReport(stable=False, margin=float("nan"), params=None)
    record = empty.to_record()
    record["stability_margin"] = None
    return record


def _evaluate_task(task):
    """Worker entry point: evaluate one grid cell, never raise."""
    overrides, measures, nonreciprocity, coupling_mode = task
    try:
        if not nonreciprocity:
            params = resolve_point(dict(overrides), coupling_mode)
            return ("single", evaluate_point(params, measures).to_record())
        magnitude = abs(overrides.get("barnett_shift", 0.0))
        records = []
        for sign in (+1.0, -1.0):
            cfg = dict(overrides)
            cfg["barnett_shift"] = sign * magnitude
            params = resolve_point(cfg, coupling_mode)
            records.append(evaluate_point(params, measures).to_record())
        return ("pair", records[0], records[1])
    except MagnomechError as exc:
        return ("error", _reason_code(exc))


_META_KEYS = ("stable", "reason", "stability_margin", "physical", "min_symplectic")


def _measure_columns(record: dict) -> list:
    return [k for k in record if k not in _META_KEYS]


def _pair_row(rec_plus: dict, rec_minus: dict, keys: list) -> dict:
    row = {
        "stable_plus": rec_plus["stable"],
        "stable_minus": rec_minus["stable"],
        "reason": rec_plus["reason"] or rec_minus["reason"],
        "stability_margin_plus": rec_plus["stability_margin"],
        "stability_margin_minus": rec_minus["stability_margin"],
        "physical_plus": rec_plus["physical"],
        "physical_minus": rec_minus["physical"],
    }
    for key in keys:
        vp, vm = rec_plus.get(key), rec_minus.get(key)
        row[f"{key}_plus"] = vp
        row[f"{key}_minus"] = vm
        if vp is None or vm is None:
            row[f"C_{key}"] = None
        else:
            # residual contangles can be negative; the contrast is defined
            # on the nonnegative part
            row[f"C_{key}"] = contrast_ratio(max(vp, 0.0), max(vm, 0.0))
    return row


def run_sweep(spec: SweepSpec, workers: int = 1) -> ResultTable:
    """Evaluate a sweep grid and collect rows in deterministic order.

    Any point-level numerical failure becomes an error row carrying a
    machine-readable reason code; it never aborts the sweep.
    """
    axes = [spec.axis1] + ([spec.axis2] if spec.axis2 else [])
    grids = [axis.values() for axis in axes]

    tasks = []
    axis_values = []
    for v1 in grids[0]:
        if spec.axis2 is None:
            overrides = dict(spec.fixed)
            overrides[spec.axis1.name] = float(v1)
            tasks.append((overrides, spec.measures, spec.nonreciprocity, spec.coupling_mode))
            axis_values.append((float(v1),))
        else:
            for v2 in grids[1]:
                overrides = dict(spec.fixed)
                overrides[spec.axis1.name] = float(v1)
                overrides[spec.axis2.name] = float(v2)
                tasks.append((overrides, spec.measures, spec.nonreciprocity, spec.coupling_mode))
                axis_values.append((float(v1), float(v2)))

    if workers <= 1:
        outcomes = [_evaluate_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(tasks) // (workers * 4))
            outcomes = list(pool.map(_evaluate_task, tasks, chunksize=chunk))

    template = _empty_record()
    measure_keys = _measure_columns(template)
    axis_columns = [axis.column() for axis in axes]
    if spec.nonreciprocity:
        value_columns = [
            "stable_plus", "stable_minus", "reason",
            "stability_margin_plus", "stability_margin_minus",
            "physical_plus", "physical_minus",
        ]
        for key in measure_keys:
            value_columns += [f"{key}_plus", f"{key}_minus", f"C_{key}"]
    else:
        value_columns = list(_META_KEYS) + measure_keys

    rows = []
    for values, outcome in zip(axis_values, outcomes):
        if outcome[0] == "single":
            record = outcome[1]
        elif outcome[0] == "pair":
            record = _pair_row(outcome[1], outcome[2], measure_keys)
        else:
            if spec.nonreciprocity:
                record = _pair_row(_empty_record(), _empty_record(), measure_keys)
                record["stable_plus"] = record["stable_minus"] = False
            else:
                record = dict(template)
                record["stable"] = False
            record["reason"] = outcome[1]
        rows.append(list(values) + [record.get(col) for col in value_columns])
    return ResultTable(columns=axis_columns + value_columns, rows=rows)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{value:.12e}"
    return str(value)


def _native(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def emit(table: ResultTable, fmt: str, destination) -> None:
    """Write a result table as CSV or JSON.

    CSV uses '.' decimals, scientific notation with 13 significant
    digits and newline-terminated rows; JSON is an array of flat
    objects.  Identical tables produce byte-identical files.
    """
    if not table.rows:
        raise ValueError("refusing to emit an empty table")
    if fmt == "csv":
        lines = [",".join(table.columns)]
        for row in table.rows:
            lines.append(",".join(_format_cell(v) for v in row))
        payload = "\n".join(lines) + "\n"
    elif fmt == "json":
        objects = [
            {col: _native(v) for col, v in zip(table.columns, row)}
            for row in table.rows
        ]
        payload = json.dumps(objects, indent=1) + "\n"
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
