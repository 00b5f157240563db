"""Experiment harness: configured runs, convergence sweeps, CSV emission.

Output is deterministic: the same configuration produces byte-identical
files.  Every CSV starts with '#'-prefixed metadata lines that echo the
configuration (round-trip parseable) and a build id derived from it.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .cn import Predictor, cn_run
from .core import GradientSystem, init_augmented
from .errors import ConfigError
from .kdv import KdvGrid, cnoidal, default_cnoidal_params, kdv_system
from .kepler import KEPLER_PERIOD, kepler_initial_state, kepler_system
from .records import RunRecord
from .rk import predict_stages_explicit, predict_stages_exponential, rk4_run

PROBLEMS = ("kepler", "kdv")
SCHEMES = ("sav-cn-ext", "sav-cn-euler", "sav-rk4")

# points closer than this factor to the smallest error are treated as floored
FLOOR_FACTOR = 10.0
# a fine-end local order below this marks a round-off plateau
FLOOR_FLAT_ORDER = 0.5
# the fit keeps the fine-end run whose local order stays this close to settled
STABLE_ORDER_TOL = 0.5


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat run configuration; every field round-trips through the CSV header."""

    problem: str
    scheme: str
    dt_exp: Optional[int] = None
    dt: Optional[float] = None
    periods: Optional[int] = None
    steps: Optional[int] = None
    n_points: int = 16
    a_plus: float = 1.0
    a_minus: float = 1.0
    stride: int = 1
    snapshots: bool = False
    exp_lo: Optional[int] = None
    exp_hi: Optional[int] = None
    fit_lo: Optional[int] = None
    fit_hi: Optional[int] = None
    out: str = "runs"

    def validate_common(self) -> None:
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}; choose from {PROBLEMS}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if self.problem == "kdv" and (self.n_points <= 0 or self.n_points % 2 != 0):
            raise ConfigError(f"n_points must be a positive even integer, got {self.n_points}")

    def validate_run(self) -> None:
        self.validate_common()
        if (self.dt is None) == (self.dt_exp is None):
            raise ConfigError("exactly one of dt / dt_exp is required for a run")
        if self.dt_exp is not None and self.dt_exp < 0:
            raise ConfigError(f"dt_exp must be >= 0, got {self.dt_exp}")
        if self.dt is not None and not self.dt > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if (self.periods is None) == (self.steps is None):
            raise ConfigError("exactly one of periods / steps is required for a run")
        if self.periods is not None:
            if self.periods < 1:
                raise ConfigError(f"periods must be >= 1, got {self.periods}")
            if self.dt_exp is None:
                raise ConfigError("periods requires dt_exp so steps land exactly on t = n*T")
        if self.steps is not None and self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")

    def validate_converge(self) -> None:
        self.validate_common()
        if self.exp_lo is None or self.exp_hi is None:
            raise ConfigError("a convergence sweep requires exp-range lo:hi")
        if self.exp_lo < 0 or self.exp_hi < self.exp_lo:
            raise ConfigError(f"bad exp-range {self.exp_lo}:{self.exp_hi}")
        if self.exp_hi - self.exp_lo + 1 < 4:
            raise ConfigError("a convergence sweep needs at least 4 points")
        if (self.fit_lo is None) != (self.fit_hi is None):
            raise ConfigError("fit-range requires both ends, lo:hi")
        if self.fit_lo is not None:
            if self.fit_lo < self.exp_lo or self.fit_hi > self.exp_hi:
                raise ConfigError(
                    f"fit-range {self.fit_lo}:{self.fit_hi} must lie inside "
                    f"exp-range {self.exp_lo}:{self.exp_hi}")
            if self.fit_hi - self.fit_lo + 1 < 2:
                raise ConfigError("fit-range needs at least 2 points")

    def echo_items(self) -> list:
        return [(f.name, _fmt(getattr(self, f.name))) for f in fields(self)]

    def build_id(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.echo_items())
        return hashlib.sha1(text.encode()).hexdigest()[:12]

    @classmethod
    def from_items(cls, items: dict) -> "ExperimentConfig":
        kwargs = {}
        hints = {f.name: f for f in fields(cls)}
        for key, raw in items.items():
            if key not in hints:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = _parse_value(key, raw)
        if "problem" not in kwargs or "scheme" not in kwargs:
            raise ConfigError("config must define problem and scheme")
        return cls(**kwargs)


_INT_KEYS = {"dt_exp", "periods", "steps", "n_points", "stride",
             "exp_lo", "exp_hi", "fit_lo", "fit_hi"}
_FLOAT_KEYS = {"dt", "a_plus", "a_minus"}
_BOOL_KEYS = {"snapshots"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if raw == "None":
        return None
    if key in _BOOL_KEYS:
        if raw not in ("true", "false"):
            raise ConfigError(f"{key} must be true or false, got {raw!r}")
        return raw == "true"
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError:
        raise ConfigError(f"could not parse {key}={raw!r}") from None
    return raw


def parse_config_echo(lines) -> "ExperimentConfig":
    """Rebuild a config from the '#'-prefixed header of a CSV."""
    items = {}
    for line in lines:
        line = line.strip()
        if not line.startswith("#"):
            continue
        body = line[1:].strip()
        if "=" not in body:
            continue
        key, _, value = body.partition("=")
        key = key.strip()
        if key == "build_id" or key.startswith("fitted_"):
            continue
        items[key] = value
    return ExperimentConfig.from_items(items)


@dataclass(frozen=True)
class ProblemSetup:
    sys: GradientSystem
    u0: np.ndarray
    base_period: float
    state_labels: tuple


def build_problem(cfg: ExperimentConfig) -> ProblemSetup:
    if cfg.problem == "kepler":
        sys = kepler_system(shift_plus=cfg.a_plus, shift_minus=cfg.a_minus)
        return ProblemSetup(
            sys=sys,
            u0=kepler_initial_state(),
            base_period=KEPLER_PERIOD,
            state_labels=("x", "y", "u", "v"),
        )
    params = default_cnoidal_params()
    grid = KdvGrid(n_points=cfg.n_points, domain_length=params.spatial_period)
    sys = kdv_system(grid, shift_plus=cfg.a_plus, shift_minus=cfg.a_minus)
    return ProblemSetup(
        sys=sys,
        u0=cnoidal(params, grid, 0.0),
        base_period=params.temporal_period,
        state_labels=tuple(f"u_{j}" for j in range(cfg.n_points)),
    )


def _run_scheme(cfg: ExperimentConfig, setup: ProblemSetup, dt: float, steps: int,
                stride: int = 1, snapshots: bool = False) -> RunRecord:
    z0 = init_augmented(setup.sys, setup.u0)
    if cfg.scheme == "sav-rk4":
        predictor = predict_stages_explicit if cfg.problem == "kepler" else predict_stages_exponential
        return rk4_run(setup.sys, z0, dt, steps, predictor, stride=stride, snapshots=snapshots)
    if cfg.scheme == "sav-cn-ext":
        pred = Predictor.extrapolation()
    elif cfg.problem == "kepler":
        # the Euler-type half-step predictor: explicit for ODE problems,
        # exponential where a stiff splitting is available
        pred = Predictor.half_step_euler()
    else:
        pred = Predictor.half_step_exponential_euler()
    return cn_run(setup.sys, z0, dt, steps, pred, stride=stride, snapshots=snapshots)


def resolve_time_grid(cfg: ExperimentConfig, base_period: float):
    if cfg.dt_exp is not None:
        dt = base_period / 2**cfg.dt_exp
        steps = cfg.steps if cfg.steps is not None else cfg.periods * 2**cfg.dt_exp
    else:
        dt = cfg.dt
        steps = cfg.steps
    if steps % cfg.stride != 0:
        raise ConfigError(f"stride {cfg.stride} must divide steps {steps}")
    return dt, steps


def run_experiment(cfg: ExperimentConfig):
    """Run one configured experiment and write its CSV; returns (record, paths)."""
    cfg.validate_run()
    setup = build_problem(cfg)
    dt, steps = resolve_time_grid(cfg, setup.base_period)
    record = _run_scheme(cfg, setup, dt, steps, stride=cfg.stride, snapshots=cfg.snapshots)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_path = out_dir / f"run_{cfg.problem}_{cfg.scheme}.csv"
    write_run_csv(record, cfg, setup, run_path)
    paths = [run_path]
    if cfg.problem == "kepler" and cfg.snapshots and cfg.periods is not None:
        orbit_path = out_dir / f"orbit_{cfg.scheme}.csv"
        emit_orbit(record, cfg, orbit_path)
        paths.append(orbit_path)
    return record, paths


def _header_lines(cfg: ExperimentConfig, extra=()) -> list:
    lines = [f"# {k}={v}" for k, v in cfg.echo_items()]
    lines.append(f"# build_id={cfg.build_id()}")
    lines.extend(f"# {k}={v}" for k, v in extra)
    return lines


def write_run_csv(record: RunRecord, cfg: ExperimentConfig, setup: ProblemSetup, path) -> None:
    labels = setup.state_labels if record.snapshots is not None else ()
    columns = ["step", "t", "E_mod", "E_orig", "relerr_E_mod", "relerr_E_orig", *labels]
    rel_mod = record.relerr_e_mod
    rel_orig = record.relerr_e_orig
    rows = []
    for row_idx, n in enumerate(record.snapshot_steps):
        vals = [str(int(n)), _fmt(n * record.dt), _fmt(record.e_mod[n]), _fmt(record.e_orig[n]),
                _fmt(rel_mod[n]), _fmt(rel_orig[n])]
        if record.snapshots is not None:
            vals.extend(_fmt(v) for v in record.snapshots[row_idx])
        rows.append(",".join(vals))
    text = "\n".join(_header_lines(cfg) + [",".join(columns)] + rows) + "\n"
    Path(path).write_text(text)


def emit_orbit(record: RunRecord, cfg: ExperimentConfig, path) -> None:
    """Write (x, y) samples with a marker column flagging t = n*T rows."""
    if record.snapshots is None:
        raise ConfigError("orbit output needs state snapshots; rerun with snapshots enabled")
    if cfg.periods is None or cfg.dt_exp is None:
        raise ConfigError("orbit output needs a periods/dt_exp run so t = n*T lands on steps")
    steps_per_period = 2**cfg.dt_exp
    if steps_per_period % record.stride != 0:
        raise ConfigError("stride must divide the steps per period for orbit markers")
    columns = ["step", "t", "x", "y", "period_mark"]
    rows = []
    for row_idx, n in enumerate(record.snapshot_steps):
        mark = 1 if n % steps_per_period == 0 else 0
        x, y = record.snapshots[row_idx][0], record.snapshots[row_idx][1]
        rows.append(",".join([str(int(n)), _fmt(n * record.dt), _fmt(x), _fmt(y), str(mark)]))
    text = "\n".join(_header_lines(cfg) + [",".join(columns)] + rows) + "\n"
    Path(path).write_text(text)


@dataclass(frozen=True)
class ConvergenceRow:
    exp: int
    dt: float
    n_steps: int
    solution_error: float
    energy_error: float


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple
    fitted_order_solution: float
    fitted_order_energy: float
    # inclusive exponent ranges the fits actually used
    fit_window_solution: tuple
    fit_window_energy: tuple


def fit_order(dts, errors):
    """Least-squares slope of log(err) vs log(dt) over the informative window.

    A convergence curve carries rate information only where the error is
    still shrinking at its settled rate, so two kinds of points are dropped
    before fitting.  If the finest-step end has flattened out (local order
    below FLOOR_FLAT_ORDER) the smallest error is taken as the round-off
    floor and points within FLOOR_FACTOR of it are excluded.  The fit then
    covers the longest fine-step run whose local order stays within
    STABLE_ORDER_TOL of its finest value; coarser points, where the error
    is saturated or pre-asymptotic, are ignored.  If fewer than two points
    survive, the fit falls back to every positive point.
    """
    dts = np.asarray(dts, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if dts.size < 2:
        raise ConfigError("order fit needs at least two points")
    positive = np.isfinite(errors) & (errors > 0.0)
    idx = np.flatnonzero(positive)

    def local_orders(sel):
        e, h = errors[sel], dts[sel]
        return np.log(e[:-1] / e[1:]) / np.log(h[:-1] / h[1:])

    if idx.size >= 2 and local_orders(idx)[-1] < FLOOR_FLAT_ORDER:
        floor = errors[idx].min()
        idx = idx[errors[idx] > FLOOR_FACTOR * floor]
    if idx.size >= 2:
        orders = local_orders(idx)
        start = orders.size
        while start > 0 and abs(orders[start - 1] - orders[-1]) <= STABLE_ORDER_TOL:
            start -= 1
        idx = idx[start:]
    if idx.size < 2:
        idx = np.flatnonzero(positive)
    return _fit_at(dts, errors, idx)


def _fit_at(dts, errors, idx):
    mask = np.zeros(np.asarray(errors).shape, dtype=bool)
    mask[idx] = True
    if idx.size < 2:
        return float("nan"), mask
    slope = np.polyfit(np.log(np.asarray(dts)[idx]), np.log(np.asarray(errors)[idx]), 1)[0]
    return float(slope), mask


def fit_order_plain(dts, errors):
    """Least-squares slope over every positive point, no window selection."""
    dts = np.asarray(dts, dtype=float)
    errors = np.asarray(errors, dtype=float)
    positive = np.isfinite(errors) & (errors > 0.0)
    return _fit_at(dts, errors, np.flatnonzero(positive))


def run_convergence(cfg: ExperimentConfig):
    """Sweep dt = T/2^i over the configured range, one period per point.

    The solution error compares the final state against the initial one --
    the exact solution is time-periodic for both benchmark problems -- and
    the energy error is the worst relative drift of the original energy.
    """
    cfg.validate_converge()
    setup = build_problem(cfg)
    rows = []
    for i in range(cfg.exp_lo, cfg.exp_hi + 1):
        steps = 2**i
        dt = setup.base_period / steps
        record = _run_scheme(cfg, setup, dt, steps)
        u_final = record.final_state.u
        sol_err = float(np.abs(u_final - setup.u0).max() / np.abs(setup.u0).max())
        rows.append(ConvergenceRow(
            exp=i, dt=dt, n_steps=steps,
            solution_error=sol_err,
            energy_error=record.max_relerr_e_orig,
        ))
    exps = np.array([r.exp for r in rows])
    dts = np.array([r.dt for r in rows])
    sol_errs = np.array([r.solution_error for r in rows])
    en_errs = np.array([r.energy_error for r in rows])
    if cfg.fit_lo is not None:
        # an explicit window is an exact override: fit those points as given
        window = (exps >= cfg.fit_lo) & (exps <= cfg.fit_hi)
        fit = fit_order_plain
    else:
        window = np.ones(exps.size, dtype=bool)
        fit = fit_order
    order_sol, used_sol = fit(dts[window], sol_errs[window])
    order_en, used_en = fit(dts[window], en_errs[window])
    w_exps = exps[window]
    table = ConvergenceTable(
        rows=tuple(rows),
        fitted_order_solution=order_sol,
        fitted_order_energy=order_en,
        fit_window_solution=_window_range(w_exps, used_sol),
        fit_window_energy=_window_range(w_exps, used_en),
    )
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"converge_{cfg.problem}_{cfg.scheme}.csv"
    write_convergence_csv(table, cfg, path)
    return table, path


def _window_range(exps, used_mask):
    used = exps[used_mask]
    if used.size == 0:
        return (0, 0)
    return (int(used[0]), int(used[-1]))


def write_convergence_csv(table: ConvergenceTable, cfg: ExperimentConfig, path) -> None:
    extra = [
        ("fitted_order_solution", _fmt(table.fitted_order_solution)),
        ("fitted_order_energy", _fmt(table.fitted_order_energy)),
        ("fitted_window_solution", "%d:%d" % table.fit_window_solution),
        ("fitted_window_energy", "%d:%d" % table.fit_window_energy),
    ]
    columns = ["exp", "dt", "n_steps", "solution_error", "energy_error",
               "local_order_solution", "local_order_energy"]
    rows = []
    prev = None
    for row in table.rows:
        if prev is None:
            loc_sol = loc_en = float("nan")
        else:
            # dt halves between rows, so the local order is a log2 ratio
            ratio = np.log(prev.dt / row.dt)
            loc_sol = np.log(prev.solution_error / row.solution_error) / ratio
            loc_en = np.log(prev.energy_error / row.energy_error) / ratio
        rows.append(",".join([
            str(row.exp), _fmt(row.dt), str(row.n_steps),
            _fmt(row.solution_error), _fmt(row.energy_error),
            _fmt(float(loc_sol)), _fmt(float(loc_en)),
        ]))
        prev = row
    text = "\n".join(_header_lines(cfg, extra) + [",".join(columns)] + rows) + "\n"
    Path(path).write_text(text)
