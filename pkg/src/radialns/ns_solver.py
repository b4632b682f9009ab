"""Radial compressible Navier-Stokes solver on [delta, b] with u = 0 on both walls.

One step is Lie (or optionally Strang) splitting of
  (a) an explicit Rusanov update of the inviscid terms with geometric sources,
  (b) a backward-Euler solve of rho u_t = viscous force with rho frozen,
  (c) m = rho u.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import viscous
from .eos import GasParams, ViscosityParams
from .fv import Source, convective_update, max_signal_speed
from .grid import RadialField
from .trajectory import Snapshot, Trajectory

log = logging.getLogger(__name__)


class StepFault(RuntimeError):
    """Density fell to the positivity floor (or a contract was violated) during a step."""

    def __init__(self, message: str, cell: int | None = None, t: float | None = None):
        super().__init__(message)
        self.cell = cell
        self.t = t


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    cfl: float = 0.4
    t_end: float = 1.0
    snapshot_interval: float | None = None
    implicit_viscosity: bool = True
    splitting: str = "lie"
    dt: float | None = None
    rho_floor: float = 1e-12
    max_steps: int = 10_000_000
    wall_time_budget: float | None = None

    def __post_init__(self):
        if not 0 < self.cfl < 1:
            raise ValueError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not self.t_end >= 0:
            raise ValueError(f"t_end must be non-negative, got {self.t_end}")
        if self.snapshot_interval is not None and not self.snapshot_interval > 0:
            raise ValueError("snapshot_interval must be positive")
        if self.splitting not in ("lie", "strang"):
            raise ValueError(f"splitting must be 'lie' or 'strang', got {self.splitting!r}")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")


def cfl_dt(field: RadialField, cfg: SolverConfig, v: ViscosityParams | None, g: GasParams) -> float:
    if not field.is_finite():
        raise ValueError("non-finite field")
    dt = cfg.cfl * field.grid.dr / float(np.max(max_signal_speed(field, g)))
    if v is not None and v.epsilon > 0 and not cfg.implicit_viscosity:
        dt = min(dt, cfg.cfl * viscous.explicit_dt_limit(field.grid, field.rho, v))
    return dt


def _viscous(field: RadialField, dt: float, v: ViscosityParams, cfg: SolverConfig) -> np.ndarray:
    u = field.u
    if v.epsilon == 0:
        return field.m
    update = viscous.implicit_update if cfg.implicit_viscosity else viscous.explicit_update
    return field.rho * update(field.grid, field.rho, u, dt, v)


def _check_positive(rho, cfg: SolverConfig, t: float):
    bad = np.flatnonzero(~(rho > cfg.rho_floor))
    if bad.size:
        i = int(bad[0])
        raise StepFault(f"density {rho[i]:.3e} at or below floor {cfg.rho_floor:g} in cell {i} at t={t:.6g}", i, t)


def step(
    field: RadialField,
    dt: float,
    v: ViscosityParams,
    g: GasParams,
    cfg: SolverConfig = SolverConfig(),
    source: Source | None = None,
) -> RadialField:
    f = field
    if cfg.splitting == "strang":
        f = RadialField(f.grid, f.rho, _viscous(f, 0.5 * dt, v, cfg), f.t)
    rho, m = convective_update(f, dt, g, source)
    _check_positive(rho, cfg, field.t + dt)
    f = RadialField(field.grid, rho, m, field.t + dt)
    h = 0.5 * dt if cfg.splitting == "strang" else dt
    f.m = _viscous(f, h, v, cfg)
    if not f.is_finite():
        raise StepFault(f"non-finite state at t={f.t:.6g}", None, f.t)
    return f


def march(
    initial: RadialField,
    cfg: SolverConfig,
    advance: Callable[[RadialField, float], RadialField],
    dt_of: Callable[[RadialField], float],
    monitor=None,
    meta: dict | None = None,
) -> Trajectory:
    """Generic time loop shared by the viscous and inviscid solvers.

    ``monitor.rates(field)`` returns instantaneous integrands that are
    accumulated in time with the trapezoidal rule.
    """
    field = initial.copy()
    t_end = cfg.t_end
    interval = cfg.snapshot_interval or t_end or 1.0
    rates = monitor.rates(field) if monitor else {}
    accum = {k: 0.0 for k in rates}
    traj = Trajectory(initial.grid, [Snapshot(field.t, field.rho.copy(), field.m.copy(), dict(accum))], dict(meta or {}))
    next_snap = field.t + interval
    start = time.perf_counter()
    steps = 0
    tol = 1e-12 * max(t_end, 1.0)
    while field.t < t_end - tol:
        dt = cfg.dt if cfg.dt is not None else dt_of(field)
        target = min(next_snap, t_end)
        if field.t + dt >= target - tol:
            dt = target - field.t
        new = advance(field, dt)
        new.t = target if abs(new.t - target) <= tol else new.t
        if monitor:
            new_rates = monitor.rates(new)
            for k in accum:
                accum[k] += 0.5 * dt * (rates[k] + new_rates[k])
            rates = new_rates
        field = new
        steps += 1
        if abs(field.t - target) <= tol:
            traj.snapshots.append(Snapshot(field.t, field.rho.copy(), field.m.copy(), dict(accum)))
            next_snap = target + interval
        if steps >= cfg.max_steps:
            raise BudgetExceeded(f"step limit {cfg.max_steps} reached at t={field.t:.6g}")
        if cfg.wall_time_budget is not None and time.perf_counter() - start > cfg.wall_time_budget:
            raise BudgetExceeded(f"wall-clock budget {cfg.wall_time_budget}s exceeded at t={field.t:.6g}")
    traj.meta["steps"] = steps
    log.info("advanced %d steps to t=%g", steps, field.t)
    return traj


def run(
    initial: RadialField,
    cfg: SolverConfig,
    v: ViscosityParams,
    g: GasParams,
    monitor=None,
    source: Source | None = None,
    meta: dict | None = None,
) -> Trajectory:
    _check_positive(initial.rho, cfg, initial.t)
    return march(
        initial,
        cfg,
        lambda f, dt: step(f, dt, v, g, cfg, source),
        lambda f: cfl_dt(f, cfg, v, g),
        monitor,
        meta,
    )
