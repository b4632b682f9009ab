"""Glue between a :class:`RunConfig` and the solvers."""
from __future__ import annotations

import time

from .config import RunConfig
from .diagnostics import RateMonitor
from .euler_ref import run_euler
from .grid import RadialField
from .initdata import build_initial_data, sample_profile
from .ns_solver import run
from .trajectory import Trajectory


def initial_field(cfg: RunConfig) -> RadialField:
    """Pipeline-smoothed data when enabled for a viscous run, the raw sampled profile otherwise."""
    if cfg.uses_pipeline:
        return build_initial_data(cfg.initdata_spec, cfg.grid, cfg.gas)
    return sample_profile(cfg.profile, cfg.grid)


def _meta(cfg: RunConfig, model: str) -> dict:
    return {"config_hash": cfg.hash, "model": model}


def simulate(cfg: RunConfig, model: str | None = None) -> Trajectory:
    """Run the configured model (or ``model`` when given) with accumulated diagnostics."""
    model = model or cfg.model
    g = cfg.gas
    start = time.perf_counter()
    if model == "euler":
        init = sample_profile(cfg.profile, cfg.grid)
        traj = run_euler(init, cfg.solver, g, cfg.vac_tol, RateMonitor(g, None, cfg.diagnostics), _meta(cfg, model))
    else:
        v = cfg.viscosity
        init = initial_field(cfg)
        traj = run(init, cfg.solver, v, g, RateMonitor(g, v, cfg.diagnostics), meta=_meta(cfg, model))
    traj.wall_time = time.perf_counter() - start
    return traj


def evaluate_verdicts(rep, cfg: RunConfig, model: str | None = None) -> dict:
    """Pass/fail checks enabled by the configuration, keyed by name."""
    model = model or cfg.model
    lim = cfg.data["verdicts"]
    out = {}

    def add(name, value, limit, passed):
        out[name] = {"value": float(value), "limit": None if limit is None else float(limit), "passed": bool(passed)}

    drift = rep.summary["mass_drift_rel"]
    if lim["mass_drift_max"] is not None:
        add("mass_conserved", drift, lim["mass_drift_max"], drift <= lim["mass_drift_max"])
    e = rep["E_rel"]
    add("energy_nonnegative", e.min(), 0.0, e.min() >= 0)
    if model == "euler":
        rise = float(max(0.0, (e[1:] - e[:-1]).max())) if e.size > 1 else 0.0
        add("energy_non_increasing", rise, 1e-10, rise <= 1e-10)
    else:
        floor = cfg.solver.rho_floor
        add("density_above_floor", rep.summary["rho_min"], floor, rep.summary["rho_min"] > floor)
        for key, col in (("energy_residual_max", "energy_residual"), ("bd_residual_max", "bd_residual")):
            if lim[key] is not None and col in rep.columns:
                val = float(rep[col].max())
                add(col, val, lim[key], val <= lim[key])
    return out
