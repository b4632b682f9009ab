"""Energy, BD-entropy, integrability and decay functionals evaluated on solver output.

Integrals use the solver's midpoint rule with weight r^(N-1); windows count
partial cells by overlap.  Time integrals are accumulated inside the solver
loop by :class:`RateMonitor` (trapezoidal in time) and stored with every
snapshot, so a report rebuilt from files equals the in-run report.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import viscous
from .eos import GasParams, ViscosityParams, relative_internal_energy
from .grid import RadialField
from .trajectory import FMT, Trajectory


@dataclass(frozen=True)
class DiagnosticsConfig:
    hi_window: tuple = (1.0, 2.0)
    origin_radius: float = 2.0
    vartheta: float = 0.5
    probes: tuple = (1.0, 2.0, 4.0)
    decay_r_min: float = 1.0

    def __post_init__(self):
        d, D = self.hi_window
        if not 0 <= d < D:
            raise ValueError(f"hi_window must satisfy 0 <= d < D, got {self.hi_window}")
        if not 0 < self.vartheta < 1:
            raise ValueError(f"vartheta must lie in (0, 1), got {self.vartheta}")


def _u(field: RadialField):
    return field.u


def relative_energy(field: RadialField, g: GasParams) -> float:
    """int (m^2/(2 rho) + e(rho, rho_bar)) r^(N-1) dr; vacuum cells contribute e(0, rho_bar)."""
    rho = np.maximum(field.rho, 0.0)
    return field.grid.integrate(0.5 * field.m * _u(field) + relative_internal_energy(rho, g))


def bd_functional(field: RadialField, g: GasParams, v: ViscosityParams) -> float:
    """int (rho/2 |u + eps mu_r / rho|^2 + e) r^(N-1) dr with centred mu_r."""
    rho = field.rho
    mu_r = field.grid.gradient(v.mu(rho))
    w = field.u + v.epsilon * mu_r / rho
    return field.grid.integrate(0.5 * rho * w**2 + relative_internal_energy(rho, g))


def bd_functional_expanded(field: RadialField, g: GasParams, v: ViscosityParams) -> float:
    """Same functional assembled as E_rel + eps int u mu_r + eps^2/2 int mu_r^2 / rho."""
    rho = field.rho
    mu_r = field.grid.gradient(v.mu(rho))
    eps = v.epsilon
    return (
        relative_energy(field, g)
        + eps * field.grid.integrate(field.u * mu_r)
        + 0.5 * eps**2 * field.grid.integrate(mu_r**2 / rho)
    )


class RateMonitor:
    """Integrands of the time-accumulated functionals."""

    def __init__(self, g: GasParams, v: ViscosityParams | None, cfg: DiagnosticsConfig = DiagnosticsConfig()):
        self.g, self.v, self.cfg = g, v, cfg

    def rates(self, field: RadialField) -> dict:
        g, v, cfg = self.g, self.v, self.cfg
        grid = field.grid
        rho = np.maximum(field.rho, 0.0)
        u = field.u
        out = {}
        d, D = cfg.hi_window
        out["HI_local"] = float(np.sum(rho ** (g.gamma + 1) * grid.window_weights(d, D, radial=False)))
        hi = (rho * np.abs(u) ** 3 + rho ** (g.gamma + g.theta)) * grid.window_weights(0.0, cfg.origin_radius)
        out["HI_origin"] = float(np.sum(hi))
        for r0 in cfg.probes:
            ua = abs(float(np.interp(r0, grid.r, u)))
            out[f"decay_u@{r0:g}"] = ua + ua**3
        if v is not None and v.epsilon > 0:
            eps, al, dl = v.epsilon, v.alpha, v.delta
            out["D_visc"] = viscous.dissipation_rate(grid, rho, u, v)
            rho_r = grid.gradient(rho)
            p_r = grid.gradient(g.kappa * rho**g.gamma)
            mu_r = grid.gradient(v.mu(rho))
            out["BD_cross"] = eps * grid.integrate(p_r / rho * mu_r)
            out["GradRho_dissip"] = eps * grid.integrate((1 + dl * rho ** (al - 1)) * rho ** (g.gamma - 2) * rho_r**2)
            u_r = grid.gradient(u)
            wgt = grid.r ** (2 * (grid.dim - 1) + cfg.vartheta) * grid.dr
            out["W_dissip"] = eps * float(np.sum((rho + al * dl * rho**al) * u_r**2 * wgt))
        else:
            out["D_visc"] = 0.0
        return out


def instantaneous(field: RadialField, g: GasParams, v: ViscosityParams | None, cfg: DiagnosticsConfig) -> dict:
    grid = field.grid
    rho = np.maximum(field.rho, 0.0)
    u = field.u
    n = grid.dim
    out = {
        "E_rel": relative_energy(field, g),
        "mass": field.mass(),
        "rho_min": float(np.min(field.rho)),
        "rho_max": float(np.max(field.rho)),
    }
    wgt = grid.r ** (2 * (n - 1) + cfg.vartheta) * grid.dr
    out["W_energy"] = float(np.sum((0.5 * field.m * u + relative_internal_energy(rho, g)) * wgt))
    far = grid.r >= cfg.decay_r_min
    expo = 0.75 * (n - 1) + cfg.vartheta / 4
    out["DecayW_rho"] = float(np.max(np.abs(rho[far] - g.rho_bar) * grid.r[far] ** expo)) if far.any() else 0.0
    u_r = grid.gradient(u)
    out["opt_ur_l2"] = float(np.sqrt(np.sum(u_r**2) * grid.dr))
    if np.all(field.rho > 0):
        rho_r = grid.gradient(rho)
        out["opt_logslope"] = grid.integrate((rho_r / rho) ** (2 * n))
        if v is not None:
            al, dl = v.alpha, v.delta
            out["BD"] = bd_functional(field, g, v)
            out["GradRho"] = v.epsilon**2 * grid.integrate(
                (1 + dl * rho ** (al - 1) + dl**2 * rho ** (2 * (al - 1))) * rho_r**2 / rho
            )
    return out


@dataclass
class DiagnosticsReport:
    t: np.ndarray
    columns: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def write(self, out: Path, stem: str = "diagnostics") -> tuple[Path, Path]:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        names = sorted(self.columns)
        csv_path = out / f"{stem}.csv"
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + names)
            for k, t in enumerate(self.t):
                w.writerow([FMT % t] + [FMT % self.columns[n][k] for n in names])
        json_path = out / f"{stem}.json"
        json_path.write_text(json.dumps(self.summary, indent=1, sort_keys=True))
        return csv_path, json_path


def report(
    traj: Trajectory,
    g: GasParams,
    v: ViscosityParams | None,
    cfg: DiagnosticsConfig = DiagnosticsConfig(),
) -> DiagnosticsReport:
    rows = [instantaneous(traj.field(k), g, v, cfg) for k in range(len(traj.snapshots))]
    names = sorted(set().union(*rows))
    cols = {n: np.array([r.get(n, np.nan) for r in rows]) for n in names}
    for n in sorted(traj.snapshots[0].accum):
        cols[n] = np.array([s.accum[n] for s in traj.snapshots])
    n = traj.grid.dim
    for r0 in cfg.probes:
        key = f"decay_u@{r0:g}"
        if key in cols:
            cols[f"DecayW_u@{r0:g}"] = cols[key] * r0 ** (n - 1 + cfg.vartheta / 2)
    rep = DiagnosticsReport(traj.times, cols)
    if "D_visc" in cols:
        cols["energy_residual"] = energy_identity_residual(rep)
    if "BD" in cols and "BD_cross" in cols:
        cols["bd_residual"] = bd_identity_residual(rep)
    rep.summary = _summary(rep, g, cfg, traj)
    return rep


def energy_identity_residual(rep: DiagnosticsReport) -> np.ndarray:
    """|E_rel(t) + accumulated viscous dissipation - E_rel(0)|."""
    e = rep["E_rel"]
    return np.abs(e + rep["D_visc"] - e[0])


def bd_identity_residual(rep: DiagnosticsReport) -> np.ndarray:
    """|BD(t) + eps int int (p_r/rho) mu_r r^(N-1) - BD(0)|."""
    bd = rep["BD"]
    return np.abs(bd + rep["BD_cross"] - bd[0])


def tail_slope(r, values, r_min: float = 1.0) -> float:
    """Least-squares slope of log|values| against log r over r >= r_min (nonzero values only)."""
    r = np.asarray(r)
    vals = np.abs(np.asarray(values))
    keep = (r >= r_min) & (vals > 0)
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(r[keep]), np.log(vals[keep]), 1)[0])


def _summary(rep: DiagnosticsReport, g: GasParams, cfg: DiagnosticsConfig, traj: Trajectory) -> dict:
    final = {k: float(v[-1]) for k, v in rep.columns.items()}
    mass = rep["mass"]
    n = traj.grid.dim
    last = traj.field(-1)
    return {
        "final": final,
        "mass_drift_rel": float(np.max(np.abs(mass - mass[0])) / abs(mass[0])) if mass[0] else 0.0,
        "rho_min": float(np.min(rep["rho_min"])),
        "E_rel_nonnegative": bool(np.all(rep["E_rel"] >= 0)),
        "decay_slope_rho": tail_slope(last.grid.r, last.rho - g.rho_bar, cfg.decay_r_min),
        "decay_slope_reference": -(0.75 * (n - 1) + cfg.vartheta / 4),
        "config": asdict(cfg),
    }


def bound_monitors(traj: Trajectory, g: GasParams, v: ViscosityParams | None, cfg: DiagnosticsConfig = DiagnosticsConfig()) -> list:
    """One row per monitored bound: its value at the final time and the window it refers to."""
    rep = report(traj, g, v, cfg)
    rows = [
        {"name": "HI_local", "window": list(cfg.hi_window), "value": float(rep["HI_local"][-1])},
        {"name": "HI_origin", "window": [traj.grid.delta, cfg.origin_radius], "value": float(rep["HI_origin"][-1])},
        {"name": "DecayW_rho", "window": [cfg.decay_r_min, traj.grid.b], "value": float(np.max(rep["DecayW_rho"]))},
        {"name": "W_energy", "window": [traj.grid.delta, traj.grid.b], "value": float(np.max(rep["W_energy"]))},
    ]
    for r0 in cfg.probes:
        key = f"DecayW_u@{r0:g}"
        if key in rep.columns:
            rows.append({"name": key, "window": [r0, r0], "value": float(rep[key][-1])})
    for key in ("GradRho", "GradRho_dissip", "W_dissip", "opt_ur_l2", "opt_logslope"):
        if key in rep.columns:
            rows.append({"name": key, "window": [traj.grid.delta, traj.grid.b], "value": float(np.nanmax(rep[key]))})
    return rows


def initial_functionals(field: RadialField, g: GasParams, v: ViscosityParams, vartheta: float = 0.5) -> dict:
    """E0 (with the unit-sphere area), E1, E2 and the weighted energy of an initial field."""
    grid = field.grid
    rho, u = field.rho, field.u
    n = grid.dim
    al, dl, eps = v.alpha, v.delta, v.epsilon
    energy = 0.5 * field.m * u + relative_internal_energy(np.maximum(rho, 0.0), g)
    sqrt_r = grid.gradient(np.sqrt(rho))
    e1 = eps**2 * grid.integrate((1 + 2 * al * dl * rho ** (al - 1) + al**2 * dl**2 * rho ** (2 * al - 2)) * sqrt_r**2)
    mu_r = grid.gradient(v.mu(rho))
    e2 = grid.integrate(rho * (u ** (2 * n) + np.abs(mu_r / rho) ** (2 * n)))
    return {
        "E0": g.omega_N * grid.integrate(energy),
        "E1": e1,
        "E2": e2,
        "E0_weighted": float(np.sum(energy * grid.r ** (2 * (n - 1) + vartheta) * grid.dr)),
    }
