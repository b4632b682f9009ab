"""Reference first-order solver for the radial isentropic Euler equations.

Uses the same grid, Rusanov fluxes and snapshot format as the viscous solver,
so ladder comparisons need no resampling.  Vacuum cells (rho <= vac_tol) carry
m = 0: velocities there are defined as zero in the fluxes and the momentum is
reset to zero after every step.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnostics import relative_energy
from .eos import GasParams
from .fv import convective_update, max_signal_speed
from .grid import RadialField
from .ns_solver import SolverConfig, StepFault, march
from .trajectory import Trajectory


@dataclass(frozen=True)
class EulerConfig:
    vac_tol: float = 0.0


def _check_vacuum_contract(field: RadialField, vac_tol: float):
    bad = np.flatnonzero((field.rho <= vac_tol) & (field.m != 0))
    if bad.size:
        i = int(bad[0])
        raise StepFault(f"momentum {field.m[i]:.3e} on vacuum cell {i}", i, field.t)
    neg = np.flatnonzero(field.rho < 0)
    if neg.size:
        i = int(neg[0])
        raise StepFault(f"negative density {field.rho[i]:.3e} in cell {i}", i, field.t)


def euler_step(field: RadialField, dt: float, g: GasParams, vac_tol: float = 0.0) -> RadialField:
    _check_vacuum_contract(field, vac_tol)
    rho, m = convective_update(field, dt, g, vac_tol=vac_tol)
    neg = np.flatnonzero(rho < -1e-14 * max(1.0, float(np.max(np.abs(field.rho)))))
    if neg.size:
        i = int(neg[0])
        raise StepFault(f"density {rho[i]:.3e} negative in cell {i} at t={field.t + dt:.6g}", i, field.t + dt)
    rho = np.maximum(rho, 0.0)
    m = np.where(rho > vac_tol, m, 0.0)
    out = RadialField(field.grid, rho, m, field.t + dt)
    if not out.is_finite():
        raise StepFault(f"non-finite state at t={out.t:.6g}", None, out.t)
    return out


def euler_dt(field: RadialField, cfg: SolverConfig, g: GasParams, vac_tol: float = 0.0) -> float:
    if not field.is_finite():
        raise ValueError("non-finite field")
    return cfg.cfl * field.grid.dr / float(np.max(max_signal_speed(field, g, vac_tol)))


def relative_energy_monitor(field: RadialField, g: GasParams) -> float:
    """int (m^2/(2 rho) + e(rho, rho_bar)) r^(N-1) dr, with vacuum cells contributing e(0, rho_bar)."""
    return relative_energy(field, g)


def run_euler(
    initial: RadialField,
    cfg: SolverConfig,
    g: GasParams,
    vac_tol: float = 0.0,
    monitor=None,
    meta: dict | None = None,
) -> Trajectory:
    _check_vacuum_contract(initial, vac_tol)
    return march(
        initial,
        cfg,
        lambda f, dt: euler_step(f, dt, g, vac_tol),
        lambda f: euler_dt(f, cfg, g, vac_tol),
        monitor,
        meta,
    )
