"""First-order Rusanov update of the radial isentropic Euler terms.

The mass equation is advanced in area-weighted flux form,
rho_i += -dt / (r_i^(N-1) dr) * (r_{i+1/2}^(N-1) F_{i+1/2} - r_{i-1/2}^(N-1) F_{i-1/2}),
which telescopes so that sum rho_i r_i^(N-1) dr changes only by wall fluxes.
Walls carry mirrored ghost cells (rho, -m), which makes the wall mass flux
vanish identically.  The momentum equation uses the flux m^2/rho + p with the
geometric source -(N-1)/r m^2/rho evaluated at cell centres.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .eos import GasParams, sound_speed
from .grid import RadialField

Source = Callable[[float, np.ndarray], tuple]


def _velocity(rho, m, vac_tol):
    u = np.zeros_like(m)
    pos = rho > vac_tol
    u[pos] = m[pos] / rho[pos]
    return u


def max_signal_speed(field: RadialField, g: GasParams, vac_tol: float = 0.0) -> np.ndarray:
    rho = np.maximum(field.rho, 0.0)
    return np.abs(_velocity(rho, field.m, vac_tol)) + sound_speed(rho, g)


def rusanov_fluxes(rho, m, g: GasParams, vac_tol: float = 0.0):
    """Face fluxes (mass, momentum) on the cells + 1 faces, walls included."""
    re = np.concatenate([[rho[0]], rho, [rho[-1]]])
    me = np.concatenate([[-m[0]], m, [-m[-1]]])
    re_pos = np.maximum(re, 0.0)
    ue = _velocity(re_pos, me, vac_tol)
    pe = g.kappa * re_pos**g.gamma
    fm = me * ue + pe
    speed = np.abs(ue) + np.sqrt(g.gamma * g.kappa * re_pos ** (g.gamma - 1))
    a = np.maximum(speed[:-1], speed[1:])
    f_rho = 0.5 * (me[:-1] + me[1:]) - 0.5 * a * (re[1:] - re[:-1])
    f_m = 0.5 * (fm[:-1] + fm[1:]) - 0.5 * a * (me[1:] - me[:-1])
    return f_rho, f_m


def convective_update(
    field: RadialField,
    dt: float,
    g: GasParams,
    source: Source | None = None,
    vac_tol: float = 0.0,
):
    """Return (rho, m) after one forward-Euler Rusanov step of length ``dt``."""
    grid = field.grid
    rho, m = field.rho, field.m
    n1 = grid.dim - 1
    f_rho, f_m = rusanov_fluxes(rho, m, g, vac_tol)
    area = grid.faces**n1
    vol = grid.r**n1 * grid.dr
    flux = area * f_rho
    rho_new = rho - dt * (flux[1:] - flux[:-1]) / vol
    u = _velocity(rho, m, vac_tol)
    m_new = m - dt * (f_m[1:] - f_m[:-1]) / grid.dr - dt * n1 / grid.r * m * u
    if source is not None:
        s_rho, s_m = source(field.t, grid.r)
        rho_new = rho_new + dt * np.asarray(s_rho)
        m_new = m_new + dt * np.asarray(s_m)
    return rho_new, m_new
