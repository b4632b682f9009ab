"""Discrete radial viscous operator.

The viscous force eps((mu+lam)(u_r + (N-1)u/r))_r - eps (N-1)/r mu_r u is, in the
r^(N-1)-weighted inner product, minus the gradient of

    Phi(u) = eps/2 * int r^(N-1) [mu (u_r^2 + (N-1) u^2/r^2) + lam (u_r + (N-1) u/r)^2] dr.

We discretize Phi face by face (interior faces use the two neighbouring cells,
wall faces the half cell between centre and wall where u = 0).  The stiffness
matrix K of Phi is symmetric positive definite and tridiagonal, and
u.K u is exactly the discrete dissipation rate.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

from .eos import ViscosityParams
from .grid import RadialGrid


def face_density(grid: RadialGrid, rho) -> np.ndarray:
    """Arithmetic face averages; wall faces copy the adjacent cell (zero-gradient)."""
    rho = np.asarray(rho, dtype=float)
    out = np.empty(grid.cells + 1)
    out[1:-1] = 0.5 * (rho[:-1] + rho[1:])
    out[0] = rho[0]
    out[-1] = rho[-1]
    return out


def face_kinematics(grid: RadialGrid, u):
    """Face values (u_r, u) and quadrature lengths; u = 0 on the two walls."""
    u = np.asarray(u, dtype=float)
    dr = grid.dr
    ur = np.empty(grid.cells + 1)
    uf = np.zeros(grid.cells + 1)
    ur[1:-1] = (u[1:] - u[:-1]) / dr
    uf[1:-1] = 0.5 * (u[1:] + u[:-1])
    ur[0] = u[0] / (0.5 * dr)
    ur[-1] = -u[-1] / (0.5 * dr)
    length = np.full(grid.cells + 1, dr)
    length[0] = length[-1] = 0.5 * dr
    return ur, uf, length


def dissipation_density(grid: RadialGrid, rho, u, v: ViscosityParams) -> np.ndarray:
    """Per-face eps * r^(N-1) * [mu(u_r^2 + (N-1)u^2/r^2) + lam(div u)^2] * length."""
    rf = face_density(grid, rho)
    ur, uf, length = face_kinematics(grid, u)
    r = grid.faces
    n1 = grid.dim - 1
    mu, lam = v.mu(rf), v.lam(rf)
    div = ur + n1 * uf / r
    q = mu * (ur**2 + n1 * (uf / r) ** 2) + lam * div**2
    return v.epsilon * q * r**n1 * length


def dissipation_rate(grid: RadialGrid, rho, u, v: ViscosityParams) -> float:
    return float(np.sum(dissipation_density(grid, rho, u, v)))


def stiffness_bands(grid: RadialGrid, rho, v: ViscosityParams):
    """Diagonal and off-diagonal of K (off-diagonal has length cells - 1)."""
    M, dr, n1 = grid.cells, grid.dr, grid.dim - 1
    rf = face_density(grid, rho)
    mu, lam = v.mu(rf), v.lam(rf)
    r = grid.faces
    w = v.epsilon * r**n1 * dr
    diag = np.zeros(M)
    off = np.zeros(M - 1)

    # interior faces: g = (uR - uL)/dr, a/r = (uL + uR)/(2r), div = g + (N-1) a/r
    ri, mi, li, wi = r[1:-1], mu[1:-1], lam[1:-1], w[1:-1]
    cL, cR = -1 / dr, 1 / dr
    e = 1 / (2 * ri)
    dL, dR = cL + n1 * e, cR + n1 * e
    kLL = wi * (mi * (cL * cL + n1 * e * e) + li * dL * dL)
    kRR = wi * (mi * (cR * cR + n1 * e * e) + li * dR * dR)
    kLR = wi * (mi * (cL * cR + n1 * e * e) + li * dL * dR)
    diag[:-1] += kLL
    diag[1:] += kRR
    off += kLR

    # wall faces: half-cell length, g = +-2u/dr, u = 0 on the wall
    for f, c in ((0, 0), (M, M - 1)):
        diag[c] += 0.5 * w[f] * (mu[f] + lam[f]) * 4 / dr**2
    return diag, off


def stiffness_matrix(grid: RadialGrid, rho, v: ViscosityParams) -> np.ndarray:
    diag, off = stiffness_bands(grid, rho, v)
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def implicit_update(grid: RadialGrid, rho, u, dt: float, v: ViscosityParams) -> np.ndarray:
    """Backward Euler: (W_rho + dt K) u_new = W_rho u."""
    diag, off = stiffness_bands(grid, rho, v)
    mass = np.asarray(rho) * grid.weights
    ab = np.zeros((3, grid.cells))
    ab[0, 1:] = dt * off
    ab[1] = mass + dt * diag
    ab[2, :-1] = dt * off
    return solve_banded((1, 1), ab, mass * np.asarray(u))


def explicit_update(grid: RadialGrid, rho, u, dt: float, v: ViscosityParams) -> np.ndarray:
    diag, off = stiffness_bands(grid, rho, v)
    u = np.asarray(u, dtype=float)
    ku = diag * u
    ku[:-1] += off * u[1:]
    ku[1:] += off * u[:-1]
    return u - dt * ku / (np.asarray(rho) * grid.weights)


def explicit_dt_limit(grid: RadialGrid, rho, v: ViscosityParams) -> float:
    """Largest stable forward-Euler step, 2 / spectral radius of W^-1 K (Gershgorin bound)."""
    if v.epsilon == 0:
        return np.inf
    diag, off = stiffness_bands(grid, rho, v)
    row = np.abs(diag)
    row[:-1] += np.abs(off)
    row[1:] += np.abs(off)
    return float(2.0 / np.max(row / (np.asarray(rho) * grid.weights)))
