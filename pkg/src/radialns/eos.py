"""Gamma-law equation of state, relative internal energy and viscosity laws."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma as gamma_fn
from math import pi

import numpy as np


class DomainError(ValueError):
    """Raised when a state lies outside the physical domain (e.g. negative density)."""


def _check_density(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("density must be non-negative")
    return rho


@dataclass(frozen=True)
class GasParams:
    """Constants of the gamma-law gas p = kappa * rho**gamma.

    ``kappa`` defaults to the normalization (gamma-1)**2 / (4 gamma), which makes
    the sound speed equal theta * rho**theta.
    """

    gamma: float = 2.0
    dim: int = 2
    rho_bar: float = 1.0
    kappa: float | None = None

    def __post_init__(self):
        if not self.gamma > 1:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim}")
        if not self.rho_bar > 0:
            raise ValueError(f"rho_bar must be positive, got {self.rho_bar}")
        if self.kappa is None:
            object.__setattr__(self, "kappa", (self.gamma - 1) ** 2 / (4 * self.gamma))
        elif not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")

    @property
    def theta(self) -> float:
        return (self.gamma - 1) / 2

    @property
    def ell(self) -> float:
        """Exponent of the entropy kernel, (3 - gamma) / (2 (gamma - 1)) > -1/2."""
        return (3 - self.gamma) / (2 * (self.gamma - 1))

    @property
    def omega_N(self) -> float:
        """Surface area of the unit sphere in R^N."""
        return 2 * pi ** (self.dim / 2) / gamma_fn(self.dim / 2)


@dataclass(frozen=True)
class ViscosityParams:
    """mu(rho) = rho + delta rho**alpha, lambda(rho) = delta (alpha - 1) rho**alpha."""

    epsilon: float = 0.05
    delta: float = 0.1
    dim: int = 2
    alpha: float | None = None

    def __post_init__(self):
        if not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        n = self.dim
        if self.alpha is None:
            object.__setattr__(self, "alpha", (2 * n - 1) / (2 * n))
        if not (n - 1) / n < self.alpha < 1:
            raise ValueError(f"alpha must lie in ((N-1)/N, 1) = ({(n - 1) / n}, 1), got {self.alpha}")

    def mu(self, rho):
        rho = np.asarray(rho, dtype=float)
        return rho + self.delta * rho**self.alpha

    def lam(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.delta * (self.alpha - 1) * rho**self.alpha

    def dmu(self, rho):
        """mu'(rho); singular at vacuum since alpha < 1."""
        rho = np.asarray(rho, dtype=float)
        return 1 + self.delta * self.alpha * rho ** (self.alpha - 1)


def pressure(rho, g: GasParams):
    rho = _check_density(rho)
    return g.kappa * rho**g.gamma


def sound_speed(rho, g: GasParams):
    rho = _check_density(rho)
    return np.sqrt(g.gamma * g.kappa * rho ** (g.gamma - 1))


def internal_energy(rho, g: GasParams):
    rho = _check_density(rho)
    return g.kappa / (g.gamma - 1) * rho**g.gamma


def relative_internal_energy(rho, g: GasParams):
    """e(rho, rho_bar): second-order Taylor remainder of the internal energy about rho_bar."""
    rho = _check_density(rho)
    rb, gm = g.rho_bar, g.gamma
    return g.kappa / (gm - 1) * (rho**gm - rb**gm - gm * rb ** (gm - 1) * (rho - rb))


def viscosities(rho, v: ViscosityParams):
    """Return (mu, lambda) at density ``rho``."""
    rho = _check_density(rho)
    return v.mu(rho), v.lam(rho)


def bd_residual(rho, v: ViscosityParams):
    """|lambda - (rho mu' - mu)|, zero up to round-off for the laws above."""
    rho = _check_density(rho)
    return np.abs(v.lam(rho) - (rho * v.dmu(rho) - v.mu(rho)))


def dissipation_form(dim: int, alpha: float) -> np.ndarray:
    """Symmetric matrix of the delta-rho^alpha dissipation form in (u_r, u/r)."""
    n1 = dim - 1
    off = (alpha - 1) * n1
    return np.array([[alpha, off], [off, n1 * (1 + (alpha - 1) * n1)]])


def dissipation_discriminant(dim: int, alpha: float) -> float:
    return 4 * (dim - 1) ** 2 * (1 - dim * alpha / (dim - 1))


def dissipation_constant(dim: int, alpha: float) -> float:
    """c_N: smallest eigenvalue of :func:`dissipation_form`, positive for admissible alpha."""
    return float(np.linalg.eigvalsh(dissipation_form(dim, alpha))[0])


def energy_lower_constant(g: GasParams, rho_max_factor: float = 10.0, n: int = 20001) -> float:
    """Empirical C with e(rho, rho_bar) >= C rho (rho^theta - rho_bar^theta)^2 on [0, 10 rho_bar]."""
    rho = np.linspace(0.0, rho_max_factor * g.rho_bar, n)
    lower = rho * (rho**g.theta - g.rho_bar**g.theta) ** 2
    mask = lower > 1e-12 * g.rho_bar ** (1 + 2 * g.theta)
    return float(np.min(relative_internal_energy(rho[mask], g) / lower[mask]))
