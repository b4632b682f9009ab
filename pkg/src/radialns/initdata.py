"""Approximate initial data on the annulus [delta, b].

Pipeline for a profile (rho0, m0):

1. clamp rho0 into [(beta eps)^(1/4), (beta eps)^(-1/2)];
2. replace it by rho_bar beyond the cutoff radius (beta eps)^(-1/(2N));
3. mollify sqrt(rho) in R^N with a bump of width sigma = eps^(1/4) and square;
4. build the velocity from m0/sqrt(rho0), windowed to [4 delta, 1/delta] and
   mollified in R^N (as a radial vector field) with width delta, then divided by
   sqrt(rho_eps);
5. sample both on the cell centres of [delta, b].

Radial convolutions in R^N are reduced to a two-dimensional quadrature over the
offset y = s * (cos phi, sin phi, ...): Gauss-Legendre in s and Gauss-Jacobi in
t = cos phi with weight (1 - t^2)^((N-3)/2), which is the surface measure of the
unit sphere projected onto one axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .eos import GasParams
from .grid import RadialField, RadialGrid
from .trajectory import read_profile_csv


class InitDataError(ValueError):
    """Configuration or input-contract violation in the initial-data pipeline."""


@dataclass(frozen=True)
class Profile:
    """Radial initial profile (rho0, m0) with the radius beyond which it sits near rho_bar."""

    rho: Callable[[np.ndarray], np.ndarray]
    m: Callable[[np.ndarray], np.ndarray]
    far_radius: float
    name: str = "custom"
    params: dict = field(default_factory=dict)


def smooth_bump(x):
    """exp(1 - 1/(1 - x^2)) on |x| < 1, zero outside; peak value 1 at x = 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(1 - 1 / (1 - x[inside] ** 2))
    return out


def _const(value):
    return lambda r: np.full(np.shape(r), float(value))


def preset(name: str, g: GasParams, **params) -> Profile:
    """Closed-form profiles.

    rest         rho = rho_bar, m = 0
    bump         rho = rho_bar (1 + amplitude exp(-((r - center)/width)^2)), m = 0
    pulse        rho = rho_bar, m = amplitude * smooth_bump((r - center)/width)
    acoustic     rho = rho_bar (1 + amplitude * smooth_bump((r - center)/width)), m = 0
    compression  rho = rho_bar, m = -amplitude * rho_bar * smooth_bump((r - center)/width)
    sod          rho = inner for r < radius, outer otherwise, m = 0
    vacuum       rho = 0 for r < radius, rho_bar otherwise, m = 0
    """
    rb = g.rho_bar
    if name == "rest":
        return Profile(_const(rb), _const(0.0), 0.0, name, params)
    if name == "bump":
        p = {"amplitude": 0.5, "center": 2.0, "width": 0.5, **params}
        a, c, w = p["amplitude"], p["center"], p["width"]
        return Profile(
            lambda r: rb * (1 + a * np.exp(-(((np.asarray(r) - c) / w) ** 2))),
            _const(0.0),
            c + 6 * w,
            name,
            p,
        )
    if name in ("pulse", "acoustic", "compression"):
        defaults = {
            "pulse": {"amplitude": 0.1, "center": 3.0, "width": 1.0},
            "acoustic": {"amplitude": 1e-3, "center": 5.0, "width": 1.0},
            "compression": {"amplitude": 0.2, "center": 2.0, "width": 1.0},
        }[name]
        p = {**defaults, **params}
        a, c, w = p["amplitude"], p["center"], p["width"]

        def shape(r):
            return smooth_bump((np.asarray(r, dtype=float) - c) / w)

        if name == "pulse":
            return Profile(_const(rb), lambda r: a * shape(r), c + w, name, p)
        if name == "acoustic":
            return Profile(lambda r: rb * (1 + a * shape(r)), _const(0.0), c + w, name, p)
        return Profile(_const(rb), lambda r: -a * rb * shape(r), c + w, name, p)
    if name == "sod":
        p = {"inner": 1.0, "outer": 0.125, "radius": 1.0, **params}
        return Profile(
            lambda r: np.where(np.asarray(r) < p["radius"], p["inner"], p["outer"]).astype(float),
            _const(0.0),
            p["radius"],
            name,
            p,
        )
    if name == "vacuum":
        p = {"radius": 1.0, **params}
        return Profile(
            lambda r: np.where(np.asarray(r) < p["radius"], 0.0, rb),
            _const(0.0),
            p["radius"],
            name,
            p,
        )
    raise InitDataError(f"unknown preset {name!r}")


PRESETS = ("rest", "bump", "pulse", "acoustic", "compression", "sod", "vacuum")


def profile_from_csv(path: Path) -> Profile:
    """Linear interpolation of a sampled (r, rho0, m0) table; constant beyond its ends."""
    r, rho, m = read_profile_csv(path)
    return Profile(
        lambda x: np.interp(x, r, rho),
        lambda x: np.interp(x, r, m),
        float(r[-1]),
        f"csv:{Path(path).name}",
        {"path": str(path)},
    )


# -- density pipeline -------------------------------------------------------


def clamp_band(eps: float, beta: float) -> tuple[float, float]:
    return (beta * eps) ** 0.25, (beta * eps) ** -0.5


def clamp_density(rho0, eps: float, beta: float = 1e-3) -> np.ndarray:
    lo, hi = clamp_band(eps, beta)
    if lo >= hi:
        raise InitDataError(f"beta*eps = {beta * eps:g} too large: clamp band [{lo:g}, {hi:g}] is empty")
    return np.clip(np.asarray(rho0, dtype=float), lo, hi)


def cutoff_radius(eps: float, beta: float, dim: int) -> float:
    return (beta * eps) ** (-1.0 / (2 * dim))


def farfield_cutoff(r, rho, eps: float, beta: float, rho_bar: float, dim: int, far_radius: float | None = None):
    """Replace rho by rho_bar for r beyond (beta eps)^(-1/(2N))."""
    rc = cutoff_radius(eps, beta, dim)
    if far_radius is not None and rc < far_radius + 2:
        raise InitDataError(
            f"cutoff radius (beta*eps)^(-1/(2N)) = {rc:g} is below far_radius + 2 = {far_radius + 2:g}; decrease beta"
        )
    return np.where(np.asarray(r) > rc, rho_bar, np.asarray(rho, dtype=float))


@lru_cache(maxsize=32)
def _offset_rule(dim: int, order: int):
    """Nodes (s, t) on the unit ball and unit-mass weights of the bump mollifier."""
    xs, ws = roots_legendre(order)
    s = 0.5 * (xs + 1)
    ws = 0.5 * ws
    a = (dim - 3) / 2
    t, wt = roots_jacobi(order, a, a)
    radial = np.exp(-1 / (1 - s**2)) * s ** (dim - 1) * ws
    w = np.outer(radial, wt)
    return s, t, w / w.sum()


def _convolve(f: Callable, r, width: float, dim: int, order: int, vector: bool) -> np.ndarray:
    r = np.atleast_1d(np.asarray(r, dtype=float))
    s, t, w = _offset_rule(dim, order)
    out = np.empty_like(r)
    S = width * s[:, None]
    for k, rk in enumerate(r):
        z = np.sqrt(np.maximum(rk * rk + S * S - 2 * rk * S * t[None, :], 0.0))
        vals = f(z)
        if vector:
            proj = np.divide(rk - S * t[None, :], z, out=np.zeros_like(z), where=z > 0)
            vals = vals * proj
        out[k] = np.sum(w * vals)
    return out


def mollify(f: Callable, r, width: float, dim: int, order: int = 48) -> np.ndarray:
    """(J_width * f)(x) at |x| = r for a radial scalar function f(|x|) on R^N."""
    return _convolve(f, r, width, dim, order, vector=False)


def mollify_radial_vector(w: Callable, r, width: float, dim: int, order: int = 48) -> np.ndarray:
    """Radial component of J_width * (w(|x|) x/|x|) at |x| = r."""
    return _convolve(w, r, width, dim, order, vector=True)


def mollify_sqrt_density(rho_hat: Callable, r, sigma: float, dim: int, order: int = 48) -> np.ndarray:
    """(J_sigma * sqrt(rho_hat))^2 evaluated at radii r."""
    return mollify(lambda z: np.sqrt(rho_hat(z)), r, sigma, dim, order) ** 2


# -- velocity ---------------------------------------------------------------


def _momentum_over_sqrt(m0, rho0):
    m0 = np.asarray(m0, dtype=float)
    rho0 = np.asarray(rho0, dtype=float)
    vac = rho0 <= 0
    if np.any(m0[vac] != 0):
        i = int(np.flatnonzero(vac & (m0 != 0))[0])
        raise InitDataError(f"nonzero momentum {m0[i]:g} where rho0 = 0 (sample {i})")
    return np.divide(m0, np.sqrt(np.maximum(rho0, 0.0)), out=np.zeros_like(m0), where=~vac)


def approx_velocity(m0, rho0, rho_eps) -> np.ndarray:
    """u = (m0/sqrt(rho0))/sqrt(rho_eps), so rho_eps u^2 = m0^2/rho0 pointwise."""
    return _momentum_over_sqrt(m0, rho0) / np.sqrt(np.asarray(rho_eps, dtype=float))


def windowed_velocity(profile: Profile, r, rho_eps, delta: float, dim: int, order: int = 48) -> np.ndarray:
    """Mollified (width delta) m0/sqrt(rho0) restricted to [4 delta, 1/delta], over sqrt(rho_eps).

    Vanishes identically for r < 2 delta and r > 1 + 1/delta.
    """
    lo, hi = 4 * delta, 1 / delta

    def w(z):
        inside = (z >= lo) & (z <= hi)
        out = np.zeros_like(z)
        out[inside] = _momentum_over_sqrt(profile.m(z[inside]), profile.rho(z[inside]))
        return out

    return mollify_radial_vector(w, r, delta, dim, order) / np.sqrt(np.asarray(rho_eps, dtype=float))


def restrict_annulus(grid: RadialGrid, rho, u) -> RadialField:
    """Initial field on [delta, b] with m = rho u; requires b >= 1 + 1/delta."""
    if grid.b < 1 + 1 / grid.delta:
        raise InitDataError(f"b = {grid.b:g} must be at least 1 + 1/delta = {1 + 1 / grid.delta:g}")
    rho = rho(grid.r) if callable(rho) else np.asarray(rho, dtype=float)
    u = u(grid.r) if callable(u) else np.asarray(u, dtype=float)
    return RadialField(grid, rho.copy(), rho * u)


# -- assembly ---------------------------------------------------------------


@dataclass(frozen=True)
class InitialDataSpec:
    profile: Profile
    eps: float
    beta: float = 1e-3
    order: int = 48

    @property
    def sigma(self) -> float:
        return self.eps**0.25

    def window(self, delta: float) -> tuple[float, float]:
        return 4 * delta, 1 / delta

    def validate(self, dim: int):
        lo, hi = clamp_band(self.eps, self.beta)
        if not lo < hi:
            raise InitDataError(f"beta*eps = {self.beta * self.eps:g}: need (beta eps)^(1/4) < (beta eps)^(-1/2)")
        rc = cutoff_radius(self.eps, self.beta, dim)
        if rc < self.profile.far_radius + 2:
            raise InitDataError(
                f"beta = {self.beta:g}: cutoff radius {rc:g} is below far_radius + 2 = {self.profile.far_radius + 2:g}"
            )


def smoothed_density(spec: InitialDataSpec, g: GasParams) -> Callable:
    """rho_eps as a callable of r (steps 1-3)."""
    spec.validate(g.dim)

    def rho_hat(z):
        return farfield_cutoff(z, clamp_density(spec.profile.rho(z), spec.eps, spec.beta), spec.eps, spec.beta, g.rho_bar, g.dim)

    return lambda r: mollify_sqrt_density(rho_hat, r, spec.sigma, g.dim, spec.order)


def build_initial_data(spec: InitialDataSpec, grid: RadialGrid, g: GasParams) -> RadialField:
    """Full pipeline sampled on the cell centres of ``grid``."""
    if grid.dim != g.dim:
        raise InitDataError("grid and gas dimensions differ")
    rho_eps = smoothed_density(spec, g)(grid.r)
    u = windowed_velocity(spec.profile, grid.r, rho_eps, grid.delta, g.dim, spec.order)
    return restrict_annulus(grid, rho_eps, u)


def sample_profile(profile: Profile, grid: RadialGrid) -> RadialField:
    """Sample the raw profile on the cell centres without smoothing or windowing."""
    return RadialField(grid, profile.rho(grid.r).astype(float), profile.m(grid.r).astype(float))
