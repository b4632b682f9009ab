"""Cell-centred radial grid on [delta, b] and the (rho, m) field living on it."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class RadialGrid:
    delta: float
    b: float
    cells: int
    dim: int = 2
    r: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.delta < self.b:
            raise ValueError(f"need 0 < delta < b, got delta={self.delta}, b={self.b}")
        if self.cells < 3:
            raise ValueError("need at least 3 cells")
        object.__setattr__(self, "r", self.delta + (np.arange(self.cells) + 0.5) * self.dr)

    @classmethod
    def with_spacing(cls, delta: float, b: float, dr: float, dim: int = 2) -> "RadialGrid":
        """Grid whose spacing is ``dr`` (b is adjusted to the nearest whole cell)."""
        cells = int(round((b - delta) / dr))
        return cls(delta, delta + cells * dr, cells, dim)

    @property
    def dr(self) -> float:
        return (self.b - self.delta) / self.cells

    @property
    def faces(self) -> np.ndarray:
        return self.delta + np.arange(self.cells + 1) * self.dr

    @property
    def weights(self) -> np.ndarray:
        """Midpoint-rule weights r_i^(N-1) dr used by every integral."""
        return self.r ** (self.dim - 1) * self.dr

    def window_weights(self, lo: float, hi: float, radial: bool = True) -> np.ndarray:
        """Midpoint weights restricted to [lo, hi], with partial cells counted by overlap."""
        left = self.r - 0.5 * self.dr
        overlap = np.clip(np.minimum(left + self.dr, hi) - np.maximum(left, lo), 0.0, None)
        return overlap * (self.r ** (self.dim - 1) if radial else 1.0)

    def integrate(self, f) -> float:
        return float(np.sum(np.asarray(f) * self.weights))

    def gradient(self, f) -> np.ndarray:
        """Centred differences in the interior, one-sided at the two end cells."""
        f = np.asarray(f, dtype=float)
        out = np.empty_like(f)
        out[1:-1] = (f[2:] - f[:-2]) / (2 * self.dr)
        out[0] = (f[1] - f[0]) / self.dr
        out[-1] = (f[-1] - f[-2]) / self.dr
        return out


@dataclass
class RadialField:
    grid: RadialGrid
    rho: np.ndarray
    m: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        self.m = np.asarray(self.m, dtype=float)
        n = self.grid.cells
        if self.rho.shape != (n,) or self.m.shape != (n,):
            raise ValueError(f"rho and m must have shape ({n},)")

    @classmethod
    def from_profiles(cls, grid: RadialGrid, rho, m=None, t: float = 0.0) -> "RadialField":
        """Sample callables (or constants) at the cell centres."""
        def sample(f):
            return np.broadcast_to(f(grid.r) if callable(f) else f, grid.r.shape).astype(float)

        return cls(grid, sample(rho), sample(0.0 if m is None else m), t)

    @property
    def u(self) -> np.ndarray:
        """Velocity, defined as 0 on vacuum cells."""
        u = np.zeros_like(self.m)
        pos = self.rho > 0
        u[pos] = self.m[pos] / self.rho[pos]
        return u

    def copy(self) -> "RadialField":
        return replace(self, rho=self.rho.copy(), m=self.m.copy())

    def mass(self) -> float:
        return self.grid.integrate(self.rho)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.rho)) and np.all(np.isfinite(self.m)))
