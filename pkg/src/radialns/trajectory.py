"""Snapshot storage and the on-disk trajectory format.

A trajectory directory holds one CSV per snapshot (columns t, r, rho, m, u,
written with 17 significant digits so values round-trip bit for bit) and ``manifest.json``
listing the snapshots, their time-accumulated integrals and the config hash.
"""
from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import RadialField, RadialGrid

FMT = "%.17g"


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class Snapshot:
    t: float
    rho: np.ndarray
    m: np.ndarray
    accum: dict = field(default_factory=dict)


@dataclass
class Trajectory:
    grid: RadialGrid
    snapshots: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    wall_time: float = 0.0  # not serialized, so written files stay bit-identical

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    def field(self, k: int = -1) -> RadialField:
        s = self.snapshots[k]
        return RadialField(self.grid, s.rho.copy(), s.m.copy(), s.t)

    @property
    def final(self) -> RadialField:
        return self.field(-1)

    def stack(self, name: str) -> np.ndarray:
        """(snapshots, cells) array of rho, m, u or sqrt_rho_u (zero on vacuum)."""
        rows = []
        for s in self.snapshots:
            u = np.zeros_like(s.m)
            pos = s.rho > 0
            u[pos] = s.m[pos] / s.rho[pos]
            rows.append({
                "rho": s.rho,
                "m": s.m,
                "u": u,
                "sqrt_rho_u": np.sqrt(np.maximum(s.rho, 0.0)) * u,
            }[name])
        return np.array(rows)

    def write(self, out: Path) -> Path:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        entries = []
        for k, s in enumerate(self.snapshots):
            name = f"snap_{k:05d}.csv"
            write_snapshot_csv(out / name, s.t, self.grid.r, s.rho, s.m)
            entries.append({"file": name, "t": s.t, "accumulators": s.accum})
        manifest = {
            "grid": {"delta": self.grid.delta, "b": self.grid.b, "cells": self.grid.cells, "dim": self.grid.dim},
            "meta": self.meta,
            "config_hash": self.meta.get("config_hash"),
            "snapshots": entries,
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
        return out

    @classmethod
    def read(cls, path: Path) -> "Trajectory":
        path = Path(path)
        manifest = json.loads((path / "manifest.json").read_text())
        gd = manifest["grid"]
        grid = RadialGrid(gd["delta"], gd["b"], gd["cells"], gd["dim"])
        snaps = []
        for entry in manifest["snapshots"]:
            data = np.loadtxt(path / entry["file"], delimiter=",", skiprows=1, ndmin=2)
            snaps.append(Snapshot(float(data[0, 0]), data[:, 2].copy(), data[:, 3].copy(), dict(entry["accumulators"])))
        return cls(grid, snaps, manifest.get("meta", {}))


def write_snapshot_csv(path: Path, t: float, r, rho, m) -> None:
    u = np.zeros_like(m)
    pos = rho > 0
    u[pos] = m[pos] / rho[pos]
    data = np.column_stack([np.full_like(r, t), r, rho, m, u])
    np.savetxt(path, data, delimiter=",", header="t,r,rho,m,u", comments="", fmt=FMT)


def write_profile_csv(path: Path, r, rho, m) -> None:
    np.savetxt(path, np.column_stack([r, rho, m]), delimiter=",", header="r,rho,m", comments="", fmt=FMT)


class ProfileError(ValueError):
    pass


def read_profile_csv(path: Path):
    """Read an input profile with header r, rho0, m0 and strictly increasing r."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header != ["r", "rho0", "m0"]:
            raise ProfileError(f"{path}: header must be 'r,rho0,m0', got {','.join(header)!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(x) for x in row])
            except ValueError as exc:
                raise ProfileError(f"{path}: row {lineno}: {exc}") from None
            if len(rows[-1]) != 3:
                raise ProfileError(f"{path}: row {lineno}: expected 3 columns")
            if len(rows) > 1 and not rows[-1][0] > rows[-2][0]:
                raise ProfileError(f"{path}: row {lineno}: r is not strictly increasing")
            if rows[-1][1] < 0:
                raise ProfileError(f"{path}: row {lineno}: negative density")
    if len(rows) < 2:
        raise ProfileError(f"{path}: need at least two rows")
    data = np.array(rows)
    return data[:, 0], data[:, 1], data[:, 2]
