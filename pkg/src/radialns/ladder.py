"""Parameter ladders in b, delta or epsilon and weighted space-time L^p distances.

A ladder runs the same configuration at three or more values of one parameter
and reports successive distances d_k = dist(run_k, run_{k+1}) for rho, m and
sqrt(rho) u on a compact window.  The verdict is a Cauchy trend:
d_{k+1} < d_k for every k.
"""
from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .trajectory import FMT, Trajectory

QUANTITIES = ("rho", "m", "sqrt_rho_u")


@dataclass(frozen=True)
class SpaceTimeField:
    """Values on (snapshot times) x (cell centres) of a uniform radial grid."""

    t: np.ndarray
    r: np.ndarray
    values: np.ndarray
    dim: int = 2

    @classmethod
    def from_trajectory(cls, traj: Trajectory, name: str) -> "SpaceTimeField":
        return cls(traj.times, traj.grid.r, traj.stack(name), traj.grid.dim)

    @property
    def extent(self) -> tuple[float, float]:
        h = 0.5 * (self.r[1] - self.r[0])
        return self.r[0] - h, self.r[-1] + h

    def scaled(self, c: float) -> "SpaceTimeField":
        return SpaceTimeField(self.t, self.r, c * self.values, self.dim)


def _common_nodes(f: SpaceTimeField, g: SpaceTimeField, window):
    lo, hi = window
    if not hi > lo:
        raise ValueError(f"empty window {window}")
    for x in (f, g):
        a, b = x.extent
        if lo < a - 1e-12 or hi > b + 1e-12:
            raise ValueError(f"window [{lo:g}, {hi:g}] is not inside the field extent [{a:g}, {b:g}]")
    h = min(f.r[1] - f.r[0], g.r[1] - g.r[0])
    n = int(np.ceil((hi - lo) / h - 1e-9))
    dr = (hi - lo) / n
    return lo + (np.arange(n) + 0.5) * dr, dr


def _time_weights(t: np.ndarray, t_window) -> np.ndarray:
    """Trapezoid weights over the snapshots inside [t0, t1]."""
    t0, t1 = t_window if t_window is not None else (t[0], t[-1])
    keep = (t >= t0 - 1e-12) & (t <= t1 + 1e-12)
    w = np.zeros_like(t)
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        raise ValueError(f"no snapshots in time window [{t0:g}, {t1:g}]")
    if idx.size == 1:
        w[idx] = 1.0
        return w
    dt = np.diff(t[idx])
    w[idx[:-1]] += 0.5 * dt
    w[idx[1:]] += 0.5 * dt
    return w


def lp_distance(f: SpaceTimeField, g: SpaceTimeField, p: float, window, t_window=None) -> float:
    """(int int |f - g|^p r^(N-1) dr dt)^(1/p) over window x t_window.

    Both fields are interpolated linearly onto a uniform midpoint grid on the
    window (spacing no coarser than either input); time uses the trapezoid rule
    over shared snapshot times.  With a single snapshot the time integral is
    dropped.
    """
    if f.dim != g.dim:
        raise ValueError("fields live in different dimensions")
    if f.t.shape != g.t.shape or not np.allclose(f.t, g.t, rtol=0, atol=1e-12):
        raise ValueError("fields have different snapshot times")
    nodes, dr = _common_nodes(f, g, window)
    wt = _time_weights(f.t, t_window)
    rw = nodes ** (f.dim - 1) * dr
    total = 0.0
    for k in np.flatnonzero(wt):
        diff = np.interp(nodes, f.r, f.values[k]) - np.interp(nodes, g.r, g.values[k])
        total += wt[k] * float(np.sum(np.abs(diff) ** p * rw))
    return float(total ** (1 / p))


def trajectory_distances(a: Trajectory, b: Trajectory, window, t_window=None, p: float = 1.0, q: float = 1.0) -> dict:
    """Distances for rho and sqrt(rho) u (exponent p) and for m (exponent q)."""
    exps = {"rho": p, "m": q, "sqrt_rho_u": p}
    return {
        name: lp_distance(SpaceTimeField.from_trajectory(a, name), SpaceTimeField.from_trajectory(b, name), exps[name], window, t_window)
        for name in QUANTITIES
    }


@dataclass(frozen=True)
class LadderSpec:
    parameter: str
    values: tuple
    window: tuple = (1.0, 3.0)
    t_window: tuple | None = None
    p: float = 1.0
    q: float = 1.0

    @classmethod
    def from_config(cls, cfg) -> "LadderSpec":
        lad = cfg.data["ladder"]
        tw = lad.get("t_window")
        return cls(
            lad["parameter"],
            tuple(lad["values"]),
            tuple(lad.get("window", (1.0, 3.0))),
            tuple(tw) if tw is not None else None,
            lad.get("p", 1.0),
            lad.get("q", 1.0),
        )

    def validate(self, base=None):
        if self.parameter not in ("b", "delta", "epsilon"):
            raise ValueError(f"parameter must be one of b, delta, epsilon, got {self.parameter!r}")
        vals = np.asarray(self.values, dtype=float)
        if vals.size < 3:
            raise ValueError(f"a ladder needs at least 3 values, got {vals.size}")
        steps = np.diff(vals)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError(f"values must be strictly monotone, got {list(self.values)}")
        d, D = self.window
        if not d < D:
            raise ValueError(f"window must satisfy d < D, got {self.window}")
        if base is not None:
            gamma = base.gas.gamma
            if not 1 <= self.p < gamma + 1:
                raise ValueError(f"p must lie in [1, gamma + 1) = [1, {gamma + 1:g}), got {self.p}")
            qmax = 3 * (gamma + 1) / (gamma + 3)
            if not 1 <= self.q < qmax:
                raise ValueError(f"q must lie in [1, {qmax:g}), got {self.q}")
            deltas = vals if self.parameter == "delta" else [base.grid.delta]
            bs = vals if self.parameter == "b" else [base.grid.b]
            if not (max(deltas) < d and D < min(bs)):
                raise ValueError(f"window {self.window} must lie inside (delta_max, b_min) = ({max(deltas):g}, {min(bs):g})")


def ladder_config(base, parameter: str, value: float):
    """Copy of ``base`` with one ladder parameter changed (delta moves both the wall and the viscosity)."""
    if parameter == "b":
        return base.replace(grid={"b": value})
    if parameter == "delta":
        return base.replace(grid={"delta": value}, viscosity={"delta": value})
    return base.replace(viscosity={"epsilon": value})


def _simulate(args):
    from .runner import simulate

    cfg, model = args
    return simulate(cfg, model)


def run_models(cfgs, model: str | None, jobs: int):
    items = [(c, model) for c in cfgs]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_simulate, items))
    return [_simulate(it) for it in items]


@dataclass
class LadderTable:
    spec: LadderSpec
    rows: list = field(default_factory=list)
    reference: list = field(default_factory=list)
    config_hash: str | None = None

    def distances(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows if name in r])

    def reference_distances(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.reference])

    @property
    def verdicts(self) -> dict:
        out = {f"cauchy_{n}": _strictly_decreasing(self.distances(n)) for n in QUANTITIES}
        if self.reference:
            out.update({f"inviscid_{n}": _strictly_decreasing(self.reference_distances(n)) for n in QUANTITIES})
        return out

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def write(self, out: Path, stem: str = "ladder") -> tuple[Path, Path]:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"{stem}.csv"
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["value", "next_value", "d_rho", "d_m", "d_sqrt_rho_u", "wall_time"])
            for r in self.rows:
                w.writerow(
                    [FMT % r["value"], "" if r.get("next_value") is None else FMT % r["next_value"]]
                    + ["" if n not in r else FMT % r[n] for n in QUANTITIES]
                    + [FMT % r["wall_time"]]
                )
        if self.reference:
            with (out / f"{stem}_inviscid.csv").open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["value", "d_rho", "d_m", "d_sqrt_rho_u"])
                for r in self.reference:
                    w.writerow([FMT % r["value"]] + [FMT % r[n] for n in QUANTITIES])
        json_path = out / f"{stem}.json"
        doc = {
            "spec": asdict(self.spec),
            "config_hash": self.config_hash,
            "verdicts": self.verdicts,
            "passed": self.passed,
            "successive": [{k: v for k, v in r.items() if k != "wall_time"} for r in self.rows],
            "inviscid": self.reference,
        }
        json_path.write_text(json.dumps(doc, indent=1, sort_keys=True))
        return csv_path, json_path


def _strictly_decreasing(d: np.ndarray) -> bool:
    return bool(d.size >= 1 and np.all(np.isfinite(d)) and np.all(np.diff(d) < 0))


def run_ladder(spec: LadderSpec, base, jobs: int = 1, compare_inviscid: bool = False) -> LadderTable:
    """Run every ladder point, then tabulate successive distances (and distances to the inviscid run)."""
    spec.validate(base)
    cfgs = [ladder_config(base, spec.parameter, v) for v in spec.values]
    trajs = run_models(cfgs, "navier_stokes", jobs)
    table = LadderTable(spec, config_hash=base.hash)
    for k, (val, traj) in enumerate(zip(spec.values, trajs)):
        row = {"value": float(val), "next_value": None, "wall_time": traj.wall_time}
        if k + 1 < len(trajs):
            row["next_value"] = float(spec.values[k + 1])
            row.update(trajectory_distances(traj, trajs[k + 1], spec.window, spec.t_window, spec.p, spec.q))
        table.rows.append(row)
    if compare_inviscid:
        if spec.parameter != "epsilon":
            raise ValueError("the inviscid comparison needs an epsilon ladder")
        ref = run_models([base], "euler", 1)[0]
        table.reference = compare_to_inviscid(trajs, ref, spec)
    return table


def compare_to_inviscid(ns_trajs, euler_traj: Trajectory, spec: LadderSpec) -> list:
    """Distance of each viscous trajectory to the inviscid reference over the spec's window."""
    rows = []
    for val, traj in zip(spec.values, ns_trajs):
        if traj.grid.dim != euler_traj.grid.dim:
            raise ValueError("viscous and inviscid runs use different dimensions")
        rows.append({"value": float(val), **trajectory_distances(traj, euler_traj, spec.window, spec.t_window, spec.p, spec.q)})
    return rows
