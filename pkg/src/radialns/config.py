"""JSON run configuration: defaults, schema validation and typed views."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from .diagnostics import DiagnosticsConfig
from .eos import GasParams, ViscosityParams
from .grid import RadialGrid
from .initdata import InitialDataSpec, Profile, preset, profile_from_csv
from .ns_solver import SolverConfig
from .trajectory import config_hash

DEFAULTS = {
    "model": "navier_stokes",
    "gas": {"gamma": 2.0, "dim": 2, "rho_bar": 1.0, "kappa": None},
    "viscosity": {"epsilon": 0.05, "delta": None, "alpha": None},
    "grid": {"delta": 0.1, "b": 11.0},
    "solver": {
        "cfl": 0.4,
        "t_end": 0.5,
        "snapshot_interval": None,
        "implicit_viscosity": True,
        "splitting": "lie",
        "dt": None,
        "rho_floor": 1e-12,
        "max_steps": 10_000_000,
        "wall_time_budget": None,
        "vac_tol": 0.0,
    },
    "initdata": {"params": {}, "pipeline": True, "beta": 1e-3, "order": 48},
    "diagnostics": {"hi_window": [1.0, 2.0], "origin_radius": 2.0, "vartheta": 0.5, "probes": [1.0, 2.0, 4.0], "decay_r_min": 1.0},
    "verdicts": {"mass_drift_max": 1e-12, "energy_residual_max": None, "bd_residual_max": None},
}


class ConfigError(ValueError):
    pass


def schema() -> dict:
    return json.loads(resources.files("radialns").joinpath("config_schema.json").read_text())


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "params":
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration; ``data`` is the fully merged JSON document."""

    data: dict
    base_dir: str = "."

    @classmethod
    def from_dict(cls, raw: dict, base_dir: str | Path = ".") -> "RunConfig":
        try:
            jsonschema.validate(raw, schema())
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"{where}: {exc.message}") from None
        cfg = cls(_merge(DEFAULTS, raw), str(base_dir))
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
        return cls.from_dict(raw, path.parent)

    def replace(self, **sections) -> "RunConfig":
        return RunConfig(_merge(self.data, sections), self.base_dir)

    @property
    def hash(self) -> str:
        return config_hash(self.data)

    @property
    def model(self) -> str:
        return self.data["model"]

    @property
    def gas(self) -> GasParams:
        return GasParams(**self.data["gas"])

    @property
    def viscosity(self) -> ViscosityParams:
        v = self.data["viscosity"]
        delta = v["delta"] if v["delta"] is not None else self.data["grid"]["delta"]
        return ViscosityParams(v["epsilon"], delta, self.data["gas"]["dim"], v["alpha"])

    @property
    def grid(self) -> RadialGrid:
        gd = self.data["grid"]
        dim = self.data["gas"]["dim"]
        if "dr" in gd:
            return RadialGrid.with_spacing(gd["delta"], gd["b"], gd["dr"], dim)
        return RadialGrid(gd["delta"], gd["b"], gd.get("cells", 800), dim)

    @property
    def solver(self) -> SolverConfig:
        s = {k: v for k, v in self.data["solver"].items() if k != "vac_tol"}
        return SolverConfig(**s)

    @property
    def vac_tol(self) -> float:
        return self.data["solver"]["vac_tol"]

    @property
    def diagnostics(self) -> DiagnosticsConfig:
        d = self.data["diagnostics"]
        return DiagnosticsConfig(tuple(d["hi_window"]), d["origin_radius"], d["vartheta"], tuple(d["probes"]), d["decay_r_min"])

    @property
    def profile(self) -> Profile:
        ini = self.data["initdata"]
        if "csv" in ini:
            path = Path(ini["csv"])
            if not path.is_absolute():
                path = Path(self.base_dir) / path
            return profile_from_csv(path)
        return preset(ini["preset"], self.gas, **ini["params"])

    @property
    def initdata_spec(self) -> InitialDataSpec:
        ini = self.data["initdata"]
        return InitialDataSpec(self.profile, self.viscosity.epsilon, ini["beta"], ini["order"])

    @property
    def uses_pipeline(self) -> bool:
        return self.data["initdata"]["pipeline"] and self.model == "navier_stokes"

    def validate(self):
        """Cross-field checks that the schema cannot express, with field-precise messages."""
        try:
            g = self.gas
            grid = self.grid
            v = self.viscosity
            self.solver
            self.diagnostics
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if "initdata" not in self.data or not ({"preset", "csv"} & set(self.data["initdata"])):
            raise ConfigError("initdata: one of 'preset' or 'csv' is required")
        key = "initdata/csv" if "csv" in self.data["initdata"] else "initdata/preset"
        try:
            self.profile
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
        if self.model == "navier_stokes" and v.epsilon > 0 and v.delta <= 0:
            raise ConfigError("viscosity/delta: must be positive")
        if self.uses_pipeline:
            if grid.b < 1 + 1 / grid.delta:
                raise ConfigError(f"grid/b: {grid.b:g} must be at least 1 + 1/delta = {1 + 1 / grid.delta:g} when initdata/pipeline is on")
            if v.epsilon <= 0:
                raise ConfigError("viscosity/epsilon: the initial-data pipeline needs epsilon > 0")
            try:
                self.initdata_spec.validate(g.dim)
            except ValueError as exc:
                raise ConfigError(f"initdata/beta: {exc}") from None
        lad = self.data.get("ladder")
        if lad is not None:
            from .ladder import LadderSpec

            try:
                LadderSpec.from_config(self).validate(self)
            except ValueError as exc:
                raise ConfigError(f"ladder: {exc}") from None
