"""Command-line interface.

Subcommands: init-data, run, diagnose, ladder, compare.
Exit codes: 0 pass, 1 verdict failure, 2 configuration error, 3 runtime fault.
Every failure also writes a machine-readable ``failure.json`` into --out.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import diagnostics
from .config import ConfigError, RunConfig
from .initdata import InitDataError
from .ladder import LadderSpec, compare_to_inviscid, ladder_config, run_ladder, run_models
from .ns_solver import BudgetExceeded, StepFault
from .runner import evaluate_verdicts, initial_field, simulate
from .trajectory import FMT, ProfileError, Trajectory, write_profile_csv

EXIT_PASS, EXIT_VERDICT, EXIT_CONFIG, EXIT_FAULT = 0, 1, 2, 3

log = logging.getLogger("radialns")


def _dump(path: Path, doc: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True))


def _write_config(out: Path, cfg: RunConfig):
    _dump(out / "config.resolved.json", {"config_hash": cfg.hash, "config": cfg.data})


def cmd_init_data(cfg: RunConfig, out: Path, args) -> int:
    field = initial_field(cfg)
    write_profile_csv(out / "initial_data.csv", field.grid.r, field.rho, field.m)
    funcs = diagnostics.initial_functionals(field, cfg.gas, cfg.viscosity, cfg.diagnostics.vartheta)
    _dump(out / "initial_data.json", {"config_hash": cfg.hash, "pipeline": cfg.uses_pipeline, **funcs})
    _write_config(out, cfg)
    return EXIT_PASS


def _report_and_verdicts(traj: Trajectory, cfg: RunConfig, out: Path, model: str) -> int:
    v = cfg.viscosity if model == "navier_stokes" else None
    rep = diagnostics.report(traj, cfg.gas, v, cfg.diagnostics)
    verdicts = evaluate_verdicts(rep, cfg, model)
    rep.summary["verdicts"] = verdicts
    rep.summary["config_hash"] = cfg.hash
    rep.summary["bounds"] = diagnostics.bound_monitors(traj, cfg.gas, v, cfg.diagnostics)
    rep.write(out)
    passed = all(x["passed"] for x in verdicts.values())
    for name, x in verdicts.items():
        log.info("%s %s value=%s limit=%s", "PASS" if x["passed"] else "FAIL", name, FMT % x["value"], x["limit"])
    return EXIT_PASS if passed else EXIT_VERDICT


def cmd_run(cfg: RunConfig, out: Path, args) -> int:
    traj = simulate(cfg)
    traj.write(out / "trajectory")
    _write_config(out, cfg)
    return _report_and_verdicts(traj, cfg, out, cfg.model)


def cmd_diagnose(cfg: RunConfig, out: Path, args) -> int:
    path = Path(args.trajectory) if args.trajectory else out / "trajectory"
    if not (path / "manifest.json").exists():
        raise ConfigError(f"--trajectory: no manifest.json in {path}")
    traj = Trajectory.read(path)
    model = traj.meta.get("model", cfg.model)
    return _report_and_verdicts(traj, cfg, out, model)


def cmd_ladder(cfg: RunConfig, out: Path, args) -> int:
    if "ladder" not in cfg.data:
        raise ConfigError("ladder: block is required for the ladder subcommand")
    spec = LadderSpec.from_config(cfg)
    table = run_ladder(spec, cfg, jobs=args.jobs, compare_inviscid=args.compare_inviscid)
    table.write(out)
    _write_config(out, cfg)
    for name, ok in table.verdicts.items():
        log.info("%s %s", "PASS" if ok else "FAIL", name)
    return EXIT_PASS if table.passed else EXIT_VERDICT


def cmd_compare(cfg: RunConfig, out: Path, args) -> int:
    lad = cfg.data.get("ladder")
    if lad is not None and lad["parameter"] == "epsilon":
        spec = LadderSpec.from_config(cfg)
    else:
        base = LadderSpec.from_config(cfg) if lad is not None else None
        spec = LadderSpec(
            "epsilon",
            (cfg.viscosity.epsilon,),
            base.window if base else (1.0, 3.0),
            base.t_window if base else None,
        )
    cfgs = [ladder_config(cfg, "epsilon", e) for e in spec.values]
    ns = run_models(cfgs, "navier_stokes", args.jobs)
    ref = run_models([cfg], "euler", 1)[0]
    rows = compare_to_inviscid(ns, ref, spec)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "compare.csv").open("w") as fh:
        fh.write("epsilon,d_rho,d_m,d_sqrt_rho_u\n")
        for r in rows:
            fh.write(",".join(FMT % r[k] for k in ("value", "rho", "m", "sqrt_rho_u")) + "\n")
    verdicts = {}
    if len(rows) > 1:
        for k in ("rho", "m", "sqrt_rho_u"):
            d = np.array([r[k] for r in rows])
            verdicts[f"decreasing_{k}"] = bool(np.all(np.diff(d) < 0))
    _dump(out / "compare.json", {"config_hash": cfg.hash, "rows": rows, "verdicts": verdicts, "window": list(spec.window)})
    _write_config(out, cfg)
    return EXIT_PASS if all(verdicts.values()) else EXIT_VERDICT


COMMANDS = {
    "init-data": cmd_init_data,
    "run": cmd_run,
    "diagnose": cmd_diagnose,
    "ladder": cmd_ladder,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radialns", description="Radial compressible Navier-Stokes experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="concurrent ladder points")
        p.add_argument("--seedless", action="store_true", help="reserved; every computation is deterministic")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "diagnose":
            p.add_argument("--trajectory", help="trajectory directory (default: OUT/trajectory)")
        if name == "ladder":
            p.add_argument("--compare-inviscid", action="store_true", help="also measure distances to the inviscid run")
    return parser


def _fail(out: Path, code: int, exc: BaseException) -> int:
    doc = {"exit_code": code, "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, StepFault):
        doc.update({"cell": exc.cell, "t": exc.t})
    try:
        _dump(out / "failure.json", doc)
    except OSError:
        pass
    print(json.dumps(doc), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    out = Path(args.out)
    if args.jobs < 1:
        return _fail(out, EXIT_CONFIG, ConfigError("--jobs: must be at least 1"))
    try:
        cfg = RunConfig.load(args.config)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out, args)
    except (ConfigError, InitDataError, ProfileError) as exc:
        return _fail(out, EXIT_CONFIG, exc)
    except (StepFault, BudgetExceeded, FloatingPointError) as exc:
        return _fail(out, EXIT_FAULT, exc)


if __name__ == "__main__":
    sys.exit(main())
