import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialns.diagnostics import (
    DiagnosticsConfig,
    RateMonitor,
    bd_functional,
    bd_functional_expanded,
    bound_monitors,
    initial_functionals,
    relative_energy,
    report,
    tail_slope,
)
from radialns.eos import GasParams, ViscosityParams
from radialns.grid import RadialField, RadialGrid
from radialns.initdata import preset, sample_profile
from radialns.ns_solver import SolverConfig, run
from radialns.trajectory import Trajectory

G2 = GasParams(gamma=2.0)
V = ViscosityParams(epsilon=0.05, delta=0.1)


def _rest_traj(t_end=1.0):
    grid = RadialGrid(0.1, 10.1, 500, 2)
    field = RadialField.from_profiles(grid, 1.0, 0.0)
    return run(field, SolverConfig(t_end=t_end, snapshot_interval=0.5), V, G2, RateMonitor(G2, V))


def _bump_traj(t_end=0.5):
    grid = RadialGrid(0.1, 10.0, 400, 2)
    field = RadialField.from_profiles(grid, preset("bump", G2).rho, lambda r: 0.2 * np.exp(-((r - 2) ** 2)))
    return run(field, SolverConfig(t_end=t_end, snapshot_interval=0.1), V, G2, RateMonitor(G2, V))


def test_rest_state_residuals_vanish():
    rep = report(_rest_traj(), G2, V)
    assert np.max(rep["energy_residual"]) <= 1e-14
    assert np.max(rep["bd_residual"]) <= 1e-14
    assert np.all(rep["E_rel"] == 0)


def test_rest_state_local_integrability_closed_form():
    # int_0^T int_d^D rho_bar^(gamma+1) dr dt = T (D - d) rho_bar^(gamma+1)
    rep = report(_rest_traj(t_end=1.0), G2, V)
    assert rep["HI_local"][-1] == pytest.approx(1.0 * (2.0 - 1.0), rel=1e-12)


def test_rest_state_decay_weights_vanish():
    rep = report(_rest_traj(), G2, V)
    assert np.all(rep["DecayW_rho"] == 0)
    assert all(np.all(rep[f"DecayW_u@{r:g}"] == 0) for r in (1.0, 2.0, 4.0))


@given(amp=st.floats(0.05, 0.9), width=st.floats(0.3, 1.5))
@settings(max_examples=25, deadline=None)
def test_bd_functional_two_evaluations_agree(amp, width):
    grid = RadialGrid(0.1, 10.0, 300, 2)
    field = RadialField.from_profiles(grid, lambda r: 1 + amp * np.exp(-(((r - 3) / width) ** 2)), 0.0)
    assert bd_functional(field, G2, V) == pytest.approx(bd_functional_expanded(field, G2, V), rel=1e-10, abs=1e-14)


def test_energy_residual_small_and_energy_decreasing():
    rep = report(_bump_traj(), G2, V)
    assert np.all(np.diff(rep["E_rel"]) <= 1e-10)
    assert rep["energy_residual"][-1] < 5e-2 * rep["E_rel"][0]
    assert rep.summary["mass_drift_rel"] <= 1e-12
    assert rep.summary["E_rel_nonnegative"]


def test_accumulators_are_monotone():
    rep = report(_bump_traj(), G2, V)
    for name in ("D_visc", "HI_local", "HI_origin", "GradRho_dissip", "W_dissip"):
        assert np.all(np.diff(rep[name]) >= 0), name


def test_report_from_files_matches_in_run_report(tmp_path):
    traj = _bump_traj(0.2)
    traj.write(tmp_path / "traj")
    a = report(traj, G2, V)
    b = report(Trajectory.read(tmp_path / "traj"), G2, V)
    assert sorted(a.columns) == sorted(b.columns)
    for name in a.columns:
        assert np.array_equal(a[name], b[name], equal_nan=True), name
    a.write(tmp_path / "a")
    b.write(tmp_path / "b")
    assert (tmp_path / "a" / "diagnostics.csv").read_bytes() == (tmp_path / "b" / "diagnostics.csv").read_bytes()


def test_bound_monitor_rows():
    rows = bound_monitors(_bump_traj(0.2), G2, V)
    names = {r["name"] for r in rows}
    assert {"HI_local", "HI_origin", "DecayW_rho", "W_energy", "GradRho"} <= names
    assert all(np.isfinite(r["value"]) for r in rows)


def test_tail_slope_recovers_power_law():
    r = np.linspace(1, 50, 400)
    assert tail_slope(r, 3 * r**-0.875) == pytest.approx(-0.875)


def test_initial_functionals_rest_state():
    grid = RadialGrid(0.1, 11.0, 200, 2)
    funcs = initial_functionals(RadialField.from_profiles(grid, 1.0, 0.0), G2, V)
    assert funcs == {"E0": 0.0, "E1": 0.0, "E2": 0.0, "E0_weighted": 0.0}


def test_initial_energy_carries_sphere_area():
    grid = RadialGrid(0.1, 11.0, 200, 3)
    g3 = GasParams(gamma=2.0, dim=3)
    field = sample_profile(preset("bump", g3), grid)
    funcs = initial_functionals(field, g3, ViscosityParams(0.05, 0.1, 3))
    assert funcs["E0"] == pytest.approx(4 * np.pi * relative_energy(field, g3))


@pytest.mark.parametrize("kw", [dict(hi_window=(2.0, 1.0)), dict(vartheta=1.0), dict(vartheta=0.0)])
def test_diagnostics_config_rejects(kw):
    with pytest.raises(ValueError):
        DiagnosticsConfig(**kw)
