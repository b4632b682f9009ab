import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialns import viscous
from radialns.eos import GasParams, ViscosityParams, dissipation_constant
from radialns.fv import convective_update, rusanov_fluxes
from radialns.grid import RadialField, RadialGrid

G2 = GasParams(gamma=2.0)
V = ViscosityParams(epsilon=0.05, delta=0.1)


def _smooth_state(grid, seed=0):
    rng = np.random.default_rng(seed)
    r = grid.r
    rho = 1 + 0.3 * np.sin(r) ** 2 + 0.05 * rng.random(r.size)
    u = 0.2 * np.sin(np.pi * (r - grid.delta) / (grid.b - grid.delta)) + 0.02 * rng.standard_normal(r.size)
    return rho, u


def test_grid_layout():
    grid = RadialGrid(0.1, 10.1, 1000, 2)
    assert grid.dr == pytest.approx(0.01)
    assert grid.r[0] == pytest.approx(0.105)
    assert grid.r[-1] == pytest.approx(10.095)
    assert np.all(np.diff(grid.r) > 0)
    assert grid.faces.size == 1001


@pytest.mark.parametrize("kw", [dict(delta=0.0, b=1.0, cells=10), dict(delta=2.0, b=1.0, cells=10), dict(delta=0.1, b=1.0, cells=2)])
def test_grid_rejects(kw):
    with pytest.raises(ValueError):
        RadialGrid(**kw)


def test_window_weights_count_partial_cells():
    grid = RadialGrid(0.0 + 1e-9, 4.0, 8, 2)
    w = grid.window_weights(1.2, 2.3, radial=False)
    assert w.sum() == pytest.approx(1.1)


def test_integrate_is_midpoint_rule():
    grid = RadialGrid(1.0, 2.0, 10, 3)
    assert grid.integrate(np.ones(10)) == pytest.approx(np.sum(grid.r**2) * 0.1)


def test_wall_mass_flux_vanishes():
    grid = RadialGrid(0.1, 5.0, 50, 2)
    rho, u = _smooth_state(grid)
    f_rho, _ = rusanov_fluxes(rho, rho * u, G2)
    assert f_rho[0] == 0.0 and f_rho[-1] == 0.0


@pytest.mark.parametrize("dim", [2, 3])
def test_convective_update_conserves_mass(dim):
    grid = RadialGrid(0.1, 5.0, 200, dim)
    rho, u = _smooth_state(grid)
    field = RadialField(grid, rho, rho * u)
    rho_new, _ = convective_update(field, 0.002, GasParams(1.4, dim))
    assert grid.integrate(rho_new) == pytest.approx(grid.integrate(rho), rel=1e-14)


def test_rest_state_is_steady_for_convection():
    grid = RadialGrid(0.1, 5.0, 100, 2)
    field = RadialField.from_profiles(grid, 1.0, 0.0)
    rho, m = convective_update(field, 0.01, G2)
    assert np.max(np.abs(rho - 1)) == 0.0
    assert np.max(np.abs(m)) < 1e-15


@pytest.mark.parametrize("dim", [2, 3])
def test_stiffness_matrix_is_spd(dim):
    grid = RadialGrid(0.1, 3.0, 60, dim)
    rho, _ = _smooth_state(grid)
    K = viscous.stiffness_matrix(grid, rho, ViscosityParams(0.05, 0.1, dim))
    assert np.allclose(K, K.T)
    assert np.linalg.eigvalsh(K).min() > 0


@given(seed=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_quadratic_form_equals_discrete_dissipation(seed):
    grid = RadialGrid(0.1, 3.0, 40, 2)
    rho, u = _smooth_state(grid, seed)
    K = viscous.stiffness_matrix(grid, rho, V)
    assert u @ K @ u == pytest.approx(viscous.dissipation_rate(grid, rho, u, V), rel=1e-12)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_dissipation_dominates_coercive_form(dim):
    # per face: mu(g^2 + (N-1)a^2) + lam(g + (N-1)a)^2 >= (rho + c_N delta rho^alpha)(g^2 + a^2)
    v = ViscosityParams(0.05, 0.1, dim)
    grid = RadialGrid(0.1, 3.0, 80, dim)
    rho, u = _smooth_state(grid, 3)
    dens = viscous.dissipation_density(grid, rho, u, v)
    rf = viscous.face_density(grid, rho)
    ur, uf, length = viscous.face_kinematics(grid, u)
    cN = dissipation_constant(dim, v.alpha)
    lower = v.epsilon * (rf + cN * v.delta * rf**v.alpha) * (ur**2 + (uf / grid.faces) ** 2) * grid.faces ** (dim - 1) * length
    assert np.all(dens >= lower * (1 - 1e-12))


def test_implicit_update_matches_dense_solve():
    grid = RadialGrid(0.1, 3.0, 50, 2)
    rho, u = _smooth_state(grid, 7)
    dt = 0.05
    K = viscous.stiffness_matrix(grid, rho, V)
    W = np.diag(rho * grid.weights)
    dense = np.linalg.solve(W + dt * K, W @ u)
    assert np.allclose(viscous.implicit_update(grid, rho, u, dt, V), dense, rtol=1e-12, atol=1e-14)


def test_implicit_update_dissipates_kinetic_energy():
    grid = RadialGrid(0.1, 3.0, 50, 2)
    rho, u = _smooth_state(grid, 11)
    u1 = viscous.implicit_update(grid, rho, u, 0.1, V)
    ke = lambda w: grid.integrate(0.5 * rho * w**2)
    assert ke(u1) < ke(u)


def test_explicit_update_stable_below_limit():
    grid = RadialGrid(0.1, 3.0, 100, 2)
    rho, u = _smooth_state(grid, 5)
    dt = 0.9 * viscous.explicit_dt_limit(grid, rho, V)
    w = u.copy()
    for _ in range(200):
        w = viscous.explicit_update(grid, rho, w, dt, V)
    assert np.max(np.abs(w)) < np.max(np.abs(u))


def test_zero_velocity_has_zero_dissipation():
    grid = RadialGrid(0.1, 3.0, 20, 2)
    assert viscous.dissipation_rate(grid, np.ones(20), np.zeros(20), V) == 0.0
