import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import betainc

from radialns.eos import GasParams
from radialns.grid import RadialGrid
from radialns.initdata import (
    InitDataError,
    InitialDataSpec,
    approx_velocity,
    build_initial_data,
    clamp_band,
    clamp_density,
    cutoff_radius,
    farfield_cutoff,
    mollify,
    mollify_sqrt_density,
    preset,
    profile_from_csv,
    restrict_annulus,
    smooth_bump,
    windowed_velocity,
)
from radialns.trajectory import ProfileError

G2 = GasParams(gamma=2.0)


@pytest.mark.parametrize("rho0,expected", [(1.0, 1.0), (0.0, (1e-3 * 0.01) ** 0.25), (1e6, (1e-3 * 0.01) ** -0.5)])
def test_clamp_examples(rho0, expected):
    assert clamp_density(np.array([rho0]), 0.01, 1e-3)[0] == pytest.approx(expected)


@given(st.lists(st.floats(0, 1e8), min_size=1, max_size=20), st.sampled_from([0.1, 0.01, 0.001]))
def test_clamp_band_and_idempotence(values, eps):
    lo, hi = clamp_band(eps, 1e-3)
    once = clamp_density(np.array(values), eps)
    assert np.all((once >= lo) & (once <= hi))
    assert np.array_equal(clamp_density(once, eps), once)


def test_farfield_cutoff_examples():
    eps, beta = 0.01, 1e-3
    rc = cutoff_radius(eps, beta, 2)
    r = np.array([0.5 * rc, 2 * rc])
    out = farfield_cutoff(r, np.array([3.0, 3.0]), eps, beta, 1.0, 2)
    assert out.tolist() == [3.0, 1.0]
    assert np.all(farfield_cutoff(r, np.ones(2), eps, beta, 1.0, 2) == 1.0)


def test_farfield_cutoff_rejects_small_radius():
    with pytest.raises(InitDataError, match="decrease beta"):
        farfield_cutoff(np.ones(3), np.ones(3), 0.5, 0.5, 1.0, 2, far_radius=5.0)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_mollify_constant_is_exact(dim):
    r = np.linspace(0.0, 5.0, 11)
    out = mollify_sqrt_density(lambda z: np.full_like(z, 2.5), r, 0.3, dim)
    assert np.max(np.abs(out - 2.5)) <= 1e-13


@given(seed=st.integers(0, 1000), dim=st.sampled_from([2, 3]))
@settings(max_examples=20, deadline=None)
def test_mollify_preserves_bounds(seed, dim):
    rng = np.random.default_rng(seed)
    nodes = np.linspace(0, 6, 13)
    vals = rng.uniform(0.2, 4.0, nodes.size)
    prof = lambda z: np.interp(z, nodes, vals)
    out = mollify_sqrt_density(prof, np.linspace(0.1, 5.9, 40), 0.4, dim, order=24)
    assert np.all(out >= vals.min() * (1 - 1e-12))
    assert np.all(out <= vals.max() * (1 + 1e-12))


def _step_oracle(r, sigma, dim):
    """(1 + P)^2 with P the mollifier mass at |x - y| >= 1, angle fraction in closed form."""
    J = lambda s: np.exp(-1 / (1 - s * s)) * s ** (dim - 1) if s < 1 else 0.0
    a = (dim - 1) / 2

    def outside_fraction(s):
        S = sigma * s
        c = np.clip((r * r + S * S - 1) / (2 * r * S), -1, 1)
        return betainc(a, a, (1 + c) / 2)  # share of directions with cos(phi) <= c

    P = quad(lambda s: J(s) * outside_fraction(s), 0, 1, limit=200)[0] / quad(J, 0, 1)[0]
    return (1 + P) ** 2


def _step_oracle_planar_angle(r, sigma):
    J = lambda s: np.exp(-1 / (1 - s * s)) * s if s < 1 else 0.0
    ang = lambda s: 1 - np.arccos(np.clip((r * r + (sigma * s) ** 2 - 1) / (2 * r * sigma * s), -1, 1)) / np.pi
    return (1 + quad(lambda s: J(s) * ang(s), 0, 1, limit=200)[0] / quad(J, 0, 1)[0]) ** 2


@pytest.mark.parametrize("dim", [2, 3])
def test_mollified_step_matches_direct_quadrature(dim):
    step = lambda z: (1.0 + (z >= 1.0)) ** 2
    value = mollify_sqrt_density(step, [1.0], 0.25, dim, order=96)[0]
    assert 1 < value < 4
    assert value == pytest.approx(_step_oracle(1.0, 0.25, dim), abs=2e-3)
    if dim == 2:
        # flat-interface estimate ((1 + 2)/2)^2; curvature of the circle shifts it up
        assert value == pytest.approx(2.25, abs=0.1)


def test_step_oracles_agree_in_the_plane():
    assert _step_oracle(1.0, 0.25, 2) == pytest.approx(_step_oracle_planar_angle(1.0, 0.25), rel=1e-8)


def test_mollify_vector_field_linear_in_r():
    # a symmetric unit-mass kernel reproduces linear fields, so J * x = x
    from radialns.initdata import mollify_radial_vector

    r = np.array([0.5, 1.0, 3.0])
    for dim in (2, 3):
        assert mollify_radial_vector(lambda z: z, r, 0.3, dim) == pytest.approx(r, rel=1e-12)


def test_approx_velocity_examples():
    rho0 = np.array([1.0, 2.0, 0.5])
    rho_eps = np.array([1.2, 1.8, 0.7])
    assert np.all(approx_velocity(np.zeros(3), rho0, rho_eps) == 0)
    m0 = np.array([0.3, -0.2, 0.1])
    assert approx_velocity(m0, rho0, rho0) == pytest.approx(m0 / rho0, rel=1e-15)


def test_kinetic_energy_preserved_by_approx_velocity():
    grid = RadialGrid(0.1, 11.0, 1000, 2)
    prof = preset("pulse", G2)
    rho0 = 1 + 0.3 * np.sin(grid.r) ** 2
    m0 = prof.m(grid.r)
    rho_eps = 1 + 0.2 * np.cos(grid.r) ** 2
    u = approx_velocity(m0, rho0, rho_eps)
    lhs = grid.integrate(rho_eps * u**2)
    rhs = grid.integrate(m0**2 / rho0)
    assert abs(lhs - rhs) / rhs <= 1e-12


def test_momentum_on_vacuum_is_contract_error():
    with pytest.raises(InitDataError, match="rho0 = 0"):
        approx_velocity(np.array([0.0, 0.1]), np.array([1.0, 0.0]), np.ones(2))


@pytest.mark.parametrize("delta", [0.4, 0.2, 0.1])
def test_windowed_velocity_support(delta):
    prof = preset("pulse", G2, center=3.0, width=2.9)
    r = np.linspace(0.01, 1 / delta + 3, 600)
    u = windowed_velocity(prof, r, np.ones_like(r), delta, 2, order=32)
    outside = (r < 2 * delta) | (r > 1 + 1 / delta)
    assert np.all(u[outside] == 0.0)
    assert np.any(u[~outside] != 0.0)


def test_windowed_velocity_zero_momentum():
    r = np.linspace(0.1, 5, 20)
    assert np.all(windowed_velocity(preset("bump", G2), r, np.ones_like(r), 0.2, 2) == 0)


def test_windowed_energy_approaches_unwindowed():
    prof = preset("pulse", G2, center=2.5, width=1.5)
    gaps = []
    for delta in (0.4, 0.2, 0.1):
        grid = RadialGrid(delta, 1 + 1 / delta + 1, 2000, 2)
        u = windowed_velocity(prof, grid.r, np.ones_like(grid.r), delta, 2)
        full = grid.integrate(prof.m(grid.r) ** 2)
        gaps.append(abs(grid.integrate(u**2) - full))
    assert gaps[0] > gaps[1] > gaps[2]


def test_restrict_annulus_rejects_short_domain():
    with pytest.raises(InitDataError, match="1 \\+ 1/delta"):
        restrict_annulus(RadialGrid(0.1, 10.0, 100, 2), 1.0, 0.0)


def test_restrict_annulus_constant_state():
    grid = RadialGrid(0.2, 6.0, 100, 2)
    field = restrict_annulus(grid, lambda r: np.ones_like(r), lambda r: np.zeros_like(r))
    assert np.all(field.rho == 1) and np.all(field.m == 0)
    assert field.mass() == pytest.approx((6.0**2 - 0.2**2) / 2, rel=1e-12)


def test_pipeline_output_in_clamp_band_and_windowed():
    grid = RadialGrid(0.1, 11.0, 1090, 2)
    spec = InitialDataSpec(preset("vacuum", G2, radius=1.5), eps=0.01)
    field = build_initial_data(spec, grid, G2)
    lo, hi = clamp_band(0.01, 1e-3)
    assert field.rho.min() >= lo * (1 - 1e-12) and field.rho.max() <= hi
    assert np.all(field.m == 0)


def test_pipeline_rejects_too_large_beta():
    spec = InitialDataSpec(preset("bump", G2), eps=0.5, beta=0.5)
    with pytest.raises(InitDataError):
        build_initial_data(spec, RadialGrid(0.1, 11.0, 100, 2), G2)


def test_smooth_bump_shape():
    assert smooth_bump(np.array([0.0, 1.0, -1.5])).tolist() == [1.0, 0.0, 0.0]


def test_profile_csv_roundtrip(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("r,rho0,m0\n0,1,0\n1,2,0.5\n2,1,0\n")
    prof = profile_from_csv(path)
    assert prof.rho(np.array([0.5]))[0] == pytest.approx(1.5)
    assert prof.m(np.array([1.5]))[0] == pytest.approx(0.25)
    assert prof.far_radius == 2.0


@pytest.mark.parametrize(
    "body,match",
    [
        ("r,rho0,m0\n0,1,0\n1,1,0\n0.5,1,0\n", "row 4: r is not strictly increasing"),
        ("r,rho0,m0\n0,1,0\n1,-1,0\n", "row 3: negative density"),
        ("r,rho,m\n0,1,0\n1,1,0\n", "header"),
        ("r,rho0,m0\n0,1\n1,1,0\n", "row 2: expected 3 columns"),
    ],
)
def test_profile_csv_errors(tmp_path, body, match):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(ProfileError, match=match):
        profile_from_csv(path)


def test_unknown_preset():
    with pytest.raises(InitDataError):
        preset("nope", G2)


def _smoothed_on_fine_grid(eps, prof, dim=2):
    from radialns.initdata import smoothed_density

    spec = InitialDataSpec(prof, eps)
    grid = RadialGrid(0.005, cutoff_radius(eps, 1e-3, dim) + 2, 3000, dim)
    return grid, smoothed_density(spec, GasParams(2.0, dim))(grid.r)


def test_density_converges_in_l_gamma_on_compacts():
    prof = preset("sod", G2, inner=2.0, outer=1.0, radius=2.0)
    errs = []
    for eps in (0.1, 0.01, 0.001):
        grid, rho = _smoothed_on_fine_grid(eps, prof)
        w = grid.window_weights(0.0, 4.0)
        errs.append(np.sum(np.abs(rho - prof.rho(grid.r)) ** 2 * w) ** 0.5)
    assert errs[0] > errs[1] > errs[2]


def test_weighted_energy_growth_trend():
    # int e(rho_eps, rho_bar)(1 + r)^(N - 1 + vartheta) dr <= C eps^(-(N - 1 + vartheta)/(2N))
    from radialns.eos import relative_internal_energy

    prof = preset("bump", G2)
    scaled = []
    for eps in (0.1, 0.01, 0.001):
        grid, rho = _smoothed_on_fine_grid(eps, prof)
        val = np.sum(relative_internal_energy(rho, G2) * (1 + grid.r) ** 1.5 * grid.dr)
        scaled.append(val * eps ** (1.5 / 4))
    assert max(scaled) <= 1.5 * scaled[0]
