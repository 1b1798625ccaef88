import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bmolab.constants import constant
from bmolab.functionals import (
    MixedNormSpec,
    TimeProfile,
    dyadic_bmo_seminorm,
    h1_norm,
    half_derivative,
    hardy_adjoint,
    hardy_l2_norm,
    hardy_transform,
    heat_maximal,
    heat_maximal_field,
    heat_multiplier,
    lebesgue_norm,
    mixed_norm,
    path_square_functional,
)
from bmolab.spectral import PHYSICAL, SampledField, create_grid, gaussian_closed_form, physical_field, transform
from bmolab.stochastic import Path, constant_path, lacunary_path


# --- Hardy operators -------------------------------------------------------

def test_hardy_box_example():
    # H 1_[0,1] = 1 on [0,1] and 1/t beyond, so ||H alpha||^2 = 2
    box = TimeProfile(0.0, 1e-3, np.ones(1000, dtype=complex))
    assert hardy_l2_norm(box) ** 2 == pytest.approx(2.0, abs=1e-4)


def test_hardy_transform_of_constant_is_constant():
    a = TimeProfile(0.0, 0.01, np.full(100, 2.0 + 1j))
    assert np.allclose(hardy_transform(a).values, 2.0 + 1j)


def test_hardy_adjoint_of_power_profile():
    # H* 1_[0,1] (t) = ln(1/t); its cell averages on [a, b] are 1 + (a ln a - b ln b)/(b - a)
    n = 50
    a = TimeProfile(0.0, 1.0 / n, np.ones(n, dtype=complex))
    lo = np.arange(n) / n
    hi = lo + 1.0 / n
    with np.errstate(divide="ignore", invalid="ignore"):
        xlogx = lambda x: np.where(x > 0, x * np.log(np.where(x > 0, x, 1)), 0.0)  # noqa: E731
    exact = 1 + (xlogx(lo) - xlogx(hi)) / (hi - lo)
    assert np.allclose(hardy_adjoint(a).values.real, exact, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 200), dt=st.floats(1e-3, 1.0), start=st.floats(0, 2.0), seed=st.integers(0, 2**31))
def test_hardy_bound_and_adjointness(n, dt, start, seed):
    rng = np.random.default_rng(seed)
    a = TimeProfile(start, dt, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    b = a.with_values(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    assert hardy_l2_norm(a) <= 2 * a.norm2() + 1e-6
    lhs, rhs = hardy_transform(a).inner(b), a.inner(hardy_adjoint(b))
    assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), 1.0)


def test_hardy_rejects_negative_support():
    with pytest.raises(ValueError):
        hardy_transform(TimeProfile(-1.0, 0.1, np.ones(10, dtype=complex)))


def test_time_profile_validation():
    with pytest.raises(ValueError):
        TimeProfile(0.0, 0.1, np.ones(1))
    with pytest.raises(ValueError):
        TimeProfile(0.0, 0.0, np.ones(4))
    p = TimeProfile.from_function(lambda t: t, 0.0, 1.0, 4)
    assert np.allclose(p.times, [0.125, 0.375, 0.625, 0.875])
    assert p.stop == pytest.approx(1.0)


# --- norms -------------------------------------------------------------------

def test_lebesgue_and_mixed_norms():
    grid = create_grid(2, 128, 16.0)
    f = physical_field(grid, gaussian_closed_form(1.0, 2))
    # ||f||_1 = 1 for a unit-mass Gaussian, ||f||_inf = 1/(4 pi)
    assert lebesgue_norm(f, 1) == pytest.approx(1.0, rel=1e-10)
    assert lebesgue_norm(f, math.inf) == pytest.approx(1 / (4 * math.pi))
    assert lebesgue_norm(f, 2) == pytest.approx(f.norm2(), rel=1e-12)
    spec = MixedNormSpec(p=1, q=2, dt=0.5)
    assert mixed_norm([f, f, f, f], spec) == pytest.approx(math.sqrt(4 * 0.5), rel=1e-10)
    with pytest.raises(ValueError):
        MixedNormSpec(p=0.5, q=2, dt=1)
    with pytest.raises(ValueError):
        lebesgue_norm(f, 0.5)
    with pytest.raises(ValueError):
        mixed_norm([], spec)


# --- heat maximal function -----------------------------------------------------

def test_heat_kernel_masses():
    grid = create_grid(2, 64, 8.0)
    for d in (2, 3):
        z0 = np.zeros(1)
        assert heat_multiplier(z0, 1.0, d)[0] == 1.0
        assert heat_multiplier(z0, 1.0, d, "literal")[0] == pytest.approx(constant(f"heat_kernel_mass_literal_d{d}"))
    with pytest.raises(ValueError):
        heat_multiplier(grid.zeta2, 1.0, 2, "poisson")


def test_maximal_function_of_gaussian():
    # h_t * G_a = G_{a+t} peaks at the origin with (4 pi (a+t))^{-1}, so M G(0) = G(0) at t -> 0
    grid = create_grid(2, 128, 16.0)
    g = physical_field(grid, gaussian_closed_form(1.0, 2))
    i0 = grid.n // 2
    assert heat_maximal(g, (i0, i0)) == pytest.approx(1 / (4 * math.pi * (1 + 1e-3)), rel=1e-9)
    M = heat_maximal_field(g)
    # the smallest ladder time is 1e-3, so M g can fall below |g| by that relative amount
    assert np.all(M.values.real >= np.abs(g.values) * (1 - 2e-3))


def test_maximal_function_threads_match_serial():
    grid = create_grid(2, 64, 8.0)
    g = transform(SampledField(grid, "spectral", (grid.zeta2 * np.exp(-grid.zeta2)).astype(complex)), "inverse")
    a = heat_maximal_field(g).values
    b = heat_maximal_field(g, workers=4).values
    assert np.array_equal(a, b)
    assert h1_norm(g) > 0
    with pytest.raises(ValueError):
        heat_maximal_field(g, ladder=[])
    with pytest.raises(ValueError):
        heat_maximal_field(transform(g))


# --- path functionals ----------------------------------------------------------

def test_square_functional_of_linear_path():
    # |p_t - p_s|^2/(t-s)^2 = 1, so the functional is |I| minus the excluded diagonal cells
    n = 200
    t = (np.arange(n) + 0.5) / n
    val = path_square_functional(Path(t, t[:, None]))
    assert val == pytest.approx(1 - 1 / n, rel=1e-12)


def test_square_functional_matches_direct_double_sum():
    rng = np.random.default_rng(5)
    n = 100
    t = np.arange(n) * 0.01
    p = np.cumsum(rng.standard_normal((n, 2)), axis=0)
    i, j = np.indices((n, n))
    off = i != j
    d2 = np.sum((p[:, None] - p[None]) ** 2, axis=-1)
    direct = np.sum(d2[off] / ((t[:, None] - t[None]) ** 2)[off]) * 0.01**2 / (n * 0.01)
    assert path_square_functional(Path(t, p)) == pytest.approx(direct, rel=1e-10)


def test_square_functional_interval_and_validation():
    path = lacunary_path(3, 512)
    sub = path_square_functional(path, (0.0, math.pi))
    assert sub > 0
    assert path_square_functional(constant_path(np.arange(100.0))) == 0.0
    with pytest.raises(ValueError):
        path_square_functional(constant_path(np.arange(10.0)))
    with pytest.raises(ValueError):
        path_square_functional(constant_path(np.arange(100.0) ** 2))


def test_half_derivative_of_cosine():
    # D^{1/2} cos(k t) = sqrt(k) cos(k t) on a periodic grid
    n = 256
    t = 2 * math.pi * np.arange(n) / n
    d = half_derivative(Path(t, np.cos(4 * t)[:, None]))
    assert np.allclose(d, 2 * np.cos(4 * t), atol=1e-12)
    with pytest.raises(ValueError):
        half_derivative(Path(t, np.zeros((n, 2))))


def test_dyadic_bmo():
    assert dyadic_bmo_seminorm(np.ones(64)) == 0.0
    # +-1 alternating halves: mean oscillation 1 on the whole interval
    assert dyadic_bmo_seminorm(np.r_[np.ones(32), -np.ones(32)]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        dyadic_bmo_seminorm(np.ones(1))


# --- invariants --------------------------------------------------------------

def test_lebesgue_norm_is_a_norm():
    grid = create_grid(2, 32, 4.0)
    rng = np.random.default_rng(11)
    f = SampledField(grid, PHYSICAL, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
    g = SampledField(grid, PHYSICAL, rng.standard_normal(grid.shape).astype(complex))
    for p in (1, 2, 3.5, math.inf):
        nf, ng = lebesgue_norm(f, p), lebesgue_norm(g, p)
        assert nf >= 0
        assert lebesgue_norm(SampledField(grid, PHYSICAL, -2.5j * f.values), p) == pytest.approx(2.5 * nf)
        assert lebesgue_norm(SampledField(grid, PHYSICAL, f.values + g.values), p) <= (nf + ng) * (1 + 1e-12)
    assert lebesgue_norm(SampledField(grid, PHYSICAL, np.zeros(grid.shape, dtype=complex)), 2) == 0


def test_maximal_function_respects_domination():
    grid = create_grid(2, 64, 8.0)
    g = physical_field(grid, gaussian_closed_form(0.5, 2))
    big = SampledField(grid, PHYSICAL, 2 * g.values)
    ladder = np.geomspace(1e-2, 1e2, 20)
    small_m = heat_maximal_field(g, ladder).values.real
    big_m = heat_maximal_field(big, ladder).values.real
    assert np.allclose(big_m, 2 * small_m, rtol=1e-12, atol=1e-15)
    # the maximal function dominates |g| up to the smallest ladder time
    assert np.all(small_m >= np.abs(g.values) * (1 - 0.1) - 1e-12)


def test_square_functional_shift_and_scale():
    t = np.linspace(0, 1, 200)
    p = np.column_stack([np.sin(3 * t), t**2])
    base = path_square_functional(Path(t, p))
    assert path_square_functional(Path(t, p + np.array([4.0, -1.0]))) == pytest.approx(base, rel=1e-9)
    assert path_square_functional(Path(t, 3 * p)) == pytest.approx(9 * base, rel=1e-12)
