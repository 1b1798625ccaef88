import math

import numpy as np
import pytest

from bmolab.constants import constant
from bmolab.propagators import (
    composition_identity_check,
    cosine_resolvent,
    gaussian_overlap_schrodinger,
    overlap_polynomial,
    point_overlap_schrodinger,
    radial_kernel_convolution,
    regularized_kernel_transform,
    schrodinger_evolve,
    wave_energy,
    wave_evolve,
    wave_kernel_sup,
    wave_spatial_kernel,
    wave_velocity,
)
from bmolab.spectral import (
    PHYSICAL,
    SampledField,
    apply_multiplier,
    create_grid,
    gaussian_closed_form,
    physical_field,
    spectral_field,
    transform,
)
from bmolab.stochastic import SeedSpec


# --- oracles ---------------------------------------------------------------

def test_schrodinger_gaussian_closed_form():
    # A_t maps the Gaussian with transform exp(-a|zeta|^2) to exp(-(a - i t)|zeta|^2)
    grid = create_grid(2, 256, 48.0)
    f = physical_field(grid, gaussian_closed_form(1.0, 2))
    for t in (0.5, -2.0, 4.0):
        u = schrodinger_evolve(f, t)
        exact = physical_field(grid, gaussian_closed_form(1.0 - 1j * t, 2))
        assert np.max(np.abs(u.values - exact.values)) < 1e-10


def _translated(grid, values_hat, p):
    return apply_multiplier(SampledField(grid, "spectral", values_hat), lambda a, b: np.exp(-1j * (a * p[0] + b * p[1])))


@pytest.mark.parametrize("t,s,p,q", [(0.0, 0.0, (0, 0), (0, 0)), (1.5, 0.2, (1.0, -0.5), (0.3, 0.4)),
                                     (-2.0, 1.0, (2.0, 1.0), (-1.0, 0.0))])
def test_gaussian_overlap_matches_grid(t, s, p, q):
    grid = create_grid(2, 256, 40.0)
    zeta2 = grid.zeta2
    gh = zeta2 * np.exp(-zeta2)
    evolved = _translated(grid, gh * np.exp(1j * (t - s) * zeta2), p)
    fixed = _translated(grid, gh, q)
    numeric = transform(evolved, "inverse").inner(transform(fixed, "inverse"))
    closed = gaussian_overlap_schrodinger(t, s, np.array(p, float), np.array(q, float))
    assert complex(closed) == pytest.approx(numeric, abs=1e-10)


def test_gaussian_overlap_origin_value():
    assert gaussian_overlap_schrodinger(0.0, 0.0, np.zeros(2), np.zeros(2)) == pytest.approx(
        constant("gaussian_overlap_origin"), rel=1e-10)
    assert overlap_polynomial(0.0) == 32


def test_point_overlap_coefficient():
    for t in (0.3, -1.0, 5.0):
        v = point_overlap_schrodinger(t, (0.0, 0.0), (0.7, -0.2))
        assert abs(v) * abs(t) == pytest.approx(constant("point_overlap_coefficient"), rel=1e-7)
    d2 = 0.7**2 + 0.2**2
    assert point_overlap_schrodinger(2.0, (0, 0), (0.7, -0.2)) == pytest.approx(
        -1 / (4 * math.pi * 1j * 2.0) * np.exp(d2 / (4j * 2.0)), rel=1e-14)


def test_regularized_point_overlap_converges():
    p, q = (0.0, 0.0), (1.0, 0.5)
    exact = point_overlap_schrodinger(1.0, p, q)
    errs = [abs(point_overlap_schrodinger(1.0, p, q, eps) - exact) for eps in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3
    with pytest.raises(ValueError):
        point_overlap_schrodinger(0.0, p, q)
    with pytest.raises(ValueError):
        point_overlap_schrodinger(1.0, p, q, -1.0)


def test_cosine_resolvent_matches_kernel_convolution():
    # zero-mean radial data: difference of two unit-mass Gaussians
    a, b = 0.5, 1.0
    grid = create_grid(3, 64, 12.0)
    f = transform(spectral_field(grid, lambda *z: np.exp(-a * sum(c * c for c in z))
                                 - np.exp(-b * sum(c * c for c in z))), "inverse")
    ga, gb = gaussian_closed_form(a, 3), gaussian_closed_form(b, 3)

    def profile(r):
        return float((ga(r, 0.0, 0.0) - gb(r, 0.0, 0.0)).real)

    t = 1.5
    u = cosine_resolvent(f, t, 1e-8)
    i0 = grid.n // 2
    numeric = np.array([u.values[i0 + k, i0, i0].real for k in (0, 2, 4, 6)])
    expected = np.array([radial_kernel_convolution(profile, t, abs(grid.axis[i0 + k]), 12.0) for k in (0, 2, 4, 6)])
    # the periodic box shifts the potential by a small constant
    offset = numeric - expected
    assert abs(offset[0]) < 5e-5
    assert np.max(np.abs(offset - offset[0])) < 1e-8


def test_regularized_transform_converges_for_both_dampings():
    t, k = 1.0, 2.0
    exact = math.cos(t * k) / k**2
    for damping, ladder in (("exponential", (1e-1, 1e-2, 1e-3)), ("gaussian", (1e-2, 1e-4, 1e-6))):
        errs = [abs(regularized_kernel_transform(t, k, e, damping) - exact) for e in ladder]
        assert errs[-1] < errs[0]
        assert errs[-1] < 5e-3
    with pytest.raises(ValueError):
        regularized_kernel_transform(t, 0.0, 0.1)
    with pytest.raises(ValueError):
        regularized_kernel_transform(t, 1.0, 0.0)
    with pytest.raises(ValueError):
        regularized_kernel_transform(t, 1.0, 0.1, "lorentzian")


# --- invariants ------------------------------------------------------------

def test_schrodinger_group_property():
    grid = create_grid(2, 64, 8.0)
    rng = SeedSpec(3).generator()
    f = SampledField(grid, PHYSICAL, rng.standard_normal(grid.shape) + 0j)
    lhs = schrodinger_evolve(schrodinger_evolve(f, 0.3), 0.4)
    rhs = schrodinger_evolve(f, 0.7)
    assert np.max(np.abs(lhs.values - rhs.values)) < 1e-12


def test_wave_energy_conserved_and_velocity_is_derivative():
    grid = create_grid(3, 32, 8.0)
    f = physical_field(grid, gaussian_closed_form(0.5, 3))
    energies = [wave_energy(f, t) for t in (0.0, 0.5, 1.0, 3.0)]
    assert np.allclose(energies, energies[0], rtol=1e-12)
    h = 1e-5
    fd = (wave_evolve(f, 1.0 + h).values - wave_evolve(f, 1.0 - h).values) / (2 * h)
    assert np.max(np.abs(fd - wave_velocity(f, 1.0).values)) < 1e-7


def test_composition_identity():
    grid = create_grid(3, 16, 4.0)
    for s, t in ((0.0, 0.0), (1.0, 2.0), (-3.0, 0.5)):
        assert composition_identity_check(s, t, grid) < 1e-12
    with pytest.raises(ValueError):
        composition_identity_check(1.0, 1.0, create_grid(2, 16, 4.0))


def test_wave_kernel_values():
    assert wave_spatial_kernel(1.0, 0.5) == 0.0
    assert wave_spatial_kernel(1.0, 2.0) == pytest.approx(1 / (8 * math.pi))
    pts = np.array([[0.0, 0.0, 2.0], [0.1, 0.0, 0.0]])
    assert np.allclose(wave_spatial_kernel(1.0, pts), [1 / (8 * math.pi), 0.0])
    assert wave_kernel_sup(2.0) == pytest.approx(constant("wave_kernel_sup_coefficient") / 2)
    with pytest.raises(ValueError):
        wave_kernel_sup(0.0)
    with pytest.raises(ValueError):
        wave_spatial_kernel(0.0, 0.0)


def test_propagator_input_validation():
    g2 = create_grid(2, 16, 2.0)
    f2 = physical_field(g2, gaussian_closed_form(1.0, 2))
    with pytest.raises(ValueError):
        wave_evolve(f2, 1.0)
    with pytest.raises(ValueError):
        schrodinger_evolve(transform(f2), 1.0)
    g3 = create_grid(3, 16, 2.0)
    f3 = physical_field(g3, gaussian_closed_form(1.0, 3))
    with pytest.raises(ValueError):
        cosine_resolvent(f3, 0.0, 1e-6)
    with pytest.raises(ValueError):
        cosine_resolvent(f3, 1.0, 0.0)
    with pytest.raises(ValueError):
        radial_kernel_convolution(lambda r: 1.0, 0.0, 1.0, 1.0)
