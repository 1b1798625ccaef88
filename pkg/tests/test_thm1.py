import math

import numpy as np
import pytest

from bmolab.constants import constant
from bmolab.counterexamples.kernels import singular_lag_weights
from bmolab.counterexamples.thm1 import (
    expected_slope,
    interval_singular_integral,
    thm1_expected_form,
    thm1_form,
    thm1_ladder,
    thm1_path,
    thm1_reduced_form,
)
from bmolab.functionals import TimeProfile
from bmolab.propagators import point_overlap_schrodinger
from bmolab.stochastic import SeedSpec, constant_path, gaussian_quadratic_char


def ones(n, a=-1.0, b=1.0):
    return TimeProfile.from_function(lambda t: np.ones_like(t), a, b, n)


def test_interval_singular_integral_oracle():
    # dS/d ln(1/eps) -> 4 for the interval of length 2
    e = 1e-8
    slope = (interval_singular_integral(e / 2) - interval_singular_integral(e)) / math.log(2)
    assert slope == pytest.approx(constant("interval_singular_slope"), rel=1e-6)
    with pytest.raises(ValueError):
        interval_singular_integral(3.0)


def test_expected_slope_value():
    assert expected_slope(0.5) == pytest.approx(constant("gaussian_quadratic_sin_half") / math.pi)


def test_form_matches_node_sum_for_band_beyond_two_cells():
    # with the band at lag >= 3 cells, each excluded pair is fully excluded, and
    # the form is a weighted sum of node overlaps
    alpha = TimeProfile.from_function(lambda t: np.exp(1j * t), 0.0, 1.0, 40)
    path = thm1_path(alpha.times, SeedSpec(3), 0.5)
    dt = alpha.dt
    eps = 3.0 * dt
    val = thm1_form(alpha, path, eps)
    W = singular_lag_weights(alpha.count, dt, eps, "odd")
    n = alpha.count
    direct = 0.0
    for i in range(n):
        for j in range(n):
            m = i - j
            if m == 0:
                continue
            K = point_overlap_schrodinger(m * dt, path.points[j], path.points[i]) * (m * dt)
            direct += alpha.values[i] * np.conj(alpha.values[j]) * K * W[n - 1 + m] * dt
    assert val == pytest.approx(direct, rel=1e-12)


def test_constant_path_reduces_to_odd_kernel():
    # p_t constant: the kernel is -1/(4 pi i tau), which is odd in tau, so alpha = 1 gives 0
    alpha = ones(100)
    path = constant_path(alpha.times, (0.0, 0.0))
    assert abs(thm1_form(alpha, path, 0.1)) < 1e-14


def test_expected_form_matches_monte_carlo_and_closed_form():
    alpha = ones(400)
    eps = 0.05
    exp = thm1_expected_form(alpha, eps)
    # E form = (a / 4 pi) S(eps) up to the cell quadrature
    a = gaussian_quadratic_char(0.5).imag
    assert exp.real == pytest.approx(a / (4 * math.pi) * interval_singular_integral(eps), rel=1e-10)
    assert abs(exp.imag) < 1e-12
    vals = np.array([thm1_form(alpha, thm1_path(alpha.times, SeedSpec(1, k)), eps) for k in range(200)])
    se = vals.real.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.real.mean() - exp.real) < 4 * se


def test_reduced_form():
    alpha = ones(200)
    val = thm1_reduced_form(alpha, 0.1)
    assert val == pytest.approx(interval_singular_integral(0.1) / (4 * math.pi * 1j), rel=1e-12)


def test_band_below_resolution_rejected():
    alpha = ones(100)
    with pytest.raises(ValueError):
        thm1_form(alpha, constant_path(alpha.times, (0.0, 0.0)), alpha.dt)
    with pytest.raises(ValueError):
        thm1_ladder((0.1, 0.01, 0.001, 1e-4), replicas=2, cells=100)
    with pytest.raises(ValueError):
        thm1_ladder((0.1,), replicas=1, cells=100)


def test_small_ladder_is_reproducible_and_grows():
    pts, fit = thm1_ladder((0.2, 0.1, 0.05, 0.025), replicas=16, seed=4, cells=200)
    pts2, _ = thm1_ladder((0.2, 0.1, 0.05, 0.025), replicas=16, seed=4, cells=200, workers=3)
    assert [p.mean for p in pts] == [p.mean for p in pts2]
    assert fit.slope > 0
    assert all(p.replicas == 16 and p.stderr > 0 for p in pts)


def test_path_scale():
    p = thm1_path(np.linspace(0, 1, 11), SeedSpec(0), theta=0.5)
    assert p.provenance["scale"] == 2.0
    assert np.all(p.points[:, 1] == 0)
