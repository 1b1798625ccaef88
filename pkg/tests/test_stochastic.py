import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bmolab.constants import constant
from bmolab.stochastic import (
    Path,
    SeedSpec,
    constant_path,
    gaussian_quadratic_char,
    gaussian_quadratic_char_mc,
    gaussian_quadratic_sin,
    lacunary_path,
    lip_half_seminorm,
    sample_brownian,
    stack_paths,
)


def test_gaussian_characteristic_oracle_values():
    assert abs(gaussian_quadratic_char(0.5)) == pytest.approx(constant("gaussian_quadratic_modulus_half"), rel=1e-12)
    assert gaussian_quadratic_sin(0.5) == pytest.approx(constant("gaussian_quadratic_sin_half"), rel=1e-12)
    assert gaussian_quadratic_char(0.0) == 1.0


@pytest.mark.parametrize("theta", [0.1, 0.5, 1.0, 2.0])
def test_gaussian_characteristic_monte_carlo(theta):
    mean, se_re, se_im = gaussian_quadratic_char_mc(theta, 200_000, SeedSpec(11, int(theta * 10)))
    exact = gaussian_quadratic_char(theta)
    assert abs(mean.real - exact.real) <= 4 * se_re
    assert abs(mean.imag - exact.imag) <= 4 * se_im


def test_seed_streams_are_reproducible_and_distinct():
    a = SeedSpec(7, 3).generator().standard_normal(5)
    b = SeedSpec(7, 3).generator().standard_normal(5)
    c = SeedSpec(7, 4).generator().standard_normal(5)
    d = SeedSpec(8, 3).generator().standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    assert SeedSpec(7).child(3) == SeedSpec(7, 3)
    assert SeedSpec(7, 3).provenance() == {"master": 7, "stream": 3, "bitgen": "Philox4x64"}
    with pytest.raises(ValueError):
        SeedSpec(1, -1)


def test_brownian_increments_have_elapsed_time_variance():
    times = np.array([0.0, 0.5, 2.0])
    inc = np.array([np.diff(sample_brownian(times, SeedSpec(1, k)).points[:, 0]) for k in range(4000)])
    assert np.allclose(inc.var(axis=0), [0.5, 1.5], rtol=0.08)
    assert abs(np.corrcoef(inc.T)[0, 1]) < 0.05


def test_brownian_validation():
    p = sample_brownian(np.linspace(0, 1, 11), SeedSpec(0))
    assert p.points[0, 0] == 0.0 and p.d == 1 and p.count == 11
    with pytest.raises(ValueError):
        sample_brownian([0.0], SeedSpec(0))
    with pytest.raises(ValueError):
        sample_brownian([0.0, 1.0, 0.5], SeedSpec(0))


def test_path_helpers():
    t = np.linspace(0, 1, 5)
    p = constant_path(t, (1.0, 2.0))
    assert p.d == 2
    assert np.allclose(p.scaled(2).points, [[2, 4]] * 5)
    assert np.allclose(p.shifted((1, 1)).points, [[2, 3]] * 5)
    s = stack_paths(constant_path(t), constant_path(t, (3.0,)))
    assert s.d == 2
    with pytest.raises(ValueError):
        stack_paths(constant_path(t), constant_path(t + 1))
    with pytest.raises(ValueError):
        Path(t, np.zeros(5))
    with pytest.raises(ValueError):
        Path(t, np.full((5, 1), np.nan))


def test_lip_half_seminorm_matches_brute_force():
    rng = np.random.default_rng(0)
    t = np.sort(rng.random(60))
    p = rng.standard_normal((60, 2))
    i, j = np.triu_indices(60, 1)
    brute = np.max(np.linalg.norm(p[i] - p[j], axis=1) / np.sqrt(t[j] - t[i]))
    assert lip_half_seminorm(Path(t, p)) == pytest.approx(brute, rel=1e-14)


@settings(max_examples=10, deadline=None)
@given(n=st.integers(1, 6))
def test_lacunary_path_has_unit_seminorm(n):
    path = lacunary_path(n, 2 ** (n + 5))
    assert lip_half_seminorm(path) == pytest.approx(1.0, rel=1e-12)
    assert path.provenance["levels"] == n


def test_lacunary_validation():
    with pytest.raises(ValueError):
        lacunary_path(0, 1024)
    with pytest.raises(ValueError):
        lacunary_path(8, 1024)
    p = lacunary_path(2, 256, (0.0, 1.0))
    assert p.times[0] == pytest.approx(0.5 / 256)
    assert math.isfinite(p.provenance["scale"])
