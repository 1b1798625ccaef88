"""Square-functional route for Lip_{1/2} paths.

For a path with unit Lip_{1/2} seminorm, ``rho = |p_t - p_s|^2 / (t - s)`` lies
in ``[-1, 1]``, so with ``F(rho) = rho B(rho)``

    |p_t - p_s|^2 / (t - s) = (1/2pi) int F_hat(-r) exp(r |p_t - p_s|^2 / (i (t - s))) dr.

Bounding the oscillatory form uniformly in ``r`` would therefore bound the
square functional by ``C |I|``; lacunary paths make the latter grow.
"""

from __future__ import annotations

import math

import numpy as np

from ..functionals import dyadic_bmo_seminorm, half_derivative, path_square_functional
from ..spectral import PHYSICAL, SampledField, create_grid, transform
from ..stochastic import Path, lacunary_path
from .kernels import chirp_lag_sums, singular_lag_weights

FOUR_PI = 4 * math.pi


def _psi(x):
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)


def smooth_bump(rho):
    """C^infinity, equal to 1 on ``[-1, 1]`` and 0 outside ``[-2, 2]``."""
    a = np.abs(np.asarray(rho, dtype=float))
    up, down = _psi(2 - a), _psi(a - 1)
    return up / (up + down)


def cutoff_function(rho):
    """``F(rho) = rho B(rho)``, equal to ``rho`` on ``[-1, 1]``."""
    rho = np.asarray(rho, dtype=float)
    return rho * smooth_bump(rho)


def cutoff_transform(n: int = 4096, X: float = 64.0):
    """``F_hat`` on the spectral nodes of a 1-d grid; returns ``(r, F_hat, dr)``."""
    grid = create_grid(1, n, X)
    F = SampledField(grid, PHYSICAL, cutoff_function(grid.axis).astype(complex))
    Fh = transform(F, "forward").values
    return grid.zeta_axis, Fh, grid.dzeta


def cutoff_check(n: int = 4096, X: float = 64.0) -> float:
    """``int |F_hat(r)| dr`` by the Riemann sum over the spectral nodes."""
    _, Fh, dr = cutoff_transform(n, X)
    return float(np.sum(np.abs(Fh)) * dr)


def _band(dt: float, eps) -> float:
    eps = 2 * dt if eps is None else float(eps)
    if eps < 2 * dt * (1 - 1e-12):
        raise ValueError(f"band {eps} is below the grid resolution 2*dt = {2 * dt}")
    return eps


def _restrict(path: Path, interval):
    if interval is None:
        return path
    keep = (path.times >= interval[0]) & (path.times <= interval[1])
    return Path(path.times[keep], path.points[keep], dict(path.provenance))


def carbery_hofmann_forms(path: Path, r_values, interval=None, eps=None) -> np.ndarray:
    """``int_I int_I exp(r |p_t - p_s|^2 / (i (t - s))) / (4 pi i (t - s))`` for each ``r``.

    The band ``|t - s| < eps`` (default ``2 dt``) is excluded and ``1/(t - s)``
    is integrated exactly over cell pairs, as in the point-overlap forms.
    """
    p = _restrict(path, interval)
    dt = float(np.diff(p.times)[0])
    eps = _band(dt, eps)
    ones = np.ones(p.count, dtype=complex)
    D = chirp_lag_sums(ones, p.points, dt, r_values)
    W = singular_lag_weights(p.count, dt, eps)
    return dt * (D @ W) / (FOUR_PI * 1j)


def carbery_hofmann_form(path: Path, r: float, interval=None, eps=None) -> complex:
    return complex(carbery_hofmann_forms(path, [r], interval, eps)[0])


def lacunary_growth(levels=range(2, 9), r_values=(1, 4, 16, 64), samples: int = 4096,
                    interval=(0.0, 2 * math.pi)) -> list:
    """Per lacunary level: square functional, BMO surrogate, and ``max_r |form| / |I|``."""
    rows = []
    length = interval[1] - interval[0]
    for n in levels:
        path = lacunary_path(n, max(samples, 2 ** (n + 4)), interval)
        forms = carbery_hofmann_forms(path, r_values)
        rows.append({
            "level": int(n),
            "square_functional": path_square_functional(path),
            "half_derivative_bmo": dyadic_bmo_seminorm(half_derivative(path)),
            "max_form_over_length": float(np.max(np.abs(forms))) / length,
            "forms": [complex(f) for f in forms],
        })
    return rows
