"""Brownian-translate point masses under the Schrodinger flow.

The two-time kernel of ``||int A_t f_t dt||^2`` for ``f_t = alpha_t delta(x - p_t)``
is the point overlap ``-(1/(4 pi i tau)) exp(|p_t - p_s|^2 / (4 i tau))`` with
``tau = t - s``.  Along ``p_t = (2 sqrt(theta) b_t, 0)`` its expectation is
``(i a_1 / tau + a / |tau|) / (4 pi)`` with ``a_1 + i a = (1 - 2 i theta)^{-1/2}``,
so the quadratic form grows like ``(a / pi) ln(1/eps)`` for ``alpha = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fitting import DivergenceFit, fit_log_divergence
from ..functionals import TimeProfile
from ..stochastic import Path, SeedSpec, gaussian_quadratic_char, sample_brownian
from .kernels import (
    chirp_lag_sums,
    deterministic_map,
    lag_sums,
    ordered_sum,
    singular_lag_weights,
)

FOUR_PI = 4 * math.pi


def _check_band(alpha: TimeProfile, eps: float):
    if eps < 2 * alpha.dt * (1 - 1e-12):
        raise ValueError(f"cutoff {eps} is below the grid resolution 2*dt = {2 * alpha.dt}")


def _lags(n: int) -> np.ndarray:
    return np.arange(-(n - 1), n)


def thm1_path(times, seed: SeedSpec, theta: float = 0.5) -> Path:
    """``p_t = (2 sqrt(theta) b_t, 0)``; the factor 2 matches the pinned overlap."""
    b = sample_brownian(times, seed)
    pts = np.column_stack([2 * math.sqrt(theta) * b.points[:, 0], np.zeros(b.count)])
    return Path(b.times, pts, {**b.provenance, "theta": theta, "scale": 2.0})


def _overlap_lag_sums(alpha: TimeProfile, path: Path) -> np.ndarray:
    """Lag sums of ``alpha_i conj(alpha_j)`` times the regular kernel part at the nodes."""
    if path.count != alpha.count:
        raise ValueError("path must be sampled on the profile's grid")
    # lag 0 lies inside every admissible band and stays zero
    D = chirp_lag_sums(alpha.values, path.points, alpha.dt, 0.25)[0]
    return -D / (FOUR_PI * 1j)


def _form_from_lag_sums(D: np.ndarray, dt: float, eps: float, kind: str = "odd") -> complex:
    n = (D.size + 1) // 2
    W = singular_lag_weights(n, dt, eps, kind)
    return complex(dt * np.sum(D * W))


def thm1_form(alpha: TimeProfile, path: Path, eps: float) -> complex:
    """``int int_{|t-s| >= eps} alpha_t conj(alpha_s) K(t, s) ds dt`` for the point overlap.

    The ``1/tau`` factor is integrated exactly over each cell pair; the
    exponential is taken at the node lag.
    """
    _check_band(alpha, eps)
    return _form_from_lag_sums(_overlap_lag_sums(alpha, path), alpha.dt, eps)


def thm1_reduced_form(alpha: TimeProfile, eps: float) -> complex:
    """``int int_{|t-s| >= eps} alpha_t alpha_s / (4 pi i |t - s|)``."""
    _check_band(alpha, eps)
    D = lag_sums(alpha.values, conjugate=False)
    return _form_from_lag_sums(D, alpha.dt, eps, "abs") / (FOUR_PI * 1j)


def thm1_expected_form(alpha: TimeProfile, eps: float, theta: float = 0.5) -> complex:
    """Exact expectation of :func:`thm1_form` over the Brownian path, same quadrature."""
    _check_band(alpha, eps)
    c = gaussian_quadratic_char(theta)
    n = alpha.count
    D = lag_sums(alpha.values)
    sgn = np.sign(_lags(n))
    expected = -(c.real - 1j * sgn * c.imag) / (FOUR_PI * 1j)
    return _form_from_lag_sums(D * expected, alpha.dt, eps)


def interval_singular_integral(eps: float, length: float = 2.0) -> float:
    """``S(eps) = int int_{[0,L]^2, |t-s| > eps} dt ds / |t - s|``."""
    if not 0 < eps < length:
        raise ValueError("need 0 < eps < length")
    return 2 * (length * math.log(length / eps) - (length - eps))


@dataclass(frozen=True)
class LadderPoint:
    parameter: float
    mean: complex
    stderr_re: float
    stderr_im: float
    replicas: int

    @property
    def modulus(self) -> float:
        return abs(self.mean)

    @property
    def stderr(self) -> float:
        return math.hypot(self.stderr_re, self.stderr_im)


def thm1_ladder(eps_ladder, replicas: int = 200, seed: int = 0, theta: float = 0.5,
                cells: int = 2000, workers: int = 1):
    """Monte Carlo mean of :func:`thm1_form` with ``alpha = 1`` on ``[-1, 1]``.

    Each replica draws one path and evaluates every cutoff of the ladder from
    the same lag sums.  Returns the ladder points and the fit of the modulus
    of the mean against ``ln(1/eps)``.
    """
    eps_ladder = [float(e) for e in eps_ladder]
    alpha = TimeProfile.from_function(lambda t: np.ones_like(t), -1.0, 1.0, cells)
    for e in eps_ladder:
        _check_band(alpha, e)
    if replicas < 2:
        raise ValueError("need at least two replicas")
    weights = [alpha.dt * singular_lag_weights(cells, alpha.dt, e) for e in eps_ladder]
    root = SeedSpec(seed)

    def one(k):
        path = thm1_path(alpha.times, root.child(k), theta)
        D = _overlap_lag_sums(alpha, path)
        return np.array([np.sum(D * w) for w in weights])

    samples = deterministic_map(one, range(replicas), workers)
    mean = ordered_sum(samples) / replicas
    sq = ordered_sum([np.abs(s.real - mean.real) ** 2 + 1j * np.abs(s.imag - mean.imag) ** 2
                      for s in samples]) / (replicas - 1)
    points = [LadderPoint(e, complex(m), math.sqrt(v.real / replicas), math.sqrt(v.imag / replicas),
                          replicas) for e, m, v in zip(eps_ladder, mean, sq)]
    fit = None
    if len(points) >= 4:
        fit = fit_log_divergence([p.parameter for p in points], [p.modulus for p in points])
    return points, fit


def expected_slope(theta: float = 0.5) -> float:
    """Slope of ``|E form|`` against ``ln(1/eps)`` for ``alpha = 1`` on ``[-1, 1]``.

    ``E form = (a / 4 pi) S(eps)`` and ``dS / d ln(1/eps) -> 4``.
    """
    return gaussian_quadratic_char(theta).imag / math.pi


__all__ = [
    "DivergenceFit",
    "LadderPoint",
    "expected_slope",
    "interval_singular_integral",
    "thm1_expected_form",
    "thm1_form",
    "thm1_ladder",
    "thm1_path",
    "thm1_reduced_form",
]
