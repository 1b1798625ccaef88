"""Fourfold pairing of the wave kernel against translated bumps.

With ``f_t = alpha_t phi(x - p_t)`` and ``phi`` the unit-mass Gaussian of width
``sigma``, the spatial pairing

    int int K_T(x - y) phi(x - p) phi(y - q) dx dy

is ``int_T^inf rho * mean_{|z| = rho} psi(z - (p - q)) drho`` where ``psi`` is
the Gaussian of variance ``2 sigma^2``.  That spherical mean has the closed form
``(2 pi s^2)^{-3/2} exp(-(rho^2 + D^2)/(2 s^2)) sinh(rho D / s^2) / (rho D / s^2)``.
Since ``sup |K_T| = 1/(4 pi T)`` the pairing never exceeds ``1/(4 pi T)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..functionals import TimeProfile
from ..propagators import wave_spatial_kernel
from ..spectral import create_grid
from ..stochastic import Path, SeedSpec

_GL = np.polynomial.legendre.leggauss(64)


def _shc(x):
    """``sinh(x) / x`` times ``exp(-x)``, stable for large and small ``x``."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-4
    xs = np.where(small, 1.0, x)
    big = -np.expm1(-2 * xs) / (2 * xs)
    return np.where(small, np.exp(-x) * (1 + x * x / 6), big)


def bump_pairing(T, D, sigma: float, panels: int = 8) -> np.ndarray:
    """``int int K_T(x - y) phi(x - p) phi(y - q)`` for ``|p - q| = D``; vectorized."""
    T, D = np.broadcast_arrays(np.abs(np.asarray(T, dtype=float)), np.asarray(D, dtype=float))
    s2 = 2 * sigma * sigma
    s = math.sqrt(s2)
    # the integrand is negligible beyond D + 12 s
    hi = np.maximum(T, D + 12 * s)
    x, w = _GL
    total = np.zeros(T.shape)
    for k in range(panels):
        a = T + (hi - T) * k / panels
        b = T + (hi - T) * (k + 1) / panels
        rho = 0.5 * (b - a)[..., None] * x + 0.5 * (a + b)[..., None]
        Dk = D[..., None]
        arg = rho * Dk / s2
        # exp(-(rho - D)^2 / 2s^2) * sinh(arg)/arg * exp(-arg), regrouped
        mean = (2 * math.pi * s2) ** -1.5 * np.exp(-((rho - Dk) ** 2) / (2 * s2)) * _shc(arg)
        total += np.sum(w * rho * mean, axis=-1) * 0.5 * (b - a)
    return total


def bump_pairing_grid(T: float, D: float, sigma: float, n: int = 64, X: float = 4.0) -> float:
    """Coarse grid oracle for :func:`bump_pairing` by direct 3-d summation."""
    grid = create_grid(3, n, X)
    x1, x2, x3 = grid.coords()
    psi = (2 * math.pi * 2 * sigma**2) ** -1.5 * np.exp(
        -((x1 - D) ** 2 + x2**2 + x3**2) / (4 * sigma**2))
    pts = np.stack(np.broadcast_arrays(x1, x2, x3), axis=-1)
    r = np.linalg.norm(pts, axis=-1)
    K = np.where(r > 0, wave_spatial_kernel(T, np.where(r > 0, r, 1.0)), 0.0)
    return float(np.sum(K * psi) * grid.physical_weight())


@dataclass(frozen=True)
class BumpFamily:
    """``f_t = alpha_t phi(x - p_t)`` with ``alpha`` on cells inside ``t > 0``."""

    alpha: TimeProfile
    path: Path
    sigma: float = 0.1

    def __post_init__(self):
        if self.path.count != self.alpha.count or self.path.d != 3:
            raise ValueError("path must be 3-d and sampled on the profile's grid")


@dataclass(frozen=True)
class Lemma6Result:
    value: float
    reduced_bound: float
    hardy_bound: float
    norm2: float

    @property
    def ratio(self) -> float:
        return self.value / self.norm2 if self.norm2 > 0 else 0.0


def _pair_matrix(tsum, p, sigma):
    D = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
    return bump_pairing(tsum, D, sigma)


def lemma6_value(family: BumpFamily) -> Lemma6Result:
    """``int_0^inf int_0^inf int int K_{s+t}(x - y) f_t(x) f_s(y)`` and its two upper bounds.

    ``reduced_bound`` replaces the pairing by ``1/(4 pi (s+t))`` with ``|alpha|``;
    ``hardy_bound`` is ``||alpha||^2 / pi``.
    """
    a = family.alpha
    if a.start < 0:
        raise ValueError("profiles must be supported in t > 0")
    t = a.times
    tsum = t[:, None] + t[None, :]
    P = _pair_matrix(tsum, family.path.points, family.sigma)
    v = a.values
    w = a.dt**2
    value = float(np.real(w * v @ P @ np.conj(v)))
    av = np.abs(v)
    reduced = float(w * av @ (1 / (4 * math.pi * tsum)) @ av)
    norm2 = a.norm2() ** 2
    return Lemma6Result(value, reduced, norm2 / math.pi, norm2)


def lemma6_check(families) -> float:
    """Max over the families of (fourfold value) / ``||alpha||^2``."""
    best = 0.0
    for fam in families:
        best = max(best, lemma6_value(fam).ratio)
    return best


def random_family(seed: SeedSpec, cells: int = 64, T: float = 1.0, sigma: float = 0.1) -> BumpFamily:
    """Random nonnegative ``alpha`` on ``(0, T]`` and a random-walk path in R^3."""
    rng = seed.generator()
    alpha = TimeProfile(0.0, T / cells, rng.random(cells) * (rng.random(cells) < 0.7))
    steps = rng.standard_normal((cells, 3)) * math.sqrt(T / cells) * rng.uniform(0, 3)
    path = Path(alpha.times, np.cumsum(steps, axis=0), seed.provenance())
    return BumpFamily(alpha, path, sigma)


def quadrant_split(alpha: TimeProfile, path: Path, sigma: float = 0.1) -> dict:
    """``I_1 .. I_4`` of ``int int K_{s-t}(x - y) f_t(x) f_s(y)`` by sign of ``(t, s)``.

    ``I_1``: ``t, s > 0``; ``I_2``: ``t > 0 > s``; ``I_3``: ``s > 0 > t``; ``I_4``: both negative.
    Also returns the Hardy-type bound ``||alpha||^2 / pi`` that caps ``|I_2|`` and ``|I_3|``.
    """
    t = alpha.times
    P = _pair_matrix(t[None, :] - t[:, None], path.points, sigma)
    v = alpha.values
    contrib = alpha.dt**2 * np.outer(v, np.conj(v)) * P
    pos = t > 0
    q = {
        "I1": contrib[np.ix_(pos, pos)].sum(),
        "I2": contrib[np.ix_(pos, ~pos)].sum(),
        "I3": contrib[np.ix_(~pos, pos)].sum(),
        "I4": contrib[np.ix_(~pos, ~pos)].sum(),
    }
    out = {k: float(np.real(v)) for k, v in q.items()}
    out["cross_bound"] = alpha.norm2() ** 2 / math.pi
    return out
