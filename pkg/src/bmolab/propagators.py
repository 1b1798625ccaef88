"""Schrodinger, wave and cosine-resolvent propagators plus closed-form overlaps.

All three propagators are Fourier multipliers on a :class:`~bmolab.spectral.Grid`:

* ``A_t``: ``exp(i t |zeta|^2)``
* ``B_t``: ``sin(t |zeta|) / |zeta|``, value ``t`` at ``zeta = 0``
* ``C_t``: ``cos(t |zeta|) / (|zeta|^2 + eps^2)``

The overlap formulas are written in the pinned transform convention of
:mod:`bmolab.spectral`; see ``data/constants.json`` for the oracle values of
their prefactors.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .spectral import (
    PHYSICAL,
    Grid,
    SampledField,
    apply_multiplier,
    gaussian_closed_form,
    transform,
)

__all__ = [
    "schrodinger_multiplier",
    "schrodinger_evolve",
    "wave_multiplier",
    "wave_evolve",
    "wave_velocity",
    "wave_energy",
    "cosine_resolvent_multiplier",
    "cosine_resolvent",
    "wave_spatial_kernel",
    "wave_kernel_sup",
    "regularized_kernel_transform",
    "radial_kernel_convolution",
    "composition_identity_check",
    "overlap_polynomial",
    "point_overlap_schrodinger",
    "gaussian_overlap_schrodinger",
]


def _check_physical(f: SampledField):
    if f.domain != PHYSICAL:
        raise ValueError("propagators act on physical-domain fields")


def _evolve(f: SampledField, mult: np.ndarray) -> SampledField:
    _check_physical(f)
    return transform(apply_multiplier(transform(f, "forward"), mult), "inverse")


def schrodinger_multiplier(grid: Grid, t: float) -> np.ndarray:
    return np.exp(1j * t * grid.zeta2)


def schrodinger_evolve(f: SampledField, t: float) -> SampledField:
    return _evolve(f, schrodinger_multiplier(f.grid, t))


def _abs_zeta(grid: Grid) -> np.ndarray:
    return np.sqrt(grid.zeta2)


def wave_multiplier(grid: Grid, t: float) -> np.ndarray:
    # t * sinc(t k / pi) = sin(t k)/k with the limit t at k = 0
    return t * np.sinc(t * _abs_zeta(grid) / math.pi)


def _require_3d(f: SampledField):
    if f.grid.d != 3:
        raise ValueError("the wave propagators are defined on d = 3 grids")


def wave_evolve(f: SampledField, t: float) -> SampledField:
    _require_3d(f)
    return _evolve(f, wave_multiplier(f.grid, t))


def wave_velocity(f: SampledField, t: float) -> SampledField:
    """Time derivative of ``B_t f``: the multiplier ``cos(t |zeta|)``."""
    _require_3d(f)
    return _evolve(f, np.cos(t * _abs_zeta(f.grid)))


def wave_energy(f: SampledField, t: float) -> float:
    """``||d_t u||^2 + ||grad u||^2`` for ``u = B_t f``, computed spectrally."""
    _require_3d(f)
    fh = transform(f, "forward").values
    k = _abs_zeta(f.grid)
    w = f.grid.spectral_weight()
    vel = np.cos(t * k) * fh
    pos = wave_multiplier(f.grid, t) * fh
    grad = sum(np.sum(np.abs(z * pos) ** 2) for z in f.grid.zeta_coords())
    return float(w * (np.sum(np.abs(vel) ** 2) + grad))


def cosine_resolvent_multiplier(k: np.ndarray, t: float, eps: float) -> np.ndarray:
    return np.cos(t * k) / (k * k + eps * eps)


def cosine_resolvent(f: SampledField, t: float, eps: float) -> SampledField:
    """``C_t f`` with the regularized denominator ``|zeta|^2 + eps^2`` at every node.

    ``eps`` only matters at ``zeta = 0`` in practice; pass a value much smaller
    than the lowest nonzero wavenumber ``pi / X``.
    """
    _require_3d(f)
    if t == 0:
        raise ValueError("C_t needs t != 0")
    if not eps > 0:
        raise ValueError("zero-mode regularization eps must be positive")
    return _evolve(f, cosine_resolvent_multiplier(_abs_zeta(f.grid), t, eps))


def wave_spatial_kernel(t: float, x) -> np.ndarray:
    """``K_t(x) = 1/(4 pi |x|)`` for ``|x| >= |t|``, else 0.

    ``x`` is an array of points with trailing dimension 3, or of radii.
    """
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1) if x.ndim and x.shape[-1] == 3 else np.abs(x)
    if t == 0 and np.any(r == 0):
        raise ValueError("K_0 is undefined at x = 0")
    with np.errstate(divide="ignore"):
        val = 1.0 / (4 * math.pi * r)
    return np.where(r >= abs(t), val, 0.0)


def wave_kernel_sup(t: float) -> float:
    """``sup |K_t|``, which is the L1 -> L1 norm of ``C_t``."""
    if t == 0:
        raise ValueError("K_0 is unbounded")
    return 1.0 / (4 * math.pi * abs(t))


def regularized_kernel_transform(
    t: float, k: float, eps: float, damping: str = "exponential"
) -> float:
    """Transform of ``K_t(x) D_eps(|x|)`` at ``|zeta| = k`` by radial quadrature.

    ``D_eps(r)`` is ``exp(-eps r)`` (``damping="exponential"``) or
    ``exp(-eps r^2)`` (``"gaussian"``).  After the angular integration the
    transform is ``(1/k) int_{|t|}^inf D_eps(r) sin(k r) dr``, done with the
    QUADPACK Fourier-integral rule.  Tends to ``cos(t k)/k^2`` as eps -> 0.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if damping == "exponential":
        damp = lambda r: math.exp(-eps * r)  # noqa: E731
    elif damping == "gaussian":
        damp = lambda r: math.exp(-eps * r * r)  # noqa: E731
    else:
        raise ValueError(f"unknown damping {damping!r}")
    val, _ = integrate.quad(damp, abs(t), np.inf, weight="sin", wvar=k, limlst=200)
    return val / k


def radial_kernel_convolution(profile, t: float, R: float, support: float) -> float:
    """``(K_t * f)(x)`` at ``|x| = R`` for a radial ``f(x) = profile(|x|)``.

    Uses the spherical-mean formula
    ``(1/(2R)) int_{|t|}^inf int_{|R-rho|}^{R+rho} profile(s) s ds drho``,
    with ``profile`` vanishing beyond ``support``.
    """
    if t == 0:
        raise ValueError("the L1-kernel path needs t != 0")
    tt = abs(t)
    if R == 0:
        # spherical mean at the origin is profile(rho)
        val, _ = integrate.quad(lambda rho: rho * profile(rho), tt, max(tt, support),
                                epsabs=0, epsrel=1e-11, limit=200)
        return val

    def inner(rho):
        lo, hi = abs(R - rho), min(R + rho, support)
        if hi <= lo:
            return 0.0
        v, _ = integrate.quad(lambda s: profile(s) * s, lo, hi,
                              epsabs=0, epsrel=1e-11, limit=200)
        return v

    upper = R + support
    if upper <= tt:
        return 0.0
    pts = [p for p in (abs(R - support), R + support) if tt < p < upper]
    val, _ = integrate.quad(inner, tt, upper, points=pts or None,
                            epsabs=1e-14, epsrel=1e-10, limit=200)
    return val / (2 * R)


def composition_identity_check(s: float, t: float, grid: Grid) -> float:
    """Max multiplier-level deviation of ``B_s B_t = (C_{s+t} - C_{s-t}) / 2``.

    Both sides are divided by ``|zeta|^2``; at ``zeta = 0`` both take their
    limit ``s t``.
    """
    if grid.d != 3:
        raise ValueError("composition identity is checked on d = 3 grids")
    k = _abs_zeta(grid)
    lhs = wave_multiplier(grid, t) * wave_multiplier(grid, s)
    nz = k > 0
    rhs = np.full(k.shape, s * t, dtype=float)
    kk = k[nz]
    rhs[nz] = (np.cos((s - t) * kk) - np.cos((s + t) * kk)) / (2 * kk * kk)
    return float(np.max(np.abs(lhs - rhs)))


def overlap_polynomial(w):
    """``P(w) = 16 w^2 - 64 w + 32``."""
    return 16 * w * w - 64 * w + 32


def point_overlap_schrodinger(t: float, p, q, eps: float = 0.0) -> complex:
    """``int (A_t delta_eps)(x - p) conj(delta_eps(x - q)) dx`` in R^2.

    ``delta_eps`` has transform ``exp(-eps |zeta|^2)``; ``eps = 0`` is the
    point mass, giving ``-(1/(4 pi i t)) exp(|p - q|^2 / (4 i t))``.
    """
    if t == 0:
        raise ValueError("point-mass overlap is singular at t = 0")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    d = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    evaluate = gaussian_closed_form(2 * eps - 1j * t, 2)
    return complex(evaluate(d[0], d[1]))


def gaussian_overlap_schrodinger(t, s, p, q):
    """``int (A_{t-s} g)(x - p) conj(g(x - q)) dx`` for ``g_hat = |zeta|^2 exp(-|zeta|^2)``.

    Closed form ``P(w) exp(-w) / (64 pi beta^3)`` with ``beta = 2 - i(t - s)``
    and ``w = |q - p|^2 / (4 beta)``.  Vectorized over ``t``, ``s`` and over
    the leading axes of ``p``, ``q`` (trailing axis of length 2).
    """
    beta = 2 - 1j * (np.asarray(t, dtype=float) - np.asarray(s, dtype=float))
    diff = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    u = np.sum(diff * diff, axis=-1)
    w = u / (4 * beta)
    return overlap_polynomial(w) * np.exp(-w) / (64 * math.pi * beta**3)
