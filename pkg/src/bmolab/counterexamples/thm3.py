"""Wave-equation densities on the cone, the box test function and its transform.

In cylindrical coordinates ``z = zeta_1``, ``r = |(zeta_2, zeta_3)|`` the density
``k_1(0, zeta) = 4 r^2 / (4 (|zeta| - z)^2 + r^4)`` behaves like
``4 z^2 / (r^2 (1 + z^2))`` near the axis, so its integral over the cone
``r <= z <= 1`` diverges logarithmically at ``r = 0``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from ..fitting import fit_log_divergence
from ..spectral import PHYSICAL, Grid, SampledField
from ..stochastic import SeedSpec

QUAD_RTOL = 1e-9


def _transverse2(zeta):
    z = np.asarray(zeta, dtype=float)
    return z[..., 0], z[..., 1] ** 2 + z[..., 2] ** 2


def wave_spectral_density(omega, zeta):
    """``(k_1, k_2)`` at ``zeta`` (trailing axis 3).

    ``k_{1,2} = 4 r^2 / (4 (omega - zeta_1 +- |zeta|)^2 + r^4)`` with ``r^2 = zeta_2^2 + zeta_3^2``.
    """
    z1, r2 = _transverse2(zeta)
    mod = np.sqrt(z1**2 + r2)
    # omega - z1 + |zeta| written without cancellation when omega = 0, z1 > 0
    plus = np.where(z1 > 0, omega + r2 / (mod + np.abs(z1)), omega - z1 + mod)
    minus = omega - z1 - mod
    with np.errstate(divide="ignore", invalid="ignore"):
        k1 = np.where(r2 == 0, 0.0, 4 * r2 / (4 * plus**2 + r2**2))
        k2 = np.where(r2 == 0, 0.0, 4 * r2 / (4 * minus**2 + r2**2))
    return k1, k2


def cone_density(z, r):
    """``k_1(0, (z, r, 0))`` for ``0 < r``, ``z > 0``, evaluated stably."""
    gap = r * r / (math.hypot(z, r) + z)
    return 4 * r * r / (4 * gap * gap + r**4)


def cone_lower_bound(z, r):
    """``4 z^2 / (r^2 (4 + z^2))``, from ``|zeta| - z <= r^2 / z``."""
    return 4 * z * z / (r * r * (4 + z * z))


def _check_eps(eps):
    if not 0 < eps < 1:
        raise ValueError("the inner cutoff must lie in (0, 1)")


def cone_integral(eps: float) -> float:
    """``int_{z=eps}^1 int_{r=eps}^z k_1(0, zeta) 2 pi r dr dz`` by nested adaptive quadrature."""
    _check_eps(eps)

    def inner(z):
        v, _ = integrate.quad(lambda r: cone_density(z, r) * 2 * math.pi * r, eps, z,
                              epsabs=0, epsrel=QUAD_RTOL, limit=200)
        return v

    val, _ = integrate.quad(inner, eps, 1.0, epsabs=0, epsrel=QUAD_RTOL, limit=200)
    return val


def comparison_integral(eps: float) -> float:
    """``int_eps^1 8 pi z^2 / (4 + z^2) ln(z / eps) dz``, the integrated lower bound."""
    _check_eps(eps)
    val, _ = integrate.quad(lambda z: 8 * math.pi * z * z / (4 + z * z) * math.log(z / eps),
                            eps, 1.0, epsabs=0, epsrel=QUAD_RTOL, limit=200)
    return val


def comparison_slope() -> float:
    """``int_0^1 8 pi z^2 / (4 + z^2) dz``, the slope of :func:`comparison_integral`."""
    val, _ = integrate.quad(lambda z: 8 * math.pi * z * z / (4 + z * z), 0, 1,
                            epsabs=0, epsrel=1e-12)
    return val


def cone_slope() -> float:
    """``int_0^1 8 pi z^2 / (1 + z^2) dz``, the slope of :func:`cone_integral`.

    The ``eps``-derivative only sees the density at ``r = eps``, where
    ``|zeta| - z ~ r^2 / (2z)``.
    """
    val, _ = integrate.quad(lambda z: 8 * math.pi * z * z / (1 + z * z), 0, 1,
                            epsabs=0, epsrel=1e-12)
    return val


def cone_ladder(eps_ladder):
    eps_ladder = [float(e) for e in eps_ladder]
    values = [cone_integral(e) for e in eps_ladder]
    return values, fit_log_divergence(eps_ladder, values)


# --- box test function ------------------------------------------------------

def _box_factor(x, odd: bool):
    ax = np.abs(x)
    h = np.where(ax < 1, 1.0, np.where(ax == 1, 0.5, 0.0))
    return np.sign(x) * h if odd else h


def box_transform(zeta):
    """Closed form ``-8i (1 - cos z1) sin z2 sin z3 / (z1 z2 z3)`` with limits filled in."""
    z = np.asarray(zeta, dtype=float)
    z1, z2, z3 = z[..., 0], z[..., 1], z[..., 2]
    # (1 - cos x)/x = (x/2) sinc^2(x / 2pi); sin x / x = sinc(x / pi)
    odd = 0.5 * z1 * np.sinc(z1 / (2 * math.pi)) ** 2
    return -8j * odd * np.sinc(z2 / math.pi) * np.sinc(z3 / math.pi)


def box_test_function(grid: Grid):
    """Sampled ``g = sign(x_1)`` on ``[-1, 1]^3`` and the closed-form transform.

    Nodes on the faces of the box get weight 1/2 (the trapezoid rule), and
    the plane ``x_1 = 0`` gets 0, so the sampled field is exactly odd in ``x_1``.
    """
    if grid.d != 3:
        raise ValueError("the box function lives on d = 3 grids")
    if grid.X < 2:
        raise ValueError("grid must span at least [-2, 2)^3")
    x = grid.axis
    f1, f = _box_factor(x, True), _box_factor(x, False)
    vals = f1[:, None, None] * f[None, :, None] * f[None, None, :]
    return SampledField(grid, PHYSICAL, vals.astype(complex)), box_transform


def sample_cone(count: int, seed: SeedSpec, zmin: float = 0.05):
    """Uniform samples of ``U = {r <= z <= 1}`` restricted to ``z >= zmin``."""
    rng = seed.generator()
    out = np.empty((0, 3))
    while out.shape[0] < count:
        m = 2 * (count - out.shape[0]) + 16
        # the volume element is z^2, so z has density ~ z^2 on [zmin, 1]
        u = rng.random(m)
        z = (zmin**3 + u * (1 - zmin**3)) ** (1 / 3)
        r = z * np.sqrt(rng.random(m))
        phi = 2 * math.pi * rng.random(m)
        out = np.vstack([out, np.column_stack([z, r * np.cos(phi), r * np.sin(phi)])])
    return out[:count]


def box_min_ratio(count: int = 10_000, seed: SeedSpec = SeedSpec(0), zmin: float = 0.05) -> float:
    """``min |g_hat|^2 / |zeta|^2`` over random points of the cone."""
    pts = sample_cone(count, seed, zmin)
    return float(np.min(np.abs(box_transform(pts)) ** 2 / np.sum(pts * pts, axis=-1)))
