"""Gaussian-profile translates along ``p_t = (2t, 2 sqrt(theta) b_t)``.

First approach: the two-time kernel is the closed-form overlap of
:func:`~bmolab.propagators.gaussian_overlap_schrodinger`.  Its expectation has
the leading term

    -16 e^{-2} u^2 e^{-iu} (a_1 - i a sgn u) / (64 pi (2 - iu)^3),   u = t - s,

whose quadratic form against ``alpha_t = e^{it}`` diverges like ``ln N``.

Second approach: the spectral density ``k(omega, zeta)`` of the averaged
kernel, whose weighted integral diverges logarithmically at
``zeta = (1/2, 0)`` when ``omega = 1/4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fitting import DivergenceFit, fit_log_divergence
from ..functionals import TimeProfile
from ..propagators import gaussian_overlap_schrodinger, overlap_polynomial
from ..stochastic import Path, SeedSpec, gaussian_quadratic_char, sample_brownian
from .kernels import deterministic_map, ordered_sum, toeplitz_lag_sums

OVERLAP_PREFACTOR = 1.0 / (64 * math.pi)
SINGULAR_POINT = (0.5, 0.0)


def thm2_path(times, seed: SeedSpec, theta: float = 0.5) -> Path:
    b = sample_brownian(times, seed)
    t = np.asarray(b.times)
    pts = np.column_stack([2 * t, 2 * math.sqrt(theta) * b.points[:, 0]])
    return Path(t, pts, {**b.provenance, "theta": theta, "scale": 2.0})


def _point_at(path: Path, t: float) -> np.ndarray:
    return np.array([np.interp(t, path.times, col) for col in path.points.T])


def thm2_kernel(t: float, s: float, path: Path) -> complex:
    """``K(t, s)``: overlap of the profiles centred at ``p_t`` and ``p_s``."""
    return complex(gaussian_overlap_schrodinger(t, s, _point_at(path, t), _point_at(path, s)))


def thm2_expected_kernel(u, theta: float = 0.5):
    """Leading term of ``E K(t, s)`` as a function of ``u = t - s``."""
    u = np.asarray(u, dtype=float)
    c = gaussian_quadratic_char(theta)
    phase = c.real - 1j * c.imag * np.sign(u)
    return -16 * math.exp(-2) * u**2 * np.exp(-1j * u) * phase * OVERLAP_PREFACTOR / (2 - 1j * u) ** 3


def thm2_exact_expected_kernel(u, theta: float = 0.5):
    """Exact ``E K(t, s)``, averaging the closed form over ``b_t - b_s = sqrt|u| gamma``.

    With ``w = A + B gamma^2`` the Gaussian moments of ``gamma^{2k} e^{-B gamma^2}``
    are ``(1, 1, 3) * (1 + 2B)^{-1/2 - k}``.
    """
    u = np.asarray(u, dtype=float)
    beta = 2 - 1j * u
    A = u**2 / beta
    B = theta * np.abs(u) / beta
    c = 1 + 2 * B
    m0, m2, m4 = c**-0.5, c**-1.5, 3 * c**-2.5
    ew = A * m0 + B * m2
    ew2 = A * A * m0 + 2 * A * B * m2 + B * B * m4
    return (16 * ew2 - 64 * ew + 32 * m0) * np.exp(-A) * OVERLAP_PREFACTOR / beta**3


def expected_kernel_envelope(u, theta: float = 0.5):
    """``(16 e^{-2} / 64 pi) |a_1 + i a| / |u|``, the large-``|u|`` modulus."""
    return 16 * math.exp(-2) * OVERLAP_PREFACTOR * abs(gaussian_quadratic_char(theta)) / np.abs(u)


def _resonant_profile(N: float, dt_max: float, frequency: float) -> TimeProfile:
    cells = int(math.ceil(2 * N / dt_max))
    norm = 1.0 / math.sqrt(2 * N)
    return TimeProfile.from_function(lambda t: norm * np.exp(1j * frequency * t), -N, N, cells)


def toeplitz_form(alpha: TimeProfile, kernel, band: int = 2) -> complex:
    """``dt^2 sum_{|i-j| >= band} alpha_i conj(alpha_j) L((i-j) dt)`` for a lag kernel ``L``."""
    n = alpha.count
    m = np.arange(-(n - 1), n)
    L = kernel(m * alpha.dt)
    L = np.where(np.abs(m) >= band, L, 0.0)
    return complex(alpha.dt**2 * np.sum(toeplitz_lag_sums(alpha.values) * L))


@dataclass(frozen=True)
class BlowupPoint:
    N: float
    value: complex
    norm2: float

    @property
    def modulus(self) -> float:
        return abs(self.value)


def thm2_blowup(N_ladder, theta: float = 0.5, dt_max: float = 0.1, frequency: float = 1.0,
                kernel: str = "leading", workers: int = 1):
    """Quadratic form of ``E K`` against ``alpha_t = e^{i f t} / sqrt(2N)`` on ``[-N, N]``.

    ``kernel`` selects the leading term (``"leading"``) or the exact
    expectation (``"exact"``).  Returns the ladder and the fit of the modulus
    against ``ln N``.
    """
    N_ladder = [float(N) for N in N_ladder]
    if len(N_ladder) < 4:
        raise ValueError("the N ladder needs at least 4 points")
    if not dt_max > 0 or dt_max > 0.1:
        raise ValueError("time step must lie in (0, 0.1]")
    func = {"leading": thm2_expected_kernel, "exact": thm2_exact_expected_kernel}[kernel]

    def one(N):
        alpha = _resonant_profile(N, dt_max, frequency)
        return BlowupPoint(N, toeplitz_form(alpha, lambda u: func(u, theta)), alpha.norm2() ** 2)

    points = deterministic_map(one, N_ladder, workers)
    fit = fit_log_divergence([p.N for p in points], [p.modulus for p in points], against="log")
    return points, fit


def thm2_blowup_mc(N: float, replicas: int, seed: int = 0, theta: float = 0.5,
                   dt_max: float = 0.1, workers: int = 1):
    """Monte Carlo mean of the raw-kernel quadratic form over Brownian paths.

    Returns ``(mean, stderr)``; compare with ``thm2_blowup(..., kernel="exact")``.
    """
    alpha = _resonant_profile(N, dt_max, 1.0)
    n = alpha.count
    i, j = np.indices((n, n))
    keep = np.abs(i - j) >= 2
    t = alpha.times
    weights = np.outer(alpha.values, np.conj(alpha.values)) * keep * alpha.dt**2
    root = SeedSpec(seed)

    def one(k):
        path = thm2_path(t, root.child(k), theta)
        p = path.points
        K = gaussian_overlap_schrodinger(t[:, None], t[None, :], p[:, None, :], p[None, :, :])
        return complex(np.sum(weights * K))

    vals = np.array(deterministic_map(one, range(replicas), workers))
    mean = complex(ordered_sum(list(vals))) / replicas
    se = math.hypot(np.std(vals.real, ddof=1), np.std(vals.imag, ddof=1)) / math.sqrt(replicas)
    return mean, se


# --- spectral density -------------------------------------------------------

def profile_transform_sq(zeta2):
    """``|g_hat|^2`` for ``g_hat = |zeta|^2 exp(-|zeta|^2)``."""
    return zeta2**2 * np.exp(-2 * zeta2)


def schrodinger_spectral_density(omega, zeta):
    """``k(omega, zeta) = 4 z2^2 / (4 (omega + |zeta|^2 - z1)^2 + z2^4)``; trailing axis 2."""
    z = np.asarray(zeta, dtype=float)
    z1, z2 = z[..., 0], z[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = 4 * z2**2 / (4 * (omega + z1**2 + z2**2 - z1) ** 2 + z2**4)
    return np.where(z2 == 0, 0.0, k)


def density_lower_bound(zeta):
    """``z2^2 / (2 |zeta - (1/2, 0)|^4)``, a lower bound for ``k(1/4, zeta)`` near the singularity."""
    z = np.asarray(zeta, dtype=float)
    r2 = (z[..., 0] - SINGULAR_POINT[0]) ** 2 + z[..., 1] ** 2
    return z[..., 1] ** 2 / (2 * r2**2)


def lhat_truncated(omega: float, rho: float, nodes_per_unit: int = 12, angles: int = 256,
                   outer: float = 8.0) -> float:
    """``int k(omega, zeta) |g_hat|^2`` over the plane minus the disc of radius ``rho`` at (1/2, 0).

    Polar coordinates about the singular point with ``u = ln r``: Gauss-Legendre
    in ``u`` on ``[ln rho, ln outer]`` and the periodic trapezoid rule in angle.
    The weight is below ``e^{-90}`` beyond ``outer = 8``.
    """
    if not rho > 0:
        raise ValueError("exclusion radius must be positive")
    if not rho < outer:
        raise ValueError("exclusion radius must be smaller than the outer radius")
    lo, hi = math.log(rho), math.log(outer)
    panels = max(1, int(math.ceil(hi - lo)))
    x, w = np.polynomial.legendre.leggauss(nodes_per_unit)
    edges = np.linspace(lo, hi, panels + 1)
    u = np.concatenate([0.5 * (b - a) * x + 0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])])
    wu = np.concatenate([0.5 * (b - a) * w for a, b in zip(edges[:-1], edges[1:])])
    phi = 2 * math.pi * np.arange(angles) / angles
    r = np.exp(u)[:, None]
    z = np.stack([SINGULAR_POINT[0] + r * np.cos(phi), r * np.sin(phi)], axis=-1)
    integrand = schrodinger_spectral_density(omega, z) * profile_transform_sq(np.sum(z * z, axis=-1))
    # dA = r dr dphi = r^2 du dphi
    return float(np.sum(wu[:, None] * r**2 * integrand) * (2 * math.pi / angles))


def lhat_divergence_slope(angles: int = 4096) -> float:
    """Slope of ``lhat_truncated(1/4, rho)`` against ``ln(1/rho)``.

    Near (1/2, 0) at ``omega = 1/4`` the density is ``4 sin^2 phi / (r^2 (4 + sin^4 phi))``,
    so the slope is ``|g_hat(1/2, 0)|^2 int 4 sin^2 / (4 + sin^4) dphi``.
    """
    phi = 2 * math.pi * np.arange(angles) / angles
    s2 = np.sin(phi) ** 2
    ang = float(np.mean(4 * s2 / (4 + s2**2))) * 2 * math.pi
    return ang * float(profile_transform_sq(0.25))


def lhat_ladder(rho_ladder, omega: float = 0.25, **kw):
    rho_ladder = [float(r) for r in rho_ladder]
    values = [lhat_truncated(omega, r, **kw) for r in rho_ladder]
    return values, fit_log_divergence(rho_ladder, values)
