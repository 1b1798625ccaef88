"""Two-time kernels on cell grids: product-integration weights and quadratic forms.

Time profiles live on cells of width ``dt`` with values at the midpoints.  For
a pair of cells at lag ``m`` the difference ``tau = t - s`` has the triangular
density ``dt * tri(tau/dt - m)``, so the singular factor ``1/tau`` (or
``1/|tau|``) can be integrated exactly over each cell pair, with the band
``|tau| < eps`` removed.  The remaining smooth or random factor is sampled at
the node lag.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np


def singular_lag_weights(count: int, dt: float, eps: float, kind: str = "odd") -> np.ndarray:
    """Weights ``W[m + count - 1]`` for lags ``m = -(count-1) .. count-1``.

    ``W_m = int tri(tau/dt - m) h(tau) 1{|tau| >= eps} dtau`` with
    ``h = 1/tau`` (``kind="odd"``) or ``1/|tau|`` (``kind="abs"``).  Multiply
    by ``dt`` for the cell-pair integral.
    """
    if kind not in ("odd", "abs"):
        raise ValueError(f"unknown kind {kind!r}")
    if not eps > 0:
        raise ValueError("the singular band radius must be positive")
    W = np.zeros(2 * count - 1)
    for m in range(count):
        total = 0.0
        # tri = A + B tau on the rising and falling halves
        for a, b, A, B in (((m - 1) * dt, m * dt, 1.0 - m, 1.0 / dt),
                           (m * dt, (m + 1) * dt, 1.0 + m, -1.0 / dt)):
            for lo, hi in ((a, min(b, -eps)), (max(a, eps), b)):
                if hi <= lo:
                    continue
                v = A * math.log(abs(hi) / abs(lo)) + B * (hi - lo)
                total += -v if (hi <= 0 and kind == "abs") else v
        W[count - 1 + m] = total
        # tau -> -tau maps lag m to -m
        W[count - 1 - m] = -total if kind == "odd" else total
    if kind == "odd":
        W[count - 1] = 0.0
    return W


def lag_sums(alpha: np.ndarray, factor: np.ndarray | None = None,
             conjugate: bool = True) -> np.ndarray:
    """``D_m = sum_{i - j = m} alpha_i conj(alpha_j) F_ij`` for all lags, dense ``F``.

    With ``conjugate=False`` the second factor is ``alpha_j``.
    """
    n = alpha.size
    M = np.outer(alpha, np.conj(alpha) if conjugate else alpha)
    if factor is not None:
        M = M * factor
    lag = (np.arange(n)[:, None] - np.arange(n)[None, :] + (n - 1)).ravel()
    re = np.bincount(lag, weights=M.real.ravel(), minlength=2 * n - 1)
    im = np.bincount(lag, weights=M.imag.ravel(), minlength=2 * n - 1)
    return re + 1j * im


def chirp_lag_sums(alpha: np.ndarray, points: np.ndarray, dt: float, scales) -> np.ndarray:
    """``D[k, m] = sum_{i - j = m} alpha_i conj(alpha_j) exp(-i c_k |p_i - p_j|^2 / ((i - j) dt))``.

    One row per chirp scale ``c_k``; lag 0 is left at zero.  The value at lag
    ``-m`` uses the conjugate phase of lag ``m``, so each pair of diagonals is
    built from one set of squared distances.
    """
    scales = np.atleast_1d(np.asarray(scales, dtype=float))
    n = alpha.size
    out = np.zeros((scales.size, 2 * n - 1), dtype=complex)
    for m in range(1, n):
        d = points[m:] - points[:-m]
        q = np.sum(d * d, axis=1) / (m * dt)
        e = np.exp(-1j * scales[:, None] * q[None, :])
        fwd = alpha[m:] * np.conj(alpha[:-m])
        bwd = alpha[:-m] * np.conj(alpha[m:])
        out[:, n - 1 + m] = e @ fwd
        out[:, n - 1 - m] = np.conj(e) @ bwd
    return out


def toeplitz_lag_sums(alpha: np.ndarray) -> np.ndarray:
    """``C_m = sum_i alpha_{i} conj(alpha_{i-m})`` for all lags, via FFT."""
    n = alpha.size
    size = 1 << (2 * n - 1).bit_length()
    A = np.fft.fft(alpha, size)
    corr = np.fft.ifft(A * np.conj(A))
    # corr[m] = sum_i alpha_{i+m} conj(alpha_i)
    return np.concatenate((corr[size - (n - 1):], corr[:n]))


@dataclass(frozen=True)
class KernelMatrix:
    """Dense two-time kernel ``K(t_i, s_j)`` with cell weights and an excluded band."""

    times: np.ndarray
    entries: np.ndarray
    weight: float
    band: int = 0

    def __post_init__(self):
        n = self.times.size
        if self.entries.shape != (n, n):
            raise ValueError("kernel matrix must be square and match the time grid")

    def masked(self) -> np.ndarray:
        n = self.times.size
        i, j = np.indices((n, n))
        return np.where(np.abs(i - j) >= self.band, self.entries, 0.0)

    def quadratic_form(self, alpha) -> complex:
        """``sum_ij w^2 K_ij alpha_i conj(alpha_j)`` outside the band."""
        a = np.asarray(getattr(alpha, "values", alpha), dtype=complex)
        return complex(self.weight**2 * (a @ self.masked() @ np.conj(a)))

    def is_hermitian(self, rtol: float = 1e-12) -> bool:
        M = self.masked()
        scale = max(np.abs(M).max(), 1e-300)
        return bool(np.abs(M - M.conj().T).max() <= rtol * scale)


def deterministic_map(func, items, workers: int = 1) -> list:
    """Ordered map; the result list never depends on ``workers``."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(func, items))


def ordered_sum(values) -> np.ndarray:
    """Pairwise tree reduction in index order."""
    vals = [np.asarray(v) for v in values]
    if not vals:
        raise ValueError("nothing to sum")
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]
