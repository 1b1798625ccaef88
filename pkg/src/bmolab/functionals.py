"""Norms, the heat maximal function, Hardy operators and path functionals."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spectral import PHYSICAL, SampledField, transform
from .stochastic import Path


@dataclass(frozen=True)
class TimeProfile:
    """Complex samples on the cells ``[start + i dt, start + (i+1) dt)``.

    ``values[i]`` is the cell value, located at the cell midpoint.
    """

    start: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.size < 2:
            raise ValueError("a time profile needs at least two samples")
        if not self.dt > 0:
            raise ValueError("time step must be positive")

    @classmethod
    def from_function(cls, func, start: float, stop: float, count: int) -> "TimeProfile":
        dt = (stop - start) / count
        t = start + dt * (np.arange(count) + 0.5)
        return cls(float(start), float(dt), np.asarray(func(t), dtype=complex))

    @property
    def count(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.start + self.dt * (np.arange(self.count) + 0.5)

    @property
    def stop(self) -> float:
        return self.start + self.dt * self.count

    def norm2(self) -> float:
        return math.sqrt(self.dt * float(np.sum(np.abs(self.values) ** 2)))

    def inner(self, other: "TimeProfile") -> complex:
        return self.dt * complex(np.sum(self.values * np.conj(other.values)))

    def with_values(self, values) -> "TimeProfile":
        return TimeProfile(self.start, self.dt, np.asarray(values, dtype=complex))


@dataclass(frozen=True)
class MixedNormSpec:
    p: float
    q: float
    dt: float

    def __post_init__(self):
        for e in (self.p, self.q):
            if not (e >= 1):
                raise ValueError(f"invalid exponent {e}")
        if not self.dt > 0:
            raise ValueError("time step must be positive")


def _lp(vals: np.ndarray, weight: float, p: float) -> float:
    a = np.abs(vals)
    if math.isinf(p):
        return float(a.max()) if a.size else 0.0
    return float((weight * np.sum(a**p)) ** (1.0 / p))


def lebesgue_norm(f: SampledField, p: float) -> float:
    if not p >= 1:
        raise ValueError(f"invalid exponent {p}")
    return _lp(f.values, f.weight, p)


def mixed_norm(snapshots: Sequence[SampledField], spec: MixedNormSpec) -> float:
    """``(sum_t ||f_t||_p^q dt)^(1/q)`` over equally spaced snapshots."""
    if not snapshots:
        raise ValueError("no snapshots")
    grid, dom = snapshots[0].grid, snapshots[0].domain
    for s in snapshots:
        if s.grid != grid or s.domain != dom:
            raise ValueError("snapshots live on different grids")
    inner = np.array([lebesgue_norm(s, spec.p) for s in snapshots])
    return _lp(inner, spec.dt, spec.q)


# --- heat maximal function -------------------------------------------------

def default_heat_ladder(count: int = 60) -> np.ndarray:
    return np.geomspace(1e-3, 1e3, count)


def heat_multiplier(zeta2: np.ndarray, t: float, d: int, kernel: str = "mass-one"):
    """Transform of the heat kernel used by the maximal function.

    ``"mass-one"`` is ``(4 pi t)^{-d/2} exp(-|y|^2/(4t))``; ``"literal"`` is the
    literal ``(4 pi t)^{-d/2} exp(-|y|^2/t)``, which has mass ``4^{-d/2}``.
    """
    if kernel == "mass-one":
        return np.exp(-t * zeta2)
    if kernel == "literal":
        return 4.0 ** (-d / 2) * np.exp(-t * zeta2 / 4)
    raise ValueError(f"unknown heat kernel {kernel!r}")


def heat_maximal_field(g: SampledField, ladder=None, kernel: str = "mass-one",
                       workers: int = 1) -> SampledField:
    """``Mg = max_t |h_t * g|`` over a geometric ladder, on the whole grid."""
    if g.domain != PHYSICAL:
        raise ValueError("maximal function needs a physical-domain field")
    ladder = default_heat_ladder() if ladder is None else np.asarray(ladder, dtype=float)
    if ladder.size == 0:
        raise ValueError("empty heat-time ladder")
    gh = transform(g, "forward")
    grid = g.grid

    def smoothed(t):
        vals = gh.values * heat_multiplier(grid.zeta2, t, grid.d, kernel)
        return np.abs(transform(SampledField(grid, gh.domain, vals), "inverse").values)

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            layers = list(ex.map(smoothed, ladder))
    else:
        layers = [smoothed(t) for t in ladder]
    out = layers[0]
    for layer in layers[1:]:
        out = np.maximum(out, layer)
    return SampledField(grid, PHYSICAL, out.astype(complex))


def heat_maximal(g: SampledField, index, ladder=None, kernel: str = "mass-one") -> float:
    """``Mg`` at one grid point, given by its index tuple."""
    return float(heat_maximal_field(g, ladder, kernel).values[tuple(index)].real)


def h1_norm(g: SampledField, ladder=None, kernel: str = "mass-one") -> float:
    m = heat_maximal_field(g, ladder, kernel)
    return float(m.weight * np.sum(m.values.real))


# --- Hardy operators -------------------------------------------------------
#
# Both operators act on piecewise-constant profiles and return cell averages,
# so the discrete H and H* are exact adjoints and the projection can only
# shrink the L2 norm.

def _hardy_coeffs(alpha: TimeProfile):
    if alpha.start < 0:
        raise ValueError("Hardy operators need profiles supported in t >= 0")
    a = alpha.start + alpha.dt * np.arange(alpha.count)
    b = a + alpha.dt
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # ln(b/a) without overflowing b/a when a is tiny
        log_ratio = np.where(a > 0, np.log(b) - np.log(np.where(a > 0, a, 1.0)), np.inf)
        diag = np.where(a > 0, 1.0 - (a / alpha.dt) * log_ratio, 1.0)
    return log_ratio, diag


def hardy_transform(alpha: TimeProfile) -> TimeProfile:
    """Cell averages of ``H alpha(t) = (1/t) int_0^t alpha`` on alpha's cells."""
    log_ratio, diag = _hardy_coeffs(alpha)
    v = alpha.values
    before = np.concatenate(([0.0], np.cumsum(v)[:-1]))
    lr = np.where(np.isfinite(log_ratio), log_ratio, 0.0)
    return alpha.with_values(diag * v + lr * before)


def hardy_adjoint(alpha: TimeProfile) -> TimeProfile:
    """Cell averages of ``H* alpha(t) = int_t^T alpha(s)/s ds`` (support ends at T)."""
    log_ratio, diag = _hardy_coeffs(alpha)
    lr = np.where(np.isfinite(log_ratio), log_ratio, 0.0)
    weighted = lr * alpha.values
    after = np.concatenate((np.cumsum(weighted[::-1])[::-1][1:], [0.0]))
    return alpha.with_values(diag * alpha.values + after)


def hardy_l2_norm(alpha: TimeProfile) -> float:
    """``||H alpha||_2`` over ``[0, inf)``, adding the exact tail beyond the support.

    Past ``T`` the average is ``(int alpha)/t``, contributing ``|int alpha|^2 / T``.
    """
    h = hardy_transform(alpha)
    total = alpha.dt * complex(np.sum(alpha.values))
    return math.sqrt(h.norm2() ** 2 + abs(total) ** 2 / alpha.stop)


# --- path functionals ------------------------------------------------------

def _uniform_step(times: np.ndarray) -> float:
    d = np.diff(times)
    if not np.allclose(d, d[0], rtol=1e-9, atol=0):
        raise ValueError("path must be sampled on a uniform time grid")
    return float(d[0])


def path_square_functional(path: Path, interval=None) -> float:
    """``(1/|I|) int_I int_I |p_t - p_s|^2 / (t - s)^2`` with the diagonal cells dropped."""
    t, p = path.times, path.points
    if interval is not None:
        keep = (t >= interval[0]) & (t <= interval[1])
        t, p = t[keep], p[keep]
    if t.size < 64:
        raise ValueError("need at least 64 samples on the interval")
    dt = _uniform_step(t)
    n = t.size
    m = np.arange(1, n)
    total = 0.0
    for col in p.T:
        sq = np.concatenate(([0.0], np.cumsum(col * col)))
        size = 1 << (2 * n - 1).bit_length()
        spec = np.fft.rfft(col, size)
        corr = np.fft.irfft(spec * np.conj(spec), size)[1:n]
        # sum_i (p_{i+m} - p_i)^2 = sum_{i >= m} p_i^2 + sum_{i < n-m} p_i^2 - 2 corr_m
        sums = (sq[n] - sq[m]) + sq[n - m] - 2 * corr
        total += float(np.sum(2 * np.maximum(sums, 0.0) / (m * m)))
    # dt^2 (cell area) / (m dt)^2 = 1/m^2
    return total / (n * dt)


def half_derivative(path: Path) -> np.ndarray:
    """``D^{1/2} p`` for a scalar path treated as periodic on its sampled interval."""
    if path.d != 1:
        raise ValueError("half derivative is defined for scalar paths")
    dt = _uniform_step(path.times)
    n = path.count
    freq = 2 * math.pi * np.fft.fftfreq(n, d=dt)
    return np.fft.ifft(np.abs(freq) ** 0.5 * np.fft.fft(path.points[:, 0])).real


def dyadic_bmo_seminorm(samples) -> float:
    """Max over dyadic subintervals of the mean absolute deviation from the mean."""
    v = np.asarray(samples.values if isinstance(samples, TimeProfile) else samples)
    if v.size < 2:
        raise ValueError("need at least two samples")
    best = 0.0
    pieces = 1
    while v.size // pieces >= 2:
        for seg in np.array_split(v, pieces):
            best = max(best, float(np.mean(np.abs(seg - seg.mean()))))
        pieces *= 2
    return best
