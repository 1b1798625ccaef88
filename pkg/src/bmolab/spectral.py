"""Uniform grids, the Fourier transform pair, and Fourier multipliers.

One convention is used everywhere in the package::

    f_hat(zeta) = int f(x) exp(-i x . zeta) dx
    f(x)        = (2 pi)^-d int f_hat(zeta) exp(i x . zeta) dzeta

Physical samples live on ``[-X, X)^d`` with spacing ``dx = 2X/n``; spectral
samples live on ``[-pi/dx, pi/dx)^d`` with spacing ``dzeta = pi/X``.  Both are
stored in increasing-coordinate order (no FFT wrap ordering leaks out).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

PHYSICAL = "physical"
SPECTRAL = "spectral"


@dataclass(frozen=True)
class FourierConvention:
    forward_sign: int = -1
    forward_norm: float = 1.0
    # inverse normalization is (2 pi)^-d
    inverse_base: float = 2 * math.pi

    def inverse_norm(self, d: int) -> float:
        return self.inverse_base ** (-d)


CONVENTION = FourierConvention()


@dataclass(frozen=True)
class Grid:
    d: int
    n: int
    X: float

    @property
    def dx(self) -> float:
        return 2.0 * self.X / self.n

    @property
    def dzeta(self) -> float:
        return math.pi / self.X

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def spectral_half_extent(self) -> float:
        return math.pi / self.dx

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.X + self.dx * np.arange(self.n)

    @cached_property
    def zeta_axis(self) -> np.ndarray:
        return self.dzeta * np.arange(-self.n // 2, self.n // 2)

    def coords(self) -> tuple[np.ndarray, ...]:
        """Broadcastable physical coordinate arrays, one per axis."""
        return _broadcast_axes(self.axis, self.d)

    def zeta_coords(self) -> tuple[np.ndarray, ...]:
        return _broadcast_axes(self.zeta_axis, self.d)

    @cached_property
    def radius2(self) -> np.ndarray:
        return sum(c * c for c in self.coords())

    @cached_property
    def zeta2(self) -> np.ndarray:
        return sum(z * z for z in self.zeta_coords())

    @cached_property
    def _phase(self) -> np.ndarray:
        # exp(i X zeta_k) = (-1)^k for signed index k; exact +-1
        k = np.arange(-self.n // 2, self.n // 2)
        sign = np.where(k % 2 == 0, 1.0, -1.0)
        out = np.ones(self.shape)
        for ax in _broadcast_axes(sign, self.d):
            out = out * ax
        return out

    def physical_weight(self) -> float:
        return self.dx ** self.d

    def spectral_weight(self) -> float:
        return (self.dzeta / (2 * math.pi)) ** self.d


def _broadcast_axes(axis: np.ndarray, d: int) -> tuple[np.ndarray, ...]:
    out = []
    for k in range(d):
        shape = [1] * d
        shape[k] = axis.size
        out.append(axis.reshape(shape))
    return tuple(out)


def create_grid(d: int, n: int, X: float) -> Grid:
    if d not in (1, 2, 3):
        raise ValueError(f"invalid dimension {d}; expected 1, 2 or 3")
    if n < 8 or n & (n - 1):
        raise ValueError(f"points per axis must be a power of two >= 8, got {n}")
    if not X > 0:
        raise ValueError(f"half-extent must be positive, got {X}")
    return Grid(int(d), int(n), float(X))


@dataclass(frozen=True)
class SampledField:
    grid: Grid
    domain: str
    values: np.ndarray

    def __post_init__(self):
        if self.domain not in (PHYSICAL, SPECTRAL):
            raise ValueError(f"unknown domain tag {self.domain!r}")
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"expected {self.grid.shape} samples, got {self.values.shape}"
            )

    @property
    def weight(self) -> float:
        if self.domain == PHYSICAL:
            return self.grid.physical_weight()
        return self.grid.spectral_weight()

    def norm2(self) -> float:
        return math.sqrt(self.weight * float(np.sum(np.abs(self.values) ** 2)))

    def inner(self, other: "SampledField") -> complex:
        if other.grid != self.grid or other.domain != self.domain:
            raise ValueError("fields live on different grids or domains")
        return self.weight * complex(np.sum(self.values * np.conj(other.values)))

    def __add__(self, other):
        if other.grid != self.grid or other.domain != self.domain:
            raise ValueError("fields live on different grids or domains")
        return SampledField(self.grid, self.domain, self.values + other.values)

    def __mul__(self, c):
        return SampledField(self.grid, self.domain, self.values * c)

    __rmul__ = __mul__


def physical_field(grid: Grid, func: Callable[..., np.ndarray]) -> SampledField:
    """Sample ``func(x1, ..., xd)`` on the physical grid."""
    vals = np.broadcast_to(func(*grid.coords()), grid.shape).astype(complex)
    return SampledField(grid, PHYSICAL, vals)


def spectral_field(grid: Grid, func: Callable[..., np.ndarray]) -> SampledField:
    vals = np.broadcast_to(func(*grid.zeta_coords()), grid.shape).astype(complex)
    return SampledField(grid, SPECTRAL, vals)


def transform(f: SampledField, direction: str = "forward") -> SampledField:
    g = f.grid
    if direction == "forward":
        if f.domain != PHYSICAL:
            raise ValueError("forward transform needs a physical-domain field")
        vals = np.fft.fftshift(np.fft.fftn(f.values)) * g._phase * g.physical_weight()
        return SampledField(g, SPECTRAL, vals)
    if direction == "inverse":
        if f.domain != SPECTRAL:
            raise ValueError("inverse transform needs a spectral-domain field")
        vals = np.fft.ifftn(np.fft.ifftshift(f.values * g._phase)) / g.physical_weight()
        return SampledField(g, PHYSICAL, vals)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


Multiplier = Union[np.ndarray, Callable[..., np.ndarray]]


def apply_multiplier(f: SampledField, m: Multiplier) -> SampledField:
    """Pointwise product with ``m`` in the spectral domain.

    ``m`` is either an array on the spectral grid or a callable taking the
    broadcast spectral coordinates ``(zeta_1, ..., zeta_d)``.
    """
    if f.domain != SPECTRAL:
        raise ValueError("multipliers act on spectral-domain fields")
    vals = m(*f.grid.zeta_coords()) if callable(m) else m
    vals = np.broadcast_to(vals, f.grid.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("multiplier is not finite at every spectral node")
    return SampledField(f.grid, SPECTRAL, f.values * vals)


def apply_physical_multiplier(f: SampledField, m: Multiplier) -> SampledField:
    """Transform, multiply, transform back."""
    return transform(apply_multiplier(transform(f, "forward"), m), "inverse")


def gaussian_closed_form(alpha: complex, d: int) -> Callable[..., np.ndarray]:
    """Physical-side function whose transform is ``exp(-alpha |zeta|^2)``.

    Returns ``x -> (4 pi alpha)^(-d/2) exp(-|x|^2 / (4 alpha))``, principal
    branch.  ``Re alpha = 0`` (alpha != 0) is the limit from the right
    half-plane, which the principal branch already gives.
    """
    alpha = complex(alpha)
    if alpha.real < 0:
        raise ValueError("Re(alpha) must be nonnegative")
    if alpha == 0:
        raise ValueError("alpha = 0 has no function-valued inverse transform")
    pref = (4 * math.pi * alpha) ** (-d / 2)

    def evaluate(*x):
        if len(x) == 1 and np.ndim(x[0]) >= 1 and np.shape(x[0])[-1] == d and d > 1:
            r2 = np.sum(np.asarray(x[0]) ** 2, axis=-1)
        else:
            if len(x) != d:
                raise ValueError(f"expected {d} coordinate arrays")
            r2 = sum(np.asarray(c) ** 2 for c in x)
        return pref * np.exp(-r2 / (4 * alpha))

    return evaluate


def boundary_ratio(f: SampledField) -> float:
    """Max modulus on the faces of the box relative to the peak modulus."""
    a = np.abs(f.values)
    peak = a.max()
    if peak == 0:
        return 0.0
    face = 0.0
    for ax in range(f.grid.d):
        face = max(face, np.take(a, 0, axis=ax).max(), np.take(a, -1, axis=ax).max())
    return float(face / peak)
