"""Seeded Brownian paths, Gaussian quadratic characteristic functions, lacunary paths.

Random numbers come from a counter-based generator (Philox) keyed by
``(master, stream)``, so every replica owns an independent, reproducible
stream no matter which worker draws it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    master: int
    stream: int = 0

    def __post_init__(self):
        if self.stream < 0:
            raise ValueError("stream index must be nonnegative")

    def generator(self) -> np.random.Generator:
        key = ((self.stream & MASK64) << 64) | (self.master & MASK64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, stream: int) -> "SeedSpec":
        return SeedSpec(self.master, stream)

    def provenance(self) -> dict:
        return {"master": int(self.master), "stream": int(self.stream), "bitgen": "Philox4x64"}


@dataclass(frozen=True)
class Path:
    """Trajectory ``t -> p_t`` sampled at ``times``; ``points`` has shape (count, d)."""

    times: np.ndarray
    points: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[0] != self.times.size:
            raise ValueError("points must have shape (len(times), d)")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("path coordinates must be finite")

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def count(self) -> int:
        return self.times.size

    def scaled(self, c: float) -> "Path":
        return Path(self.times, c * self.points, dict(self.provenance))

    def shifted(self, v) -> "Path":
        return Path(self.times, self.points + np.asarray(v, dtype=float), dict(self.provenance))


def stack_paths(*paths: Path) -> Path:
    """Concatenate the coordinates of paths sampled on the same times."""
    times = paths[0].times
    for p in paths[1:]:
        if not np.array_equal(p.times, times):
            raise ValueError("paths are sampled on different times")
    prov = {"components": [p.provenance for p in paths]}
    return Path(times, np.hstack([p.points for p in paths]), prov)


def sample_brownian(times, seed: SeedSpec) -> Path:
    """Scalar Brownian motion with ``b = 0`` at the first node."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("need at least two sample times")
    dt = np.diff(times)
    if np.any(dt <= 0):
        raise ValueError("sample times must be strictly increasing")
    z = seed.generator().standard_normal(dt.size)
    b = np.concatenate(([0.0], np.cumsum(np.sqrt(dt) * z)))
    return Path(times, b[:, None], {"kind": "brownian", **seed.provenance()})


def constant_path(times, value=(0.0,)) -> Path:
    times = np.asarray(times, dtype=float)
    value = np.atleast_1d(np.asarray(value, dtype=float))
    return Path(times, np.tile(value, (times.size, 1)), {"kind": "constant"})


def gaussian_quadratic_char(theta: float) -> complex:
    """``E exp(i theta gamma^2) = (1 - 2 i theta)^(-1/2)`` for standard normal gamma."""
    return 1.0 / cmath.sqrt(1 - 2j * theta)


def gaussian_quadratic_sin(theta: float) -> float:
    """``a = E sin(theta gamma^2)``, the imaginary part of the characteristic value."""
    return gaussian_quadratic_char(theta).imag


def gaussian_quadratic_char_mc(theta: float, samples: int, seed: SeedSpec,
                               chunk: int = 1 << 18):
    """Monte Carlo estimate of ``E exp(i theta gamma^2)``.

    Returns ``(mean, stderr_re, stderr_im)``.
    """
    rng = seed.generator()
    s = np.zeros(2)
    s2 = np.zeros(2)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        g2 = rng.standard_normal(m) ** 2
        c, sn = np.cos(theta * g2), np.sin(theta * g2)
        s += (c.sum(), sn.sum())
        s2 += ((c * c).sum(), (sn * sn).sum())
        done += m
    mean = s / samples
    var = s2 / samples - mean**2
    se = np.sqrt(var / samples)
    return complex(mean[0], mean[1]), float(se[0]), float(se[1])


def lip_half_seminorm(path: Path) -> float:
    """Discrete ``max_{i != j} |p_i - p_j| / sqrt|t_i - t_j|``, one lag at a time."""
    t = path.times
    p = path.points
    best = 0.0
    for m in range(1, t.size):
        dp = np.linalg.norm(p[m:] - p[:-m], axis=1)
        q = dp / np.sqrt(np.abs(t[m:] - t[:-m]))
        best = max(best, float(q.max()))
    return best


def lacunary_path(n: int, samples: int, interval=(0.0, 2 * math.pi)) -> Path:
    """``p_t = c_n sum_{k=1}^n 2^{-k/2} cos(2^k t)`` with unit discrete Lip_1/2 seminorm.

    Nodes are the ``samples`` cell midpoints of ``interval``.
    """
    if n < 1:
        raise ValueError("need at least one lacunary level")
    if samples < 2 ** (n + 4):
        raise ValueError(f"level {n} needs at least {2 ** (n + 4)} samples")
    a, b = interval
    dt = (b - a) / samples
    t = a + dt * (np.arange(samples) + 0.5)
    p = np.zeros(samples)
    for k in range(1, n + 1):
        p += 2.0 ** (-k / 2) * np.cos(2.0**k * t)
    raw = Path(t, p[:, None], {"kind": "lacunary", "levels": n})
    c = 1.0 / lip_half_seminorm(raw)
    return Path(t, c * p[:, None], {"kind": "lacunary", "levels": n, "scale": c})
