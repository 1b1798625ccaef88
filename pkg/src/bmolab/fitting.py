"""Least-squares fits of measured values against the log of a control parameter."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class DivergenceFit:
    parameters: tuple
    values: tuple
    slope: float
    intercept: float
    r2: float
    against: str  # "log" or "log_inverse"

    def monotone_increasing(self) -> bool:
        return bool(np.all(np.diff(self.values) > 0))

    def to_dict(self) -> dict:
        return asdict(self)


def fit_log_divergence(parameters, values, against: str = "log_inverse") -> DivergenceFit:
    """Fit ``value = slope * x + intercept`` with ``x = ln(param)`` or ``ln(1/param)``.

    R^2 is reported as 0 when the values have zero variance.
    """
    p = np.asarray(parameters, dtype=float)
    v = np.asarray(values, dtype=float)
    if p.size != v.size:
        raise ValueError("parameters and values differ in length")
    if p.size < 4:
        raise ValueError("a divergence ladder needs at least 4 points")
    if np.any(p <= 0):
        raise ValueError("ladder parameters must be positive")
    if np.all(p == p[0]):
        raise ValueError("degenerate ladder: all parameters equal")
    steps = np.diff(p)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("ladder parameters must be strictly monotone")
    if against == "log":
        x = np.log(p)
    elif against == "log_inverse":
        x = -np.log(p)
    else:
        raise ValueError(f"unknown regressor {against!r}")
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, v, rcond=None)
    ss_tot = float(np.sum((v - v.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 0.0
    else:
        ss_res = float(np.sum((v - (slope * x + intercept)) ** 2))
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return DivergenceFit(tuple(float(a) for a in p), tuple(float(a) for a in v),
                         float(slope), float(intercept), r2, against)
