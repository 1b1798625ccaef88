"""Oracle constants, computed by quadrature independently of the closed forms.

``python -m bmolab.constants`` regenerates ``data/constants.json``.  Each entry
records the oracle value, the literal value of the classical display where
one exists (convention differences show up as a mismatch), and how the
oracle was obtained.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path as FilePath

import numpy as np
from scipy import integrate, special

DEFAULT_PATH = FilePath(__file__).with_name("data") / "constants.json"
RTOL = 1e-11


def _quad(f, a, b, **kw):
    val, _ = integrate.quad(f, a, b, epsabs=0, epsrel=RTOL, limit=400, **kw)
    return val


def _radial2(f):
    """``(2 pi)^{-2} int_{R^2} f(|zeta|) d zeta``."""
    return _quad(lambda r: f(r) * 2 * math.pi * r, 0, np.inf) / (2 * math.pi) ** 2


def _richardson(values, ratio):
    """Linear extrapolation to 0 on a geometric ladder ``h, h/ratio, ...``."""
    v = list(values)
    while len(v) > 1:
        v = [(ratio * b - a) / (ratio - 1) for a, b in zip(v[:-1], v[1:])]
    return v[0]


def compute_constants() -> dict:
    c = {}

    def put(name, value, literal, provenance):
        c[name] = {"value": float(value), "literal_value": literal, "provenance": provenance}

    g0 = _radial2(lambda r: math.exp(-r * r))
    put("gaussian_origin_value", g0, 1 / (4 * math.pi),
        "f(0) for f_hat = exp(-|zeta|^2), d=2: (2pi)^-2 int exp(-|zeta|^2) by radial quadrature")

    # f(x) at |x| = 1 through the Bessel integral, then exponent scale ln(f(0)/f(1))
    g1 = _quad(lambda r: special.j0(r) * math.exp(-r * r) * r, 0, np.inf) / (2 * math.pi)
    put("gaussian_exponent_scale", math.log(g0 / g1), 1.0,
        "c in f(x) = f(0) exp(-c |x|^2 / alpha) at alpha = 1: ln(f(0)/f(1)) by Bessel quadrature")

    # |(2pi)^-2 int exp((-2 eps + i t)|zeta|^2)| * |t| as eps -> 0, t = 1
    ladder = [0.02 / 2**k for k in range(4)]
    vals = []
    for e in ladder:
        re = integrate.quad(lambda s: math.exp(-2 * e * s), 0, np.inf, weight="cos", wvar=1.0)[0] * math.pi
        im = integrate.quad(lambda s: math.exp(-2 * e * s), 0, np.inf, weight="sin", wvar=1.0)[0] * math.pi
        vals.append(abs(complex(re, im)) / (2 * math.pi) ** 2)
    # the regularized modulus is even in eps, so extrapolate in eps^2
    put("point_overlap_coefficient", _richardson(vals, 4.0), 1 / (4 * math.pi),
        "c in |point overlap| = c/|t|: regularized radial quadrature, eps ladder 0.02/2^k, Richardson in eps^2")

    go = _radial2(lambda r: r**4 * math.exp(-2 * r * r))
    put("gaussian_overlap_origin", go, 32 / (4 * math.pi * 8),
        "overlap of g_hat = |zeta|^2 exp(-|zeta|^2) at t = s, p = q: (2pi)^-2 int |zeta|^4 exp(-2|zeta|^2)")
    put("gaussian_overlap_prefactor", go * 8 / 32, 1 / (4 * math.pi),
        "prefactor c in c P(w) exp(-w) / beta^3: origin value * beta^3 / P(0) with beta = 2")

    for d in (2, 3):
        mass = _quad(lambda r: math.exp(-r * r) * r ** (d - 1), 0, np.inf) * (2 * math.pi ** (d / 2) / math.gamma(d / 2)) \
            / (4 * math.pi) ** (d / 2)
        put(f"heat_kernel_mass_literal_d{d}", mass, 4.0 ** (-d / 2),
            f"mass of (4 pi t)^(-d/2) exp(-|y|^2/t), d={d}, t=1, radial quadrature")

    put("cone_slope", _quad(lambda z: 8 * math.pi * z * z / (1 + z * z), 0, 1), None,
        "int_0^1 8 pi z^2/(1+z^2) dz: eps-derivative of the cone integral at r = eps")
    put("cone_comparison_slope", _quad(lambda z: 8 * math.pi * z * z / (4 + z * z), 0, 1), None,
        "int_0^1 8 pi z^2/(4+z^2) dz: slope of the integrated lower bound")

    def S(eps):
        return 2 * _quad(lambda u: (2 - u) / u, eps, 2)
    e = 1e-8
    put("interval_singular_slope", (S(e / 2) - S(e)) / math.log(2), 4.0,
        "dS/d ln(1/eps) for S = int int_[-1,1]^2 1{|t-s|>eps}/|t-s|, finite difference of quadratures")

    phi = lambda x: math.exp(-x * x / 2) / math.sqrt(2 * math.pi)  # noqa: E731
    a_re = 2 * _quad(lambda x: math.cos(x * x / 2) * phi(x), 0, np.inf)
    a_im = 2 * _quad(lambda x: math.sin(x * x / 2) * phi(x), 0, np.inf)
    put("gaussian_quadratic_sin_half", a_im, None, "E sin(gamma^2 / 2) by quadrature against the normal density")
    put("gaussian_quadratic_modulus_half", math.hypot(a_re, a_im), 2 ** -0.25,
        "|E exp(i gamma^2 / 2)| by quadrature")

    # Gaussian f_hat = exp(-|zeta|^2): ||A_t f||_4^4 from the 4th power of the radial profile
    def l44(t):
        a = complex(1, -t)
        amp = 1 / (4 * math.pi * abs(a))
        return _quad(lambda r: amp**4 * math.exp(-r * r * (1 / a).real) * 2 * math.pi * r, 0, np.inf)
    st = 2 * _quad(l44, 0, np.inf)
    norm2 = math.sqrt(_radial2(lambda r: math.exp(-2 * r * r)))
    put("strichartz_gaussian_ratio", st**0.25 / norm2, None,
        "(int int |A_t f|^4)^(1/4) / ||f||_2 for f_hat = exp(-|zeta|^2), nested quadrature")

    put("wave_kernel_sup_coefficient", 1 / (4 * math.pi), 1 / (4 * math.pi),
        "sup_x 1/(4 pi |x|) on |x| >= |t| is attained at |x| = |t|")
    return dict(sorted(c.items()))


def write_constants(path=DEFAULT_PATH) -> FilePath:
    path = FilePath(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(compute_constants(), indent=2, sort_keys=True) + "\n")
    return path


def load_constants(path=None) -> dict:
    return json.loads(FilePath(path or DEFAULT_PATH).read_text())


def constants_hash(path=None) -> str:
    return hashlib.sha256(FilePath(path or DEFAULT_PATH).read_bytes()).hexdigest()


def constant(name: str, path=None) -> float:
    return load_constants(path)[name]["value"]


if __name__ == "__main__":
    print(write_constants())
