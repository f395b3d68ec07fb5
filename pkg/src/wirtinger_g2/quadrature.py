"""Regularized integrals of ``prod |x - w_m|**g_m`` over a real segment.

The segment ``[a, b]`` has two of the ``w_m`` as endpoints; all others lie
outside it. When an endpoint exponent has ``Re g <= -1`` the integral is the
analytic continuation in the exponents, which is what the regularized twisted
cycle produces.

Three independent evaluators live here:

* :func:`series_integral` - endpoint power series (exact Taylor data of the
  smooth factor) plus adaptive Gauss-Legendre in the middle; the production
  route, valid for every non-integral endpoint exponent.
* :func:`gauss_jacobi_integral` - Gauss-Jacobi rule, convergent real
  exponents only.
* :func:`circle_integral` - the loop-corrected construction with small circles
  around the endpoints, ``1/(e(g)-1)`` weights, and QUADPACK in the middle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import ResonanceError, ToleranceError

RESONANCE_TOL = 1e-8


@dataclass(frozen=True)
class QuadratureSpec:
    """Knobs for the regularized interval integrals."""

    method: str = "series"
    tol: float = 1e-12
    max_nodes: int = 20000
    delta_frac: float = 0.3

    def __post_init__(self) -> None:
        if self.method not in ("series", "jacobi", "circle"):
            raise ValueError(f"unknown quadrature method {self.method!r}")
        if not 1e-15 < self.tol < 1e-3:
            raise ValueError(f"tolerance must lie in (1e-15, 1e-3), got {self.tol}")


@dataclass(frozen=True)
class PowerProduct:
    """``coef * prod_m |x - points[m]|**exponents[m]`` on a segment."""

    points: tuple[float, ...]
    exponents: tuple[complex, ...]
    coef: complex = 1.0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, complex(self.coef))
        for w, g in zip(self.points, self.exponents):
            if g != 0:
                out = out * np.abs(x - w) ** g
        return out

    def index_of(self, p: float) -> int:
        for m, w in enumerate(self.points):
            if w == p:
                return m
        raise ValueError(f"{p} is not a singular point of the integrand")

    def others(self, m0: int) -> tuple[np.ndarray, np.ndarray]:
        pts = np.array([w for m, w in enumerate(self.points) if m != m0], dtype=float)
        gs = np.array([g for m, g in enumerate(self.exponents) if m != m0], dtype=complex)
        return pts, gs


@lru_cache(maxsize=64)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _gl(fn, lo: float, hi: float, n: int) -> complex:
    x, w = _legendre(n)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return complex(half * np.dot(w, fn(mid + half * x)))


def adaptive_legendre(fn, lo: float, hi: float, tol: float, max_nodes: int = 20000) -> tuple[complex, float]:
    """Panel-adaptive Gauss-Legendre (24 vs 48 points) for a smooth integrand."""
    stack = [(lo, hi)]
    total, err, nodes = 0j, 0.0, 0
    coarse = _gl(fn, lo, hi, 24)
    scale = max(abs(coarse), 1e-300)
    while stack:
        a, b = stack.pop()
        g1 = _gl(fn, a, b, 24)
        g2 = _gl(fn, a, b, 48)
        nodes += 72
        diff = abs(g2 - g1)
        if diff <= tol * scale * (b - a) / (hi - lo) or nodes > max_nodes:
            total += g2
            err += diff
            continue
        m = 0.5 * (a + b)
        stack.extend([(a, m), (m, b)])
    if nodes > max_nodes and err > tol * max(abs(total), scale):
        raise ToleranceError(f"Gauss-Legendre did not converge on [{lo}, {hi}]", total)
    return total, err


def _check_resonance(g: complex) -> None:
    k = round(g.real)
    if k <= -1 and abs(g - k) < RESONANCE_TOL:
        raise ResonanceError(f"local exponent {g} is a negative integer")


def _taylor_smooth(pts: np.ndarray, gs: np.ndarray, p: float, direction: int, n: int) -> np.ndarray:
    """Taylor coefficients in ``u >= 0`` of ``prod |p + direction*u - w|**g``."""
    coeffs = np.zeros(n, dtype=complex)
    coeffs[0] = 1.0
    for w, g in zip(pts, gs):
        if g == 0:
            continue
        r = direction / (p - w)
        b = np.empty(n, dtype=complex)
        b[0] = abs(p - w) ** g
        for k in range(1, n):
            b[k] = b[k - 1] * (g - k + 1) / k * r
        coeffs = np.convolve(coeffs, b)[:n]
    return coeffs


def _endpoint_piece(f: PowerProduct, p: float, direction: int, delta: float, tol: float) -> tuple[complex, float]:
    """Continued value of ``int_0^delta u**g h(p + direction*u) du``."""
    m0 = f.index_of(p)
    g = complex(f.exponents[m0])
    _check_resonance(g)
    pts, gs = f.others(m0)
    radius = float(np.min(np.abs(pts - p))) if len(pts) else math.inf
    ratio = delta / radius
    n = int(min(400, max(16, math.ceil(math.log(tol * 1e-2) / math.log(ratio)) + 8)))
    h = _taylor_smooth(pts, gs, p, direction, n) * complex(f.coef)
    k = np.arange(n)
    powers = np.exp((g + k + 1) * math.log(delta))
    terms = h * powers / (g + k + 1)
    total = complex(terms.sum())
    tail = float(np.abs(terms[-4:]).sum()) * ratio / max(1e-300, 1 - ratio)
    return total, tail


def _deltas(f: PowerProduct, a: float, b: float, frac: float) -> tuple[float, float]:
    out = []
    for p in (a, b):
        m0 = f.index_of(p)
        pts, _ = f.others(m0)
        out.append(frac * float(np.min(np.abs(pts - p))))
    da, db = out
    # keep a non-empty middle
    L = b - a
    da, db = min(da, 0.4 * L), min(db, 0.4 * L)
    return da, db


def series_integral(f: PowerProduct, a: float, b: float, q: QuadratureSpec | None = None) -> tuple[complex, float]:
    """Regularized ``int_a^b f`` by endpoint series + central quadrature."""
    q = q or QuadratureSpec()
    da, db = _deltas(f, a, b, q.delta_frac)
    left, e1 = _endpoint_piece(f, a, +1, da, q.tol)
    right, e2 = _endpoint_piece(f, b, -1, db, q.tol)
    mid, e3 = adaptive_legendre(f, a + da, b - db, q.tol * 1e-1, q.max_nodes)
    return left + mid + right, e1 + e2 + e3


def gauss_jacobi_integral(f: PowerProduct, a: float, b: float, n: int = 40) -> tuple[complex, float]:
    """Gauss-Jacobi quadrature; needs real exponents > -1 at both ends."""
    ia, ib = f.index_of(a), f.index_of(b)
    ga, gb = complex(f.exponents[ia]), complex(f.exponents[ib])
    if ga.imag or gb.imag or ga.real <= -1 or gb.real <= -1:
        raise ValueError("Gauss-Jacobi needs real endpoint exponents > -1")
    rest = PowerProduct(
        tuple(w for m, w in enumerate(f.points) if m not in (ia, ib)),
        tuple(g for m, g in enumerate(f.exponents) if m not in (ia, ib)),
        f.coef,
    )
    half = 0.5 * (b - a)
    scale = half ** (ga.real + gb.real + 1)

    def rule(m: int) -> complex:
        x, w = special.roots_jacobi(m, gb.real, ga.real)
        return complex(scale * np.dot(w, rest(a + half * (1 + x))))

    v1, v2 = rule(n), rule(2 * n)
    return v2, abs(v2 - v1)


def _circle(f: PowerProduct, p: float, direction: int, eps: float, n: int = 200) -> complex:
    """``oint`` around endpoint ``p`` starting on the segment, counter-clockwise."""
    m0 = f.index_of(p)
    g = complex(f.exponents[m0])
    pts, gs = f.others(m0)
    th, w = _legendre(n)
    theta = math.pi * (th + 1)
    w = math.pi * w
    rot = np.exp(1j * theta)
    x = p + direction * eps * rot
    val = np.full(theta.shape, complex(f.coef)) * eps**g * np.exp(1j * g * theta)
    for wm, gm in zip(pts, gs):
        s = 1.0 if p > wm else -1.0
        val = val * (s * (x - wm)) ** gm
    dx = direction * 1j * eps * rot
    return complex(np.dot(w, val * dx))


def circle_integral(f: PowerProduct, a: float, b: float, eps: float | None = None) -> tuple[complex, float]:
    """Loop-corrected regularization with ``eps``-circles at both ends."""
    if eps is None:
        da, db = _deltas(f, a, b, 0.1)
        eps = min(da, db)
    ga = complex(f.exponents[f.index_of(a)])
    gb = complex(f.exponents[f.index_of(b)])
    _check_resonance(ga)
    _check_resonance(gb)
    ea = np.exp(2j * np.pi * ga) - 1
    eb = np.exp(2j * np.pi * gb) - 1
    ca = _circle(f, a, +1, eps) / ea
    cb = _circle(f, b, -1, eps) / eb
    kw = dict(limit=400, epsabs=0.0, epsrel=1e-13)
    re, er = integrate.quad(lambda x: f(np.array([x]))[0].real, a + eps, b - eps, **kw)
    im, ei = integrate.quad(lambda x: f(np.array([x]))[0].imag, a + eps, b - eps, **kw)
    return ca + complex(re, im) - cb, er + ei
