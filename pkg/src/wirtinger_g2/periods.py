"""Period engine: regularized interval periods, period matrices, F_D and Gamma.

An interval period is ``int_{z_j}^{z_{j+1}} T_eff * phi`` on the branch fixed
by the lower half-plane rule, regularized by analytic continuation in the
exponents when an endpoint is not integrable. The interval ``(1, inf)`` is
mapped to ``(0, 1)`` by ``t = 1/s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .cohomology import FormDescriptor, Term
from .errors import (
    DivergenceError,
    PoleError,
    TailBoundError,
    ToleranceError,
    UnknownSymbolError,
)
from .homology import PM_BASIS, CycleClass, expand_in_pm_basis
from .multivalued import BranchConfig
from .params import LauricellaParams, TwistSpec
from .quadrature import (
    PowerProduct,
    QuadratureSpec,
    circle_integral,
    gauss_jacobi_integral,
    series_integral,
)

#: error estimates above this multiple of the requested tolerance are flagged
FLAG_FACTOR = 1e3


def interval_power_product(j: int, beta: Sequence[complex], cfg: BranchConfig, coef: complex = 1.0):
    """Integrand ``coef * prod (t - z_k)**beta_k`` on interval ``j`` as a real-variable power product.

    Returns ``(PowerProduct, a, b)``; the branch phase
    ``prod_{k>j} e(-beta_k/2)`` is already folded into the coefficient.
    """
    z = cfg.real_points
    beta = np.asarray(beta, dtype=complex)
    phase = complex(np.exp(-1j * np.pi * beta[j + 1 : 5].sum()))
    coef = coef * phase
    if j < 4:
        return PowerProduct(tuple(z), tuple(beta), coef), z[j], z[j + 1]
    # t = 1/s: (t - z_k) = (1 - z_k s)/s and dt = -ds/s**2 with the orientation flip
    pts = [0.0]
    exps = [-beta.sum() - 2]
    for k in range(1, 5):
        pts.append(1.0 / z[k])
        exps.append(beta[k])
        coef *= z[k] ** beta[k]
    return PowerProduct(tuple(pts), tuple(exps), coef), 0.0, 1.0


def _integrate(f: PowerProduct, a: float, b: float, q: QuadratureSpec) -> tuple[complex, float]:
    if q.method == "series":
        return series_integral(f, a, b, q)
    if q.method == "jacobi":
        return gauss_jacobi_integral(f, a, b)
    return circle_integral(f, a, b)


def term_exponents(term: Term, y_power: int, spec: TwistSpec) -> np.ndarray:
    """``2 e_k + n_k + y_power/2`` for the five finite points."""
    return 2 * spec.effective_array()[:5] + np.array(term.powers, dtype=float) + 0.5 * y_power


def sheet_sign(form: FormDescriptor, spec: TwistSpec, y_sign: int) -> int:
    """Sign of the integrand on the ``y_sign`` sheet relative to the ``y > 0`` sheet."""
    return y_sign ** ((abs(spec.f_twist) + abs(form.y_power)) % 2)


def interval_period(
    j: int,
    form: FormDescriptor,
    spec: TwistSpec,
    cfg: BranchConfig,
    q: QuadratureSpec | None = None,
    y_sign: int = 1,
) -> tuple[complex, float]:
    """``(value, error estimate)`` of the regularized period over interval ``j``."""
    if not 0 <= j <= 4:
        raise ValueError(f"interval index must be 0..4, got {j}")
    q = q or QuadratureSpec()
    cfg.require_real_ordered()
    total, err = 0j, 0.0
    for term in form.terms:
        if term.coef == 0:
            continue
        beta = term_exponents(term, form.y_power, spec)
        f, a, b = interval_power_product(j, beta, cfg, term.coef)
        v, e = _integrate(f, a, b, q)
        total += v
        err += e
    s = sheet_sign(form, spec, y_sign)
    return s * total, err


def quad_regularized_interval(
    j: int,
    phi: FormDescriptor,
    spec: TwistSpec,
    cfg: BranchConfig,
    q: QuadratureSpec | None = None,
    y_sign: int = 1,
) -> complex:
    """Regularized period; raises :class:`ToleranceError` when the estimate is poor."""
    q = q or QuadratureSpec()
    v, err = interval_period(j, phi, spec, cfg, q, y_sign)
    if err > FLAG_FACTOR * q.tol * max(abs(v), 1e-300):
        raise ToleranceError(f"interval {j}: error estimate {err:.3g} for value {abs(v):.3g}", v)
    return v


# -- period matrices -------------------------------------------------------


@dataclass(frozen=True)
class PeriodMatrix:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: np.ndarray
    errors: np.ndarray
    spec: TwistSpec
    tol: float
    scales: np.ndarray

    @property
    def flagged(self) -> np.ndarray:
        """Entries whose error exceeds the tolerance relative to the summed term sizes."""
        return self.errors > FLAG_FACTOR * self.tol * np.maximum(self.scales, 1e-300)


class _PeriodCache:
    """Memoized interval periods on both sheets for one spec."""

    def __init__(self, spec: TwistSpec, cfg: BranchConfig, q: QuadratureSpec):
        self.spec, self.cfg, self.q = spec, cfg, q
        self._store: dict[tuple[int, str], tuple[complex, float]] = {}

    def interval(self, j: int, form: FormDescriptor, y_sign: int = 1) -> tuple[complex, float]:
        key = (j, form.name)
        if key not in self._store:
            self._store[key] = interval_period(j, form, self.spec, self.cfg, self.q, 1)
        v, e = self._store[key]
        return sheet_sign(form, self.spec, y_sign) * v, e

    def symbol(self, name: str, form: FormDescriptor) -> tuple[complex, float, float]:
        """Period over a registry symbol, its error and the size of its parts."""
        if name.startswith("sigma") and name[-1] not in "+-":
            v, e = self.interval(int(name[5]), form)
            return v, e, abs(v)
        if name in PM_BASIS:
            j = int(name[5])
            sign = 1 if name.endswith("+") else -1
            a, ea = self.interval(j, form, 1)
            # the image cycle pairs with iota^* of the integrand: the flipped sheet
            b, eb = self.interval(j, form, -1)
            return 0.5 * (a + sign * b), 0.5 * (ea + eb), 0.5 * (abs(a) + abs(b))
        raise UnknownSymbolError(name)


def _cycle_period(cache: _PeriodCache, cyc: CycleClass, form: FormDescriptor) -> tuple[complex, float, float]:
    """Value, error estimate and the sum of absolute contributions."""
    spec = cache.spec
    if cyc.dual != spec.dual:
        raise UnknownSymbolError("cycle dual flag does not match the twist")
    val, err, scale = 0j, 0.0, 0.0
    lam = {k: c for k, c in cyc.terms.items() if k.startswith("lambda")}
    for name, coef in cyc.terms.items():
        if name in lam:
            continue
        v, e, sz = cache.symbol(name, form)
        val += coef * v
        err += abs(coef) * e
        scale += abs(coef) * sz
    if lam:
        if spec.f_twist:
            raise UnknownSymbolError("lambda expansions are only available for T and its dual")
        vec = expand_in_pm_basis(CycleClass(lam, cyc.dual), spec.exponents)
        for coef, name in zip(vec, PM_BASIS):
            if coef != 0:
                v, e, sz = cache.symbol(name, form)
                val += complex(coef) * v
                err += abs(coef) * e
                scale += abs(coef) * sz
    return val, err, scale


def period_matrix(
    cycles: Sequence[CycleClass],
    forms: Sequence[FormDescriptor],
    spec: TwistSpec,
    cfg: BranchConfig,
    q: QuadratureSpec | None = None,
    row_labels: Sequence[str] | None = None,
) -> PeriodMatrix:
    """``[int_{cycle_i} T_spec * form_k]`` with per-entry error estimates."""
    q = q or QuadratureSpec()
    cache = _PeriodCache(spec, cfg, q)
    n, m = len(cycles), len(forms)
    vals = np.zeros((n, m), dtype=complex)
    errs = np.zeros((n, m))
    scales = np.zeros((n, m))
    for i, cyc in enumerate(cycles):
        for k, form in enumerate(forms):
            vals[i, k], errs[i, k], scales[i, k] = _cycle_period(cache, cyc, form)
    if row_labels is None:
        row_labels = tuple(" + ".join(sorted(c.terms)) for c in cycles)
    return PeriodMatrix(tuple(row_labels), tuple(f.name for f in forms), vals, errs, spec, q.tol, scales)


def pm_cycles(dual: bool = False) -> list[CycleClass]:
    return [CycleClass.of(n, dual) for n in PM_BASIS]


# -- special functions -----------------------------------------------------


def gamma_fn(s: complex) -> complex:
    """Gamma function; :class:`PoleError` at non-positive integers."""
    s = complex(s)
    if s.real <= 0.5 and abs(s.imag) < 1e-14 and abs(s.real - round(s.real)) < 1e-14:
        raise PoleError(f"Gamma has a pole at {s.real:g}")
    return complex(special.gamma(s))


def _unpack(p: LauricellaParams | Sequence[complex]) -> tuple[complex, ...]:
    if isinstance(p, LauricellaParams):
        return tuple(complex(x) for x in (p.a, p.b1, p.b2, p.b3, p.c))
    a, b1, b2, b3, c = (complex(x) for x in p)
    return a, b1, b2, b3, c


def fd_series(
    p: LauricellaParams | Sequence[complex],
    z: Sequence[complex],
    tol: float = 1e-15,
    max_order: int = 20000,
) -> complex:
    """Lauricella ``F_D(a; b1, b2, b3; c; z1, z2, z3)`` by its power series.

    The triple sum is regrouped by total degree ``N``:
    ``F_D = sum_N (a)_N/(c)_N d_N`` with ``d_N`` the Taylor coefficients of
    ``prod (1 - z_i t)**(-b_i)``, built from the logarithmic-derivative
    recurrence. The tail bound uses the majorant ``prod (1 - |z_i| t)**(-|b_i|)``
    and its Cauchy estimate at radius ``R = |z|_max**(-1/2)``.
    """
    a, b1, b2, b3, c = _unpack(p)
    b = np.array([b1, b2, b3])
    z = np.array([complex(x) for x in z])
    r = np.abs(z)
    if np.any(r >= 1):
        raise DivergenceError(f"F_D series needs |z_i| < 1, got {r.max():g}")
    if abs(c.imag) < 1e-14 and c.real <= 0 and abs(c.real - round(c.real)) < 1e-14:
        raise PoleError(f"c = {c.real:g} is a non-positive integer")
    rmax = float(r.max())
    if rmax == 0:
        return 1 + 0j
    R = rmax**-0.5
    majorant_at_R = float(np.prod((1 - r * R) ** (-np.abs(b))))
    s_coef: list[complex] = []
    d = [1 + 0j]
    ratio = 1 + 0j
    total = 1 + 0j
    for N in range(0, max_order):
        s_coef.append(complex(np.sum(b * z ** (N + 1))))
        d.append(sum(s_coef[k] * d[N - k] for k in range(N + 1)) / (N + 1))
        ratio *= (a + N) / (c + N)
        total += ratio * d[N + 1]
        if N % 8 == 0 and N > 4:
            n0 = N + 1
            if n0 <= abs(c):
                continue
            # |a + k| / |c + k| <= 1 + |a - c| / (k - |c|) for k >= n0
            rho = 1 + abs(a - c) / (n0 - abs(c))
            qq = rho / R
            if qq < 1:
                bound = abs(ratio) * majorant_at_R * R ** (-n0) * qq / (1 - qq)
                if bound <= tol * max(abs(total), 1e-300):
                    return total
    raise TailBoundError(f"F_D tail bound not reached within {max_order} orders")


def fd_euler_exponents(p: LauricellaParams | Sequence[complex]) -> np.ndarray:
    """Exponents of ``t**(b1+b2+b3-c) (t-1)**(c-a-1) prod (t-z_k)**(-b_k)`` at ``0, z1, z2, z3, 1``."""
    a, b1, b2, b3, c = _unpack(p)
    return np.array([b1 + b2 + b3 - c, -b1, -b2, -b3, c - a - 1])


def fd_euler_integral(
    p: LauricellaParams | Sequence[complex],
    cfg: BranchConfig,
    q: QuadratureSpec | None = None,
) -> complex:
    """``int_1^inf`` of the Euler integrand on the base branch.

    Equals ``Gamma(a) Gamma(c-a) / Gamma(c) * F_D``; works for degenerate
    parameters (e.g. ``b2 = b3 = 0``) that the exponent vector would reject.
    """
    q = q or QuadratureSpec()
    f, lo, hi = interval_power_product(4, fd_euler_exponents(p), cfg)
    v, _ = _integrate(f, lo, hi, q)
    return v


def fd_via_quadrature(p: LauricellaParams | Sequence[complex], cfg: BranchConfig, q: QuadratureSpec | None = None) -> complex:
    a, _, _, _, c = _unpack(p)
    return fd_euler_integral(p, cfg, q) * gamma_fn(c) / (gamma_fn(a) * gamma_fn(c - a))


def beta_fn(x: complex, y: complex) -> complex:
    return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y)


