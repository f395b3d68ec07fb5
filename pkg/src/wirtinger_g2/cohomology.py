"""Differential forms, closed-form cohomology intersection matrices and a
residue (Laurent series) oracle for cohomology intersection numbers on Y.

Forms are kept as finite sums of monomials
``coef * prod_k (t - z_k)**n_k * y**m dt`` with integer ``n_k`` and
``m in {0, -1}``; the coefficients never depend on the branch points, so the
same descriptor works for every configuration.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateConfigError, ResonanceError, TruncationError
from .multivalued import BranchConfig, BranchState
from .params import ExponentVector, TwistSpec, validate_admissible

TWO_PI_I = 2j * math.pi

# -- form descriptors ------------------------------------------------------


@dataclass(frozen=True)
class Term:
    coef: complex
    powers: tuple[int, int, int, int, int]

    def times(self, other: "Term") -> "Term":
        return Term(self.coef * other.coef, tuple(a + b for a, b in zip(self.powers, other.powers)))


def _unit(k: int, n: int = -1) -> tuple[int, ...]:
    p = [0] * 5
    p[k] = n
    return tuple(p)


@dataclass(frozen=True)
class FormDescriptor:
    name: str
    kind: str
    index: int
    terms: tuple[Term, ...]
    y_power: int = 0
    eigenvalue: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("genus0", "genus2"):
            raise ValueError(f"unknown form kind {self.kind!r}")
        if self.y_power not in (0, -1):
            raise ValueError("only y**0 and y**-1 are supported")

    def rational_value(self, x: complex, cfg: BranchConfig) -> complex:
        """Coefficient of ``dt`` without the ``y`` factor."""
        d = x - cfg.points
        return complex(sum(t.coef * np.prod(d ** np.array(t.powers, dtype=float)) for t in self.terms))

    def evaluate(self, state: BranchState) -> complex:
        """Coefficient of ``dx`` at a point of X (uses the tracked ``y``)."""
        v = self.rational_value(state.x, state.cfg)
        if self.y_power:
            v /= state.y
        return v

    def multiplied(self, terms: Sequence[Term], name: str, y_power: int | None = None) -> "FormDescriptor":
        new = tuple(a.times(b) for a in self.terms for b in terms)
        return FormDescriptor(
            name,
            self.kind,
            self.index,
            _collect(new),
            self.y_power if y_power is None else y_power,
            self.eigenvalue,
        )

    def scaled(self, s: complex) -> "FormDescriptor":
        return FormDescriptor(
            self.name, self.kind, self.index,
            tuple(Term(t.coef * s, t.powers) for t in self.terms),
            self.y_power, self.eigenvalue,
        )


def _collect(terms: Sequence[Term]) -> tuple[Term, ...]:
    acc: dict[tuple[int, ...], complex] = {}
    for t in terms:
        acc[t.powers] = acc.get(t.powers, 0) + t.coef
    return tuple(Term(c, p) for p, c in acc.items() if c != 0)


# dlog(t - z_4) - dlog(t - z_k)
def _dlog_pair(k: int | None) -> tuple[Term, ...]:
    terms = [Term(1.0, _unit(4))]
    if k is not None:
        terms.append(Term(-1.0, _unit(k)))
    return tuple(terms)


def genus0_forms() -> list[FormDescriptor]:
    """phi_1..phi_4 on Y: dt/(t-1), dt/(t(t-1)), (1-z_1)dt/((t-1)(t-z_1)), (1-z_2)dt/((t-1)(t-z_2))."""
    specs = [None, 0, 1, 2]
    return [
        FormDescriptor(f"phi{i + 1}", "genus0", i + 1, _dlog_pair(k))
        for i, k in enumerate(specs)
    ]


#: f**2 = t(t-1)/((t-z1)(t-z2)(t-z3)) as a monomial
F_SQUARED = (Term(1.0, (1, -1, -1, -1, 1)),)
#: f without its 1/y factor: x(x-1)
F_NUMERATOR = (Term(1.0, (1, 0, 0, 0, 1)),)


def genus2_forms(cfg: BranchConfig | None = None) -> list[FormDescriptor]:
    """varphi_1..varphi_8 on X; varphi_{i+4} = f * varphi_i.

    ``cfg`` is accepted for interface symmetry only; the descriptors do not
    depend on the branch points.
    """
    out = []
    for phi in genus0_forms():
        out.append(FormDescriptor(f"varphi{phi.index}", "genus2", phi.index, phi.terms, 0, +1))
    for phi in genus0_forms():
        odd = phi.multiplied(F_NUMERATOR, f"varphi{phi.index + 4}", y_power=-1)
        out.append(FormDescriptor(odd.name, "genus2", phi.index + 4, odd.terms, -1, -1))
    return out


def order_on_curve(form: FormDescriptor, p: int) -> int:
    """Order of vanishing of a genus-2 form at ``P_p`` on the compact curve.

    Local parameters: ``x - z_p = w**2`` (``y ~ w``, ``dx ~ w dw``) at finite
    points, ``x = s**-2`` (``y ~ s**-5``, ``dx ~ s**-3 ds``) at infinity.
    The minimum over the monomials is returned (a lower bound if terms cancel).
    """
    m = form.y_power
    orders = []
    for t in form.terms:
        if p < 5:
            orders.append(2 * t.powers[p] + m + 1)
        else:
            orders.append(-2 * sum(t.powers) - 5 * m - 3)
    return min(orders)


# -- Laurent series machinery ---------------------------------------------


@dataclass
class LaurentSeries:
    """``sum_k coeffs[k - low] * u**k`` in the local coordinate at ``point``.

    ``point`` is 0..4 for ``z_p`` (``u = t - z_p``) or 5 for infinity
    (``u = 1/t``); ``alpha`` is the local exponent of the loaded twist.
    """

    point: int
    low: int
    coeffs: np.ndarray
    alpha: complex = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def coeff(self, k: int) -> complex:
        i = k - self.low
        if 0 <= i < len(self.coeffs):
            return complex(self.coeffs[i])
        return 0j

    def residue(self) -> complex:
        return self.coeff(-1)

    def pole_order(self) -> int:
        nz = np.nonzero(np.abs(self.coeffs) > 0)[0]
        if len(nz) == 0:
            return 0
        return max(0, -(self.low + int(nz[0])))

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        low = min(self.low, other.low)
        high = min(self.high, other.high)
        out = np.zeros(high - low + 1, dtype=complex)
        for k in range(low, high + 1):
            out[k - low] = self.coeff(k) + other.coeff(k)
        return LaurentSeries(self.point, low, out, self.alpha)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        out = np.convolve(self.coeffs[:n], other.coeffs[:n])[:n]
        return LaurentSeries(self.point, self.low + other.low, out, self.alpha)


def _binomial_series(n: int, r: complex, length: int) -> np.ndarray:
    """Coefficients of ``(1 + r u)**n``."""
    b = np.empty(length, dtype=complex)
    b[0] = 1.0
    for k in range(1, length):
        b[k] = b[k - 1] * (n - k + 1) / k * r
    return b


def _term_series(term: Term, p: int, z: np.ndarray, length: int) -> LaurentSeries:
    """Expansion of ``term * dt`` in the local coordinate at point ``p``."""
    coeffs = np.zeros(length, dtype=complex)
    coeffs[0] = term.coef
    low = 0
    if p < 5:
        for k, n in enumerate(term.powers):
            if n == 0:
                continue
            if k == p:
                low += n
                continue
            d = z[p] - z[k]
            coeffs = np.convolve(coeffs, d**n * _binomial_series(n, 1 / d, length))[:length]
        return LaurentSeries(p, low, coeffs)
    # t = 1/s, dt = -ds/s**2, (1/s - z_k)**n = s**-n (1 - z_k s)**n
    coeffs[0] = -term.coef
    low = -2
    for k, n in enumerate(term.powers):
        if n == 0:
            continue
        low -= n
        if z[k] != 0:
            coeffs = np.convolve(coeffs, _binomial_series(n, -z[k], length))[:length]
    return LaurentSeries(p, low, coeffs)


def form_series(form: FormDescriptor, p: int, cfg: BranchConfig, length: int = 16) -> LaurentSeries:
    if form.y_power:
        raise ValueError("Laurent oracle works on Y; forms with 1/y are not single-valued there")
    z = cfg.points
    parts = [_term_series(t, p, z, length) for t in form.terms]
    low = min(s.low for s in parts)
    out = np.zeros(length, dtype=complex)
    for s in parts:
        shift = s.low - low
        out[shift:] += s.coeffs[: length - shift]
    return LaurentSeries(p, low, out)


def connection_series(alpha: Sequence[complex], p: int, cfg: BranchConfig, length: int = 16) -> LaurentSeries:
    """``dlog T_eff = sum_k alpha_k dt/(t - z_k)`` at ``p`` (``alpha_k = 2 e_k``)."""
    terms = tuple(Term(complex(a), _unit(k)) for k, a in enumerate(alpha[:5]) if a != 0)
    form = FormDescriptor("omega", "genus0", 0, terms)
    s = form_series(form, p, cfg, length)
    s.alpha = s.coeff(-1)
    return s


def local_primitive(phi: LaurentSeries, omega: LaurentSeries, upto: int) -> LaurentSeries:
    """Solve ``dF + omega F = phi`` for the Laurent series of F up to ``u**upto``.

    Recurrence for the coefficient of ``u**(k-1)``:
    ``(k + alpha) f_k + sum_{l>=0} w_l f_{k-1-l} = a_{k-1}``.
    """
    alpha = omega.alpha
    kmin = phi.low + 1
    if upto < kmin:
        return LaurentSeries(phi.point, kmin, np.zeros(0, dtype=complex), alpha)
    if omega.high < upto - kmin:
        raise TruncationError("connection series too short for the requested order")
    f = np.zeros(upto - kmin + 1, dtype=complex)
    for k in range(kmin, upto + 1):
        denom = k + alpha
        if abs(denom) < 1e-8:
            raise ResonanceError(f"local exponent {alpha} resonant at order {k}")
        acc = phi.coeff(k - 1)
        for l in range(0, k - kmin):
            acc -= omega.coeff(l) * f[k - 1 - l - kmin]
        f[k - kmin] = acc / denom
    return LaurentSeries(phi.point, kmin, f, alpha)


def residue_intersection(
    phi: FormDescriptor,
    psi: FormDescriptor,
    spec: TwistSpec,
    cfg: BranchConfig,
    length: int = 16,
) -> complex:
    """``2 pi i sum_p Res_p(F_p psi)`` with ``nabla F_p = phi`` near each puncture.

    ``spec`` is the twist of ``phi``; ``psi`` pairs with the dual connection.
    """
    alpha = 2 * spec.effective_array()
    total = 0j
    for p in range(6):
        a = form_series(phi, p, cfg, length)
        b = form_series(psi, p, cfg, length)
        upto = -1 - b.low
        if upto < a.low + 1:
            continue
        if upto - a.low > length - 4:
            raise TruncationError(f"truncation order {length} too small at point {p}")
        om = connection_series(alpha, p, cfg, length)
        F = local_primitive(a, om, upto)
        total += sum(F.coeff(k) * b.coeff(-1 - k) for k in range(F.low, upto + 1))
    return TWO_PI_I * total


def residue_sum(phi: FormDescriptor, cfg: BranchConfig) -> complex:
    """Sum of the residues of a rational form over all six points (always 0)."""
    return sum(form_series(phi, p, cfg).residue() for p in range(6))


# -- closed forms ----------------------------------------------------------


@dataclass(frozen=True)
class IntersectionMatrix:
    entries: np.ndarray
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    pairing: str

    def __post_init__(self) -> None:
        if self.entries.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError("matrix shape does not match its labels")
        if self.pairing not in ("h", "ch", "h0", "ch0", "h-f", "ch-f", "h0-f", "ch0-f"):
            raise ValueError(f"unknown pairing tag {self.pairing!r}")

    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))

    def block(self, rows: slice, cols: slice) -> np.ndarray:
        return self.entries[rows, cols]


def _as_spec(x: ExponentVector | TwistSpec) -> TwistSpec:
    return x if isinstance(x, TwistSpec) else TwistSpec(x)


def y_cohomology_core(e: Sequence) -> list[list]:
    """The bracketed 4x4 matrix (without ``2 pi i``) for exponents ``e``."""
    e0, e1, e2, _, e4, e5 = e
    d = (e5, e0, e1, e2)
    off = 1 / (2 * e4)
    return [[off + (1 / (2 * d[i]) if i == j else 0) for j in range(4)] for i in range(4)]


def intersect_Y_cohomology(v: ExponentVector | TwistSpec, twisted: TwistSpec | None = None) -> IntersectionMatrix:
    """Cohomology intersection matrix of phi_1..phi_4 on Y for a twist."""
    spec = twisted if twisted is not None else _as_spec(v)
    validate_admissible(spec.effective_vector(), check_sum=False)
    core = np.array(y_cohomology_core([complex(x) for x in spec.effective()]), dtype=complex)
    tag = "ch0-f" if spec.f_twist else "ch0"
    labels = tuple(f"phi{i}" for i in range(1, 5))
    return IntersectionMatrix(TWO_PI_I * core, labels, labels, tag)


def c_plus_block(v: ExponentVector) -> list[list]:
    """C(1); exact rationals when ``v`` is exact."""
    c0, c1, c2, _, c4, c5 = v.c
    d = (c5, c0, c1, c2)
    return [[(c4 + d[i]) / (c4 * d[i]) if i == j else 1 / c4 for j in range(4)] for i in range(4)]


def c_minus_block(v: ExponentVector, z: Sequence) -> list[list]:
    """C(-1) exactly as in the closed form; exact when all inputs are rational."""
    c0, c1, c2, c3, c4, _ = v.c
    z1, z2, z3 = z
    half = Fraction(1, 2) if v.exact else 0.5
    p1, m1 = 2 * c1 + half, 2 * c1 - half
    p2, m2 = 2 * c2 + half, 2 * c2 - half
    c33 = (1 - z1) * z1 / (m1 * p1 * (z1 - z3)) * (
        (2 * c0 - 2 * c1) / z1
        + (2 * c2 + 2 * c1) / (z1 - z2)
        + (2 * c3 + 2 * c1) / (z1 - z3)
        + (2 * c1 + 2 * c4) / (z1 - 1)
    )
    c34 = -1 / (z1 - z2) * (z1 * (1 - z2) / (m1 * (z1 - z3)) + z2 * (1 - z1) / (p2 * (z2 - z3)))
    c43 = -1 / (z1 - z2) * (z1 * (1 - z2) / (p1 * (z1 - z3)) + z2 * (1 - z1) / (m2 * (z2 - z3)))
    c44 = -(1 - z2) * z2 / (m2 * p2 * (z2 - z3)) * (
        (2 * c0 - 2 * c2) / z2
        + (2 * c1 + 2 * c2) / (z2 - z1)
        + (2 * c3 + 2 * c2) / (z2 - z3)
        + (2 * c2 + 2 * c4) / (z2 - 1)
    )
    zero = 0 * c0
    inner = [
        [zero, zero, -z1 / (p1 * (z1 - z3)), z2 / (p2 * (z2 - z3))],
        [zero, zero, -1 / (p1 * (z1 - z3)), 1 / (p2 * (z2 - z3))],
        [-z1 / (m1 * (z1 - z3)), -1 / (m1 * (z1 - z3)), c33, c34],
        [z2 / (m2 * (z2 - z3)), 1 / (m2 * (z2 - z3)), c43, c44],
    ]
    pre = 2 / (z1 - z2)
    return [[pre * x for x in row] for row in inner]


def _check_z(z: Sequence) -> None:
    pts = [0, 1, *z]
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            if abs(complex(pts[i]) - complex(pts[k])) < 1e-14:
                raise DegenerateConfigError(f"branch points {pts[i]} and {pts[k]} coincide")


def build_C(v: ExponentVector, cfg: BranchConfig | Sequence) -> IntersectionMatrix:
    """8x8 intersection matrix of varphi_1..varphi_8 on X."""
    validate_admissible(v)
    z = (cfg.z1, cfg.z2, cfg.z3) if isinstance(cfg, BranchConfig) else tuple(cfg)
    _check_z(z)
    vf = v if not v.exact else ExponentVector(tuple(complex(x) for x in v.c))
    plus = np.array(c_plus_block(vf), dtype=complex)
    minus = np.array(c_minus_block(vf, [complex(x) for x in z]), dtype=complex)
    out = np.zeros((8, 8), dtype=complex)
    out[:4, :4] = plus
    out[4:, 4:] = minus
    labels = tuple(f"varphi{i}" for i in range(1, 9))
    return IntersectionMatrix(TWO_PI_I * out, labels, labels, "ch")


def det_C_plus_closed(v: ExponentVector):
    c0, c1, c2, c3, c4, c5 = v.c
    return -c3 / (c0 * c1 * c2 * c4 * c5)


def det_C_minus_closed(v: ExponentVector, z: Sequence):
    _, c1, c2, *_ = v.c
    z1, z2, z3 = z
    return 2**8 / (
        (z1 - z2) ** 2 * (z1 - z3) ** 2 * (z2 - z3) ** 2
        * (4 * c1 - 1) * (4 * c1 + 1) * (4 * c2 - 1) * (4 * c2 + 1)
    )


def exact_det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                fac = a[r][col] / a[col][col]
                a[r] = [x - fac * y for x, y in zip(a[r], a[col])]
    return det


def c_minus_via_residues(v: ExponentVector, cfg: BranchConfig) -> np.ndarray:
    """C(-1) (times 2 pi i) from ``2 <phi_i, f**2 phi_j>_{ch,0,f}`` on Y."""
    spec = TwistSpec(v, f_twist=1)
    forms = genus0_forms()
    out = np.zeros((4, 4), dtype=complex)
    for i, phi in enumerate(forms):
        for j, psi in enumerate(forms):
            out[i, j] = 2 * residue_intersection(phi, psi.multiplied(F_SQUARED, f"g*{psi.name}"), spec, cfg)
    return out


def c_plus_via_residues(v: ExponentVector, cfg: BranchConfig) -> np.ndarray:
    """C(1) (times 2 pi i) from ``2 <phi_i, phi_j>_{ch,0}``."""
    spec = TwistSpec(v)
    forms = genus0_forms()
    return np.array(
        [[2 * residue_intersection(a, b, spec, cfg) for b in forms] for a in forms],
        dtype=complex,
    )


def phase(u) -> complex:
    return cmath.exp(TWO_PI_I * complex(u))
