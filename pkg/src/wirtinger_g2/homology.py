"""Twisted-cycle algebra on X and closed-form homology intersection matrices.

Cycles are formal linear combinations over a fixed registry of symbols.
Coefficients are complex numbers, or sympy expressions in the symbols
``c0..c4`` when the exponents come from :func:`symbolic_exponents`; the
latter mode is used for exact round-trip identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import sympy

from .cohomology import IntersectionMatrix
from .errors import UnknownSymbolError
from .params import ExponentVector, TwistSpec, unit_phase, validate_admissible

PAIRS = ("01", "12", "23", "34")
INTERVALS = ("sigma01", "sigma12", "sigma23", "sigma34")
LAMBDAS = ("lambda1", "lambda2", "lambda3", "lambda4")
PM_BASIS = tuple(f"{s}+" for s in INTERVALS) + tuple(f"{s}-" for s in INTERVALS)
REGISTRY = frozenset(INTERVALS + ("sigma45",) + LAMBDAS + PM_BASIS)

#: pr_* of each interval cycle on X is the interval cycle on Y
PUSHFORWARD = {f"sigma{j}{j + 1}": f"sigma_Y{j}{j + 1}" for j in range(5)}


@dataclass(frozen=True)
class SymbolicExponents:
    """``c0..c4`` as sympy symbols with ``c5 = -(c0 + ... + c4)``."""

    c: tuple = field(
        default_factory=lambda: (lambda s: (*s, -sum(s)))(sympy.symbols("c0:5"))
    )
    exact: bool = False


def symbolic_exponents() -> SymbolicExponents:
    return SymbolicExponents()


Exponents = ExponentVector | SymbolicExponents


def _symbolic(x) -> bool:
    return isinstance(x, sympy.Basic) and bool(x.free_symbols)


def e(u):
    """``exp(2 pi i u)`` for numbers, Fractions or sympy expressions."""
    if _symbolic(u):
        return sympy.exp(2 * sympy.pi * sympy.I * u)
    return unit_phase(u)


def _cs(v: Exponents, dual: bool) -> tuple:
    c = tuple(v.c)
    return tuple(-x for x in c) if dual else c


def pair_phase_args(v: Exponents, dual: bool = False) -> dict[str, object]:
    """The ``u`` in ``e(u)`` attached to each interval pair."""
    c0, c1, c2, c3, c4, _ = _cs(v, dual)
    return {
        "01": c0 - c1,
        "12": c0 - 2 * c1 - c2,
        "23": c0 - 2 * c1 + c3,
        "34": c0 - 2 * c1 - c4,
    }


def pair_phases(v: Exponents, dual: bool = False) -> dict[str, object]:
    return {k: e(u) for k, u in pair_phase_args(v, dual).items()}


# -- cycle classes ---------------------------------------------------------


def _is_zero(x) -> bool:
    return x == 0


@dataclass(frozen=True)
class CycleClass:
    """``sum coef * symbol`` with all symbols sharing one dual flag."""

    terms: Mapping[str, object]
    dual: bool = False

    def __post_init__(self) -> None:
        for name in self.terms:
            if name not in REGISTRY:
                raise UnknownSymbolError(name)
        clean = {k: v for k, v in self.terms.items() if not _is_zero(v)}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def of(cls, name: str, dual: bool = False) -> "CycleClass":
        return cls({name: 1}, dual)

    def coeff(self, name: str):
        if name not in REGISTRY:
            raise UnknownSymbolError(name)
        return self.terms.get(name, 0)

    def _check(self, other: "CycleClass") -> None:
        if self.dual != other.dual:
            raise ValueError("cannot combine cycles with different dual flags")

    def __add__(self, other: "CycleClass") -> "CycleClass":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return CycleClass(out, self.dual)

    def __neg__(self) -> "CycleClass":
        return CycleClass({k: -v for k, v in self.terms.items()}, self.dual)

    def __sub__(self, other: "CycleClass") -> "CycleClass":
        return self + (-other)

    def __mul__(self, s) -> "CycleClass":
        return CycleClass({k: s * v for k, v in self.terms.items()}, self.dual)

    __rmul__ = __mul__

    def simplified(self) -> "CycleClass":
        return CycleClass(
            {k: sympy.simplify(v) if isinstance(v, sympy.Basic) else v for k, v in self.terms.items()},
            self.dual,
        )

    def symbols(self) -> set[str]:
        return set(self.terms)


def _sym(name: str, dual: bool) -> CycleClass:
    return CycleClass.of(name, dual)


def _partner(pair: str, dual: bool) -> CycleClass:
    """The lambda combination paired with an interval: lambda_3, lambda_1 - lambda_2, lambda_4, lambda_2."""
    if pair == "01":
        return _sym("lambda3", dual)
    if pair == "12":
        return _sym("lambda1", dual) - _sym("lambda2", dual)
    if pair == "23":
        return _sym("lambda4", dual)
    return _sym("lambda2", dual)


def eigen_basis(v: Exponents, dual: bool = False) -> list[CycleClass]:
    """``sigma_{j,j+1,+-}`` over ``{sigma_{j,j+1}, lambda_k}``, ordered (+ block, - block)."""
    E = pair_phases(v, dual)
    out = []
    for sign in (1, -1):
        for pair in PAIRS:
            s = _sym(f"sigma{pair}", dual)
            cls_ = (-sign / (2 * E[pair])) * (_partner(pair, dual) - (1 + sign * E[pair]) * s)
            out.append(cls_)
    return out


def _involution_symbol(name: str, v: Exponents, dual: bool) -> CycleClass:
    E = pair_phases(v, dual)
    if name == "sigma45":
        raise UnknownSymbolError("sigma45 (no involution formula is available)")
    if name.endswith("+"):
        return _sym(name, dual)
    if name.endswith("-"):
        return -_sym(name, dual)
    if name.startswith("sigma"):
        pair = name[5:]
        return (-1 / E[pair]) * (_partner(pair, dual) - _sym(name, dual))
    # lambda images follow from partner = sigma - E * iota(sigma) by linearity
    def partner_image(pair: str) -> CycleClass:
        s = f"sigma{pair}"
        return _involution_symbol(s, v, dual) - E[pair] * _sym(s, dual)

    if name == "lambda3":
        return partner_image("01")
    if name == "lambda4":
        return partner_image("23")
    if name == "lambda2":
        return partner_image("34")
    return partner_image("12") + partner_image("34")


def involution_pushforward(c: CycleClass, v: Exponents) -> CycleClass:
    """Linear extension of the displayed ``iota_*`` formulas."""
    out = CycleClass({}, c.dual)
    for name, coef in c.terms.items():
        out = out + coef * _involution_symbol(name, v, c.dual)
    return out


def _expand_symbol(name: str, v: Exponents, dual: bool) -> list:
    E = pair_phases(v, dual)
    vec = [0] * 8
    idx = {p: i for i, p in enumerate(PAIRS)}
    if name in PM_BASIS:
        vec[PM_BASIS.index(name)] = 1
        return vec
    if name.startswith("sigma") and name != "sigma45":
        i = idx[name[5:]]
        vec[i] = vec[i + 4] = 1
        return vec
    if name == "sigma45":
        raise UnknownSymbolError("sigma45 is not in the span of the eigen basis formulas")

    def put(pair: str) -> None:
        i = idx[pair]
        vec[i] += 1 - E[pair]
        vec[i + 4] += 1 + E[pair]

    if name == "lambda1":
        put("12")
        put("34")
    elif name == "lambda2":
        put("34")
    elif name == "lambda3":
        put("01")
    elif name == "lambda4":
        put("23")
    return vec


def expand_in_pm_basis(c: CycleClass, v: Exponents):
    """Coefficients of ``c`` on ``(sigma01+, ..., sigma34+, sigma01-, ..., sigma34-)``."""
    vec = [0] * 8
    for name, coef in c.terms.items():
        part = _expand_symbol(name, v, c.dual)
        vec = [a + coef * b for a, b in zip(vec, part)]
    if any(isinstance(x, sympy.Basic) for x in vec):
        return [sympy.simplify(x) for x in vec]
    return np.array(vec, dtype=complex)


def change_of_basis_Q(v: Exponents, dual: bool = False):
    """``Q`` with ``(sigma.., lambda..) = (pm basis) Q``, its determinant and the closed form."""
    cols = [expand_in_pm_basis(_sym(n, dual), v) for n in INTERVALS + LAMBDAS]
    c0, c1, c2, c3, c4, _ = _cs(v, dual)
    closed = -16 * e(4 * c0 - 7 * c1 - c2 + c3 - c4)
    if any(isinstance(x, sympy.Basic) for col in cols for x in col):
        Q = sympy.Matrix(8, 8, lambda i, j: cols[j][i])
        return Q, sympy.simplify(Q.det()), closed
    Q = np.column_stack(cols)
    return Q, complex(np.linalg.det(Q)), complex(closed)


def mw_relation(v: Exponents, dual: bool = False) -> tuple[CycleClass, CycleClass]:
    """The displayed linear relation among lambda_k and the interval cycles."""
    c0, c1, c2, c3, c4, c5 = _cs(v, dual)
    lam = [_sym(n, dual) for n in LAMBDAS]
    lhs = (
        (1 - e(c5 - c1)) * lam[0]
        + (e(-c0 - 2 * c1 + c3) - e(c5 - c1)) * lam[1]
        + (e(c0 + c5) - e(-c0 - c1)) * lam[2]
        + (e(-c0 - 2 * c1 - c4) - e(-c0 - 2 * c1 - c2)) * lam[3]
    )
    partial = (c0, c0 + c1, c0 + c1 + c2, c0 + c1 + c2 + c3)
    rhs = CycleClass({}, dual)
    for name, s in zip(INTERVALS, partial):
        rhs = rhs + (1 - e(-4 * s)) * _sym(name, dual)
    rhs = rhs + (1 - e(4 * c5)) * _sym("sigma45", dual)
    return lhs, rhs


def corollary_coefficients(v: Exponents, sign: int, dual: bool = False) -> tuple[object, list]:
    """Displayed coefficients ``(k45, [k01, k12, k23, k34])`` of the period corollary.

    ``k45 * int_{sigma45} T phi = sum_j k_j int_{sigma_j} T phi`` for
    ``phi`` in the ``sign`` eigenspace.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c0, c1, c2, c3, c4, c5 = _cs(v, dual)
    E = pair_phases(v, dual)
    k01 = (e(c0 + c5) - e(-c0 - c1)) * (1 - sign * E["01"]) - (1 - e(-4 * c0))
    k12 = (1 - e(c5 - c1)) * (1 - sign * E["12"]) - (1 - e(-4 * (c0 + c1)))
    k23 = (e(-c0 - 2 * c1 - c4) - e(-c0 - 2 * c1 - c2)) * (1 - sign * E["23"]) - (
        1 - e(-4 * (c0 + c1 + c2))
    )
    k34 = (1 + e(-c0 - 2 * c1 + c3) - 2 * e(c5 - c1)) * (1 - sign * E["34"]) - (
        1 - e(-4 * (c0 + c1 + c2 + c3))
    )
    return 1 - e(4 * c5), [k01, k12, k23, k34]


def corollary_from_relation(v: Exponents, sign: int, dual: bool = False) -> tuple[object, list]:
    """Same coefficients, derived by expanding the relation on the eigen basis.

    Pairing with ``phi`` in the ``sign`` eigenspace keeps the ``sign`` half of
    the expansion, and ``int_{sigma_{j,sign}} T phi = int_{sigma_j} T phi``.
    """
    lhs, rhs = mw_relation(v, dual)
    k45 = rhs.coeff("sigma45")
    rest = CycleClass({k: val for k, val in rhs.terms.items() if k != "sigma45"}, dual)
    diff = expand_in_pm_basis(lhs - rest, v)
    off = 0 if sign == 1 else 4
    return k45, [diff[off + i] for i in range(4)]


# -- intersection matrices -------------------------------------------------


def y_homology_core(E: Sequence) -> list[list]:
    """The tridiagonal 4x4 matrix in ``E_j = e(2 e_j)``, j = 0..4."""
    m = [[0] * 4 for _ in range(4)]
    for i in range(4):
        a, b = E[i], E[i + 1]
        m[i][i] = (1 - a * b) / ((1 - a) * (1 - b))
        if i < 3:
            m[i][i + 1] = 1 / (1 - b)
            m[i + 1][i] = b / (1 - b)
    return m


def intersect_Y_homology(spec: TwistSpec | ExponentVector) -> IntersectionMatrix:
    """Intersection matrix of ``sigma01..sigma34`` on Y for a twist."""
    if isinstance(spec, ExponentVector):
        spec = TwistSpec(spec)
    validate_admissible(spec.effective_vector(), check_sum=False)
    E = [e(2 * x) for x in spec.effective()]
    m = np.array(y_homology_core(E), dtype=complex)
    labels = tuple(s.replace("sigma", "sigma_Y") for s in INTERVALS)
    return IntersectionMatrix(m, labels, labels, "h0-f" if spec.f_twist else "h0")


def h_blocks(v: Exponents, dual: bool = False) -> tuple[list[list], list[list]]:
    """``H(1)`` and ``H(-1)``; the latter replaces every ``e(2c_j)`` by ``-e(2c_j)``."""
    E = [e(2 * x) for x in _cs(v, dual)]
    return y_homology_core(E), y_homology_core([-x for x in E])


def build_H(v: ExponentVector) -> IntersectionMatrix:
    """``H = 1/2 blockdiag(H(1), H(-1))`` for the eigen basis."""
    validate_admissible(v)
    plus, minus = h_blocks(v)
    out = np.zeros((8, 8), dtype=complex)
    out[:4, :4] = np.array(plus, dtype=complex)
    out[4:, 4:] = np.array(minus, dtype=complex)
    return IntersectionMatrix(0.5 * out, PM_BASIS, PM_BASIS, "h")


def det_H_closed(v: Exponents, sign: int):
    """Determinant of ``H(sign)``: ``(1 - s e(-2c5)) / prod (1 - s e(2c_j))`` with ``s = sign``."""
    c = v.c
    num = 1 - sign * e(-2 * c[5])
    den = 1
    for x in c[:5]:
        den = den * (1 - sign * e(2 * x))
    return num / den


def classes_equal(a: CycleClass, b: CycleClass, tol: float = 1e-12) -> bool:
    """Coefficientwise equality; symbolic coefficients are simplified first."""
    if a.dual != b.dual:
        return False
    for k in a.symbols() | b.symbols():
        d = a.coeff(k) - b.coeff(k)
        if isinstance(d, sympy.Basic):
            if sympy.simplify(sympy.expand(d)) != 0:
                return False
        elif abs(complex(d)) > tol:
            return False
    return True
