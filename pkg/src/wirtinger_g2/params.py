"""Parameter model: Lauricella parameters, exponent vectors and twists.

The six exponents ``c_0..c_5`` attach to the points ``0, z1, z2, z3, 1, inf``.
The multivalued integrand is ``T = prod_{j<=4} (x - z_j)**(2 c_j)``; every
formula in the package is written in terms of ``c_j`` (never ``2 c_j``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import AdmissibilityError, SumError

INTEGRALITY_TOL = 1e-12
SUM_TOL = 1e-14

#: exponent shift produced by multiplying T with f = x(x-1)/y
F_SHIFT: tuple[Fraction, ...] = (
    Fraction(1, 4),
    Fraction(-1, 4),
    Fraction(-1, 4),
    Fraction(-1, 4),
    Fraction(1, 4),
    Fraction(1, 4),
)

Scalar = complex | float | Fraction


def _is_exact(values: Sequence[Scalar]) -> bool:
    return all(isinstance(v, (Fraction, int)) and not isinstance(v, bool) for v in values)


def unit_phase(u: Scalar) -> complex:
    """``e(u) = exp(2 pi i u)``, with ``Re u`` reduced mod 1 first."""
    if isinstance(u, Fraction):
        r = u - math.floor(u)
        if r == 0:
            return 1 + 0j
        if r == Fraction(1, 2):
            return -1 + 0j
        if r == Fraction(1, 4):
            return 1j
        if r == Fraction(3, 4):
            return -1j
        u = float(r)
    u = complex(u)
    r = u.real - math.floor(u.real)
    if u.imag == 0.0:
        return cmath.exp(2j * math.pi * r)
    return cmath.exp(2j * math.pi * complex(r, u.imag))


def _integrality_defect(x: Scalar) -> float:
    """Distance from ``x`` to the nearest integer (complex-aware)."""
    if isinstance(x, (Fraction, int)):
        return float(abs(x - round(x)))
    x = complex(x)
    return abs(x - round(x.real))


@dataclass(frozen=True)
class LauricellaParams:
    a: Scalar
    b1: Scalar
    b2: Scalar
    b3: Scalar
    c: Scalar

    def __post_init__(self) -> None:
        derive_exponents(self)


@dataclass(frozen=True)
class ExponentVector:
    """The six exponents ``(c_0, ..., c_5)``.

    Entries are complex by default; if every entry is a :class:`Fraction`
    the vector is in exact mode and all checks are done in rationals.
    """

    c: tuple[Scalar, ...]
    tag: str = "raw"

    def __post_init__(self) -> None:
        if len(self.c) != 6:
            raise ValueError(f"expected 6 exponents, got {len(self.c)}")
        if self.tag not in ("raw", "f-shifted", "dual"):
            raise ValueError(f"unknown provenance tag {self.tag!r}")
        if _is_exact(self.c):
            object.__setattr__(self, "c", tuple(Fraction(v) for v in self.c))
        else:
            object.__setattr__(self, "c", tuple(complex(v) for v in self.c))

    @classmethod
    def of(cls, values: Sequence[Scalar], tag: str = "raw") -> "ExponentVector":
        """Construct and validate."""
        v = cls(tuple(values), tag)
        validate_admissible(v)
        return v

    @property
    def exact(self) -> bool:
        return isinstance(self.c[0], Fraction)

    def __getitem__(self, j: int) -> Scalar:
        return self.c[j]

    def __iter__(self):
        return iter(self.c)

    def as_array(self) -> np.ndarray:
        return np.array([complex(v) for v in self.c], dtype=complex)

    def total(self) -> Scalar:
        return sum(self.c, Fraction(0) if self.exact else 0j)

    def is_real(self) -> bool:
        return self.exact or all(abs(complex(v).imag) == 0.0 for v in self.c)


def derive_exponents(p: LauricellaParams) -> ExponentVector:
    """Exponents of the F_D Euler integrand from ``(a, b1, b2, b3, c)``."""
    a, b1, b2, b3, c = p.a, p.b1, p.b2, p.b3, p.c
    if _is_exact((a, b1, b2, b3, c)):
        a, b1, b2, b3, c = (Fraction(v) for v in (a, b1, b2, b3, c))
        two = Fraction(2)
    else:
        a, b1, b2, b3, c = (complex(v) for v in (a, b1, b2, b3, c))
        two = 2.0
    c1, c2, c3 = -b1 / two, -b2 / two, -b3 / two
    c4 = (c - a) / two
    c5 = a / two
    # c0 closes the sum exactly instead of (b1+b2+b3-c)/2, which equals it
    # algebraically but may differ by rounding in floating point
    c0 = -(c1 + c2 + c3 + c4 + c5)
    v = ExponentVector((c0, c1, c2, c3, c4, c5), "raw")
    validate_admissible(v)
    return v


def validate_admissible(v: ExponentVector, *, check_sum: bool = True) -> None:
    """Raise unless ``4 c_j`` is non-integral for all j and the sum vanishes."""
    for j, cj in enumerate(v.c):
        if v.exact:
            resonant = (4 * cj).denominator == 1
        else:
            resonant = _integrality_defect(4 * cj) < INTEGRALITY_TOL
        if resonant:
            raise AdmissibilityError(f"4*c_{j} = {4 * cj} is an integer", index=j)
    if check_sum:
        s = v.total()
        if v.exact:
            if s != 0:
                raise SumError(f"exponents sum to {s}, not 0")
        elif abs(s) > SUM_TOL * max(1.0, max(abs(complex(x)) for x in v.c)):
            raise SumError(f"exponents sum to {s}, not 0")


def shift_exponents(v: ExponentVector) -> ExponentVector:
    """Exponents of ``T f``: ``c_j + (1/4, -1/4, -1/4, -1/4, 1/4, 1/4)_j``."""
    if v.exact:
        new = tuple(cj + s for cj, s in zip(v.c, F_SHIFT))
    else:
        new = tuple(cj + float(s) for cj, s in zip(v.c, F_SHIFT))
    out = ExponentVector(new, "f-shifted")
    validate_admissible(out, check_sum=False)
    return out


@dataclass(frozen=True)
class TwistSpec:
    """The multivalued function ``T**s * f**m`` with ``s = -1`` iff ``dual``.

    ``f_twist`` is the power ``m`` of ``f`` in {-1, 0, 1}. The effective
    exponent at ``z_j`` is ``s*c_j + m*F_SHIFT[j]``.
    """

    exponents: ExponentVector
    f_twist: int = 0
    dual: bool = False
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.f_twist not in (-1, 0, 1):
            raise ValueError(f"f_twist must be -1, 0 or 1, got {self.f_twist}")

    def effective(self) -> tuple[Scalar, ...]:
        s = -1 if self.dual else 1
        if self.exponents.exact:
            return tuple(s * cj + self.f_twist * d for cj, d in zip(self.exponents.c, F_SHIFT))
        return tuple(s * cj + self.f_twist * float(d) for cj, d in zip(self.exponents.c, F_SHIFT))

    def effective_array(self) -> np.ndarray:
        return np.array([complex(v) for v in self.effective()], dtype=complex)

    def effective_vector(self) -> ExponentVector:
        tag = "dual" if self.dual else ("f-shifted" if self.f_twist else "raw")
        return ExponentVector(self.effective(), tag)


def dualize(t: TwistSpec) -> TwistSpec:
    """``T**s f**m -> T**-s f**-m``; effective exponents change sign."""
    return replace(t, dual=not t.dual, f_twist=-t.f_twist)


def fixture_exponents() -> ExponentVector:
    """Desk-scale fixture (-0.20, -0.15, -0.10, 0.05, 0.22, 0.18), exact."""
    return ExponentVector.of(
        tuple(Fraction(n, 100) for n in (-20, -15, -10, 5, 22, 18))
    )


def as_float(v: ExponentVector) -> ExponentVector:
    if not v.exact:
        return v
    return ExponentVector(tuple(complex(x) for x in v.c), v.tag)


def random_admissible(
    rng: np.random.Generator,
    low: float = -0.23,
    high: float = 0.35,
    margin: float = 1e-3,
) -> ExponentVector:
    """Draw ``c_0..c_4`` uniformly, close the sum with ``c_5``, reject until admissible.

    ``margin`` keeps every ``4 c_j`` and ``2 c_j +- 1/2`` away from integers so
    closed-form denominators stay well conditioned.
    """
    while True:
        head = rng.uniform(low, high, size=5)
        c5 = -head.sum()
        if not low <= c5 <= high:
            continue
        vals = [*head, c5]
        if any(_integrality_defect(4 * x) < margin for x in vals):
            continue
        return ExponentVector.of(tuple(float(x) for x in vals))
