from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wirtinger_g2.errors import AdmissibilityError, SumError
from wirtinger_g2.params import (
    ExponentVector,
    LauricellaParams,
    TwistSpec,
    as_float,
    derive_exponents,
    dualize,
    fixture_exponents,
    shift_exponents,
    unit_phase,
    validate_admissible,
)

from .strategies import admissible

SHIFT = (0.25, -0.25, -0.25, -0.25, 0.25, 0.25)


def test_fixture_values_are_exact():
    v = fixture_exponents()
    assert v.exact
    assert [float(x) for x in v.c] == [-0.20, -0.15, -0.10, 0.05, 0.22, 0.18]
    assert v.total() == 0


def test_derive_exponents_matches_euler_integrand():
    # integrand t^{a-1} (1-t)^{c-a-1} prod (1 - z_i t)^{-b_i} written as
    # prod (t - z)^{2 c - 1}-type exponents with c5 closing the sum
    a, b1, b2, b3, c = (Fraction(9, 25), Fraction(3, 10), Fraction(1, 5), Fraction(-1, 10), Fraction(4, 5))
    v = derive_exponents(LauricellaParams(a, b1, b2, b3, c))
    assert v.c == (
        (b1 + b2 + b3 - c) / 2,
        -b1 / 2,
        -b2 / 2,
        -b3 / 2,
        (c - a) / 2,
        a / 2,
    )
    assert v == fixture_exponents()


@pytest.mark.parametrize("j", range(6))
def test_resonant_exponent_rejected_with_index(j):
    vals = [Fraction(1, 10)] * 6
    vals[j] = Fraction(1, 4)
    vals[(j + 1) % 6] = -sum(vals) + vals[(j + 1) % 6]
    v = ExponentVector(tuple(vals))
    with pytest.raises(AdmissibilityError) as info:
        validate_admissible(v)
    assert info.value.index == j


def test_nonzero_sum_rejected():
    with pytest.raises(SumError):
        ExponentVector.of((0.1, 0.1, 0.1, 0.1, 0.1, 0.1))


def test_near_resonance_float_rejected():
    with pytest.raises(AdmissibilityError):
        ExponentVector.of((0.25 + 1e-14, -0.1, -0.1, 0.05, 0.05, -0.15 - 1e-14))


def test_length_checked():
    with pytest.raises(ValueError):
        ExponentVector((0.1, -0.1))


def test_shift_vector_and_f_twist_agree(v_exact):
    shifted = shift_exponents(v_exact)
    assert shifted.tag == "f-shifted"
    assert [a - b for a, b in zip(shifted.c, v_exact.c)] == [Fraction(s).limit_denominator(4) for s in SHIFT]
    assert TwistSpec(v_exact, f_twist=1).effective() == shifted.c


def test_shift_preserves_sum(v_exact):
    assert shift_exponents(v_exact).total() == 0


@given(admissible())
def test_dualize_is_involution_and_negates(v):
    spec = TwistSpec(v, f_twist=1)
    d = dualize(spec)
    assert np.allclose(d.effective_array(), -spec.effective_array())
    assert dualize(d) == spec


@given(st.fractions(min_value=-3, max_value=3, max_denominator=12))
def test_unit_phase_exact_and_float_agree(u):
    assert abs(unit_phase(u) - np.exp(2j * np.pi * float(u))) < 1e-12


@given(st.complex_numbers(max_magnitude=50).filter(lambda u: abs(u.imag) < 3))
def test_unit_phase_periodic(u):
    assert abs(unit_phase(u + 1) - unit_phase(u)) < 1e-14 * max(1.0, abs(unit_phase(u)))


def test_unit_phase_exact_quarters():
    assert unit_phase(Fraction(1, 4)) == 1j
    assert unit_phase(Fraction(-1, 2)) == -1


def test_as_float_keeps_values(v_exact):
    f = as_float(v_exact)
    assert not f.exact
    assert np.allclose(f.as_array(), [float(x) for x in v_exact.c])


def test_complex_exponents_allowed():
    v = ExponentVector.of((0.1 + 0.05j, -0.15, -0.1, 0.05, 0.22, -0.12 - 0.05j))
    assert not v.is_real()
