import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from wirtinger_g2.errors import UnknownSymbolError
from wirtinger_g2.homology import (
    INTERVALS,
    LAMBDAS,
    PM_BASIS,
    CycleClass,
    build_H,
    change_of_basis_Q,
    classes_equal,
    corollary_coefficients,
    corollary_from_relation,
    det_H_closed,
    e,
    eigen_basis,
    expand_in_pm_basis,
    h_blocks,
    intersect_Y_homology,
    involution_pushforward,
    symbolic_exponents,
)
from wirtinger_g2.params import TwistSpec, as_float

from .strategies import admissible, draws

SYMBOLS = INTERVALS + LAMBDAS


@given(admissible())
def test_eigen_basis_are_eigenvectors(v):
    for k, cyc in enumerate(eigen_basis(v)):
        sign = 1 if k < 4 else -1
        assert classes_equal(involution_pushforward(cyc, v), sign * cyc, 1e-10)


@given(admissible(), st.sampled_from(SYMBOLS), st.booleans())
def test_involution_squares_to_identity(v, name, dual):
    c = CycleClass.of(name, dual)
    assert classes_equal(involution_pushforward(involution_pushforward(c, v), v), c, 1e-10)


@given(admissible(), st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_involution_linear(v, a, b):
    x, y = CycleClass.of("sigma12"), CycleClass.of("lambda1")
    lhs = involution_pushforward(a * x + b * y, v)
    rhs = a * involution_pushforward(x, v) + b * involution_pushforward(y, v)
    assert classes_equal(lhs, rhs, 1e-9)


@given(admissible())
def test_expansion_inverts_eigen_basis(v):
    for k, cyc in enumerate(eigen_basis(v)):
        assert np.allclose(expand_in_pm_basis(cyc, v), np.eye(8)[k], atol=1e-12)


@given(admissible())
def test_expansion_respects_involution(v):
    # iota acts as diag(+1 x4, -1 x4) on pm coordinates
    D = np.diag([1.0] * 4 + [-1.0] * 4)
    for name in SYMBOLS:
        c = CycleClass.of(name)
        assert np.allclose(expand_in_pm_basis(involution_pushforward(c, v), v), D @ expand_in_pm_basis(c, v), atol=1e-12)


@pytest.mark.parametrize("w", draws(5, 20))
def test_det_Q_closed_form(w):
    _, det, closed = change_of_basis_Q(w)
    assert abs(det - closed) < 1e-10 * abs(closed)
    assert abs(abs(det) - 16) < 1e-10


def test_det_Q_symbolic():
    s = symbolic_exponents()
    _, det, closed = change_of_basis_Q(s)
    assert sympy.simplify(sympy.expand(det - closed)) == 0


@pytest.mark.parametrize("w", draws(6, 20))
@pytest.mark.parametrize("sign", [1, -1])
def test_det_H_closed_form(w, sign):
    block = np.array(h_blocks(w)[0 if sign == 1 else 1], dtype=complex)
    closed = complex(det_H_closed(w, sign))
    assert abs(np.linalg.det(block) - closed) < 1e-10 * abs(closed)


@given(admissible())
def test_H_minus_is_f_twisted_Y_matrix(v):
    minus = np.array(h_blocks(v)[1], dtype=complex)
    shifted = intersect_Y_homology(TwistSpec(v, f_twist=1)).entries
    assert np.max(np.abs(minus - shifted)) < 1e-12 * np.max(np.abs(minus))


def test_build_H_blocks(v):
    H = build_H(v)
    assert H.row_labels == PM_BASIS
    assert np.all(H.entries[:4, 4:] == 0)
    assert np.allclose(2 * H.entries[:4, :4], intersect_Y_homology(v).entries)


@given(admissible(), st.sampled_from([1, -1]))
def test_corollary_coefficients_follow_from_relation(v, sign):
    k45, ks = corollary_coefficients(v, sign)
    r45, rs = corollary_from_relation(v, sign)
    assert abs(complex(k45) - complex(r45)) < 1e-12
    assert np.allclose(np.array(ks, dtype=complex), np.array(rs, dtype=complex), atol=1e-12)


@pytest.mark.parametrize("sign", [1, -1])
def test_corollary_coefficients_follow_from_relation_symbolic(sign):
    s = symbolic_exponents()
    k45, ks = corollary_coefficients(s, sign)
    r45, rs = corollary_from_relation(s, sign)
    assert sympy.simplify(k45 - r45) == 0
    for a, b in zip(ks, rs):
        assert sympy.simplify(sympy.expand(a - b)) == 0


def test_exact_phases(v_exact):
    assert e(v_exact.c[0] * 4 + 1) == e(v_exact.c[0] * 4)


def test_unknown_symbol_rejected():
    with pytest.raises(UnknownSymbolError):
        CycleClass.of("sigma56")


def test_sigma45_has_no_expansion(v):
    with pytest.raises(UnknownSymbolError):
        expand_in_pm_basis(CycleClass.of("sigma45"), v)
    with pytest.raises(UnknownSymbolError):
        involution_pushforward(CycleClass.of("sigma45"), v)


def test_mixed_dual_flags_rejected():
    with pytest.raises(ValueError):
        CycleClass.of("sigma01") + CycleClass.of("sigma01", dual=True)


def test_dual_basis_uses_negated_exponents(v):
    dual = eigen_basis(v, dual=True)
    neg = type(v)(tuple(-x for x in as_float(v).c))
    plain = eigen_basis(neg)
    for a, b in zip(dual, plain):
        assert all(abs(complex(a.coeff(k)) - complex(b.coeff(k))) < 1e-14 for k in SYMBOLS)
