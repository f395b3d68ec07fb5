import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wirtinger_g2.cohomology import FormDescriptor, Term, genus2_forms
from wirtinger_g2.errors import (
    ConfigError,
    DivergenceError,
    PoleError,
    TailBoundError,
    ToleranceError,
    UnknownSymbolError,
)
from wirtinger_g2.homology import PM_BASIS, CycleClass, pair_phases
from wirtinger_g2.multivalued import BranchConfig, state_on_interval
from wirtinger_g2.params import LauricellaParams, TwistSpec, as_float, dualize, fixture_exponents
from wirtinger_g2.periods import (
    beta_fn,
    fd_euler_integral,
    fd_series,
    fd_via_quadrature,
    gamma_fn,
    interval_period,
    period_matrix,
    pm_cycles,
    quad_regularized_interval,
    term_exponents,
)
from wirtinger_g2.quadrature import QuadratureSpec

from .strategies import admissible, ordered_points

K = 12


def branch_oracle(j, form, spec, cfg):
    """Direct integral: phase from the continued branch at one interior point,
    moduli from the explicit product, endpoints desingularized by t = a + L s**K."""
    z = cfg.real_points
    eff = spec.effective_array().real
    t0 = 0.5 * (z[j] + z[j + 1]) if j < 4 else 2.0
    state = state_on_interval(j, t0, cfg)
    load = state.load(spec)
    unit = load / abs(load) * (state.y / abs(state.y)) ** form.y_power
    zm = [mpmath.mpf(x) for x in z]

    def g(t, end=None, d=None):
        diffs = [t - zk for zk in zm]
        if end is not None:
            diffs[end] = d
        m = mpmath.fprod(mpmath.power(abs(x), 2 * ck + 0.5 * form.y_power) for x, ck in zip(diffs, eff[:5]))
        r = mpmath.fsum(tm.coef * mpmath.fprod(x**n for x, n in zip(diffs, tm.powers)) for tm in form.terms)
        return m * r

    with mpmath.workdps(30):
        a, L = zm[j], mpmath.mpf(t0) - zm[j]
        total = mpmath.quad(lambda s: g(a + L * s**K, j, L * s**K) * L * K * s ** (K - 1), [0, 1])
        if j < 4:
            b, L2 = zm[j + 1], zm[j + 1] - mpmath.mpf(t0)
            total += mpmath.quad(lambda s: g(b - L2 * s**K, j + 1, -L2 * s**K) * L2 * K * s ** (K - 1), [0, 1])
        else:
            total += mpmath.quad(g, [t0, mpmath.inf])
    return complex(unit * total)


def convergent(j, form, spec):
    for t in form.terms:
        b = term_exponents(t, form.y_power, spec)
        if b[j].real <= -1 or (j < 4 and b[j + 1].real <= -1) or (j == 4 and -b.sum().real - 2 <= -1):
            return False
    return True


def _fixture_cases():
    spec = TwistSpec(as_float(fixture_exponents()))
    forms = genus2_forms()
    return [(j, i) for j in range(5) for i in range(8) if convergent(j, forms[i], spec)]


# divergent endpoints are covered by the regularization tests
@pytest.mark.parametrize("j,i", _fixture_cases())
def test_interval_period_against_branch_oracle(j, i, v, cfg):
    spec = TwistSpec(v)
    form = genus2_forms(cfg)[i]
    val, _ = interval_period(j, form, spec, cfg)
    ref = branch_oracle(j, form, spec, cfg)
    assert abs(val - ref) < 1e-11 * abs(ref)


def test_oracle_covers_enough_cases():
    assert len(_fixture_cases()) >= 25


def exact_form(g_power, spec):
    """d(T_spec t**m)/T_spec dt as a form (``y_power`` 0)."""
    alpha = 2 * spec.effective_array()
    terms = []
    for k in range(5):
        powers = [0] * 5
        powers[0] += g_power
        powers[k] -= 1
        terms.append(Term(complex(alpha[k]), tuple(powers)))
    if g_power:
        powers = [0] * 5
        powers[0] = g_power - 1
        terms.append(Term(float(g_power), tuple(powers)))
    return FormDescriptor(f"d(T t^{g_power})", "genus0", 1, tuple(terms))


@given(admissible(), ordered_points(), st.sampled_from([0, 1, 2]), st.sampled_from([0, 1]))
@settings(max_examples=20)
def test_total_derivatives_integrate_to_zero(v, z, m, f_twist):
    # regularized intervals are twisted cycles, so exact forms have zero period
    cfg = BranchConfig(*z)
    spec = TwistSpec(v, f_twist=f_twist)
    form = exact_form(m, spec)
    for j in range(5):
        val, _ = interval_period(j, form, spec, cfg)
        size = sum(abs(interval_period(j, FormDescriptor("t", "genus0", 1, (t,)), spec, cfg)[0]) for t in form.terms)
        assert abs(val) < 1e-9 * size


@given(admissible(), st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
@settings(max_examples=10)
def test_period_linear_in_form(v, a, b):
    cfg = BranchConfig(0.2, 0.45, 0.7)
    spec = TwistSpec(v)
    f1, f2 = genus2_forms(cfg)[0], genus2_forms(cfg)[2]
    combo = FormDescriptor("combo", "genus2", 1, tuple(Term(a * t.coef, t.powers) for t in f1.terms) + tuple(Term(b * t.coef, t.powers) for t in f2.terms))
    for j in range(5):
        lhs = interval_period(j, combo, spec, cfg)[0]
        rhs = a * interval_period(j, f1, spec, cfg)[0] + b * interval_period(j, f2, spec, cfg)[0]
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_period_matrix_shape_and_errors(v, cfg, q):
    P = period_matrix(pm_cycles(), genus2_forms(cfg), TwistSpec(v), cfg, q, row_labels=PM_BASIS)
    assert P.entries.shape == (8, 8)
    assert not P.flagged.any()
    assert np.max(P.errors) < 1e-10
    # eigen-cycles pair only with forms of the same eigenvalue
    assert np.max(np.abs(P.entries[:4, 4:])) < 1e-12
    assert np.max(np.abs(P.entries[4:, :4])) < 1e-12
    assert np.linalg.matrix_rank(P.entries) == 8


def test_pm_periods_average_the_sheets(v, cfg):
    spec = TwistSpec(v)
    forms = genus2_forms(cfg)
    P = period_matrix(pm_cycles(), forms, spec, cfg)
    for i, f in enumerate(forms):
        plain = interval_period(1, f, spec, cfg)[0]
        flipped = interval_period(1, f, spec, cfg, y_sign=-1)[0]
        assert abs(P.entries[1, i] - 0.5 * (plain + flipped)) < 1e-14 * max(1.0, abs(plain))
        assert abs(P.entries[5, i] - 0.5 * (plain - flipped)) < 1e-14 * max(1.0, abs(plain))


def test_lambda_cycles_expand(v, cfg):
    spec = TwistSpec(v)
    forms = genus2_forms(cfg)
    P = period_matrix([CycleClass.of("lambda2")], forms, spec, cfg)
    # lambda2 = (1 - E34) sigma34+ + (1 + E34) sigma34-
    E = pair_phases(v)["34"]
    B = period_matrix([CycleClass.of("sigma34+"), CycleClass.of("sigma34-")], forms, spec, cfg)
    assert np.allclose(P.entries[0], (1 - E) * B.entries[0] + (1 + E) * B.entries[1], atol=1e-12)


def test_lambda_with_f_twist_rejected(v, cfg):
    with pytest.raises(UnknownSymbolError):
        period_matrix([CycleClass.of("lambda1")], genus2_forms(cfg), TwistSpec(v, f_twist=1), cfg)


def test_dual_flag_mismatch_rejected(v, cfg):
    with pytest.raises(UnknownSymbolError):
        period_matrix(pm_cycles(), genus2_forms(cfg), dualize(TwistSpec(v)), cfg)


def test_complex_branch_points_rejected(v):
    cfg = BranchConfig(0.2 + 0.1j, 0.45, 0.7)
    with pytest.raises(ConfigError):
        interval_period(0, genus2_forms()[0], TwistSpec(v), cfg)


def test_tolerance_error_on_starved_quadrature(v, cfg):
    q = QuadratureSpec(tol=1e-14, max_nodes=20, delta_frac=1e-6)
    with pytest.raises(ToleranceError) as info:
        quad_regularized_interval(2, genus2_forms(cfg)[1], TwistSpec(v), cfg, q)
    assert info.value.estimate is not None


# -- special functions -----------------------------------------------------


@given(st.floats(-4.9, 4.9).filter(lambda s: abs(s - round(s)) > 1e-3))
def test_gamma_reflection(s):
    lhs = gamma_fn(s) * gamma_fn(1 - s)
    rhs = np.pi / np.sin(np.pi * s)
    assert abs(lhs - rhs) < 1e-11 * abs(rhs)


@given(st.complex_numbers(max_magnitude=6).filter(lambda s: abs(s + round(-s.real)) > 1e-2 or s.real > 0.5))
def test_gamma_against_mpmath(s):
    ref = complex(mpmath.gamma(s))
    assert abs(gamma_fn(s) - ref) < 1e-12 * abs(ref)


@pytest.mark.parametrize("s", [0, -1, -3])
def test_gamma_poles(s):
    with pytest.raises(PoleError):
        gamma_fn(s)


def test_beta_symmetric():
    assert abs(beta_fn(0.3, 1.7) - beta_fn(1.7, 0.3)) < 1e-15
    assert abs(beta_fn(0.3, 1.7) - complex(mpmath.beta(0.3, 1.7))) < 1e-14


# -- Lauricella F_D --------------------------------------------------------


def triple_sum(a, b, c, z, n):
    """Direct truncated triple series, summed with numpy."""

    def poch(x, m):
        return np.concatenate([[1.0 + 0j], np.cumprod([x + k for k in range(m - 1)])])

    fact = np.concatenate([[1.0], np.cumprod(np.arange(1.0, n))])
    u = [poch(b[r], n) * np.power(complex(z[r]), np.arange(n)) / fact for r in range(3)]
    ratio = poch(a, 3 * n) / poch(c, 3 * n)
    i, j, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    return complex(np.sum(ratio[i + j + k] * u[0][i] * u[1][j] * u[2][k]))


def test_fd_series_against_triple_sum():
    p = (0.36, 0.3, 0.2, -0.1, 0.8)
    z = (0.1, 0.15, 0.25)
    ref = triple_sum(p[0], p[1:4], p[4], z, 40)
    assert abs(fd_series(p, z) - ref) < 1e-13


@given(
    st.floats(0.1, 2.0),
    st.floats(-1.5, 1.5),
    st.floats(-1.5, 1.5),
    st.floats(0.3, 3.0),
    st.floats(-0.9, 0.9),
    st.floats(-0.9, 0.9),
)
@settings(max_examples=20)
def test_fd_two_variables_is_appell_f1(a, b1, b2, c, x, y):
    ref = complex(mpmath.appellf1(a, b1, b2, c, x, y))
    got = fd_series((a, b1, b2, 0.0, c), (x, y, 0.0))
    assert abs(got - ref) < 1e-10 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", [(0.2, 0.45, 0.7), (0.5, 0.8, 0.95), (-0.6, 0.3j, 0.5 + 0.5j)])
def test_fd_gauss_reduction(z):
    a, b, c = 0.36, 0.3, 0.8
    ref = complex(mpmath.hyp2f1(a, b, c, z[0]))
    assert abs(fd_series((a, b, 0.0, 0.0, c), z) - ref) < 1e-12 * abs(ref)


def test_fd_complex_parameters():
    p = (0.4 + 0.2j, 0.3, 0.2 - 0.1j, -0.1, 1.3 + 0.5j)
    z = (0.1, 0.15, 0.25)
    assert abs(fd_series(p, z) - triple_sum(p[0], p[1:4], p[4], z, 40)) < 1e-13


def test_fd_euler_integral_matches_series(cfg):
    p = LauricellaParams(0.36, 0.3, 0.2, -0.1, 0.8)
    z = (0.2, 0.45, 0.7)
    assert abs(fd_via_quadrature(p, cfg) - fd_series(p, z)) < 1e-10


def test_fd_euler_integral_degenerate(cfg):
    a, b, c = 0.36, 0.3, 0.8
    val = fd_euler_integral((a, b, 0.0, 0.0, c), cfg)
    ref = complex(mpmath.beta(a, c - a) * mpmath.hyp2f1(a, b, c, 0.2))
    assert abs(val - ref) < 1e-11 * abs(ref)


def test_fd_divergent_region():
    with pytest.raises(DivergenceError):
        fd_series((0.3, 0.2, 0.1, 0.1, 0.9), (0.2, 1.0, 0.5))


def test_fd_pole_in_c():
    with pytest.raises(PoleError):
        fd_series((0.3, 0.2, 0.1, 0.1, -2.0), (0.2, 0.3, 0.5))


def test_fd_tail_bound_cap():
    with pytest.raises(TailBoundError):
        fd_series((0.3, 0.2, 0.1, 0.1, 0.9), (0.2, 0.3, 0.999), max_order=50)
