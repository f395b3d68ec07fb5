"""Verification suite: identities checked numerically with recorded residuals."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import mpmath
import numpy as np
import scipy

from . import __version__
from .cohomology import (
    FormDescriptor,
    build_C,
    c_minus_via_residues,
    c_plus_block,
    c_minus_block,
    det_C_minus_closed,
    det_C_plus_closed,
    genus0_forms,
    genus2_forms,
    intersect_Y_cohomology,
    residue_intersection,
)
from .errors import ConventionError, WirtingerError
from .homology import (
    INTERVALS,
    CycleClass,
    build_H,
    change_of_basis_Q,
    corollary_coefficients,
    det_H_closed,
    e,
    h_blocks,
    intersect_Y_homology,
)
from .multivalued import BranchConfig, loop_monodromy
from .params import (
    ExponentVector,
    LauricellaParams,
    TwistSpec,
    as_float,
    dualize,
    random_admissible,
    shift_exponents,
    validate_admissible,
)
from .periods import (
    fd_euler_integral,
    fd_series,
    fd_via_quadrature,
    gamma_fn,
    interval_period,
    period_matrix,
    pm_cycles,
)
from .quadrature import QuadratureSpec

DEFAULT_Z = (0.2, 0.45, 0.7)
DEFAULT_DRAWS = 20


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    metadata: dict = field(default_factory=dict)
    error: str | None = None

    def __post_init__(self) -> None:
        self.residual = float(self.residual)
        self.passed = self.error is None and bool(self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.error})" if self.error else ""
        return f"{status} {self.name}: residual {self.residual:.3e} (tol {self.tolerance:.0e}){extra}"


@dataclass
class VerificationReport:
    checks: list[CheckResult]
    versions: dict
    timing: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def body(self) -> list[dict]:
        return [_jsonable(asdict(c)) for c in self.checks]

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {"checks": self.body(), "versions": self.versions}
        if include_timing:
            out["timing"] = self.timing
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    return x


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _draws(seed: int, n: int = DEFAULT_DRAWS) -> list[ExponentVector]:
    rng = np.random.default_rng(seed)
    return [random_admissible(rng) for _ in range(n)]


# -- period relation -------------------------------------------------------


@dataclass(frozen=True)
class Convention:
    """One candidate form of ``C = kappa * P^T Hg^{-1 or -T} P_dual``.

    ``gauge`` rescales the interval cycles by ``(-1)**j`` (``alternating``)
    or leaves them alone (``none``) before the homology matrix is applied.
    """

    transpose: bool
    kappa: int
    gauge: str

    def gauge_diag(self, n: int) -> np.ndarray:
        if self.gauge == "none":
            return np.ones(n)
        return np.array([(-1.0) ** (j % 4) for j in range(n)])

    def apply(self, P: np.ndarray, Pd: np.ndarray, H: np.ndarray) -> np.ndarray:
        g = np.diag(self.gauge_diag(H.shape[0]))
        Hi = np.linalg.inv(g @ H @ g)
        if self.transpose:
            Hi = Hi.T
        return self.kappa * P.T @ Hi @ Pd


CANDIDATES = tuple(
    Convention(t, k, g) for g in ("none", "alternating") for t in (False, True) for k in (1, -1)
)


def _periods(space: str, v: ExponentVector, cfg: BranchConfig, q: QuadratureSpec):
    spec = TwistSpec(v)
    dspec = dualize(spec)
    if space == "Y":
        forms = genus0_forms()
        P = period_matrix([CycleClass.of(n) for n in INTERVALS], forms, spec, cfg, q)
        Pd = period_matrix([CycleClass.of(n, True) for n in INTERVALS], forms, dspec, cfg, q)
        return P, Pd, intersect_Y_homology(spec).entries, intersect_Y_cohomology(spec).entries
    forms = genus2_forms(cfg)
    P = period_matrix(pm_cycles(), forms, spec, cfg, q)
    Pd = period_matrix(pm_cycles(True), forms, dspec, cfg, q)
    return P, Pd, build_H(v).entries, build_C(v, cfg).entries


def freeze_convention(v: ExponentVector, cfg: BranchConfig, q: QuadratureSpec | None = None, tol: float = 1e-8) -> tuple[Convention, float]:
    """Pick the unique candidate that closes the relation on Y."""
    q = q or QuadratureSpec()
    P, Pd, H, C = _periods("Y", v, cfg, q)
    scored = [(c, _rel(c.apply(P.entries, Pd.entries, H), C)) for c in CANDIDATES]
    good = [(c, r) for c, r in scored if r < tol]
    if not good:
        best = min(r for _, r in scored)
        raise ConventionError(f"no candidate convention closes on Y (best residual {best:.3e})")
    return min(good, key=lambda cr: cr[1])


def check_period_relation(
    space: str,
    v: ExponentVector,
    cfg: BranchConfig,
    q: QuadratureSpec | None = None,
    convention: Convention | None = None,
) -> CheckResult:
    """Twisted period relation on Y or X with the convention frozen on Y."""
    if space not in ("X", "Y"):
        raise ValueError("space must be 'X' or 'Y'")
    q = q or QuadratureSpec()
    tol = 1e-8 if space == "Y" else 1e-7
    if convention is None:
        convention, _ = freeze_convention(v, cfg, q)
    P, Pd, H, C = _periods(space, v, cfg, q)
    A = convention.apply(P.entries, Pd.entries, H)
    meta = {"space": space, "convention": asdict(convention)}
    if space == "X":
        scale = np.max(np.abs(C))
        meta["plus_block"] = _rel(A[:4, :4], C[:4, :4])
        meta["minus_block"] = _rel(A[4:, 4:], C[4:, 4:])
        meta["cross_block"] = float(max(np.abs(A[:4, 4:]).max(), np.abs(A[4:, :4]).max()) / scale)
        meta["period_cross_block"] = float(
            max(np.abs(P.entries[:4, 4:]).max(), np.abs(P.entries[4:, :4]).max())
        )
        meta["rank"] = int(np.linalg.matrix_rank(P.entries))
        meta["condition"] = float(np.linalg.cond(P.entries))
    return CheckResult(f"period-relation-{space}", _rel(A, C), tol, meta)


def check_orthogonality(v: ExponentVector, cfg: BranchConfig, q: QuadratureSpec | None = None) -> CheckResult:
    """Cross-eigenblock entries of the period matrix and of the relation vanish."""
    res = check_period_relation("X", v, cfg, q)
    r = max(res.metadata["cross_block"], res.metadata["period_cross_block"])
    return CheckResult("orthogonality-X", r, 1e-9, {"convention": res.metadata["convention"]})


def check_period_rank(v: ExponentVector, cfg: BranchConfig, q: QuadratureSpec | None = None) -> CheckResult:
    """The 8x8 period matrix on X has full rank."""
    q = q or QuadratureSpec()
    P = period_matrix(pm_cycles(), genus2_forms(cfg), TwistSpec(v), cfg, q).entries
    s = np.linalg.svd(P, compute_uv=False)
    rank = int(np.sum(s > s[0] * 1e-10))
    return CheckResult("period-rank-X", 8 - rank, 0, {"rank": rank, "smallest_singular_ratio": float(s[-1] / s[0])})


# -- corollary and the relation it must be compatible with ----------------


def _interval_periods(v: ExponentVector, cfg: BranchConfig, q: QuadratureSpec) -> np.ndarray:
    """``[int_{sigma_{j,j+1}} T varphi_i]`` for j = 0..4 (rows) and i = 1..8 (cols)."""
    spec = TwistSpec(v)
    forms = genus2_forms(cfg)
    out = np.zeros((5, 8), dtype=complex)
    for j in range(5):
        for i, f in enumerate(forms):
            out[j, i] = interval_period(j, f, spec, cfg, q)[0]
    return out


def check_corollary_relation(
    v: ExponentVector,
    cfg: BranchConfig,
    q: QuadratureSpec | None = None,
    gauge: str = "none",
) -> CheckResult:
    """The displayed five-term relation for every basis eigenform.

    ``gauge = 'alternating'`` evaluates it on the cycles rescaled by ``(-1)**j``
    (the normalization selected by the period relation on Y).
    """
    q = q or QuadratureSpec()
    per = _interval_periods(v, cfg, q)
    g = np.ones(5) if gauge == "none" else np.array([1, -1, 1, -1, 1.0])
    per = g[:, None] * per
    residuals = {}
    for i in range(8):
        sign = 1 if i < 4 else -1
        k45, ks = corollary_coefficients(v, sign)
        lhs = k45 * per[4, i]
        terms = [k * per[j, i] for j, k in enumerate(ks)]
        scale = abs(lhs) + sum(abs(t) for t in terms)
        residuals[f"varphi{i + 1}"] = abs(lhs - sum(terms)) / scale
    worst = max(residuals.values())
    return CheckResult(f"corollary-relation[{gauge}]", worst, 1e-8, {"per_form": residuals})


def interval_relation_coefficients(v: ExponentVector, sign: int) -> np.ndarray:
    """``1 - e(-2 S_j)`` with partial sums ``S_j`` of the effective exponents.

    The five interval periods of one eigenspace satisfy
    ``sum_j (1 - e(-2 S_j)) int_{sigma_{j,j+1}} = 0``; the -1 eigenspace
    uses the f-shifted exponents.
    """
    c = np.array([complex(x) for x in (v.c if sign == 1 else shift_exponents(v).c)])
    S = np.cumsum(c[:5])
    return np.array([1 - complex(e(-2 * s)) for s in S])


def check_interval_relation(v: ExponentVector, cfg: BranchConfig, q: QuadratureSpec | None = None) -> CheckResult:
    """Relation among the five interval periods from deforming the real line."""
    q = q or QuadratureSpec()
    per = _interval_periods(v, cfg, q)
    residuals = {}
    for i in range(8):
        G = interval_relation_coefficients(v, 1 if i < 4 else -1)
        terms = G * per[:, i]
        residuals[f"varphi{i + 1}"] = float(abs(terms.sum()) / np.abs(terms).sum())
    return CheckResult("interval-relation-X", max(residuals.values()), 1e-10, {"per_form": residuals})


def corollary_gap(v: ExponentVector) -> dict:
    """Moduli of ``K_j / G_j`` for the +1 eigenspace.

    Any valid five-term relation is proportional to ``G``; with unimodular
    cycle normalizations the moduli would all agree.
    """
    k45, ks = corollary_coefficients(v, 1)
    K = np.array([*ks, -k45], dtype=complex)
    G = interval_relation_coefficients(v, 1)
    return {f"sigma{j}{j + 1}": float(abs(K[j] / G[j])) for j in range(5)}


# -- closed forms ----------------------------------------------------------


def check_residue_oracle(v: ExponentVector, cfg: BranchConfig, seed: int = 0, draws: int = DEFAULT_DRAWS) -> CheckResult:
    """Residue oracle against the closed forms for Y and for C(-1)."""
    worst = 0.0
    for w in [v, *_draws(seed, draws)]:
        w = as_float(w)
        spec = TwistSpec(w)
        forms = genus0_forms()
        R = np.array([[residue_intersection(a, b, spec, cfg) for b in forms] for a in forms])
        worst = max(worst, _rel(R, intersect_Y_cohomology(spec).entries))
        closed = build_C(w, cfg).entries[4:, 4:]
        worst = max(worst, _rel(c_minus_via_residues(w, cfg), closed))
    return CheckResult("residue-oracle", worst, 1e-10, {"seed": seed, "draws": draws})


def _det_residuals(w: ExponentVector, cfg: BranchConfig) -> dict[str, float]:
    z = (cfg.z1, cfg.z2, cfg.z3)
    w = as_float(w)
    plus = np.array(c_plus_block(w), dtype=complex)
    minus = np.array(c_minus_block(w, [complex(x) for x in z]), dtype=complex)
    hp, hm = (np.array(b, dtype=complex) for b in h_blocks(w))
    _, dq, dq_closed = change_of_basis_Q(w)

    def rel(a, b):
        return abs(complex(a) - complex(b)) / abs(complex(b))

    return {
        "C(1)": rel(np.linalg.det(plus), det_C_plus_closed(w)),
        "C(-1)": rel(np.linalg.det(minus), det_C_minus_closed(w, [complex(x) for x in z])),
        "H(1)": rel(np.linalg.det(hp), det_H_closed(w, 1)),
        "H(-1)": rel(np.linalg.det(hm), det_H_closed(w, -1)),
        "Q": rel(dq, dq_closed),
    }


def check_determinants(v: ExponentVector, cfg: BranchConfig, seed: int = 0, draws: int = DEFAULT_DRAWS) -> CheckResult:
    worst: dict[str, float] = {}
    for w in [v, *_draws(seed, draws)]:
        for k, r in _det_residuals(w, cfg).items():
            worst[k] = max(worst.get(k, 0.0), r)
    return CheckResult("determinants", max(worst.values()), 1e-10, {"per_identity": worst, "seed": seed, "draws": draws})


# -- F_D -------------------------------------------------------------------


def lauricella_from_exponents(v: ExponentVector) -> tuple[complex, ...]:
    """Inverse of the exponent map: ``(a, b1, b2, b3, c)``."""
    c = [complex(x) for x in v.c]
    a = 2 * c[5]
    return a, -2 * c[1], -2 * c[2], -2 * c[3], 2 * c[4] + a


def check_fd_identity(
    p: LauricellaParams | Sequence[complex],
    z: Sequence[float],
    q: QuadratureSpec | None = None,
) -> CheckResult:
    """Gamma-prefactored Euler integral against the F_D series."""
    cfg = BranchConfig(*z)
    series = fd_series(p, z)
    quad = fd_via_quadrature(p, cfg, q)
    return CheckResult("fd-identity", abs(quad - series) / abs(series), 1e-8, {"series": series, "quadrature": quad})


def check_fd_gauss(a: complex, b: complex, c: complex, z: Sequence[float], q: QuadratureSpec | None = None) -> CheckResult:
    """``b2 = b3 = 0``: F_D reduces to Gauss 2F1 in ``z1`` (series and quadrature)."""
    p = (a, b, 0.0, 0.0, c)
    ref = complex(mpmath.hyp2f1(a, b, c, z[0]))
    series = fd_series(p, z)
    quad = fd_euler_integral(p, BranchConfig(*z), q) * gamma_fn(c) / (gamma_fn(a) * gamma_fn(c - a))
    r = max(abs(series - ref), abs(quad - ref)) / abs(ref)
    return CheckResult("fd-gauss-reduction", r, 1e-10, {"reference": ref, "series": series, "quadrature": quad})


# -- monodromy and regularization ------------------------------------------


def check_monodromy(v: ExponentVector, cfg: BranchConfig) -> CheckResult:
    spec = TwistSpec(v)
    c = v.as_array()
    dev = {}
    for space, mult in (("Y", 2), ("X", 4)):
        for p in range(6):
            m = loop_monodromy(p, space, spec, cfg)
            dev[f"{space}{p}"] = abs(m - np.exp(2j * np.pi * mult * c[p]))
    return CheckResult("monodromy", max(dev.values()), 1e-10, {"per_loop": dev})


def check_regularization(v: ExponentVector, cfg: BranchConfig, seed: int = 0, draws: int = 5) -> CheckResult:
    """Endpoint series against the loop-corrected oracle and Gauss-Jacobi.

    The draw family keeps ``c_0 < 0`` so that ``dt/t`` pieces have a divergent
    endpoint (local exponent ``2 c_0 - 1 < -1``).
    """
    series_q = QuadratureSpec("series")
    circle_q = QuadratureSpec("circle")
    jacobi_q = QuadratureSpec("jacobi")
    worst_circle, worst_jacobi, divergent = 0.0, 0.0, 0
    family = [w for w in _draws(seed + 1, 4 * draws) if complex(w.c[0]).real < 0][:draws]
    for w in [as_float(v), *family]:
        spec = TwistSpec(w)
        for f in genus2_forms(cfg):
            for j in range(5):
                for term in f.terms:
                    piece = FormDescriptor(f.name, f.kind, f.index, (term,), f.y_power, f.eigenvalue)
                    s, _ = interval_period(j, piece, spec, cfg, series_q)
                    c_, _ = interval_period(j, piece, spec, cfg, circle_q)
                    scale = max(abs(s), 1e-300)
                    worst_circle = max(worst_circle, abs(s - c_) / scale)
                    try:
                        g, _ = interval_period(j, piece, spec, cfg, jacobi_q)
                    except ValueError:
                        divergent += 1
                        continue
                    worst_jacobi = max(worst_jacobi, abs(s - g) / scale)
    r = max(worst_circle, worst_jacobi)
    return CheckResult(
        "regularization",
        r,
        1e-8,
        {"circle": worst_circle, "jacobi": worst_jacobi, "divergent_pieces": divergent},
    )


# -- suite -----------------------------------------------------------------

SUITES = ("all", "period-relation", "corollary", "dets", "fd", "monodromy")


@dataclass(frozen=True)
class SuiteConfig:
    exponents: tuple
    z: tuple = DEFAULT_Z
    seed: int = 0
    tol: float = 1e-12
    lauricella: tuple | None = None


def _plan(cfgs: SuiteConfig, suite: str) -> list[tuple[str, Callable[[], CheckResult]]]:
    v = ExponentVector(cfgs.exponents)
    cfg = BranchConfig(*cfgs.z)
    q = QuadratureSpec(tol=cfgs.tol)
    fd_params = cfgs.lauricella or lauricella_from_exponents(v)
    a, b1, _, _, c = (complex(x) for x in fd_params)
    groups = {
        "monodromy": [("monodromy", lambda: check_monodromy(v, cfg))],
        "dets": [
            ("residue-oracle", lambda: check_residue_oracle(v, cfg, cfgs.seed)),
            ("determinants", lambda: check_determinants(v, cfg, cfgs.seed)),
        ],
        "period-relation": [
            ("period-relation-Y", lambda: check_period_relation("Y", v, cfg, q)),
            ("period-relation-X", lambda: check_period_relation("X", v, cfg, q)),
            ("orthogonality-X", lambda: check_orthogonality(v, cfg, q)),
            ("period-rank-X", lambda: check_period_rank(v, cfg, q)),
        ],
        "fd": [
            ("fd-identity", lambda: check_fd_identity(fd_params, cfgs.z, q)),
            ("fd-gauss-reduction", lambda: check_fd_gauss(a.real, b1.real, c.real, cfgs.z, q)),
        ],
        "corollary": [
            ("interval-relation-X", lambda: check_interval_relation(v, cfg, q)),
            ("corollary-relation", lambda: check_corollary_relation(v, cfg, q)),
        ],
    }
    if suite == "all":
        order = ("monodromy", "dets", "period-relation", "fd", "corollary")
        plan = [item for g in order for item in groups[g]]
        plan.append(("regularization", lambda: check_regularization(v, cfg, cfgs.seed)))
        return plan
    if suite == "corollary":
        return [groups["corollary"][1]]
    return groups[suite]


def run_suite(config: SuiteConfig, suite: str = "all") -> VerificationReport:
    """Run checks in a fixed order; failures are recorded, never raised."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    versions = {
        "package": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "mpmath": mpmath.__version__,
    }
    timing: dict[str, float] = {}
    try:
        v = ExponentVector(config.exponents)
        validate_admissible(v)
        BranchConfig(*config.z).require_real_ordered()
    except (WirtingerError, ValueError) as exc:
        bad = CheckResult("config", float("inf"), 0.0, {}, f"{type(exc).__name__}: {exc}")
        return VerificationReport([bad], versions, timing)
    checks = []
    for name, fn in _plan(config, suite):
        t0 = time.perf_counter()
        try:
            res = fn()
        except (WirtingerError, ValueError, ArithmeticError) as exc:
            res = CheckResult(name, float("inf"), 0.0, {}, f"{type(exc).__name__}: {exc}")
        timing[name] = time.perf_counter() - t0
        checks.append(res)
    return VerificationReport(checks, versions, timing)

