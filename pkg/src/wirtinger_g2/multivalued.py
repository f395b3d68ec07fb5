"""Branch-tracked evaluation of ``T``, ``y``, ``f`` and their twists.

Branch rule: on ``(1, inf)`` every ``arg(x - z_j)`` is 0 and ``y > 0``; every
other branch is reached by continuation through the lower half-plane, so on
the interval ``(z_j, z_{j+1})`` one has ``arg(t - z_k) = -pi`` for ``k > j``.
A point of ``X`` is a point of ``Y`` with tracked arguments plus the sign of
``y`` relative to ``prod (x - z_k)**(1/2)`` on those arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, DegenerateConfigError, SingularityError
from .params import TwistSpec

MAX_ARG_STEP = math.pi / 4
MAX_Y_RATIO = 0.5


@dataclass(frozen=True)
class BranchConfig:
    z1: complex
    z2: complex
    z3: complex

    def __post_init__(self) -> None:
        pts = [0.0, self.z1, self.z2, self.z3, 1.0]
        for i in range(5):
            for k in range(i + 1, 5):
                if abs(complex(pts[i]) - complex(pts[k])) < 1e-14:
                    raise DegenerateConfigError(
                        f"branch points z_{i} and z_{k} coincide ({pts[i]})"
                    )

    @property
    def points(self) -> np.ndarray:
        """``(z_0, ..., z_4) = (0, z1, z2, z3, 1)``."""
        return np.array([0.0, self.z1, self.z2, self.z3, 1.0], dtype=complex)

    @property
    def real_points(self) -> np.ndarray:
        self.require_real_ordered()
        return self.points.real.copy()

    @property
    def real_ordered(self) -> bool:
        z = self.points
        if np.any(np.abs(z.imag) > 0):
            return False
        return bool(np.all(np.diff(z.real) > 0))

    def require_real_ordered(self) -> None:
        if not self.real_ordered:
            raise ConfigError("operation needs real branch points 0 < z1 < z2 < z3 < 1")

    @property
    def min_gap(self) -> float:
        z = self.points
        return min(abs(z[i] - z[k]) for i in range(5) for k in range(i + 1, 5))

    @property
    def exclusion_radius(self) -> float:
        return 1e-3 * self.min_gap


@dataclass(frozen=True)
class BranchState:
    """A point with continuously tracked ``arg(x - z_k)``, k = 0..4.

    ``y_sign`` is +1 on the sheet reached from ``y > 0`` on ``(1, inf)`` and
    -1 on its image under the hyperelliptic involution.
    """

    x: complex
    args: tuple[float, ...]
    cfg: BranchConfig
    y_sign: int = 1

    def log_factors(self) -> np.ndarray:
        """``log(x - z_k)`` on the tracked branch."""
        d = self.x - self.cfg.points
        return np.log(np.abs(d)) + 1j * np.asarray(self.args)

    @property
    def y(self) -> complex:
        return self.y_sign * complex(np.exp(0.5 * self.log_factors().sum()))

    @property
    def f(self) -> complex:
        return self.x * (self.x - 1) / self.y

    def t0(self, exponents: Sequence[complex]) -> complex:
        """``prod (x - z_k)**(2 e_k)`` for the five finite exponents."""
        e = np.asarray(exponents, dtype=complex)[:5]
        return complex(np.exp(np.dot(2 * e, self.log_factors())))

    def load(self, spec: TwistSpec) -> complex:
        """Value of ``T**s f**m`` at this point of ``X``."""
        value = self.t0(spec.effective_array())
        # effective exponents already carry prod (x-z)**(-m/2) from f**m;
        # the sheet sign enters through 1/y**m
        return value * (self.y_sign ** abs(spec.f_twist))

    def flipped(self) -> "BranchState":
        """Image under ``(x, y) -> (x, -y)``; the branch of T is unchanged."""
        return replace(self, y_sign=-self.y_sign)


def init_base_branch(cfg: BranchConfig, x_base: float | None = None) -> BranchState:
    cfg.require_real_ordered()
    if x_base is None:
        x_base = 2 * max(1.0, abs(cfg.z3)) + 1
    if x_base <= 1:
        raise ConfigError("base point must lie on (1, inf)")
    return BranchState(complex(x_base), (0.0,) * 5, cfg, 1)


# -- paths -----------------------------------------------------------------


@dataclass(frozen=True)
class Line:
    a: complex
    b: complex

    def at(self, s: float) -> complex:
        return self.a + (self.b - self.a) * s

    def reversed(self) -> "Line":
        return Line(self.b, self.a)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def at(self, s: float) -> complex:
        th = self.theta0 + (self.theta1 - self.theta0) * s
        return self.center + self.radius * complex(math.cos(th), math.sin(th))

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.theta1, self.theta0)


Segment = Line | Arc


def reverse_path(path: Sequence[Segment]) -> list[Segment]:
    return [seg.reversed() for seg in reversed(path)]


def _step(state: BranchState, x_new: complex) -> BranchState | None:
    z = state.cfg.points
    old = state.x - z
    new = x_new - z
    d = np.angle(new / old)
    if np.max(np.abs(d)) > MAX_ARG_STEP:
        return None
    # |y| ratio check guards the sheet continuation itself
    ratio = np.sqrt(np.prod(np.abs(new) / np.abs(old)))
    if abs(ratio - 1) > MAX_Y_RATIO:
        return None
    return replace(state, x=complex(x_new), args=tuple(np.asarray(state.args) + d))


def continue_along_path(state: BranchState, path: Iterable[Segment]) -> BranchState:
    """Analytic continuation along a polyline/arc path.

    Steps are halved until every ``arg(x - z_k)`` moves by less than pi/4.
    """
    cfg = state.cfg
    rmin = cfg.exclusion_radius
    z = cfg.points
    for seg in path:
        start = seg.at(0.0)
        if abs(start - state.x) > 1e-9 * max(1.0, abs(state.x)):
            raise ValueError(f"path segment starts at {start}, state is at {state.x}")
        s, h = 0.0, 1 / 16
        while s < 1.0:
            h = min(h, 1.0 - s)
            x_new = seg.at(s + h)
            if np.min(np.abs(x_new - z)) < rmin:
                raise SingularityError(f"path passes within {rmin:g} of a branch point near {x_new}")
            nxt = _step(state, x_new)
            if nxt is None:
                h /= 2
                if h < 1e-14:
                    raise SingularityError(f"step control failed near {state.x}")
                continue
            state = nxt
            s += h
            h *= 2
    return state


def lower_path(cfg: BranchConfig, x_from: complex, x_to: complex, depth: float | None = None) -> list[Segment]:
    """Path from one real point to another through ``Im x = -depth``."""
    if depth is None:
        depth = 0.5 * max(1.0, abs(cfg.z3))
    lo1 = complex(x_from.real, -depth)
    lo2 = complex(x_to.real, -depth)
    return [Line(x_from, lo1), Line(lo1, lo2), Line(lo2, x_to)]


def state_on_interval(j: int, t: float, cfg: BranchConfig) -> BranchState:
    """Continue the base branch to the real point ``t`` in ``(z_j, z_{j+1})``."""
    z = cfg.real_points
    hi = z[j + 1] if j < 4 else math.inf
    if not z[j] < t < hi:
        raise ValueError(f"{t} is not inside interval {j}")
    base = init_base_branch(cfg)
    if j == 4:
        return continue_along_path(base, [Line(base.x, complex(t))])
    return continue_along_path(base, lower_path(cfg, base.x, complex(t)))


def interval_phase_factor(j: int, spec: TwistSpec, cfg: BranchConfig) -> complex:
    """Constant phase of the loaded section on ``(z_j, z_{j+1})``.

    Equals ``prod_{j<k<=4} e(-e_k)`` for the effective exponents ``e_k``,
    i.e. the factor relative to ``prod |t - z_k|**(2 e_k)``.
    """
    cfg.require_real_ordered()
    if not 0 <= j <= 4:
        raise ValueError(f"interval index must be 0..4, got {j}")
    e = spec.effective_array()
    return complex(np.exp(-1j * np.pi * 2 * e[j + 1 : 5].sum()))


def _loop_around(cfg: BranchConfig, p: int, turns: int) -> tuple[list[Segment], complex]:
    base = init_base_branch(cfg)
    if p == 5:
        # clockwise in x is the positive direction around infinity
        arc = Arc(0j, abs(base.x), 0.0, -2 * math.pi * turns)
        return [arc], base.x
    z = cfg.points
    others = [abs(z[p] - z[k]) for k in range(5) if k != p]
    r = 0.25 * min(others)
    start = complex(z[p].real + r, z[p].imag)
    approach = lower_path(cfg, base.x, start) if p < 4 else [Line(base.x, start)]
    circle = Arc(z[p], r, 0.0, 2 * math.pi * turns)
    return approach + [circle] + reverse_path(approach), base.x


def loop_monodromy(p: int, space: str, spec: TwistSpec, cfg: BranchConfig) -> complex:
    """Monodromy of the loaded section along a positive loop around puncture ``p``.

    On ``Y`` the loop winds once around ``z_p``; on ``X`` a loop around the
    ramification point ``P_p`` winds twice in ``x``.
    """
    if space not in ("X", "Y"):
        raise ValueError(f"space must be 'X' or 'Y', got {space!r}")
    if not 0 <= p <= 5:
        raise ValueError(f"puncture index must be 0..5, got {p}")
    turns = 1 if space == "Y" else 2
    path, _ = _loop_around(cfg, p, turns)
    start = init_base_branch(cfg)
    end = continue_along_path(start, path)
    y_ratio = end.y / start.y
    y_sign = 1 if abs(y_ratio - 1) < abs(y_ratio + 1) else -1
    if space == "X" and y_sign != 1:
        raise SingularityError("loop on X did not close on the curve")
    return end.load(spec) / start.load(spec)

