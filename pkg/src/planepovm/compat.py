"""Effects on the real plane and joint measurability of two-outcome POVMs.

An effect ``A(alpha, phi, r) = alpha/2 I + r/2 (cos 2phi sigma3 + sin 2phi sigma1)``
is encoded by the pair ``(alpha, v)`` with ``v = r (cos 2phi, sin 2phi)``.
It is positive iff ``|v| <= alpha``.  Two effects are jointly measurable iff
some ``(alpha, v)`` keeps all four outcomes of the candidate joint POVM
positive; at fixed ``alpha`` that is a nonempty intersection of four disks.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, InfeasibleChoiceError
from .plane import (
    ATOL,
    SYM_IDENTITY,
    SymMat2,
    canonical_angle,
    projector,
    spectral_decompose,
)

GRID_POINTS = 256
ZOOM_POINTS = 33
ZOOM_ROUNDS = 12
BISECT_ITERS = 60
CHOICE_TOL = 1e-12


@dataclass(frozen=True)
class Effect:
    alpha: float
    phi: float
    r: float

    def __post_init__(self):
        a, r = float(self.alpha), float(self.r)
        if r < 0.0 or r > a + ATOL or a > 2.0 - r + ATOL:
            raise DomainError(f"effect condition r <= alpha <= 2 - r fails for alpha={a}, r={r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", canonical_angle(float(self.phi)))

    @classmethod
    def from_matrix(cls, m: SymMat2) -> "Effect":
        lp, lm, phi = spectral_decompose(m)
        return cls(lp + lm, phi, lp - lm)

    @classmethod
    def from_json(cls, obj) -> "Effect":
        if not isinstance(obj, dict) or set(obj) != {"alpha", "phi", "r"}:
            raise DomainError("effect JSON needs exactly the keys alpha, phi, r")
        return cls(float(obj["alpha"]), float(obj["phi"]), float(obj["r"]))

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "phi": self.phi, "r": self.r}

    def matrix(self) -> SymMat2:
        return SymMat2.from_pauli(
            0.5 * self.alpha, 0.5 * self.r * math.cos(2 * self.phi), 0.5 * self.r * math.sin(2 * self.phi)
        )


@dataclass(frozen=True)
class BlochVec:
    x: float
    y: float

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def __add__(self, o: "BlochVec") -> "BlochVec":
        return BlochVec(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "BlochVec") -> "BlochVec":
        return BlochVec(self.x - o.x, self.y - o.y)


def effect_matrix(e: Effect) -> SymMat2:
    return e.matrix()


def bloch_vec(e: Effect) -> BlochVec:
    return BlochVec(e.r * math.cos(2 * e.phi), e.r * math.sin(2 * e.phi))


def _op(alpha: float, v: BlochVec) -> SymMat2:
    """Operator ``alpha/2 I + (v_x sigma3 + v_y sigma1)/2`` (not necessarily positive)."""
    return SymMat2.from_pauli(0.5 * alpha, 0.5 * v.x, 0.5 * v.y)


@dataclass(frozen=True)
class DichotomicPOVM:
    plus: SymMat2

    def __post_init__(self):
        if not self.plus.is_effect(1e-12):
            raise DomainError("outcome '+' is not an effect")

    @property
    def minus(self) -> SymMat2:
        return SYM_IDENTITY - self.plus


@dataclass(frozen=True)
class MarkovKernel2:
    """Stochastic post-processing with ``mu(+,+)`` and ``mu(+,-)``."""

    mu_pp: float
    mu_pm: float

    def __post_init__(self):
        for name in ("mu_pp", "mu_pm"):
            val = getattr(self, name)
            if not (0.0 <= val <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {val!r}")

    @property
    def mu_mp(self) -> float:
        return 1.0 - self.mu_pp

    @property
    def mu_mm(self) -> float:
        return 1.0 - self.mu_pm

    @classmethod
    def for_effect(cls, alpha: float, r: float) -> "MarkovKernel2":
        return cls(0.5 * (alpha + r), 0.5 * (alpha - r))


def fuzzify(phi: float, kernel: MarkovKernel2) -> DichotomicPOVM:
    e = projector(phi)
    return DichotomicPOVM(kernel.mu_pp * e + kernel.mu_pm * (SYM_IDENTITY - e))


def sequential_povm(first: float, second: float) -> DichotomicPOVM:
    """Two polarizers in a row: ``F+ = E_first E_second E_first``."""
    a, b = projector(first).to_array(), projector(second).to_array()
    return DichotomicPOVM(SymMat2.from_array(a @ b @ a))


def sequential_probabilities(rho: SymMat2, first: float, second: float) -> tuple[float, float]:
    if not rho.is_density():
        raise DomainError("rho is not a density matrix")
    f = sequential_povm(first, second)
    p1 = float(np.trace(rho.to_array() @ f.plus.to_array()))
    return p1, float(np.trace(rho.to_array() @ f.minus.to_array()))


def necessary_condition(e1: Effect, e2: Effect) -> tuple[bool, float]:
    v1, v2 = bloch_vec(e1), bloch_vec(e2)
    value = (v1 + v2).norm + (v1 - v2).norm
    return value <= 2.0 + 1e-12, value


@dataclass(frozen=True)
class JointPOVM:
    g11: SymMat2
    g10: SymMat2
    g01: SymMat2
    g00: SymMat2

    def outcomes(self) -> tuple[SymMat2, SymMat2, SymMat2, SymMat2]:
        return self.g11, self.g10, self.g01, self.g00

    def min_eigenvalue(self) -> float:
        return min(g.eigvals()[1] for g in self.outcomes())

    def marginal_residual(self, a1: SymMat2, a2: SymMat2) -> float:
        total = self.g11 + self.g10 + self.g01 + self.g00
        return max(
            (self.g11 + self.g10).max_abs_diff(a1),
            (self.g11 + self.g01).max_abs_diff(a2),
            total.max_abs_diff(SYM_IDENTITY),
        )

    def validate(self, e1: Effect, e2: Effect, tol: float = 1e-10) -> bool:
        return self.min_eigenvalue() >= -tol and self.marginal_residual(e1.matrix(), e2.matrix()) <= tol

    def to_json(self) -> dict:
        names = ("G11", "G10", "G01", "G00")
        return {n: g.to_array().tolist() for n, g in zip(names, self.outcomes())}


def _build_joint(e1: Effect, e2: Effect, alpha: float, v: BlochVec) -> JointPOVM:
    a1, a2 = e1.matrix(), e2.matrix()
    g11 = _op(alpha, v)
    return JointPOVM(g11, a1 - g11, a2 - g11, SYM_IDENTITY - a1 - a2 + g11)


def _conditions(e1: Effect, e2: Effect, alpha: float, v: BlochVec):
    v1, v2 = bloch_vec(e1), bloch_vec(e2)
    return (
        ("|v| <= alpha (G11 >= 0)", alpha - v.norm),
        ("|v1 - v| <= alpha1 - alpha (G10 >= 0)", e1.alpha - alpha - (v1 - v).norm),
        ("|v2 - v| <= alpha2 - alpha (G01 >= 0)", e2.alpha - alpha - (v2 - v).norm),
        ("|v - v1 - v2| <= 2 - alpha1 - alpha2 + alpha (G00 >= 0)",
         2.0 - e1.alpha - e2.alpha + alpha - (v - v1 - v2).norm),
    )


def joint_from_choice(e1: Effect, e2: Effect, alpha: float, v: BlochVec,
                      tol: float = CHOICE_TOL) -> JointPOVM:
    """Joint POVM with ``G11 = alpha/2 I + v.sigma/2``.

    Raises :class:`InfeasibleChoiceError` naming the first condition violated.
    """
    for name, margin in _conditions(e1, e2, alpha, v):
        if margin < -tol:
            raise InfeasibleChoiceError(f"condition {name} violated by {-margin:.3e}")
    return _build_joint(e1, e2, alpha, v)


class Verdict(enum.Enum):
    COMPATIBLE = "Compatible"
    INCOMPATIBLE = "Incompatible"
    UNDETERMINED = "Undetermined"


@dataclass
class CompatibilityResult:
    verdict: Verdict
    max_slack: float
    alpha: float | None = None
    v: BlochVec | None = None
    joint: JointPOVM | None = None
    scan_alphas: np.ndarray = field(default_factory=lambda: np.empty(0))
    scan_slacks: np.ndarray = field(default_factory=lambda: np.empty(0))

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "max_slack": self.max_slack}
        if self.alpha is not None:
            out["alpha"] = self.alpha
            out["v"] = [self.v.x, self.v.y]
        if self.joint is not None:
            out["joint"] = self.joint.to_json()
        if self.verdict is Verdict.INCOMPATIBLE:
            out["scan"] = {"alpha": self.scan_alphas.tolist(), "slack": self.scan_slacks.tolist()}
        return out


def _disks(e1: Effect, e2: Effect, alphas: np.ndarray):
    """Centers and radii of the four feasibility disks for each ``alpha``."""
    v1, v2 = bloch_vec(e1), bloch_vec(e2)
    n = len(alphas)
    cx = np.tile([0.0, v1.x, v2.x, v1.x + v2.x], (n, 1))
    cy = np.tile([0.0, v1.y, v2.y, v1.y + v2.y], (n, 1))
    rad = np.column_stack([alphas, e1.alpha - alphas, e2.alpha - alphas, 2.0 - e1.alpha - e2.alpha + alphas])
    return cx, cy, rad


def alpha_slack(e1: Effect, e2: Effect, alphas) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Largest uniform shrink of the four disks that keeps a common point.

    Nonnegative exactly when some ``v`` makes the joint POVM at that
    ``alpha`` positive.  Returns ``(slack, x, y)``.
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    return kernels.max_slack(*_disks(e1, e2, alphas), iters=BISECT_ITERS)


def helly_triples_intersect(cx, cy, rad) -> bool:
    """Every three of the disks share a point (equivalent to all of them, in the plane)."""
    idx = range(len(rad))
    return all(
        kernels.disks_intersect(np.take(cx, t), np.take(cy, t), np.take(rad, t))[0]
        for t in itertools.combinations(idx, 3)
    )


def _nearest_feasible(cx, cy, rad, target, fallback, eps=1e-12):
    """Point of the disk intersection closest to ``target``.

    The minimizer is ``target`` itself, its projection onto one circle, or
    a vertex where two circles cross; ``fallback`` is known feasible.
    """
    tx, ty = target
    cands = [(tx, ty), fallback]
    for x0, y0, r in zip(cx, cy, rad):
        d = math.hypot(tx - x0, ty - y0)
        if d > 0.0:
            cands.append((x0 + r * (tx - x0) / d, y0 + r * (ty - y0) / d))
    for i, j in itertools.combinations(range(len(rad)), 2):
        dx, dy = cx[j] - cx[i], cy[j] - cy[i]
        d = math.hypot(dx, dy)
        ri, rj = max(rad[i], 0.0), max(rad[j], 0.0)
        if d == 0.0 or d > ri + rj or d < abs(ri - rj):
            continue
        a = (ri * ri - rj * rj + d * d) / (2 * d)
        h = math.sqrt(max(ri * ri - a * a, 0.0))
        mx, my = cx[i] + a * dx / d, cy[i] + a * dy / d
        cands += [(mx - h * dy / d, my + h * dx / d), (mx + h * dy / d, my - h * dx / d)]

    def ok(p):
        return all(math.hypot(p[0] - x0, p[1] - y0) <= r + eps for x0, y0, r in zip(cx, cy, rad))

    good = [p for p in cands if ok(p)] or [fallback]
    return min(good, key=lambda p: math.hypot(p[0] - tx, p[1] - ty))


def compatibility_decide(e1: Effect, e2: Effect, tol: float = 1e-10) -> CompatibilityResult:
    """Decide joint measurability of ``{A1, I - A1}`` and ``{A2, I - A2}``.

    The slack is concave in ``alpha``, so a coarse grid followed by zooming
    in on the best cell finds its maximum.  Among feasible choices the
    largest ``alpha`` is used, then the ``v`` closest to ``(v1 + v2)/2``.
    """
    lo = max(0.0, e1.alpha + e2.alpha - 2.0)
    hi = min(e1.alpha, e2.alpha)
    if lo > hi:
        raise DomainError("empty alpha range; effects are invalid")
    scan_a = np.linspace(lo, hi, GRID_POINTS)
    scan_s, xs, ys = alpha_slack(e1, e2, scan_a)
    best = int(np.argmax(scan_s))
    best_a, best_s, best_p = scan_a[best], scan_s[best], (xs[best], ys[best])
    step = (hi - lo) / (GRID_POINTS - 1)
    for _ in range(ZOOM_ROUNDS):
        if step == 0.0:
            break
        grid = np.linspace(max(lo, best_a - step), min(hi, best_a + step), ZOOM_POINTS)
        s, x, y = alpha_slack(e1, e2, grid)
        k = int(np.argmax(s))
        if s[k] > best_s:
            best_a, best_s, best_p = grid[k], s[k], (x[k], y[k])
        step = 2.0 * step / (ZOOM_POINTS - 1)
    best_a, best_s = float(best_a), float(best_s)

    if best_s < -tol:
        return CompatibilityResult(Verdict.INCOMPATIBLE, best_s, scan_alphas=scan_a, scan_slacks=scan_s)

    alpha, point = best_a, best_p
    if best_s >= 0.0:
        s_hi, x_hi, y_hi = alpha_slack(e1, e2, [hi])
        if s_hi[0] >= 0.0:
            alpha, point = hi, (x_hi[0], y_hi[0])
        else:
            a_ok, a_bad = best_a, hi
            for _ in range(BISECT_ITERS):
                mid = 0.5 * (a_ok + a_bad)
                s, x, y = alpha_slack(e1, e2, [mid])
                if s[0] >= 0.0:
                    a_ok, point = mid, (x[0], y[0])
                else:
                    a_bad = mid
            alpha = a_ok
    cx, cy, rad = (arr[0] for arr in _disks(e1, e2, np.array([alpha])))
    v1, v2 = bloch_vec(e1), bloch_vec(e2)
    mid_pt = (0.5 * (v1.x + v2.x), 0.5 * (v1.y + v2.y))
    vx, vy = _nearest_feasible(cx, cy, rad, mid_pt, (float(point[0]), float(point[1])))
    v = BlochVec(float(vx), float(vy))
    joint = _build_joint(e1, e2, alpha, v)
    verdict = Verdict.COMPATIBLE if joint.validate(e1, e2, tol) else Verdict.UNDETERMINED
    return CompatibilityResult(verdict, best_s, alpha, v, joint if verdict is Verdict.COMPATIBLE else None,
                               scan_a, scan_s)


__all__ = [
    "BlochVec",
    "CompatibilityResult",
    "DichotomicPOVM",
    "Effect",
    "JointPOVM",
    "MarkovKernel2",
    "Verdict",
    "alpha_slack",
    "bloch_vec",
    "compatibility_decide",
    "effect_matrix",
    "fuzzify",
    "helly_triples_intersect",
    "joint_from_choice",
    "necessary_condition",
    "sequential_povm",
    "sequential_probabilities",
]
