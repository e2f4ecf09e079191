"""Quantization with real density matrices of dimension ``n``, covariant under SO(n).

Rotations are parametrized by ``n(n-1)/2`` Euler angles.  Stage ``k``
(``k = 1..n-1``) is ``R^(k) = R_1(phi_1^k) ... R_k(phi_k^k)`` where ``R_j``
turns the ``(x_j, x_{j+1})`` plane; the full rotation is the product
``R^(n-1) ... R^(1)``.  ``phi_1^k`` runs over ``[0, 2pi)`` and the others
over ``[0, pi)`` with Haar weight ``sin^(j-1) phi_j^k``.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import gamma, roots_legendre

from . import kernels
from .errors import BudgetExceededError, DomainError
from .fourier import FourierFunction

DEFAULT_NODE_BUDGET = 2_000_000
MAX_N = 4
DEFAULT_NODES = {2: 16, 3: 16, 4: 8}


def node_budget() -> int:
    raw = os.environ.get("PLANEPOVM_NODE_BUDGET")
    return int(raw) if raw else DEFAULT_NODE_BUDGET


def angle_labels(n: int) -> list[tuple[int, int]]:
    """``(k, j)`` pairs in storage order: ``k`` ascending, then ``j``."""
    return [(k, j) for k in range(1, n) for j in range(1, k + 1)]


def _factor_order(n: int) -> tuple[list[int], list[int]]:
    """Column indices and plane numbers in multiplication order."""
    labels = angle_labels(n)
    pos = {lab: i for i, lab in enumerate(labels)}
    cols, planes = [], []
    for k in range(n - 1, 0, -1):
        for j in range(1, k + 1):
            cols.append(pos[(k, j)])
            planes.append(j)
    return cols, planes


@dataclass(frozen=True)
class EulerAngles:
    n: int
    angles: tuple[float, ...]

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        angles = tuple(float(a) for a in self.angles)
        if len(angles) != self.n * (self.n - 1) // 2:
            raise DomainError(f"SO({self.n}) needs {self.n * (self.n - 1) // 2} angles, got {len(angles)}")
        for (k, j), a in zip(angle_labels(self.n), angles):
            top = 2 * math.pi if j == 1 else math.pi
            if not (0.0 <= a < top):
                raise DomainError(f"angle phi_{j}^{k} = {a} outside [0, {top:.6g})")
        object.__setattr__(self, "angles", angles)

    @classmethod
    def nested(cls, stages: Sequence[Sequence[float]]) -> "EulerAngles":
        """From ``[[phi_1^1], [phi_1^2, phi_2^2], ...]``."""
        return cls(len(stages) + 1, tuple(a for st in stages for a in st))

    @classmethod
    def identity(cls, n: int) -> "EulerAngles":
        return cls(n, (0.0,) * (n * (n - 1) // 2))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "EulerAngles":
        return cls(n, tuple(rng.uniform(0, 2 * math.pi if j == 1 else math.pi) for _, j in angle_labels(n)))


def elementary_rotation(k: int, phi: float, n: int) -> np.ndarray:
    """Rotation by ``phi`` in the ``(x_k, x_{k+1})`` plane (1-based ``k``)."""
    if not (1 <= k <= n - 1):
        raise DomainError(f"plane index k must satisfy 1 <= k <= {n - 1}, got {k}")
    out = np.eye(n)
    c, s = math.cos(phi), math.sin(phi)
    out[k - 1, k - 1] = out[k, k] = c
    out[k - 1, k] = -s
    out[k, k - 1] = s
    return out


def rotations_from_angle_array(angles: np.ndarray, n: int) -> np.ndarray:
    """Batch version of :func:`rotation_from_euler` for an ``(N, n(n-1)/2)`` array."""
    cols, planes = _factor_order(n)
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    if n == 1 or not cols:
        return np.broadcast_to(np.eye(n), (angles.shape[0], n, n)).copy()
    return kernels.euler_product(angles[:, cols], np.array(planes), n)


def rotation_from_euler(e: EulerAngles) -> np.ndarray:
    return rotations_from_angle_array(np.array([e.angles]), e.n)[0]


def sphere_area(dim: int) -> float:
    """Area of the unit sphere ``S^dim`` in ``R^(dim+1)``."""
    i = dim + 1
    return 2.0 * math.pi ** (i / 2) / gamma(i / 2)


def sin_weighted_rule(m: int, power: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_0^pi g(t) sin^power(t) dt``.

    Gauss-Legendre nodes; the folded weights ``w_GL sin^power`` get the
    smallest correction that makes the rule exact for ``g`` a trigonometric
    polynomial of degree ``(m - 1) // 2``.
    """
    x, w = roots_legendre(m)
    t = 0.5 * math.pi * (x + 1.0)
    w0 = 0.5 * math.pi * w * np.sin(t) ** power
    deg = (m - 1) // 2
    weight = FourierFunction(1.0)
    for _ in range(power):
        weight = weight * FourierFunction.sin(1)
    rows, moments = [np.ones(m)], [weight.arc_integral(0.0, math.pi) * math.pi]
    for k in range(1, deg + 1):
        for basis, vals in ((FourierFunction.cos(k), np.cos(k * t)), (FourierFunction.sin(k), np.sin(k * t))):
            rows.append(vals)
            moments.append((weight * basis).arc_integral(0.0, math.pi) * math.pi)
    v = np.array(rows)
    gap = np.array(moments) - v @ w0
    return t, w0 + v.T @ np.linalg.solve(v @ v.T, gap)


@dataclass(frozen=True)
class HaarGrid:
    """Tensor quadrature for the Haar density over the Euler box."""

    n: int
    nodes: tuple[int, ...]
    angles: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, n: int, nodes=None, budget: int | None = None) -> "HaarGrid":
        if int(n) != n or n < 2:
            raise DomainError(f"n must be an integer >= 2, got {n!r}")
        labels = angle_labels(n)
        if nodes is None:
            nodes = DEFAULT_NODES.get(n, 8)
        counts = tuple(int(nodes) for _ in labels) if np.isscalar(nodes) else tuple(int(c) for c in nodes)
        if len(counts) != len(labels) or min(counts) < 1:
            raise DomainError(f"need {len(labels)} positive node counts, got {counts}")
        cost = math.prod(counts)
        limit = node_budget() if budget is None else budget
        if cost > limit:
            raise BudgetExceededError(cost, limit)
        if n > MAX_N:
            raise DomainError(f"n = {n} is above the supported maximum {MAX_N}")
        axes, axis_w = [], []
        for (k, j), m in zip(labels, counts):
            if j == 1:
                axes.append(2 * math.pi * np.arange(m) / m)
                axis_w.append(np.full(m, 2 * math.pi / m))
            else:
                t, w = sin_weighted_rule(m, j - 1)
                axes.append(t)
                axis_w.append(w)
        mesh = np.meshgrid(*axes, indexing="ij")
        wmesh = np.meshgrid(*axis_w, indexing="ij")
        angles = np.stack([m.ravel() for m in mesh], axis=1)
        weights = np.prod(np.stack([w.ravel() for w in wmesh], axis=1), axis=1)
        return cls(n, counts, angles, weights)

    @property
    def size(self) -> int:
        return len(self.weights)

    def rotations(self) -> np.ndarray:
        return rotations_from_angle_array(self.angles, self.n)

    @property
    def volume(self) -> float:
        return float(math.fsum(self.weights))


@dataclass(frozen=True)
class VolumeReport:
    n: int
    quadrature: float
    product_from_1: float
    product_from_2: float
    matches: str

    def to_json(self) -> dict:
        return {"n": self.n, "quadrature": self.quadrature, "product_i_1_to_n": self.product_from_1,
                "product_i_2_to_n": self.product_from_2, "matches": self.matches}


def haar_volume(n: int, grid: HaarGrid | None = None) -> VolumeReport:
    """Quadrature volume beside the two sphere-area products ``i = 1..n`` and ``i = 2..n``."""
    grid = grid or HaarGrid.build(n)
    if grid.n != n:
        raise DomainError("grid dimension does not match n")
    vol = grid.volume
    p1 = math.prod(sphere_area(i - 1) for i in range(1, n + 1))
    p2 = math.prod(sphere_area(i - 1) for i in range(2, n + 1))
    matches = "none"
    for name, p in (("i=2..n", p2), ("i=1..n", p1)):
        if abs(vol - p) <= 1e-6 * p:
            matches = name
            break
    return VolumeReport(n, vol, p1, p2, matches)


@dataclass(frozen=True)
class SimplexEta:
    eta: tuple[float, ...]

    def __post_init__(self):
        eta = tuple(float(x) for x in self.eta)
        n = len(eta)
        if n < 2:
            raise DomainError("eta needs at least two entries")
        if abs(math.fsum(eta)) > 1e-12:
            raise DomainError(f"eta must sum to zero, got {math.fsum(eta)}")
        for x in eta:
            if x < -1.0 / n - 1e-12 or x > 1.0 - 1.0 / n + 1e-12:
                raise DomainError(f"eta entry {x} outside [-1/n, 1 - 1/n]")
        object.__setattr__(self, "eta", eta)

    @property
    def n(self) -> int:
        return len(self.eta)

    def diag(self) -> np.ndarray:
        return np.diag(self.eta)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "SimplexEta":
        """Uniform point on the probability simplex, shifted by ``-1/n``."""
        p = rng.dirichlet(np.ones(n))
        eta = p - 1.0 / n
        eta[-1] = -math.fsum(eta[:-1])
        return cls(tuple(eta))


def _as_rotation(rot, n: int) -> np.ndarray:
    if rot is None:
        return np.eye(n)
    if isinstance(rot, EulerAngles):
        if rot.n != n:
            raise DomainError("rotation dimension does not match eta")
        return rotation_from_euler(rot)
    m = np.asarray(rot, dtype=float)
    if m.shape != (n, n):
        raise DomainError(f"expected an {n}x{n} rotation")
    return m


def density_n(eta: SimplexEta, rot=None) -> np.ndarray:
    """``I/n + R D(eta) R^T``."""
    n = eta.n
    r = _as_rotation(rot, n)
    return np.eye(n) / n + r @ eta.diag() @ r.T


def _c_n(grid: HaarGrid) -> float:
    return grid.volume / grid.n


def resolution_identity_n(eta: SimplexEta, grid: HaarGrid, phi0=None) -> float:
    """Max-entry deviation of ``sum (w/c_n) R rho_{eta, phi0} R^T`` from ``I``."""
    if eta.n != grid.n:
        raise DomainError("eta dimension does not match grid")
    rots = grid.rotations()
    total = kernels.congruence_sum(rots, grid.weights / _c_n(grid), density_n(eta, phi0))
    return float(np.max(np.abs(total - np.eye(grid.n))))


@dataclass(frozen=True)
class OrthonormalityReport:
    """``max_residual`` is the full ``delta delta`` test (fails for the abelian
    ``n = 2``); ``row_residual`` covers the row conditions valid for every ``n``."""

    max_residual: float
    row_residual: float
    zero_mean_residual: float


def matrix_element_orthonormality_n(grid: HaarGrid, seed: int = 0, n_eta: int = 10) -> OrthonormalityReport:
    """Second moments of the entries of ``R`` against ``delta delta``, and the
    vanishing average of ``R D(eta) R^T`` for ``n_eta`` random ``eta``."""
    n = grid.n
    rots = grid.rotations()
    w = grid.weights / _c_n(grid)
    mom = kernels.second_moments(rots, w)
    eye = np.eye(n)
    target = np.einsum("ik,jl->ijkl", eye, eye)
    # int R_ji R_jk = delta_ik, and int (R_ji R_lk + R_li R_jk) = 0 for j != l
    rows = 0.0
    for j in range(n):
        for l in range(n):
            block = mom[j, :, l, :]
            want = eye if j == l else np.zeros((n, n))
            got = block if j == l else block + mom[l, :, j, :]
            rows = max(rows, float(np.max(np.abs(got - want))))
    rng = np.random.default_rng(seed)
    zero = 0.0
    for _ in range(n_eta):
        eta = SimplexEta.random(n, rng)
        zero = max(zero, float(np.max(np.abs(kernels.congruence_sum(rots, w, eta.diag())))))
    return OrthonormalityReport(float(np.max(np.abs(mom - target))), rows, zero)


RotationFunction = Callable[[np.ndarray], np.ndarray]


def quantize_n(f: RotationFunction, eta: SimplexEta, grid: HaarGrid, phi0=None) -> np.ndarray:
    """``A_f = sum (w/c_n) f(R) rho_{eta, R R0}``; ``f`` maps ``(N, n, n)`` rotations to ``(N,)``."""
    if eta.n != grid.n:
        raise DomainError("eta dimension does not match grid")
    n = grid.n
    rots = grid.rotations()
    vals = np.asarray(f(rots), dtype=float)
    if vals.shape != (grid.size,):
        raise DomainError(f"f must return one value per node, got shape {vals.shape}")
    w = grid.weights * vals / _c_n(grid)
    r0 = _as_rotation(phi0, n)
    mean = math.fsum(w) / n
    return mean * np.eye(n) + kernels.congruence_sum(rots, w, r0 @ eta.diag() @ r0.T)


def haar_mean(f: RotationFunction, grid: HaarGrid) -> float:
    return float(math.fsum(grid.weights * np.asarray(f(grid.rotations()), dtype=float)) / grid.volume)


def covariance_check_n(f: RotationFunction, beta, eta: SimplexEta, grid: HaarGrid, phi0=None) -> float:
    """``max |R_b A_f R_b^T - A_g|`` with ``g(R) = f(R_b^T R)``."""
    rb = _as_rotation(beta, grid.n)
    lhs = rb @ quantize_n(f, eta, grid, phi0) @ rb.T

    def g(rots):
        return f(np.einsum("ji,ajk->aik", rb, rots))

    rhs = quantize_n(g, eta, grid, phi0)
    return float(np.max(np.abs(lhs - rhs)))
