"""Multiplication operators on L2(S1, dphi/pi), their compression to the
two-dimensional subspaces spanned by ``cos, sin``, and the circle POVM of arcs.

Every inner product here is computed from exact trigonometric identities
(products of :class:`FourierFunction` and closed-form antiderivatives);
no quadrature enters, so identities hold to rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import QuantizerConfig, quantize
from .errors import DomainError
from .fourier import TWO_PI, FourierFunction, trapezoid_nodes
from .plane import IDENTITY, SymMat2

ROOT_HALF = 1.0 / math.sqrt(2.0)
ARC_TOL = 1e-12


@dataclass(frozen=True)
class TruncatedL2Basis:
    """``[1/sqrt2, cos phi, sin phi, ..., cos K phi, sin K phi]``."""

    K: int

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 0:
            raise DomainError(f"K must be a nonnegative integer, got {self.K!r}")

    @property
    def dim(self) -> int:
        return 2 * self.K + 1

    def element(self, i: int) -> FourierFunction:
        if i == 0:
            return FourierFunction(ROOT_HALF)
        k, odd = divmod(i + 1, 2)
        return FourierFunction.sin(k) if odd else FourierFunction.cos(k)

    def elements(self) -> list[FourierFunction]:
        return [self.element(i) for i in range(self.dim)]

    def coords(self, f: FourierFunction) -> np.ndarray:
        """Coordinates of ``f``; raises if ``f`` has frequencies above ``K``."""
        if f.degree > self.K:
            raise DomainError(f"degree {f.degree} exceeds basis cutoff {self.K}")
        out = np.zeros(self.dim)
        out[0] = f.a0 / ROOT_HALF
        for k, c, s in f.harmonics:
            out[2 * k - 1] = c
            out[2 * k] = s
        return out

    def gram(self) -> np.ndarray:
        els = self.elements()
        return np.array([[u.inner(v) for v in els] for u in els])


def mult_operator_matrix(f: FourierFunction, K: int) -> np.ndarray:
    """Matrix of ``M_f`` on ``TruncatedL2Basis(K + deg f)``.

    Columns for inputs of frequency ``<= K`` are exact; the padding keeps
    their images inside the basis.
    """
    basis = TruncatedL2Basis(K + f.degree)
    els = basis.elements()
    images = [f * e for e in els]
    return np.array([[u.inner(img) for img in images] for u in els])


@dataclass(frozen=True)
class SubspaceO:
    """``O1 = {cos, sin}`` or ``O2 = {-sin, cos}``."""

    j: int

    def __post_init__(self):
        if self.j not in (1, 2):
            raise DomainError(f"subspace index must be 1 or 2, got {self.j!r}")

    def functions(self) -> tuple[FourierFunction, FourierFunction]:
        c, s = FourierFunction.cos(1), FourierFunction.sin(1)
        return (c, s) if self.j == 1 else (-s, c)

    def embedding(self, K: int) -> np.ndarray:
        """``dim x 2`` isometry ``U_o`` into ``TruncatedL2Basis(K)``, ``K >= 1``."""
        basis = TruncatedL2Basis(K)
        return np.column_stack([basis.coords(u) for u in self.functions()])

    def projector(self, K: int) -> np.ndarray:
        u = self.embedding(K)
        return u @ u.T


def toeplitz_compress(f: FourierFunction, j: int) -> np.ndarray:
    """Matrix of ``P_o M_f P_o`` on the ``O_j`` basis, via the padded ``M_f``."""
    mf = mult_operator_matrix(f, 1)
    u = SubspaceO(j).embedding(1 + f.degree)
    return u.T @ mf @ u


def toeplitz_compress_gram(f: FourierFunction, j: int) -> np.ndarray:
    """Same matrix from direct integrals ``int f o_i o_k dphi/pi``."""
    o = SubspaceO(j).functions()
    return np.array([[(f * oi).inner(ok) for ok in o] for oi in o])


def rank_one_quantization(f: FourierFunction, theta: float) -> SymMat2:
    """``int f(phi) |phi + theta><phi + theta| dphi/pi`` from product integrals."""
    ct, st = math.cos(theta), math.sin(theta)
    c = FourierFunction(0.0, ((1, ct, -st),))  # cos(phi + theta)
    s = FourierFunction(0.0, ((1, st, ct),))  # sin(phi + theta)
    fc = f * c
    return SymMat2(fc.inner(c), fc.inner(s), (f * s).inner(s))


def toeplitz_residual(f: FourierFunction, j: int) -> float:
    """Max-entry gap between the compression and the rank-one quantization."""
    direct = quantize(f, QuantizerConfig(1.0, 0.0 if j == 1 else math.pi / 2))
    return float(np.max(np.abs(toeplitz_compress(f, j) - direct.to_array())))


def _check_arc(a: float, b: float) -> None:
    if not (0.0 <= a < b <= TWO_PI):
        raise DomainError(f"arc must satisfy 0 <= a < b <= 2pi, got [{a!r}, {b!r}]")


def arc_povm(a: float, b: float) -> SymMat2:
    """``F([a, b]) = int_a^b |phi><phi| dphi/pi`` in closed form."""
    _check_arc(a, b)
    ds = math.sin(2 * b) - math.sin(2 * a)
    dc = math.cos(2 * a) - math.cos(2 * b)
    iso = (b - a) / TWO_PI
    return SymMat2.from_pauli(iso, ds / (4 * math.pi), dc / (4 * math.pi))


def compressed_indicator(a: float, b: float) -> np.ndarray:
    """``P_o1 M_chi P_o1`` from arc integrals of basis products."""
    _check_arc(a, b)
    o = SubspaceO(1).functions()
    return np.array([[(oi * ok).arc_integral(a, b) for ok in o] for oi in o])


def naimark_arc_check(a: float, b: float) -> float:
    return float(np.max(np.abs(arc_povm(a, b).to_array() - compressed_indicator(a, b))))


@dataclass(frozen=True)
class AdditivityReport:
    residual: float
    min_eigenvalue: float
    traces: tuple[float, ...]


def povm_additivity_check(partition) -> AdditivityReport:
    """Sum ``F`` over a partition of ``[0, 2pi)`` into arcs.

    Arcs are ``(a, b)`` pairs; overlaps or gaps larger than ``1e-12``
    raise :class:`DomainError`.
    """
    arcs = sorted((float(a), float(b)) for a, b in partition)
    if not arcs:
        raise DomainError("partition is empty")
    for a, b in arcs:
        _check_arc(a, b)
    edge = 0.0
    for a, b in arcs:
        if a < edge - ARC_TOL:
            raise DomainError(f"arc starting at {a} overlaps the previous one")
        if a > edge + ARC_TOL:
            raise DomainError(f"gap in partition before {a}")
        edge = b
    if abs(edge - TWO_PI) > ARC_TOL:
        raise DomainError("partition does not reach 2pi")
    parts = [arc_povm(a, b) for a, b in arcs]
    total = sum((p.to_array() for p in parts), np.zeros((2, 2)))
    return AdditivityReport(
        float(np.max(np.abs(total - IDENTITY))),
        min(p.eigvals()[1] for p in parts),
        tuple(p.trace for p in parts),
    )


def _rotation_entries() -> dict[tuple[int, int], FourierFunction]:
    c, s = FourierFunction.cos(1), FourierFunction.sin(1)
    return {(1, 1): c, (1, 2): -s, (2, 1): s, (2, 2): c}


@dataclass(frozen=True)
class OrthonormalityReport:
    named: dict
    max_residual: float
    trapezoid_max_residual: float


def unitary_family_orthonormality(n_samples: int = 32) -> OrthonormalityReport:
    """Square-integrability and orthonormality of the entries of ``R(phi)``.

    Residuals come from exact integrals; ``n_samples`` only sets the
    trapezoid cross-check that is reported alongside.
    """
    R = _rotation_entries()
    phi = trapezoid_nodes(n_samples)

    def exact(f):
        return f.integral()

    def trap(f):
        return TWO_PI / n_samples * float(np.sum(f(phi))) / math.pi

    named = {
        "R11_square": exact(R[1, 1] * R[1, 1]) - 1.0,
        "R12_square": exact(R[1, 2] * R[1, 2]) - 1.0,
        "R11_R12": exact(R[1, 1] * R[1, 2]),
        "R11_R21_sym": exact(R[1, 1] * R[2, 1] + R[2, 1] * R[1, 1]),
        "R11_R22_mixed": exact(R[1, 1] * R[2, 2] + R[2, 1] * R[1, 2]),
    }
    worst = worst_trap = 0.0
    idx = (1, 2)
    for j in idx:
        for i in idx:
            for k in idx:
                g = R[j, i] * R[j, k]
                target = 1.0 if i == k else 0.0
                worst = max(worst, abs(exact(g) - target))
                worst_trap = max(worst_trap, abs(trap(g) - target))
                for l in idx:
                    if l == j:
                        continue
                    h = R[j, i] * R[l, k] + R[l, i] * R[j, k]
                    worst = max(worst, abs(exact(h)))
                    worst_trap = max(worst_trap, abs(trap(h)))
    worst = max(worst, *(abs(v) for v in named.values()))
    return OrthonormalityReport(named, worst, worst_trap)


def density_weighted_toeplitz(f: FourierFunction, r: float, phi0: float) -> tuple[SymMat2, SymMat2]:
    """Quantization with ``rho_{r, phi0}`` against the mixture of the two
    rank-one quantizations along ``phi0`` and ``phi0 + pi/2``."""
    lhs = quantize(f, QuantizerConfig(r, phi0))
    rhs = (0.5 * (1.0 + r)) * rank_one_quantization(f, phi0) + (
        0.5 * (1.0 - r)
    ) * rank_one_quantization(f, phi0 + math.pi / 2)
    return lhs, rhs
