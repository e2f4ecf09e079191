"""Real 2x2 state space: density matrices, Pauli/Jordan algebra, Stokes view.

Conventions
-----------
* ``sigma3 = diag(1, -1)``, ``sigma1 = [[0, 1], [1, 0]]``,
  ``tau2 = [[0, -1], [1, 0]]`` (generator of plane rotations).
* A density matrix with mixing parameter ``r`` and orientation ``phi`` is
  ``1/2 I + r/2 (cos 2phi sigma3 + sin 2phi sigma1)``.  Orientations are
  identified modulo pi and stored in ``[0, pi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DomainError

ATOL = 1e-12

IDENTITY = np.eye(2)
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])
TAU2 = np.array([[0.0, -1.0], [1.0, 0.0]])


def canonical_angle(phi: float, period: float = math.pi) -> float:
    """Reduce ``phi`` to ``[0, period)``."""
    out = math.fmod(phi, period)
    if out < 0.0:
        out += period
    if out >= period:
        out = 0.0
    return out


@dataclass(frozen=True)
class SymMat2:
    """Real symmetric matrix ``[[a, b], [b, d]]``."""

    a: float
    b: float
    d: float

    @classmethod
    def from_array(cls, m, atol: float = 1e-9) -> "SymMat2":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
        if abs(m[0, 1] - m[1, 0]) > atol:
            raise DomainError("matrix is not symmetric")
        return cls(float(m[0, 0]), 0.5 * float(m[0, 1] + m[1, 0]), float(m[1, 1]))

    @classmethod
    def from_pauli(cls, iso: float, s3: float, s1: float) -> "SymMat2":
        """Build ``iso*I + s3*sigma3 + s1*sigma1``."""
        return cls(iso + s3, s1, iso - s3)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b, self.d]])

    def pauli(self) -> tuple[float, float, float]:
        """Coefficients ``(iso, s3, s1)`` on ``I, sigma3, sigma1``."""
        return 0.5 * (self.a + self.d), 0.5 * (self.a - self.d), self.b

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.b

    def eigvals(self) -> tuple[float, float]:
        """Eigenvalues in decreasing order."""
        iso, s3, s1 = self.pauli()
        rad = math.hypot(s3, s1)
        return iso + rad, iso - rad

    def is_effect(self, tol: float = ATOL) -> bool:
        hi, lo = self.eigvals()
        return lo >= -tol and hi <= 1.0 + tol

    def is_density(self, tol: float = ATOL) -> bool:
        return self.eigvals()[1] >= -tol and abs(self.trace - 1.0) <= tol

    def max_abs_diff(self, other: "SymMat2") -> float:
        return max(abs(self.a - other.a), abs(self.b - other.b), abs(self.d - other.d))

    def __add__(self, other: "SymMat2") -> "SymMat2":
        return SymMat2(self.a + other.a, self.b + other.b, self.d + other.d)

    def __sub__(self, other: "SymMat2") -> "SymMat2":
        return SymMat2(self.a - other.a, self.b - other.b, self.d - other.d)

    def __mul__(self, c: float) -> "SymMat2":
        return SymMat2(c * self.a, c * self.b, c * self.d)

    __rmul__ = __mul__

    def __neg__(self) -> "SymMat2":
        return SymMat2(-self.a, -self.b, -self.d)


SYM_IDENTITY = SymMat2(1.0, 0.0, 1.0)
SYM_ZERO = SymMat2(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class PolarState:
    """Plane density matrix in polar coordinates ``(r, phi)``."""

    r: float
    phi: float

    def __post_init__(self):
        _check_unit(self.r, "r")
        object.__setattr__(self, "phi", canonical_angle(self.phi))

    def to_matrix(self) -> SymMat2:
        return density_from_polar(self.r, self.phi)

    @property
    def eigvals(self) -> tuple[float, float]:
        return 0.5 * (1.0 + self.r), 0.5 * (1.0 - self.r)


@dataclass(frozen=True)
class StokesVector:
    """Linear Stokes parameters; the circular component is fixed to zero."""

    xi1: float
    xi3: float
    intensity: float = 1.0

    @property
    def degree(self) -> float:
        return math.hypot(self.xi1, self.xi3)

    def tensor(self) -> SymMat2:
        """Normalized polarization tensor ``(I + xi3 sigma3 + xi1 sigma1) / 2``."""
        return SymMat2.from_pauli(0.5, 0.5 * self.xi3, 0.5 * self.xi1)


@dataclass(frozen=True)
class PureState:
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", canonical_angle(self.phi))

    def projector(self) -> SymMat2:
        return projector(self.phi)

    def ket(self) -> np.ndarray:
        return np.array([math.cos(self.phi), math.sin(self.phi)])


def _check_unit(r: float, name: str) -> None:
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {r!r}")


def density_from_polar(r: float, phi: float) -> SymMat2:
    """Density matrix with eigenvalues ``(1 +- r)/2`` oriented along ``phi``."""
    _check_unit(r, "r")
    return SymMat2.from_pauli(0.5, 0.5 * r * math.cos(2 * phi), 0.5 * r * math.sin(2 * phi))


def projector(phi: float) -> SymMat2:
    """Orthogonal projector ``|phi><phi|`` onto the unit vector at angle phi."""
    c, s = math.cos(phi), math.sin(phi)
    return SymMat2(c * c, c * s, s * s)


def spectral_decompose(m: SymMat2) -> tuple[float, float, float]:
    """Return ``(lambda_plus, lambda_minus, phi)`` with
    ``m = lambda_plus E_phi + lambda_minus E_{phi + pi/2}``.

    A degenerate spectrum returns ``phi = 0``.
    """
    iso, s3, s1 = m.pauli()
    rad = math.hypot(s3, s1)
    if rad == 0.0:
        return iso, iso, 0.0
    return iso + rad, iso - rad, canonical_angle(0.5 * math.atan2(s1, s3))


def polar_from_density(m: SymMat2, tol: float = ATOL) -> PolarState:
    if not m.is_density(tol):
        raise DomainError("matrix is not a density matrix")
    lp, lm, phi = spectral_decompose(m)
    return PolarState(min(1.0, max(0.0, lp - lm)), phi)


def von_neumann_entropy(r: float) -> float:
    """Entropy ``-Tr(rho ln rho)`` of a plane state with mixing parameter r."""
    _check_unit(r, "r")
    out = 0.0
    for lam in (0.5 * (1.0 + r), 0.5 * (1.0 - r)):
        if lam > 0.0:
            out -= lam * math.log(lam)
    return out


def rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def rotation_exp(phi: float) -> np.ndarray:
    """``exp(phi * tau2)`` by matrix exponential."""
    return expm(phi * TAU2)


def rotate_state(s: PolarState, phi: float) -> PolarState:
    """Conjugate by ``R(phi)``: the orientation shifts by ``phi``."""
    return PolarState(s.r, s.phi + phi)


def conjugate(m: SymMat2, rot: np.ndarray) -> SymMat2:
    return SymMat2.from_array(rot @ m.to_array() @ rot.T)


def sigma_phi(phi: float) -> SymMat2:
    """``cos(phi) sigma3 + sin(phi) sigma1``."""
    return SymMat2.from_pauli(0.0, math.cos(phi), math.sin(phi))


def commutator(x, y) -> np.ndarray:
    x = x.to_array() if isinstance(x, SymMat2) else np.asarray(x, dtype=float)
    y = y.to_array() if isinstance(y, SymMat2) else np.asarray(y, dtype=float)
    return x @ y - y @ x


def jordan_product(x: SymMat2, y: SymMat2) -> SymMat2:
    """Symmetrized product ``(xy + yx)/2``, computed on Pauli components."""
    a, d, b = x.pauli()
    a2, d2, b2 = y.pauli()
    return SymMat2.from_pauli(a * a2 + d * d2 + b * b2, a * d2 + a2 * d, a * b2 + a2 * b)


def hilbert_inner(x: SymMat2, y: SymMat2) -> float:
    """Trace inner product ``Tr(xy)``."""
    return x.a * y.a + 2.0 * x.b * y.b + x.d * y.d


def stokes_from_density(s: PolarState, intensity: float = 1.0) -> StokesVector:
    return StokesVector(s.r * math.sin(2 * s.phi), s.r * math.cos(2 * s.phi), intensity)


def density_from_stokes(v: StokesVector, tol: float = ATOL) -> PolarState:
    p = v.degree
    if p > 1.0 + tol:
        raise DomainError(f"degree of polarization {p} exceeds 1")
    if v.intensity < 0.0:
        raise DomainError("intensity must be nonnegative")
    phi = 0.0 if p == 0.0 else 0.5 * math.atan2(v.xi1, v.xi3)
    return PolarState(min(p, 1.0), phi)


def overlap_probability(eta: float, phi: float) -> float:
    """``|<eta|phi>|^2 = cos^2(phi - eta)``."""
    return math.cos(phi - eta) ** 2
