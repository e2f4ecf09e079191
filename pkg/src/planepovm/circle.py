"""Integral quantization of functions on the circle.

A function ``f`` is mapped to ``A_f = int f(phi) rho_{r, phi + phi0} dphi/pi``.
Only the frequencies 0 and 2 of ``f`` survive, so every symmetric 2x2 matrix
is the image of a unique element of ``V3 = span{1/sqrt2, cos 2phi, sin 2phi}``
when ``r > 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularQuantizerError
from .fourier import FourierFunction, trapezoid_nodes
from .plane import (
    SYM_IDENTITY,
    SymMat2,
    density_from_polar,
    hilbert_inner,
    rotation,
    sigma_phi,
)

DEFAULT_NODES = 64


@dataclass(frozen=True)
class QuantizerConfig:
    """Family ``rho_{r, phi + phi0}``, ``0 <= phi < 2pi``."""

    r: float
    phi0: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.r <= 1.0):
            raise DomainError(f"r must lie in [0, 1], got {self.r!r}")

    def state(self, phi: float) -> SymMat2:
        return density_from_polar(self.r, phi + self.phi0)


def mean_and_doubled_fourier(f: FourierFunction) -> tuple[float, float, float]:
    """``(<f>, C_c(f), C_s(f))`` with ``C_c = int f cos 2phi dphi/pi``."""
    c2, s2 = f.coef(2)
    return f.a0, c2, s2


def mean_and_doubled_fourier_trapezoid(f: FourierFunction, n: int = DEFAULT_NODES):
    """Same triple from an ``n``-point trapezoid rule (exact when ``n > deg f + 2``)."""
    phi = trapezoid_nodes(n)
    vals = f(phi)
    w = 2.0 / n
    return (
        math.fsum(vals) / n,
        w * math.fsum(vals * np.cos(2 * phi)),
        w * math.fsum(vals * np.sin(2 * phi)),
    )


def quantize(f: FourierFunction, q: QuantizerConfig, method: str = "exact",
             n: int = DEFAULT_NODES) -> SymMat2:
    """Quantize ``f`` with the family of ``q``.

    ``method="exact"`` uses Fourier orthogonality; ``"trapezoid"`` sums the
    integrand over ``n`` equispaced nodes.
    """
    if method == "exact":
        mean, cc, cs = mean_and_doubled_fourier(f.shift(q.phi0))
        return SymMat2.from_pauli(mean, 0.5 * q.r * cc, 0.5 * q.r * cs)
    if method == "trapezoid":
        return _trapezoid_integral(f, q, n)
    raise DomainError(f"unknown integration method {method!r}")


def _trapezoid_integral(weight, q: QuantizerConfig, n: int) -> SymMat2:
    phi = trapezoid_nodes(n)
    vals = np.asarray(weight(phi), dtype=float)
    ang = 2.0 * (phi + q.phi0)
    w = 2.0 / n
    iso = 0.5 * w * math.fsum(vals)
    s3 = 0.5 * q.r * w * math.fsum(vals * np.cos(ang))
    s1 = 0.5 * q.r * w * math.fsum(vals * np.sin(ang))
    return SymMat2.from_pauli(iso, s3, s1)


def resolution_of_identity(q: QuantizerConfig, method: str = "exact",
                           n: int = DEFAULT_NODES) -> float:
    """Max-entry deviation of ``int rho_{r, phi + phi0} dphi/pi`` from ``I``."""
    return quantize(FourierFunction(1.0), q, method, n).max_abs_diff(SYM_IDENTITY)


def lower_symbol(A: SymMat2, q: QuantizerConfig) -> FourierFunction:
    """``phi -> Tr(A rho_{r, phi + phi0})``."""
    iso, s3, s1 = A.pauli()
    c0, s0 = math.cos(2 * q.phi0), math.sin(2 * q.phi0)
    return FourierFunction(iso, ((2, q.r * (s3 * c0 + s1 * s0), q.r * (s1 * c0 - s3 * s0)),))


def symbol_transform_matrix(r: float, s: float, theta0: float, phi0: float) -> np.ndarray:
    """Linear map on V3 coordinates ``(f1, f2, f0)`` taking ``f`` to the lower
    symbol (family ``(s, theta0)``) of its quantization (family ``(r, phi0)``).

    The block acting on ``(f1, f2)`` is a rotation by ``2(phi0 - theta0)``
    scaled by ``rs/2``; ``f0`` is preserved.
    """
    for name, val in (("r", r), ("s", s)):
        if not (0.0 <= val <= 1.0):
            raise DomainError(f"{name} must lie in [0, 1], got {val!r}")
    ang = 2.0 * (phi0 - theta0)
    k = 0.5 * r * s
    c, sn = math.cos(ang), math.sin(ang)
    return np.array([[k * c, -k * sn, 0.0], [k * sn, k * c, 0.0], [0.0, 0.0, 1.0]])


def _v3_basis(q: QuantizerConfig) -> tuple[SymMat2, SymMat2, SymMat2]:
    root = math.sqrt(2.0)
    return (
        sigma_phi(2 * q.phi0) * (1 / root),
        sigma_phi(2 * q.phi0 + math.pi / 2) * (1 / root),
        SYM_IDENTITY * (1 / root),
    )


def upper_symbol(A: SymMat2, q: QuantizerConfig) -> FourierFunction:
    """The unique V3 function whose quantization with ``q`` is ``A``."""
    if q.r == 0.0:
        raise SingularQuantizerError("quantization with r = 0 is not invertible")
    a1, a2, a0 = (hilbert_inner(A, e) for e in _v3_basis(q))
    k = math.sqrt(2.0) / q.r
    return FourierFunction.from_v3(k * a1, k * a2, a0)


def mixed_superposition_check(s: float, theta: float, r: float, phi0: float = 0.0,
                              n: int = DEFAULT_NODES) -> tuple[float, bool]:
    """Represent ``rho_{s,theta}`` as ``int [1/2 + (s/r) cos 2phi] rho_{r, phi+theta}``.

    The integral is evaluated with an ``n``-node trapezoid rule.  ``phi0`` is
    accepted for interface symmetry and does not enter.  Returns the
    max-entry residual and whether the weight is a probability density
    (``r >= 2s``).
    """
    del phi0
    if r == 0.0:
        raise SingularQuantizerError("r = 0 cannot reproduce a mixed state")
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"s must lie in [0, 1], got {s!r}")
    weight = FourierFunction(0.5, ((2, s / r, 0.0),))
    got = _trapezoid_integral(weight, QuantizerConfig(r, theta), n)
    return got.max_abs_diff(density_from_polar(s, theta)), r >= 2.0 * s


def covariance_check(f: FourierFunction, q: QuantizerConfig, theta: float) -> float:
    """``max |R(theta) A_f R(-theta) - A_{f(. - theta)}|``."""
    rot = rotation(theta)
    lhs = rot @ quantize(f, q).to_array() @ rot.T
    rhs = quantize(f.shift(theta), q).to_array()
    return float(np.max(np.abs(lhs - rhs)))


def weighted_norm_identity(f1: float, f2: float, f0: float, q: QuantizerConfig) -> tuple[float, float]:
    """``(f1^2 + f2^2 + f0^2, <A_f | Delta_r A_f>)`` for ``f`` in V3."""
    if q.r == 0.0:
        raise SingularQuantizerError("weighted norm is undefined for r = 0")
    A = quantize(FourierFunction.from_v3(f1, f2, f0), q)
    coords = np.array([hilbert_inner(A, e) for e in _v3_basis(q)])
    scale = np.array([2.0 / q.r**2, 2.0 / q.r**2, 1.0])
    return f1 * f1 + f2 * f2 + f0 * f0, float(coords @ (scale * coords))


def pairing_density(x: float, q_rec: QuantizerConfig, q_an: QuantizerConfig) -> FourierFunction:
    """``x' -> Tr(rho_rec(x) rho_an(x'))``, a probability density in ``dx'/pi``."""
    return lower_symbol(q_rec.state(x), q_an)
