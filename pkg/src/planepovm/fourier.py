"""Finite real trigonometric series on the circle.

All integrals use the measure ``dphi/pi`` on ``[0, 2pi)`` unless stated
otherwise; with it ``1/sqrt(2), cos k phi, sin k phi`` are orthonormal.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FourierFunction:
    """``f(phi) = a0 + sum_k (c_k cos k phi + s_k sin k phi)``.

    ``harmonics`` holds ``(k, c_k, s_k)`` triples with distinct ``k >= 1``,
    sorted by ``k``; the constructor merges duplicates.
    """

    a0: float = 0.0
    harmonics: tuple[tuple[int, float, float], ...] = ()

    def __post_init__(self):
        merged: dict[int, list[float]] = {}
        for k, c, s in self.harmonics:
            if int(k) != k or k < 1:
                raise DomainError(f"harmonic index must be a positive integer, got {k!r}")
            acc = merged.setdefault(int(k), [0.0, 0.0])
            acc[0] += float(c)
            acc[1] += float(s)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(
            self,
            "harmonics",
            tuple((k, c, s) for k, (c, s) in sorted(merged.items()) if c != 0.0 or s != 0.0),
        )

    # -- construction -----------------------------------------------------
    @classmethod
    def cos(cls, k: int, amp: float = 1.0) -> "FourierFunction":
        return cls(0.0, ((k, amp, 0.0),)) if k else cls(amp)

    @classmethod
    def sin(cls, k: int, amp: float = 1.0) -> "FourierFunction":
        return cls(0.0, ((k, 0.0, amp),))

    @classmethod
    def from_v3(cls, f1: float, f2: float, f0: float) -> "FourierFunction":
        """``f1 cos 2phi + f2 sin 2phi + f0/sqrt(2)``."""
        return cls(f0 / math.sqrt(2.0), ((2, f1, f2),))

    @classmethod
    def from_spectrum(cls, spec: np.ndarray) -> "FourierFunction":
        """Inverse of :meth:`spectrum` (index ``K + k`` holds ``F_k``)."""
        spec = np.asarray(spec)
        big_k = (len(spec) - 1) // 2
        harm = []
        for k in range(1, big_k + 1):
            fk = spec[big_k + k]
            harm.append((k, 2.0 * fk.real, -2.0 * fk.imag))
        return cls(float(spec[big_k].real), tuple(harm))

    @classmethod
    def project(
        cls, func: Callable[[np.ndarray], np.ndarray], max_k: int = 16, n_samples: int | None = None
    ) -> tuple["FourierFunction", float]:
        """Sample ``func`` on a uniform grid and keep frequencies ``<= max_k``.

        Returns the projection and the relative L2 sampling residual it leaves
        behind (zero when ``func`` already is a trigonometric polynomial of
        degree ``<= max_k``).
        """
        n = n_samples or 8 * (max_k + 1)
        if n <= 2 * max_k:
            raise DomainError("need more than 2*max_k samples")
        phi = TWO_PI * np.arange(n) / n
        vals = np.asarray(func(phi), dtype=float)
        coef = np.fft.rfft(vals) / n
        harm = tuple((k, 2.0 * coef[k].real, -2.0 * coef[k].imag) for k in range(1, max_k + 1))
        proj = cls(float(coef[0].real), harm)
        norm = float(np.linalg.norm(vals))
        loss = float(np.linalg.norm(vals - proj(phi)))
        return proj, (loss / norm if norm > 0 else loss)

    # -- evaluation and coefficients --------------------------------------
    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        out = np.full(phi.shape, self.a0)
        for k, c, s in self.harmonics:
            out = out + c * np.cos(k * phi) + s * np.sin(k * phi)
        return out if out.ndim else float(out)

    @property
    def degree(self) -> int:
        return self.harmonics[-1][0] if self.harmonics else 0

    def coef(self, k: int) -> tuple[float, float]:
        """``(c_k, s_k)``; for ``k = 0`` returns ``(a0, 0)``."""
        if k == 0:
            return self.a0, 0.0
        for kk, c, s in self.harmonics:
            if kk == k:
                return c, s
        return 0.0, 0.0

    def mean(self) -> float:
        return self.a0

    def v3_coords(self) -> tuple[float, float, float]:
        """Coordinates on the orthonormal basis ``cos 2phi, sin 2phi, 1/sqrt(2)``."""
        c2, s2 = self.coef(2)
        return c2, s2, math.sqrt(2.0) * self.a0

    def spectrum(self, size: int | None = None) -> np.ndarray:
        """Complex coefficients ``F_{-K..K}`` with ``f = sum F_k e^{ik phi}``."""
        big_k = max(self.degree, size or 0)
        out = np.zeros(2 * big_k + 1, dtype=complex)
        out[big_k] = self.a0
        for k, c, s in self.harmonics:
            out[big_k + k] = 0.5 * (c - 1j * s)
            out[big_k - k] = 0.5 * (c + 1j * s)
        return out

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "FourierFunction") -> "FourierFunction":
        if not isinstance(other, FourierFunction):
            other = FourierFunction(float(other))
        return FourierFunction(self.a0 + other.a0, self.harmonics + other.harmonics)

    __radd__ = __add__

    def __neg__(self) -> "FourierFunction":
        return self * -1.0

    def __sub__(self, other: "FourierFunction") -> "FourierFunction":
        return self + (-other if isinstance(other, FourierFunction) else -float(other))

    def __mul__(self, other) -> "FourierFunction":
        if isinstance(other, FourierFunction):
            return FourierFunction.from_spectrum(np.convolve(self.spectrum(), other.spectrum()))
        c = float(other)
        return FourierFunction(c * self.a0, tuple((k, c * a, c * b) for k, a, b in self.harmonics))

    __rmul__ = __mul__

    def shift(self, theta: float) -> "FourierFunction":
        """Translate: ``phi -> f(phi - theta)``."""
        harm = []
        for k, c, s in self.harmonics:
            ck, sk = math.cos(k * theta), math.sin(k * theta)
            harm.append((k, c * ck - s * sk, s * ck + c * sk))
        return FourierFunction(self.a0, tuple(harm))

    def integral(self) -> float:
        """``int_0^{2pi} f dphi/pi``."""
        return 2.0 * self.a0

    def arc_integral(self, a: float, b: float) -> float:
        """``int_a^b f dphi/pi`` from the exact antiderivative."""
        out = self.a0 * (b - a)
        for k, c, s in self.harmonics:
            out += c * (math.sin(k * b) - math.sin(k * a)) / k
            out += s * (math.cos(k * a) - math.cos(k * b)) / k
        return out / math.pi

    def inner(self, other: "FourierFunction") -> float:
        """``int f g dphi/pi`` by orthogonality."""
        out = 2.0 * self.a0 * other.a0
        for k, c, s in self.harmonics:
            c2, s2 = other.coef(k)
            out += c * c2 + s * s2
        return out

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"a0": self.a0, "harmonics": [[k, c, s] for k, c, s in self.harmonics]}

    @classmethod
    def from_json(cls, obj) -> "FourierFunction":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or set(obj) - {"a0", "harmonics"}:
            raise DomainError("FourierFunction JSON must be an object with keys a0, harmonics")
        harm: Iterable = obj.get("harmonics", [])
        triples = []
        for h in harm:
            if len(h) != 3:
                raise DomainError(f"harmonic entry must be [k, ck, sk], got {h!r}")
            triples.append((h[0], h[1], h[2]))
        return cls(float(obj.get("a0", 0.0)), tuple(triples))


def trapezoid_nodes(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n
