"""Pointer and beam coupled through a linear polarizer.

Two-qubit operators act on ``pointer (x) beam``; the pointer factor is always
the left Kronecker factor.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DomainError
from .plane import IDENTITY, TAU2, PolarState, SymMat2, projector, rotation

PROJ_TOL = 1e-10


def kron(a, b) -> np.ndarray:
    """``a (x) b`` with ``a`` on the pointer."""
    return np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def _as_array(p) -> np.ndarray:
    return p.to_array() if isinstance(p, SymMat2) else np.asarray(p, dtype=float)


def exp_projector(theta: float, p) -> np.ndarray:
    """``exp(theta tau2 (x) P) = R(theta) (x) P + I (x) (I - P)`` for a projector ``P``."""
    pm = _as_array(p)
    if pm.shape != (2, 2) or np.max(np.abs(pm - pm.T)) > PROJ_TOL or np.max(np.abs(pm @ pm - pm)) > PROJ_TOL:
        raise DomainError("P must be a symmetric idempotent 2x2 matrix")
    return kron(rotation(theta), pm) + kron(IDENTITY, IDENTITY - pm)


def exp_projector_numeric(theta: float, p) -> np.ndarray:
    """Reference value by scaling-and-squaring."""
    return expm(theta * kron(TAU2, _as_array(p)))


def evolution_operator(r: float, phi: float, coupling: float = 1.0) -> np.ndarray:
    """``R(G(1+r)/2) (x) E_phi + R(G(1-r)/2) (x) E_{phi+pi/2}``."""
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"device r must lie in [0, 1], got {r!r}")
    e_par = projector(phi).to_array()
    e_perp = projector(phi + math.pi / 2).to_array()
    return kron(rotation(coupling * 0.5 * (1 + r)), e_par) + kron(rotation(coupling * 0.5 * (1 - r)), e_perp)


@dataclass(frozen=True)
class MeasurementScenario:
    pointer: PolarState
    beam: PolarState
    device_r: float
    device_phi: float

    def __post_init__(self):
        if not (0.0 <= self.device_r <= 1.0):
            raise DomainError(f"device r must lie in [0, 1], got {self.device_r!r}")

    @classmethod
    def from_json(cls, obj) -> "MeasurementScenario":
        if isinstance(obj, str):
            obj = json.loads(obj)
        keys = {"pointer": {"s", "theta"}, "beam": {"r", "phi"}, "device": {"r", "phi"}}
        if not isinstance(obj, dict) or set(obj) != set(keys):
            raise DomainError("scenario needs exactly the keys pointer, beam, device")
        for k, fields in keys.items():
            if not isinstance(obj[k], dict) or set(obj[k]) != fields:
                raise DomainError(f"{k} needs exactly the keys {sorted(fields)}")
        return cls(
            PolarState(float(obj["pointer"]["s"]), float(obj["pointer"]["theta"])),
            PolarState(float(obj["beam"]["r"]), float(obj["beam"]["phi"])),
            float(obj["device"]["r"]),
            float(obj["device"]["phi"]),
        )


@dataclass(frozen=True)
class MeasurementResult:
    p_parallel: float
    p_perp: float
    post_state: np.ndarray

    def to_json(self) -> dict:
        return {"p_parallel": self.p_parallel, "p_perp": self.p_perp, "post_state": self.post_state.tolist()}


def measure(sc: MeasurementScenario) -> MeasurementResult:
    """Evolve ``rho_pointer (x) rho_beam`` and read the beam along and across the device axis."""
    u = evolution_operator(sc.device_r, sc.device_phi)
    state = kron(sc.pointer.to_matrix().to_array(), sc.beam.to_matrix().to_array())
    out = u @ state @ u.T
    p_par = float(np.trace(out @ kron(IDENTITY, projector(sc.device_phi).to_array())))
    p_perp = float(np.trace(out @ kron(IDENTITY, projector(sc.device_phi + math.pi / 2).to_array())))
    return MeasurementResult(p_par, p_perp, out)


def closed_form_probabilities(r0: float, phi0: float, phi: float) -> tuple[float, float]:
    c = r0 * math.cos(2 * (phi - phi0))
    return 0.5 * (1 + c), 0.5 * (1 - c)


def beam_blocks(post: np.ndarray, phi: float) -> dict[str, np.ndarray]:
    """Sandwich the output with ``I (x) E`` for ``E`` along and across ``phi``."""
    e = {"par": kron(IDENTITY, projector(phi).to_array()),
         "perp": kron(IDENTITY, projector(phi + math.pi / 2).to_array())}
    return {f"{a}_{b}": e[a] @ post @ e[b] for a in e for b in e}


def partial_trace_beam(m: np.ndarray) -> np.ndarray:
    """Pointer marginal of a 4x4 operator."""
    return np.trace(np.asarray(m).reshape(2, 2, 2, 2), axis1=1, axis2=3)


def partial_trace_pointer(m: np.ndarray) -> np.ndarray:
    """Beam marginal of a 4x4 operator."""
    return np.trace(np.asarray(m).reshape(2, 2, 2, 2), axis1=0, axis2=2)


def pointer_rotation_conjugation(s: PolarState) -> PolarState:
    """Conjugate by ``tau2``; the orientation moves by a quarter turn."""
    m = TAU2 @ s.to_matrix().to_array() @ TAU2.T
    out = PolarState(s.r, s.phi + math.pi / 2)
    if np.max(np.abs(m - out.to_matrix().to_array())) > 1e-12:
        raise AssertionError("conjugation by tau2 disagrees with the quarter-turn shift")
    return out
