"""Acceptance suite: each criterion is a function returning a :class:`CriterionResult`.

Tolerances and sample sizes are pinned here; ``planepovm selftest`` and
``tests/test_acceptance.py`` both run this module.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import circle, compat, polarizer, son, toeplitz
from .fourier import FourierFunction
from .plane import (
    IDENTITY,
    TAU2,
    PolarState,
    SymMat2,
    commutator,
    projector,
    sigma_phi,
    von_neumann_entropy,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: dict[str, bool] = field(default_factory=dict)
    detail: dict[str, float | str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def line(self) -> str:
        failed = [k for k, ok in self.checks.items() if not ok]
        status = "PASS" if self.passed else "FAIL"
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        return f"criterion {self.number:2d} {status}: {self.title}{tail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "checks": dict(self.checks), "detail": dict(self.detail)}


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _record(res: CriterionResult, name: str, value: float, tol: float) -> None:
    res.detail[name] = float(value)
    res.checks[name] = bool(value <= tol)


def criterion_1() -> CriterionResult:
    res = CriterionResult(1, "resolution of identity on the circle")
    rng = _rng(1)
    worst_exact = worst_trap = 0.0
    for _ in range(100):
        q = circle.QuantizerConfig(rng.uniform(0, 1), rng.uniform(0, 2 * math.pi))
        worst_exact = max(worst_exact, circle.resolution_of_identity(q, "exact"))
        worst_trap = max(worst_trap, circle.resolution_of_identity(q, "trapezoid", 64))
    _record(res, "exact", worst_exact, 1e-12)
    _record(res, "trapezoid_N64", worst_trap, 1e-12)
    return res


def criterion_2() -> CriterionResult:
    res = CriterionResult(2, "quantization of the V3 basis and commutator")
    rng = _rng(2)
    e0 = FourierFunction(1 / math.sqrt(2))
    e1, e2 = FourierFunction.cos(2), FourierFunction.sin(2)
    exact0 = True
    w1 = w2 = wc = 0.0
    for _ in range(100):
        r, phi0 = rng.uniform(0, 1), rng.uniform(0, 2 * math.pi)
        q = circle.QuantizerConfig(r, phi0)
        a0 = circle.quantize(e0, q)
        exact0 &= a0 == SymMat2(1 / math.sqrt(2), 0.0, 1 / math.sqrt(2))
        a1, a2 = circle.quantize(e1, q), circle.quantize(e2, q)
        w1 = max(w1, a1.max_abs_diff(sigma_phi(2 * phi0) * (r / 2)))
        w2 = max(w2, a2.max_abs_diff(sigma_phi(2 * phi0 + math.pi / 2) * (r / 2)))
        wc = max(wc, float(np.max(np.abs(commutator(a1, a2) + 0.5 * r * r * TAU2))))
    res.checks["A_e0_exact"] = bool(exact0)
    _record(res, "A_e1", w1, 1e-12)
    _record(res, "A_e2", w2, 1e-12)
    _record(res, "commutator", wc, 1e-12)
    return res


def literal_symbol_matrix(r: float, s: float, theta0: float, phi0: float) -> np.ndarray:
    """Rotation-contraction matrix exactly as stated for the lower-symbol map:
    ``rs`` times a rotation by ``2(theta0 - phi0)`` on ``(f1, f2)``."""
    a = 2 * (theta0 - phi0)
    k = r * s
    return np.array([[k * math.cos(a), -k * math.sin(a), 0.0],
                     [k * math.sin(a), k * math.cos(a), 0.0],
                     [0.0, 0.0, 1.0]])


def computed_symbol_matrix(r: float, s: float, theta0: float, phi0: float) -> np.ndarray:
    """Columns: V3 coordinates of the lower symbol of ``A_{e_i}``."""
    q_an, q_rec = circle.QuantizerConfig(r, phi0), circle.QuantizerConfig(s, theta0)
    cols = []
    for f in (FourierFunction.cos(2), FourierFunction.sin(2), FourierFunction(1 / math.sqrt(2))):
        cols.append(circle.lower_symbol(circle.quantize(f, q_an), q_rec).v3_coords())
    return np.array(cols).T


def criterion_3() -> CriterionResult:
    res = CriterionResult(3, "upper/lower symbol round trips")
    rng = _rng(3)
    worst = 0.0
    for r in (0.1, 0.5, 1.0):
        for _ in range(1000):
            a = SymMat2(*rng.uniform(-1, 1, 3))
            q = circle.QuantizerConfig(r, rng.uniform(0, 2 * math.pi))
            worst = max(worst, circle.quantize(circle.upper_symbol(a, q), q).max_abs_diff(a))
    _record(res, "quantize_upper_roundtrip", worst, 1e-10)
    lit = internal = 0.0
    for _ in range(200):
        r, s = rng.uniform(0, 1, 2)
        theta0, phi0 = rng.uniform(0, 2 * math.pi, 2)
        m = computed_symbol_matrix(r, s, theta0, phi0)
        lit = max(lit, float(np.max(np.abs(m - literal_symbol_matrix(r, s, theta0, phi0)))))
        internal = max(internal, float(np.max(np.abs(m - circle.symbol_transform_matrix(r, s, theta0, phi0)))))
    _record(res, "lower_symbol_vs_stated_matrix", lit, 1e-12)
    res.detail["lower_symbol_vs_implemented_matrix"] = internal
    return res


def criterion_4() -> CriterionResult:
    res = CriterionResult(4, "mixed state as a superposition of states")
    rng = _rng(4)
    worst = 0.0
    flags_ok = True
    for s in np.linspace(0.0, 1.0, 11):
        for r in np.linspace(0.05, 1.0, 20):
            resid, convex = circle.mixed_superposition_check(float(s), rng.uniform(0, 2 * math.pi), float(r))
            worst = max(worst, resid)
            flags_ok &= convex == (r >= 2 * s)
    for s in np.linspace(0.05, 0.5, 10):
        _, at = circle.mixed_superposition_check(float(s), 0.3, float(2 * s))
        _, below = circle.mixed_superposition_check(float(s), 0.3, float(np.nextafter(2 * s, 0)))
        flags_ok &= at and not below
    _record(res, "residual", worst, 1e-12)
    res.checks["convexity_flag_flips_at_r_eq_2s"] = bool(flags_ok)
    return res


def _random_fourier(deg: int, rng: np.random.Generator) -> FourierFunction:
    return FourierFunction(rng.normal(), tuple((k, rng.normal(), rng.normal()) for k in range(1, deg + 1)))


def _random_partition(rng: np.random.Generator, parts: int) -> list[tuple[float, float]]:
    cuts = np.sort(rng.uniform(0, 2 * math.pi, parts - 1))
    edges = [0.0, *cuts.tolist(), 2 * math.pi]
    return list(zip(edges[:-1], edges[1:]))


def criterion_5() -> CriterionResult:
    res = CriterionResult(5, "Toeplitz identity, Naimark arcs, additivity")
    rng = _rng(5)
    worst_t = 0.0
    for deg in range(7):
        for _ in range(10):
            f = _random_fourier(deg, rng)
            for j in (1, 2):
                worst_t = max(worst_t, toeplitz.toeplitz_residual(f, j))
    worst_n = 0.0
    for _ in range(50):
        a, b = np.sort(rng.uniform(0, 2 * math.pi, 2))
        worst_n = max(worst_n, toeplitz.naimark_arc_check(float(a), float(b)))
    worst_a, psd = 0.0, True
    for _ in range(50):
        rep = toeplitz.povm_additivity_check(_random_partition(rng, 8))
        worst_a = max(worst_a, rep.residual)
        psd &= rep.min_eigenvalue >= -1e-15
    _record(res, "toeplitz", worst_t, 1e-12)
    _record(res, "naimark_arcs", worst_n, 1e-12)
    _record(res, "additivity_8_arcs", worst_a, 1e-12)
    res.checks["parts_psd"] = bool(psd)
    return res


def criterion_6() -> CriterionResult:
    res = CriterionResult(6, "Malus law from the pointer-beam dynamics")
    rng = _rng(6)
    worst_p = worst_u = worst_malus = 0.0
    for _ in range(1000):
        sc = polarizer.MeasurementScenario(
            PolarState(rng.uniform(0, 1), rng.uniform(0, math.pi)),
            PolarState(rng.uniform(0, 1), rng.uniform(0, math.pi)),
            rng.uniform(0, 1), rng.uniform(0, math.pi),
        )
        out = polarizer.measure(sc)
        cf = polarizer.closed_form_probabilities(sc.beam.r, sc.beam.phi, sc.device_phi)
        worst_p = max(worst_p, abs(out.p_parallel - cf[0]), abs(out.p_perp - cf[1]))
        u = polarizer.evolution_operator(sc.device_r, sc.device_phi)
        worst_u = max(worst_u, float(np.max(np.abs(u @ u.T - np.eye(4)))), float(np.max(np.abs(u.T @ u - np.eye(4)))))
        pure = polarizer.MeasurementScenario(sc.pointer, PolarState(1.0, sc.beam.phi), sc.device_r, sc.device_phi)
        o = polarizer.measure(pure)
        d = sc.device_phi - sc.beam.phi
        worst_malus = max(worst_malus, abs(o.p_parallel - math.cos(d) ** 2), abs(o.p_perp - math.sin(d) ** 2))
    _record(res, "matrix_vs_closed_form", worst_p, 1e-12)
    _record(res, "malus_r0_eq_1", worst_malus, 1e-12)
    _record(res, "U_orthogonal", worst_u, 1e-12)
    return res


def criterion_7() -> CriterionResult:
    res = CriterionResult(7, "sequential polarizers and order dependence")
    tol = 1e-15
    e_half_pi, e_quarter_pi, e0 = projector(math.pi / 2), projector(math.pi / 4), projector(0.0)
    fwd = compat.sequential_povm(math.pi / 2, math.pi / 4)
    _record(res, "forward_plus", fwd.plus.max_abs_diff(e_half_pi * 0.5), tol)
    _record(res, "forward_minus", fwd.minus.max_abs_diff(e0 + e_half_pi * 0.5), tol)
    rev = compat.sequential_povm(math.pi / 4, math.pi / 2)
    _record(res, "reverse_plus", rev.plus.max_abs_diff(e_quarter_pi * 0.5), tol)
    _record(res, "reverse_minus", rev.minus.max_abs_diff(SymMat2.from_array(IDENTITY) - e_quarter_pi * 0.5), tol)
    p_fwd, _ = compat.sequential_probabilities(e_half_pi, math.pi / 2, math.pi / 4)
    p_rev, _ = compat.sequential_probabilities(e_half_pi, math.pi / 4, math.pi / 2)
    _record(res, "p1_forward_half", abs(p_fwd - 0.5), tol)
    _record(res, "p1_reverse_quarter", abs(p_rev - 0.25), tol)
    return res


def _random_unbiased(rng):
    return compat.Effect(1.0, rng.uniform(0, math.pi), rng.uniform(0, 1))


def _random_biased(rng):
    r = rng.uniform(0, 1)
    return compat.Effect(rng.uniform(r, 2 - r), rng.uniform(0, math.pi), r)


def criterion_8() -> CriterionResult:
    res = CriterionResult(8, "joint measurability decision")
    e1, e2 = compat.Effect(0.5, math.pi / 2, 0.5), compat.Effect(0.5, math.pi / 4, 0.5)
    dec = compat.compatibility_decide(e1, e2)
    _, value = compat.necessary_condition(e1, e2)
    res.detail["i_verdict"] = dec.verdict.value
    res.checks["i_verdict_incompatible"] = dec.verdict is compat.Verdict.INCOMPATIBLE
    _record(res, "i_necessary_value_sqrt2", abs(value - math.sqrt(2)), 1e-9)

    rng = _rng(8)
    iff_ok, worst = True, 0.0
    for _ in range(500):
        a, b = _random_unbiased(rng), _random_unbiased(rng)
        holds, _ = compat.necessary_condition(a, b)
        verdict = compat.compatibility_decide(a, b).verdict
        iff_ok &= (verdict is compat.Verdict.COMPATIBLE) == holds
        if holds:
            v1, v2 = compat.bloch_vec(a), compat.bloch_vec(b)
            mid = compat.BlochVec(0.5 * (v1.x + v2.x), 0.5 * (v1.y + v2.y))
            joint = compat.joint_from_choice(a, b, 1 - (v1 - v2).norm / 2, mid, tol=1e-10)
            worst = max(worst, -joint.min_eigenvalue(), joint.marginal_residual(a.matrix(), b.matrix()))
    res.checks["ii_verdict_iff_necessary"] = bool(iff_ok)
    _record(res, "ii_constructive_joint", max(worst, 0.0), 1e-10)

    sound, n_compat = True, 0
    for _ in range(500):
        a, b = _random_biased(rng), _random_biased(rng)
        d = compat.compatibility_decide(a, b)
        if d.verdict is compat.Verdict.COMPATIBLE:
            n_compat += 1
            sound &= d.joint is not None and d.joint.validate(a, b, 1e-10)
    res.detail["iii_compatible_count"] = float(n_compat)
    res.checks["iii_soundness"] = bool(sound)
    return res


def _f_deg2(rots: np.ndarray) -> np.ndarray:
    n = rots.shape[-1]
    return rots[:, 0, 0] ** 2 + 0.5 * rots[:, 0, 1] * rots[:, n - 1, 0] - 0.3 * rots[:, 1, 1]


def criterion_9() -> CriterionResult:
    res = CriterionResult(9, "SO(n) Haar quadrature and quantization")
    rng = _rng(9)
    g2 = son.HaarGrid.build(2, 16)
    _record(res, "n2_volume", abs(son.haar_volume(2, g2).quadrature - 2 * math.pi), 1e-10)
    _record(res, "n2_identity", son.resolution_identity_n(son.SimplexEta((0.3, -0.3)), g2), 1e-12)

    t0 = time.perf_counter()
    g3 = son.HaarGrid.build(3, 16)
    eta3 = son.SimplexEta((0.2, 0.0, -0.2))
    _record(res, "n3_volume", abs(son.haar_volume(3, g3).quadrature - 8 * math.pi**2), 1e-6)
    _record(res, "n3_identity", son.resolution_identity_n(eta3, g3), 1e-8)
    orth = son.matrix_element_orthonormality_n(g3)
    _record(res, "n3_orthonormality", max(orth.max_residual, orth.zero_mean_residual), 1e-8)
    _record(res, "n3_runtime_s", time.perf_counter() - t0, 10.0)

    t0 = time.perf_counter()
    g4 = son.HaarGrid.build(4, 8)
    _record(res, "n4_identity", son.resolution_identity_n(son.SimplexEta((0.2, 0.0, 0.0, -0.2)), g4), 1e-6)
    _record(res, "n4_runtime_s", time.perf_counter() - t0, 60.0)

    tols = {2: 1e-12, 3: 1e-8, 4: 1e-6}
    grids = {2: g2, 3: g3, 4: g4}
    etas = {2: son.SimplexEta((0.3, -0.3)), 3: eta3, 4: son.SimplexEta((0.2, 0.0, 0.0, -0.2))}
    for n, g in grids.items():
        a = son.quantize_n(lambda R: np.ones(len(R)), etas[n], g, son.EulerAngles.random(n, rng))
        _record(res, f"n{n}_quantize_one", float(np.max(np.abs(a - np.eye(n)))), tols[n])
    for n in (2, 3):
        beta = son.EulerAngles.random(n, rng)
        phi0 = son.EulerAngles.random(n, rng)
        _record(res, f"n{n}_covariance", son.covariance_check_n(_f_deg2, beta, etas[n], grids[n], phi0), tols[n])
    return res


def criterion_10() -> CriterionResult:
    res = CriterionResult(10, "entropy of plane states")
    _record(res, "S0_ln2", abs(von_neumann_entropy(0.0) - math.log(2)), 1e-14)
    res.checks["S1_zero"] = von_neumann_entropy(1.0) == 0.0
    r = np.linspace(0, 1, 1000)
    s = np.array([von_neumann_entropy(float(x)) for x in r])
    second = s[2:] - 2 * s[1:-1] + s[:-2]
    res.detail["max_second_difference"] = float(second.max())
    res.checks["concave"] = bool(np.all(second <= 0))
    return res


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_all() -> list[CriterionResult]:
    return [fn() for fn in CRITERIA.values()]
