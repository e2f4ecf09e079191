import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from planepovm.errors import DomainError
from planepovm.plane import (
    IDENTITY,
    SIGMA1,
    SIGMA3,
    SYM_IDENTITY,
    TAU2,
    PolarState,
    StokesVector,
    SymMat2,
    commutator,
    conjugate,
    density_from_polar,
    density_from_stokes,
    hilbert_inner,
    jordan_product,
    overlap_probability,
    projector,
    rotate_state,
    rotation,
    rotation_exp,
    sigma_phi,
    spectral_decompose,
    stokes_from_density,
    von_neumann_entropy,
)

unit = st.floats(0.0, 1.0)
angle = st.floats(-10.0, 10.0)
entry = st.floats(-5.0, 5.0)
sym = st.builds(SymMat2, entry, entry, entry)


def arr(m):
    return m.to_array()


def test_density_examples():
    assert np.allclose(arr(density_from_polar(0.0, 1.234)), 0.5 * IDENTITY, atol=1e-15)
    assert np.allclose(arr(density_from_polar(1.0, 0.0)), [[1, 0], [0, 0]], atol=1e-15)
    assert np.allclose(arr(density_from_polar(0.5, math.pi / 4)), [[0.5, 0.25], [0.25, 0.5]], atol=1e-15)
    with pytest.raises(DomainError):
        density_from_polar(1.2, 0.0)
    with pytest.raises(DomainError):
        PolarState(-0.1, 0.0)


@given(unit, angle)
def test_density_invariants(r, phi):
    m = density_from_polar(r, phi)
    assert abs(m.trace - 1) <= 1e-12
    assert abs(m.det - (1 - r * r) / 4) <= 1e-12
    eig = np.sort(np.linalg.eigvalsh(arr(m)))[::-1]
    assert np.allclose(eig, [(1 + r) / 2, (1 - r) / 2], atol=1e-12)
    assert m.is_density()
    assert np.allclose(m.eigvals(), eig, atol=1e-12)


def test_spectral_examples():
    assert spectral_decompose(SymMat2(0.5, 0.0, 0.5)) == (0.5, 0.5, 0.0)
    assert spectral_decompose(SymMat2(1.0, 0.0, 0.0)) == (1.0, 0.0, 0.0)
    lp, lm, phi = spectral_decompose(SymMat2(0.5, 0.25, 0.5))
    assert (lp, lm) == pytest.approx((0.75, 0.25), abs=1e-15)
    assert phi == pytest.approx(math.pi / 4, abs=1e-15)


@given(sym)
def test_spectral_reconstructs(m):
    lp, lm, phi = spectral_decompose(m)
    rebuilt = projector(phi) * lp + projector(phi + math.pi / 2) * lm
    assert lp >= lm
    assert rebuilt.max_abs_diff(m) <= 1e-12 * max(1.0, abs(lp), abs(lm))
    w, v = np.linalg.eigh(arr(m))
    assert np.allclose([lp, lm], w[::-1], atol=1e-12)


@given(st.floats(1e-3, 1.0), st.floats(0.0, math.pi - 1e-9))
def test_spectral_inverts_polar(r, phi):
    lp, lm, got = spectral_decompose(density_from_polar(r, phi))
    assert lp - lm == pytest.approx(r, abs=1e-12)
    d = abs(got - phi)
    assert min(d, math.pi - d) <= 1e-9 / r


def test_entropy_values():
    assert von_neumann_entropy(0.0) == pytest.approx(math.log(2), abs=1e-15)
    assert von_neumann_entropy(1.0) == 0.0
    # independent oracle: Shannon entropy of the spectrum in mpmath-free exact form
    ref = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
    assert von_neumann_entropy(0.5) == pytest.approx(ref, abs=1e-15)
    assert von_neumann_entropy(0.5) == pytest.approx(0.5623351446188083, abs=1e-14)
    with pytest.raises(DomainError):
        von_neumann_entropy(1.5)


def test_entropy_decreasing():
    r = np.linspace(0, 1, 500)
    s = np.array([von_neumann_entropy(float(x)) for x in r])
    assert np.all(np.diff(s) < 0)


def test_rotate_state_examples():
    s = PolarState(0.4, 0.7)
    assert rotate_state(s, 0.0) == s
    e = rotate_state(PolarState(1.0, 0.0), math.pi / 2)
    assert np.allclose(arr(e.to_matrix()), [[0, 0], [0, 1]], atol=1e-15)


@given(unit, angle, angle)
def test_rotation_conjugation_matches_shift(r, phi0, phi):
    s = PolarState(r, phi0)
    lhs = conjugate(s.to_matrix(), rotation(phi))
    rhs = rotate_state(s, phi).to_matrix()
    assert lhs.max_abs_diff(rhs) <= 1e-12
    assert np.allclose(lhs.eigvals(), s.to_matrix().eigvals(), atol=1e-12)


def test_sigma_examples():
    assert np.array_equal(arr(sigma_phi(0.0)), SIGMA3)
    assert np.allclose(arr(sigma_phi(math.pi / 2)), SIGMA1, atol=1e-16)


@given(angle)
def test_sigma_properties(phi):
    s = arr(sigma_phi(phi))
    assert np.allclose(s @ s, IDENTITY, atol=1e-12)
    assert abs(np.trace(s)) <= 1e-15
    diff = projector(phi / 2) - projector(phi / 2 + math.pi / 2)
    assert diff.max_abs_diff(sigma_phi(phi)) <= 1e-12


@given(angle, angle)
def test_commutator_of_sigmas(a, b):
    got = commutator(sigma_phi(a), sigma_phi(b))
    assert np.allclose(got, 2 * math.sin(a - b) * TAU2, atol=1e-12)


def test_commutator_examples():
    assert np.allclose(commutator(sigma_phi(0.3), sigma_phi(0.3)), 0)
    assert np.allclose(commutator(SIGMA3, SIGMA1), -2 * TAU2)
    assert np.allclose(commutator(sigma_phi(math.pi / 2), sigma_phi(0.0)), 2 * TAU2, atol=1e-15)


def test_rotation_exp_examples():
    assert np.allclose(rotation_exp(0.0), IDENTITY)
    assert np.allclose(rotation_exp(math.pi / 2), [[0, -1], [1, 0]], atol=1e-15)


@given(angle, angle)
def test_rotation_group(a, b):
    assert np.allclose(rotation_exp(a), rotation(a), atol=1e-12)
    assert np.allclose(rotation(a) @ rotation(b), rotation(a + b), atol=1e-12)
    assert np.allclose(expm(a * TAU2), rotation(a), atol=1e-12)


def test_jordan_examples():
    s1, s3 = SymMat2.from_array(SIGMA1), SymMat2.from_array(SIGMA3)
    assert jordan_product(s1, s3).max_abs_diff(SymMat2(0, 0, 0)) == 0
    assert jordan_product(s1, s1).max_abs_diff(SYM_IDENTITY) == 0
    a = SymMat2(0.3, -1.2, 2.0)
    assert jordan_product(a, SYM_IDENTITY).max_abs_diff(a) <= 1e-15


@given(sym, sym)
def test_jordan_matches_matrix_product(x, y):
    ref = 0.5 * (arr(x) @ arr(y) + arr(y) @ arr(x))
    assert np.allclose(arr(jordan_product(x, y)), ref, atol=1e-11)
    assert jordan_product(x, y) == jordan_product(y, x) or jordan_product(x, y).max_abs_diff(jordan_product(y, x)) < 1e-14


@given(sym, sym)
def test_jordan_identity(x, y):
    xx = jordan_product(x, x)
    lhs = jordan_product(jordan_product(x, y), xx)
    rhs = jordan_product(x, jordan_product(y, xx))
    scale = 1 + max(abs(v) for v in (x.a, x.b, x.d)) ** 3 * max(1, abs(y.a), abs(y.b), abs(y.d))
    assert lhs.max_abs_diff(rhs) <= 1e-12 * scale


def test_hilbert_inner_examples():
    s1, s3 = SymMat2.from_array(SIGMA1), SymMat2.from_array(SIGMA3)
    assert hilbert_inner(SYM_IDENTITY, SYM_IDENTITY) == 2
    assert hilbert_inner(s1, s3) == 0
    phi = 0.37
    basis = [sigma_phi(phi) * (1 / math.sqrt(2)), sigma_phi(phi + math.pi / 2) * (1 / math.sqrt(2)),
             SYM_IDENTITY * (1 / math.sqrt(2))]
    gram = np.array([[hilbert_inner(u, v) for v in basis] for u in basis])
    assert np.allclose(gram, np.eye(3), atol=1e-15)


@given(sym, sym)
def test_hilbert_inner_is_trace(x, y):
    assert hilbert_inner(x, y) == pytest.approx(np.trace(arr(x) @ arr(y)), abs=1e-10)
    assert hilbert_inner(x, x) >= 0


def test_stokes_examples():
    nat = density_from_stokes(StokesVector(0.0, 0.0))
    assert np.allclose(arr(nat.to_matrix()), 0.5 * IDENTITY)
    pure = density_from_stokes(StokesVector(0.0, 1.0))
    assert np.allclose(arr(pure.to_matrix()), [[1, 0], [0, 0]], atol=1e-15)
    s = PolarState(0.3, 1.1)
    back = density_from_stokes(stokes_from_density(s))
    assert back.r == pytest.approx(0.3, abs=1e-15) and back.phi == pytest.approx(1.1, abs=1e-12)
    with pytest.raises(DomainError):
        density_from_stokes(StokesVector(0.8, 0.8))


@given(unit, angle)
def test_stokes_round_trip(r, phi):
    s = PolarState(r, phi)
    v = stokes_from_density(s)
    assert v.degree == pytest.approx(r, abs=1e-12)
    assert v.tensor().max_abs_diff(s.to_matrix()) <= 1e-12
    assert v.tensor().det == pytest.approx((1 - v.degree**2) / 4, abs=1e-12)
    assert density_from_stokes(v).to_matrix().max_abs_diff(s.to_matrix()) <= 1e-12


def test_overlap_probability():
    assert overlap_probability(0.4, 0.4) == 1.0
    assert overlap_probability(0.4 + math.pi / 2, 0.4) == pytest.approx(0.0, abs=1e-15)
    assert overlap_probability(math.pi / 3, 0.0) == pytest.approx(0.25, abs=1e-15)
    # trapezoid is exact for cos^2: mean over the circle is 1/2, so int d(eta)/pi = 1
    eta = 2 * math.pi * np.arange(16) / 16
    total = sum(overlap_probability(float(e), 0.9) for e in eta) * (2 * math.pi / 16) / math.pi
    assert total == pytest.approx(1.0, abs=1e-14)


def test_symmat_rejects_asymmetric():
    with pytest.raises(DomainError):
        SymMat2.from_array([[1, 2], [0, 1]])
    with pytest.raises(DomainError):
        SymMat2.from_array(np.eye(3))
