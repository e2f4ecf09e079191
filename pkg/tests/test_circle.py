import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from planepovm import circle
from planepovm.circle import QuantizerConfig
from planepovm.errors import DomainError, SingularQuantizerError
from planepovm.fourier import FourierFunction
from planepovm.plane import SYM_IDENTITY, SymMat2, density_from_polar, sigma_phi

unit = st.floats(0.0, 1.0)
pos = st.floats(0.05, 1.0)
angle = st.floats(0.0, 2 * math.pi)
coef = st.floats(-2.0, 2.0)
funcs = st.builds(
    lambda a0, h: FourierFunction(a0, tuple(h)),
    coef,
    st.lists(st.tuples(st.integers(1, 5), coef, coef), max_size=5),
)


def quad_quantize(f, q):
    """Entrywise integral of f(phi) rho_{r, phi + phi0} dphi/pi by adaptive quadrature."""
    out = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            g = lambda x: f(x) * q.state(x).to_array()[i, j]  # noqa: E731
            out[i, j] = quad(g, 0, 2 * math.pi, limit=200)[0] / math.pi
    return out


def test_mean_and_doubled_fourier_examples():
    assert circle.mean_and_doubled_fourier(FourierFunction(1.0)) == (1.0, 0.0, 0.0)
    assert circle.mean_and_doubled_fourier(FourierFunction.cos(2)) == (0.0, 1.0, 0.0)
    assert circle.mean_and_doubled_fourier(FourierFunction.sin(1)) == (0.0, 0.0, 0.0)
    tr = circle.mean_and_doubled_fourier_trapezoid(FourierFunction.cos(2), 64)
    assert tr == pytest.approx((0.0, 1.0, 0.0), abs=1e-15)


def test_quantize_examples():
    q = QuantizerConfig(0.6, 0.4)
    a0 = circle.quantize(FourierFunction(1 / math.sqrt(2)), q)
    assert a0 == SymMat2(1 / math.sqrt(2), 0.0, 1 / math.sqrt(2))
    a1 = circle.quantize(FourierFunction.cos(2), q)
    assert a1.max_abs_diff(sigma_phi(0.8) * 0.3) <= 1e-15
    assert circle.quantize(FourierFunction.cos(1), q).max_abs_diff(SymMat2(0, 0, 0)) == 0
    with pytest.raises(DomainError):
        circle.quantize(FourierFunction(1.0), q, method="simpson")
    with pytest.raises(DomainError):
        QuantizerConfig(1.5)


@given(funcs, unit, angle)
def test_quantize_matches_quadrature(f, r, phi0):
    q = QuantizerConfig(r, phi0)
    exact = circle.quantize(f, q).to_array()
    assert np.allclose(exact, quad_quantize(f, q), atol=1e-8)
    trap = circle.quantize(f, q, "trapezoid", 64).to_array()
    assert np.allclose(exact, trap, atol=1e-12)


@given(funcs, funcs, coef, unit, angle)
def test_quantize_linear(f, g, c, r, phi0):
    q = QuantizerConfig(r, phi0)
    lhs = circle.quantize(f * c + g, q)
    rhs = circle.quantize(f, q) * c + circle.quantize(g, q)
    assert lhs.max_abs_diff(rhs) <= 1e-12


def test_resolution_of_identity_examples():
    assert circle.resolution_of_identity(QuantizerConfig(0.0)) == 0.0
    assert circle.resolution_of_identity(QuantizerConfig(0.7, 0.3)) == 0.0
    assert circle.resolution_of_identity(QuantizerConfig(0.7, 0.3), "trapezoid", 64) <= 1e-12


def test_lower_symbol_examples():
    q = QuantizerConfig(0.8, 0.0)
    one = circle.lower_symbol(SYM_IDENTITY, q)
    assert one == FourierFunction(1.0)
    s3 = circle.lower_symbol(SymMat2(1.0, 0.0, -1.0), q)
    assert s3.coef(2) == pytest.approx((0.8, 0.0), abs=1e-15) and s3.a0 == 0


@given(st.builds(SymMat2, coef, coef, coef), unit, angle, st.floats(-6, 6))
def test_lower_symbol_is_trace(a, r, phi0, x):
    q = QuantizerConfig(r, phi0)
    ref = float(np.trace(a.to_array() @ q.state(x).to_array()))
    assert circle.lower_symbol(a, q)(x) == pytest.approx(ref, abs=1e-12)


def test_symbol_transform_examples():
    assert np.allclose(circle.symbol_transform_matrix(1, 1, 0.4, 0.4), np.diag([0.5, 0.5, 1.0]))
    m = circle.symbol_transform_matrix(1.0, 1.0, 0.0, math.pi / 4)
    assert np.allclose(m, [[0, -0.5, 0], [0.5, 0, 0], [0, 0, 1]], atol=1e-15)
    with pytest.raises(DomainError):
        circle.symbol_transform_matrix(1.2, 0.5, 0, 0)


@given(unit, unit, angle, angle, coef, coef, coef)
def test_symbol_transform_matches_composition(r, s, theta0, phi0, f1, f2, f0):
    f = FourierFunction.from_v3(f1, f2, f0)
    got = circle.lower_symbol(circle.quantize(f, QuantizerConfig(r, phi0)), QuantizerConfig(s, theta0))
    want = circle.symbol_transform_matrix(r, s, theta0, phi0) @ np.array([f1, f2, f0])
    assert np.allclose(got.v3_coords(), want, atol=1e-12)


def test_upper_symbol_examples():
    q = QuantizerConfig(0.8, 0.3)
    assert circle.upper_symbol(SYM_IDENTITY, q).mean() == pytest.approx(1.0, abs=1e-15)
    assert circle.upper_symbol(SYM_IDENTITY, q).degree == 0 or max(
        abs(c) for _, c, s in circle.upper_symbol(SYM_IDENTITY, q).harmonics) < 1e-15
    s, theta = 0.35, 1.2
    f = circle.upper_symbol(density_from_polar(s, theta), q)
    for x in np.linspace(0, 2 * math.pi, 9):
        assert f(x) == pytest.approx(0.5 + (s / 0.8) * math.cos(2 * (x + 0.3 - theta)), abs=1e-14)
    with pytest.raises(SingularQuantizerError):
        circle.upper_symbol(SYM_IDENTITY, QuantizerConfig(0.0))


@given(st.builds(SymMat2, coef, coef, coef), pos, angle)
def test_upper_round_trip(a, r, phi0):
    q = QuantizerConfig(r, phi0)
    assert circle.quantize(circle.upper_symbol(a, q), q).max_abs_diff(a) <= 1e-12 / r


def test_mixed_superposition_examples():
    res, convex = circle.mixed_superposition_check(0.2, 0.4, 0.5)
    assert res <= 1e-12 and convex
    res, convex = circle.mixed_superposition_check(0.4, 0.4, 0.5)
    assert res <= 1e-12 and not convex
    weight = FourierFunction(0.5, ((2, 0.4 / 0.5, 0.0),))
    assert min(weight(np.linspace(0, math.pi, 101))) < 0
    res, _ = circle.mixed_superposition_check(0.0, 0.0, 0.5)
    assert res <= 1e-15
    with pytest.raises(SingularQuantizerError):
        circle.mixed_superposition_check(0.2, 0.0, 0.0)


@given(funcs, unit, angle, angle)
def test_covariance(f, r, phi0, theta):
    assert circle.covariance_check(f, QuantizerConfig(r, phi0), theta) <= 1e-12


def test_covariance_examples():
    q = QuantizerConfig(0.5, 0.2)
    assert circle.covariance_check(FourierFunction.cos(2), q, 0.0) == 0.0
    assert circle.covariance_check(FourierFunction.cos(2), q, math.pi / 4) <= 1e-15


@given(coef, coef, coef, pos, angle)
def test_weighted_norm(f1, f2, f0, r, phi0):
    lhs, rhs = circle.weighted_norm_identity(f1, f2, f0, QuantizerConfig(r, phi0))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, lhs)


def test_weighted_norm_singular():
    with pytest.raises(SingularQuantizerError):
        circle.weighted_norm_identity(1, 0, 0, QuantizerConfig(0.0))


@given(unit, angle, unit, angle, st.floats(0, 2 * math.pi))
def test_pairing_density_normalized(r, phi0, s, theta0, x):
    p = circle.pairing_density(x, QuantizerConfig(s, theta0), QuantizerConfig(r, phi0))
    assert p.integral() == pytest.approx(1.0, abs=1e-12)
    assert min(p(np.linspace(0, 2 * math.pi, 50))) >= -1e-12
