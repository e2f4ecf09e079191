import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from planepovm.errors import DomainError
from planepovm.fourier import FourierFunction, trapezoid_nodes

coef = st.floats(-3.0, 3.0)
harm = st.lists(st.tuples(st.integers(1, 6), coef, coef), max_size=5)
funcs = st.builds(lambda a0, h: FourierFunction(a0, tuple(h)), coef, harm)


def test_construction_merges_and_sorts():
    f = FourierFunction(1.0, ((3, 1.0, 0.0), (1, 0.5, 0.0), (3, -1.0, 2.0), (2, 0.0, 0.0)))
    assert f.harmonics == ((1, 0.5, 0.0), (3, 0.0, 2.0))
    assert f.degree == 3
    with pytest.raises(DomainError):
        FourierFunction(0.0, ((0, 1.0, 0.0),))
    with pytest.raises(DomainError):
        FourierFunction(0.0, ((1.5, 1.0, 0.0),))


@given(funcs, funcs, st.floats(-6, 6))
def test_product_pointwise(f, g, x):
    assert (f * g)(x) == pytest.approx(f(x) * g(x), abs=1e-9)
    assert (f + g)(x) == pytest.approx(f(x) + g(x), abs=1e-12)
    assert (f - g)(x) == pytest.approx(f(x) - g(x), abs=1e-12)


@given(funcs, st.floats(-6, 6), st.floats(-6, 6))
def test_shift(f, theta, x):
    assert f.shift(theta)(x) == pytest.approx(f(x - theta), abs=1e-10)


@given(funcs, funcs)
def test_inner_against_quadrature(f, g):
    ref = quad(lambda x: f(x) * g(x), 0, 2 * math.pi, limit=200)[0] / math.pi
    assert f.inner(g) == pytest.approx(ref, abs=1e-8)


@given(funcs, st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_arc_integral(f, a, b):
    ref = quad(f, a, b, limit=200)[0] / math.pi
    assert f.arc_integral(a, b) == pytest.approx(ref, abs=1e-9)


def test_spectrum_round_trip():
    f = FourierFunction(0.3, ((1, 1.0, -2.0), (4, 0.5, 0.25)))
    assert FourierFunction.from_spectrum(f.spectrum()) == f
    assert FourierFunction.from_spectrum(f.spectrum(6)) == f


def test_project():
    f = FourierFunction(0.1, ((2, 1.0, 0.0), (5, 0.0, -0.3)))
    proj, loss = FourierFunction.project(f, max_k=6)
    assert loss < 1e-14
    assert proj.a0 == pytest.approx(0.1, abs=1e-14)
    for k in range(1, 7):
        assert proj.coef(k) == pytest.approx(f.coef(k), abs=1e-14)
    _, loss = FourierFunction.project(lambda x: np.abs(np.sin(x)), max_k=4)
    assert loss > 1e-3


def test_json_round_trip():
    f = FourierFunction(0.3, ((2, 1.0, -0.5),))
    assert FourierFunction.from_json(json.dumps(f.to_json())) == f
    with pytest.raises(DomainError):
        FourierFunction.from_json({"a0": 1, "b": 2})


def test_trapezoid_exact_for_low_degree():
    f = FourierFunction(0.7, tuple((k, 1.0, 1.0) for k in range(1, 8)))
    x = trapezoid_nodes(16)
    assert float(np.mean(f(x))) == pytest.approx(0.7, abs=1e-14)
