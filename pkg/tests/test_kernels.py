import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planepovm import kernels
from planepovm._accel import HAVE_NUMBA

backends = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
NP = kernels.IMPLEMENTATIONS["numpy"]


def random_disks(rng, p, m):
    return rng.normal(size=(p, m)), rng.normal(size=(p, m)), rng.uniform(0.1, 2.0, size=(p, m))


def brute_force_slack(cx, cy, rad):
    """Grid search for max_x min_i (rad_i - |x - c_i|); accurate to the grid step."""
    g = np.linspace(-5, 5, 801)
    x, y = np.meshgrid(g, g)
    d = np.min(rad[:, None, None] - np.hypot(x - cx[:, None, None], y - cy[:, None, None]), axis=0)
    return float(d.max())


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_max_slack_against_grid_search(seed, m):
    rng = np.random.default_rng(seed)
    cx, cy, rad = random_disks(rng, 1, m)
    t, x, y = kernels.max_slack(cx, cy, rad)
    ref = brute_force_slack(cx[0], cy[0], rad[0])
    assert t[0] >= ref - 1e-9
    assert t[0] <= ref + 0.02
    assert np.all(np.hypot(x[0] - cx[0], y[0] - cy[0]) <= rad[0] - t[0] + 1e-9)


def test_disks_intersect():
    assert kernels.disks_intersect([0, 1.5], [0, 0], [1, 1])[0]
    assert not kernels.disks_intersect([0, 2.5], [0, 0], [1, 1])[0]
    ok, x, y = kernels.disks_intersect([0, 2.0], [0, 0], [1, 1])
    assert ok and abs(x - 1) < 1e-7 and abs(y) < 1e-7


@backends
def test_backends_agree():
    NB = kernels.IMPLEMENTATIONS["numba"]
    rng = np.random.default_rng(0)
    cx, cy, rad = random_disks(rng, 50, 4)
    a, b = NP["max_slack"](cx, cy, rad, 60), NB["max_slack"](cx, cy, rad, 60)
    for u, v in zip(a, b):
        assert np.allclose(u, v, atol=1e-12)
    angles = rng.uniform(0, 6, size=(200, 6))
    planes = np.array([1, 2, 3, 1, 2, 1], dtype=np.int64)
    ra, rb = NP["euler_product"](angles, planes, 4), NB["euler_product"](angles, planes, 4)
    assert np.allclose(ra, rb, atol=1e-13)
    w = rng.uniform(size=200)
    mid = np.diag([0.3, 0.1, -0.1, -0.3])
    assert np.allclose(NP["congruence_sum"](ra, w, mid), NB["congruence_sum"](ra, w, mid), atol=1e-12)
    assert np.allclose(NP["second_moments"](ra, w), NB["second_moments"](ra, w), atol=1e-12)


def test_euler_product_orthogonal():
    rng = np.random.default_rng(1)
    r = kernels.euler_product(rng.uniform(0, 6, size=(20, 3)), np.array([1, 2, 1]), 3)
    assert np.allclose(r @ np.transpose(r, (0, 2, 1)), np.eye(3), atol=1e-13)
