"""Hot numeric loops, each with a numba and a vectorized-numpy implementation.

The active backend is chosen once at import (see ``_accel``); both are
always importable from ``IMPLEMENTATIONS`` so they can be cross-checked and
benchmarked against each other.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

# membership slack for candidate points.  A computed circle crossing can miss its
# own circles by a few 1e-15; too tight a value breaks monotonicity of the
# bisection.  The slack returned is biased by at most this much.
POINT_EPS = 1e-12


# ---------------------------------------------------------------------------
# disk-intersection slack
# ---------------------------------------------------------------------------
@njit
def _inside_all(x, y, cx, cy, rho, eps):
    for k in range(cx.shape[0]):
        if math.hypot(x - cx[k], y - cy[k]) > rho[k] + eps:
            return False
    return True


@njit
def _intersect_point(cx, cy, rad, t, eps):
    m = cx.shape[0]
    rho = np.empty(m)
    for i in range(m):
        r = rad[i] - t
        if r < -eps:
            return False, 0.0, 0.0
        rho[i] = max(r, 0.0)
    for i in range(m):
        x = cx[i] - rho[i]
        if _inside_all(x, cy[i], cx, cy, rho, eps):
            return True, x, cy[i]
    for i in range(m):
        for j in range(i + 1, m):
            dx = cx[j] - cx[i]
            dy = cy[j] - cy[i]
            d = math.hypot(dx, dy)
            if d == 0.0 or d > rho[i] + rho[j] or d < abs(rho[i] - rho[j]):
                continue
            a = (rho[i] * rho[i] - rho[j] * rho[j] + d * d) / (2.0 * d)
            h = math.sqrt(max(rho[i] * rho[i] - a * a, 0.0))
            mx = cx[i] + a * dx / d
            my = cy[i] + a * dy / d
            for sgn in (1.0, -1.0):
                x = mx - sgn * h * dy / d
                y = my + sgn * h * dx / d
                if _inside_all(x, y, cx, cy, rho, eps):
                    return True, x, y
    return False, 0.0, 0.0


@njit
def _max_slack_numba(cx, cy, rad, iters):
    n_prob, m = rad.shape
    slack = np.empty(n_prob)
    px = np.empty(n_prob)
    py = np.empty(n_prob)
    for p in range(n_prob):
        span = 0.0
        for i in range(m):
            for j in range(i + 1, m):
                span = max(span, math.hypot(cx[p, i] - cx[p, j], cy[p, i] - cy[p, j]))
        hi = rad[p, 0]
        for i in range(m):
            hi = min(hi, rad[p, i])
        lo = hi - span - 1.0
        ok, x, y = _intersect_point(cx[p], cy[p], rad[p], hi, POINT_EPS)
        if ok:
            slack[p], px[p], py[p] = hi, x, y
            continue
        ok, x, y = _intersect_point(cx[p], cy[p], rad[p], lo, POINT_EPS)
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            ok2, x2, y2 = _intersect_point(cx[p], cy[p], rad[p], mid, POINT_EPS)
            if ok2:
                lo, x, y = mid, x2, y2
            else:
                hi = mid
        slack[p], px[p], py[p] = lo, x, y
    return slack, px, py


def _intersect_numpy(cx, cy, rad, t, eps):
    """Vectorized candidate test; arrays ``(P, m)``, ``t`` of shape ``(P,)``."""
    n_prob, m = rad.shape
    rho_raw = rad - t[:, None]
    alive = np.all(rho_raw >= -eps, axis=1)
    rho = np.maximum(rho_raw, 0.0)
    cand_x = [cx - rho]
    cand_y = [cy]
    cand_ok = [np.ones((n_prob, m), dtype=bool)]
    ii, jj = np.triu_indices(m, 1)
    dx = cx[:, jj] - cx[:, ii]
    dy = cy[:, jj] - cy[:, ii]
    d = np.hypot(dx, dy)
    ri, rj = rho[:, ii], rho[:, jj]
    valid = (d > 0.0) & (d <= ri + rj) & (d >= np.abs(ri - rj))
    dsafe = np.where(d > 0.0, d, 1.0)
    # nearly coincident centers can overflow; those pairs are masked by ``valid``
    with np.errstate(over="ignore", invalid="ignore"):
        a = (ri * ri - rj * rj + d * d) / (2.0 * dsafe)
        h = np.sqrt(np.maximum(ri * ri - a * a, 0.0))
        mx = cx[:, ii] + a * dx / dsafe
        my = cy[:, ii] + a * dy / dsafe
        for sgn in (1.0, -1.0):
            cand_x.append(mx - sgn * h * dy / dsafe)
            cand_y.append(my + sgn * h * dx / dsafe)
            cand_ok.append(valid)
    X = np.concatenate(cand_x, axis=1)
    Y = np.concatenate(cand_y, axis=1)
    V = np.concatenate(cand_ok, axis=1)
    with np.errstate(invalid="ignore"):
        dist = np.hypot(X[:, :, None] - cx[:, None, :], Y[:, :, None] - cy[:, None, :])
        inside = np.all(dist <= rho[:, None, :] + eps, axis=2) & V
    ok = alive & np.any(inside, axis=1)
    first = np.argmax(inside, axis=1)
    rows = np.arange(n_prob)
    return ok, X[rows, first], Y[rows, first]


def _max_slack_numpy(cx, cy, rad, iters):
    ii, jj = np.triu_indices(rad.shape[1], 1)
    span = np.max(np.hypot(cx[:, ii] - cx[:, jj], cy[:, ii] - cy[:, jj]), axis=1)
    hi = rad.min(axis=1)
    lo = hi - span - 1.0
    ok_hi, xh, yh = _intersect_numpy(cx, cy, rad, hi, POINT_EPS)
    _, x, y = _intersect_numpy(cx, cy, rad, lo, POINT_EPS)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        ok, xm, ym = _intersect_numpy(cx, cy, rad, mid, POINT_EPS)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
        x = np.where(ok, xm, x)
        y = np.where(ok, ym, y)
    hi0 = rad.min(axis=1)
    return (np.where(ok_hi, hi0, lo), np.where(ok_hi, xh, x), np.where(ok_hi, yh, y))


# ---------------------------------------------------------------------------
# SO(n) grids
# ---------------------------------------------------------------------------
@njit
def _euler_product_numba(angles, planes, n):
    n_nodes, n_fac = angles.shape
    out = np.zeros((n_nodes, n, n))
    for a in range(n_nodes):
        for i in range(n):
            out[a, i, i] = 1.0
        for f in range(n_fac):
            p = planes[f]
            c = math.cos(angles[a, f])
            s = math.sin(angles[a, f])
            for i in range(n):
                u = out[a, i, p - 1]
                v = out[a, i, p]
                out[a, i, p - 1] = c * u + s * v
                out[a, i, p] = -s * u + c * v
    return out


def _euler_product_numpy(angles, planes, n):
    n_nodes, n_fac = angles.shape
    out = np.broadcast_to(np.eye(n), (n_nodes, n, n)).copy()
    for f in range(n_fac):
        p = int(planes[f])
        c = np.cos(angles[:, f])[:, None]
        s = np.sin(angles[:, f])[:, None]
        u = out[:, :, p - 1].copy()
        v = out[:, :, p]
        out[:, :, p - 1] = c * u + s * v
        out[:, :, p] = -s * u + c * v
    return out


@njit
def _congruence_sum_numba(rots, weights, mid):
    n_nodes, n, _ = rots.shape
    out = np.zeros((n, n))
    tmp = np.empty((n, n))
    for a in range(n_nodes):
        w = weights[a]
        if w == 0.0:
            continue
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for k in range(n):
                    acc += rots[a, i, k] * mid[k, j]
                tmp[i, j] = acc
        for i in range(n):
            for l in range(n):
                acc = 0.0
                for j in range(n):
                    acc += tmp[i, j] * rots[a, l, j]
                out[i, l] += w * acc
    return out


def _congruence_sum_numpy(rots, weights, mid):
    tmp = rots @ mid
    return np.einsum("a,aij,alj->il", weights, tmp, rots, optimize=True)


@njit
def _second_moments_numba(rots, weights):
    n_nodes, n, _ = rots.shape
    out = np.zeros((n, n, n, n))
    for a in range(n_nodes):
        w = weights[a]
        for i in range(n):
            for j in range(n):
                wij = w * rots[a, i, j]
                for k in range(n):
                    for l in range(n):
                        out[i, j, k, l] += wij * rots[a, k, l]
    return out


def _second_moments_numpy(rots, weights):
    return np.einsum("a,aij,akl->ijkl", weights, rots, rots, optimize=True)


IMPLEMENTATIONS = {
    "numpy": {
        "max_slack": _max_slack_numpy,
        "euler_product": _euler_product_numpy,
        "congruence_sum": _congruence_sum_numpy,
        "second_moments": _second_moments_numpy,
    }
}
if HAVE_NUMBA:
    IMPLEMENTATIONS["numba"] = {
        "max_slack": _max_slack_numba,
        "euler_product": _euler_product_numba,
        "congruence_sum": _congruence_sum_numba,
        "second_moments": _second_moments_numba,
    }

_ACTIVE = IMPLEMENTATIONS[BACKEND]


def max_slack(cx, cy, rad, iters: int = 60):
    """Largest ``t`` such that the disks ``(c_i, rad_i - t)`` share a point.

    Inputs have shape ``(P, m)`` (``P`` independent problems of ``m`` disks).
    Returns ``(t, x, y)`` where ``(x, y)`` lies in the shrunk intersection.
    """
    cx = np.ascontiguousarray(cx, dtype=float)
    cy = np.ascontiguousarray(cy, dtype=float)
    rad = np.ascontiguousarray(rad, dtype=float)
    return _ACTIVE["max_slack"](cx, cy, rad, int(iters))


def disks_intersect(cx, cy, rad, eps: float = POINT_EPS):
    """Exact nonempty-intersection test for one family of closed disks.

    Returns ``(ok, x, y)`` with a common point when ``ok``.
    """
    cx = np.asarray(cx, dtype=float)
    cy = np.asarray(cy, dtype=float)
    rad = np.asarray(rad, dtype=float)
    ok, x, y = _intersect_numpy(cx[None], cy[None], rad[None], np.zeros(1), eps)
    return bool(ok[0]), float(x[0]), float(y[0])


def euler_product(angles, planes, n: int):
    """Batch of products ``prod_f R_{planes[f]}(angles[:, f])`` (left to right)."""
    angles = np.ascontiguousarray(np.atleast_2d(angles), dtype=float)
    planes = np.ascontiguousarray(planes, dtype=np.int64)
    return _ACTIVE["euler_product"](angles, planes, int(n))


def congruence_sum(rots, weights, mid):
    """``sum_a w_a R_a M R_a^T``."""
    return _ACTIVE["congruence_sum"](
        np.ascontiguousarray(rots, dtype=float),
        np.ascontiguousarray(weights, dtype=float),
        np.ascontiguousarray(mid, dtype=float),
    )


def second_moments(rots, weights):
    """``sum_a w_a R_a[i, j] R_a[k, l]`` as an ``(n, n, n, n)`` array."""
    return _ACTIVE["second_moments"](
        np.ascontiguousarray(rots, dtype=float), np.ascontiguousarray(weights, dtype=float)
    )
