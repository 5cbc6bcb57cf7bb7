"""Hot numeric kernels: dense LU with partial pivoting and the opinion-update loop.

Two lanes share one contract: a numba ``@njit`` lane (default when numba is
importable) and a vectorized pure-numpy lane. Set ``FJ_INFLUENCE_NO_NUMBA=1``
to force the numpy lane; ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "FJ_INFLUENCE_NO_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


# -- loop-style implementations (numba-compilable) ----------------------------

def _lu_factor_loops(a):
    # In-place Doolittle factorization with partial pivoting.
    # Returns (lu, piv, ok); ok is False when a pivot is numerically zero.
    n = a.shape[0]
    piv = np.arange(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            m = abs(a[i, j])
            if m > scale:
                scale = m
    tiny = scale * n * 2.3e-16 + 1e-300
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            m = abs(a[i, k])
            if m > best:
                best = m
                p = i
        if best <= tiny:
            return a, piv, False
        if p != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = tmp
            t = piv[k]
            piv[k] = piv[p]
            piv[p] = t
        inv = 1.0 / a[k, k]
        for i in range(k + 1, n):
            a[i, k] *= inv
            lik = a[i, k]
            for j in range(k + 1, n):
                a[i, j] -= lik * a[k, j]
    return a, piv, True


def _lu_solve_loops(lu, piv, b):
    # Solves A X = B for matrix B given the factorization of A.
    n = lu.shape[0]
    m = b.shape[1]
    x = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            x[i, j] = b[piv[i], j]
    for k in range(n):
        for i in range(k + 1, n):
            lik = lu[i, k]
            for j in range(m):
                x[i, j] -= lik * x[k, j]
    for k in range(n - 1, -1, -1):
        inv = 1.0 / lu[k, k]
        for j in range(m):
            x[k, j] *= inv
        for i in range(k):
            uik = lu[i, k]
            for j in range(m):
                x[i, j] -= uik * x[k, j]
    return x


def _fj_iterate_loops(w, retention, anchor, x0, tol, max_steps):
    # Iterates x <- retention * (W x) + anchor until the sup-norm step
    # falls below tol. retention[i] = 1 - beta_i, anchor = beta * x(0).
    n = w.shape[0]
    x = x0.copy()
    xn = np.empty(n)
    for step in range(1, max_steps + 1):
        worst = 0.0
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += w[i, j] * x[j]
            xn[i] = retention[i] * acc + anchor[i]
            d = abs(xn[i] - x[i])
            if d > worst:
                worst = d
        for i in range(n):
            x[i] = xn[i]
        if worst < tol:
            return x, step, True
    return x, max_steps, False


# -- vectorized numpy lane ------------------------------------------------------

def _lu_factor_numpy(a):
    n = a.shape[0]
    piv = np.arange(n)
    tiny = np.abs(a).max(initial=0.0) * n * np.finfo(np.float64).eps + 1e-300
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= tiny:
            return a, piv, False
        if p != k:
            a[[k, p]] = a[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, piv, True


def _lu_solve_numpy(lu, piv, b):
    n = lu.shape[0]
    x = b[piv].astype(np.float64, copy=True)
    for k in range(n):
        x[k + 1:] -= np.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        x[:k] -= np.outer(lu[:k, k], x[k])
    return x


def _fj_iterate_numpy(w, retention, anchor, x0, tol, max_steps):
    x = x0.copy()
    for step in range(1, max_steps + 1):
        xn = retention * (w @ x) + anchor
        worst = float(np.max(np.abs(xn - x)))
        x = xn
        if worst < tol:
            return x, step, True
    return x, max_steps, False


# -- lane selection ---------------------------------------------------------------

USING_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        _lu_factor_nb = njit(cache=True)(_lu_factor_loops)
        _lu_solve_nb = njit(cache=True)(_lu_solve_loops)
        _fj_iterate_nb = njit(cache=True)(_fj_iterate_loops)
        USING_NUMBA = True

if USING_NUMBA:
    lu_factor = _lu_factor_nb
    lu_solve = _lu_solve_nb
    fj_iterate = _fj_iterate_nb
else:
    lu_factor = _lu_factor_numpy
    lu_solve = _lu_solve_numpy
    fj_iterate = _fj_iterate_numpy


def available_lanes() -> dict:
    """Kernel triples per lane, for benchmarks and cross-lane tests."""
    lanes = {"numpy": (_lu_factor_numpy, _lu_solve_numpy, _fj_iterate_numpy)}
    if USING_NUMBA:
        lanes["numba"] = (_lu_factor_nb, _lu_solve_nb, _fj_iterate_nb)
    return lanes


def warmup() -> None:
    """Trigger JIT compilation on a tiny system so timed paths are steady."""
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    lu, piv, ok = lu_factor(a.copy())
    if ok:
        lu_solve(lu, piv, np.eye(2))
    fj_iterate(a / a.sum(axis=1)[:, None], np.array([0.5, 0.5]),
               np.array([0.25, 0.25]), np.zeros(2), 1e-12, 1000)
