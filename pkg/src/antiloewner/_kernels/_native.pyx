# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled compute kernels.

Twin of ``antiloewner._kernels.pure``: same algorithms, same arithmetic
expressions in the same order, so results are bit-for-bit equal to the pure
backend (the extension is built with -ffp-contract=off to rule out fused
multiply-adds). When editing one file, apply the same change to the other.
"""

from libc.math cimport fabs, sqrt, log, isfinite, INFINITY

import numpy as np

MAX_SWEEPS = 100
OFF_REL_CUTOFF = 1e-14
PIVOT_ALPHA = 0.6403882032022076

BACKEND = "native"

cdef int _MAX_SWEEPS = 100
cdef double _OFF_REL_CUTOFF = 1e-14
cdef double _PIVOT_ALPHA = 0.6403882032022076


def jacobi_eigh(a, want_vectors=True):
    """Cyclic Jacobi eigendecomposition of a dense symmetric matrix.

    Returns ``(w, v, converged)``: eigenvalues ascending, eigenvector columns
    (``None`` when not requested), and whether the off-diagonal norm reached
    the cutoff within MAX_SWEEPS sweeps.
    """
    A_nd = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] A = A_nd
    cdef Py_ssize_t n = A.shape[0]
    cdef bint vectors = bool(want_vectors)

    V_nd = None
    cdef double[:, ::1] V = None
    if vectors:
        V_nd = np.eye(n, dtype=np.float64)
        V = V_nd

    cdef double fro2 = 0.0
    cdef Py_ssize_t i, j, k, p, q
    for i in range(n):
        for j in range(n):
            fro2 += A[i, j] * A[i, j]
    cdef double limit2 = (_OFF_REL_CUTOFF * _OFF_REL_CUTOFF) * fro2

    cdef int sweeps = 0
    cdef bint converged = False
    cdef double off2, apq, app, aqq, tau, t, c, s, akp, akq, v1, v2, vkp, vkq
    while True:
        off2 = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off2 += A[i, j] * A[i, j]
        if 2.0 * off2 <= limit2:
            converged = True
            break
        if sweeps == _MAX_SWEEPS:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = A[k, p]
                    akq = A[k, q]
                    v1 = c * akp - s * akq
                    v2 = s * akp + c * akq
                    A[k, p] = v1
                    A[p, k] = v1
                    A[k, q] = v2
                    A[q, k] = v2
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                if vectors:
                    for k in range(n):
                        vkp = V[k, p]
                        vkq = V[k, q]
                        V[k, p] = c * vkp - s * vkq
                        V[k, q] = s * vkp + c * vkq
        sweeps += 1

    w_nd = np.empty(n, dtype=np.float64)
    order_nd = np.empty(n, dtype=np.intp)
    cdef double[::1] w = w_nd
    cdef Py_ssize_t[::1] order = order_nd
    cdef Py_ssize_t key
    cdef double kv
    for i in range(n):
        order[i] = i
    for i in range(1, n):
        key = order[i]
        kv = A[key, key]
        j = i - 1
        while j >= 0 and A[order[j], order[j]] > kv:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = key
    for i in range(n):
        w[i] = A[order[i], order[i]]

    if not vectors:
        return w_nd, None, converged
    v_out_nd = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] v_out = v_out_nd
    cdef Py_ssize_t col
    for j in range(n):
        col = order[j]
        for i in range(n):
            v_out[i, j] = V[i, col]
    return w_nd, v_out_nd, converged


cdef void _sym_swap(double[:, ::1] B, Py_ssize_t n, Py_ssize_t k, Py_ssize_t p):
    cdef Py_ssize_t i
    cdef double tmp
    for i in range(n):
        tmp = B[k, i]
        B[k, i] = B[p, i]
        B[p, i] = tmp
    for i in range(n):
        tmp = B[i, k]
        B[i, k] = B[i, p]
        B[i, p] = tmp


def ldlt_sign_logdet(a):
    """Determinant sign via LDL^T with symmetric (diagonal) pivoting.

    Returns ``(status, sign, log_abs_det, min_pivot_rel)``; see the pure
    backend for the contract.
    """
    B_nd = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] B = B_nd
    cdef Py_ssize_t n = B.shape[0]

    cdef double amax = 0.0
    cdef Py_ssize_t i, j, k, p
    cdef double v
    for i in range(n):
        for j in range(n):
            v = fabs(B[i, j])
            if v > amax:
                amax = v
    if not isfinite(amax):
        return 1, 0, 0.0, 0.0
    cdef double scale = amax if amax > 1.0 else 1.0

    cdef int sign = 1
    cdef double logabs = 0.0
    cdef double minrel = INFINITY
    cdef double dmax, offmax, di, d, rel, f
    for k in range(n):
        p = k
        dmax = fabs(B[k, k])
        for i in range(k + 1, n):
            di = fabs(B[i, i])
            if di > dmax:
                dmax = di
                p = i
        offmax = 0.0
        for i in range(k, n):
            for j in range(i + 1, n):
                v = fabs(B[i, j])
                if v > offmax:
                    offmax = v
        if dmax == 0.0 and offmax == 0.0:
            return 0, 0, -INFINITY, 0.0
        if (not isfinite(dmax)) or (not isfinite(offmax)):
            return 1, 0, 0.0, 0.0
        if dmax < _PIVOT_ALPHA * offmax:
            return 1, 0, 0.0, 0.0
        if p != k:
            _sym_swap(B, n, k, p)
        d = B[k, k]
        rel = fabs(d) / scale
        if rel < minrel:
            minrel = rel
        if d < 0.0:
            sign = -sign
        logabs += log(fabs(d))
        for i in range(k + 1, n):
            f = B[i, k] / d
            for j in range(i, n):
                B[i, j] -= f * B[k, j]
        for i in range(k + 1, n):
            for j in range(k + 1, i):
                B[i, j] = B[j, i]
    return 0, sign, logabs, minrel


def fill_loewner(x, fx, dfx):
    """Divided-difference matrix with derivative diagonal."""
    xs_nd = np.ascontiguousarray(x, dtype=np.float64)
    fs_nd = np.ascontiguousarray(fx, dtype=np.float64)
    ds_nd = np.ascontiguousarray(dfx, dtype=np.float64)
    cdef double[::1] xs = xs_nd
    cdef double[::1] fs = fs_nd
    cdef double[::1] ds = ds_nd
    cdef Py_ssize_t n = xs.shape[0]
    m_nd = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] m = m_nd
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(n):
        m[i, i] = ds[i]
        for j in range(i + 1, n):
            v = (fs[i] - fs[j]) / (xs[i] - xs[j])
            m[i, j] = v
            m[j, i] = v
    return m_nd


def fill_anti_loewner(x, gx):
    """Divided-sum matrix (g(x_i)+g(x_j))/(x_i+x_j)."""
    xs_nd = np.ascontiguousarray(x, dtype=np.float64)
    gs_nd = np.ascontiguousarray(gx, dtype=np.float64)
    cdef double[::1] xs = xs_nd
    cdef double[::1] gs = gs_nd
    cdef Py_ssize_t n = xs.shape[0]
    m_nd = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] m = m_nd
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(n):
        for j in range(i, n):
            v = (gs[i] + gs[j]) / (xs[i] + xs[j])
            m[i, j] = v
            m[j, i] = v
    return m_nd


def fill_signed(x, gx, s):
    """Sign-perturbed divided-sum matrix (s_i g_i+s_j g_j)/(s_i x_i+s_j x_j)."""
    xs_nd = np.ascontiguousarray(x, dtype=np.float64)
    gs_nd = np.ascontiguousarray(gx, dtype=np.float64)
    ss_nd = np.ascontiguousarray(s, dtype=np.float64)
    cdef double[::1] xs = xs_nd
    cdef double[::1] gs = gs_nd
    cdef double[::1] ss = ss_nd
    cdef Py_ssize_t n = xs.shape[0]
    m_nd = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] m = m_nd
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(n):
        for j in range(i, n):
            v = (ss[i] * gs[i] + ss[j] * gs[j]) / (ss[i] * xs[i] + ss[j] * xs[j])
            m[i, j] = v
            m[j, i] = v
    return m_nd


def fill_gram(x, t):
    """Rank-two Gram matrix t + x_i x_j."""
    xs_nd = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] xs = xs_nd
    cdef double tt = float(t)
    cdef Py_ssize_t n = xs.shape[0]
    m_nd = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] m = m_nd
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(n):
        for j in range(i, n):
            v = tt + xs[i] * xs[j]
            m[i, j] = v
            m[j, i] = v
    return m_nd
