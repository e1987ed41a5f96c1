"""Pure-Python compute kernels.

Fallback for the compiled extension ``antiloewner._kernels._native``. The two
modules implement the same algorithms with identical arithmetic expressions
evaluated in identical order, so their results are bit-for-bit equal. When
editing one file, apply the same change to the other.
"""

from __future__ import annotations

import math

import numpy as np

MAX_SWEEPS = 100
# Off-diagonal Frobenius norm cutoff, relative to the Frobenius norm of the
# input matrix.
OFF_REL_CUTOFF = 1e-14
# (1 + sqrt(17)) / 8: acceptance bound for a 1x1 diagonal pivot, below which
# the factorization bails out in favour of an eigenvalue product.
PIVOT_ALPHA = 0.6403882032022076

BACKEND = "pure"


def jacobi_eigh(a, want_vectors=True):
    """Cyclic Jacobi eigendecomposition of a dense symmetric matrix.

    Returns ``(w, v, converged)``: eigenvalues ascending, eigenvector columns
    (``None`` when not requested), and whether the off-diagonal norm reached
    the cutoff within MAX_SWEEPS sweeps.
    """
    n = len(a)
    A = [[float(a[i][j]) for j in range(n)] for i in range(n)]
    V = None
    if want_vectors:
        V = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]

    fro2 = 0.0
    for i in range(n):
        for j in range(n):
            fro2 += A[i][j] * A[i][j]
    limit2 = (OFF_REL_CUTOFF * OFF_REL_CUTOFF) * fro2

    sweeps = 0
    converged = False
    while True:
        off2 = 0.0
        for i in range(n):
            row = A[i]
            for j in range(i + 1, n):
                off2 += row[j] * row[j]
        if 2.0 * off2 <= limit2:
            converged = True
            break
        if sweeps == MAX_SWEEPS:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                if apq == 0.0:
                    continue
                app = A[p][p]
                aqq = A[q][q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = A[k][p]
                    akq = A[k][q]
                    v1 = c * akp - s * akq
                    v2 = s * akp + c * akq
                    A[k][p] = v1
                    A[p][k] = v1
                    A[k][q] = v2
                    A[q][k] = v2
                A[p][p] = app - t * apq
                A[q][q] = aqq + t * apq
                A[p][q] = 0.0
                A[q][p] = 0.0
                if want_vectors:
                    for k in range(n):
                        vkp = V[k][p]
                        vkq = V[k][q]
                        V[k][p] = c * vkp - s * vkq
                        V[k][q] = s * vkp + c * vkq
        sweeps += 1

    w = [A[i][i] for i in range(n)]
    order = list(range(n))
    for i in range(1, n):
        key = order[i]
        kv = w[key]
        j = i - 1
        while j >= 0 and w[order[j]] > kv:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = key

    w_out = np.empty(n, dtype=np.float64)
    for i in range(n):
        w_out[i] = w[order[i]]
    v_out = None
    if want_vectors:
        v_out = np.empty((n, n), dtype=np.float64)
        for j in range(n):
            col = order[j]
            for i in range(n):
                v_out[i, j] = V[i][col]
    return w_out, v_out, converged


def _sym_swap(B, n, k, p):
    B[k], B[p] = B[p], B[k]
    for i in range(n):
        row = B[i]
        row[k], row[p] = row[p], row[k]


def ldlt_sign_logdet(a):
    """Determinant sign via LDL^T with symmetric (diagonal) pivoting.

    Returns ``(status, sign, log_abs_det, min_pivot_rel)``. ``status`` is 0
    when the factorization completed and 1 when no acceptably large diagonal
    pivot exists (caller should fall back to an eigenvalue product).
    ``min_pivot_rel`` is the smallest |pivot| relative to the input scale
    (largest absolute entry, floored at 1).
    """
    n = len(a)
    B = [[float(a[i][j]) for j in range(n)] for i in range(n)]

    amax = 0.0
    for i in range(n):
        for j in range(n):
            v = abs(B[i][j])
            if v > amax:
                amax = v
    if not math.isfinite(amax):
        return 1, 0, 0.0, 0.0
    scale = amax if amax > 1.0 else 1.0

    sign = 1
    logabs = 0.0
    minrel = math.inf
    for k in range(n):
        p = k
        dmax = abs(B[k][k])
        for i in range(k + 1, n):
            di = abs(B[i][i])
            if di > dmax:
                dmax = di
                p = i
        offmax = 0.0
        for i in range(k, n):
            row = B[i]
            for j in range(i + 1, n):
                v = abs(row[j])
                if v > offmax:
                    offmax = v
        if dmax == 0.0 and offmax == 0.0:
            # Remaining block is exactly zero: the determinant vanishes.
            return 0, 0, -math.inf, 0.0
        if not math.isfinite(dmax) or not math.isfinite(offmax):
            return 1, 0, 0.0, 0.0
        if dmax < PIVOT_ALPHA * offmax:
            return 1, 0, 0.0, 0.0
        if p != k:
            _sym_swap(B, n, k, p)
        d = B[k][k]
        rel = abs(d) / scale
        if rel < minrel:
            minrel = rel
        if d < 0.0:
            sign = -sign
        logabs += math.log(abs(d))
        for i in range(k + 1, n):
            f = B[i][k] / d
            rowi = B[i]
            rowk = B[k]
            for j in range(i, n):
                rowi[j] -= f * rowk[j]
        for i in range(k + 1, n):
            rowi = B[i]
            for j in range(k + 1, i):
                rowi[j] = B[j][i]
    return 0, sign, logabs, minrel


def fill_loewner(x, fx, dfx):
    """Divided-difference matrix with derivative diagonal."""
    n = len(x)
    xs = [float(v) for v in x]
    fs = [float(v) for v in fx]
    m = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        m[i, i] = float(dfx[i])
        for j in range(i + 1, n):
            v = (fs[i] - fs[j]) / (xs[i] - xs[j])
            m[i, j] = v
            m[j, i] = v
    return m


def fill_anti_loewner(x, gx):
    """Divided-sum matrix (g(x_i)+g(x_j))/(x_i+x_j)."""
    n = len(x)
    xs = [float(v) for v in x]
    gs = [float(v) for v in gx]
    m = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i, n):
            v = (gs[i] + gs[j]) / (xs[i] + xs[j])
            m[i, j] = v
            m[j, i] = v
    return m


def fill_signed(x, gx, s):
    """Sign-perturbed divided-sum matrix (s_i g_i+s_j g_j)/(s_i x_i+s_j x_j)."""
    n = len(x)
    xs = [float(v) for v in x]
    gs = [float(v) for v in gx]
    ss = [float(v) for v in s]
    m = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i, n):
            v = (ss[i] * gs[i] + ss[j] * gs[j]) / (ss[i] * xs[i] + ss[j] * xs[j])
            m[i, j] = v
            m[j, i] = v
    return m


def fill_gram(x, t):
    """Rank-two Gram matrix t + x_i x_j."""
    n = len(x)
    xs = [float(v) for v in x]
    tt = float(t)
    m = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i, n):
            v = tt + xs[i] * xs[j]
            m[i, j] = v
            m[j, i] = v
    return m
