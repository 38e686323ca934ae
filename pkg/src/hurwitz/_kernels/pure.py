"""Pure-Python (numpy) implementations of the float kernels.

The Cayley-Dickson basis is monomial: e_i * e_j = c[i,j] * e_{i XOR j},
so every kernel reduces to gathers/scatters indexed by XOR tables.  The
compiled module `_fast` implements the same API with C loops; this module
is the fallback selected at import time when the extension is missing.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "pure"

_XOR = {}
_BUCKETS = {}


def _xor_table(l):
    t = _XOR.get(l)
    if t is None:
        idx = np.arange(l)
        t = idx[:, None] ^ idx[None, :]
        _XOR[l] = t
    return t


def _buckets(l):
    """For each k, the row permutation a -> a XOR k."""
    b = _BUCKETS.get(l)
    if b is None:
        idx = np.arange(l)
        b = [idx ^ k for k in range(l)]
        _BUCKETS[l] = b
    return b


def mul(coef, x, y):
    l = coef.shape[0]
    w = coef * np.outer(x, y)
    return np.bincount(_xor_table(l).ravel(), weights=w.ravel(), minlength=l)


def mul_many(coef, X, Y):
    l = coef.shape[0]
    out = np.empty((X.shape[0], l))
    ar = np.arange(l)
    for k, perm in enumerate(_buckets(l)):
        w = coef[ar, perm]
        out[:, k] = ((X * w) * Y[:, perm]).sum(axis=1)
    return out


def left_matrix(coef, a):
    l = coef.shape[0]
    out = np.zeros((l, l))
    cols = np.broadcast_to(np.arange(l), (l, l))
    out[_xor_table(l), cols] = coef * a[:, None]
    return out


def right_matrix(coef, a):
    l = coef.shape[0]
    out = np.zeros((l, l))
    rows = np.broadcast_to(np.arange(l)[:, None], (l, l))
    out[_xor_table(l), rows] = coef * a[None, :]
    return out


def product_table(coef, phi1, phi2):
    """T[i, j, :] = coordinates of (column i of phi1) * (column j of phi2)."""
    l = coef.shape[0]
    out = np.empty((l, l, l))
    ar = np.arange(l)
    for k, perm in enumerate(_buckets(l)):
        w = coef[ar, perm]
        out[:, :, k] = (phi1 * w[:, None]).T @ phi2[perm, :]
    return out


def triality_target(coef, phi):
    """T[i, j, :] = image under phi of the basis product e_i e_j."""
    l = coef.shape[0]
    return coef[:, :, None] * phi.T[_xor_table(l)]


def triality_residual_max(coef, phi, phi1, phi2):
    diff = product_table(coef, phi1, phi2) - triality_target(coef, phi)
    return float(np.abs(diff).max())


def jacobi_eigh(S, max_sweeps=50, rel_tol=1e-15):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns (eigenvalues descending, eigenvector columns).  Deterministic:
    fixed sweep order, stable sort.
    """
    n = S.shape[0]
    A = [[float(S[i, j]) for j in range(n)] for i in range(n)]
    V = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    scale = max(1.0, max(abs(A[i][j]) for i in range(n) for j in range(n)))
    thresh = rel_tol * scale
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            row = A[p]
            for q in range(p + 1, n):
                v = abs(row[q])
                if v > off:
                    off = v
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                if abs(apq) <= thresh * 1e-2:
                    continue
                theta = (A[q][q] - A[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    aip, aiq = A[i][p], A[i][q]
                    A[i][p] = c * aip - s * aiq
                    A[i][q] = s * aip + c * aiq
                for j in range(n):
                    apj, aqj = A[p][j], A[q][j]
                    A[p][j] = c * apj - s * aqj
                    A[q][j] = s * apj + c * aqj
                for i in range(n):
                    vip, viq = V[i][p], V[i][q]
                    V[i][p] = c * vip - s * viq
                    V[i][q] = s * vip + c * viq
    vals = np.array([A[i][i] for i in range(n)])
    vecs = np.array(V)
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]
