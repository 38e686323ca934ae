# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled float kernels: same API and op order as `pure`."""

from libc.math cimport sqrt, fabs, copysign

import numpy as np
cimport numpy as cnp

cnp.import_array()

NAME = "cython"


def mul(const double[:, ::1] coef, const double[::1] x, const double[::1] y):
    cdef Py_ssize_t l = coef.shape[0]
    out_arr = np.zeros(l)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double xi
    for i in range(l):
        xi = x[i]
        if xi == 0.0:
            continue
        for j in range(l):
            out[i ^ j] += coef[i, j] * xi * y[j]
    return out_arr


def mul_many(const double[:, ::1] coef, const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t l = coef.shape[0]
    out_arr = np.zeros((n, l))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t m, i, j
    cdef double xi
    for m in range(n):
        for i in range(l):
            xi = X[m, i]
            if xi == 0.0:
                continue
            for j in range(l):
                out[m, i ^ j] += coef[i, j] * xi * Y[m, j]
    return out_arr


def left_matrix(const double[:, ::1] coef, const double[::1] a):
    cdef Py_ssize_t l = coef.shape[0]
    out_arr = np.zeros((l, l))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for i in range(l):
        for j in range(l):
            out[i ^ j, j] = coef[i, j] * a[i]
    return out_arr


def right_matrix(const double[:, ::1] coef, const double[::1] a):
    cdef Py_ssize_t l = coef.shape[0]
    out_arr = np.zeros((l, l))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for i in range(l):
        for j in range(l):
            out[i ^ j, i] = coef[i, j] * a[j]
    return out_arr


def product_table(const double[:, ::1] coef, const double[:, ::1] phi1, const double[:, ::1] phi2):
    cdef Py_ssize_t l = coef.shape[0]
    out_arr = np.zeros((l, l, l))
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, a, b
    cdef double c, p1
    for a in range(l):
        for b in range(l):
            c = coef[a, b]
            if c == 0.0:
                continue
            for i in range(l):
                p1 = c * phi1[a, i]
                if p1 == 0.0:
                    continue
                for j in range(l):
                    out[i, j, a ^ b] += p1 * phi2[b, j]
    return out_arr


def triality_target(const double[:, ::1] coef, const double[:, ::1] phi):
    cdef Py_ssize_t l = coef.shape[0]
    out_arr = np.zeros((l, l, l))
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    for i in range(l):
        for j in range(l):
            for k in range(l):
                out[i, j, k] = coef[i, j] * phi[k, i ^ j]
    return out_arr


def triality_residual_max(const double[:, ::1] coef, const double[:, ::1] phi,
                          const double[:, ::1] phi1, const double[:, ::1] phi2):
    cdef Py_ssize_t l = coef.shape[0]
    t_arr = product_table(coef, phi1, phi2)
    cdef double[:, :, ::1] t = t_arr
    cdef Py_ssize_t i, j, k
    cdef double best = 0.0, d
    for i in range(l):
        for j in range(l):
            for k in range(l):
                d = fabs(t[i, j, k] - coef[i, j] * phi[k, i ^ j])
                if d > best:
                    best = d
    return best


def jacobi_eigh(S, int max_sweeps=50, double rel_tol=1e-15):
    cdef Py_ssize_t n = S.shape[0]
    A_arr = np.array(S, dtype=np.float64, copy=True, order="C")
    V_arr = np.eye(n)
    cdef double[:, ::1] A = A_arr
    cdef double[:, ::1] V = V_arr
    cdef Py_ssize_t p, q, i, j, sweep
    cdef double scale = 1.0, off, v, apq, theta, t, c, s
    cdef double aip, aiq, apj, aqj, vip, viq, thresh
    for i in range(n):
        for j in range(n):
            if fabs(A[i, j]) > scale:
                scale = fabs(A[i, j])
    thresh = rel_tol * scale
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                v = fabs(A[p, q])
                if v > off:
                    off = v
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if fabs(apq) <= thresh * 1e-2:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    aip = A[i, p]
                    aiq = A[i, q]
                    A[i, p] = c * aip - s * aiq
                    A[i, q] = s * aip + c * aiq
                for j in range(n):
                    apj = A[p, j]
                    aqj = A[q, j]
                    A[p, j] = c * apj - s * aqj
                    A[q, j] = s * apj + c * aqj
                for i in range(n):
                    vip = V[i, p]
                    viq = V[i, q]
                    V[i, p] = c * vip - s * viq
                    V[i, q] = s * vip + c * viq
    vals = np.array([A_arr[i, i] for i in range(n)])
    order = np.argsort(-vals, kind="stable")
    return vals[order], V_arr[:, order]
