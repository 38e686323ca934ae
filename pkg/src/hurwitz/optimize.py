"""Gauss-Newton least squares on the unit sphere.

For residual maps that are invariant under scaling of the argument
(projective unknowns), the step is taken in the tangent space at the
current point with small singular values truncated, followed by a
backtracking line search and renormalization.
"""

from __future__ import annotations

import numpy as np


def sphere_gauss_newton(residual, start, max_iter=60, target=1e-13, h=1e-7):
    """Minimize ||residual(c)|| over unit vectors c.

    `residual` maps a unit vector to a 1-d array (or None when undefined
    at that point).  Returns (c, r, max_abs) for the best point found, or
    None when the start itself is undefined.
    """
    c = np.asarray(start, dtype=float)
    nrm = np.linalg.norm(c)
    if nrm <= 1e-12:
        return None
    c = c / nrm
    r = residual(c)
    if r is None:
        return None
    k = c.size
    eye = np.eye(k)
    cost = float(np.abs(r).max())
    for _ in range(max_iter):
        if cost < target:
            break
        J = np.empty((r.size, k))
        for i in range(k):
            cp = c.copy()
            cp[i] += h
            rp = residual(cp)
            if rp is None:
                rp = r
            J[:, i] = (rp - r) / h
        P = eye - np.outer(c, c)
        step, *_ = np.linalg.lstsq(J @ P, -r, rcond=1e-10)
        step = P @ step
        base = float(np.dot(r, r))
        lam = 1.0
        improved = False
        for _ in range(30):
            cand = c + lam * step
            nrm = np.linalg.norm(cand)
            if nrm > 1e-12:
                cand = cand / nrm
                rc = residual(cand)
                if rc is not None and float(np.dot(rc, rc)) < base * (
                    1.0 - 1e-4 * lam
                ):
                    c, r = cand, rc
                    cost = float(np.abs(r).max())
                    improved = True
                    break
            lam *= 0.5
        if not improved:
            break
    return c, r, cost
