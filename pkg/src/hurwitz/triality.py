"""Triality components of similitudes.

For associative algebras (dim <= 4) the component pair is written in
closed form; for octonions the pair is found numerically by Gauss-Newton
least squares over the unit 7-sphere in the unknown c = phi2(1), with
seeded random restarts.  Failure is explicit (TrialitySolverFailed),
never a silently wrong triple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    BackendMismatch,
    Dim1,
    ImproperSimilitude,
    NotInvertible,
    NotRelated,
    TrialitySolverFailed,
)
from .linmaps import LinMap, maps_equal, similitude_check
from .optimize import sphere_gauss_newton


@dataclass
class TrialityTriple:
    """phi(x y) = phi1(x) phi2(y) on all basis pairs, with the
    consistency relations phi1 = R_{phi2(1)}^-1 phi and
    phi2 = L_{phi1(1)}^-1 phi."""

    phi: LinMap
    phi1: LinMap
    phi2: LinMap
    residual: object


def _basis_pair_residual(phi, phi1, phi2):
    """Max deviation of phi(e_i e_j) - phi1(e_i) phi2(e_j)."""
    A = phi.algebra
    if not A.is_exact:
        return _kernels.triality_residual_max(
            A.coef_f, phi.data, phi1.data, phi2.data
        )
    worst = A.field.zero
    basis = [A.basis_element(i) for i in range(A.dim)]
    img1 = [phi1.apply(e) for e in basis]
    img2 = [phi2.apply(e) for e in basis]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = phi.apply(A.table_entry(i, j))
            rhs = A.multiply(img1[i], img2[j])
            for u, v in zip(lhs.coords, rhs.coords):
                dev = abs(u - v)
                if dev > worst:
                    worst = dev
    return worst


def triality_components(phi, cert=None, restarts=16, seed=0, max_iter=60):
    """Compute a triality component pair for phi.

    dim <= 4: the associative pair (R_{phi(1)}^-1 phi, phi), exact.
    dim 8: numeric solve (approx backend only).  `cert` is the similitude
    certificate of phi; it is computed when omitted.
    """
    A = phi.algebra
    if A.dim < 2:
        raise Dim1("triality needs dim >= 2")
    if cert is None:
        cert = similitude_check(phi)
    if A.dim >= 4 and not cert.proper:
        raise ImproperSimilitude(
            "triality components exist only for proper similitudes in dim >= 4"
        )
    u = phi.apply(A.one())
    if A.field.is_zero(A.norm(u)):
        raise NotInvertible("phi(1) has zero norm")
    if A.dim <= 4:
        phi1 = A.right_matrix(u).inverse() @ phi
        triple = TrialityTriple(phi, phi1, phi, None)
        triple.residual = _basis_pair_residual(phi, phi1, phi)
        return triple
    if A.is_exact:
        raise BackendMismatch(
            "octonion triality is solved numerically; convert to approx first"
        )
    return _octonion_solve(phi, restarts, seed, max_iter)


def verify_triality(triple):
    """Recompute the worst deviation of a triple: basis-pair identity,
    both consistency relations, and similitude quality of the components.
    Pure measurement; returns the max deviation (inf when structurally
    broken, e.g. a non-invertible phi2(1))."""
    from .errors import HurwitzError, NotSimilitude

    phi, phi1, phi2 = triple.phi, triple.phi1, triple.phi2
    A = phi.algebra
    devs = [_basis_pair_residual(phi, phi1, phi2)]
    try:
        c2 = phi2.apply(A.one())
        devs.append((phi1 - A.right_matrix(c2).inverse() @ phi).max_abs())
        c1 = phi1.apply(A.one())
        devs.append((phi2 - A.left_matrix(c1).inverse() @ phi).max_abs())
    except HurwitzError:
        return float("inf")
    for comp in (phi1, phi2):
        try:
            devs.append(similitude_check(comp).residual)
        except NotSimilitude as exc:
            dev = exc.payload.get("deviation")
            devs.append(dev if dev is not None else float("inf"))
        except HurwitzError:
            return float("inf")
    if A.is_exact:
        return max(devs)
    return float(max(float(d) for d in devs))


def triality_align(t1, t2):
    """Find w in N(A)* with t2 = (R_w^-1 t1.phi1, L_w t1.phi2); raises
    NotRelated otherwise.  Candidate: w = (t2.phi2 t1.phi2^-1)(1)."""
    A = t1.phi.algebra
    tau = None if A.is_exact else A.field.tol.tau_residual
    if not maps_equal(t1.phi, t2.phi, tol=tau):
        raise NotRelated("triples do not share the same similitude")
    w = (t2.phi2 @ t1.phi2.inverse()).apply(A.one())
    if A.field.is_zero(A.norm(w)):
        raise NotRelated("relating element has zero norm")
    if not A.in_nucleus(w):
        raise NotRelated("relating element is outside the nucleus")
    if not maps_equal(t2.phi2, A.left_matrix(w) @ t1.phi2, tol=tau):
        raise NotRelated("second components differ beyond L_w")
    if not maps_equal(
        t2.phi1, A.right_matrix(w).inverse() @ t1.phi1, tol=tau
    ):
        raise NotRelated("first components differ beyond R_w^-1")
    return w


def compose_triples(t1, t2):
    """Triple for the composition t1.phi o t2.phi (components compose)."""
    phi = t1.phi @ t2.phi
    phi1 = t1.phi1 @ t2.phi1
    phi2 = t1.phi2 @ t2.phi2
    return TrialityTriple(phi, phi1, phi2, _basis_pair_residual(phi, phi1, phi2))


def left_right_triple(a, b):
    """(L_a R_b; L_a, R_b) -- valid for associative algebras."""
    A = a.algebra
    phi1 = A.left_matrix(a)
    phi2 = A.right_matrix(b)
    phi = phi1 @ phi2
    return TrialityTriple(phi, phi1, phi2, _basis_pair_residual(phi, phi1, phi2))


def conjugation_triple(a):
    """(x -> a x a; L_a, R_a) -- valid in every Hurwitz algebra by the
    Moufang identity, octonions included."""
    A = a.algebra
    phi1 = A.left_matrix(a)
    phi2 = A.right_matrix(a)
    phi = phi1 @ phi2
    return TrialityTriple(phi, phi1, phi2, _basis_pair_residual(phi, phi1, phi2))


def identity_triple(algebra):
    ident = LinMap.identity(algebra)
    return TrialityTriple(ident, ident, ident, algebra.field.zero)


# -- octonion numeric solve ----------------------------------------------------


def _octonion_solve(phi, restarts, seed, max_iter):
    A = phi.algebra
    coef = A.coef_f
    d = A.norm_diag_f
    l = A.dim
    tau = A.field.tol.tau_residual
    target = _kernels.triality_target(coef, phi.data)
    u = phi.data[:, 0].copy()

    def conj_inv(v):
        n = float(np.dot(d, v * v))
        if abs(n) < 1e-14:
            return None
        w = -v / n
        w[0] = -w[0]
        return w

    def components(c):
        cinv = conj_inv(c)
        if cinv is None:
            return None
        phi1 = _kernels.right_matrix(coef, cinv) @ phi.data
        t = _kernels.mul(coef, u, cinv)
        tinv = conj_inv(t)
        if tinv is None:
            return None
        phi2 = _kernels.left_matrix(coef, tinv) @ phi.data
        return phi1, phi2

    def residual_vec(c):
        comps = components(c)
        if comps is None:
            return None
        phi1, phi2 = comps
        return (_kernels.product_table(coef, phi1, phi2) - target).ravel()

    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        # The residual is invariant under scaling of c (the nuclear
        # ambiguity), hence the sphere-constrained solve.
        out = sphere_gauss_newton(
            residual_vec, rng.standard_normal(l), max_iter=max_iter
        )
        if out is None:
            continue
        c, _, cost = out
        if cost < tau:
            comps = components(c)
            phi1 = LinMap(A, comps[0])
            phi2 = LinMap(A, comps[1])
            triple = TrialityTriple(phi, phi1, phi2, cost)
            if float(verify_triality(triple)) < tau:
                return triple
    raise TrialitySolverFailed(
        f"no triality components found within {restarts} restarts"
    )
