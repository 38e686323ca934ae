"""Canonical forms and isomorphism tests for isotopes of quaternion algebras.

Euclidean branch: polar-factorize both twisting maps, split the rotations
into left/right multiplication pairs, then reduce each determinant-sign
class to its two-parameter normal form carrying a pair of unit elements
and two determinant-one positive definite shape factors.  The residual
symmetry is simultaneous conjugation by a unit element, so isomorphism
testing reduces to linear systems plus a bounded search over their
nullspaces.

Composition branch (any backend, dim 4): both maps are similitudes; after
stripping involution factors the proper parts factor through left/right
multiplications via an inner-automorphism solve, and the normal form is a
projective pair of invertible elements up to simultaneous conjugation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgElement
from .errors import (
    AlgebraMismatch,
    BackendMismatch,
    Inconclusive,
    NotComposition,
    NotEuclidean,
    NotInner,
    NotIsomorphic,
    NotConjugate,
    NotSpecialOrthogonal,
    Singular,
    WrongDimension,
)
from .isotopes import Isotope
from .linmaps import (
    LinMap,
    exact_nullspace,
    is_special_orthogonal,
    maps_equal,
    polar_decompose,
    similitude_check,
)
from .optimize import sphere_gauss_newton

NORMALIZATION_VERSION = "1"


# -- projective normalization ---------------------------------------------------


def normalize_projective(x):
    """Scale a nonzero element to the library-wide projective representative.

    Exact: first nonzero coordinate becomes 1.  Approx (Euclidean): unit
    norm with the first significantly-nonzero coordinate positive.  Returns
    (normalized, lam) with x = lam * normalized.
    """
    A = x.algebra
    f = A.field
    if A.is_exact:
        lam = None
        for v in x.coords:
            if v != 0:
                lam = v
                break
        if lam is None:
            raise Singular("cannot normalize the zero element")
        return x.scale(f.inv(lam)), lam
    n = A.norm(x)
    if n <= 0:
        raise NotEuclidean("projective normalization needs positive norm")
    lam = math.sqrt(n)
    coords = x.coords / lam
    scale = float(np.abs(coords).max())
    for v in coords:
        if abs(v) > f.tol.tau_eq * max(1.0, scale):
            if v < 0:
                lam = -lam
                coords = -coords
            break
    return AlgElement(A, coords), lam


def _conj_map(s):
    """Matrix of x -> s x s^-1."""
    A = s.algebra
    return A.left_matrix(s) @ A.right_matrix(s.inverse())


# -- inner automorphism solve ----------------------------------------------------


def inner_conj_solve(psi):
    """Solve psi = (x -> p x p^-1) on a quaternion algebra.

    Stacks the homogeneous systems p e_j - psi(e_j) p = 0 into a 16x4
    matrix; generic inner maps give a one-dimensional solution space.  The
    recovered p is normalized projectively and certified by rebuilding the
    conjugation map.
    """
    A = psi.algebra
    if A.dim != 4:
        raise WrongDimension("inner conjugation solve needs dim 4")
    if not psi.is_invertible():
        raise Singular("inner conjugation candidate is singular")
    rows = []
    basis = [A.basis_element(j) for j in range(4)]
    for j in range(4):
        block = A.right_matrix(basis[j]) - A.left_matrix(psi.apply(basis[j]))
        rows.extend(block.data)
    if A.is_exact:
        null = exact_nullspace(rows, 4)
    else:
        m = np.array(rows, dtype=float)
        _, sv, vt = np.linalg.svd(m)
        cut = A.field.tol.tau_eq * max(1.0, float(sv[0]))
        null = [vt[i] for i in range(4) if i >= len(sv) or sv[i] <= cut]
    if not null:
        raise NotInner("no nonzero solution to the conjugation system")
    if len(null) > 1:
        if maps_equal(psi, LinMap.identity(A)):
            return A.one()
        raise NotInner("degenerate conjugation system for a non-identity map")
    p = AlgElement(A, null[0])
    if A.field.is_zero(A.norm(p)):
        raise NotInner("conjugation solution is not invertible")
    p, _ = normalize_projective(p)
    if not maps_equal(_conj_map(p), psi, tol=None if A.is_exact else A.field.tol.tau_residual):
        raise NotInner("solution does not rebuild the map")
    return p


def go_plus_factor(zeta):
    """Factor a proper similitude of a quaternion algebra as L_a R_b.

    Works over both backends: psi(x) = zeta(x) zeta(1)^-1 is an inner
    automorphism psi = (x -> p x p^-1), so zeta(x) = psi(x) zeta(1) gives
    a = p, b = p^-1 zeta(1).
    """
    A = zeta.algebra
    if A.dim != 4:
        raise WrongDimension("left/right factorization needs dim 4")
    v = zeta.apply(A.one())
    if A.field.is_zero(A.norm(v)):
        raise Singular("zeta(1) is not invertible")
    psi = A.right_matrix(v).inverse() @ zeta
    p = inner_conj_solve(psi)
    a = p
    b = A.multiply(p.inverse(), v)
    tol = None if A.is_exact else A.field.tol.tau_residual
    if not maps_equal(A.left_matrix(a) @ A.right_matrix(b), zeta, tol=tol):
        raise NotInner("left/right factorization failed verification")
    return a, b


def so4_factor(zeta):
    """Factor a special orthogonal map of Euclidean quaternions as L_p R_q
    with unit p, q, the sign ambiguity fixed by making the first nonzero
    coordinate of p positive (p is the normalized inner-conjugation
    witness, so the rule rides on it)."""
    A = zeta.algebra
    if A.is_exact or not A.is_euclidean or A.dim != 4:
        raise NotEuclidean("so4 factorization needs Euclidean quaternions")
    if not is_special_orthogonal(zeta):
        raise NotSpecialOrthogonal("input is not special orthogonal")
    try:
        p, q = go_plus_factor(zeta)
    except NotInner as exc:
        raise NotSpecialOrthogonal(f"rotation factorization failed: {exc}") from exc
    tau = A.field.tol.tau_residual
    if abs(A.norm(p) - 1.0) > tau or abs(A.norm(q) - 1.0) > tau:
        raise NotSpecialOrthogonal("factor norms deviate from 1")
    return p, q


# -- quaternion canonical forms ---------------------------------------------------


@dataclass
class QuatCanonicalForm:
    """Orbit representative: class signs, projective unit pair (a, b), and
    two determinant-one positive definite shape factors."""

    cls: tuple
    a: AlgElement
    b: AlgElement
    delta: LinMap
    eps: LinMap
    version: str = NORMALIZATION_VERSION


def _spds_normalize(m):
    """Rescale a positive definite map to determinant one."""
    det = m.determinant()
    if det <= 0:
        raise Singular("shape factor lost positive definiteness")
    s = det ** (1.0 / m.algebra.dim)
    return m.scale_by(1.0 / s), s


def _reduction(A, cls, p, q, r, t):
    """Per-class reduction data: raw pair (a, b) and the acting group
    element F (with its kappa-twist used for conjugating shape factors)."""
    inv = lambda x: x.inverse()
    mulE = A.multiply
    if cls == (1, 1):
        b0 = mulE(q, r)
        F = A.right_matrix(b0)
        a_raw = p
        b_raw = mulE(inv(b0), mulE(t, b0))
    elif cls == (-1, 1):
        c = p.conjugate()
        F = A.right_matrix(c)
        a_raw = mulE(q, r)
        b_raw = mulE(inv(c), mulE(t, c))
    elif cls == (1, -1):
        c = t.conjugate()
        F = A.left_matrix(c)
        a_raw = mulE(c, mulE(p, inv(c)))
        b_raw = mulE(q, r)
    else:
        u = mulE(q, r).conjugate()
        F = A.right_matrix(u)
        a_raw = mulE(p, inv(mulE(q, r)))
        b_raw = mulE(t, u)
    return a_raw, b_raw, F


def quaternion_canonical(iso, _selfcheck=True):
    """Canonical form of an isotope of Euclidean quaternions.

    Pipeline: polar-factorize alpha and beta (class = determinant signs),
    factor the rotations through unit pairs, act by one group element to
    reach the class normal form, normalize the shape factors to
    determinant one and the pair projectively.  The result is certified by
    rebuilding an isotope from the form and checking it against the input.
    """
    A = iso.algebra
    if A.dim != 4:
        raise WrongDimension("quaternion canonicalization needs dim 4")
    if A.is_exact or not A.is_euclidean:
        raise NotEuclidean("quaternion canonicalization needs Euclidean H")
    pa = polar_decompose(iso.alpha)
    pb = polar_decompose(iso.beta)
    cls = (pa.lam_sign, pb.lam_sign)
    p, q = so4_factor(pa.zeta)
    r, t = so4_factor(pb.zeta)
    a_raw, b_raw, F = _reduction(A, cls, p, q, r, t)
    K = A.kappa()
    Fk = K @ F @ K
    conj_d = F if cls[0] > 0 else Fk
    conj_e = F if cls[1] > 0 else Fk
    delta2 = conj_d @ pa.delta @ conj_d.inverse()
    eps2 = conj_e @ pb.delta @ conj_e.inverse()
    a_hat, lam_a = normalize_projective(a_raw)
    b_hat, lam_b = normalize_projective(b_raw)
    delta_hat, s_d = _spds_normalize(delta2)
    eps_hat, s_e = _spds_normalize(eps2)
    form = QuatCanonicalForm(cls, a_hat, b_hat, delta_hat, eps_hat)
    if _selfcheck:
        rebuilt = rebuild_quat_isotope(form)
        rho = lam_a * s_d
        sigma = lam_b * s_e
        _check_iso_witness(iso, rebuilt, F.scale_by(rho * sigma))
        reform = quaternion_canonical(rebuilt, _selfcheck=False)
        quat_iso_test(reform, form)
    return form


def rebuild_quat_isotope(form):
    """Isotope defined by a canonical form (the class's normal maps)."""
    A = form.a.algebra
    K = A.kappa()
    cls = form.cls
    if cls == (1, 1):
        alpha = A.left_matrix(form.a) @ form.delta
        beta = A.right_matrix(form.b) @ form.eps
    elif cls == (-1, 1):
        alpha = A.right_matrix(form.a) @ form.delta @ K
        beta = A.right_matrix(form.b) @ form.eps
    elif cls == (1, -1):
        alpha = A.left_matrix(form.a) @ form.delta
        beta = A.left_matrix(form.b) @ form.eps @ K
    else:
        alpha = A.left_matrix(form.a) @ form.delta @ K
        beta = A.right_matrix(form.b) @ form.eps @ K
    return Isotope(A, alpha, beta)


def _check_iso_witness(src, dst, psi):
    """Verify psi(x o y) = psi(x) o' psi(y) on all basis pairs."""
    A = src.algebra
    worst = A.field.zero
    basis = [A.basis_element(i) for i in range(A.dim)]
    img = [psi.apply(e) for e in basis]
    for i in range(A.dim):
        for j in range(A.dim):
            diff = psi.apply(src.mul(basis[i], basis[j])) - dst.mul(img[i], img[j])
            if A.is_exact:
                worst = max(worst, max(abs(v) for v in diff.coords))
            else:
                worst = max(worst, float(np.abs(diff.coords).max()))
    if A.is_exact:
        if worst != 0:
            raise NotIsomorphic("isomorphism witness fails on a basis pair")
    else:
        scale = max(
            1.0, psi.max_abs() * src.alpha.max_abs() * src.beta.max_abs()
        )
        if worst > A.field.tol.tau_residual * scale:
            raise NotIsomorphic("isomorphism witness fails on a basis pair")
    return worst


# -- isomorphism test on canonical forms --------------------------------------------


def _stacked_conjugacy_rows(a1, a2, sig_a, b1, b2, sig_b):
    """Rows of the system  s a1 = sig_a a2 s,  s b1 = sig_b b2 s."""
    A = a1.algebra
    f = A.field
    blocks = []
    for x1, x2, sig in ((a1, a2, sig_a), (b1, b2, sig_b)):
        block = A.right_matrix(x1) - A.left_matrix(x2).scale_by(sig)
        blocks.extend(block.data)
    return blocks


def _form_residual_vec(s, f1, f2, sig_a, sig_b):
    """Residual vector of the conjugation action of s carrying f1 to f2
    (scale-invariant in s)."""
    A = s.algebra
    C = _conj_map(s)
    Cinv = C.inverse()
    return np.concatenate(
        [
            np.asarray((C.apply(f1.a)).coords) - sig_a * np.asarray(f2.a.coords),
            np.asarray((C.apply(f1.b)).coords) - sig_b * np.asarray(f2.b.coords),
            ((C @ f1.delta @ Cinv).data - f2.delta.data).ravel(),
            ((C @ f1.eps @ Cinv).data - f2.eps.data).ravel(),
        ]
    )


def _form_residual(s, f1, f2, sig_a, sig_b):
    return float(np.abs(_form_residual_vec(s, f1, f2, sig_a, sig_b)).max())


def _null_candidates_approx(rows, tol_cut):
    m = np.array(rows, dtype=float)
    _, sv, vt = np.linalg.svd(m)
    cut = tol_cut * max(1.0, float(sv[0]))
    null = [vt[i] for i in range(4) if i >= len(sv) or sv[i] <= cut]
    return null


def _refine_circle(resfun, u1, u2, samples=1024):
    """Dense scan of s(theta) = cos(theta) u1 + sin(theta) u2, then local
    least-squares refinement around the best angle."""
    best = (float("inf"), None)
    for th in np.linspace(0.0, math.pi, samples, endpoint=False):
        vec = math.cos(th) * u1 + math.sin(th) * u2
        r = resfun(vec)
        val = float(np.abs(r).max())
        if val < best[0]:
            best = (val, vec)
    out = sphere_gauss_newton(resfun, best[1])
    if out is not None and out[2] < best[0]:
        return out[0], out[2]
    return best[1] / np.linalg.norm(best[1]), best[0]


def quat_iso_test(f1, f2):
    """Decide isomorphism of two canonical forms; returns the conjugating
    unit witness or raises NotIsomorphic (Inconclusive at the tolerance
    boundary, carrying the best witness and residual)."""
    A = f1.a.algebra
    if f2.a.algebra is not A:
        raise AlgebraMismatch("forms live on different algebras")
    if A.is_exact:
        raise BackendMismatch("canonical forms are an approx-backend object")
    if f1.cls != f2.cls:
        raise NotIsomorphic("determinant sign classes differ")
    tau = A.field.tol.tau_residual
    best = (float("inf"), None)
    for sig_a in (1.0, -1.0):
        for sig_b in (1.0, -1.0):
            rows = _stacked_conjugacy_rows(f1.a, f2.a, sig_a, f1.b, f2.b, sig_b)
            null = _null_candidates_approx(rows, A.field.tol.tau_eq)
            if not null:
                continue
            def resfun(vec, _sa=sig_a, _sb=sig_b):
                unit = vec / np.linalg.norm(vec)
                return _form_residual_vec(AlgElement(A, unit), f1, f2, _sa, _sb)

            if len(null) == 1:
                cand = null[0]
                val = float(np.abs(resfun(cand)).max())
            elif len(null) == 2:
                cand, val = _refine_circle(resfun, null[0], null[1])
            else:
                cand, val = _search_sphere(resfun, null)
            if val < best[0]:
                best = (val, AlgElement(A, cand / np.linalg.norm(cand)))
    if best[1] is not None and best[0] <= tau:
        s, _ = normalize_projective(best[1])
        return s
    if best[1] is not None and best[0] <= 100 * tau:
        s, _ = normalize_projective(best[1])
        raise Inconclusive(
            "residual at tolerance boundary", witness=s, residual=best[0]
        )
    raise NotIsomorphic("no conjugation carries one form to the other")


def _search_sphere(resfun, basis, starts=48):
    """Multi-start sphere least squares over a nullspace of dimension >= 3
    (both pair components central, so the stabilizer is positive
    dimensional and the pair conditions are slack)."""
    B = np.array([b / np.linalg.norm(b) for b in basis])
    k = len(basis)

    def chart(w):
        return resfun(w @ B)

    rng = np.random.default_rng(20240)
    best = (float("inf"), B[0])
    for i in range(starts):
        w0 = np.eye(k)[i] if i < k else rng.standard_normal(k)
        out = sphere_gauss_newton(chart, w0)
        if out is not None and out[2] < best[0]:
            best = (out[2], out[0] @ B)
            if best[0] < 1e-12:
                break
    return best[1], best[0]


# -- composition canonical forms ------------------------------------------------------


@dataclass
class CompCanonicalForm:
    """Class signs plus a projective pair of invertible elements up to
    simultaneous conjugation."""

    cls: tuple
    a: AlgElement
    b: AlgElement
    version: str = NORMALIZATION_VERSION


def comp_canonical(iso, _selfcheck=True):
    """Canonical form of a composition isotope of a quaternion algebra
    (exact or Euclidean backend)."""
    A = iso.algebra
    if A.dim != 4:
        raise WrongDimension("composition canonicalization needs dim 4")
    try:
        cert_a = similitude_check(iso.alpha)
        cert_b = similitude_check(iso.beta)
    except Exception as exc:
        raise NotComposition(f"isotope maps are not similitudes: {exc}") from exc
    cls = (1 if cert_a.proper else -1, 1 if cert_b.proper else -1)
    K = A.kappa()
    zeta = iso.alpha @ K if cls[0] < 0 else iso.alpha
    eta = iso.beta @ K if cls[1] < 0 else iso.beta
    a1, b1 = go_plus_factor(zeta)
    c1, d1 = go_plus_factor(eta)
    a_raw, b_raw, F = _reduction(A, cls, a1, b1, c1, d1)
    a_hat, lam_a = normalize_projective(a_raw)
    b_hat, lam_b = normalize_projective(b_raw)
    form = CompCanonicalForm(cls, a_hat, b_hat)
    if _selfcheck:
        rebuilt = rebuild_comp_isotope(form)
        rho = A.field.mul(lam_a, lam_b)
        _check_iso_witness(iso, rebuilt, F.scale_by(rho))
    return form


def rebuild_comp_isotope(form):
    """Isotope defined by a composition canonical form, with the class's
    involution factors attached explicitly."""
    A = form.a.algebra
    K = A.kappa()
    cls = form.cls
    if cls == (1, 1):
        alpha = A.left_matrix(form.a)
        beta = A.right_matrix(form.b)
    elif cls == (-1, 1):
        alpha = A.right_matrix(form.a) @ K
        beta = A.right_matrix(form.b)
    elif cls == (1, -1):
        alpha = A.left_matrix(form.a)
        beta = A.left_matrix(form.b) @ K
    else:
        alpha = A.left_matrix(form.a) @ K
        beta = A.right_matrix(form.b) @ K
    return Isotope(A, alpha, beta)


# -- simultaneous conjugacy of pairs ---------------------------------------------------


def _ratio_sqrt(field, n1, n2):
    """Candidate scalar magnitudes rho with n1 = rho^2 n2, or None."""
    ratio = field.div(n1, n2)
    if field.is_exact:
        root = field.sqrt(ratio)
        return root
    if ratio < 0:
        return None
    return math.sqrt(ratio)


def pair_conjugacy(pair1, pair2):
    """Witness s with s a s^-1 ~ a', s b s^-1 ~ b' projectively, or
    NotConjugate.  Exact backend is fully decidable via exact nullspaces."""
    a1, b1 = pair1
    a2, b2 = pair2
    A = a1.algebra
    f = A.field
    for x in (a1, b1, a2, b2):
        if f.is_zero(A.norm(x)):
            raise NotConjugate("pair elements must be invertible")
    rho_a = _ratio_sqrt(f, A.norm(a1), A.norm(a2))
    rho_b = _ratio_sqrt(f, A.norm(b1), A.norm(b2))
    if rho_a is None or rho_b is None:
        raise NotConjugate("conjugation preserves norms; ratio is not a square")
    tau = None if A.is_exact else f.tol.tau_residual
    for sig_a in (rho_a, f.neg(rho_a)):
        for sig_b in (rho_b, f.neg(rho_b)):
            rows = []
            for x1, x2, sig in ((a1, a2, sig_a), (b1, b2, sig_b)):
                block = A.right_matrix(x1) - A.left_matrix(x2).scale_by(sig)
                rows.extend(block.data)
            if A.is_exact:
                null = exact_nullspace(rows, 4)
            else:
                null = _null_candidates_approx(rows, f.tol.tau_eq)
            for cand in _invertible_candidates(A, null):
                s = cand
                sinv = s.inverse()
                ok = True
                for x1, x2, sig in ((a1, a2, sig_a), (b1, b2, sig_b)):
                    got = A.multiply(s, A.multiply(x1, sinv))
                    want = x2.scale(sig)
                    if A.is_exact:
                        if got != want:
                            ok = False
                            break
                    else:
                        dev = float(np.abs(got.coords - want.coords).max())
                        scale = max(1.0, float(np.abs(want.coords).max()))
                        if dev > tau * scale:
                            ok = False
                            break
                if ok:
                    s_norm, _ = normalize_projective(s)
                    return s_norm
    raise NotConjugate("no simultaneous conjugation exists")


def _invertible_candidates(A, null):
    """Invertible elements drawn from a nullspace basis and small combos."""
    f = A.field
    cands = []
    for vec in null:
        x = AlgElement(A, vec)
        if not f.is_zero(A.norm(x)):
            cands.append(x)
    if not cands and len(null) >= 2:
        combos = [(1, 1), (1, -1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3)]
        for c1, c2 in combos:
            vec = [
                f.add(f.mul(f.coerce(c1), v1), f.mul(f.coerce(c2), v2))
                for v1, v2 in zip(null[0], null[1])
            ] if A.is_exact else c1 * null[0] + c2 * null[1]
            x = AlgElement(A, vec)
            if not f.is_zero(A.norm(x)):
                cands.append(x)
                break
    return cands
