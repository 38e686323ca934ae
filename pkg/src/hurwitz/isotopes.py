"""Principal isotopes A_(alpha,beta): x o y = alpha(x) beta(y).

Covers unitality (with constructive recovery of the defining pair),
norm transfer to unital isotopes, transport along similitudes with
verified triality components, literal equality of isotopes, the
determinant double-sign invariant, and composition-algebra detection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlgebraMismatch,
    Dim1,
    Distinct,
    ImproperSimilitude,
    IsotropicIdentity,
    NotComposition,
    NotUnital,
    SplitBinaryAlgebra,
    TrialityMismatch,
)
from .linmaps import LinMap, maps_equal, random_invertible, similitude_check
from .scalars import PowerCoset, coset_rep
from .triality import verify_triality


class Isotope:
    """An algebra together with invertible alpha, beta twisting the product."""

    __slots__ = ("algebra", "alpha", "beta")

    def __init__(self, algebra, alpha, beta):
        if alpha.algebra is not algebra or beta.algebra is not algebra:
            raise AlgebraMismatch("isotope maps must act on the base algebra")
        if not alpha.is_invertible() or not beta.is_invertible():
            from .errors import Singular

            raise Singular("isotope maps must be invertible")
        self.algebra = algebra
        self.alpha = alpha
        self.beta = beta

    def mul(self, x, y):
        """x o y = alpha(x) beta(y)."""
        A = self.algebra
        A._check_member(x, y)
        return A.multiply(self.alpha.apply(x), self.beta.apply(y))

    def __repr__(self):
        return f"Isotope(dim={self.algebra.dim}, {self.algebra.backend})"


def isotope_mul(iso, x, y):
    return iso.mul(x, y)


def trivial_isotope(algebra):
    ident = LinMap.identity(algebra)
    return Isotope(algebra, ident, ident)


def random_isotope(algebra, seed):
    if isinstance(seed, int):
        rng = (
            random.Random(seed)
            if algebra.is_exact
            else np.random.default_rng(seed)
        )
    else:
        rng = seed
    return Isotope(
        algebra, random_invertible(algebra, rng), random_invertible(algebra, rng)
    )


def random_composition_isotope(algebra, seed, classes=None):
    """Random isotope whose maps are similitudes: L_a R_b optionally composed
    with kappa on either side, so all four properness classes occur."""
    if isinstance(seed, int):
        rng = (
            random.Random(seed)
            if algebra.is_exact
            else np.random.default_rng(seed)
        )
    else:
        rng = seed

    def draw_flag():
        return (
            rng.randint(0, 1)
            if algebra.is_exact
            else int(rng.integers(0, 2))
        )

    def draw_map(improper):
        a = algebra.random_element(rng, invertible=True)
        b = algebra.random_element(rng, invertible=True)
        m = algebra.left_matrix(a) @ algebra.right_matrix(b)
        if improper:
            m = m @ algebra.kappa()
        return m

    if classes is None:
        flags = (draw_flag(), draw_flag())
    else:
        flags = (classes[0] < 0, classes[1] < 0)
    return Isotope(algebra, draw_map(flags[0]), draw_map(flags[1]))


# -- unitality ------------------------------------------------------------------


def find_identity(iso):
    """Identity element of the isotope, or NotUnital.

    The isotope is unital iff alpha is the inverse of a right multiplication
    and beta the inverse of a left multiplication; both witnesses are read
    off constructively (a = alpha^-1(1), b = beta^-1(1)) and certified by
    full matrix comparison, then the identity b a is verified on the basis.
    """
    A = iso.algebra
    one = A.one()
    alpha_inv = iso.alpha.inverse()
    a = alpha_inv.apply(one)
    if not maps_equal(alpha_inv, A.right_matrix(a)):
        raise NotUnital("alpha is not the inverse of a right multiplication")
    beta_inv = iso.beta.inverse()
    b = beta_inv.apply(one)
    if not maps_equal(beta_inv, A.left_matrix(b)):
        raise NotUnital("beta is not the inverse of a left multiplication")
    if A.field.is_zero(A.norm(a)) or A.field.is_zero(A.norm(b)):
        raise NotUnital("witness elements are not invertible")
    e = A.multiply(b, a)
    for j in range(A.dim):
        ej = A.basis_element(j)
        if iso.mul(e, ej) != ej or iso.mul(ej, e) != ej:
            raise NotUnital("candidate identity fails on the basis")
    return e


def unital_isotope_norm(iso):
    """Norm scale rho = n(identity)^-1 making rho * n multiplicative for
    the isotope product."""
    u = find_identity(iso)
    A = iso.algebra
    nu = A.norm(u)
    if A.field.is_zero(nu):
        raise IsotropicIdentity("identity element has zero norm")
    rho = A.field.inv(nu)
    rng = random.Random(12345) if A.is_exact else np.random.default_rng(12345)
    for _ in range(8):
        x = A.random_element(rng)
        y = A.random_element(rng)
        # rho n(x o y) = rho n(x) rho n(y), i.e. n(x o y) = rho n(x) n(y)
        lhs = A.norm(iso.mul(x, y))
        rhs = A.field.mul(rho, A.field.mul(A.norm(x), A.norm(y)))
        if A.is_exact:
            if lhs != rhs:
                raise NotUnital("norm scale fails multiplicativity")
        else:
            scale = max(1.0, abs(lhs), abs(rhs))
            if abs(lhs - rhs) > A.field.tol.tau_residual * scale:
                raise NotUnital("norm scale fails multiplicativity")
    return rho


# -- transport -------------------------------------------------------------------


@dataclass
class TransportResult:
    """Target pair (gamma, delta) with the witness phi and the triality
    pair that produced it; phi is an isomorphism onto the target."""

    gamma: LinMap
    delta: LinMap
    witness: LinMap
    triple: object
    residual: object

    @property
    def target(self):
        return Isotope(self.gamma.algebra, self.gamma, self.delta)


def transport(iso, phi, triple):
    """Push the isotope along phi using verified triality components:
    gamma = phi1 alpha phi^-1, delta = phi2 beta phi^-1."""
    A = iso.algebra
    cert = similitude_check(phi)
    if A.dim >= 4 and not cert.proper:
        raise ImproperSimilitude(
            "isotope transport needs a proper similitude in dim >= 4"
        )
    tau = None if A.is_exact else A.field.tol.tau_residual
    if not maps_equal(triple.phi, phi, tol=tau):
        raise TrialityMismatch("triple does not belong to phi")
    vres = verify_triality(triple)
    if A.is_exact:
        if vres != 0:
            raise TrialityMismatch("triality triple fails verification")
    elif float(vres) > A.field.tol.tau_residual:
        raise TrialityMismatch("triality triple fails verification")
    phi_inv = phi.inverse()
    gamma = triple.phi1 @ iso.alpha @ phi_inv
    delta = triple.phi2 @ iso.beta @ phi_inv
    target = Isotope(A, gamma, delta)

    worst = A.field.zero
    basis = [A.basis_element(i) for i in range(A.dim)]
    phi_img = [phi.apply(e) for e in basis]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = phi.apply(iso.mul(basis[i], basis[j]))
            rhs = target.mul(phi_img[i], phi_img[j])
            diff = lhs - rhs
            if A.is_exact:
                worst = max(worst, max(abs(v) for v in diff.coords))
            else:
                worst = max(worst, float(np.abs(diff.coords).max()))
    if A.is_exact:
        if worst != 0:
            raise TrialityMismatch("transport self-check failed")
    else:
        scale = max(1.0, phi.max_abs() * iso.alpha.max_abs() * iso.beta.max_abs())
        if worst > A.field.tol.tau_residual * scale:
            raise TrialityMismatch("transport self-check failed")
    return TransportResult(gamma, delta, phi, triple, worst)


# -- literal equality -------------------------------------------------------------


def same_isotope(iso1, iso2):
    """Witness w in N(A)* with alpha1 = R_w^-1 alpha2, beta1 = L_w beta2,
    meaning the two isotopes carry literally the same multiplication.
    Raises Distinct naming the first failing check."""
    A = iso1.algebra
    if iso2.algebra is not A:
        raise AlgebraMismatch("isotopes live on different algebras")
    m = iso2.alpha @ iso1.alpha.inverse()
    w = m.apply(A.one())
    if not maps_equal(m, A.right_matrix(w)):
        raise Distinct("alpha ratio is not a right multiplication")
    if not maps_equal(iso1.beta @ iso2.beta.inverse(), A.left_matrix(w)):
        raise Distinct("beta ratio is not the matching left multiplication")
    if not A.in_nucleus(w):
        raise Distinct("witness lies outside the nucleus")
    if A.field.is_zero(A.norm(w)):
        raise Distinct("witness has zero norm")
    for i in range(A.dim):
        ei = A.basis_element(i)
        for j in range(A.dim):
            ej = A.basis_element(j)
            if iso1.mul(ei, ej) != iso2.mul(ei, ej):
                raise Distinct("multiplications differ on a basis pair")
    return w


# -- double sign -------------------------------------------------------------------


@dataclass(frozen=True)
class DoubleSign:
    """Pair of determinant power-cosets; equal iff both components equal."""

    left: PowerCoset
    right: PowerCoset


def _coset_exponent(algebra):
    # Exact backend: determinants change under the structure-group action by
    # multiplier powers mu^(l/2) and nuclear factors n(w)^(l/2), all of which
    # are (l/2)-th powers, so the invariant coset group is k*/k*^(l/2) for
    # l in {4, 8}.  Over R every such factor is positive and the sign survives
    # for any even exponent, so l itself is used there.
    l = algebra.dim
    if algebra.is_exact and l in (4, 8):
        return l // 2
    return l


def double_sign(iso):
    """Isomorphism invariant (coset of det alpha, coset of det beta)."""
    A = iso.algebra
    if A.dim < 2:
        raise Dim1("double sign needs dim >= 2")
    if A.is_split_binary:
        raise SplitBinaryAlgebra(
            "double sign is undefined for the split binary algebra k x k"
        )
    exponent = _coset_exponent(A)
    return DoubleSign(
        coset_rep(A.field, iso.alpha.determinant(), exponent),
        coset_rep(A.field, iso.beta.determinant(), exponent),
    )


# -- composition detection ------------------------------------------------------------


def is_composition(iso):
    """Certify that the isotope is a composition algebra: both maps must be
    similitudes; the composition norm is mu(alpha) mu(beta) n_A.  Returns the
    two certificates, self-checking multiplicativity on random pairs."""
    A = iso.algebra
    try:
        cert_a = similitude_check(iso.alpha)
    except Exception as exc:
        raise NotComposition(f"alpha is not a similitude: {exc}") from exc
    try:
        cert_b = similitude_check(iso.beta)
    except Exception as exc:
        raise NotComposition(f"beta is not a similitude: {exc}") from exc
    mu = A.field.mul(cert_a.multiplier, cert_b.multiplier)
    rng = random.Random(54321) if A.is_exact else np.random.default_rng(54321)
    for _ in range(8):
        x = A.random_element(rng)
        y = A.random_element(rng)
        lhs = A.norm(iso.mul(x, y))
        rhs = A.field.mul(mu, A.field.mul(A.norm(x), A.norm(y)))
        if A.is_exact:
            if lhs != rhs:
                raise NotComposition("norm multiplicativity self-check failed")
        else:
            scale = max(1.0, abs(lhs), abs(rhs))
            if abs(lhs - rhs) > A.field.tol.tau_residual * scale:
                raise NotComposition("norm multiplicativity self-check failed")
    return cert_a, cert_b


def composition_norm_scale(cert_a, cert_b):
    """Multiplier of the composition norm relative to n_A."""
    field = cert_a.phi.algebra.field
    return field.mul(cert_a.multiplier, cert_b.multiplier)
