"""Dense linear maps on a Hurwitz algebra, similitude certification, and
polar factorization over Euclidean algebras.

Exact backend: fraction-free (Bareiss) determinants and exact elimination
for inverses and nullspaces.  Approx backend: numpy LU for determinant,
inverse and solve; a hand-rolled cyclic Jacobi (in the kernel module, so
the compiled path is used when available) for symmetric eigenproblems --
dimensions never exceed 8, robustness and determinism beat speed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import AlgElement, require_same_backend
from .errors import (
    AlgebraMismatch,
    BackendMismatch,
    NotEuclidean,
    NotSimilitude,
    NotSymmetric,
    Singular,
    WrongDimension,
)


class LinMap:
    """An l x l matrix over the algebra's scalar backend, acting on
    coordinate columns.  Rows are stored row-major; the determinant is
    cached after first computation."""

    __slots__ = ("algebra", "data", "_det")

    def __init__(self, algebra, rows):
        self.algebra = algebra
        l = algebra.dim
        if algebra.is_exact:
            f = algebra.field
            data = tuple(tuple(f.coerce(v) for v in row) for row in rows)
            if len(data) != l or any(len(r) != l for r in data):
                raise AlgebraMismatch(f"expected a {l}x{l} matrix")
        else:
            data = np.asarray(rows, dtype=float)
            if data.shape != (l, l):
                raise AlgebraMismatch(f"expected a {l}x{l} matrix")
            data = data.copy()
            data.setflags(write=False)
        self.data = data
        self._det = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def identity(cls, algebra):
        f = algebra.field
        l = algebra.dim
        return cls(
            algebra,
            [[f.one if i == j else f.zero for j in range(l)] for i in range(l)],
        )

    @classmethod
    def scalar(cls, algebra, value):
        f = algebra.field
        v = f.coerce(value)
        l = algebra.dim
        return cls(
            algebra,
            [[v if i == j else f.zero for j in range(l)] for i in range(l)],
        )

    # -- arithmetic ----------------------------------------------------------

    def _same(self, other):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch("maps act on different algebras")

    def __matmul__(self, other):
        self._same(other)
        if self.algebra.is_exact:
            l = self.algebra.dim
            a, b = self.data, other.data
            rows = [
                [sum(a[i][k] * b[k][j] for k in range(l)) for j in range(l)]
                for i in range(l)
            ]
            return LinMap(self.algebra, rows)
        return LinMap(self.algebra, self.data @ other.data)

    def __add__(self, other):
        self._same(other)
        if self.algebra.is_exact:
            rows = [
                [x + y for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ]
            return LinMap(self.algebra, rows)
        return LinMap(self.algebra, self.data + other.data)

    def __sub__(self, other):
        self._same(other)
        if self.algebra.is_exact:
            rows = [
                [x - y for x, y in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ]
            return LinMap(self.algebra, rows)
        return LinMap(self.algebra, self.data - other.data)

    def __neg__(self):
        return self.scale_by(-1)

    def scale_by(self, scalar):
        f = self.algebra.field
        s = f.coerce(scalar)
        if self.algebra.is_exact:
            return LinMap(self.algebra, [[s * v for v in row] for row in self.data])
        return LinMap(self.algebra, s * self.data)

    def apply(self, x):
        if not isinstance(x, AlgElement) or x.algebra is not self.algebra:
            raise AlgebraMismatch("map applied to element of another algebra")
        if self.algebra.is_exact:
            coords = [
                sum(row[j] * x.coords[j] for j in range(self.algebra.dim))
                for row in self.data
            ]
            return AlgElement(self.algebra, coords)
        return AlgElement(self.algebra, self.data @ x.coords)

    def __call__(self, x):
        return self.apply(x)

    def column(self, j):
        return AlgElement(self.algebra, [row[j] for row in self.data])

    def transpose(self):
        l = self.algebra.dim
        if self.algebra.is_exact:
            return LinMap(
                self.algebra,
                [[self.data[j][i] for j in range(l)] for i in range(l)],
            )
        return LinMap(self.algebra, self.data.T)

    def norm_adjoint(self):
        """Adjoint with respect to the norm bilinear form: D^-1 M^T D with
        D the Pfister diagonal.  Coincides with the plain transpose when
        all diagonal weights are equal (e.g. parameters (-1, ..., -1))."""
        A = self.algebra
        l = A.dim
        d = A.norm_diag
        f = A.field
        if A.is_exact:
            return LinMap(
                A,
                [
                    [self.data[j][i] * d[j] / d[i] for j in range(l)]
                    for i in range(l)
                ],
            )
        df = A.norm_diag_f
        return LinMap(A, (self.data.T * df[None, :]) / df[:, None])

    def determinant(self):
        if self._det is None:
            if self.algebra.is_exact:
                self._det = _bareiss_det(self.data)
            else:
                self._det = float(np.linalg.det(self.data))
        return self._det

    def is_invertible(self):
        det = self.determinant()
        if self.algebra.is_exact:
            return det != 0
        return abs(det) > self.algebra.field.tol.tau_eq

    def inverse(self):
        if self.algebra.is_exact:
            inv = _exact_inverse(self.data)
            if inv is None:
                raise Singular("matrix is singular")
            return LinMap(self.algebra, inv)
        if not self.is_invertible():
            raise Singular("matrix is singular within tolerance")
        return LinMap(self.algebra, np.linalg.inv(self.data))

    def max_abs(self):
        if self.algebra.is_exact:
            return max(abs(v) for row in self.data for v in row)
        return float(np.abs(self.data).max())

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        if self.algebra is not other.algebra:
            return False
        return maps_equal(self, other)

    __hash__ = None

    def __repr__(self):
        f = self.algebra.field
        rows = "; ".join(
            " ".join(f.format(v) for v in row) for row in self.data
        )
        return f"LinMap[{rows}]"


def maps_equal(m1, m2, tol=None):
    """Entrywise equality: literal (exact) or relative tolerance (approx)."""
    if m1.algebra.is_exact:
        return m1.data == m2.data
    scale = max(1.0, m1.max_abs(), m2.max_abs())
    tau = tol if tol is not None else m1.algebra.field.tol.tau_eq
    return bool(np.abs(m1.data - m2.data).max() <= tau * scale)


# -- exact elimination -------------------------------------------------------


def _bareiss_det(rows):
    """Fraction-free Gaussian elimination determinant."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return rows[0][0] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = m[i][k] * 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _exact_inverse(rows):
    """Gauss-Jordan inverse over Q; None when singular."""
    n = len(rows)
    m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [v - factor * w for v, w in zip(m[i], m[col])]
    return [r[n:] for r in m]


def exact_nullspace(rows, ncols):
    """Basis of the nullspace of a (possibly rectangular) exact matrix."""
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        m[r] = [v / pv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [v - factor * w for v, w in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    from fractions import Fraction

    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -m[row_idx][fc]
        basis.append(vec)
    return basis


# -- similitudes --------------------------------------------------------------


@dataclass
class SimilitudeCert:
    """Certificate that phi is a similitude: phi^T B phi = multiplier * B,
    with properness decided by the sign of det(phi) relative to
    multiplier^(l/2)."""

    phi: LinMap
    multiplier: object
    proper: bool
    residual: object


def _gram_conjugate(phi):
    """phi^T B phi with B = diag(2 d_i)."""
    A = phi.algebra
    l = A.dim
    if A.is_exact:
        d = A.norm_diag
        data = phi.data
        return [
            [
                sum(2 * d[k] * data[k][i] * data[k][j] for k in range(l))
                for j in range(l)
            ]
            for i in range(l)
        ]
    b = 2.0 * A.norm_diag_f
    return phi.data.T @ (b[:, None] * phi.data)


def similitude_check(phi):
    """Certify phi as a similitude of (A, n) or raise NotSimilitude.

    The candidate multiplier is read off the Gram conjugate G = phi^T B phi
    (first nonzero diagonal ratio for the exact backend, least squares over
    the diagonal for approx), then G = mu B is verified entrywise.
    """
    A = phi.algebra
    l = A.dim
    if not phi.is_invertible():
        raise Singular("similitude candidate is singular")
    G = _gram_conjugate(phi)
    f = A.field
    if A.is_exact:
        d = A.norm_diag
        mu = None
        for i in range(l):
            if G[i][i] != 0:
                mu = G[i][i] / (2 * d[i])
                break
        if mu is None or mu == 0:
            raise NotSimilitude("gram conjugate has zero diagonal")
        dev = f.zero
        for i in range(l):
            for j in range(l):
                target = 2 * d[i] * mu if i == j else f.zero
                dev = max(dev, abs(G[i][j] - target))
        if dev != 0:
            raise NotSimilitude("gram matrix is not a multiple of B", deviation=dev)
        residual = f.zero
    else:
        b = 2.0 * A.norm_diag_f
        gd = np.diagonal(G)
        mu = float(np.dot(gd, b) / np.dot(b, b))
        if abs(mu) <= f.tol.tau_eq:
            raise NotSimilitude("multiplier vanishes within tolerance")
        dev = float(np.abs(G - np.diag(mu * b)).max())
        scale = max(1.0, float(np.abs(G).max()))
        if dev > f.tol.tau_residual * scale:
            raise NotSimilitude(
                "gram matrix is not a multiple of B", deviation=dev / scale
            )
        residual = dev
    det = phi.determinant()
    if l == 1:
        proper = det > 0
    else:
        target = mu ** (l // 2)
        if A.is_exact:
            if det == target:
                proper = True
            elif det == -target:
                proper = False
            else:
                raise NotSimilitude("determinant is not +-multiplier^(l/2)")
        else:
            proper = (det > 0) if target > 0 else (det < 0)
    return SimilitudeCert(phi, mu, proper, residual)


# -- polar factorization -------------------------------------------------------


@dataclass
class PolarFactors:
    """alpha = zeta . delta . lam with zeta special orthogonal, delta
    symmetric positive definite (both with respect to the Euclidean norm
    inner product), lam in {identity, kappa}."""

    zeta: LinMap
    delta: LinMap
    lam: LinMap
    lam_sign: int
    residual: float


def symmetric_eigen(S):
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric
    map over the approx backend, via cyclic Jacobi."""
    A = S.algebra
    if A.is_exact:
        raise BackendMismatch("symmetric eigensolve requires the approx backend")
    data = S.data
    scale = max(1.0, float(np.abs(data).max()))
    if float(np.abs(data - data.T).max()) > A.field.tol.tau_residual * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    sym = 0.5 * (data + data.T)
    vals, vecs = _kernels.jacobi_eigh(sym)
    return vals, LinMap(A, vecs)


def polar_decompose(alpha):
    """Unique factorization alpha = zeta delta lam over a Euclidean algebra.

    lam is kappa exactly when det(alpha) < 0; delta is the square root of
    adj(alpha') alpha' computed from a full Jacobi eigendecomposition in
    coordinates where the norm form is the standard dot product.
    """
    A = alpha.algebra
    if A.is_exact:
        raise NotEuclidean(
            "polar factorization needs the approx backend; convert explicitly"
        )
    if not A.is_euclidean:
        raise NotEuclidean("polar factorization needs a Euclidean norm form")
    if A.dim < 2:
        raise WrongDimension("polar factorization is defined for dim >= 2")
    det = alpha.determinant()
    if abs(det) <= A.field.tol.tau_eq:
        raise Singular("polar factorization of a singular map")

    w = np.sqrt(A.norm_diag_f)
    M = (alpha.data * w[:, None]) / w[None, :]
    lam_sign = 1 if det > 0 else -1
    if lam_sign < 0:
        K = -np.eye(A.dim)
        K[0, 0] = 1.0
        Mp = M @ K
    else:
        Mp = M
    S = Mp.T @ Mp
    vals, V = _kernels.jacobi_eigh(0.5 * (S + S.T))
    if vals[-1] <= 0.0:
        raise Singular("polar factorization lost positivity")
    roots = np.sqrt(vals)
    sq = (V * roots) @ V.T
    sq_inv = (V / roots) @ V.T
    Z = Mp @ sq_inv

    delta = LinMap(A, (sq / w[:, None]) * w[None, :])
    zeta = LinMap(A, (Z / w[:, None]) * w[None, :])
    lam = A.kappa() if lam_sign < 0 else LinMap.identity(A)
    recomposed = (zeta @ delta @ lam).data
    residual = float(
        np.abs(recomposed - alpha.data).max() / max(1.0, alpha.max_abs())
    )
    return PolarFactors(zeta, delta, lam, lam_sign, residual)


def is_special_orthogonal(zeta, tol=None):
    """zeta* zeta = I and det = 1 in the norm inner product."""
    A = zeta.algebra
    if A.is_exact or not A.is_euclidean:
        return False
    tau = tol if tol is not None else A.field.tol.tau_residual
    gram = (zeta.norm_adjoint() @ zeta).data
    if float(np.abs(gram - np.eye(A.dim)).max()) > tau:
        return False
    return abs(zeta.determinant() - 1.0) <= tau * 10


# -- random generation --------------------------------------------------------


def random_invertible(algebra, seed):
    """Random invertible map: integer entries in [-5, 5] (exact) or standard
    normals (approx), rejecting singular draws."""
    if isinstance(seed, int):
        rng = random.Random(seed) if algebra.is_exact else np.random.default_rng(seed)
    else:
        rng = seed
    l = algebra.dim
    while True:
        if algebra.is_exact:
            rows = [[rng.randint(-5, 5) for _ in range(l)] for _ in range(l)]
        else:
            rows = rng.standard_normal((l, l))
        m = LinMap(algebra, rows)
        if m.is_invertible():
            return m


def random_proper_similitude(algebra, seed, allow_kappa=True):
    """Random element of the structure group: L_a R_b for invertible a, b
    (proper for dim >= 4); for dim <= 2 a left multiplication, optionally
    composed with kappa (improper but still admissible there)."""
    if isinstance(seed, int):
        rng = random.Random(seed) if algebra.is_exact else np.random.default_rng(seed)
    else:
        rng = seed
    a = algebra.random_element(rng, invertible=True)
    if algebra.dim >= 4:
        b = algebra.random_element(rng, invertible=True)
        return algebra.left_matrix(a) @ algebra.right_matrix(b)
    phi = algebra.left_matrix(a)
    if allow_kappa and algebra.dim == 2:
        flip = rng.randint(0, 1) if algebra.is_exact else int(rng.integers(0, 2))
        if flip:
            phi = phi @ algebra.kappa()
    return phi


def require_same_algebra(*maps):
    require_same_backend(*(m.algebra for m in maps))
    first = maps[0].algebra
    for m in maps[1:]:
        if m.algebra is not first:
            raise AlgebraMismatch("maps act on different algebras")
