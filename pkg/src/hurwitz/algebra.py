"""Cayley-Dickson Hurwitz algebras of dimension 1, 2, 4 and 8.

Doubling convention (fixed across the whole library):

    (a, b)(c, d) = (ac + mu * conj(d) b,  da + b conj(c)),
    conj((a, b)) = (conj(a), -b),
    n((a, b))    = n(a) - mu * n(b).

With parameters (-1, -1) this reproduces Hamilton's table with
e1 e2 = e3 and e1^2 = -e0.  In the resulting basis every product of two
basis vectors is a scalar multiple of a single basis vector:
e_i e_j = c[i,j] e_{i XOR j}, so an algebra is stored as the l x l
coefficient matrix c together with the diagonal d of its norm form
n(x) = sum d_i x_i^2 (the Pfister diagonal; the Gram matrix of the
associated bilinear form is diag(2 d_i)).
"""

from __future__ import annotations

import random

import numpy as np

from . import _kernels
from .errors import (
    AlgebraMismatch,
    BackendMismatch,
    NotInvertible,
    ZeroParameter,
)
from .scalars import APPROX, EXACT, ToleranceContext, make_field

_ALLOWED_M = (0, 1, 2, 3)


def _double_coef(coef, conj_signs, mu):
    """One Cayley-Dickson doubling step on the coefficient matrix."""
    h = len(coef)
    l = 2 * h
    new = [[None] * l for _ in range(l)]
    for i in range(h):
        for j in range(h):
            c = coef[i][j]
            cc = coef[j][i]
            # (e_i, 0)(e_j, 0) = (e_i e_j, 0)
            new[i][j] = c
            # (e_i, 0)(0, e_j) = (0, e_j e_i)
            new[i][h + j] = cc
            # (0, e_i)(e_j, 0) = (0, e_i conj(e_j))
            new[h + i][j] = c * conj_signs[j]
            # (0, e_i)(0, e_j) = (mu conj(e_j) e_i, 0)
            new[h + i][h + j] = mu * cc * conj_signs[j]
    return new


class HurwitzAlgebra:
    """A Hurwitz algebra over Q (exact) or R (approx)."""

    def __init__(self, params, backend=EXACT, tol=None):
        self.field = make_field(backend, tol)
        f = self.field
        params = tuple(f.coerce(p) for p in params)
        if len(params) not in _ALLOWED_M:
            raise ZeroParameter(
                f"need 0..3 doubling parameters, got {len(params)}"
            )
        for p in params:
            if f.is_zero(p):
                raise ZeroParameter("doubling parameters must be nonzero")
        self.params = params
        self.dim = 2 ** len(params)

        coef = [[f.one]]
        diag = [f.one]
        for mu in params:
            h = len(coef)
            conj_signs = [f.one] + [f.neg(f.one)] * (h - 1)
            coef = _double_coef(coef, conj_signs, mu)
            diag = diag + [f.neg(f.mul(mu, d)) for d in diag]
        self._coef = tuple(tuple(row) for row in coef)
        self.norm_diag = tuple(diag)

        if f.is_exact:
            self._verify_construction()
            self.coef_f = None
            self.norm_diag_f = None
        else:
            self.coef_f = np.array(self._coef, dtype=float)
            self.norm_diag_f = np.array(self.norm_diag, dtype=float)

    # -- bookkeeping --------------------------------------------------------

    def _verify_construction(self):
        l = self.dim
        c = self._coef
        one = self.field.one
        for j in range(l):
            assert c[0][j] == one and c[j][0] == one, "e0 must be the identity"
        d = self.norm_diag
        for i in range(l):
            for j in range(l):
                # multiplicativity on the basis: n(e_i e_j) = n(e_i) n(e_j)
                assert c[i][j] ** 2 * d[i ^ j] == d[i] * d[j]

    @property
    def backend(self):
        return self.field.tag

    @property
    def is_exact(self):
        return self.field.is_exact

    @property
    def is_euclidean(self):
        """True iff the norm form is positive definite over R."""
        return not self.is_exact and all(p < 0 for p in self.params)

    @property
    def is_split_binary(self):
        """Dimension 2 with isotropic norm, i.e. the algebra k x k."""
        if self.dim != 2:
            return False
        mu = self.params[0]
        if self.is_exact:
            return mu > 0 and self.field.sqrt(mu) is not None
        return mu > 0

    def structure_coefficient(self, i, j):
        return self._coef[i][j]

    def table_entry(self, i, j):
        """The basis product e_i e_j as an element."""
        coords = [self.field.zero] * self.dim
        coords[i ^ j] = self._coef[i][j]
        return self.element(coords)

    def __repr__(self):
        ps = ",".join(self.field.format(p) for p in self.params)
        return f"HurwitzAlgebra(dim={self.dim}, params=({ps}), {self.backend})"

    # -- elements -----------------------------------------------------------

    def element(self, coords):
        return AlgElement(self, coords)

    def basis_element(self, i):
        coords = [self.field.zero] * self.dim
        coords[i] = self.field.one
        return self.element(coords)

    def zero(self):
        return self.element([self.field.zero] * self.dim)

    def one(self):
        return self.basis_element(0)

    def random_element(self, rng, invertible=False, unit=False):
        """Random element: integer coords in [-5, 5] (exact) or standard
        normals (approx); optionally rejected until invertible, optionally
        normalized to unit norm (approx Euclidean only)."""
        if isinstance(rng, int):
            rng = (
                random.Random(rng) if self.is_exact else np.random.default_rng(rng)
            )
        while True:
            if self.is_exact:
                coords = [rng.randint(-5, 5) for _ in range(self.dim)]
                x = self.element(coords)
            else:
                x = self.element(rng.standard_normal(self.dim))
            if invertible or unit:
                n = self.norm(x)
                if self.field.is_zero(n):
                    continue
                if unit:
                    if n <= 0:
                        continue
                    x = x.scale(1.0 / np.sqrt(n))
            return x

    def _check_member(self, *elements):
        for x in elements:
            if x.algebra is not self:
                raise AlgebraMismatch("element belongs to a different algebra")

    # -- core operations ------------------------------------------------------

    def multiply(self, x, y):
        self._check_member(x, y)
        l = self.dim
        if self.is_exact:
            out = [self.field.zero] * l
            c = self._coef
            xc, yc = x.coords, y.coords
            for i in range(l):
                xi = xc[i]
                if not xi:
                    continue
                ci = c[i]
                for j in range(l):
                    yj = yc[j]
                    if yj:
                        out[i ^ j] += ci[j] * xi * yj
            return self.element(out)
        return self.element(_kernels.mul(self.coef_f, x.coords, y.coords))

    def conjugate(self, x):
        self._check_member(x)
        f = self.field
        coords = [x.coords[0]] + [f.neg(v) for v in x.coords[1:]]
        return self.element(coords)

    def norm(self, x):
        self._check_member(x)
        if self.is_exact:
            return sum(d * v * v for d, v in zip(self.norm_diag, x.coords))
        return float(np.dot(self.norm_diag_f, x.coords * x.coords))

    def bilinear(self, x, y):
        self._check_member(x, y)
        if self.is_exact:
            return sum(
                2 * d * a * b for d, a, b in zip(self.norm_diag, x.coords, y.coords)
            )
        return float(2.0 * np.dot(self.norm_diag_f, x.coords * y.coords))

    def inverse(self, x):
        self._check_member(x)
        n = self.norm(x)
        if self.is_exact:
            if n == 0:
                raise NotInvertible("element has zero norm")
        else:
            scale = float(np.dot(x.coords, x.coords))
            if abs(n) <= self.field.tol.tau_eq * max(scale, 1e-300):
                raise NotInvertible("element norm vanishes within tolerance")
        return self.conjugate(x).scale(self.field.inv(n))

    def left_matrix(self, a):
        """Matrix of x -> a x (column j is the coordinates of a e_j)."""
        self._check_member(a)
        from .linmaps import LinMap

        l = self.dim
        if self.is_exact:
            rows = [[self.field.zero] * l for _ in range(l)]
            for i in range(l):
                ai = a.coords[i]
                if not ai:
                    continue
                for j in range(l):
                    rows[i ^ j][j] = self._coef[i][j] * ai
            return LinMap(self, rows)
        return LinMap(self, _kernels.left_matrix(self.coef_f, a.coords))

    def right_matrix(self, a):
        """Matrix of x -> x a."""
        self._check_member(a)
        from .linmaps import LinMap

        l = self.dim
        if self.is_exact:
            rows = [[self.field.zero] * l for _ in range(l)]
            for i in range(l):
                for j in range(l):
                    aj = a.coords[j]
                    if aj:
                        rows[i ^ j][i] = self._coef[i][j] * aj
            return LinMap(self, rows)
        return LinMap(self, _kernels.right_matrix(self.coef_f, a.coords))

    def kappa(self):
        """The canonical involution as a linear map, diag(1, -1, ..., -1)."""
        from .linmaps import LinMap

        f = self.field
        l = self.dim
        if self.is_exact:
            rows = [
                [f.one if (i == j == 0) else (f.neg(f.one) if i == j else f.zero)
                 for j in range(l)]
                for i in range(l)
            ]
            return LinMap(self, rows)
        m = -np.eye(l)
        m[0, 0] = 1.0
        return LinMap(self, m)

    def in_nucleus(self, w):
        """Whether (x w) y = x (w y) for all x, y (checked on the basis)."""
        self._check_member(w)
        if self.dim <= 4:
            return True
        basis = [self.basis_element(i) for i in range(self.dim)]
        right_all = [self.multiply(w, ej) for ej in basis]
        for i, ei in enumerate(basis):
            left = self.multiply(ei, w)
            for j, ej in enumerate(basis):
                if self.multiply(left, ej) != self.multiply(ei, right_all[j]):
                    return False
        return True


def cd_construct(params, backend=EXACT, tol=None):
    """Build the Cayley-Dickson algebra of dimension 2^len(params)."""
    return HurwitzAlgebra(params, backend, tol)


class AlgElement:
    """An element of a HurwitzAlgebra: a coordinate vector in the basis
    e_0 .. e_{l-1}, e_0 being the identity."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        f = algebra.field
        if algebra.is_exact:
            self.coords = tuple(f.coerce(v) for v in coords)
        else:
            arr = np.asarray(coords, dtype=float)
            arr.setflags(write=False)
            self.coords = arr
        if len(self.coords) != algebra.dim:
            raise AlgebraMismatch(
                f"expected {algebra.dim} coordinates, got {len(self.coords)}"
            )
        self.algebra = algebra

    def __add__(self, other):
        self.algebra._check_member(other)
        if self.algebra.is_exact:
            return AlgElement(
                self.algebra, [a + b for a, b in zip(self.coords, other.coords)]
            )
        return AlgElement(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        self.algebra._check_member(other)
        if self.algebra.is_exact:
            return AlgElement(
                self.algebra, [a - b for a, b in zip(self.coords, other.coords)]
            )
        return AlgElement(self.algebra, self.coords - other.coords)

    def __neg__(self):
        if self.algebra.is_exact:
            return AlgElement(self.algebra, [-a for a in self.coords])
        return AlgElement(self.algebra, -self.coords)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def scale(self, scalar):
        s = self.algebra.field.coerce(scalar)
        if self.algebra.is_exact:
            return AlgElement(self.algebra, [s * a for a in self.coords])
        return AlgElement(self.algebra, s * self.coords)

    def conjugate(self):
        return self.algebra.conjugate(self)

    def norm(self):
        return self.algebra.norm(self)

    def inverse(self):
        return self.algebra.inverse(self)

    def is_zero(self):
        f = self.algebra.field
        return all(f.is_zero(v) for v in self.coords)

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        if self.algebra is not other.algebra:
            return False
        f = self.algebra.field
        if self.algebra.is_exact:
            return self.coords == other.coords
        scale = max(
            1.0,
            float(np.abs(self.coords).max()),
            float(np.abs(other.coords).max()),
        )
        return bool(
            np.all(np.abs(self.coords - other.coords) <= f.tol.tau_eq * scale)
        )

    __hash__ = None

    def __repr__(self):
        f = self.algebra.field
        return "(" + ", ".join(f.format(v) for v in self.coords) + ")"


def require_same_backend(*algebras):
    tags = {a.backend for a in algebras}
    if len(tags) > 1:
        raise BackendMismatch("operation mixes exact and approx algebras")


def euclidean_quaternions(tol: ToleranceContext | None = None):
    """Hamilton's quaternions over R."""
    return HurwitzAlgebra((-1, -1), APPROX, tol)


def euclidean_octonions(tol: ToleranceContext | None = None):
    return HurwitzAlgebra((-1, -1, -1), APPROX, tol)


def rational_quaternions():
    """Hamilton's quaternions over Q (exact backend)."""
    return HurwitzAlgebra((-1, -1), EXACT)


def rational_octonions():
    return HurwitzAlgebra((-1, -1, -1), EXACT)
