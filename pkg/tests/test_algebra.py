import random
from fractions import Fraction

import numpy as np
import pytest

from hurwitz.algebra import (
    HurwitzAlgebra,
    cd_construct,
    euclidean_quaternions,
    rational_octonions,
    rational_quaternions,
)
from hurwitz.errors import AlgebraMismatch, NotInvertible, ZeroParameter

from _oracles import basis_vec, cd_mul, pfister_diag

# The classical Hamilton table, frozen: entry [i][j] is the coefficient of
# e_{i XOR j} in e_i e_j (worked out by hand from the doubling rule).
HAMILTON_COEF = [
    [1, 1, 1, 1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 1, -1, -1],
]


def test_quaternion_table_frozen():
    H = rational_quaternions()
    for i in range(4):
        for j in range(4):
            prod = H.multiply(H.basis_element(i), H.basis_element(j))
            expected = [Fraction(0)] * 4
            expected[i ^ j] = Fraction(HAMILTON_COEF[i][j])
            assert list(prod.coords) == expected


@pytest.mark.parametrize(
    "params",
    [(), (-1,), (2,), (-1, -1), (1, -1), (-1, -1, -1), (1, -1, 2)],
)
def test_table_matches_recursive_oracle(params):
    A = cd_construct(params)
    fparams = [Fraction(p) for p in params]
    l = A.dim
    for i in range(l):
        for j in range(l):
            got = A.multiply(A.basis_element(i), A.basis_element(j))
            want = cd_mul(fparams, basis_vec(l, i), basis_vec(l, j))
            assert list(got.coords) == want


def test_random_products_match_oracle():
    A = rational_octonions()
    rng = random.Random(1)
    for _ in range(25):
        x = A.random_element(rng)
        y = A.random_element(rng)
        want = cd_mul([Fraction(-1)] * 3, list(x.coords), list(y.coords))
        assert list(A.multiply(x, y).coords) == want


def test_dim1_base_case():
    A = cd_construct([])
    assert A.dim == 1
    x = A.element([Fraction(3)])
    assert A.multiply(x, x).coords == (Fraction(9),)
    assert A.norm(x) == 9


def test_octonion_basis_products_unit():
    O = rational_octonions()
    assert list(O.norm_diag) == [Fraction(1)] * 8
    for i in range(8):
        for j in range(8):
            c = O.structure_coefficient(i, j)
            assert c in (Fraction(1), Fraction(-1))
    # nonassociativity witness: (e1 e2) e4 = -e1 (e2 e4)
    e = [O.basis_element(k) for k in range(8)]
    lhs = O.multiply(O.multiply(e[1], e[2]), e[4])
    rhs = O.multiply(e[1], O.multiply(e[2], e[4]))
    assert lhs == -rhs and not lhs.is_zero()


def test_zero_parameter_rejected():
    with pytest.raises(ZeroParameter):
        cd_construct([Fraction(0), Fraction(-1)])
    with pytest.raises(ZeroParameter):
        cd_construct([-1, -1, -1, -1])


def test_conjugation_examples():
    H = rational_quaternions()
    e0, e1 = H.basis_element(0), H.basis_element(1)
    assert H.conjugate(e0) == e0
    assert H.conjugate(e1) == -e1
    x = e0 + e1
    xbar = H.conjugate(x)
    assert xbar == e0 - e1
    assert H.multiply(x, xbar) == e0.scale(H.norm(x))
    assert H.norm(x) == 2


def test_norm_and_bilinear():
    HE = euclidean_quaternions()
    x = HE.basis_element(1) + HE.basis_element(2)
    assert abs(HE.norm(x) - 2.0) < 1e-15
    for i in range(4):
        for j in range(4):
            b = HE.bilinear(HE.basis_element(i), HE.basis_element(j))
            assert abs(b - (2.0 if i == j else 0.0)) < 1e-15


def test_split_norm_is_pfister():
    A = cd_construct([1, -1])
    d = pfister_diag([Fraction(1), Fraction(-1)])
    assert list(A.norm_diag) == d
    assert A.norm(A.basis_element(1)) == -1


def test_inverse_examples():
    H = rational_quaternions()
    e0, e1 = H.basis_element(0), H.basis_element(1)
    assert H.inverse(e1) == -e1
    x = e0 + e1
    inv = H.inverse(x)
    assert inv == (e0 - e1).scale(Fraction(1, 2))
    assert H.multiply(x, inv) == e0
    assert H.multiply(inv, x) == e0
    S = cd_construct([1, -1])
    with pytest.raises(NotInvertible):
        S.inverse(S.basis_element(0) + S.basis_element(1))


def test_left_right_matrices():
    H = rational_quaternions()
    e = [H.basis_element(i) for i in range(4)]
    from hurwitz.linmaps import LinMap

    assert H.left_matrix(e[0]) == LinMap.identity(H)
    # right_matrix(e1) applied to e2 is e2 e1 = -e3
    assert H.right_matrix(e[1]).apply(e[2]) == -e[3]
    rng = random.Random(2)
    for _ in range(20):
        a = H.random_element(rng, invertible=True)
        det = H.left_matrix(a).determinant()
        assert det == H.norm(a) ** 2
        assert H.right_matrix(a).determinant() == H.norm(a) ** 2


def test_left_inverse_matrix_property():
    O = rational_octonions()
    from hurwitz.linmaps import LinMap

    rng = random.Random(3)
    ident = LinMap.identity(O)
    for _ in range(20):
        x = O.random_element(rng, invertible=True)
        assert O.left_matrix(x) @ O.left_matrix(O.inverse(x)) == ident


def test_nucleus():
    H = rational_quaternions()
    rng = random.Random(4)
    assert H.in_nucleus(H.random_element(rng))
    O = rational_octonions()
    assert not O.in_nucleus(O.basis_element(1))
    assert O.in_nucleus(O.basis_element(0).scale(3))
    assert O.in_nucleus(O.zero())


def test_algebra_mismatch():
    H1 = rational_quaternions()
    H2 = rational_quaternions()
    with pytest.raises(AlgebraMismatch):
        H1.multiply(H1.one(), H2.one())


def test_euclidean_tag():
    assert euclidean_quaternions().is_euclidean
    assert not HurwitzAlgebra((-1, 2), "approx").is_euclidean
    assert not rational_quaternions().is_euclidean  # exact backend


def test_split_binary_detection():
    assert HurwitzAlgebra((1,), "exact").is_split_binary
    assert not HurwitzAlgebra((2,), "exact").is_split_binary  # 2 not a square in Q
    assert HurwitzAlgebra((2,), "approx").is_split_binary
    assert not HurwitzAlgebra((-1,), "approx").is_split_binary
    assert not rational_quaternions().is_split_binary


@pytest.mark.parametrize("params", [(-1,), (-1, -1), (1, -1), (-1, -1, -1), (1, -1, 2)])
def test_norm_multiplicative_random(params):
    A = cd_construct(params)
    rng = random.Random(5)
    for _ in range(200):
        x = A.random_element(rng)
        y = A.random_element(rng)
        assert A.norm(A.multiply(x, y)) == A.norm(x) * A.norm(y)


def test_alternativity_and_moufang():
    O = rational_octonions()
    rng = random.Random(6)
    for _ in range(100):
        x = O.random_element(rng)
        y = O.random_element(rng)
        z = O.random_element(rng)
        xx = O.multiply(x, x)
        assert O.multiply(xx, y) == O.multiply(x, O.multiply(x, y))
        yy = O.multiply(y, y)
        assert O.multiply(O.multiply(x, y), y) == O.multiply(x, yy)
        lhs = O.multiply(O.multiply(O.multiply(x, y), x), z)
        rhs = O.multiply(x, O.multiply(y, O.multiply(x, z)))
        assert lhs == rhs


def test_quadratic_identity_and_antiautomorphism():
    for A in (rational_quaternions(), rational_octonions()):
        rng = random.Random(7)
        for _ in range(50):
            x = A.random_element(rng)
            y = A.random_element(rng)
            tr = A.bilinear(x, A.one())
            lhs = A.multiply(x, x) - x.scale(tr) + A.one().scale(A.norm(x))
            assert lhs.is_zero()
            assert A.conjugate(A.conjugate(x)) == x
            assert A.conjugate(A.multiply(x, y)) == A.multiply(
                A.conjugate(y), A.conjugate(x)
            )


def test_approx_agrees_with_exact():
    HQ = rational_quaternions()
    HE = euclidean_quaternions()
    rng = random.Random(8)
    for _ in range(20):
        x = HQ.random_element(rng)
        y = HQ.random_element(rng)
        xe = HE.element([float(v) for v in x.coords])
        ye = HE.element([float(v) for v in y.coords])
        want = HQ.multiply(x, y)
        got = HE.multiply(xe, ye)
        assert np.allclose(got.coords, [float(v) for v in want.coords])
        assert abs(HE.norm(xe) - float(HQ.norm(x))) < 1e-12
