import numpy as np
import pytest

from hurwitz._kernels import pure

try:
    from hurwitz._kernels import _fast
except ImportError:
    _fast = None

from hurwitz.algebra import euclidean_octonions, rational_octonions

needs_fast = pytest.mark.skipif(_fast is None, reason="compiled kernels unavailable")

O = euclidean_octonions()
COEF = O.coef_f
RNG = np.random.default_rng(0)


def test_pure_mul_matches_exact_backend():
    OQ = rational_octonions()
    import random

    rng = random.Random(1)
    for _ in range(10):
        x = OQ.random_element(rng)
        y = OQ.random_element(rng)
        xf = np.array([float(v) for v in x.coords])
        yf = np.array([float(v) for v in y.coords])
        want = [float(v) for v in OQ.multiply(x, y).coords]
        assert np.allclose(pure.mul(COEF, xf, yf), want)


def test_pure_matrices_match_exact_backend():
    OQ = rational_octonions()
    import random

    rng = random.Random(2)
    a = OQ.random_element(rng)
    af = np.array([float(v) for v in a.coords])
    lw = np.array([[float(v) for v in row] for row in OQ.left_matrix(a).data])
    rw = np.array([[float(v) for v in row] for row in OQ.right_matrix(a).data])
    assert np.allclose(pure.left_matrix(COEF, af), lw)
    assert np.allclose(pure.right_matrix(COEF, af), rw)


def test_pure_product_table_consistent_with_mul():
    phi1 = RNG.standard_normal((8, 8))
    phi2 = RNG.standard_normal((8, 8))
    table = pure.product_table(COEF, phi1, phi2)
    for i in range(8):
        for j in range(8):
            assert np.allclose(
                table[i, j], pure.mul(COEF, phi1[:, i].copy(), phi2[:, j].copy())
            )


def test_pure_jacobi():
    m = RNG.standard_normal((8, 8))
    S = m @ m.T
    vals, vecs = pure.jacobi_eigh(S)
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.abs((vecs * vals) @ vecs.T - S).max() < 1e-12 * max(1, np.abs(S).max())
    assert np.abs(vecs.T @ vecs - np.eye(8)).max() < 1e-13


@needs_fast
def test_fast_matches_pure():
    x = RNG.standard_normal(8)
    y = RNG.standard_normal(8)
    assert np.allclose(_fast.mul(COEF, x, y), pure.mul(COEF, x, y), atol=1e-14)
    assert np.allclose(
        _fast.left_matrix(COEF, x), pure.left_matrix(COEF, x), atol=1e-14
    )
    assert np.allclose(
        _fast.right_matrix(COEF, x), pure.right_matrix(COEF, x), atol=1e-14
    )
    X = RNG.standard_normal((20, 8))
    Y = RNG.standard_normal((20, 8))
    assert np.allclose(_fast.mul_many(COEF, X, Y), pure.mul_many(COEF, X, Y))
    phi = RNG.standard_normal((8, 8))
    phi1 = RNG.standard_normal((8, 8))
    phi2 = RNG.standard_normal((8, 8))
    assert np.allclose(
        _fast.product_table(COEF, phi1, phi2),
        pure.product_table(COEF, phi1, phi2),
        atol=1e-13,
    )
    assert np.allclose(
        _fast.triality_target(COEF, phi), pure.triality_target(COEF, phi)
    )
    rf = _fast.triality_residual_max(COEF, phi, phi1, phi2)
    rp = pure.triality_residual_max(COEF, phi, phi1, phi2)
    assert abs(rf - rp) < 1e-12


@needs_fast
def test_fast_jacobi_matches_pure():
    m = RNG.standard_normal((8, 8))
    S = m @ m.T
    vf, Vf = _fast.jacobi_eigh(S)
    vp, Vp = pure.jacobi_eigh(S)
    assert np.abs(vf - vp).max() < 1e-12
    assert np.abs((Vf * vf) @ Vf.T - S).max() < 1e-12 * max(1, np.abs(S).max())
