"""Brute-force property oracles.

Each oracle checks a defining identity by direct evaluation on seeded
random inputs and reports a violation count plus the worst deviation.
They deliberately avoid the certified code paths they are used to probe
(e.g. the multiplicativity scan never consults the similitude checker).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import ParseError


@dataclass
class OracleReport:
    name: str
    trials: int
    seed: int
    violations: int
    max_deviation: str
    passed: bool


def _rng_for(algebra, seed):
    return random.Random(seed) if algebra.is_exact else np.random.default_rng(seed)


def _deviation(algebra, x, y):
    diff = x - y
    if algebra.is_exact:
        return max(abs(v) for v in diff.coords)
    return float(np.abs(diff.coords).max())


def _scalar_dev(algebra, a, b):
    d = abs(a - b)
    if algebra.is_exact:
        return d
    return float(d)


def _tolerance(algebra):
    return 0 if algebra.is_exact else algebra.field.tol.tau_residual


def _run(algebra, trials, seed, fn):
    rng = _rng_for(algebra, seed)
    tol = _tolerance(algebra)
    worst = algebra.field.zero
    violations = 0
    for _ in range(trials):
        dev = fn(rng)
        if dev > worst:
            worst = dev
        bad = (dev != 0) if algebra.is_exact else (dev > tol)
        if bad:
            violations += 1
    return violations, worst


def norm_multiplicativity(algebra, trials, seed):
    def fn(rng):
        x = algebra.random_element(rng)
        y = algebra.random_element(rng)
        return _scalar_dev(
            algebra,
            algebra.norm(algebra.multiply(x, y)),
            algebra.field.mul(algebra.norm(x), algebra.norm(y)),
        )

    return _run(algebra, trials, seed, fn)


def alternativity(algebra, trials, seed):
    def fn(rng):
        x = algebra.random_element(rng)
        y = algebra.random_element(rng)
        left = _deviation(
            algebra,
            algebra.multiply(algebra.multiply(x, x), y),
            algebra.multiply(x, algebra.multiply(x, y)),
        )
        right = _deviation(
            algebra,
            algebra.multiply(algebra.multiply(x, y), y),
            algebra.multiply(x, algebra.multiply(y, y)),
        )
        return max(left, right)

    return _run(algebra, trials, seed, fn)


def moufang(algebra, trials, seed):
    def fn(rng):
        x = algebra.random_element(rng)
        y = algebra.random_element(rng)
        z = algebra.random_element(rng)
        lhs = algebra.multiply(
            algebra.multiply(algebra.multiply(x, y), x), z
        )
        rhs = algebra.multiply(x, algebra.multiply(y, algebra.multiply(x, z)))
        return _deviation(algebra, lhs, rhs)

    return _run(algebra, trials, seed, fn)


def quadratic_identity(algebra, trials, seed):
    """x^2 - <x,1> x + n(x) 1 = 0."""

    def fn(rng):
        x = algebra.random_element(rng)
        tr = algebra.bilinear(x, algebra.one())
        lhs = algebra.multiply(x, x) - x.scale(tr) + algebra.one().scale(
            algebra.norm(x)
        )
        return _deviation(algebra, lhs, algebra.zero())

    return _run(algebra, trials, seed, fn)


def conjugation_antiautomorphism(algebra, trials, seed):
    def fn(rng):
        x = algebra.random_element(rng)
        y = algebra.random_element(rng)
        lhs = algebra.conjugate(algebra.multiply(x, y))
        rhs = algebra.multiply(algebra.conjugate(y), algebra.conjugate(x))
        return max(
            _deviation(algebra, lhs, rhs),
            _deviation(
                algebra, algebra.conjugate(algebra.conjugate(x)), x
            ),
        )

    return _run(algebra, trials, seed, fn)


def left_inverse_matrix(algebra, trials, seed):
    """L_x L_{x^-1} = identity for invertible x."""
    from .linmaps import LinMap

    ident = LinMap.identity(algebra)

    def fn(rng):
        x = algebra.random_element(rng, invertible=True)
        prod = algebra.left_matrix(x) @ algebra.left_matrix(algebra.inverse(x))
        return (prod - ident).max_abs()

    return _run(algebra, trials, seed, fn)


def identity_roundtrip(algebra, trials, seed):
    """Unital isotope built from (a, b) must have identity b a."""
    from .isotopes import Isotope, find_identity

    def fn(rng):
        a = algebra.random_element(rng, invertible=True)
        b = algebra.random_element(rng, invertible=True)
        iso = Isotope(
            algebra,
            algebra.right_matrix(a).inverse(),
            algebra.left_matrix(b).inverse(),
        )
        return _deviation(
            algebra, find_identity(iso), algebra.multiply(b, a)
        )

    return _run(algebra, trials, seed, fn)


def multiplicativity_scan(iso, pairs=50, seed=0, tol=None):
    """Cross-ratio scan: n(x o y) / (n(x) n(y)) must be a constant.

    Independent detector for composition isotopes; returns
    (is_multiplicative, max_relative_deviation).
    """
    A = iso.algebra
    rng = _rng_for(A, seed)
    f = A.field
    ratios = []
    guard = 0
    while len(ratios) < pairs and guard < pairs * 20:
        guard += 1
        x = A.random_element(rng)
        y = A.random_element(rng)
        nx, ny = A.norm(x), A.norm(y)
        if f.is_zero(nx) or f.is_zero(ny):
            continue
        ratios.append(f.div(A.norm(iso.mul(x, y)), f.mul(nx, ny)))
    base = ratios[0]
    if A.is_exact:
        dev = max(abs(r - base) for r in ratios)
        return dev == 0, dev
    tau = tol if tol is not None else f.tol.tau_residual
    scale = max(1.0, abs(float(base)))
    dev = max(abs(r - base) for r in ratios)
    return dev <= tau * scale * 10, float(dev)


ORACLES = {
    "norm-multiplicativity": norm_multiplicativity,
    "alternativity": alternativity,
    "moufang": moufang,
    "quadratic-identity": quadratic_identity,
    "conjugation-antiautomorphism": conjugation_antiautomorphism,
    "left-inverse": left_inverse_matrix,
    "identity-roundtrip": identity_roundtrip,
}


def run_oracle(name, algebra, trials, seed):
    if name not in ORACLES:
        raise ParseError(
            f"unknown oracle {name!r}; available: {sorted(ORACLES)}"
        )
    violations, worst = ORACLES[name](algebra, trials, seed)
    return OracleReport(
        name=name,
        trials=trials,
        seed=seed,
        violations=violations,
        max_deviation=algebra.field.format(algebra.field.coerce(worst)),
        passed=violations == 0,
    )
