"""Ground-field scalar arithmetic.

Two backends: exact rationals (`fractions.Fraction`, always reduced with a
positive denominator) and approximate reals (IEEE doubles compared with a
relative tolerance from a ToleranceContext).  A Field object bundles the
backend tag with coercion, comparison, formatting and parsing so the rest
of the library stays backend-agnostic.  Power-coset arithmetic in k*/k*^l
lives here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, ParseError, ZeroScalar

EXACT = "exact"
APPROX = "approx"


@dataclass(frozen=True)
class ToleranceContext:
    """Relative tolerances: tau_eq for scalar equality, tau_residual for
    matrix residual acceptance.  Requires 0 < tau_eq <= tau_residual < 1."""

    tau_eq: float = 1e-10
    tau_residual: float = 1e-8

    def __post_init__(self):
        if not (0.0 < self.tau_eq <= self.tau_residual < 1.0):
            raise ValueError(
                "tolerances must satisfy 0 < tau_eq <= tau_residual < 1"
            )


class ExactField:
    """Arithmetic over Q.  Values are Fractions; equality is literal."""

    tag = EXACT
    is_exact = True

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse(value)
        raise ParseError(f"cannot coerce {value!r} to an exact scalar")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by zero")
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / a

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def sign(self, a):
        return (a > 0) - (a < 0)

    def abs(self, a):
        return abs(a)

    def to_float(self, a):
        return float(a)

    def sqrt(self, a):
        """Exact square root, or None when a is not a rational square."""
        if a < 0:
            return None
        num, den = a.numerator, a.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(rn, rd)
        return None

    def format(self, a):
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad exact scalar {text!r}") from exc


class ApproxField:
    """Arithmetic over R in doubles.  Equality is relative:
    |x - y| <= tau_eq * max(1, |x|, |y|)."""

    tag = APPROX
    is_exact = False

    def __init__(self, tol: ToleranceContext | None = None):
        self.tol = tol or ToleranceContext()
        self.zero = 0.0
        self.one = 1.0

    def coerce(self, value):
        if isinstance(value, float):
            return value
        if isinstance(value, (int, Fraction)):
            return float(value)
        if isinstance(value, str):
            return self.parse(value)
        raise ParseError(f"cannot coerce {value!r} to an approx scalar")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0.0:
            raise DivisionByZero("division by zero")
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0.0:
            raise DivisionByZero("inverse of zero")
        return 1.0 / a

    def eq(self, a, b):
        return abs(a - b) <= self.tol.tau_eq * max(1.0, abs(a), abs(b))

    def is_zero(self, a):
        return abs(a) <= self.tol.tau_eq

    def sign(self, a):
        return (a > 0.0) - (a < 0.0)

    def abs(self, a):
        return abs(a)

    def to_float(self, a):
        return a

    def sqrt(self, a):
        if a < 0:
            return None
        return math.sqrt(a)

    def format(self, a):
        return repr(float(a))

    def parse(self, text):
        try:
            return float(text)
        except ValueError as exc:
            raise ParseError(f"bad approx scalar {text!r}") from exc


def make_field(tag, tol=None):
    if tag == EXACT:
        return ExactField()
    if tag == APPROX:
        return ApproxField(tol)
    raise ParseError(f"unknown backend {tag!r}")


_OPS = frozenset({"add", "sub", "mul", "div", "neg", "inv"})


def field_op(field, a, b=None, op="add"):
    """Single-entry arithmetic dispatch: op in {add,sub,mul,div,neg,inv}."""
    if op not in _OPS:
        raise ParseError(f"unknown scalar op {op!r}")
    if op in ("neg", "inv"):
        return getattr(field, op)(a)
    return getattr(field, op)(a, b)


# -- power cosets -----------------------------------------------------------

def _factorize(n):
    """Trial-division factorization of n >= 1 into {prime: exponent}."""
    factors = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                factors[q] = factors.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


@dataclass(frozen=True)
class PowerCoset:
    """Class of a nonzero scalar in k*/k*^l, l even.

    The stored representative is canonical: over Q it is sign * prod(p^e)
    with every exponent reduced mod l (so cosets are equal iff the
    representatives are identical); over R it is the sign, +-1.0.
    """

    exponent: int
    rep: object
    tag: str

    def __eq__(self, other):
        if not isinstance(other, PowerCoset):
            return NotImplemented
        return (
            self.exponent == other.exponent
            and self.tag == other.tag
            and self.rep == other.rep
        )

    def __hash__(self):
        return hash((self.exponent, self.tag, self.rep))


def coset_rep(field, rho, exponent):
    """Canonical representative of rho in k*/k*^exponent (exponent even).

    Exact backend: factor numerator and denominator, pool the primes with
    denominator exponents negated, reduce every exponent mod l, reapply the
    sign.  Approx backend over R: the class is sign(rho) since the index
    [R*:R*^l] is two for even l.
    """
    if exponent <= 0 or exponent % 2 != 0:
        raise ValueError("coset exponent must be a positive even integer")
    rho = field.coerce(rho)
    if field.is_zero(rho):
        raise ZeroScalar("zero has no coset class")
    if field.is_exact:
        sign = 1 if rho > 0 else -1
        num = abs(rho.numerator)
        den = rho.denominator
        exps = _factorize(num)
        for p, e in _factorize(den).items():
            exps[p] = exps.get(p, 0) - e
        rep = 1
        for p, e in sorted(exps.items()):
            rep *= p ** (e % exponent)
        return PowerCoset(exponent, sign * rep, EXACT)
    return PowerCoset(exponent, 1.0 if rho > 0 else -1.0, APPROX)
