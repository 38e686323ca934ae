"""Exception hierarchy.

Two families: operational errors (bad inputs, solver breakdowns) and
negative verdicts (a decision procedure answering "no").  Both derive from
HurwitzError; verdicts additionally derive from Verdict so callers such as
the CLI can report them as answers rather than failures.
"""


class HurwitzError(Exception):
    pass


class Verdict(HurwitzError):
    """Negative answer of a decision procedure; carries a reason string."""

    def __init__(self, reason="", **payload):
        super().__init__(reason)
        self.reason = reason
        self.payload = payload


# -- scalars ---------------------------------------------------------------

class DivisionByZero(HurwitzError):
    pass


class ZeroScalar(HurwitzError):
    pass


# -- algebras --------------------------------------------------------------

class ZeroParameter(HurwitzError):
    pass


class AlgebraMismatch(HurwitzError):
    pass


class BackendMismatch(HurwitzError):
    pass


class NotInvertible(HurwitzError):
    pass


# -- linear maps -----------------------------------------------------------

class Singular(HurwitzError):
    pass


class NotSimilitude(Verdict):
    pass


class NotEuclidean(HurwitzError):
    pass


class NotSymmetric(HurwitzError):
    pass


class NotSpecialOrthogonal(HurwitzError):
    pass


# -- isotopes --------------------------------------------------------------

class NotUnital(Verdict):
    pass


class IsotropicIdentity(HurwitzError):
    pass


class Distinct(Verdict):
    pass


class NotComposition(Verdict):
    pass


class SplitBinaryAlgebra(HurwitzError):
    pass


class Dim1(HurwitzError):
    pass


class WrongDimension(HurwitzError):
    pass


class ImproperSimilitude(HurwitzError):
    pass


class TrialityMismatch(HurwitzError):
    pass


# -- triality / classification ---------------------------------------------

class TrialitySolverFailed(HurwitzError):
    pass


class NotRelated(Verdict):
    pass


class NotInner(Verdict):
    pass


class NotIsomorphic(Verdict):
    pass


class NotConjugate(Verdict):
    pass


class Inconclusive(Verdict):
    """Residual fell on the tolerance boundary; carries best witness."""


# -- CLI -------------------------------------------------------------------

class ParseError(HurwitzError):
    pass
