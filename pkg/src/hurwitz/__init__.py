"""Hurwitz algebras, their principal isotopes, similitude and triality
certification, and classification of isotopes of quaternion algebras."""

from ._kernels import backend_name as kernel_backend
from .algebra import (
    AlgElement,
    HurwitzAlgebra,
    cd_construct,
    euclidean_octonions,
    euclidean_quaternions,
    rational_octonions,
    rational_quaternions,
)
from .canonical import (
    CompCanonicalForm,
    QuatCanonicalForm,
    comp_canonical,
    go_plus_factor,
    inner_conj_solve,
    pair_conjugacy,
    quat_iso_test,
    quaternion_canonical,
    rebuild_comp_isotope,
    rebuild_quat_isotope,
    so4_factor,
)
from .isotopes import (
    DoubleSign,
    Isotope,
    TransportResult,
    double_sign,
    find_identity,
    is_composition,
    isotope_mul,
    random_composition_isotope,
    random_isotope,
    same_isotope,
    transport,
    trivial_isotope,
    unital_isotope_norm,
)
from .linmaps import (
    LinMap,
    PolarFactors,
    SimilitudeCert,
    polar_decompose,
    random_invertible,
    random_proper_similitude,
    similitude_check,
    symmetric_eigen,
)
from .scalars import (
    ApproxField,
    ExactField,
    PowerCoset,
    ToleranceContext,
    coset_rep,
    field_op,
)
from .triality import (
    TrialityTriple,
    compose_triples,
    conjugation_triple,
    identity_triple,
    left_right_triple,
    triality_align,
    triality_components,
    verify_triality,
)

__version__ = "0.1.0"
