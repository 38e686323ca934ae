"""JSON encoding and decoding for every public object.

Scalars travel as strings: exact values as "p/q" (denominator omitted when
1, bit-exact round trip), approx values as repr'd decimal literals.
Objects that live on an algebra carry an "algebra" field holding either a
session id (resolved through a lookup) or an inline algebra document.
"""

from __future__ import annotations

from .algebra import AlgElement, HurwitzAlgebra
from .canonical import CompCanonicalForm, QuatCanonicalForm
from .errors import ParseError
from .isotopes import Isotope
from .linmaps import LinMap
from .scalars import ToleranceContext
from .triality import TrialityTriple


def algebra_to_json(algebra):
    return {
        "dim": algebra.dim,
        "params": [algebra.field.format(p) for p in algebra.params],
        "backend": algebra.backend,
    }


def algebra_from_json(doc, tol: ToleranceContext | None = None):
    try:
        params = doc["params"]
        backend = doc["backend"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad algebra document: {doc!r}") from exc
    algebra = HurwitzAlgebra(params, backend, tol)
    if "dim" in doc and doc["dim"] != algebra.dim:
        raise ParseError("algebra dim does not match its parameters")
    return algebra


def _resolve(ref, resolver, tol=None):
    if isinstance(ref, dict):
        return algebra_from_json(ref, tol)
    if resolver is None:
        raise ParseError("algebra reference needs a resolver")
    return resolver(ref)


def element_to_json(x, algebra_id="algebra"):
    f = x.algebra.field
    return {
        "algebra": algebra_id,
        "coords": [f.format(v) for v in x.coords],
    }


def element_from_json(doc, resolver=None, tol=None):
    algebra = _resolve(doc.get("algebra"), resolver, tol)
    f = algebra.field
    return AlgElement(algebra, [f.parse(v) for v in doc["coords"]])


def linmap_to_json(m, algebra_id="algebra"):
    f = m.algebra.field
    return {
        "algebra": algebra_id,
        "rows": [[f.format(v) for v in row] for row in m.data],
    }


def linmap_from_json(doc, resolver=None, tol=None):
    algebra = _resolve(doc.get("algebra"), resolver, tol)
    f = algebra.field
    return LinMap(algebra, [[f.parse(v) for v in row] for row in doc["rows"]])


def isotope_to_json(iso, algebra_id="algebra"):
    return {
        "algebra": algebra_id,
        "alpha": linmap_to_json(iso.alpha, algebra_id),
        "beta": linmap_to_json(iso.beta, algebra_id),
    }


def isotope_from_json(doc, resolver=None, tol=None):
    algebra = _resolve(doc.get("algebra"), resolver, tol)
    alpha = linmap_from_json(doc["alpha"], lambda _ref: algebra, tol)
    beta = linmap_from_json(doc["beta"], lambda _ref: algebra, tol)
    return Isotope(algebra, alpha, beta)


def cert_to_json(cert, algebra_id="algebra"):
    f = cert.phi.algebra.field
    return {
        "map": linmap_to_json(cert.phi, algebra_id),
        "multiplier": f.format(cert.multiplier),
        "proper": cert.proper,
        "residual": f.format(f.coerce(cert.residual)),
    }


def polar_to_json(factors, algebra_id="algebra"):
    return {
        "zeta": linmap_to_json(factors.zeta, algebra_id),
        "delta": linmap_to_json(factors.delta, algebra_id),
        "lambda": "kappa" if factors.lam_sign < 0 else "I",
        "residual": repr(float(factors.residual)),
    }


def triple_to_json(triple, algebra_id="algebra"):
    f = triple.phi.algebra.field
    return {
        "phi": linmap_to_json(triple.phi, algebra_id),
        "phi1": linmap_to_json(triple.phi1, algebra_id),
        "phi2": linmap_to_json(triple.phi2, algebra_id),
        "residual": f.format(f.coerce(triple.residual)),
    }


def triple_from_json(doc, resolver=None, tol=None):
    algebra = _resolve(doc["phi"].get("algebra"), resolver, tol)
    fixed = lambda _ref: algebra
    return TrialityTriple(
        linmap_from_json(doc["phi"], fixed, tol),
        linmap_from_json(doc["phi1"], fixed, tol),
        linmap_from_json(doc["phi2"], fixed, tol),
        algebra.field.parse(doc["residual"]),
    )


def double_sign_to_json(ds):
    def side(c):
        rep = c.rep if isinstance(c.rep, float) else int(c.rep)
        return {"exponent": c.exponent, "rep": repr(rep) if isinstance(rep, float) else str(rep)}

    return {"left": side(ds.left), "right": side(ds.right)}


def quat_form_to_json(form, algebra_id="algebra"):
    return {
        "class": list(form.cls),
        "a": element_to_json(form.a, algebra_id),
        "b": element_to_json(form.b, algebra_id),
        "delta": linmap_to_json(form.delta, algebra_id),
        "eps": linmap_to_json(form.eps, algebra_id),
        "normalization": form.version,
    }


def quat_form_from_json(doc, resolver=None, tol=None):
    algebra = _resolve(doc["a"].get("algebra"), resolver, tol)
    fixed = lambda _ref: algebra
    return QuatCanonicalForm(
        tuple(doc["class"]),
        element_from_json(doc["a"], fixed, tol),
        element_from_json(doc["b"], fixed, tol),
        linmap_from_json(doc["delta"], fixed, tol),
        linmap_from_json(doc["eps"], fixed, tol),
        doc.get("normalization", "1"),
    )


def comp_form_to_json(form, algebra_id="algebra"):
    return {
        "class": list(form.cls),
        "a": element_to_json(form.a, algebra_id),
        "b": element_to_json(form.b, algebra_id),
        "normalization": form.version,
    }


def comp_form_from_json(doc, resolver=None, tol=None):
    algebra = _resolve(doc["a"].get("algebra"), resolver, tol)
    fixed = lambda _ref: algebra
    return CompCanonicalForm(
        tuple(doc["class"]),
        element_from_json(doc["a"], fixed, tol),
        element_from_json(doc["b"], fixed, tol),
        doc.get("normalization", "1"),
    )
