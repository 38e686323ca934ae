"""Command-line front end.

Objects live in a JSON session file keyed by string ids; every command
prints a machine-readable report to stdout.  Exit code 0 means a verdict
was computed (negative answers included); 2 is a parse error, 3 a backend
mismatch, 4 a solver failure, 1 any other operational error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import oracles, serialize
from .algebra import HurwitzAlgebra
from .canonical import (
    NORMALIZATION_VERSION,
    comp_canonical,
    pair_conjugacy,
    quat_iso_test,
    quaternion_canonical,
    so4_factor,
)
from .errors import (
    BackendMismatch,
    HurwitzError,
    ParseError,
    TrialitySolverFailed,
    Verdict,
)
from .isotopes import (
    Isotope,
    double_sign,
    find_identity,
    random_composition_isotope,
    random_isotope,
    same_isotope,
    transport,
    unital_isotope_norm,
)
from .linmaps import (
    LinMap,
    polar_decompose,
    random_invertible,
    similitude_check,
)
from .scalars import ToleranceContext
from .triality import triality_align, triality_components, verify_triality

_KIND_LOADERS = {
    "element": serialize.element_from_json,
    "map": serialize.linmap_from_json,
    "isotope": serialize.isotope_from_json,
    "triple": serialize.triple_from_json,
    "quat-form": serialize.quat_form_from_json,
    "comp-form": serialize.comp_form_from_json,
}


class Session:
    """Map from string ids to stored objects, plus tolerances and seed."""

    def __init__(self, path, tol: ToleranceContext, seed: int):
        self.path = path
        self.tol = tol
        self.seed = seed
        self.doc = {"objects": {}}
        if path and os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                self.doc = json.load(fh)
        self._algebras = {}

    def save(self):
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                json.dump(self.doc, fh, sort_keys=True, indent=2)
                fh.write("\n")

    def put(self, obj_id, kind, payload):
        if not obj_id:
            return
        self.doc["objects"][obj_id] = {"kind": kind, **payload}

    def raw(self, obj_id):
        try:
            return self.doc["objects"][obj_id]
        except KeyError as exc:
            raise ParseError(f"unknown object id {obj_id!r}") from exc

    def algebra(self, obj_id):
        if obj_id not in self._algebras:
            doc = self.raw(obj_id)
            if doc.get("kind") != "algebra":
                raise ParseError(f"{obj_id!r} is not an algebra")
            self._algebras[obj_id] = serialize.algebra_from_json(doc, self.tol)
        return self._algebras[obj_id]

    def load(self, obj_id, kind):
        doc = self.raw(obj_id)
        if doc.get("kind") != kind:
            raise ParseError(f"{obj_id!r} is not a {kind}")
        return _KIND_LOADERS[kind](doc, self.algebra, self.tol)


def _provenance(session):
    return {
        "seed": session.seed,
        "tau_eq": session.tol.tau_eq,
        "tau_residual": session.tol.tau_residual,
        "normalization_version": NORMALIZATION_VERSION,
    }


def _report(session, operation, inputs, verdict, witnesses=None, residuals=None):
    return {
        "operation": operation,
        "inputs": inputs,
        "verdict": verdict,
        "witnesses": witnesses or {},
        "residuals": residuals or {},
        "provenance": _provenance(session),
    }


def _emit(doc):
    print(json.dumps(doc, sort_keys=True, indent=2))


def _fmt_scalar(field, v):
    return field.format(field.coerce(v))


# -- handlers --------------------------------------------------------------------


def cmd_algebra_new(session, args):
    params = [p for p in args.params.split(",") if p] if args.params else []
    algebra = HurwitzAlgebra(params, args.backend, session.tol)
    session.put(args.id, "algebra", serialize.algebra_to_json(algebra))
    return _report(
        session,
        "algebra new",
        {"id": args.id, "params": args.params, "backend": args.backend},
        {"status": "created", "dim": algebra.dim, "euclidean": algebra.is_euclidean},
    )


def cmd_element_new(session, args):
    algebra = session.algebra(args.algebra)
    coords = [c for c in args.coords.split(",")]
    x = algebra.element([algebra.field.parse(c) for c in coords])
    session.put(args.id, "element", serialize.element_to_json(x, args.algebra))
    return _report(
        session,
        "element new",
        {"id": args.id, "algebra": args.algebra},
        {"status": "created", "norm": _fmt_scalar(algebra.field, x.norm())},
    )


def _parse_rows(algebra, text):
    rows = []
    for row in text.split(";"):
        rows.append([algebra.field.parse(v) for v in row.split(",")])
    return rows


def cmd_map_new(session, args):
    algebra = session.algebra(args.algebra)
    if args.rows:
        m = LinMap(algebra, _parse_rows(algebra, args.rows))
    elif args.kind == "identity":
        m = LinMap.identity(algebra)
    elif args.kind == "kappa":
        m = algebra.kappa()
    elif args.kind in ("left", "right"):
        if not args.element:
            raise ParseError("--element is required for left/right maps")
        x = session.load(args.element, "element")
        m = (
            algebra.left_matrix(x)
            if args.kind == "left"
            else algebra.right_matrix(x)
        )
    elif args.kind == "random":
        m = random_invertible(algebra, args.seed if args.seed is not None else session.seed)
    else:
        raise ParseError("map new needs --rows or --kind")
    session.put(args.id, "map", serialize.linmap_to_json(m, args.algebra))
    return _report(
        session,
        "map new",
        {"id": args.id, "algebra": args.algebra, "kind": args.kind or "rows"},
        {
            "status": "created",
            "determinant": _fmt_scalar(algebra.field, m.determinant()),
        },
    )


def cmd_isotope_new(session, args):
    algebra = session.algebra(args.algebra)
    alpha = session.load(args.alpha, "map")
    beta = session.load(args.beta, "map")
    iso = Isotope(algebra, alpha, beta)
    session.put(args.id, "isotope", serialize.isotope_to_json(iso, args.algebra))
    return _report(
        session,
        "isotope new",
        {"id": args.id, "algebra": args.algebra, "alpha": args.alpha, "beta": args.beta},
        {"status": "created"},
    )


def cmd_isotope_identity(session, args):
    iso = session.load(args.isotope, "isotope")
    f = iso.algebra.field
    e = find_identity(iso)
    rho = unital_isotope_norm(iso)
    return _report(
        session,
        "isotope identity",
        {"isotope": args.isotope},
        {"unital": True},
        witnesses={
            "identity": serialize.element_to_json(e),
            "norm_scale": f.format(rho),
        },
    )


def cmd_isotope_double_sign(session, args):
    iso = session.load(args.isotope, "isotope")
    ds = double_sign(iso)
    return _report(
        session,
        "isotope double-sign",
        {"isotope": args.isotope},
        {"double_sign": serialize.double_sign_to_json(ds)},
    )


def cmd_isotope_same(session, args):
    iso1 = session.load(args.first, "isotope")
    iso2 = session.load(args.second, "isotope")
    w = same_isotope(iso1, iso2)
    return _report(
        session,
        "isotope same",
        {"first": args.first, "second": args.second},
        {"same": True},
        witnesses={"nuclear": serialize.element_to_json(w)},
    )


def cmd_isotope_transport(session, args):
    iso = session.load(args.isotope, "isotope")
    phi = session.load(args.phi, "map")
    if args.triple:
        triple = session.load(args.triple, "triple")
    else:
        triple = triality_components(
            phi, restarts=args.restarts, seed=args.seed if args.seed is not None else session.seed
        )
    result = transport(iso, phi, triple)
    if args.id:
        session.put(
            args.id,
            "isotope",
            serialize.isotope_to_json(result.target, _algebra_id_of(session, args.isotope)),
        )
    f = iso.algebra.field
    return _report(
        session,
        "isotope transport",
        {"isotope": args.isotope, "phi": args.phi, "target_id": args.id},
        {"transported": True},
        witnesses={
            "gamma": serialize.linmap_to_json(result.gamma),
            "delta": serialize.linmap_to_json(result.delta),
        },
        residuals={"self_check": _fmt_scalar(f, result.residual)},
    )


def _algebra_id_of(session, obj_id):
    return session.raw(obj_id).get("algebra", "algebra")


def cmd_similitude_check(session, args):
    m = session.load(args.map, "map")
    cert = similitude_check(m)
    f = m.algebra.field
    return _report(
        session,
        "similitude check",
        {"map": args.map},
        {"similitude": True, "proper": cert.proper},
        witnesses={"multiplier": f.format(cert.multiplier)},
        residuals={"gram": _fmt_scalar(f, cert.residual)},
    )


def cmd_triality_solve(session, args):
    phi = session.load(args.phi, "map")
    triple = triality_components(
        phi,
        restarts=args.restarts,
        seed=args.seed if args.seed is not None else session.seed,
    )
    if args.id:
        session.put(
            args.id,
            "triple",
            serialize.triple_to_json(triple, _algebra_id_of(session, args.phi)),
        )
    f = phi.algebra.field
    return _report(
        session,
        "triality solve",
        {"phi": args.phi, "triple_id": args.id},
        {"solved": True},
        witnesses={
            "phi1": serialize.linmap_to_json(triple.phi1),
            "phi2": serialize.linmap_to_json(triple.phi2),
        },
        residuals={"basis_pairs": _fmt_scalar(f, triple.residual)},
    )


def cmd_triality_verify(session, args):
    triple = session.load(args.triple, "triple")
    res = verify_triality(triple)
    f = triple.phi.algebra.field
    ok = (res == 0) if triple.phi.algebra.is_exact else (
        float(res) <= session.tol.tau_residual
    )
    return _report(
        session,
        "triality verify",
        {"triple": args.triple},
        {"valid": bool(ok)},
        residuals={"max_deviation": _fmt_scalar(f, res) if res != float("inf") else "inf"},
    )


def cmd_triality_align(session, args):
    t1 = session.load(args.first, "triple")
    t2 = session.load(args.second, "triple")
    w = triality_align(t1, t2)
    return _report(
        session,
        "triality align",
        {"first": args.first, "second": args.second},
        {"related": True},
        witnesses={"nuclear": serialize.element_to_json(w)},
    )


def cmd_polar(session, args):
    m = session.load(args.map, "map")
    factors = polar_decompose(m)
    return _report(
        session,
        "polar",
        {"map": args.map},
        {"factored": True, "lambda": "kappa" if factors.lam_sign < 0 else "I"},
        witnesses=serialize.polar_to_json(factors),
        residuals={"recompose": repr(factors.residual)},
    )


def cmd_so4_factor(session, args):
    m = session.load(args.map, "map")
    p, q = so4_factor(m)
    return _report(
        session,
        "so4-factor",
        {"map": args.map},
        {"factored": True},
        witnesses={
            "p": serialize.element_to_json(p),
            "q": serialize.element_to_json(q),
        },
    )


def cmd_classify_quaternion(session, args):
    iso = session.load(args.isotope, "isotope")
    form = quaternion_canonical(iso)
    if args.id:
        session.put(
            args.id,
            "quat-form",
            serialize.quat_form_to_json(form, _algebra_id_of(session, args.isotope)),
        )
    return _report(
        session,
        "classify quaternion",
        {"isotope": args.isotope, "form_id": args.id},
        {"class": list(form.cls)},
        witnesses=serialize.quat_form_to_json(form),
    )


def cmd_classify_composition(session, args):
    iso = session.load(args.isotope, "isotope")
    form = comp_canonical(iso)
    if args.id:
        session.put(
            args.id,
            "comp-form",
            serialize.comp_form_to_json(form, _algebra_id_of(session, args.isotope)),
        )
    return _report(
        session,
        "classify composition",
        {"isotope": args.isotope, "form_id": args.id},
        {"class": list(form.cls)},
        witnesses=serialize.comp_form_to_json(form),
    )


def cmd_iso_test(session, args):
    f1 = session.load(args.first, "quat-form")
    f2 = session.load(args.second, "quat-form")
    s = quat_iso_test(f1, f2)
    return _report(
        session,
        "iso-test",
        {"first": args.first, "second": args.second},
        {"isomorphic": True},
        witnesses={"conjugator": serialize.element_to_json(s)},
    )


def cmd_pair_conjugacy(session, args):
    a1 = session.load(args.first_a, "element")
    b1 = session.load(args.first_b, "element")
    a2 = session.load(args.second_a, "element")
    b2 = session.load(args.second_b, "element")
    s = pair_conjugacy((a1, b1), (a2, b2))
    return _report(
        session,
        "pair-conjugacy",
        {
            "first": [args.first_a, args.first_b],
            "second": [args.second_a, args.second_b],
        },
        {"conjugate": True},
        witnesses={"conjugator": serialize.element_to_json(s)},
    )


def cmd_oracle(session, args):
    if args.algebra:
        algebra = session.algebra(args.algebra)
    else:
        if args.dim is not None:
            import math

            m = int(math.log2(args.dim))
            if 2 ** m != args.dim or m > 3:
                raise ParseError("--dim must be 1, 2, 4 or 8")
        else:
            raise ParseError("oracle needs --algebra or --dim")
        params = (
            [p for p in args.params.split(",") if p]
            if args.params
            else ["-1"] * m
        )
        algebra = HurwitzAlgebra(params, args.backend, session.tol)
    rep = oracles.run_oracle(args.property, algebra, args.trials, args.seed)
    return _report(
        session,
        f"oracle {args.property}",
        {
            "algebra": serialize.algebra_to_json(algebra),
            "trials": args.trials,
            "seed": args.seed,
        },
        {"passed": rep.passed, "violations": rep.violations},
        residuals={"max_deviation": rep.max_deviation},
    )


def cmd_batch_classify(session, args):
    tol = session.tol
    algebra = HurwitzAlgebra(["-1", "-1"], "approx" if args.backend != "exact" else "exact", tol)
    if args.sampler == "general" and algebra.is_exact:
        raise BackendMismatch("general classification needs the Euclidean backend")
    buckets = {}
    inconclusive = []
    errors = []
    residuals = []
    for index in range(args.count):
        try:
            if args.sampler == "composition":
                iso = random_composition_isotope(
                    algebra, _spawn_seed(algebra, args.seed, index)
                )
                form = comp_canonical(iso)
                if algebra.is_exact:
                    res = 0.0
                else:
                    res = abs(float(algebra.norm(form.a)) - 1.0)
            else:
                iso = random_isotope(algebra, _spawn_seed(algebra, args.seed, index))
                form = quaternion_canonical(iso)
                res = max(
                    abs(form.delta.determinant() - 1.0),
                    abs(form.eps.determinant() - 1.0),
                    abs(float(algebra.norm(form.a)) - 1.0),
                )
            residuals.append(res)
            key = f"{form.cls[0]},{form.cls[1]}"
            buckets[key] = buckets.get(key, 0) + 1
        except Verdict as exc:
            inconclusive.append({"index": index, "reason": str(exc)})
        except HurwitzError as exc:
            errors.append({"index": index, "error": type(exc).__name__, "reason": str(exc)})
    verdict = {
        "count": args.count,
        "sampler": args.sampler,
        "classes": {k: buckets[k] for k in sorted(buckets)},
        "residuals": {
            "max": repr(max(residuals)) if residuals else "0.0",
            "mean": repr(sum(residuals) / len(residuals)) if residuals else "0.0",
        },
        "inconclusive": inconclusive,
        "errors": errors,
    }
    return _report(
        session,
        "batch classify",
        {"count": args.count, "seed": args.seed, "sampler": args.sampler},
        verdict,
    )


def _spawn_seed(algebra, seed, index):
    if algebra.is_exact:
        import random as _random

        return _random.Random(seed * 1_000_003 + index)
    import numpy as _np

    return _np.random.default_rng([seed, index])


# -- parser -----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hurwitz",
        description="Hurwitz algebras, isotopes, similitudes and classification",
    )
    parser.add_argument("--session", default="session.json", help="session file path")
    parser.add_argument("--seed", type=int, default=0, help="default random seed")
    parser.add_argument("--tol-eq", type=float, default=None)
    parser.add_argument("--tol-residual", type=float, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("new")
    pn.add_argument("--id", required=True)
    pn.add_argument("--params", default="")
    pn.add_argument("--backend", choices=["exact", "approx"], default="exact")
    pn.set_defaults(handler=cmd_algebra_new)

    p = sub.add_parser("element")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("new")
    pn.add_argument("--id", required=True)
    pn.add_argument("--algebra", required=True)
    pn.add_argument("--coords", required=True)
    pn.set_defaults(handler=cmd_element_new)

    p = sub.add_parser("map")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("new")
    pn.add_argument("--id", required=True)
    pn.add_argument("--algebra", required=True)
    pn.add_argument("--rows")
    pn.add_argument(
        "--kind", choices=["identity", "kappa", "left", "right", "random"]
    )
    pn.add_argument("--element")
    pn.add_argument("--seed", type=int)
    pn.set_defaults(handler=cmd_map_new)

    p = sub.add_parser("isotope")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("new")
    pn.add_argument("--id", required=True)
    pn.add_argument("--algebra", required=True)
    pn.add_argument("--alpha", required=True)
    pn.add_argument("--beta", required=True)
    pn.set_defaults(handler=cmd_isotope_new)
    pn = ps.add_parser("identity")
    pn.add_argument("--isotope", required=True)
    pn.set_defaults(handler=cmd_isotope_identity)
    pn = ps.add_parser("double-sign")
    pn.add_argument("--isotope", required=True)
    pn.set_defaults(handler=cmd_isotope_double_sign)
    pn = ps.add_parser("same")
    pn.add_argument("--first", required=True)
    pn.add_argument("--second", required=True)
    pn.set_defaults(handler=cmd_isotope_same)
    pn = ps.add_parser("transport")
    pn.add_argument("--isotope", required=True)
    pn.add_argument("--phi", required=True)
    pn.add_argument("--triple")
    pn.add_argument("--id")
    pn.add_argument("--restarts", type=int, default=16)
    pn.add_argument("--seed", type=int)
    pn.set_defaults(handler=cmd_isotope_transport)

    p = sub.add_parser("similitude")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("check")
    pn.add_argument("--map", required=True)
    pn.set_defaults(handler=cmd_similitude_check)

    p = sub.add_parser("triality")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("solve")
    pn.add_argument("--phi", required=True)
    pn.add_argument("--id")
    pn.add_argument("--restarts", type=int, default=16)
    pn.add_argument("--seed", type=int)
    pn.set_defaults(handler=cmd_triality_solve)
    pn = ps.add_parser("verify")
    pn.add_argument("--triple", required=True)
    pn.set_defaults(handler=cmd_triality_verify)
    pn = ps.add_parser("align")
    pn.add_argument("--first", required=True)
    pn.add_argument("--second", required=True)
    pn.set_defaults(handler=cmd_triality_align)

    pn = sub.add_parser("polar")
    pn.add_argument("--map", required=True)
    pn.set_defaults(handler=cmd_polar)

    pn = sub.add_parser("so4-factor")
    pn.add_argument("--map", required=True)
    pn.set_defaults(handler=cmd_so4_factor)

    p = sub.add_parser("classify")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("quaternion")
    pn.add_argument("--isotope", required=True)
    pn.add_argument("--id")
    pn.set_defaults(handler=cmd_classify_quaternion)
    pn = ps.add_parser("composition")
    pn.add_argument("--isotope", required=True)
    pn.add_argument("--id")
    pn.set_defaults(handler=cmd_classify_composition)

    pn = sub.add_parser("iso-test")
    pn.add_argument("--first", required=True)
    pn.add_argument("--second", required=True)
    pn.set_defaults(handler=cmd_iso_test)

    pn = sub.add_parser("pair-conjugacy")
    pn.add_argument("--first-a", required=True)
    pn.add_argument("--first-b", required=True)
    pn.add_argument("--second-a", required=True)
    pn.add_argument("--second-b", required=True)
    pn.set_defaults(handler=cmd_pair_conjugacy)

    pn = sub.add_parser("oracle")
    pn.add_argument("property")
    pn.add_argument("--algebra")
    pn.add_argument("--dim", type=int)
    pn.add_argument("--params")
    pn.add_argument("--backend", choices=["exact", "approx"], default="exact")
    pn.add_argument("--trials", type=int, default=100)
    pn.add_argument("--seed", type=int, default=0)
    pn.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("batch")
    ps = p.add_subparsers(dest="sub", required=True)
    pn = ps.add_parser("classify")
    pn.add_argument("--count", type=int, required=True)
    pn.add_argument("--seed", type=int, default=0)
    pn.add_argument("--sampler", choices=["general", "composition"], default="general")
    pn.add_argument("--backend", choices=["exact", "approx"], default="approx")
    pn.set_defaults(handler=cmd_batch_classify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    tau_res = args.tol_residual
    env_tol = os.environ.get("ISOTOPE_TOL")
    if tau_res is None and env_tol:
        tau_res = float(env_tol)
    if tau_res is None:
        tau_res = 1e-8
    tau_eq = args.tol_eq if args.tol_eq is not None else min(1e-10, tau_res)
    tol = ToleranceContext(tau_eq=tau_eq, tau_residual=tau_res)
    session = Session(args.session, tol, args.seed)
    operation = args.command
    if getattr(args, "sub", None):
        operation = f"{args.command} {args.sub}"
    try:
        report = args.handler(session, args)
    except Verdict as exc:
        _emit(
            _report(
                session,
                operation,
                {},
                {
                    "negative": type(exc).__name__,
                    "reason": str(exc),
                    "details": _verdict_payload(exc),
                },
            )
        )
        return 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BackendMismatch as exc:
        print(f"backend mismatch: {exc}", file=sys.stderr)
        return 3
    except TrialitySolverFailed as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return 4
    except HurwitzError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    session.save()
    _emit(report)
    return 0


def _verdict_payload(exc):
    out = {}
    for key, value in getattr(exc, "payload", {}).items():
        try:
            json.dumps(value)
            out[key] = value
        except TypeError:
            out[key] = repr(value)
    return out


if __name__ == "__main__":
    sys.exit(main())
