"""Command-line surface.

Verbs: iqp mutate/reduce, seed walk/vars, rep chi, cc eval/loc,
quasi check/psi, gen triangle/polygon/grid, serve.  Exit codes: 0 success,
2 domain errors, 3 guards, 64 usage.
"""

import argparse
import json
import sys

from .character import CharacterInput, CoefficientRule, LocalizedObject, cc, cc_loc
from .errors import DomainError, GuardError
from .generators import grid_ice_quiver, polygon_ice_quiver, triangle_example
from .laurent import LaurentPoly
from .mutation import mutate
from .potential import Potential, jacobian_presentation, jacobian_dim_upto, reduce_iqp
from .quasi import QuasiMorphism, build_psi, verify
from .quiver import IceQuiver
from .reps import QuiverRep, euler_characteristic
from .seeds import Seed, enumerate_pattern, walk

USAGE_EXIT = 64
DOMAIN_EXIT = 2
GUARD_EXIT = 3


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _load_quiver(path):
    return IceQuiver.from_json(_load_json(path))


def _load_potential(path, quiver):
    if path is None:
        return Potential.zero(quiver)
    return Potential.from_json(quiver, _load_json(path))


def _emit(payload, fmt, pretty_text=None):
    if fmt == "pretty" and pretty_text is not None:
        print(pretty_text)
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def _int_list(text):
    text = text.strip()
    if not text:
        return []
    return [int(x) for x in text.split(",")]


def cmd_iqp_mutate(args):
    q = _load_quiver(args.quiver)
    w = _load_potential(args.potential, q)
    new_q, new_w, report = mutate(q, w, args.at)
    payload = {
        "quiver": new_q.to_json(),
        "potential": new_w.to_json(),
    }
    if args.trace:
        payload["trace"] = {
            "premutation": report["premutation"].to_json(),
            "eliminatedPairs": report["reduction"].eliminated_pairs,
            "survivingQuadratics": report["reduction"].surviving_quadratics,
        }
    _emit(payload, args.format,
          "quiver: %s\npotential: %r" % (new_q, new_w))
    return 0


def cmd_iqp_reduce(args):
    q = _load_quiver(args.quiver)
    w = _load_potential(args.potential, q)
    new_q, new_w, report = reduce_iqp(q, w)
    payload = {
        "quiver": new_q.to_json(),
        "potential": new_w.to_json(),
        "report": {
            "eliminatedPairs": report.eliminated_pairs,
            "survivingQuadratics": report.surviving_quadratics,
            "reduced": report.reduced,
        },
    }
    _emit(payload, args.format, "quiver: %s\npotential: %r" % (new_q, new_w))
    return 0


def cmd_seed_walk(args):
    q = _load_quiver(args.quiver)
    moves = _int_list(args.mutations or "")
    if args.depth is not None and len(moves) > args.depth:
        raise GuardError("mutation path of length %d exceeds --depth %d"
                         % (len(moves), args.depth))
    seed = Seed.initial(q)
    seed = walk(seed, moves)
    _emit(seed.to_json(), args.format,
          "\n".join("%s = %s" % (name, entry.pretty())
                    for name, entry in zip(seed.names, seed.cluster)))
    return 0


def cmd_seed_vars(args):
    q = _load_quiver(args.quiver)
    registry = enumerate_pattern(Seed.initial(q), args.depth, dedupe=True)
    if args.jsonl:
        print(registry.to_json_lines())
        return 0
    variables = sorted(v.pretty() for v in registry.cluster_variables)
    payload = {
        "variables": [v.term_list_json() for v in registry.cluster_variables],
        "count": len(variables),
        "seeds": len(registry.seeds),
        "stabilized": registry.stabilized,
    }
    _emit(payload, args.format, "\n".join(variables))
    return 0


def cmd_rep_chi(args):
    q = _load_quiver(args.quiver)
    rep = QuiverRep.from_json(q, _load_json(args.rep))
    e = _int_list(args.e)
    result = euler_characteristic(rep, e)
    payload = {
        "e": list(result.e),
        "chi": result.chi,
        "countsByPrime": {str(p): c for p, c in result.counts_by_prime.items()},
        "polynomial": [str(c) for c in result.poly],
    }
    _emit(payload, args.format, "chi = %d" % result.chi)
    return 0


def _character_inputs(args):
    q = _load_quiver(args.quiver)
    rule = CoefficientRule(q)
    module = None
    if args.rep:
        if args.rep_quiver:
            rep_quiver = IceQuiver.from_json(_load_json(args.rep_quiver),
                                             renumber=False)
        else:
            unfrozen = [v for v in q.vertices if v not in q.frozen_vertices]
            keep = set(unfrozen)
            arrows = [a for a in q.arrows if a.src in keep and a.tgt in keep]
            rep_quiver = IceQuiver(unfrozen, [], arrows)
        module = QuiverRep.from_json(rep_quiver, _load_json(args.rep))
    return rule, module


def cmd_cc_eval(args):
    rule, module = _character_inputs(args)
    value = cc(CharacterInput(_int_list(args.g), module), rule)
    _emit({"laurent": value.to_json(), "pretty": value.pretty()},
          args.format, value.pretty())
    return 0


def cmd_cc_loc(args):
    rule, module = _character_inputs(args)
    reduced = CharacterInput(_int_list(args.g), module) if args.g else None
    obj = LocalizedObject(_int_list(args.frozen), reduced)
    value = cc_loc(obj, rule)
    _emit({"laurent": value.to_json(), "pretty": value.pretty()},
          args.format, value.pretty())
    return 0


def cmd_quasi_check(args):
    morphism = QuasiMorphism.from_json(_load_json(args.morphism))
    report = verify(morphism, args.depth)
    _emit(report.to_json(), args.format,
          "a=%s b=%s c=%s overall=%s" % (
              report.condition_a.status, report.condition_b.status,
              report.condition_c.status,
              "pass" if report.passed else "fail"))
    return 0


def cmd_quasi_psi(args):
    q = _load_quiver(args.quiver)
    direction = "plus" if args.plus else "minus"
    morphism = build_psi(args.at, direction, q)
    _emit(morphism.to_json(), args.format,
          "\n".join("%s -> %s" % (name, img.pretty())
                    for name, img in sorted(morphism.images.items())))
    return 0


def cmd_gen(args):
    if args.family == "triangle":
        entry = triangle_example()
    elif args.family == "polygon":
        triangulation = None
        if args.diagonals:
            pairs = [p.split("-") for p in args.diagonals.split(",")]
            triangulation = [(int(a), int(b)) for a, b in pairs]
        entry = polygon_ice_quiver(args.n, triangulation)
    elif args.family == "grid":
        entry = grid_ice_quiver(args.k, args.n)
    else:
        raise DomainError("unknown generator family %r" % args.family)
    payload = {
        "name": entry.name,
        "quiver": entry.quiver.to_json(),
        "potential": entry.potential.to_json(),
        "degenerate": entry.degenerate,
        "labels": {str(k): v for k, v in entry.labels.items()},
    }
    _emit(payload, args.format,
          "%s: %s\npotential: %r" % (entry.name, entry.quiver, entry.potential))
    return 0


def cmd_serve(args):
    from .service import run_server
    run_server(args.port, args.state)
    return 0


def _leaf_format(parser):
    # SUPPRESS keeps a leaf-level --format from clobbering the root default
    parser.add_argument("--format", choices=("json", "pretty"),
                        default=argparse.SUPPRESS)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="icecluster",
        description="Cluster algebras with coefficients from ice quivers "
                    "with potential")
    parser.add_argument("--format", choices=("json", "pretty"), default="json")
    sub = parser.add_subparsers(dest="group")

    iqp = sub.add_parser("iqp").add_subparsers(dest="verb")
    m = iqp.add_parser("mutate")
    m.add_argument("--at", type=int, required=True)
    m.add_argument("--quiver", required=True)
    m.add_argument("--potential")
    m.add_argument("--trace", action="store_true")
    _leaf_format(m)
    m.set_defaults(func=cmd_iqp_mutate)
    r = iqp.add_parser("reduce")
    r.add_argument("--quiver", required=True)
    r.add_argument("--potential")
    _leaf_format(r)
    r.set_defaults(func=cmd_iqp_reduce)

    seed = sub.add_parser("seed").add_subparsers(dest="verb")
    wk = seed.add_parser("walk")
    wk.add_argument("--quiver", required=True)
    wk.add_argument("--mutations", default="")
    wk.add_argument("--depth", type=int)
    _leaf_format(wk)
    wk.set_defaults(func=cmd_seed_walk)
    vs = seed.add_parser("vars")
    vs.add_argument("--quiver", required=True)
    vs.add_argument("--depth", type=int, default=4)
    vs.add_argument("--jsonl", action="store_true",
                    help="emit the seed registry as JSON lines")
    _leaf_format(vs)
    vs.set_defaults(func=cmd_seed_vars)

    rep = sub.add_parser("rep").add_subparsers(dest="verb")
    chi = rep.add_parser("chi")
    chi.add_argument("--quiver", required=True)
    chi.add_argument("--rep", required=True)
    chi.add_argument("--e", required=True)
    _leaf_format(chi)
    chi.set_defaults(func=cmd_rep_chi)

    ccp = sub.add_parser("cc").add_subparsers(dest="verb")
    ev = ccp.add_parser("eval")
    ev.add_argument("--quiver", required=True)
    ev.add_argument("--g", required=True)
    ev.add_argument("--rep")
    ev.add_argument("--rep-quiver")
    _leaf_format(ev)
    ev.set_defaults(func=cmd_cc_eval)
    lc = ccp.add_parser("loc")
    lc.add_argument("--quiver", required=True)
    lc.add_argument("--frozen", required=True)
    lc.add_argument("--g")
    lc.add_argument("--rep")
    lc.add_argument("--rep-quiver")
    _leaf_format(lc)
    lc.set_defaults(func=cmd_cc_loc)

    quasi = sub.add_parser("quasi").add_subparsers(dest="verb")
    qc = quasi.add_parser("check")
    qc.add_argument("--morphism", required=True)
    qc.add_argument("--depth", type=int, default=3)
    _leaf_format(qc)
    qc.set_defaults(func=cmd_quasi_check)
    qp = quasi.add_parser("psi")
    qp.add_argument("--at", type=int, required=True)
    qp.add_argument("--quiver", required=True)
    side = qp.add_mutually_exclusive_group(required=True)
    side.add_argument("--plus", action="store_true")
    side.add_argument("--minus", action="store_true")
    _leaf_format(qp)
    qp.set_defaults(func=cmd_quasi_psi)

    gen = sub.add_parser("gen")
    gen.add_argument("family", choices=("triangle", "polygon", "grid"))
    gen.add_argument("--n", type=int, default=4)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--fan", action="store_true")
    gen.add_argument("--diagonals")
    _leaf_format(gen)
    gen.set_defaults(func=cmd_gen)

    serve = sub.add_parser("serve")
    serve.add_argument("--port", type=int, default=8023)
    serve.add_argument("--state")
    serve.set_defaults(func=cmd_serve)
    return parser


def cli_dispatch(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0,) else 0
    if not hasattr(args, "func"):
        parser.print_usage()
        return USAGE_EXIT
    try:
        return args.func(args)
    except GuardError as exc:
        print(json.dumps({"error": "guard", "message": str(exc),
                          "witness": _jsonable(exc.witness)}), file=sys.stderr)
        return GUARD_EXIT
    except DomainError as exc:
        print(json.dumps({"error": "domain", "message": str(exc),
                          "witness": _jsonable(exc.witness)}), file=sys.stderr)
        return DOMAIN_EXIT
    except FileNotFoundError as exc:
        print(json.dumps({"error": "domain", "message": str(exc)}),
              file=sys.stderr)
        return DOMAIN_EXIT


def _jsonable(value):
    try:
        json.dumps(value)
        return value
    except (TypeError, ValueError):
        return repr(value)


def main():
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
