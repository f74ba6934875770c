"""Command-line driver.

Exit codes: 0 success, 1 domain-negative result (no stable matching, tie,
failed verification), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import counting, reductions
from .core import parse_instance, serialize_instance, serialize_matching
from .errors import (
    EmptyConstruction,
    RoomrotError,
    TieDetected,
    VerificationFailed,
)
from .geometry import attribute_prefs, euclidean_prefs, instance_from_json, instance_to_json
from .irving import find_stable_matching
from .oneattr import OneAttrInstance, solve_1attr
from .rotations import (
    attribution_consistency_check,
    discover_rotations,
    gofi_dot,
    hasse_dot,
    rotation_graph,
)


def _read(path):
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _emit(args, obj, text):
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _load_instance(path):
    return parse_instance(_read(path))


def cmd_solve(args):
    inst = _load_instance(args.file)
    m = find_stable_matching(inst)
    if m is None:
        _emit(args, {"stable": False}, "no stable assignment")
        return 1
    _emit(args, {"stable": True, "pairs": [[a + 1, b + 1] for a, b in m.pairs()]},
          serialize_matching(m))
    return 0


def cmd_count(args):
    inst = _load_instance(args.file)
    results = []
    poset = None
    methods = ["downsets", "maxis", "brute"] if args.method == "all" else [args.method]
    for method in methods:
        if method == "brute":
            results.append(counting.count_brute_force(inst))
            continue
        poset = poset if poset is not None else discover_rotations(inst)
        if poset is None:
            results.append(counting.StableCount(0, method))
        elif method == "downsets":
            results.append(counting.count_via_downsets(poset))
        else:
            results.append(counting.count_via_maximal_is(rotation_graph(poset), poset))
    if args.method == "all" and len({r.value for r in results}) != 1:
        print("method disagreement: " + ", ".join(f"{r.method}={r.value}" for r in results),
              file=sys.stderr)
        return 1
    obj = [counting.count_result_json(r, poset) for r in results]
    text = "\n".join(f"{r.method}: {r.value}" for r in results) + "\n"
    _emit(args, obj if len(obj) > 1 else obj[0], text)
    return 0


def cmd_rotations(args):
    inst = _load_instance(args.file)
    poset = discover_rotations(inst)
    if poset is None:
        _emit(args, {"stable": False}, "no stable assignment")
        return 1
    if args.dot == "hasse":
        print(hasse_dot(poset), end="")
        return 0
    if args.dot == "gofi":
        print(gofi_dot(poset), end="")
        return 0
    names = poset.names()
    check = attribution_consistency_check(inst, seed=args.seed, poset=poset)
    obj = {
        "rotations": [
            {
                "name": names[i],
                "triples": [[e + 1, h + 1, s + 1] for e, h, s in rot.triples],
                "singleton": i in poset.singletons,
                "dual": names[poset.dual_of[i]] if i in poset.dual_of else None,
            }
            for i, rot in enumerate(poset.rotations)
        ],
        "hasse": sorted([names[a], names[b]] for a, b in poset.hasse_edges()),
        "gofi_edges": sorted(sorted(names[v] for v in e) for e in rotation_graph(poset).edges),
        "attribution_consistent": check.consistent,
    }
    lines = []
    for i, rot in enumerate(poset.rotations):
        kind = "singleton" if i in poset.singletons else f"dual of {names[poset.dual_of[i]]}"
        body = " ".join(f"{e + 1}|{h + 1},{s + 1}" for e, h, s in rot.triples)
        lines.append(f"{names[i]} ({kind}): {body}")
    lines.append("hasse: " + "  ".join(f"{names[a]}<{names[b]}" for a, b in poset.hasse_edges()))
    _emit(args, obj, "\n".join(lines) + "\n")
    return 0


def cmd_enumerate(args):
    inst = _load_instance(args.file)
    poset = discover_rotations(inst)
    if poset is None:
        _emit(args, {"stable": False, "matchings": []}, "no stable assignment")
        return 1
    matchings = counting.enumerate_stable_matchings(inst, poset)
    obj = {"count": str(len(matchings)),
           "matchings": [[[a + 1, b + 1] for a, b in m.pairs()] for m in matchings]}
    text = "\n".join(" ".join(f"({a + 1},{b + 1})" for a, b in m.pairs()) for m in matchings)
    _emit(args, obj, text + "\n")
    return 0


def cmd_oracle(args):
    inst = _load_instance(args.file)
    res = counting.count_brute_force(inst)
    _emit(args, counting.count_result_json(res), f"{res.method}: {res.value}\n")
    return 0


def _load_bis_cycles(path):
    kind, *rest = reductions.parse_graph(_read(path))
    if kind != "bip":
        raise VerificationFailed("bis reductions need a bipartite graph file (p bip ...)")
    n1, n2, edges = rest
    return reductions.bis_cycles_from_bipartite(n1, n2, edges)


def cmd_reduce(args):
    if args.kind in ("is4attr", "is3euclid"):
        kind, g = reductions.parse_graph(_read(args.graph))
        if kind != "graph":
            raise VerificationFailed("is reductions need a plain graph file")
        cs = reductions.cycle_structure(reductions.double_cover(g))
        gi = reductions.build_4attr(cs) if args.kind == "is4attr" else reductions.build_3euclid(cs)
    else:
        bc = _load_bis_cycles(args.graph)
        gi = (
            reductions.build_bis_3attr(bc)
            if args.kind == "bis3attr"
            else reductions.build_bis_2euclid(bc)
        )
    _write(args.output, json.dumps(instance_to_json(gi), indent=2, sort_keys=True) + "\n")
    if args.sr:
        inst = attribute_prefs(gi) if gi.model == "attribute" else euclidean_prefs(gi)
        _write(args.sr, serialize_instance(inst))
    print(f"wrote {args.output}" + (f" and {args.sr}" if args.sr else ""))
    return 0


def cmd_prefs(args):
    gi = instance_from_json(_read(args.file), allow_float=args.unsafe_float)
    inst = attribute_prefs(gi) if gi.model == "attribute" else euclidean_prefs(gi)
    text = serialize_instance(inst)
    if args.output:
        _write(args.output, text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return 0


def _oneattr_from_coords(path):
    from fractions import Fraction

    from .errors import MalformedFile

    coords = []
    for ln in _read(path).splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 2 or parts[1] not in ("A", "B"):
            raise MalformedFile(f"bad coordinate line {ln!r}")
        try:
            coords.append((Fraction(parts[0]), parts[1]))
        except ValueError:
            raise MalformedFile(f"bad position in {ln!r}") from None
    return OneAttrInstance.from_coordinates(coords)


def cmd_oneattr(args):
    if args.coords:
        oa = _oneattr_from_coords(args.coords)
    elif args.types:
        oa = OneAttrInstance(args.types)
    else:
        print("oneattr needs a type string or --coords FILE", file=sys.stderr)
        return 2
    res = solve_1attr(oa)
    obj = {
        "types": oa.types,
        "count": res.count,
        "assignments": [[[a + 1, b + 1] for a, b in m.pairs()] for m in res.assignments],
    }
    text = f"count: {res.count}\n" + "\n".join(
        " ".join(f"({a + 1},{b + 1})" for a, b in m.pairs()) for m in res.assignments
    )
    _emit(args, obj, text + "\n")
    return 0


def cmd_verify(args):
    kind, g = reductions.parse_graph(_read(args.graph))
    if kind != "graph":
        raise VerificationFailed("verify needs a plain graph file")
    report = reductions.verify_reduction(g, route=args.route)
    obj = {
        "route": report.route,
        "people": report.people,
        "rotations": report.rotations,
        "count": str(report.stable_count),
        "expected_count": str(report.expected_count),
        "isolated_vertices": report.isolated_vertices,
        "clauses": report.clauses,
    }
    text = (
        f"route {report.route}: pass ({', '.join(report.clauses)})\n"
        f"people: {report.people}, rotations: {report.rotations}, "
        f"count: {report.stable_count}\n"
    )
    _emit(args, obj, text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="roomrot")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=argparse.ArgumentParser)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("solve", help="find one stable assignment")
    p.add_argument("file")
    p.set_defaults(fn=cmd_solve)

    p = add_parser("count", help="count stable assignments")
    p.add_argument("file")
    p.add_argument("--method", choices=["downsets", "maxis", "brute", "all"], default="downsets")
    p.set_defaults(fn=cmd_count)

    p = add_parser("rotations", help="rotation poset, duals, Hasse diagram")
    p.add_argument("file")
    p.add_argument("--dot", choices=["hasse", "gofi"])
    p.set_defaults(fn=cmd_rotations)

    p = add_parser("enumerate", help="list every stable assignment")
    p.add_argument("file")
    p.set_defaults(fn=cmd_enumerate)

    p = add_parser("oracle", help="brute-force count (small instances)")
    p.add_argument("file")
    p.set_defaults(fn=cmd_oracle)

    p = add_parser("reduce", help="build a geometric instance from a graph")
    p.add_argument("kind", choices=["is4attr", "is3euclid", "bis3attr", "bis2euclid"])
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--sr", help="also derive and write the roommate instance")
    p.set_defaults(fn=cmd_reduce)

    p = add_parser("prefs", help="derive preference lists from geometry JSON")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--unsafe-float", action="store_true")
    p.set_defaults(fn=cmd_prefs)

    p = add_parser("oneattr", help="solve a 1-attribute type string")
    p.add_argument("types", nargs="?")
    p.add_argument("--coords", help="file of `position type` lines instead of a type string")
    p.set_defaults(fn=cmd_oneattr)

    p = add_parser("verify", help="end-to-end reduction verification")
    p.add_argument("graph")
    p.add_argument("--route", choices=["attr4", "euclid3"], default="attr4")
    p.set_defaults(fn=cmd_verify)

    return parser


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.fn(args)
    except (TieDetected, VerificationFailed, EmptyConstruction) as e:
        print(f"failed: {e}", file=sys.stderr)
        return 1
    except RoomrotError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
