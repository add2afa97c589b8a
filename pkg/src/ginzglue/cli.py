"""
Command-line front end.

Inputs are triangulation JSON files (``{"triangles": [...], "boundary":
[...]}``), ribbon graph JSON, dg-category dumps or ``corpus:<name>`` for a
built-in surface.  Exit codes: 0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .dgcat import (DgError, FreeDgCategory, check_dg, collared, dump, interior_ginzburg,
                    parse_dump, relative_ginzburg)
from .glue import GlueError, SignLedger, assemble_surface, compare_with_direct
from .homology import HomologyError, PathLimitError, betti_table
from .linalg import bareiss_det
from .ncpoly import CompositionError
from .quiver import (QuiverError, b_matrix, flip_mutation_check, interior_quiver, k0_mutation,
                     potential_of_triangulation, quiver_of_triangulation)
from .ribbon import RibbonError, RibbonGraph
from .spin import (SpinError, class_key, classify_spin, monodromy, spin_from_assembly)
from .triangulation import (CORPUS, IdealTriangulation, TriangulationError, dual_ribbon_graph,
                            flip, require_valid)


class InputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_triangulation(path: str) -> IdealTriangulation:
    if path.startswith("corpus:"):
        name = path[len("corpus:"):]
        if name not in CORPUS:
            raise InputError(f"unknown corpus surface {name!r}; "
                             f"choose from {', '.join(sorted(CORPUS))}")
        return CORPUS[name]
    data = _read_json(path)
    if "triangles" not in data:
        raise InputError(f"{path} is not a triangulation")
    t = IdealTriangulation.from_json(data)
    require_valid(t)
    return t


def load_graph(path: str) -> tuple[RibbonGraph, IdealTriangulation | None]:
    if path.startswith("corpus:"):
        t = load_triangulation(path)
        return dual_ribbon_graph(t), t
    data = _read_json(path)
    if "triangles" in data:
        t = load_triangulation(path)
        return dual_ribbon_graph(t), t
    return RibbonGraph.from_json(data), None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


# -- commands -------------------------------------------------------------------

def cmd_dual(args) -> int:
    _emit(dual_ribbon_graph(load_triangulation(args.file)).to_json())
    return 0


def cmd_quiver(args) -> int:
    t = load_triangulation(args.file)
    q = quiver_of_triangulation(t)
    qi = interior_quiver(t)
    _emit({"full": {"quiver": q.to_json(), "potential": str(potential_of_triangulation(t))},
           "interior": {"quiver": qi.to_json(),
                        "potential": str(potential_of_triangulation(t, interior=True)),
                        "b_matrix": b_matrix(qi).to_json()}})
    return 0


def _category(t: IdealTriangulation, kind: str) -> FreeDgCategory:
    if kind == "relative":
        return relative_ginzburg(t)
    if kind == "interior":
        return interior_ginzburg(t)
    if kind == "collared":
        return collared(t)
    if kind == "glued":
        return assemble_surface(t)[0]
    raise InputError(f"unknown category kind {kind}")


def cmd_ginzburg(args) -> int:
    C = _category(load_triangulation(args.file), args.kind)
    sys.stdout.write(dump(C))
    issues = check_dg(C)
    for i in issues:
        print(f"# dg check failed: {i}", file=sys.stderr)
    return 1 if issues else 0


def _load_seed_signs(path: str | None) -> dict[int, int] | None:
    if path is None:
        return None
    data = _read_json(path)
    if "signs" in data:
        data = data["signs"]
    try:
        return {int(h): int(s) for h, s in data.items()}
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad seed sign file {path}") from exc


def cmd_glue(args) -> int:
    t = load_triangulation(args.file)
    C, ledger = assemble_surface(t, _load_seed_signs(args.seed_signs), twist=not args.no_twist)
    if args.dump:
        sys.stdout.write(dump(C))
    if args.ledger:
        Path(args.ledger).write_text(json.dumps(ledger.to_json(), indent=2, sort_keys=True) + "\n")
    print(f"assembled {len(C.objects)} objects, {len(C.generators)} generators "
          f"from {len(t.triangles)} triangles")
    for ev in ledger.events:
        tw = " twisted" if ev.twisted else ""
        print(f"edge {ev.edge}: flags {ev.flags[0]},{ev.flags[1]} seed {ev.seed[0]:+d},{ev.seed[1]:+d}"
              f" effective {ev.effective[0]:+d},{ev.effective[1]:+d} ({ev.kind}){tw}")
    if not args.verify:
        return 0
    report = compare_with_direct(t, args.cutoff, (C, ledger), field=args.field)
    for line in report.lines():
        print(line)
    print("OK" if report.ok else "FAIL")
    return 0 if report.ok else 1


def cmd_flip(args) -> int:
    t = load_triangulation(args.file)
    _emit(flip(t, args.edge).to_json())
    if not args.check_mutation:
        return 0
    ok, mutated, direct = flip_mutation_check(t, args.edge)
    print(f"mutation check: {'OK' if ok else 'FAIL'}")
    if not ok:
        print(f"mutated: {mutated.to_json()}")
        print(f"flipped: {direct.to_json()}")
    return 0 if ok else 1


def cmd_betti(args) -> int:
    if not args.file.startswith("corpus:") and not args.file.endswith(".json"):
        try:
            C = parse_dump(Path(args.file).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from exc
    else:
        C = _category(load_triangulation(args.file), args.kind)
    for o in (args.src, args.tgt):
        if o is not None and o not in C.objects:
            raise InputError(f"unknown object {o}")
    srcs = [args.src] if args.src else list(C.objects)
    tgts = [args.tgt] if args.tgt else list(C.objects)
    table = betti_table(C, args.cutoff, args.field, [(x, y) for x in srcs for y in tgts])
    sys.stdout.write(table.to_tsv())
    return 0


def cmd_spin(args) -> int:
    g, t = load_graph(args.file)
    if args.action == "count":
        print(len(classify_spin(g, args.method)))
        return 0
    if args.action == "list":
        out = []
        for s in classify_spin(g, args.method):
            out.append({"monodromy": {f"{a}-{b}": x for (a, b), x in monodromy(g, s).items()},
                        "structure": s.to_json()})
        _emit(out)
        return 0
    if args.ledger:
        ledger = SignLedger.from_json(_read_json(args.ledger))
    elif t is not None:
        ledger = assemble_surface(t)[1]
    else:
        raise InputError("from-ledger needs --ledger or a triangulation")
    s = spin_from_assembly(ledger, g)
    _emit({"class": list(class_key(g, s)),
           "monodromy": {f"{a}-{b}": x for (a, b), x in monodromy(g, s).items()},
           "structure": s.to_json()})
    return 0


def cmd_k0(args) -> int:
    t = load_triangulation(args.file)
    m = k0_mutation(t, args.edge)
    det = bareiss_det(m.rows)
    e = str(args.edge)
    fixed = all(m.column(f) == {m.target[m.source.index(f)]: 1} for f in m.source if f != e)
    _emit({"matrix": m.to_json(), "determinant": det, "unimodular": abs(det) == 1,
           "fixes_other_classes": fixed})
    return 0 if abs(det) == 1 and fixed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ginzglue", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dual", help="dual ribbon graph as JSON")
    s.add_argument("file")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("quiver", help="quiver and potential, full and interior")
    s.add_argument("file")
    s.set_defaults(func=cmd_quiver)

    s = sub.add_parser("ginzburg", help="dg-category dump")
    s.add_argument("file")
    kind = s.add_mutually_exclusive_group()
    kind.add_argument("--relative", dest="kind", action="store_const", const="relative")
    kind.add_argument("--interior", dest="kind", action="store_const", const="interior")
    kind.add_argument("--collared", dest="kind", action="store_const", const="collared")
    s.set_defaults(func=cmd_ginzburg, kind="relative")

    s = sub.add_parser("glue", help="assemble from triangles and compare")
    s.add_argument("file")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--cutoff", type=int, default=9)
    s.add_argument("--field", default="q")
    s.add_argument("--seed-signs")
    s.add_argument("--no-twist", action="store_true")
    s.add_argument("--ledger", help="write the sign ledger JSON here")
    s.add_argument("--dump", action="store_true", help="print the assembled category")
    s.set_defaults(func=cmd_glue)

    s = sub.add_parser("flip", help="flip an internal edge")
    s.add_argument("file")
    s.add_argument("edge", type=int)
    s.add_argument("--check-mutation", action="store_true")
    s.set_defaults(func=cmd_flip)

    s = sub.add_parser("betti", help="bigraded Betti numbers as TSV")
    s.add_argument("file", help="triangulation JSON, corpus:<name> or a dump")
    s.add_argument("--src")
    s.add_argument("--tgt")
    s.add_argument("--cutoff", type=int, default=9)
    s.add_argument("--field", default="q")
    s.add_argument("--kind", default="relative",
                   choices=["relative", "interior", "collared", "glued"])
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("spin", help="spin structure classification")
    s.add_argument("file")
    s.add_argument("action", choices=["count", "list", "from-ledger"])
    s.add_argument("--method", default="auto", choices=["auto", "brute", "cocycle"])
    s.add_argument("--ledger")
    s.set_defaults(func=cmd_spin)

    s = sub.add_parser("k0", help="K0 mutation matrix of a flip")
    s.add_argument("file")
    s.add_argument("edge", type=int)
    s.set_defaults(func=cmd_k0)
    return p


INPUT_ERRORS = (InputError, TriangulationError, RibbonError, QuiverError, DgError, GlueError,
                HomologyError, PathLimitError, SpinError, CompositionError, KeyError, ValueError)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
