"""ribbonpile command line.

Exit status: 0 success, 1 bad input or violated precondition, 2 a
verification found a counterexample.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import verify
from .formats import ParseError, dump_digraph, dump_graph, fmt_chips, load, parse_assignments, parse_chips, parse_ids
from .jacobian import (EmbeddedGraph, bernardi_action, bernardi_orientation, enumerate_quasitrees, is_quasitree,
                       jacobian_group, phi, quasitree_to_tour, tour_to_quasitree)
from .kernels import GameOverrun
from .oracles import BudgetExceeded
from .ribbon import RibbonDigraph, RibbonError, RibbonGraph, bidirect, dual, genus, medial
from .rotor import Arborescence, rotor_action_digraph, rotor_action_undirected
from .sandpile import count_arborescences, group_structure
from .tours import EulerianTour, check_root_independence, enumerate_compatible_tours, tour_rotor_action


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for failed verifications here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load(path: str):
    obj = load(path)
    if isinstance(obj, RibbonDigraph):
        obj.check()
        return obj, None
    g, orient = obj
    g.check()
    return g, orient


def _graph(path: str) -> tuple[RibbonGraph, dict]:
    obj, orient = _load(path)
    if not isinstance(obj, RibbonGraph):
        raise UsageError(f"{path}: this command needs a ribbon_graph input")
    return obj, orient


def _embedded(path: str) -> EmbeddedGraph:
    g, orient = _graph(path)
    missing = [e for e, _, _ in g.edges if e not in orient]
    if missing:
        raise UsageError(f"{path}: no orient line for {', '.join(missing)}")
    return EmbeddedGraph.make(g, orient)


def _digraph(path: str, double: bool) -> RibbonDigraph:
    obj, _ = _load(path)
    if isinstance(obj, RibbonDigraph):
        return obj
    return bidirect(obj) if double else medial(obj)


def _edge_set(eg: EmbeddedGraph, text: str) -> frozenset[str]:
    q = frozenset(parse_ids(text))
    bad = q - set(eg.edges)
    if bad:
        raise UsageError(f"unknown edges {', '.join(sorted(bad))}")
    return q


def fmt_quasitree(eg: EmbeddedGraph, q) -> str:
    return " ".join(["quasitree"] + [e for e in eg.edges if e in q])


def fmt_orientation(eg: EmbeddedGraph, signs) -> str:
    return " ".join(["orientation"] + [("+" if s > 0 else "-") + e for e, s in zip(eg.edges, signs)])


# ----------------------------------------------------------------- verbs ---

def cmd_validate(a, out):
    obj = load(a.file)
    obj = obj if isinstance(obj, RibbonDigraph) else obj[0]
    diags = obj.validate()
    if diags:
        for d in diags:
            out.append(f"invalid {d}")
        return 1
    out.append("valid true")
    return 0


def cmd_genus(a, out):
    obj, _ = _load(a.file)
    out.append(f"genus {genus(obj)}")


def cmd_dual(a, out):
    g, _ = _graph(a.file)
    out.append(dump_graph(dual(g)).rstrip("\n"))


def cmd_medial(a, out):
    g, _ = _graph(a.file)
    out.append(dump_digraph(medial(g)).rstrip("\n"))


def cmd_group(a, out):
    d = _digraph(a.file, a.double)
    inv = group_structure(d).invariant_factors or [1]
    out.append("invariants " + " ".join(map(str, inv)))


def cmd_arbcount(a, out):
    d = _digraph(a.file, a.double)
    roots = [a.root] if a.root else list(d.vertices)
    for r in roots:
        if r not in d.vertices:
            raise UsageError(f"unknown vertex {r}")
        out.append(f"arborescences {count_arborescences(d, r)}" if a.root else
                   f"arborescences {r} {count_arborescences(d, r)}")


def cmd_tours(a, out):
    d = _digraph(a.file, a.double)
    tours = sorted(enumerate_compatible_tours(d), key=lambda t: t.order)
    out.append(f"count {len(tours)}")
    out.extend(str(t) for t in tours)


def cmd_act(a, out):
    x = parse_chips(a.chips)
    if a.quasitree is not None:
        eg = _embedded(a.file)
        q = _edge_set(eg, a.quasitree)
        if not is_quasitree(eg, q):
            raise UsageError(f"{{{', '.join(sorted(q))}}} is not a quasi-tree")
        res = tour_rotor_action(eg.medial, x, quasitree_to_tour(eg, q), arc=a.arc, verify=a.check)
        out.append(fmt_quasitree(eg, tour_to_quasitree(eg, res)))
        return
    if a.tour is None:
        raise UsageError("act needs --tour or --quasitree")
    d = _digraph(a.file, a.double)
    res = tour_rotor_action(d, x, EulerianTour.of(parse_ids(a.tour)), arc=a.arc, verify=a.check)
    out.append(str(res))


def cmd_rotor_act(a, out):
    x = parse_chips(a.chips)
    obj, _ = _load(a.file)
    if isinstance(obj, RibbonGraph):
        if a.tree is None:
            raise UsageError("rotor-act on a ribbon_graph needs --tree")
        res = rotor_action_undirected(obj, a.root, x, parse_ids(a.tree))
        out.append(" ".join(["tree"] + [e for e, _, _ in obj.edges if e in res]))
        return
    if a.arb is None:
        raise UsageError("rotor-act on a ribbon_digraph needs --arb")
    t = Arborescence.make(a.root, parse_assignments(a.arb, "rotor"))
    out.append(str(rotor_action_digraph(obj, a.root, x, t)))


def cmd_root_independent(a, out):
    g, _ = _graph(a.file)
    ok, wit = check_root_independence(g)
    out.append(f"root-independent {str(ok).lower()}")
    if wit is not None:
        out.append(f"witness roots={wit.roots[0]},{wit.roots[1]} tree={','.join(sorted(wit.tree))}")


def cmd_quasitrees(a, out):
    eg = _embedded(a.file)
    qs = sorted(enumerate_quasitrees(eg), key=lambda q: (len(q), [eg.edges.index(e) for e in eg.edges if e in q]))
    out.append(f"count {len(qs)}")
    out.extend(fmt_quasitree(eg, q) for q in qs)


def cmd_jacobian(a, out):
    eg = _embedded(a.file)
    inv = jacobian_group(eg).invariant_factors or [1]
    out.append("invariants " + " ".join(map(str, inv)))


def cmd_phi(a, out):
    eg = _embedded(a.file)
    out.append(fmt_chips(eg.medial.vertices, phi(eg, parse_chips(a.chips))))


def cmd_bernardi(a, out):
    eg = _embedded(a.file)
    q = _edge_set(eg, a.quasitree)
    e0 = a.edge or eg.edges[0]
    if a.chips is not None:
        out.append(fmt_quasitree(eg, bernardi_action(eg, parse_chips(a.chips), q, e0)))
        return
    if not is_quasitree(eg, q):
        raise UsageError(f"{{{', '.join(sorted(q))}}} is not a quasi-tree")
    out.append(fmt_orientation(eg, bernardi_orientation(eg, q, e0)))


def cmd_verify(a, out):
    inst = None
    if a.file:
        th = a.theorem
        if th in ("best-count", "tour-rotor-canonical", "lemma-first-edge"):
            inst = _digraph(a.file, a.double)
        elif th in ("unicycle-reversal", "root-independence-planarity"):
            inst = _graph(a.file)[0]
        elif th in ("phi-isomorphism", "action-agreement"):
            inst = _embedded(a.file)
        elif th in verify.THEOREMS:
            raise UsageError(f"{th} runs over a fixed catalog and takes no input file")
    out.append(f"seed {a.seed}")
    rep = verify.run(a.theorem, seed=a.seed, instance=inst)
    out.append(f"theorem {rep.name}")
    out.extend(rep.lines)
    out.append(f"checked {rep.checked}")
    out.append(f"result {'pass' if rep.ok else 'fail'}")
    return 0 if rep.ok else 2


# ---------------------------------------------------------------- parser ---

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ribbonpile", description="Ribbon graphs, sandpile groups and rotor-routing on tours.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, help, file=True):
        s = sub.add_parser(name, help=help)
        if file:
            s.add_argument("file", help="input file, or the name of a bundled fixture")
        s.set_defaults(fn=fn)
        return s

    def double_flag(s):
        s.add_argument("--double", action="store_true",
                       help="for a ribbon_graph, use its bidirected digraph instead of the medial digraph")

    verb("validate", cmd_validate, "check an input file and list problems")
    verb("genus", cmd_genus, "genus of the traced faces")
    verb("dual", cmd_dual, "dual ribbon graph")
    verb("medial", cmd_medial, "medial ribbon digraph")
    s = verb("group", cmd_group, "invariant factors of the sandpile group")
    double_flag(s)
    s = verb("arbcount", cmd_arbcount, "number of in-arborescences per root")
    s.add_argument("--root")
    double_flag(s)
    s = verb("tours", cmd_tours, "all compatible Eulerian tours")
    double_flag(s)
    s = verb("act", cmd_act, "tour-rotor action on a tour or a quasi-tree")
    s.add_argument("--chips", required=True, help="e.g. 'e1=-1,e3=1' (unlisted vertices get 0)")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--tour", help="arc ids in tour order")
    g.add_argument("--quasitree", help="edge ids; the tour is the medial tour of this quasi-tree")
    s.add_argument("--arc", help="auxiliary first arc (default: least arc id)")
    s.add_argument("--check", action="store_true", help="recompute through every arc and assert agreement")
    double_flag(s)
    s = verb("rotor-act", cmd_rotor_act, "rotor-routing action on trees or arborescences")
    s.add_argument("--root", required=True)
    s.add_argument("--chips", required=True)
    s.add_argument("--tree", help="edge ids of a spanning tree (ribbon_graph input)")
    s.add_argument("--arb", help="'v=arc,...' for every non-root vertex (ribbon_digraph input)")
    verb("root-independent", cmd_root_independent, "is the rotor-routing action independent of the root")
    verb("quasitrees", cmd_quasitrees, "all quasi-trees")
    verb("jacobian", cmd_jacobian, "invariant factors of the Jacobian")
    s = verb("phi", cmd_phi, "image of an edge vector on the medial digraph")
    s.add_argument("--chips", required=True, help="edge vector, e.g. 'e3=-1'")
    s = verb("bernardi", cmd_bernardi, "Bernardi orientation of a quasi-tree, or the action with --chips")
    s.add_argument("--quasitree", required=True)
    s.add_argument("--edge", help="starting edge (default: first edge)")
    s.add_argument("--chips", help="edge vector to act with")
    s = sub.add_parser("verify", help="check a theorem on a seeded battery or one input")
    s.add_argument("theorem", choices=verify.THEOREMS)
    s.add_argument("file", nargs="?")
    s.add_argument("--seed", type=int, default=0)
    double_flag(s)
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out: list[str] = []
    try:
        code = args.fn(args, out) or 0
    except (ParseError, RibbonError, UsageError, BudgetExceeded, GameOverrun, FileNotFoundError) as exc:
        for line in out:
            print(line)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in out:
        print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
