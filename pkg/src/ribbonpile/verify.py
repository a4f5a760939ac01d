"""Theorem checkers over seeded batteries of instances.

Each checker returns a Report; `ok` is False as soon as one instance fails,
and `lines` says where.  The CLI `verify` verb and the acceptance tests both
run through here.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .formats import fixture
from .generators import (ROOT_BATTERY_GRAPHS, catalog_digraph_variants, catalog_ribbon_graph,
                         eulerian_digraph_catalog, loopfree_graph_catalog, random_eulerian_digraph,
                         random_ribbon_graph, random_rotation_graph)
from .jacobian import EmbeddedGraph, enumerate_quasitrees, jacobian_group, phi, project_pi, verify_action_agreement
from .oracles import BudgetExceeded, enumerate_arborescences, routing_reachability
from .ribbon import RibbonDigraph, RibbonGraph, bidirect, genus, medial
from .rotor import (ChipRotorState, reverse_on_cycle, reverse_unicycle_equivalent, rotor_action_digraph,
                    rotor_equivalent, route, unicycle_cycle, unicycle_separating)
from .sandpile import add, chi, count_arborescences, decompose_cycles_cuts, group_structure, linearly_equivalent
from .tours import arb_to_tour, check_root_independence, enumerate_compatible_tours, first_edge_states, tour_to_arb

THEOREMS = ("best-count", "tour-rotor-canonical", "lemma-first-edge", "prop-cycles-cuts",
            "unicycle-reversal", "root-independence-planarity", "phi-isomorphism", "action-agreement")


@dataclass
class Report:
    name: str
    ok: bool = True
    checked: int = 0
    lines: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.lines.append("FAIL " + msg)

    def note(self, msg: str) -> None:
        self.lines.append(msg)


# ------------------------------------------------------------- batteries ---

def digraph_battery(seed: int = 0, count: int = 25) -> list[tuple[str, RibbonDigraph]]:
    g, _ = fixture("torus")
    out = [("fig1", fixture("fig1")), ("c3", fixture("c3")), ("medial(torus)", medial(g))]
    rng = random.Random(seed)
    for i in range(count):
        out.append((f"random#{i}", random_eulerian_digraph(rng, 6, 12)))
    return out


def unicycle_battery(seed: int = 0, count: int = 10) -> list[tuple[str, RibbonGraph]]:
    out = [("k4p", fixture("k4p")[0]), ("torus", fixture("torus")[0])]
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(2, 5)
        m = rng.randint(n - 1, 8)
        out.append((f"random#{i}", random_ribbon_graph(rng, n, m, loops=False)))
    return out


def root_battery(seed: int = 0, per_graph: int = 6) -> list[tuple[str, RibbonGraph]]:
    out = [("k4p", fixture("k4p")[0]), ("torus", fixture("torus")[0])]
    rng = random.Random(seed)
    for name, (n, edges) in ROOT_BATTERY_GRAPHS.items():
        vs = [f"v{i}" for i in range(n)]
        eds = [(f"e{i + 1}", vs[a], vs[b]) for i, (a, b) in enumerate(edges)]
        for k in range(per_graph):
            out.append((f"{name}#{k}", random_rotation_graph(rng, vs, eds)))
    return out


def embedded_battery(seed: int = 0, count: int = 5) -> list[tuple[str, EmbeddedGraph]]:
    g, o = fixture("torus")
    out = [("torus", EmbeddedGraph.make(g, o))]
    rng = random.Random(seed)
    while len(out) <= count:
        # five edges; instances with fewer than 3 quasi-trees test almost nothing
        h = random_ribbon_graph(rng, rng.randint(1, 4), 5, loops=True)
        orient = {e: rng.randrange(2) for e, _, _ in h.edges}
        eg = EmbeddedGraph.make(h, orient)
        if len(enumerate_quasitrees(eg)) >= 3:
            out.append((f"random#{len(out) - 1}", eg))
    return out


# -------------------------------------------------------------- checkers ---

def check_best_count(battery) -> Report:
    rep = Report("best-count")
    for name, d in battery:
        tours = enumerate_compatible_tours(d)
        for v in d.vertices:
            k = count_arborescences(d, v)
            arbs = enumerate_arborescences(d, v)
            rep.checked += 1
            if not (len(tours) == k == len(arbs)):
                rep.fail(f"{name} root {v}: tours {len(tours)}, det {k}, oracle {len(arbs)}")
        rep.note(f"{name}: {len(tours)} compatible tours")
    return rep


def check_tour_rotor_canonical(battery, seed: int = 0, class_limit: int = 64, sample: int = 20) -> Report:
    """Every (root, first arc) pair gives the same action, and the action is simply transitive."""
    rep = Report("tour-rotor-canonical")
    rng = random.Random(seed)
    for name, d in battery:
        grp = group_structure(d)
        classes = list(grp.elements()) if grp.order <= class_limit else grp.sample(rng, sample)
        full = len(classes) == grp.order
        tours = sorted(enumerate_compatible_tours(d), key=lambda t: t.order)
        arcs = sorted(d.arc_map)
        for t in tours:
            images = []
            for x in classes:
                outs = set()
                for a in arcs:
                    arb = rotor_action_digraph(d, d.tail(a), x, tour_to_arb(d, t, a))
                    outs.add(arb_to_tour(d, arb, a))
                rep.checked += 1
                if len(outs) != 1:
                    rep.fail(f"{name}: {len(outs)} different results for one (class, tour) pair")
                images.append(next(iter(outs)))
            if len(set(images)) != len(images):
                rep.fail(f"{name}: two classes send one tour to the same tour")
            if full and set(images) != set(tours):
                rep.fail(f"{name}: orbit of a tour misses some compatible tours")
        rep.note(f"{name}: order {grp.order}, {len(classes)} classes x {len(tours)} tours x {len(arcs)} arcs")
    return rep


def check_lemma_first_edge(battery, seed: int = 0, pairs: int = 10) -> Report:
    rep = Report("lemma-first-edge")
    rng = random.Random(seed)
    for name, d in battery:
        arcs = sorted(d.arc_map)
        for t in enumerate_compatible_tours(d):
            for _ in range(pairs):
                uv, wz = rng.choice(arcs), rng.choice(arcs)
                s1, s2 = first_edge_states(d, t, uv, wz)
                rep.checked += 1
                if not rotor_equivalent(d, s1, s2):
                    rep.fail(f"{name}: first-edge change {uv} -> {wz} not equivalent on {t}")
    return rep


def check_prop_cycles_cuts(max_edges: int = 5) -> Report:
    rep = Report("prop-cycles-cuts")
    for entry in loopfree_graph_catalog(max_edges):
        d = bidirect(catalog_ribbon_graph(entry))
        arcs = sorted(d.arc_map)
        chis = [chi(d, a) for a in arcs]
        for mask in range(1 << len(arcs)):
            F = [arcs[i] for i in range(len(arcs)) if mask >> i & 1]
            x = add({}, *(chis[i] for i in range(len(arcs)) if mask >> i & 1))
            lin = linearly_equivalent(d, x, {})
            dec = decompose_cycles_cuts(d, F) is not None
            rep.checked += 1
            if lin != dec:
                rep.fail(f"graph {entry}: F={F} lin={lin} decomposition={dec}")
    rep.note(f"{len(loopfree_graph_catalog(max_edges))} graphs")
    return rep


def _state_pairs(d: RibbonDigraph, rng: random.Random, k: int):
    outs = {v: d.out_arcs(v) for v in d.vertices}
    for _ in range(k):
        chips = {v: rng.randint(-2, 2) for v in d.vertices}
        rot = {v: rng.choice(o) for v, o in outs.items()}
        s1 = ChipRotorState(chips, rot)
        s2 = s1
        for _ in range(rng.randint(0, 6)):
            s2 = route(d, s2, rng.choice(d.vertices))
        yield s1, s2
        # an unrelated state with the same chip total
        c2 = {v: rng.randint(-2, 2) for v in d.vertices}
        c2[d.vertices[0]] += sum(chips.values()) - sum(c2.values())
        yield s1, ChipRotorState(c2, {v: rng.choice(o) for v, o in outs.items()})


def check_rotor_soundness(seed: int = 0, box: int = 6, pairs: int = 6) -> Report:
    rep = Report("rotor-equivalence-soundness")
    rng = random.Random(seed)
    for entry in eulerian_digraph_catalog(3, 6):
        for d in catalog_digraph_variants(entry, rng):
            for s1, s2 in _state_pairs(d, rng, pairs):
                fast = rotor_equivalent(d, s1, s2)
                # the box must at least hold both endpoints
                b = max([box] + [abs(c) + 2 for s in (s1, s2) for c in s.chips.values()])
                try:
                    slow = routing_reachability(d, s1, s2, b)
                except BudgetExceeded:
                    rep.note(f"inconclusive: {entry}")
                    continue
                rep.checked += 1
                if fast != slow:
                    rep.fail(f"{entry}: residue method says {fast}, routing search says {slow}")
    return rep


def unicycles(d: RibbonDigraph):
    vs = list(d.vertices)
    for pick in product(*(d.out_arcs(v) for v in vs)):
        rot = dict(zip(vs, pick))
        try:
            unicycle_cycle(d, rot)
        except ValueError:
            continue
        yield rot


def check_unicycle_reversal(battery) -> Report:
    """(0, r) ~ (0, r reversed) iff the cycle separates, for every unicycle.

    The equivalence only holds for loop-free graphs. Loopy graphs are still
    evaluated (through rotor_equivalent directly) so the report shows what
    happens there.
    """
    rep = Report("unicycle-reversal")
    for name, g in battery:
        d = bidirect(g)
        loopy = any(a == b for _, a, b in g.edges)
        bad = 0
        n = 0
        for rot in unicycles(d):
            if loopy:
                eq = rotor_equivalent(d, ChipRotorState({}, rot), ChipRotorState({}, reverse_on_cycle(d, rot)))
            else:
                eq = reverse_unicycle_equivalent(g, rot)
            sep = unicycle_separating(g, rot)
            n += 1
            rep.checked += 1
            if eq != sep:
                bad += 1
                if bad <= 3:
                    cyc = unicycle_cycle(d, rot)
                    rep.fail(f"{name} (genus {genus(g)}{', has loops' if loopy else ''}): cycle {cyc} "
                             f"equivalent={eq} separating={sep}")
        rep.note(f"{name}: {n} unicycles, {bad} disagreements")
    return rep


def check_root_independence_planarity(battery) -> Report:
    rep = Report("root-independence-planarity")
    for name, g in battery:
        ind, wit = check_root_independence(g)
        gen = genus(g)
        rep.checked += 1
        line = f"{name}: genus {gen}, root-independent {str(ind).lower()}"
        if ind != (gen == 0):
            rep.fail(line + (" (graph has loops)" if any(a == b for _, a, b in g.edges) else ""))
        else:
            rep.note(line)
    return rep


def check_phi_isomorphism(battery) -> Report:
    rep = Report("phi-isomorphism")
    for name, eg in battery:
        jac = jacobian_group(eg)
        d = eg.medial
        S = group_structure(d)
        for c in jac.cycles:
            rep.checked += 1
            if not linearly_equivalent(d, phi(eg, project_pi(c.vector(eg.edges))), {}):
                rep.fail(f"{name}: phi of cycle {sorted(c.support)} is not 0")
        keys = {S.key(phi(eg, x)) for x in jac.group.elements()}
        if len(keys) != jac.order:
            rep.fail(f"{name}: phi is not injective on classes ({len(keys)} images of {jac.order})")
        if S.order != jac.order:
            rep.fail(f"{name}: |Jac| = {jac.order} but |S(medial)| = {S.order}")
        for a in sorted(d.arc_map):
            rep.checked += 1
            if S.key(chi(d, a)) not in keys:
                rep.fail(f"{name}: class of chi({a}) has no preimage")
        for e in eg.edges:
            minus = {v: -c for v, c in chi(d, eg.med_minus(e)).items()}
            if not linearly_equivalent(d, phi(eg, {e: -1}), minus):
                rep.fail(f"{name}: phi(-1_{e}) is not equivalent to -chi(med-({e}))")
        rep.note(f"{name}: order {jac.order}, invariants {jac.invariant_factors}")
    return rep


def check_action_agreement(battery) -> Report:
    rep = Report("action-agreement")
    for name, eg in battery:
        r = verify_action_agreement(eg)
        rep.checked += r.pairs
        if not r.ok:
            rep.fail(f"{name}: {len(r.mismatches)} of {r.pairs} pairs disagree")
        else:
            rep.note(f"{name}: {r.pairs} pairs agree")
    return rep


def run(theorem: str, seed: int = 0, instance=None) -> Report:
    """Run one theorem check on its default battery, or on a single given instance."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem!r}; choose from {', '.join(THEOREMS)}")
    one = [("input", instance)] if instance is not None else None
    if theorem in ("best-count", "tour-rotor-canonical", "lemma-first-edge"):
        bat = one or digraph_battery(seed)
        fn = {"best-count": lambda b: check_best_count(b),
              "tour-rotor-canonical": lambda b: check_tour_rotor_canonical(b, seed),
              "lemma-first-edge": lambda b: check_lemma_first_edge(b, seed)}[theorem]
        return fn(bat)
    if theorem == "prop-cycles-cuts":
        return check_prop_cycles_cuts()
    if theorem == "unicycle-reversal":
        return check_unicycle_reversal(one or unicycle_battery(seed))
    if theorem == "root-independence-planarity":
        return check_root_independence_planarity(one or root_battery(seed))
    if theorem == "phi-isomorphism":
        return check_phi_isomorphism(one or embedded_battery(seed))
    return check_action_agreement(one or embedded_battery(seed))
