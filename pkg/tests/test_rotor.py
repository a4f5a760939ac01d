import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from helpers import single_edge
from ribbonpile.formats import fixture
from ribbonpile.generators import random_eulerian_digraph, random_ribbon_graph
from ribbonpile.oracles import enumerate_arborescences, routing_reachability
from ribbonpile.ribbon import RibbonError, arc_edge, bidirect, genus
from ribbonpile.rotor import (Arborescence, ChipRotorState, check_arborescence, effectivize, negate, residue,
                              reverse_on_cycle, reverse_unicycle_equivalent, rotor_action_digraph,
                              rotor_action_undirected, rotor_equivalent, route, tree_arborescence, unicycle_cycle,
                              unicycle_separating)
from ribbonpile.sandpile import add, fire, group_structure, linearly_equivalent
from ribbonpile.tours import spanning_trees


def arbs(d, root):
    return [Arborescence.make(root, {d.tail(a): a for a in s}) for s in enumerate_arborescences(d, root)]


def test_route_examples():
    c3 = fixture("c3")
    s = ChipRotorState({"0": 1}, {"0": "a1", "1": "a2", "2": "a3"})
    s2 = route(c3, s, "0")
    assert s2.rotors == s.rotors and s2.chips["0"] == 0 and s2.chips["1"] == 1
    d = fixture("fig1")
    rot = {"1": "e1", "2": "e5", "3": "e3", "4": "e4"}
    s = route(d, ChipRotorState({}, rot), "4")
    assert s.rotors["4"] == "e2" and s.chips == {"4": -1, "1": 1}


def test_full_round_of_routing_is_firing():
    rng = random.Random(0)
    for _ in range(20):
        d = random_eulerian_digraph(rng)
        rot = {v: rng.choice(d.out_arcs(v)) for v in d.vertices}
        x = {v: rng.randint(-3, 3) for v in d.vertices}
        v = rng.choice(d.vertices)
        s = ChipRotorState(x, rot)
        for _ in range(d.outdeg(v)):
            s = route(d, s, v)
        assert s.rotors == rot
        want = fire(d, x, v)
        assert {u: s.chips.get(u, 0) for u in d.vertices} == want


def test_equivalence_basics():
    d = fixture("fig1")
    rot = {"1": "e1", "2": "e5", "3": "e3", "4": "e4"}
    s = ChipRotorState({"1": 1, "2": -1}, rot)
    assert rotor_equivalent(d, s, s)
    assert rotor_equivalent(d, s, route(d, s, "1"))
    for x in ({}, {"1": 1, "4": -1}, fire(d, {"2": 2, "3": -2}, "3")):
        for y in ({}, {"2": 1, "3": -1}):
            assert rotor_equivalent(d, ChipRotorState(x, rot), ChipRotorState(y, rot)) == linearly_equivalent(d, x, y)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_equivalence_against_routing_search(seed):
    rng = random.Random(seed)
    d = random_eulerian_digraph(rng, 3, 6)
    outs = {v: d.out_arcs(v) for v in d.vertices}
    s1 = ChipRotorState({v: rng.randint(-2, 2) for v in d.vertices}, {v: rng.choice(o) for v, o in outs.items()})
    if rng.random() < 0.5:
        s2 = s1
        for _ in range(rng.randint(1, 8)):
            s2 = route(d, s2, rng.choice(d.vertices))
    else:
        c = {v: rng.randint(-2, 2) for v in d.vertices}
        c[d.vertices[0]] += sum(s1.chips.values()) - sum(c.values())
        s2 = ChipRotorState(c, {v: rng.choice(o) for v, o in outs.items()})
    box = max(abs(c) for s in (s1, s2) for c in s.chips.values()) + 4
    assert rotor_equivalent(d, s1, s2) == routing_reachability(d, s1, s2, box)


def test_residue_of_identical_rotors_is_zero():
    d = fixture("fig1")
    rot = {"1": "e8", "2": "e7", "3": "e9", "4": "e6"}
    assert residue(d, rot, rot) == [0, 0, 0, 0]


def test_effectivize_and_negate():
    rng = random.Random(5)
    for _ in range(20):
        d = random_eulerian_digraph(rng)
        root = rng.choice(d.vertices)
        x = {v: rng.randint(-5, 5) for v in d.vertices}
        x[d.vertices[0]] -= sum(x.values())
        y = dict(zip(d.vertices, effectivize(d, root, x)))
        assert all(c >= 0 for v, c in y.items() if v != root)
        assert linearly_equivalent(d, x, y)
        assert linearly_equivalent(d, add(x, negate(d, x)), {})


def test_action_identity_and_errors():
    d = fixture("fig1")
    t = Arborescence.make("1", {"2": "e7", "3": "e9", "4": "e6"})
    assert rotor_action_digraph(d, "1", {}, t) == t
    with pytest.raises(RibbonError):
        rotor_action_digraph(d, "1", {"1": 1}, t)
    with pytest.raises(RibbonError):
        rotor_action_digraph(d, "2", {}, t)
    with pytest.raises(RibbonError):
        check_arborescence(d, Arborescence.make("1", {"2": "e7", "3": "e3", "4": "e4"}))


def _digraphs():
    rng = random.Random(21)
    g, _ = fixture("torus")
    from ribbonpile.ribbon import medial
    return [fixture("fig1"), fixture("c3"), medial(g), bidirect(fixture("k4p")[0])] + \
        [random_eulerian_digraph(rng) for _ in range(12)]


def test_action_is_simply_transitive_group_action():
    for d in _digraphs():
        S = group_structure(d)
        root = d.vertices[-1]
        ts = arbs(d, root)
        els = list(S.elements())
        t0 = ts[0]
        images = {rotor_action_digraph(d, root, x, t0) for x in els}
        assert images == set(ts)
        gens = S.generators() or [{}]
        for x, y in product(gens, els[:4]):
            for t in ts[:3]:
                lhs = rotor_action_digraph(d, root, add(x, y), t)
                rhs = rotor_action_digraph(d, root, x, rotor_action_digraph(d, root, y, t))
                assert lhs == rhs


def test_action_matches_equivalence():
    # r(x, T) = T' exactly when (x, T + a) ~ (0, T' + a) for a root rotor a
    for d in _digraphs()[:8]:
        root = d.vertices[0]
        S = group_structure(d)
        a = d.out_arcs(root)[0]
        for x in list(S.elements())[:6]:
            for t in arbs(d, root)[:4]:
                t2 = rotor_action_digraph(d, root, x, t)
                r1 = dict(t.as_dict(), **{root: a})
                for cand in arbs(d, root):
                    r2 = dict(cand.as_dict(), **{root: a})
                    eq = rotor_equivalent(d, ChipRotorState(x, r1), ChipRotorState({}, r2))
                    assert eq == (cand == t2)


def test_random_routing_order_gives_same_result():
    rng = random.Random(9)
    for d in _digraphs():
        root = d.vertices[0]
        S = group_structure(d)
        x = S.random_element(rng)
        t = arbs(d, root)[0]
        want = rotor_action_digraph(d, root, x, t)
        for _ in range(3):
            assert rotor_action_digraph(d, root, x, t, rng=random.Random(rng.random())) == want


def test_undirected_action():
    g = fixture("k4p")[0]
    trees = spanning_trees(g)
    assert len(trees) == 16
    t = trees[0]
    assert rotor_action_undirected(g, "a", {}, t) == t
    d = bidirect(g)
    S = group_structure(d)
    images = {rotor_action_undirected(g, "a", x, t) for x in S.elements()}
    assert images == set(trees)
    arb = tree_arborescence(g, "a", t)
    assert {arc_edge(a) for a in arb.arcs} == set(t)


def _unicycles(d):
    vs = list(d.vertices)
    for pick in product(*(d.out_arcs(v) for v in vs)):
        rot = dict(zip(vs, pick))
        try:
            unicycle_cycle(d, rot)
        except RibbonError:
            continue
        yield rot


def test_unicycles_on_plane_graph():
    g = fixture("k4p")[0]
    d = bidirect(g)
    n = 0
    for rot in _unicycles(d):
        n += 1
        assert unicycle_separating(g, rot)
        assert reverse_unicycle_equivalent(g, rot)
    assert n > 0


def test_two_cycle_is_separating():
    g = single_edge()
    rot = {"u": "e+", "v": "e-"}
    assert unicycle_cycle(bidirect(g), rot) in (["e+", "e-"], ["e-", "e+"])
    assert unicycle_separating(g, rot)
    assert reverse_unicycle_equivalent(g, rot)


def test_torus_unicycles_not_separating():
    g, _ = fixture("torus")
    d = bidirect(g)
    cycles = {frozenset(arc_edge(a) for a in unicycle_cycle(d, r)): unicycle_separating(g, r) for r in _unicycles(d)}
    assert cycles[frozenset({"e3"})] is False
    assert cycles[frozenset({"e1", "e2"})] is False


def test_reversal_rejects_loops():
    g, _ = fixture("torus")
    rot = {"v1": "e1+", "v2": "e1-"}
    with pytest.raises(RibbonError):
        reverse_unicycle_equivalent(g, rot)


def test_reversal_on_random_loopfree_graphs():
    rng = random.Random(13)
    for _ in range(8):
        n = rng.randint(2, 4)
        g = random_ribbon_graph(rng, n, rng.randint(n, 6))
        d = bidirect(g)
        for rot in _unicycles(d):
            assert reverse_unicycle_equivalent(g, rot) == unicycle_separating(g, rot)
            assert reverse_on_cycle(d, reverse_on_cycle(d, rot)) == rot
