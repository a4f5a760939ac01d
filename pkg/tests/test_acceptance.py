"""Acceptance criteria 1-13.

Each test records its outcome with the `criterion` fixture; the terminal
summary prints one PASS/FAIL line per criterion.  Criteria 7 and 8 have a
separate sub-check for the torus graph, which fails: its loops never move
chips, so rotor-routing sees a planar graph there.
"""
import random
import time

import pytest

from ribbonpile import verify
from ribbonpile.formats import fixture
from ribbonpile.jacobian import (EmbeddedGraph, bernardi_action, bernardi_orientation, enumerate_cycles,
                                 enumerate_quasitrees, jacobian_group, phi, quasitree_to_tour)
from ribbonpile.ribbon import medial
from ribbonpile.sandpile import group_structure, linearly_equivalent
from ribbonpile.tours import EulerianTour, is_compatible, tour_rotor_action, tour_to_arb

SEED = 0


@pytest.fixture(scope="module")
def torus():
    return EmbeddedGraph.make(*fixture("torus"))


@pytest.fixture(scope="module")
def digraphs():
    return verify.digraph_battery(SEED)


def _report(criterion, key, rep, started):
    fails = [l for l in rep.lines if l.startswith("FAIL")]
    detail = f"{rep.checked} checks, {time.time() - started:.1f}s"
    if fails:
        detail += f", {len(fails)} failures, first: {fails[0][5:]}"
    criterion(key, rep.ok, detail)
    assert rep.ok, "\n".join(fails)


def test_criterion_01_fig1_golden(criterion):
    d = fixture("fig1")
    tour = EulerianTour.of("e1 e4 e3 e2 e8 e9 e5 e6 e7".split())
    arb = tour_to_arb(d, tour, "e1")
    ok = is_compatible(d, tour) and arb.root == "1" and arb.arcs == {"e6", "e9", "e7"}
    criterion(1, ok, f"arborescence {sorted(arb.arcs)} at {arb.root}")
    assert ok


def test_criterion_02_best_count(criterion, digraphs):
    t = time.time()
    _report(criterion, 2, verify.check_best_count(digraphs), t)


def test_criterion_03_tour_rotor_canonical(criterion, digraphs):
    t = time.time()
    _report(criterion, 3, verify.check_tour_rotor_canonical(digraphs, SEED), t)


def test_criterion_04_first_edge(criterion, digraphs):
    t = time.time()
    _report(criterion, 4, verify.check_lemma_first_edge(digraphs, SEED), t)


def test_criterion_05_cycles_cuts(criterion):
    t = time.time()
    _report(criterion, 5, verify.check_prop_cycles_cuts(5), t)


def test_criterion_06_rotor_soundness(criterion):
    t = time.time()
    rep = verify.check_rotor_soundness(SEED)
    inconclusive = [l for l in rep.lines if l.startswith("inconclusive")]
    assert not inconclusive
    _report(criterion, 6, rep, t)


def _split(battery):
    return [b for b in battery if b[0] == "torus"], [b for b in battery if b[0] != "torus"]


def test_criterion_07a_unicycle_reversal_torus(criterion):
    t = time.time()
    tor, _ = _split(verify.unicycle_battery(SEED))
    _report(criterion, "7a torus", verify.check_unicycle_reversal(tor), t)


def test_criterion_07b_unicycle_reversal_rest(criterion):
    t = time.time()
    _, rest = _split(verify.unicycle_battery(SEED))
    _report(criterion, "7b rest", verify.check_unicycle_reversal(rest), t)


def test_criterion_08a_root_independence_torus(criterion):
    t = time.time()
    tor, _ = _split(verify.root_battery(SEED))
    _report(criterion, "8a torus", verify.check_root_independence_planarity(tor), t)


def test_criterion_08b_root_independence_rest(criterion):
    t = time.time()
    _, rest = _split(verify.root_battery(SEED))
    rep = verify.check_root_independence_planarity(rest)
    genera = {l.split(", ")[0].split("genus ")[-1] for l in rep.lines}
    assert {"0", "1"} <= genera, "battery should hold both plane and non-plane rotations"
    _report(criterion, "8b rest", rep, t)


def test_criterion_09_torus_suite(criterion, torus):
    qs = set(enumerate_quasitrees(torus))
    want_q = {frozenset(s) for s in ({"e1"}, {"e2"}, {"e1", "e2", "e3"}, {"e1", "e2", "e4"})}
    inv = jacobian_group(torus).invariant_factors
    order = group_structure(torus.medial).order
    cycles = enumerate_cycles(torus)
    supports = {c.support for c in cycles}
    want_s = {frozenset(s) for s in ({"e1*", "e2*"}, {"e1*", "e3"}, {"e1*", "e4"}, {"e2*", "e3"},
                                     {"e2*", "e4"}, {"e3", "e4"}, {"e1", "e2", "e3*", "e4*"})}
    want_v = [(0, 0, 0, 0, 1, -1, 0, 0), (0, 0, -1, 0, 1, 0, 0, 0), (0, 0, 0, 1, -1, 0, 0, 0),
              (0, 0, 1, 0, 0, -1, 0, 0), (0, 0, 0, 1, 0, -1, 0, 0), (0, 0, -1, 1, 0, 0, 0, 0),
              (1, 1, 0, 0, 0, 0, 1, 1)]
    got_v = {c.vector(torus.edges) for c in cycles}
    signs_ok = len(cycles) == 7 and all((v in got_v) or (tuple(-a for a in v) in got_v) for v in want_v)
    ok = qs == want_q and inv == [4] and order == 4 and supports == want_s and signs_ok
    criterion(9, ok, f"quasi-trees {len(qs)}, invariants {inv}, |S| {order}, cycles {len(cycles)}")
    assert ok


def test_criterion_10_phi(criterion, torus):
    t = time.time()
    battery = verify.embedded_battery(SEED)
    rep = verify.check_phi_isomorphism(battery)
    example = linearly_equivalent(torus.medial, phi(torus, (0, 0, -1, 0)), {"e1": -1, "e2": 0, "e3": 1, "e4": 0})
    if not example:
        rep.fail("phi(0,0,-1,0) is not in the class of (-1,0,1,0)")
    _report(criterion, 10, rep, t)


def test_criterion_11_bernardi(criterion, torus):
    o1 = bernardi_orientation(torus, {"e1", "e2", "e3"}, "e1")
    o2 = bernardi_orientation(torus, {"e1"}, "e1")
    act = bernardi_action(torus, (0, 0, -1, 0), {"e1", "e2", "e3"})
    ok = o1 == (-1, 1, 1, 1) and o2 == (-1, 1, -1, 1) and act == {"e1"}
    criterion(11, ok, f"orientations {o1} {o2} (halves), action -> {sorted(act)}")
    assert ok


def test_criterion_12_action_agreement(criterion):
    t = time.time()
    battery = verify.embedded_battery(SEED)
    rep = verify.check_action_agreement(battery)
    torus_line = next(l for l in rep.lines if l.startswith("torus"))
    assert torus_line == "torus: 16 pairs agree"
    _report(criterion, 12, rep, t)


def test_criterion_13_fig6(criterion, torus):
    start = quasitree_to_tour(torus, {"e1", "e2", "e3"})
    got = tour_rotor_action(torus.medial, {"e1": -1, "e2": 0, "e3": 1, "e4": 0}, start, verify=True)
    ok = got == quasitree_to_tour(torus, {"e1"})
    criterion(13, ok, str(got))
    assert ok
