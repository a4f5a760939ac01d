import random

import pytest

from helpers import cycle_graph, rand_graph, single_edge, single_loop, single_vertex
from ribbonpile.formats import fixture
from ribbonpile.ribbon import (RibbonDigraph, RibbonError, _is_cycle, bidirect, complement_components,
                               cycle_is_separating, dual, genus, medial, parse_subtransversal, ribbon_isomorphic,
                               trace_faces)


@pytest.fixture
def torus():
    return fixture("torus")[0]


@pytest.fixture
def k4p():
    return fixture("k4p")[0]


def test_fixtures_valid():
    for name in ("fig1", "c3"):
        assert fixture(name).validate() == []
    for name in ("torus", "k4p"):
        assert fixture(name)[0].validate() == []


def test_missing_arc_end_reported():
    d = fixture("fig1")
    rot = {v: [x for x in ents if x != ("e1", "tail")] for v, ents in d.rotation}
    bad = RibbonDigraph.build(d.vertices, d.arcs, rot)
    assert "arc-end missing: e1:tail at 1" in bad.validate()
    with pytest.raises(RibbonError):
        bad.check()


def test_genus_and_faces(torus, k4p):
    fs = trace_faces(k4p)
    assert (fs.genus, len(fs.faces)) == (0, 4)
    fs = trace_faces(torus)
    assert (fs.genus, len(fs.faces)) == (1, 2)
    fs = trace_faces(single_vertex())
    assert (fs.genus, len(fs.faces)) == (0, 1)


def test_faces_partition_half_edges():
    rng = random.Random(1)
    for _ in range(30):
        g = rand_graph(rng, 5, 4, 8)
        faces = trace_faces(g).faces
        flat = [h for f in faces for h in f]
        assert len(flat) == len(set(flat)) == 2 * len(g.edges)
        chi = len(g.vertices) - len(g.edges) + len(faces)
        assert chi % 2 == 0 and chi <= 2


def test_bidirect(k4p, torus):
    d = bidirect(k4p)
    assert len(d.arcs) == 12 and d.is_balanced() and genus(d) == 0
    d = bidirect(torus)
    assert len(d.arcs) == 8 and d.is_balanced() and genus(d) == 1
    d = bidirect(single_edge())
    assert d.rotation_map["u"] == (("e+", "tail"), ("e-", "head"))


def test_dual(torus, k4p):
    dt = dual(torus)
    assert len(dt.vertices) == 2 and len(dt.edges) == 4
    assert genus(dt) == 1
    dk = dual(k4p)
    assert len(dk.vertices) == 4 and len(dk.edges) == 6
    dl = dual(single_loop())
    assert len(dl.vertices) == 2 and len(dl.edges) == 1 and not dl.is_loop("e*")


def test_dual_is_involution():
    rng = random.Random(7)
    graphs = [fixture("torus")[0], fixture("k4p")[0]]
    graphs += [rand_graph(rng, 4, 3, 6) for _ in range(15)]
    for g in graphs:
        assert genus(dual(g)) == genus(g)
        assert ribbon_isomorphic(dual(dual(g)), g)


def test_medial(torus, k4p):
    m = medial(torus)
    assert len(m.vertices) == 4 and len(m.arcs) == 8 and m.is_eulerian() and genus(m) == 1
    m = medial(k4p)
    assert len(m.vertices) == 6 and len(m.arcs) == 12 and genus(m) == 0
    m = medial(single_edge())
    assert len(m.vertices) == 1 and all(t == h for _, t, h in m.arcs) and len(m.arcs) == 2


def test_medial_alternates():
    rng = random.Random(2)
    for _ in range(20):
        g = rand_graph(rng, 4, 2, 6)
        m = medial(g)
        for v, ents in m.rotation:
            assert [t for _, t in ents] == ["head", "tail", "head", "tail"]


def test_complement_components(torus):
    assert complement_components(torus)[0] == 1
    assert complement_components(torus, ["e3", "e4"])[0] == 2
    assert complement_components(torus, ["e3"])[0] == 1


def test_cycle_separation(torus, k4p):
    assert cycle_is_separating(k4p, ["ab", "bc", "ac"])
    assert not cycle_is_separating(torus, ["e3"])
    assert not cycle_is_separating(torus, ["e1", "e2"])
    with pytest.raises(RibbonError):
        cycle_is_separating(k4p, ["ab", "bc"])


def _cycles(g):
    from itertools import combinations
    es = [e for e, _, _ in g.edges]
    for k in range(1, len(es) + 1):
        for c in combinations(es, k):
            if _is_cycle(g, frozenset(c)):
                yield c


def test_separation_two_routes_agree():
    # faces glued along the complement vs cells of the overlay complex
    rng = random.Random(4)
    graphs = [fixture("torus")[0], fixture("k4p")[0], cycle_graph(4)]
    graphs += [rand_graph(rng, 5, 3, 7) for _ in range(20)]
    for g in graphs:
        for c in _cycles(g):
            assert cycle_is_separating(g, c) == (complement_components(g, c)[0] >= 2)


def test_plane_cycles_separate():
    rng = random.Random(5)
    seen = 0
    while seen < 10:
        g = rand_graph(rng, 5, 3, 6, loops=False)
        if genus(g) != 0:
            continue
        seen += 1
        for c in _cycles(g):
            assert cycle_is_separating(g, c)


def test_subtransversal(torus):
    assert parse_subtransversal(torus, ["e1", "e2*"]) == (frozenset({"e1"}), frozenset({"e2"}))
    with pytest.raises(RibbonError):
        parse_subtransversal(torus, ["e1", "e1*"])
    with pytest.raises(RibbonError):
        parse_subtransversal(torus, ["e9"])
