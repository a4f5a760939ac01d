import pytest

from helpers import single_edge
from ribbonpile.formats import fixture
from ribbonpile.oracles import (BudgetExceeded, OracleBudget, enumerate_arborescences, enumerate_spanning_trees,
                                firing_reachability, routing_reachability)
from ribbonpile.ribbon import bidirect
from ribbonpile.rotor import ChipRotorState, route


def test_arborescence_examples():
    assert len(enumerate_arborescences(fixture("c3"), "0")) == 1
    assert frozenset({"e6", "e9", "e7"}) in enumerate_arborescences(fixture("fig1"), "1")
    d = bidirect(fixture("k4p")[0])
    assert all(len(enumerate_arborescences(d, v)) == 16 for v in d.vertices)


def test_spanning_tree_examples():
    assert len(enumerate_spanning_trees(fixture("k4p")[0])) == 16
    assert enumerate_spanning_trees(single_edge()) == {frozenset({"e"})}
    assert enumerate_spanning_trees(fixture("torus")[0]) == {frozenset({"e1"}), frozenset({"e2"})}


def test_routing_examples():
    d = fixture("fig1")
    s = ChipRotorState({"1": 1}, {"1": "e1", "2": "e5", "3": "e3", "4": "e4"})
    assert routing_reachability(d, s, s, 3)
    assert routing_reachability(d, s, route(d, s, "4"), 3)
    other = ChipRotorState({"1": 2}, s.rotors)
    assert not routing_reachability(d, s, other, 3)


def test_firing_examples():
    d = fixture("c3")
    assert firing_reachability(d, {"0": 1}, {"1": 1}, 2)
    assert not firing_reachability(d, {"0": 1}, {"1": 2}, 2)


def test_budget():
    with pytest.raises(ValueError):
        OracleBudget(max_vertices=0)
    tiny = OracleBudget(max_vertices=2)
    with pytest.raises(BudgetExceeded):
        enumerate_arborescences(fixture("c3"), "0", tiny)
    small = OracleBudget(max_depth=5)
    d = fixture("fig1")
    with pytest.raises(BudgetExceeded):
        firing_reachability(d, {"1": 3}, {"2": 1, "3": 1, "4": 1}, 6, small)
