from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epdual.digraph import (MAX_COMPONENTS, Digraph, PatternDigraph, Tournament, TooManyComponents,
                            component_pattern, delete_arcs, enumerate_component_orderings,
                            feedback_ordering, min_backward_arcs, restrict, strong_components,
                            transitive_subtournament)
from epdual.generators import uniform

from _instances import c3, random_tournament


@st.composite
def patterns(draw, max_m: int = 6):
    m = draw(st.integers(1, max_m))
    pairs = [(u, v) for u in range(m) for v in range(m) if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return PatternDigraph(m, arcs)


def closure_classes(g: Digraph) -> set[frozenset[int]]:
    reach = {v: {v} for v in g.vertices}
    changed = True
    while changed:
        changed = False
        for u, v in g.arcs:
            for x in g.vertices:
                if u in reach[x] and not reach[v] <= reach[x]:
                    reach[x] |= reach[v]
                    changed = True
    return {frozenset(u for u in g.vertices if v in reach[u] and u in reach[v]) for v in g.vertices}


# ---------------------------------------------------------------------------
# tournaments and patterns

def test_tournament_rejects_missing_and_double_arcs():
    with pytest.raises(ValueError):
        Tournament(range(3), [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        Digraph(range(2), [(0, 0)])


def test_tournament_arc_count_and_matrix_round_trip():
    t = random_tournament(9, 4)
    assert t.arc_count == 36
    assert Tournament.from_matrix(t.matrix()) == t


def test_pattern_metrics_and_digons():
    p = PatternDigraph(2, [(0, 1), (1, 0)])
    assert p.m == 2 and p.norm == 4
    with pytest.raises(ValueError):
        PatternDigraph(2, [(0, 0)])


def test_restrict_transitive_is_transitive():
    t = Tournament.transitive(4)
    sub = restrict(t, {1, 2, 3})
    assert sub.n == 3 and sub.is_acyclic()
    assert restrict(t, set()).n == 0
    with pytest.raises(KeyError):
        restrict(t, {9})


def test_delete_arcs_breaks_the_triangle():
    d = delete_arcs(c3(), {(2, 0)})
    assert d.is_acyclic() and d.arc_count == 2
    with pytest.raises(KeyError):
        delete_arcs(c3(), {(0, 2)})


# ---------------------------------------------------------------------------
# strong components

def test_components_of_cycle_and_transitive_triangle():
    dec = strong_components(PatternDigraph(3, [(0, 1), (1, 2), (2, 0)]))
    assert dec.components == (frozenset({0, 1, 2}),) and dec.nontrivial() == [0]
    dec = strong_components(PatternDigraph(3, [(0, 1), (1, 2), (0, 2)]))
    assert dec.h == 3 and all(dec.is_trivial(i) for i in range(3))
    assert dec.condensation == {(0, 1), (1, 2), (0, 2)}


def test_components_with_tail_into_digon():
    dec = strong_components(PatternDigraph(3, [(0, 1), (1, 2), (2, 1)]))
    assert dec.components == (frozenset({0}), frozenset({1, 2}))
    assert dec.condensation == {(0, 1)}


@settings(max_examples=150, deadline=None)
@given(patterns())
def test_components_match_reachability_closure(p):
    dec = strong_components(p)
    assert set(dec.components) == closure_classes(p)
    for u, v in p.arcs:
        a, b = dec.component_of[u], dec.component_of[v]
        assert a == b or (a, b) in dec.condensation


# ---------------------------------------------------------------------------
# component orderings

def _decomposition(h: int, arcs) -> object:
    p = PatternDigraph(h, arcs)
    return strong_components(p)


def test_chain_has_one_ordering():
    assert enumerate_component_orderings(_decomposition(3, [(0, 1), (1, 2)])) == [(0, 1, 2)]


def test_antichain_has_all_orderings():
    out = enumerate_component_orderings(_decomposition(3, []))
    assert out == sorted(itertools.permutations(range(3)))


def test_diamond_has_two_orderings():
    out = enumerate_component_orderings(_decomposition(4, [(0, 1), (0, 2), (1, 3), (2, 3)]))
    assert out == [(0, 1, 2, 3), (0, 2, 1, 3)]


def test_too_many_components():
    with pytest.raises(TooManyComponents):
        enumerate_component_orderings(_decomposition(MAX_COMPONENTS + 1, []))


@settings(max_examples=100, deadline=None)
@given(patterns())
def test_orderings_are_exactly_the_linear_extensions(p):
    dec = strong_components(p)
    out = enumerate_component_orderings(dec)
    brute = [perm for perm in itertools.permutations(range(dec.h))
             if all(perm.index(a) < perm.index(b) for a, b in dec.condensation)]
    assert out == sorted(brute)


# ---------------------------------------------------------------------------
# transitive subtournaments

def test_transitive_subtournament_examples():
    assert transitive_subtournament(Tournament.transitive(4), 3) == (0, 1, 2)
    pair = transitive_subtournament(c3(), 2)
    assert c3().has_arc(*pair)
    assert transitive_subtournament(c3(), 3) is None
    triple = transitive_subtournament(uniform(8, 11), 3)
    t = uniform(8, 11)
    assert all(t.has_arc(triple[i], triple[j]) for i in range(3) for j in range(i + 1, 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10_000))
def test_transitive_subtournament_total_above_power_of_two(m, seed):
    t = random_tournament(2 ** m + seed % 3, seed)
    seq = transitive_subtournament(t, m)
    assert seq is not None and len(seq) == m
    assert all(t.has_arc(seq[i], seq[j]) for i in range(m) for j in range(i + 1, m))


def test_component_pattern_relabels_in_label_order():
    p = PatternDigraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])
    sub, labels = component_pattern(p, {5, 3, 4})
    assert labels == (3, 4, 5)
    assert sub.arcs == {(0, 1), (1, 2), (2, 0)}


# ---------------------------------------------------------------------------
# feedback arcs

@pytest.mark.parametrize("seed", range(12))
def test_feedback_ordering_is_optimal(seed):
    t = random_tournament(6, seed)
    count, order = feedback_ordering(t)
    pos = {v: i for i, v in enumerate(order)}
    assert count == sum(1 for u, v in t.arcs if pos[u] > pos[v])
    brute = min(sum(1 for u, v in t.arcs if perm.index(u) > perm.index(v))
                for perm in itertools.permutations(t.vertices))
    assert count == brute == min_backward_arcs(t)
