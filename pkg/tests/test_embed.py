from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epdual.digraph import Digraph, PatternDigraph, Tournament, delete_arcs, strong_components
from epdual.embed import (IMMERSION, KINDS, TOPMINOR, BudgetExhausted, Model, counting_nodes,
                          find_model, is_free, iter_models, verify_model)
from epdual.oracle import (component_inside_one_host_component, last_vertex_has_backward_arc,
                           naive_find)
from epdual.patterns import by_name, c3_plus_source, cycle, digon, digon_with_tail

from _instances import c3, source_over_c3, stacked_c3, random_tournament

SMALL_PATTERNS = ("P2", "TT3", "C3", "digon", "digon-with-tail", "C3-plus-source", "E2", "C4")


def triangle_model() -> Model:
    return Model.build((0, 1, 2), {(0, 1): [(0, 1)], (1, 2): [(1, 2)], (2, 0): [(2, 0)]})


def digon_model() -> Model:
    return Model.build((0, 1), {(0, 1): [(0, 1)], (1, 0): [(1, 2), (2, 0)]})


# ---------------------------------------------------------------------------
# verification

@pytest.mark.parametrize("kind", KINDS)
def test_identity_triangle_is_a_model(kind):
    assert verify_model(c3(), cycle(3), triangle_model(), kind) == []


@pytest.mark.parametrize("kind", KINDS)
def test_digon_routed_through_the_triangle(kind):
    assert verify_model(c3(), digon(), digon_model(), kind) == []


def test_shared_arc_is_reported():
    host = source_over_c3()
    pattern = PatternDigraph(3, [(0, 1), (2, 1)])
    model = Model.build((2, 1, 3), {(0, 1): [(2, 0), (0, 1)], (2, 1): [(3, 2), (2, 0), (0, 1)]})
    problems = verify_model(host, pattern, model, IMMERSION)
    assert any("arc reused" in p for p in problems)


def test_branch_vertex_inside_a_path_is_reported():
    pattern = PatternDigraph(3, [(0, 1), (1, 2), (2, 0)])
    model = Model.build((0, 1, 2), {(0, 1): [(0, 1)], (1, 2): [(1, 2)], (2, 0): [(2, 0)]})
    host = stacked_c3(1)
    assert verify_model(host, pattern, model, TOPMINOR) == []
    bad = Model.build((0, 1, 2), {(0, 1): [(0, 1)], (1, 2): [(1, 2)], (2, 0): [(2, 1), (1, 2)]})
    assert verify_model(host, pattern, bad, TOPMINOR)


def test_disconnected_and_malformed_paths():
    broken = Model.build((0, 1, 2), {(0, 1): [(0, 1)], (1, 2): [(2, 0)], (2, 0): [(2, 0)]})
    problems = verify_model(c3(), cycle(3), broken, IMMERSION)
    assert any("path disconnected" in p for p in problems)
    assert verify_model(c3(), cycle(3), Model((0, 1), ()), IMMERSION)
    missing = Model.build((0, 1, 2), {(0, 1): [(0, 1)], (1, 2): [(1, 2)]})
    assert any("no path" in p for p in verify_model(c3(), cycle(3), missing, IMMERSION))
    twice = Model.build((0, 0, 2), {(0, 1): [(0, 1)], (1, 2): [(1, 2)], (2, 0): [(2, 0)]})
    assert any("injective" in p for p in verify_model(c3(), cycle(3), twice, IMMERSION))
    fake = Model.build((0, 1, 2), {(0, 1): [(0, 1)], (1, 2): [(1, 2)], (2, 0): [(0, 2)]})
    assert any("not a host arc" in p for p in verify_model(c3(), cycle(3), fake, IMMERSION))


def test_model_round_trips_through_dict():
    m = digon_model()
    assert Model.from_dict(m.to_dict()) == m
    assert m.host_vertices() == {0, 1, 2} and m.internal_vertices() == {2}


# ---------------------------------------------------------------------------
# search examples

def test_no_cycle_in_a_transitive_host():
    assert find_model(Tournament.transitive(5), cycle(3), IMMERSION) is None


def test_digon_found_in_triangle():
    for kind in KINDS:
        model = find_model(c3(), digon(), kind)
        assert model is not None and verify_model(c3(), digon(), model, kind) == []


def test_triangle_minus_an_arc():
    assert find_model(c3(), cycle(3), IMMERSION, excluded_arcs=[(2, 0)]) is None


def test_is_free_examples():
    assert is_free(Tournament.transitive(6), cycle(3), IMMERSION)
    assert not is_free(c3(), cycle(3), TOPMINOR)
    assert is_free(delete_arcs(c3(), {(1, 2)}), digon(), IMMERSION)


def test_budget_is_distinct_from_absence():
    t = random_tournament(9, 3)
    with pytest.raises(BudgetExhausted):
        is_free(delete_arcs(t, set(list(t.sorted_arcs())[::2])), c3_plus_source(), IMMERSION,
                node_budget=1)
    assert is_free(Tournament.transitive(6), cycle(3), IMMERSION, node_budget=1)


def test_search_is_deterministic_and_counts_nodes():
    t = random_tournament(8, 2)
    with counting_nodes() as box:
        a = list(itertools.islice(iter_models(t, digon_with_tail(), IMMERSION), 200))
    assert box[0] > 0
    assert a == list(itertools.islice(iter_models(t, digon_with_tail(), IMMERSION), 200))


# ---------------------------------------------------------------------------
# agreement with the naive enumeration

def _hosts():
    out = [c3(), source_over_c3(), Tournament.transitive(4)]
    for seed in range(14):
        t = random_tournament(4 + seed % 3, seed)
        rng = random.Random(seed)
        out.append(t)
        arcs = t.sorted_arcs()
        out.append(Digraph(t.vertices, set(arcs) - set(rng.sample(arcs, len(arcs) // 3))))
    return out


@pytest.mark.parametrize("name", SMALL_PATTERNS)
@pytest.mark.parametrize("kind", KINDS)
def test_search_agrees_with_naive_enumeration(name, kind):
    p = by_name(name)
    for host in _hosts():
        found = find_model(host, p, kind)
        assert (found is None) == (naive_find(host, p, kind) is None), (host, name)
        if found is not None:
            assert verify_model(host, p, found, kind) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), st.integers(0, 10_000), st.sampled_from(SMALL_PATTERNS),
       st.sampled_from(KINDS))
def test_every_enumerated_model_verifies(n, seed, name, kind):
    t = random_tournament(n, seed)
    p = by_name(name)
    for model in itertools.islice(iter_models(t, p, kind), 30):
        assert verify_model(t, p, model, kind) == []


# ---------------------------------------------------------------------------
# structural observations on immersion models

@settings(max_examples=40, deadline=None)
@given(st.integers(3, 8), st.integers(0, 10_000), st.sampled_from(("C3", "digon", "C4")))
def test_last_vertex_leaves_backward(n, seed, name):
    t = random_tournament(n, seed)
    p = by_name(name)
    rng = random.Random(seed)
    for model in itertools.islice(iter_models(t, p, IMMERSION), 10):
        for _ in range(3):
            order = list(t.vertices)
            rng.shuffle(order)
            assert last_vertex_has_backward_arc(model, range(p.m), order)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10_000),
       st.sampled_from(("digon-with-tail", "C3-plus-source", "C3->C3")))
def test_components_land_in_one_host_component(n, seed, name):
    t = stacked_c3(3) if seed % 4 == 0 else random_tournament(n, seed)
    p = by_name(name)
    dec = strong_components(p)
    for model in itertools.islice(iter_models(t, p, IMMERSION), 10):
        for comp in dec.components:
            assert component_inside_one_host_component(t, model, comp)
