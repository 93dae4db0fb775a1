from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epdual.digraph import Digraph, Tournament
from epdual.embed import IMMERSION, TOPMINOR, Model, find_model, verify_model
from epdual.oracle import (MAX_PACKING_N, OracleCapExceeded, brute_cutwidth, brute_max_packing,
                           brute_min_hitting, brute_packing_at_least, brute_pathwidth,
                           instance_digest, naive_find, naive_is_free, naive_models,
                           strongly_connected_sets)
from epdual.digraph import strong_components
from epdual.patterns import by_name, cycle, path2

from _instances import c3, random_tournament, source_over_c3, stacked_c3

SMALL = ("P2", "C3", "digon", "TT3", "digon-with-tail")


def test_packing_examples():
    assert brute_max_packing(c3(), cycle(3), IMMERSION, "arc").value == 1
    assert brute_max_packing(Tournament.transitive(5), cycle(3), IMMERSION, "arc").value == 0
    rep = brute_max_packing(stacked_c3(2), cycle(3), TOPMINOR, "vertex")
    assert rep.value == 2 and len(rep.witness) == 2


def test_hitting_examples():
    assert brute_min_hitting(c3(), cycle(3), IMMERSION).value == 1
    assert brute_min_hitting(Tournament.transitive(6), cycle(3), TOPMINOR).value == 0
    rep = brute_min_hitting(stacked_c3(2), cycle(3), IMMERSION)
    assert rep.value == 2
    rest = Digraph(range(6), stacked_c3(2).arcs - {tuple(a) for a in rep.witness})
    assert find_model(rest, cycle(3), IMMERSION) is None


def test_layout_examples():
    assert brute_cutwidth(c3()).value == 1
    assert brute_cutwidth(Tournament.transitive(7)).value == 0
    assert brute_pathwidth(c3()).value == 2
    assert brute_pathwidth(Tournament.transitive(4)).value == 1


def test_caps_raise():
    with pytest.raises(OracleCapExceeded):
        brute_max_packing(random_tournament(MAX_PACKING_N + 1, 0), cycle(3), IMMERSION, "arc")
    with pytest.raises(OracleCapExceeded):
        brute_cutwidth(random_tournament(9, 0))
    with pytest.raises(OracleCapExceeded):
        brute_pathwidth(random_tournament(7, 0))
    with pytest.raises(OracleCapExceeded):
        brute_max_packing(c3(), by_name("E2"), IMMERSION, "arc")


def test_digest_is_stable_and_sensitive():
    assert instance_digest(c3(), cycle(3)) == instance_digest(c3(), cycle(3))
    assert instance_digest(c3(), cycle(3)) != instance_digest(c3(), path2())


def test_naive_models_all_verify():
    t = source_over_c3()
    for name in SMALL:
        p = by_name(name)
        for kind in (IMMERSION, TOPMINOR):
            for model in naive_models(t, p, kind):
                assert verify_model(t, p, model, kind) == []


def test_naive_models_count_on_triangle():
    # three rotations of the identity map, each with its unique paths
    assert len(list(naive_models(c3(), cycle(3), IMMERSION))) == 3
    assert naive_find(Tournament.transitive(4), cycle(3), IMMERSION) is None
    assert naive_is_free(Tournament.transitive(4), cycle(3), TOPMINOR)


def test_strongly_connected_sets_match_tarjan():
    for seed in range(10):
        t = random_tournament(7, seed)
        assert set(strongly_connected_sets(t)) == set(strong_components(t).components)


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("name", ("C3", "digon", "P2"))
def test_weak_duality(seed, name):
    t = random_tournament(4 + seed % 3, seed)
    p = by_name(name)
    for kind, disjoint in ((IMMERSION, "arc"), (TOPMINOR, "vertex")):
        packing = brute_max_packing(t, p, kind, disjoint).value
        hitting = brute_min_hitting(t, p, kind).value
        assert packing <= hitting


@pytest.mark.parametrize("seed", range(10))
def test_packing_at_least_agrees_with_maximum(seed):
    t = random_tournament(4 + seed % 3, seed)
    p = cycle(3)
    best = brute_max_packing(t, p, IMMERSION, "arc").value
    assert brute_packing_at_least(t, p, IMMERSION, "arc", best + 1) is None
    if best:
        found = brute_packing_at_least(t, p, IMMERSION, "arc", best)
        assert found is not None and len(found) == best


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10_000))
def test_cutwidth_oracle_against_permutations(n, seed):
    t = random_tournament(n, seed)
    naive = min(max(sum(1 for u, v in t.arcs if perm.index(u) >= g > perm.index(v))
                    for g in range(n + 1))
                for perm in itertools.permutations(t.vertices))
    assert brute_cutwidth(t).value == naive


def test_packing_witness_is_disjoint():
    rep = brute_max_packing(stacked_c3(2), cycle(3), IMMERSION, "arc")
    models = [Model.from_dict(d) for d in rep.witness]
    arcs = [a for m in models for a in m.host_arcs()]
    assert len(arcs) == len(set(arcs))
