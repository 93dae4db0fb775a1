from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epdual.digraph import Tournament
from epdual.layouts import (CapExceeded, IntervalDecomposition, Ordering, best_ordering, cut_profile,
                            cutwidth_exact, cutwidth_heuristic, decomposition_from_ordering,
                            decomposition_width, interval_members, normalize_decomposition,
                            ordering_width, pathwidth_search, shrink_decomposition,
                            validate_decomposition, vcut)
from epdual.oracle import brute_cutwidth, brute_pathwidth

from _instances import c3, quadratic_residue, random_tournament

seeds = st.integers(0, 100_000)


def overlap(a, b):
    return a[0] <= b[1] and b[0] <= a[1]


# ---------------------------------------------------------------------------
# orderings and cuts

def test_cut_profile_of_triangle():
    prof = cut_profile(c3(), Ordering((0, 1, 2)))
    assert prof.sizes == [0, 1, 1, 0]
    assert prof[1] == {(2, 0)} and prof.width == 1 and prof.argmax == 1


def test_dominance_ordering_has_width_zero():
    t = Tournament.transitive(6)
    assert cut_profile(t, Ordering(range(6))).width == 0


def test_reversed_transitive_triangle():
    prof = cut_profile(Tournament.transitive(3), Ordering((2, 1, 0)))
    assert prof.width == 2 and len(prof[1]) == 2


def test_ordering_must_match_the_vertices():
    with pytest.raises(ValueError):
        cut_profile(c3(), Ordering((0, 1)))
    with pytest.raises(ValueError):
        Ordering((0, 0, 1))


def test_ordering_windows():
    sigma = Ordering((4, 2, 0, 1, 3))
    assert sigma.prefix(2) == (4, 2)
    assert sigma.interval(1, 3) == (2, 0)
    assert sigma.restricted({0, 3, 4}).order == (4, 0, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), seeds, seeds)
def test_cut_arcs_are_backward_and_ends_empty(n, seed, perm_seed):
    t = random_tournament(n, seed)
    order = list(t.vertices)
    st_rng = __import__("random").Random(perm_seed)
    st_rng.shuffle(order)
    sigma = Ordering(order)
    prof = cut_profile(t, sigma)
    assert prof[0] == frozenset() and prof[n] == frozenset()
    for alpha in range(n + 1):
        for u, v in prof[alpha]:
            assert sigma.position[u] > sigma.position[v]
    assert prof.width == ordering_width(t, sigma)


# ---------------------------------------------------------------------------
# cutwidth

def test_exact_cutwidth_examples():
    assert cutwidth_exact(Tournament.transitive(5))[1] == 0
    assert cutwidth_exact(c3())[1] == 1
    qr = quadratic_residue(7)
    assert cutwidth_exact(qr)[1] == brute_cutwidth(qr).value


def test_exact_cutwidth_cap():
    with pytest.raises(CapExceeded, match="heuristic"):
        cutwidth_exact(random_tournament(6, 0), cap=5)


@pytest.mark.parametrize("seed", range(10))
def test_exact_cutwidth_matches_permutations(seed):
    t = random_tournament(4 + seed % 4, seed)
    sigma, width = cutwidth_exact(t)
    assert width == ordering_width(t, sigma)
    assert width == min(ordering_width(t, Ordering(p)) for p in itertools.permutations(t.vertices))


def test_heuristic_examples():
    assert cutwidth_heuristic(Tournament.transitive(10), seed=3)[1] == 0
    assert cutwidth_heuristic(c3(), seed=0)[1] == 1


@pytest.mark.parametrize("seed", range(6))
def test_heuristic_is_deterministic_and_above_exact(seed):
    t = random_tournament(11, seed)
    a = cutwidth_heuristic(t, seed)
    assert a == cutwidth_heuristic(t, seed)
    assert a[1] >= cutwidth_exact(t)[1]
    assert a[1] == ordering_width(t, a[0])


def test_heuristic_on_larger_host():
    t = random_tournament(24, 5)
    sigma, width = cutwidth_heuristic(t, 1)
    assert width <= 24 * 24 // 4
    sub = t.restrict(sigma.order[:12])
    assert ordering_width(sub, sigma.restricted(sub.vertices)) >= cutwidth_exact(sub)[1]


def test_best_ordering_flags_exactness():
    assert best_ordering(random_tournament(8, 1))[2] is True
    sigma, width, exact = best_ordering(random_tournament(8, 1), cap=6)
    assert exact is False and width == ordering_width(random_tournament(8, 1), sigma)


# ---------------------------------------------------------------------------
# interval decompositions

def test_unit_intervals_on_transitive_triangle_are_valid():
    dec = IntervalDecomposition({0: (0, 1), 1: (2, 3), 2: (4, 5)})
    assert validate_decomposition(Tournament.transitive(3), dec) == []


def test_pairwise_disjoint_intervals_fail_on_triangle():
    for perm in itertools.permutations(range(3)):
        dec = IntervalDecomposition({v: (2 * i, 2 * i + 1) for i, v in enumerate(perm)})
        assert validate_decomposition(c3(), dec)


def test_shared_endpoint_is_a_normal_form_violation():
    dec = IntervalDecomposition({0: (0, 5), 1: (1, 2), 2: (5, 7)})
    problems = validate_decomposition(Tournament.transitive(3), dec)
    assert any("endpoint 5" in p for p in problems)
    assert validate_decomposition(Tournament.transitive(3), dec, normalized=False) == []


def test_normalize_keeps_touching_intervals_overlapping():
    dec = IntervalDecomposition({0: (0, 3), 1: (1, 3), 2: (3, 6)})
    out = normalize_decomposition(dec)
    ends = [a for iv in out.intervals.values() for a in iv]
    assert len(set(ends)) == 6
    for u, v in itertools.combinations(range(3), 2):
        assert overlap(dec[u], dec[v]) == overlap(out[u], out[v])
    assert decomposition_width(out) == decomposition_width(dec)


def test_normalize_is_idempotent_on_normal_form():
    dec = IntervalDecomposition({0: (0, 4), 1: (1, 2), 2: (3, 5)})
    assert normalize_decomposition(dec) == dec


def test_normalize_stretches_points():
    dec = IntervalDecomposition({0: (2, 2), 1: (0, 5), 2: (7, 9)})
    out = normalize_decomposition(dec)
    assert out.first(0) < out.last(0)
    assert validate_decomposition(Tournament.transitive(3), out) == []


def test_vcut_and_members():
    dec = IntervalDecomposition({0: (1, 4), 1: (5, 8), 2: (3, 6)})
    assert vcut(dec, 3) == {0, 2}
    assert vcut(dec, 0) == set()
    assert max(len(vcut(dec, a)) for a in range(10)) == 2 == dec.width
    assert interval_members(dec, 0, 8) == {0, 1, 2}
    unit = IntervalDecomposition({0: (0, 1), 1: (4, 5)})
    assert interval_members(unit, 2, 3) == set()
    assert interval_members(dec, 1, 6) == {0, 2}


def test_canonical_decompositions():
    dec = decomposition_from_ordering(Tournament.transitive(3), Ordering((0, 1, 2)))
    assert dec.width == 1
    dec = decomposition_from_ordering(c3(), Ordering((0, 1, 2)))
    assert dec.width == 3
    ends = sorted(a for iv in dec.intervals.values() for a in iv)
    assert dec[0][0] == ends[0] and dec[2][1] == ends[-1]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), seeds)
def test_canonical_and_shrunk_decompositions_validate(n, seed):
    t = random_tournament(n, seed)
    sigma = cutwidth_heuristic(t, seed)[0]
    dec = decomposition_from_ordering(t, sigma)
    assert validate_decomposition(t, dec) == []
    small = shrink_decomposition(t, dec)
    assert validate_decomposition(t, small) == []
    assert small.width <= dec.width
    assert normalize_decomposition(small) == small


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), seeds, st.data())
def test_stacked_windows_are_disjoint(n, seed, data):
    t = random_tournament(n, seed)
    dec, _, _ = pathwidth_search(t)
    top = dec.max_endpoint
    a1 = data.draw(st.integers(0, top))
    b1 = data.draw(st.integers(a1, top))
    a2 = data.draw(st.integers(b1, top))
    b2 = data.draw(st.integers(a2, top))
    assume_strict = a1 < b1 <= a2 < b2
    if assume_strict:
        assert not interval_members(dec, a1, b1) & interval_members(dec, a2, b2)


# ---------------------------------------------------------------------------
# pathwidth

def test_pathwidth_examples():
    dec, width, exact = pathwidth_search(Tournament.transitive(4))
    assert (width, exact) == (1, True)
    dec, width, exact = pathwidth_search(c3())
    assert (width, exact) == (2, True)
    assert validate_decomposition(c3(), dec) == []


def test_pathwidth_heuristic_beyond_cap():
    t = random_tournament(10, 3)
    dec, width, exact = pathwidth_search(t)
    assert exact is False
    assert validate_decomposition(t, dec) == []
    canonical = decomposition_from_ordering(t, cutwidth_exact(t)[0])
    assert width <= canonical.width


@pytest.mark.parametrize("seed", range(15))
def test_exact_pathwidth_matches_interleavings(seed):
    t = random_tournament(2 + seed % 5, seed)
    dec, width, exact = pathwidth_search(t)
    assert exact and width == dec.width == brute_pathwidth(t).value


def test_exact_pathwidth_with_larger_cap_matches_heuristic_upper_bound():
    t = random_tournament(9, 8)
    exact_dec, exact_w, flag = pathwidth_search(t, exact_cap=9)
    assert flag and validate_decomposition(t, exact_dec) == []
    assert exact_w <= pathwidth_search(t)[1]
