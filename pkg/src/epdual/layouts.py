"""Linear layouts of tournaments: orderings with their arc cuts, and
interval decompositions with their vertex cuts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import _kernels
from .digraph import Arc, Digraph, Tournament

#: Largest tournament handed to the exact cutwidth DP by default.
CUTWIDTH_EXACT_CAP = 20
#: Largest tournament for which pathwidth_search reports an exact value.
PATHWIDTH_EXACT_CAP = 6


class CapExceeded(ValueError):
    pass


def _out_masks(t: Digraph) -> tuple[list[int], dict[int, int]]:
    idx = {v: i for i, v in enumerate(t.vertices)}
    masks = [0] * t.n
    for u, v in t.arcs:
        masks[idx[u]] |= 1 << idx[v]
    return masks, idx


# ---------------------------------------------------------------------------
# orderings

class Ordering:
    """A bijection from vertices to positions 1..n.

    ``order[i]`` is the vertex at position ``i + 1``.
    """

    __slots__ = ("order", "position")

    def __init__(self, order: Iterable[int]):
        self.order = tuple(order)
        self.position = {v: i + 1 for i, v in enumerate(self.order)}
        if len(self.position) != len(self.order):
            raise ValueError("ordering repeats a vertex")

    def __len__(self) -> int:
        return len(self.order)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ordering) and self.order == other.order

    def __hash__(self) -> int:
        return hash(self.order)

    def __repr__(self) -> str:
        return f"Ordering({list(self.order)})"

    def check(self, t: Digraph) -> None:
        if set(self.order) != set(t.vertices):
            raise ValueError("ordering is not a bijection on the tournament's vertices")

    def prefix(self, alpha: int) -> tuple[int, ...]:
        """Vertices at positions 1..alpha."""
        return self.order[:alpha]

    def interval(self, alpha: int, beta: int) -> tuple[int, ...]:
        """Vertices at positions alpha+1..beta."""
        return self.order[alpha:beta]

    def restricted(self, vertices: Iterable[int]) -> Ordering:
        keep = set(vertices)
        return Ordering(v for v in self.order if v in keep)

    def backward_arcs(self, t: Digraph) -> list[Arc]:
        pos = self.position
        return sorted((u, v) for u, v in t.arcs if pos[u] > pos[v])


@dataclass(frozen=True)
class CutProfile:
    cuts: tuple[frozenset[Arc], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cuts]

    @property
    def width(self) -> int:
        return max(self.sizes)

    @property
    def argmax(self) -> int:
        sizes = self.sizes
        return sizes.index(max(sizes))

    def __getitem__(self, alpha: int) -> frozenset[Arc]:
        return self.cuts[alpha]


def cut_profile(t: Digraph, sigma: Ordering) -> CutProfile:
    """All cuts: cut[a] holds arcs (u, v) with pos(u) > a >= pos(v)."""
    sigma.check(t)
    n = len(sigma)
    buckets: list[set[Arc]] = [set() for _ in range(n + 1)]
    pos = sigma.position
    for u, v in t.arcs:
        pu, pv = pos[u], pos[v]
        for a in range(pv, pu):
            buckets[a].add((u, v))
    return CutProfile(tuple(frozenset(b) for b in buckets))


def ordering_width(t: Digraph, sigma: Ordering) -> int:
    masks, idx = _out_masks(t)
    return max(_kernels.cut_sizes([idx[v] for v in sigma.order], masks))


def cutwidth_exact(t: Digraph, cap: int = CUTWIDTH_EXACT_CAP) -> tuple[Ordering, int]:
    """Minimum-width ordering; ties go to the lexicographically smallest
    insertion order."""
    if t.n > cap:
        raise CapExceeded(
            f"exact cutwidth is limited to {cap} vertices (got {t.n}); "
            "use cutwidth_heuristic instead")
    if t.n == 0:
        return Ordering(()), 0
    masks, _ = _out_masks(t)
    order, width = _kernels.cutwidth_dp(t.n, masks)
    return Ordering(t.vertices[i] for i in order), width


def _objective(order: list[int], masks: list[int]) -> tuple[int, int]:
    sizes = _kernels.cut_sizes(order, masks)
    return max(sizes), sum(sizes)


def cutwidth_heuristic(t: Digraph, seed: int = 0) -> tuple[Ordering, int]:
    """Local search from a score ordering: adjacent swaps and single-vertex
    reinsertion, accepting strict improvements of (width, total cut)."""
    n = t.n
    if n == 0:
        return Ordering(()), 0
    masks, _ = _out_masks(t)
    rng = random.Random(seed)
    keys = {i: rng.random() for i in range(n)}
    order = sorted(range(n), key=lambda i: (-bin(masks[i]).count("1"), keys[i]))
    best = _objective(order, masks)
    improved = True
    while improved and best[0] > 0:
        improved = False
        for i in range(n - 1):
            cand = order[:]
            cand[i], cand[i + 1] = cand[i + 1], cand[i]
            val = _objective(cand, masks)
            if val < best:
                order, best, improved = cand, val, True
        for i in range(n):
            v = order[i]
            rest = order[:i] + order[i + 1:]
            for j in range(n):
                if j == i:
                    continue
                cand = rest[:j] + [v] + rest[j:]
                val = _objective(cand, masks)
                if val < best:
                    order, best, improved = cand, val, True
                    break
    return Ordering(t.vertices[i] for i in order), best[0]


def best_ordering(t: Digraph, seed: int = 0, cap: int = CUTWIDTH_EXACT_CAP) -> tuple[Ordering, int, bool]:
    """Exact ordering when the DP cap allows, else the heuristic one.
    The flag says whether the width is exact."""
    if t.n <= cap:
        sigma, w = cutwidth_exact(t, cap)
        return sigma, w, True
    sigma, w = cutwidth_heuristic(t, seed)
    return sigma, w, False


# ---------------------------------------------------------------------------
# interval decompositions

class IntervalDecomposition:
    """Vertex -> integer interval [first, last]."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Mapping[int, tuple[int, int]]):
        self.intervals = {v: (int(a), int(b)) for v, (a, b) in sorted(intervals.items())}

    def __getitem__(self, v: int) -> tuple[int, int]:
        return self.intervals[v]

    def __len__(self) -> int:
        return len(self.intervals)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntervalDecomposition) and self.intervals == other.intervals

    def __repr__(self) -> str:
        return f"IntervalDecomposition({self.intervals})"

    def first(self, v: int) -> int:
        return self.intervals[v][0]

    def last(self, v: int) -> int:
        return self.intervals[v][1]

    @property
    def max_endpoint(self) -> int:
        return max((b for _, b in self.intervals.values()), default=0)

    def vcut(self, alpha: int) -> set[int]:
        return vcut(self, alpha)

    def members(self, alpha: int, beta: int) -> set[int]:
        return interval_members(self, alpha, beta)

    @property
    def width(self) -> int:
        return decomposition_width(self)

    def restricted(self, vertices: Iterable[int]) -> IntervalDecomposition:
        keep = set(vertices)
        return IntervalDecomposition({v: iv for v, iv in self.intervals.items() if v in keep})


def vcut(dec: IntervalDecomposition, alpha: int) -> set[int]:
    return {v for v, (a, b) in dec.intervals.items() if a <= alpha <= b}


def interval_members(dec: IntervalDecomposition, alpha: int, beta: int) -> set[int]:
    """Vertices whose interval lies inside [alpha, beta]."""
    return {v for v, (a, b) in dec.intervals.items() if alpha <= a and b <= beta}


def decomposition_width(dec: IntervalDecomposition) -> int:
    # the maximum coverage is attained at some left endpoint
    return max((len(vcut(dec, a)) for a, _ in dec.intervals.values()), default=0)


def validate_decomposition(t: Digraph, dec: IntervalDecomposition,
                           normalized: bool = True) -> list[str]:
    """Violations of validity (and, if asked, of normal form); empty means ok."""
    out = []
    missing = set(t.vertices) - set(dec.intervals)
    extra = set(dec.intervals) - set(t.vertices)
    for v in sorted(missing):
        out.append(f"vertex {v} has no interval")
    for v in sorted(extra):
        out.append(f"interval given for unknown vertex {v}")
    items = [(v, iv) for v, iv in dec.intervals.items() if v not in extra]
    for v, (a, b) in items:
        if a > b:
            out.append(f"interval of {v} is empty: [{a}, {b}]")
        if a < 0:
            out.append(f"interval of {v} has a negative endpoint")
    for u, (a, b) in items:
        for v, (c, d) in items:
            if u != v and b < c and not t.has_arc(u, v):
                out.append(f"disjoint intervals {u} < {v} but the arc is ({v}, {u})")
    if normalized:
        seen: dict[int, int] = {}
        for v, (a, b) in items:
            if a == b:
                out.append(f"interval of {v} has length 0")
            for x in {a, b}:
                if x in seen and seen[x] != v:
                    out.append(f"endpoint {x} shared by {seen[x]} and {v}")
                seen.setdefault(x, v)
    return out


def normalize_decomposition(dec: IntervalDecomposition) -> IntervalDecomposition:
    """Distinct non-negative endpoints, positive lengths, same overlaps.

    At a shared coordinate, left endpoints move slightly down and right
    endpoints slightly up, so touching intervals keep overlapping; the
    events are then renumbered 0, 1, 2, ...
    """
    events = []
    for v, (a, b) in dec.intervals.items():
        events.append((a, 0, v))
        events.append((b, 1, v))
    events.sort()
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, (_, kind, v) in enumerate(events):
        (last if kind else first)[v] = i
    return IntervalDecomposition({v: (first[v], last[v]) for v in dec.intervals})


def decomposition_from_ordering(t: Digraph, sigma: Ordering) -> IntervalDecomposition:
    """Canonical decomposition: each vertex spans its position and the
    positions of the other ends of its backward arcs."""
    sigma.check(t)
    pos = sigma.position
    lo = dict(pos)
    hi = dict(pos)
    for u, v in t.arcs:
        if pos[u] > pos[v]:
            lo[u] = min(lo[u], pos[v])
            hi[v] = max(hi[v], pos[u])
    return normalize_decomposition(IntervalDecomposition({v: (lo[v], hi[v]) for v in t.vertices}))


def decomposition_from_events(events: Sequence[tuple[int, bool]]) -> IntervalDecomposition:
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, (v, opens) in enumerate(events):
        (first if opens else last)[v] = i
    return IntervalDecomposition({v: (first[v], last[v]) for v in first})


def shrink_decomposition(t: Digraph, dec: IntervalDecomposition) -> IntervalDecomposition:
    """Greedy tightening: move endpoints inward while the decomposition
    stays valid, keeping every change that does not raise the width."""
    cur = normalize_decomposition(dec)
    width = decomposition_width(cur)
    total = _total_length(cur)
    changed = True
    while changed:
        changed = False
        for v in sorted(cur.intervals):
            for side in (0, 1):
                a, b = cur.intervals[v]
                if b - a <= 1:
                    continue
                # move one endpoint past its inner neighbour event
                trial = dict(cur.intervals)
                if side == 0:
                    trial[v] = (a + 1.5, b)
                else:
                    trial[v] = (a, b - 1.5)
                cand = _renumber(trial)
                if validate_decomposition(t, cand, normalized=False):
                    continue
                w, length = decomposition_width(cand), _total_length(cand)
                # swapping past another left endpoint keeps the total length,
                # so insisting on a strict decrease rules out cycling
                if (w, length) < (width, total):
                    cur, width, total, changed = cand, w, length, True
    return cur


def _total_length(dec: IntervalDecomposition) -> int:
    return sum(b - a for a, b in dec.intervals.values())


def _renumber(intervals: Mapping[int, tuple[float, float]]) -> IntervalDecomposition:
    events = []
    for v, (a, b) in intervals.items():
        events.append((a, 0, v))
        events.append((b, 1, v))
    events.sort()
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, (_, kind, v) in enumerate(events):
        (last if kind else first)[v] = i
    return IntervalDecomposition({v: (first[v], last[v]) for v in intervals})


def pathwidth_search(t: Digraph, budget: int = 8,
                     exact_cap: int = PATHWIDTH_EXACT_CAP) -> tuple[IntervalDecomposition, int, bool]:
    """An interval decomposition of small width.

    Up to ``exact_cap`` vertices the minimum over all endpoint interleavings
    is found and flagged exact. Beyond that, the canonical decomposition of
    several orderings (exact or heuristic cutwidth, score order, ``budget``
    seeded local searches) is shrunk greedily and the best kept.
    """
    if t.n == 0:
        return IntervalDecomposition({}), 0, True
    masks, _ = _out_masks(t)
    if t.n <= exact_cap:
        width, events = _kernels.pathwidth_dp(t.n, masks)
        dec = decomposition_from_events([(t.vertices[v], o) for v, o in events])
        return dec, width, True
    candidates: list[Ordering] = []
    if t.n <= CUTWIDTH_EXACT_CAP:
        candidates.append(cutwidth_exact(t)[0])
    candidates.append(Ordering(sorted(t.vertices, key=lambda v: (-t.out_degree(v), v))))
    for seed in range(budget):
        candidates.append(cutwidth_heuristic(t, seed)[0])
    best = None
    seen = set()
    for sigma in candidates:
        if sigma.order in seen:
            continue
        seen.add(sigma.order)
        dec = shrink_decomposition(t, decomposition_from_ordering(t, sigma))
        w = decomposition_width(dec)
        if best is None or w < best[1]:
            best = (dec, w)
    return best[0], best[1], False
