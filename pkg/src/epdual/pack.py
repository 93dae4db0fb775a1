"""Disjoint packings of pattern copies.

Three routes lead to a packing certificate: exhaustive search
(``pack_direct``), transitive subtournaments for acyclic patterns, and
stitching copies of the strong components of a pattern found in a row of
consecutive host windows (``assemble_interval_packing``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _kernels
from .digraph import (Arc, Digraph, PatternDigraph, Tournament, component_pattern,
                      feedback_ordering, min_backward_arcs, strong_components, transitive_subtournament)
from .embed import (IMMERSION, TOPMINOR, Budget, BudgetExhausted, Model, as_budget, charge_nodes,
                    check_kind, counting_nodes, find_model, iter_models, verify_model)

ARC = "arc"
VERTEX = "vertex"
DISJOINTNESS = (ARC, VERTEX)

#: Hosts up to this size use the precomputed minimal copy sets for
#: vertex-disjoint packing; larger ones use a direct search.
INDEX_LIMIT = 16


def default_disjointness(kind: str) -> str:
    return ARC if check_kind(kind) == IMMERSION else VERTEX


def check_disjointness(disjointness: str) -> str:
    if disjointness not in DISJOINTNESS:
        raise ValueError(f"unknown disjointness {disjointness!r}; expected one of {DISJOINTNESS}")
    return disjointness


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class PackingCertificate:
    kind: str
    disjointness: str
    pattern: PatternDigraph
    models: tuple[Model, ...]

    def __len__(self) -> int:
        return len(self.models)

    def audit(self, host: Digraph) -> list[str]:
        """Re-check every copy and the pairwise disjointness from the raw
        vertex and arc lists."""
        out = []
        for i, m in enumerate(self.models):
            for problem in verify_model(host, self.pattern, m, self.kind):
                out.append(f"copy {i}: {problem}")
        if self.disjointness == ARC:
            owner: dict[Arc, int] = {}
            for i, m in enumerate(self.models):
                for _, p in m.paths:
                    for a in p:
                        if a in owner:
                            out.append(f"copies {owner[a]} and {i} share arc {a}")
                        owner[a] = i
        else:
            owner_v: dict[int, int] = {}
            for i, m in enumerate(self.models):
                for v in sorted(m.host_vertices()):
                    if v in owner_v:
                        out.append(f"copies {owner_v[v]} and {i} share vertex {v}")
                    owner_v[v] = i
        return out


def _certificate(kind: str, disjointness: str, pattern: PatternDigraph,
                 models: Iterable[Model]) -> PackingCertificate:
    return PackingCertificate(kind, disjointness, pattern, tuple(models))


def _copies_of_vertex_set(pattern: PatternDigraph, seq: Sequence[int]) -> Model:
    """Place an acyclic pattern on a transitive host sequence."""
    topo = pattern.topological_order()
    phi = [0] * pattern.m
    for v, host_v in zip(topo, seq):
        phi[v] = host_v
    return Model.build(phi, {(u, v): [(phi[u], phi[v])] for u, v in pattern.arcs})


# ---------------------------------------------------------------------------
# minimal copy sets for vertex-disjoint packing

class CopyIndex:
    """Inclusion-minimal vertex sets that carry a copy of the pattern.

    Any vertex set holding a copy contains one of these, so vertex-disjoint
    packing inside any window of the host reduces to set packing over the
    minimal sets lying in the window. Built once per (host, pattern, kind).
    """

    def __init__(self, host: Digraph, pattern: PatternDigraph, kind: str):
        if host.n > INDEX_LIMIT:
            raise ValueError(f"copy index is limited to {INDEX_LIMIT} vertices")
        self.host = host
        self.pattern = pattern
        self.kind = kind
        self.labels = host.vertices
        self.bit = {v: 1 << i for i, v in enumerate(self.labels)}
        self.entries: list[tuple[int, Model]] = []
        with counting_nodes() as box:
            self._build()
        self.build_nodes = box[0]

    def _build(self) -> None:
        host, pattern, kind = self.host, self.pattern, self.kind
        if pattern.m == 0 or find_model(host, pattern, kind) is None:
            return
        dec = strong_components(pattern)
        parts = []
        if dec.h > 1:
            for ci in dec.nontrivial():
                sub, _ = component_pattern(pattern, dec.components[ci])
                parts.append([m for m, _ in copy_index(host, sub, kind).entries])
        trivial = dec.h - len(parts)
        found: list[int] = []
        n = host.n
        for size in range(pattern.m, n + 1):
            for combo in itertools.combinations(range(n), size):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                if any(f & mask == f for f in found):
                    continue
                sub_host = host.induced(self.labels[i] for i in combo)
                if parts and not self._parts_fit(parts, mask, size - trivial, sub_host):
                    continue
                model = find_model(sub_host, pattern, kind)
                if model is not None:
                    found.append(mask)
                    self.entries.append((mask, model))

    def _parts_fit(self, parts: list[list[int]], mask: int, room: int, sub_host: Digraph) -> bool:
        # Necessary conditions from the strong components: each non-trivial
        # component has a copy inside the set, the copies are arc-disjoint
        # (so there are that many backward arcs in every ordering), and for
        # topological minors they are also vertex-disjoint.
        inside = [[m for m in ms if m & mask == m] for ms in parts]
        if not all(inside):
            return False
        if self.kind == IMMERSION:
            return len(parts) < 2 or min_backward_arcs(sub_host) >= len(parts)

        def pick(i: int, used: int) -> bool:
            if i == len(inside):
                return bin(used).count("1") <= room
            return any(m & used == 0 and pick(i + 1, used | m) for m in inside[i])

        return pick(0, 0)

    def mask_of(self, vertices: Iterable[int]) -> int:
        m = 0
        for v in vertices:
            m |= self.bit[v]
        return m

    def vertices_of(self, mask: int) -> frozenset[int]:
        return frozenset(v for v in self.labels if self.bit[v] & mask)

    def within(self, window: Iterable[int]) -> list[tuple[int, Model]]:
        w = self.mask_of(window)
        return [(m, model) for m, model in self.entries if m & w == m]

    def pack(self, window: Iterable[int], k: int, budget: Budget | None = None) -> list[Model] | None:
        """k vertex-disjoint copies inside ``window`` or None."""
        if k <= 0:
            return []
        w = self.mask_of(window)
        models = {m: model for m, model in self.entries if m & w == m}
        if len(models) < k:
            return None
        limit = -1
        if budget is not None and budget.remaining is not None:
            limit = budget.remaining
        try:
            chosen = _kernels.pack_disjoint_masks(list(models), k, w, limit)
        except _kernels.NodeLimit as exc:
            if budget is not None:
                budget.tick(exc.args[0] if exc.args else (budget.remaining or 0) + 1)
            raise BudgetExhausted(budget.used if budget else 0) from None
        if budget is not None:
            budget.tick()
        if chosen is None:
            return None
        return [models[m] for m in sorted(chosen)]


_INDEX_CACHE: dict[tuple[Digraph, PatternDigraph, str], CopyIndex] = {}
_INDEX_CACHE_SIZE = 256


def copy_index(host: Digraph, pattern: PatternDigraph, kind: str) -> CopyIndex:
    """A shared index; a cached one is charged the nodes of building it,
    so node counts do not depend on what ran before."""
    key = (host, pattern, kind)
    index = _INDEX_CACHE.get(key)
    if index is None:
        index = CopyIndex(host, pattern, kind)
        if len(_INDEX_CACHE) >= _INDEX_CACHE_SIZE:
            _INDEX_CACHE.pop(next(iter(_INDEX_CACHE)))
        _INDEX_CACHE[key] = index
    else:
        charge_nodes(index.build_nodes)
    return index


def pack_vertex_disjoint(host: Digraph, pattern: PatternDigraph, kind: str, k: int,
                         window: Iterable[int] | None = None,
                         budget: Budget | int | None = None) -> list[Model] | None:
    """k vertex-disjoint copies inside ``window`` (default: everywhere)."""
    budget = as_budget(budget)
    window = host.vertices if window is None else tuple(window)
    if k <= 0:
        return []
    if pattern.m == 0:
        return None
    if len(window) < k * pattern.m:
        return None
    if host.n <= INDEX_LIMIT:
        return copy_index(host, pattern, kind).pack(window, k, budget)
    return _pack_vertices_search(host.induced(window), pattern, kind, k, budget)


def _pack_vertices_search(host: Digraph, pattern: PatternDigraph, kind: str, k: int,
                          budget: Budget) -> list[Model] | None:
    # Copies are listed by their smallest vertex; every later copy avoids all
    # vertices up to that one. Vertex sets containing another one tried at
    # the same level are skipped, as the smaller set can replace them.
    if k == 0:
        return []
    if host.n < k * pattern.m:
        return None
    tried: list[frozenset[int]] = []
    for model in iter_models(host, pattern, kind, node_budget=budget):
        vs = model.host_vertices()
        if any(t <= vs for t in tried):
            continue
        tried.append(vs)
        floor = min(vs)
        rest = host.induced(v for v in host.vertices if v > floor and v not in vs)
        tail = _pack_vertices_search(rest, pattern, kind, k - 1, budget)
        if tail is not None:
            return [model] + tail
    return None


# ---------------------------------------------------------------------------
# arc-disjoint packing

def _backward_count(host: Digraph, order: dict[int, int]) -> int:
    return sum(1 for u, v in host.arcs if order[u] > order[v])


def pack_arc_disjoint(host: Digraph, pattern: PatternDigraph, kind: str, k: int,
                      budget: Budget | int | None = None) -> list[Model] | None:
    """k pairwise arc-disjoint copies or None."""
    budget = as_budget(budget)
    if k <= 0:
        return []
    if pattern.m > host.n:
        return None
    if pattern.arc_count == 0:
        model = Model.build(host.vertices[:pattern.m], {})
        return [model] * k
    nontrivial = len(strong_components(pattern).nontrivial())
    # Each copy needs a backward arc per non-trivial component in every
    # ordering; an ordering with few backward arcs makes this bound sharp.
    if nontrivial and host.n <= INDEX_LIMIT:
        _, seq = feedback_ordering(host)
    else:
        seq = sorted(host.vertices, key=lambda v: (-host.out_degree(v), v))
    order = {v: i for i, v in enumerate(seq)}
    bits = {a: 1 << i for i, a in enumerate(host.sorted_arcs())}
    return _pack_arcs(host, pattern, kind, k, budget, nontrivial, order, bits)


def _pack_arcs(host: Digraph, pattern: PatternDigraph, kind: str, k: int, budget: Budget,
               nontrivial: int, order: dict[int, int], bits: dict[Arc, int]
               ) -> list[Model] | None:
    # Copies are listed by their smallest arc and each later copy avoids every
    # arc up to that one; arc sets containing an already tried one are skipped.
    if k == 0:
        return []
    if host.arc_count < k * pattern.arc_count:
        return None
    if nontrivial and _backward_count(host, order) < k * nontrivial:
        return None
    tried: list[int] = []
    for model in iter_models(host, pattern, kind, node_budget=budget):
        budget.tick()
        arcs = model.host_arcs()
        mask = 0
        for a in arcs:
            mask |= bits[a]
        if any(t & mask == t for t in tried):
            continue
        tried.append(mask)
        floor = min(arcs)
        rest = Digraph(host.vertices, (a for a in host.arcs if a > floor and a not in arcs))
        tail = _pack_arcs(rest, pattern, kind, k - 1, budget, nontrivial, order, bits)
        if tail is not None:
            return [model] + tail
    return None


# ---------------------------------------------------------------------------
# public packing operations

def pack_direct(host: Digraph, pattern: PatternDigraph, k: int, kind: str,
                disjointness: str | None = None,
                node_budget: Budget | int | None = None) -> PackingCertificate | None:
    """Exhaustive search for k disjoint copies.

    Returns None only when no such packing exists; running out of budget
    raises BudgetExhausted.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    check_kind(kind)
    disjointness = check_disjointness(disjointness or default_disjointness(kind))
    if disjointness == ARC:
        models = pack_arc_disjoint(host, pattern, kind, k, node_budget)
    else:
        if pattern.arc_count == 0:
            models = None
            if host.n >= k * pattern.m:
                vs = host.vertices
                models = [Model.build(vs[i * pattern.m:(i + 1) * pattern.m], {}) for i in range(k)]
        else:
            models = pack_vertex_disjoint(host, pattern, kind, k, budget=node_budget)
    if models is None:
        return None
    return _certificate(kind, disjointness, pattern, models)


def pack_acyclic_arc_disjoint(t: Tournament, pattern: PatternDigraph, k: int, seed: int = 0,
                              attempts: int = 200,
                              node_budget: Budget | int | None = None) -> PackingCertificate | None:
    """Arc-disjoint copies of an acyclic pattern from transitive subtournaments.

    Vertex subsets of size ``2**m`` meeting pairwise in at most one vertex
    span pairwise arc-disjoint subtournaments; each holds a transitive
    subtournament on ``m`` vertices and hence a copy of the pattern. Subsets
    are collected greedily from seeded samples; if fewer than ``k`` turn up
    the exhaustive search decides.
    """
    if not pattern.is_acyclic():
        raise ValueError("pattern is not acyclic")
    m = pattern.m
    if m > t.n:
        return None
    if m <= 1 or pattern.arc_count == 0:
        return pack_direct(t, pattern, k, IMMERSION, ARC)
    block = min(t.n, 2 ** m)
    rng = random.Random(seed)
    chosen: list[frozenset[int]] = []
    models: list[Model] = []
    candidates = [tuple(t.vertices[:block])]
    candidates += [tuple(sorted(rng.sample(t.vertices, block))) for _ in range(attempts)]
    for cand in candidates:
        if len(models) == k:
            break
        s = frozenset(cand)
        if any(len(s & c) > 1 for c in chosen):
            continue
        seq = transitive_subtournament(t.restrict(s), m)
        if seq is None:
            continue
        chosen.append(s)
        models.append(_copies_of_vertex_set(pattern, seq))
    if len(models) == k:
        return _certificate(IMMERSION, ARC, pattern, models)
    return pack_direct(t, pattern, k, IMMERSION, ARC, node_budget)


def pack_acyclic_vertex_disjoint(t: Tournament, pattern: PatternDigraph, k: int
                                 ) -> PackingCertificate | None:
    """Vertex-disjoint copies of an acyclic pattern when ``n >= 2**m * k``:
    cut the vertices into k blocks of at least ``2**m`` and take a
    transitive subtournament on ``m`` vertices in each."""
    if not pattern.is_acyclic():
        raise ValueError("pattern is not acyclic")
    m = pattern.m
    need = 2 ** m
    if t.n < m or t.n < need * k:
        return None
    vs = t.vertices
    models = []
    for i in range(k):
        block = vs[i * need:] if i == k - 1 else vs[i * need:(i + 1) * need]
        seq = transitive_subtournament(t.restrict(block), m)
        if seq is None:  # cannot happen for blocks of 2**m vertices
            raise AssertionError("block without a transitive subtournament")
        models.append(_copies_of_vertex_set(pattern, seq))
    return _certificate(TOPMINOR, VERTEX, pattern, models)


# ---------------------------------------------------------------------------
# transversal independent sets

@dataclass(frozen=True)
class PartitionedConflictGraph:
    """Parts ``parts[i]`` (all of size s) and undirected edges between parts."""

    parts: tuple[tuple[int, ...], ...]
    edges: frozenset[frozenset[int]] = field(default_factory=frozenset)

    def __post_init__(self):
        sizes = {len(p) for p in self.parts}
        if len(sizes) > 1:
            raise ValueError("parts must have equal size")
        seen: set[int] = set()
        for p in self.parts:
            if seen & set(p) or len(set(p)) != len(p):
                raise ValueError("parts must be disjoint")
            seen.update(p)
        for e in self.edges:
            if len(e) != 2 or not e <= seen:
                raise ValueError(f"bad edge {sorted(e)}")
            u, v = sorted(e)
            if self.part_of(u) == self.part_of(v):
                raise ValueError(f"edge {u}-{v} lies inside one part")

    @classmethod
    def build(cls, parts: Iterable[Iterable[int]], edges: Iterable[Iterable[int]] = ()):
        return cls(tuple(tuple(p) for p in parts), frozenset(frozenset(e) for e in edges))

    @property
    def h(self) -> int:
        return len(self.parts)

    @property
    def s(self) -> int:
        return len(self.parts[0]) if self.parts else 0

    def part_of(self, v: int) -> int:
        for i, p in enumerate(self.parts):
            if v in p:
                return i
        raise KeyError(v)

    def edge_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for e in self.edges:
            u, v = sorted(e)
            key = tuple(sorted((self.part_of(u), self.part_of(v))))
            counts[key] = counts.get(key, 0) + 1
        return counts

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return not any(frozenset((a, b)) in self.edges for a, b in itertools.combinations(vs, 2))


class TransversalFailure(AssertionError):
    pass


def check_edge_bound(g: PartitionedConflictGraph) -> None:
    s, h = g.s, g.h
    if s < 2 or s % 2:
        raise ValueError(f"part size must be even and positive, got {s}")
    for (i, j), count in sorted(g.edge_counts().items()):
        if count * h * h > s * s:
            raise ValueError(
                f"parts {i} and {j} have {count} edges, above the limit s^2/h^2 = {s * s / (h * h):g}")


def diagonal_slices(g: PartitionedConflictGraph, shifts: Sequence[int]) -> list[tuple[int, ...]]:
    s = g.s
    return [tuple(part[(t + a) % s] for part, a in zip(g.parts, shifts)) for t in range(s)]


def independent_slices(g: PartitionedConflictGraph, shifts: Sequence[int]) -> list[tuple[int, ...]]:
    return [sl for sl in diagonal_slices(g, shifts) if g.is_independent(sl)]


def transversal_independent_sets(g: PartitionedConflictGraph, seed: int = 0
                                 ) -> list[tuple[int, ...]]:
    """At least s/2 pairwise disjoint independent transversals.

    Draws uniform shift vectors and keeps the independent diagonal slices of
    the first draw that has at least s/2 of them; after ``64*h`` failed
    draws every shift vector (first shift fixed to 0) is tried in turn.
    """
    check_edge_bound(g)
    s, h = g.s, g.h
    rng = random.Random(seed)
    for _ in range(64 * h):
        shifts = [rng.randrange(s) for _ in range(h)]
        good = independent_slices(g, shifts)
        if 2 * len(good) >= s:
            return good
    for rest in itertools.product(range(s), repeat=h - 1):
        good = independent_slices(g, (0,) + rest)
        if 2 * len(good) >= s:
            return good
    raise TransversalFailure("no shift vector gives s/2 independent slices")


def slice_success_rate(g: PartitionedConflictGraph, trials: int = 10_000, seed: int = 0
                       ) -> tuple[float, float]:
    """Monte-Carlo estimate over uniform shift vectors: the probability of
    at least s/2 independent slices, and the mean fraction of independent
    slices."""
    s, h = g.s, g.h
    rng = random.Random(seed)
    hits = 0
    frac = 0.0
    for _ in range(trials):
        shifts = [rng.randrange(s) for _ in range(h)]
        good = len(independent_slices(g, shifts))
        hits += 2 * good >= s
        frac += good / s
    return hits / trials, frac / trials


# ---------------------------------------------------------------------------
# stitching copies of components across windows

def assemble_interval_packing(host: Tournament, pattern: PatternDigraph,
                              order: Sequence[int], families: Sequence[Sequence[Model]],
                              k: int, kind: str, seed: int = 0) -> PackingCertificate:
    """Join copies of the strong components into k vertex-disjoint copies
    of the whole pattern.

    ``order`` lists strong components of the pattern (indices into its
    strong decomposition) along a linear extension of the condensation;
    ``families[i]`` holds equally many vertex-disjoint models of component
    ``order[i]``, written on that component's vertices in increasing order
    relabelled 0, 1, ..., and lying in the i-th of a row of disjoint host
    windows. Two copies conflict when a host arc runs from the copy in the
    later window to the copy in the earlier one. One conflict-free copy per
    window is picked k times, and every pattern arc between components is
    sent to the host arc joining the images of its ends.
    """
    check_kind(kind)
    dec = strong_components(pattern)
    h = dec.h
    if sorted(order) != list(range(h)):
        raise ValueError("order must list every strong component once")
    if len(families) != h:
        raise ValueError("need one family per strong component")
    sizes = {len(f) for f in families}
    if len(sizes) != 1:
        raise ValueError("families must have equal size")
    s = sizes.pop()
    if s < k:
        raise ValueError(f"families of {s} copies cannot give {k} stitched copies")
    pos = {c: i for i, c in enumerate(order)}
    for a, b in dec.condensation:
        if pos[a] > pos[b]:
            raise ValueError("order is not a linear extension of the condensation")

    comp_vertices = [sorted(dec.components[c]) for c in order]
    copy_id = {}
    vsets = {}
    parts = []
    for i, fam in enumerate(families):
        ids = []
        for j, model in enumerate(fam):
            cid = i * s + j
            copy_id[(i, j)] = cid
            vsets[cid] = model.host_vertices()
            ids.append(cid)
        parts.append(ids)
    owner = {}
    for cid, vs in vsets.items():
        for v in vs:
            if v in owner:
                raise ValueError(f"host vertex {v} is used by two copies")
            owner[v] = cid
    edges = set()
    for u, v in host.arcs:
        a, b = owner.get(u), owner.get(v)
        if a is None or b is None:
            continue
        if a // s > b // s:
            edges.add(frozenset((a, b)))
    g = PartitionedConflictGraph.build(parts, edges)
    if edges:
        sets = transversal_independent_sets(g, seed)
    else:
        sets = diagonal_slices(g, [0] * h)
    if len(sets) < k:
        raise TransversalFailure(f"only {len(sets)} independent transversals, need {k}")

    models = []
    for sl in sets[:k]:
        phi = [None] * pattern.m
        paths: dict[Arc, list[Arc]] = {}
        for i, cid in enumerate(sl):
            model = families[i][cid - i * s]
            local = comp_vertices[i]
            for li, pv in enumerate(local):
                phi[pv] = model.vertex_map[li]
            for (la, lb), p in model.paths:
                paths[(local[la], local[lb])] = list(p)
        for a, b in pattern.sorted_arcs():
            if (a, b) in paths:
                continue
            x, y = phi[a], phi[b]
            if not host.has_arc(x, y):
                raise AssertionError(f"cross arc {(a, b)} would need the backward arc {(y, x)}")
            paths[(a, b)] = [(x, y)]
        model = Model.build(phi, paths)
        problems = verify_model(host, pattern, model, kind)
        if problems:
            raise AssertionError(f"stitched copy is invalid: {problems}")
        models.append(model)
    return _certificate(kind, VERTEX, pattern, models)
