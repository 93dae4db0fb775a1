"""Digraph values: tournaments, pattern digraphs and strong components.

Vertices are integer labels. Induced substructures keep the labels of the
graph they were cut out of, so a certificate computed on a piece of a host
tournament is already expressed in host labels. ``Tournament.relabeled``
gives the dense 0..n-1 view together with the map back to host labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

Arc = tuple[int, int]

#: Largest number of strong components for which orderings are enumerated.
MAX_COMPONENTS = 8


class TooManyComponents(ValueError):
    pass


class Digraph:
    """A simple digraph on integer labels.

    Loops and repeated arcs are rejected; opposite arcs (digons) are allowed.
    Instances are immutable and hashable.
    """

    __slots__ = ("vertices", "_succ", "_pred", "_arcs", "_hash")

    def __init__(self, vertices: Iterable[int], arcs: Iterable[Arc] = ()):
        vs = tuple(sorted(set(vertices)))
        succ: dict[int, set[int]] = {v: set() for v in vs}
        pred: dict[int, set[int]] = {v: set() for v in vs}
        for u, v in arcs:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u not in succ or v not in succ:
                raise KeyError(f"arc ({u}, {v}) has an endpoint outside the vertex set")
            succ[u].add(v)
            pred[v].add(u)
        self.vertices = vs
        self._succ = {v: frozenset(s) for v, s in succ.items()}
        self._pred = {v: frozenset(s) for v, s in pred.items()}
        self._arcs = frozenset((u, v) for u in vs for v in self._succ[u])
        self._hash = None

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def arcs(self) -> frozenset[Arc]:
        return self._arcs

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self._arcs)

    @property
    def arc_count(self) -> int:
        return len(self._arcs)

    @property
    def norm(self) -> int:
        """Vertex count plus arc count."""
        return len(self.vertices) + len(self._arcs)

    def has_arc(self, u: int, v: int) -> bool:
        s = self._succ.get(u)
        return s is not None and v in s

    def succ(self, v: int) -> frozenset[int]:
        return self._succ[v]

    def pred(self, v: int) -> frozenset[int]:
        return self._pred[v]

    def out_degree(self, v: int) -> int:
        return len(self._succ[v])

    def in_degree(self, v: int) -> int:
        return len(self._pred[v])

    def __contains__(self, v: object) -> bool:
        return v in self._succ

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.vertices == other.vertices and self._arcs == other._arcs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vertices, self._arcs))
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}(vertices={list(self.vertices)}, arcs={self.sorted_arcs()})"

    # -- derived digraphs ---------------------------------------------

    def induced(self, subset: Iterable[int]) -> Digraph:
        keep = set(subset)
        unknown = keep.difference(self._succ)
        if unknown:
            raise KeyError(f"unknown vertices {sorted(unknown)}")
        return Digraph(keep, ((u, v) for u, v in self._arcs if u in keep and v in keep))

    def delete_vertices(self, removed: Iterable[int]) -> Digraph:
        gone = set(removed)
        unknown = gone.difference(self._succ)
        if unknown:
            raise KeyError(f"unknown vertices {sorted(unknown)}")
        return self.induced(v for v in self.vertices if v not in gone)

    def delete_arcs(self, removed: Iterable[Arc]) -> Digraph:
        gone = set(map(tuple, removed))
        unknown = gone.difference(self._arcs)
        if unknown:
            raise KeyError(f"unknown arcs {sorted(unknown)}")
        return Digraph(self.vertices, self._arcs - gone)

    def reachable_from(self, v: int) -> set[int]:
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in self._succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def strong_components(self) -> StrongDecomposition:
        return strong_components(self)

    def is_acyclic(self) -> bool:
        return all(len(c) == 1 for c in _tarjan(self))

    def topological_order(self) -> list[int]:
        """Vertices of an acyclic digraph, every arc pointing forward.

        Kahn's algorithm with smallest-label tie breaking.
        """
        indeg = {v: len(self._pred[v]) for v in self.vertices}
        ready = sorted(v for v, d in indeg.items() if d == 0)
        out = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for w in sorted(self._succ[v]):
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
            ready.sort()
        if len(out) != len(self.vertices):
            raise ValueError("digraph has a directed cycle")
        return out


class PatternDigraph(Digraph):
    """The pattern H: a simple digraph on vertices 0..m-1.

    ``name`` is informational only and does not take part in equality.
    """

    __slots__ = ("name",)

    def __init__(self, m: int, arcs: Iterable[Arc] = (), name: str | None = None):
        arcs = [tuple(a) for a in arcs]
        if len(set(arcs)) != len(arcs):
            raise ValueError("pattern has a repeated arc")
        for u, v in arcs:
            if not (0 <= u < m and 0 <= v < m):
                raise KeyError(f"arc ({u}, {v}) outside 0..{m - 1}")
        super().__init__(range(m), arcs)
        self.name = name

    @property
    def m(self) -> int:
        return len(self.vertices)

    def is_strongly_connected(self) -> bool:
        return len(_tarjan(self)) == 1


class Tournament(Digraph):
    """A complete orientation: exactly one arc between any two vertices."""

    __slots__ = ()

    def __init__(self, vertices: Iterable[int], arcs: Iterable[Arc]):
        super().__init__(vertices, arcs)
        n = len(self.vertices)
        if len(self._arcs) != n * (n - 1) // 2:
            raise ValueError(
                f"not a tournament: {len(self._arcs)} arcs on {n} vertices")
        for u, v in self._arcs:
            if u in self._succ[v]:
                raise ValueError(f"not a tournament: both ({u}, {v}) and ({v}, {u})")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> Tournament:
        n = len(rows)
        arcs = [(i, j) for i in range(n) for j in range(n) if i != j and rows[i][j]]
        return cls(range(n), arcs)

    @classmethod
    def transitive(cls, n: int) -> Tournament:
        """TT_n with dominance order 0 -> 1 -> ... -> n-1."""
        return cls(range(n), ((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def from_ordering(cls, order: Sequence[int], backward: Iterable[Arc] = ()) -> Tournament:
        """Orient every pair forward along ``order`` except the listed
        backward arcs, which are given as (later, earlier)."""
        pos = {v: i for i, v in enumerate(order)}
        back = set(map(tuple, backward))
        arcs = []
        for u, v in itertools.combinations(order, 2):
            if (v, u) in back:
                arcs.append((v, u))
            else:
                arcs.append((u, v))
        for u, v in back:
            if pos[u] < pos[v]:
                raise ValueError(f"({u}, {v}) is not backward in the given order")
        return cls(order, arcs)

    def matrix(self) -> list[list[int]]:
        idx = {v: i for i, v in enumerate(self.vertices)}
        rows = [[0] * self.n for _ in range(self.n)]
        for u, v in self._arcs:
            rows[idx[u]][idx[v]] = 1
        return rows

    def restrict(self, subset: Iterable[int]) -> Tournament:
        keep = set(subset)
        unknown = keep.difference(self._succ)
        if unknown:
            raise KeyError(f"unknown vertices {sorted(unknown)}")
        return Tournament(keep, ((u, v) for u, v in self._arcs if u in keep and v in keep))

    def relabeled(self) -> tuple[Tournament, tuple[int, ...]]:
        """Dense copy on 0..n-1 plus the map local index -> label."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        dense = Tournament(range(self.n), ((idx[u], idx[v]) for u, v in self._arcs))
        return dense, self.vertices


def restrict(tournament: Tournament, subset: Iterable[int]) -> Tournament:
    return tournament.restrict(subset)


def delete_arcs(graph: Digraph, arcs: Iterable[Arc]) -> Digraph:
    return graph.delete_arcs(arcs)


# ---------------------------------------------------------------------------
# strong components

@dataclass(frozen=True)
class StrongDecomposition:
    """Strong components of a digraph and its condensation.

    Components are indexed in increasing order of their smallest vertex.
    """

    components: tuple[frozenset[int], ...]
    component_of: dict[int, int]
    condensation: frozenset[tuple[int, int]]

    @property
    def h(self) -> int:
        return len(self.components)

    def is_trivial(self, index: int) -> bool:
        return len(self.components[index]) == 1

    def nontrivial(self) -> list[int]:
        return [i for i in range(self.h) if not self.is_trivial(i)]


def _tarjan(graph: Digraph) -> list[list[int]]:
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    result: list[list[int]] = []
    counter = 0
    for root in graph.vertices:
        if root in index:
            continue
        work = [(root, iter(sorted(graph.succ(root))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(graph.succ(w)))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
    return result


def strong_components(graph: Digraph) -> StrongDecomposition:
    comps = sorted((frozenset(c) for c in _tarjan(graph)), key=min)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    cond = frozenset(
        (comp_of[u], comp_of[v]) for u, v in graph.arcs if comp_of[u] != comp_of[v])
    return StrongDecomposition(tuple(comps), comp_of, cond)


def enumerate_component_orderings(dec: StrongDecomposition) -> list[tuple[int, ...]]:
    """All linear extensions of the condensation, lexicographically.

    Each ordering is the sequence of component indices in the order they are
    placed, i.e. entry ``i`` is the component at position ``i + 1``.
    """
    h = dec.h
    if h > MAX_COMPONENTS:
        raise TooManyComponents(
            f"pattern has {h} strong components; at most {MAX_COMPONENTS} are supported")
    preds = [set() for _ in range(h)]
    for a, b in dec.condensation:
        preds[b].add(a)
    out: list[tuple[int, ...]] = []
    seq: list[int] = []
    placed: set[int] = set()

    def extend() -> None:
        if len(seq) == h:
            out.append(tuple(seq))
            return
        for c in range(h):
            if c not in placed and preds[c] <= placed:
                seq.append(c)
                placed.add(c)
                extend()
                placed.discard(c)
                seq.pop()

    extend()
    return out


# ---------------------------------------------------------------------------
# transitive subtournaments

def _is_transitive_sequence(t: Digraph, seq: Sequence[int]) -> bool:
    return all(t.has_arc(seq[i], seq[j])
               for i in range(len(seq)) for j in range(i + 1, len(seq)))


def transitive_subtournament(t: Tournament, m: int) -> tuple[int, ...] | None:
    """A transitive subtournament on ``m`` vertices, listed source to sink.

    Picks a vertex of maximum out-degree and recurses into its
    out-neighbourhood, which always succeeds when ``t`` has at least
    ``2**(m-1)`` vertices. Otherwise an exhaustive search decides.
    """
    if m < 1 or m > t.n:
        if m == 0:
            return ()
        return None
    pool = set(t.vertices)
    seq: list[int] = []
    while len(seq) < m and pool:
        best = max(sorted(pool), key=lambda v: len(t.succ(v) & pool))
        seq.append(best)
        pool = set(t.succ(best) & pool)
    if len(seq) == m:
        return tuple(seq)
    for combo in itertools.combinations(t.vertices, m):
        inside = set(combo)
        ordered = sorted(combo, key=lambda v: -len(t.succ(v) & inside))
        if _is_transitive_sequence(t, ordered):
            return tuple(ordered)
    return None


def component_pattern(pattern: Digraph, vertices: Iterable[int]) -> tuple[PatternDigraph, tuple[int, ...]]:
    """The sub-pattern induced on ``vertices``, relabelled 0, 1, ... in
    increasing label order, with the map back to the original labels."""
    local = tuple(sorted(vertices))
    idx = {v: i for i, v in enumerate(local)}
    arcs = [(idx[u], idx[v]) for u, v in pattern.sorted_arcs() if u in idx and v in idx]
    return PatternDigraph(len(local), arcs), local


def feedback_ordering(graph: Digraph) -> tuple[int, list[int]]:
    """An ordering with the fewest backward arcs (a minimum feedback arc
    set), by dynamic programming over vertex subsets, with that count."""
    vs = graph.vertices
    idx = {v: i for i, v in enumerate(vs)}
    out = [0] * len(vs)
    for u, v in graph.arcs:
        out[idx[u]] |= 1 << idx[v]
    size = 1 << len(vs)
    best = [0] * size
    last = [0] * size
    for s in range(1, size):
        b = len(graph.arcs) + 1
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            # the vertex at ``low`` comes last among ``s``; its arcs into the
            # rest of ``s`` point backward
            c = best[s ^ low] + bin(out[low.bit_length() - 1] & (s ^ low)).count("1")
            if c < b:
                b, last[s] = c, low
        best[s] = b
    order = []
    s = size - 1
    while s:
        order.append(vs[last[s].bit_length() - 1])
        s ^= last[s]
    order.reverse()
    return best[-1], order


def min_backward_arcs(graph: Digraph) -> int:
    return feedback_ordering(graph)[0]
