"""Immersion and topological-minor models: verification and exhaustive search.

A model maps pattern vertices injectively to host vertices and every pattern
arc to a directed host path between the images of its ends. Immersion models
need the paths to be pairwise arc-disjoint; topological-minor models need
them internally vertex-disjoint with no branch vertex used as an inner
vertex.

The search is a deterministic backtracking over the vertex map, routing each
pattern arc as soon as both of its ends are placed. Paths are tried shortest
first and, within one length, in lexicographic order of their vertices.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .digraph import Arc, Digraph, PatternDigraph, strong_components

IMMERSION = "immersion"
TOPMINOR = "topminor"
KINDS = (IMMERSION, TOPMINOR)


class BudgetExhausted(RuntimeError):
    """The node budget ran out before the search could decide."""

    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {KINDS}")
    return kind


# ---------------------------------------------------------------------------
# node accounting shared by every search in the package

_counter: contextvars.ContextVar[list[int] | None] = contextvars.ContextVar(
    "epdual_node_counter", default=None)


@contextlib.contextmanager
def counting_nodes() -> Iterator[list[int]]:
    """Collect the number of search nodes expanded inside the block.

    Yields a one-element list whose entry grows as searches run. Nested
    blocks pass their totals on to the enclosing one.
    """
    box = [0]
    token = _counter.set(box)
    try:
        yield box
    finally:
        _counter.reset(token)
        outer = _counter.get()
        if outer is not None:
            outer[0] += box[0]


def charge_nodes(count: int) -> None:
    box = _counter.get()
    if box is not None:
        box[0] += count


class Budget:
    """A shared, optionally bounded node allowance."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.used = 0

    def tick(self, count: int = 1) -> None:
        self.used += count
        charge_nodes(count)
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted(self.used)

    @property
    def remaining(self) -> int | None:
        if self.limit is None:
            return None
        return max(0, self.limit - self.used)


def as_budget(budget: Budget | int | None) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


# ---------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class Model:
    """``vertex_map[i]`` is the host image of pattern vertex ``i``;
    ``paths`` pairs every pattern arc with its host path, given as a
    sequence of host arcs."""

    vertex_map: tuple[int, ...]
    paths: tuple[tuple[Arc, tuple[Arc, ...]], ...]

    @classmethod
    def build(cls, vertex_map: Iterable[int], paths: Mapping[Arc, Iterable[Arc]]) -> Model:
        return cls(tuple(vertex_map),
                   tuple(sorted((tuple(a), tuple(tuple(x) for x in p)) for a, p in paths.items())))

    def path(self, arc: Arc) -> tuple[Arc, ...]:
        for a, p in self.paths:
            if a == arc:
                return p
        raise KeyError(arc)

    def host_arcs(self) -> frozenset[Arc]:
        return frozenset(x for _, p in self.paths for x in p)

    def host_vertices(self) -> frozenset[int]:
        out = set(self.vertex_map)
        for _, p in self.paths:
            for u, v in p:
                out.add(u)
                out.add(v)
        return frozenset(out)

    def internal_vertices(self) -> frozenset[int]:
        out = set()
        for _, p in self.paths:
            out.update(v for _, v in p[:-1])
        return frozenset(out)

    def restricted(self, pattern_vertices: Iterable[int]) -> tuple[dict[int, int], frozenset[Arc]]:
        """Images of the given pattern vertices and the host arcs on paths
        of arcs with both ends among them."""
        keep = set(pattern_vertices)
        images = {v: self.vertex_map[v] for v in sorted(keep)}
        arcs = frozenset(x for (a, b), p in self.paths if a in keep and b in keep for x in p)
        return images, arcs

    def to_dict(self) -> dict:
        return {"vertex_map": list(self.vertex_map),
                "paths": [[list(a), [list(x) for x in p]] for a, p in self.paths]}

    @classmethod
    def from_dict(cls, data: Mapping) -> Model:
        vm = tuple(int(v) for v in data["vertex_map"])
        paths = tuple((tuple(int(x) for x in a), tuple(tuple(int(y) for y in x) for x in p))
                      for a, p in data["paths"])
        return cls(vm, paths)


def verify_model(host: Digraph, pattern: PatternDigraph, model: Model, kind: str) -> list[str]:
    """Every way in which ``model`` fails to be a model; empty when valid."""
    check_kind(kind)
    out: list[str] = []
    vm = model.vertex_map
    if len(vm) != pattern.m:
        return [f"vertex map has {len(vm)} entries for a pattern on {pattern.m} vertices"]
    for i, v in enumerate(vm):
        if v not in host:
            out.append(f"pattern vertex {i} maps to {v}, which is not a host vertex")
    if len(set(vm)) != len(vm):
        out.append("vertex map is not injective")
    seen_arcs: set[Arc] = set()
    for a, _ in model.paths:
        if a in seen_arcs:
            out.append(f"pattern arc {a} has more than one path")
        seen_arcs.add(a)
    for a in pattern.sorted_arcs():
        if a not in seen_arcs:
            out.append(f"pattern arc {a} has no path")
    for a in sorted(seen_arcs - pattern.arcs):
        out.append(f"path given for {a}, which is not a pattern arc")
    if out:
        return out

    images = set(vm)
    arc_owner: dict[Arc, Arc] = {}
    inner_owner: dict[int, Arc] = {}
    for a, p in model.paths:
        u, v = vm[a[0]], vm[a[1]]
        if not p:
            out.append(f"path disconnected: empty path for pattern arc {a}")
            continue
        for x in p:
            if not host.has_arc(*x):
                out.append(f"path for {a} uses {x}, which is not a host arc")
        if p[0][0] != u:
            out.append(f"path disconnected: path for {a} starts at {p[0][0]}, not at {u}")
        if p[-1][1] != v:
            out.append(f"path disconnected: path for {a} ends at {p[-1][1]}, not at {v}")
        for x, y in zip(p, p[1:]):
            if x[1] != y[0]:
                out.append(f"path disconnected: path for {a} jumps from {x} to {y}")
        walk = [p[0][0]] + [x[1] for x in p]
        if len(set(walk)) != len(walk):
            out.append(f"path for {a} repeats a vertex")
        for x in p:
            if kind == IMMERSION:
                if x in arc_owner:
                    out.append(f"arc reused: {x} lies on the paths for {arc_owner[x]} and {a}")
                arc_owner[x] = a
        if kind == TOPMINOR:
            for w in walk[1:-1]:
                if w in images:
                    out.append(f"inner vertex {w} of the path for {a} is a branch vertex")
                if w in inner_owner and inner_owner[w] != a:
                    out.append(f"inner vertex {w} shared by the paths for {inner_owner[w]} and {a}")
                inner_owner[w] = a
    return out


# ---------------------------------------------------------------------------
# search

class _Search:
    """Backtracking state for one (host, pattern, kind) query."""

    def __init__(self, host: Digraph, pattern: PatternDigraph, kind: str, budget: Budget,
                 allowed_sccs: dict[int, set[int]] | None = None):
        self.kind = kind
        self.budget = budget
        self.pattern = pattern
        self.hosts = host.vertices
        self.succ = {v: sorted(host.succ(v)) for v in host.vertices}
        self.pred = {v: sorted(host.pred(v)) for v in host.vertices}
        hdec = strong_components(host)
        self.scc = hdec.component_of
        self.scc_size = [len(c) for c in hdec.components]
        self.reach = {v: host.reachable_from(v) for v in host.vertices}

        pdec = strong_components(pattern)
        self.pcomp = pdec.component_of
        self.pcomp_size = [len(c) for c in pdec.components]
        self.preach = {v: pattern.reachable_from(v) for v in pattern.vertices}
        self.allowed = allowed_sccs or {}
        self.pout = {v: pattern.out_degree(v) for v in pattern.vertices}
        self.pin = {v: pattern.in_degree(v) for v in pattern.vertices}

        self.order = self._vertex_order(pattern)
        placed: set[int] = set()
        self.routes: list[list[Arc]] = []
        for x in self.order:
            rs = [(u, v) for u, v in pattern.sorted_arcs()
                  if (u == x and v in placed) or (v == x and u in placed)]
            self.routes.append(rs)
            placed.add(x)

        self.phi: dict[int, int] = {}
        self.image_set: set[int] = set()
        self.used_arcs: set[Arc] = set()
        self.used_vertices: set[int] = set()
        self.res_out = {v: len(self.succ[v]) for v in self.hosts}
        self.res_in = {v: len(self.pred[v]) for v in self.hosts}
        self.open_out = dict(self.pout)
        self.open_in = dict(self.pin)
        self.chosen: dict[Arc, tuple[Arc, ...]] = {}
        self.dead: set = set()
        self.yields = 0

    @staticmethod
    def _vertex_order(pattern: PatternDigraph) -> list[int]:
        dec = strong_components(pattern)
        size = {v: len(dec.components[dec.component_of[v]]) for v in pattern.vertices}
        deg = {v: pattern.out_degree(v) + pattern.in_degree(v) for v in pattern.vertices}
        left = set(pattern.vertices)
        order: list[int] = []
        while left:
            def key(v: int) -> tuple:
                links = len(pattern.succ(v) & set(order)) + len(pattern.pred(v) & set(order))
                return (links, size[v] > 1, deg[v], -v)
            x = max(left, key=key)
            order.append(x)
            left.discard(x)
        return order

    # -- candidate images ---------------------------------------------

    def _candidates(self, x: int) -> list[int]:
        comp = self.pcomp[x]
        csize = self.pcomp_size[comp]
        same = [self.phi[y] for y in self.phi if self.pcomp[y] == comp]
        out = []
        for c in self.hosts:
            if c in self.image_set:
                continue
            if self.kind == TOPMINOR and c in self.used_vertices:
                continue
            if self.kind == IMMERSION:
                if self.res_out[c] < self.pout[x] or self.res_in[c] < self.pin[x]:
                    continue
            elif len(self.succ[c]) < self.pout[x] or len(self.pred[c]) < self.pin[x]:
                continue
            if csize > 1:
                sc = self.scc[c]
                if self.scc_size[sc] < csize:
                    continue
                if comp in self.allowed and sc not in self.allowed[comp]:
                    continue
                if same and self.scc[same[0]] != sc:
                    continue
            ok = True
            for y, cy in self.phi.items():
                if x in self.preach[y] and c not in self.reach[cy]:
                    ok = False
                    break
                if y in self.preach[x] and cy not in self.reach[c]:
                    ok = False
                    break
            if ok:
                out.append(c)
        return out

    # -- path routing -------------------------------------------------

    def _usable_inner(self, w: int) -> bool:
        return self.kind == IMMERSION or w not in self.used_vertices

    def _dist_to(self, t: int) -> dict[int, int]:
        dist = {t: 0}
        frontier = [t]
        immersion = self.kind == IMMERSION
        while frontier:
            nxt = []
            for w in frontier:
                if w != t and not self._usable_inner(w):
                    continue
                d = dist[w] + 1
                for v in self.pred[w]:
                    if v in dist:
                        continue
                    if immersion and (v, w) in self.used_arcs:
                        continue
                    dist[v] = d
                    nxt.append(v)
            frontier = nxt
        return dist

    def _paths(self, s: int, t: int) -> Iterator[tuple[Arc, ...]]:
        dist = self._dist_to(t)
        if s not in dist:
            return
        if self.kind == IMMERSION:
            longest = len(self.hosts) - 1
        else:
            longest = 1 + sum(1 for v in self.hosts if v not in self.used_vertices)
        immersion = self.kind == IMMERSION
        used_arcs = self.used_arcs
        succ = self.succ
        visited = {s}
        trail: list[Arc] = []

        def walk(v: int, left: int) -> Iterator[tuple[Arc, ...]]:
            if left == 0:
                if v == t:
                    yield tuple(trail)
                return
            for w in succ[v]:
                if w in visited or dist.get(w, left + 1) > left - 1:
                    continue
                if w == t:
                    if left != 1:
                        continue
                elif not self._usable_inner(w):
                    continue
                if immersion and (v, w) in used_arcs:
                    continue
                visited.add(w)
                trail.append((v, w))
                yield from walk(w, left - 1)
                trail.pop()
                visited.discard(w)

        for length in range(dist[s], longest + 1):
            yield from walk(s, length)

    def _take(self, arc: Arc, path: tuple[Arc, ...]) -> None:
        self.chosen[arc] = path
        self.open_out[arc[0]] -= 1
        self.open_in[arc[1]] -= 1
        if self.kind == IMMERSION:
            for u, v in path:
                self.used_arcs.add((u, v))
                self.res_out[u] -= 1
                self.res_in[v] -= 1
        else:
            for _, v in path[:-1]:
                self.used_vertices.add(v)

    def _give_back(self, arc: Arc, path: tuple[Arc, ...]) -> None:
        del self.chosen[arc]
        self.open_out[arc[0]] += 1
        self.open_in[arc[1]] += 1
        if self.kind == IMMERSION:
            for u, v in path:
                self.used_arcs.discard((u, v))
                self.res_out[u] += 1
                self.res_in[v] += 1
        else:
            for _, v in path[:-1]:
                self.used_vertices.discard(v)

    def _degrees_hold(self) -> bool:
        if self.kind != IMMERSION:
            return True
        for y, c in self.phi.items():
            if self.res_out[c] < self.open_out[y] or self.res_in[c] < self.open_in[y]:
                return False
        return True

    # -- driver -------------------------------------------------------

    def _state_key(self, i: int) -> tuple:
        used = self.used_arcs if self.kind == IMMERSION else self.used_vertices
        return (i, tuple(self.phi[x] for x in self.order[:i]), frozenset(used))

    def _assign(self, i: int) -> Iterator[Model]:
        if i == len(self.order):
            self.yields += 1
            yield Model.build((self.phi[v] for v in range(self.pattern.m)), self.chosen)
            return
        key = self._state_key(i)
        if key in self.dead:
            return
        before = self.yields
        x = self.order[i]
        for c in self._candidates(x):
            self.budget.tick()
            self.phi[x] = c
            self.image_set.add(c)
            self.used_vertices.add(c)
            yield from self._route(i, 0)
            self.used_vertices.discard(c)
            self.image_set.discard(c)
            del self.phi[x]
        if self.yields == before:
            self.dead.add(key)

    def _route(self, i: int, j: int) -> Iterator[Model]:
        routes = self.routes[i]
        if j == len(routes):
            if self._degrees_hold():
                yield from self._assign(i + 1)
            return
        arc = routes[j]
        for path in self._paths(self.phi[arc[0]], self.phi[arc[1]]):
            self.budget.tick()
            self._take(arc, path)
            yield from self._route(i, j + 1)
            self._give_back(arc, path)

    def run(self) -> Iterator[Model]:
        return self._assign(0)


def _component_filter(host: Digraph, pattern: PatternDigraph, kind: str,
                      budget: Budget) -> dict[int, set[int]] | None:
    """Host strong components able to hold each non-trivial pattern
    component on its own; None when some component fits nowhere."""
    pdec = strong_components(pattern)
    if pdec.h == 1:
        return {}
    hdec = strong_components(host)
    allowed: dict[int, set[int]] = {}
    for ci in pdec.nontrivial():
        comp = sorted(pdec.components[ci])
        idx = {v: i for i, v in enumerate(comp)}
        sub = PatternDigraph(len(comp), [(idx[u], idx[v]) for u, v in pattern.arcs
                                         if u in idx and v in idx])
        ok = set()
        for hi, hc in enumerate(hdec.components):
            if len(hc) < len(comp):
                continue
            piece = host.induced(hc)
            if kind == IMMERSION and piece.arc_count < sub.arc_count:
                continue
            if next(_Search(piece, sub, kind, budget).run(), None) is not None:
                ok.add(hi)
        if not ok:
            return None
        allowed[ci] = ok
    return allowed


def _prepare(host: Digraph, pattern: PatternDigraph, kind: str,
             excluded_arcs: Iterable[Arc] | None) -> Digraph | None:
    check_kind(kind)
    if excluded_arcs:
        gone = set(map(tuple, excluded_arcs)) & host.arcs
        host = Digraph(host.vertices, host.arcs - gone)
    if pattern.m > host.n:
        return None
    if kind == IMMERSION and pattern.arc_count > host.arc_count:
        return None
    if not pattern.is_acyclic() and host.is_acyclic():
        return None
    return host


def iter_models(host: Digraph, pattern: PatternDigraph, kind: str,
                excluded_arcs: Iterable[Arc] | None = None,
                node_budget: Budget | int | None = None) -> Iterator[Model]:
    """Every model of ``pattern`` in ``host`` (minus ``excluded_arcs``), in
    search order. Raises BudgetExhausted if the budget runs out."""
    budget = as_budget(node_budget)
    prepared = _prepare(host, pattern, kind, excluded_arcs)
    if prepared is None:
        return
    allowed = _component_filter(prepared, pattern, kind, budget)
    if allowed is None:
        return
    yield from _Search(prepared, pattern, kind, budget, allowed).run()


def find_model(host: Digraph, pattern: PatternDigraph, kind: str,
               excluded_arcs: Iterable[Arc] | None = None,
               node_budget: Budget | int | None = None) -> Model | None:
    """The first model in search order, or None when there is none.

    None is only returned after the whole search space has been exhausted;
    running out of budget raises BudgetExhausted instead.
    """
    return next(iter_models(host, pattern, kind, excluded_arcs, node_budget), None)


def is_free(host: Digraph, pattern: PatternDigraph, kind: str,
            node_budget: Budget | int | None = None) -> bool:
    """True iff ``host`` has no model of ``pattern``. With a budget set,
    an undecided search raises BudgetExhausted."""
    return find_model(host, pattern, kind, node_budget=node_budget) is None
