"""Brute-force ground truth for small instances.

Everything here is deliberately naive: plain enumeration of vertex maps,
simple paths, permutations, subsets and endpoint interleavings. None of it
calls into the search, layout or packing code, so a defect there cannot be
masked by the same defect here. Witnesses are checked with the model
verifier only.
"""

from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Sequence

from .digraph import Arc, Digraph, PatternDigraph
from .embed import IMMERSION, TOPMINOR, Model, check_kind, verify_model

#: Largest host for the packing and hitting oracles.
MAX_PACKING_N = 7
#: Largest pattern (vertices) for the packing and hitting oracles.
MAX_PACKING_M = 4
#: Largest host for arc hitting sets (the search runs over arc subsets).
MAX_ARC_HITTING_N = 7
MAX_CUTWIDTH_N = 8
MAX_PATHWIDTH_N = 6


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    digest: str
    quantity: str
    value: int
    witness: Any

    def to_dict(self) -> dict:
        return {"digest": self.digest, "quantity": self.quantity, "value": self.value,
                "witness": self.witness}


def instance_digest(host: Digraph, pattern: Digraph | None = None, *extra: object) -> str:
    h = hashlib.sha256()
    h.update(repr((host.vertices, host.sorted_arcs())).encode())
    if pattern is not None:
        h.update(repr((pattern.vertices, pattern.sorted_arcs())).encode())
    for x in extra:
        h.update(repr(x).encode())
    return h.hexdigest()[:16]


def _cap(what: str, value: int, cap: int) -> None:
    if value > cap:
        raise OracleCapExceeded(f"{what} is {value}, above the oracle limit {cap}")


# ---------------------------------------------------------------------------
# naive embeddings

def _simple_paths(succ: dict[int, list[int]], src: int, dst: int, allowed: set[int]
                  ) -> Iterator[list[int]]:
    """All simple paths src -> dst whose inner vertices lie in ``allowed``,
    shortest first."""
    queue = deque([(src, [src])])
    while queue:
        v, path = queue.popleft()
        for w in succ[v]:
            if w == dst:
                yield path + [w]
            elif w in allowed and w not in path:
                queue.append((w, path + [w]))


def naive_models(host: Digraph, pattern: PatternDigraph, kind: str,
                 arcs: Iterable[Arc] | None = None,
                 prune: Callable[[int, int], bool] | None = None) -> Iterator[Model]:
    """Every model of ``pattern`` in ``host`` (optionally using only the
    given arcs), by trying each injective vertex map and each combination
    of simple paths.

    Partial models are abandoned when ``prune(arc_bits, vertex_bits)`` is
    true, where the bit masks follow ``arc_bits`` and ``vertex_bits``.
    """
    check_kind(kind)
    usable = set(host.arcs if arcs is None else arcs)
    succ: dict[int, list[int]] = {v: [] for v in host.vertices}
    for u, v in sorted(usable):
        succ[u].append(v)
    abit = arc_bits(host)
    vbit = vertex_bits(host)
    everything = set(host.vertices)
    cache: dict[tuple[int, int], list[tuple[list[Arc], int, int, int]]] = {}

    def paths(x: int, y: int) -> list[tuple[list[Arc], int, int, int]]:
        if (x, y) not in cache:
            out = []
            for path in _simple_paths(succ, x, y, everything):
                steps = list(zip(path, path[1:]))
                am = sum(abit[e] for e in steps)
                inner = sum(vbit[w] for w in path[1:-1])
                out.append((steps, am, inner, vbit[x] | vbit[y] | inner))
            cache[(x, y)] = out
        return cache[(x, y)]

    parcs = pattern.sorted_arcs()
    for phi in itertools.permutations(host.vertices, pattern.m):
        branch = sum(vbit[v] for v in phi)

        def route(i: int, used_arcs: int, used_inner: int, touched: int,
                  chosen: dict[Arc, list[Arc]]) -> Iterator[Model]:
            if i == len(parcs):
                yield Model.build(phi, chosen)
                return
            a, b = parcs[i]
            for steps, am, inner, vm in paths(phi[a], phi[b]):
                if am & used_arcs:
                    continue
                if kind == TOPMINOR and inner & (branch | used_inner):
                    continue
                if prune is not None and prune(used_arcs | am, touched | vm):
                    continue
                chosen[(a, b)] = steps
                yield from route(i + 1, used_arcs | am, used_inner | inner, touched | vm, chosen)
                del chosen[(a, b)]

        if prune is None or not prune(0, branch):
            yield from route(0, 0, 0, branch, {})


def arc_bits(host: Digraph) -> dict[Arc, int]:
    return {a: 1 << i for i, a in enumerate(host.sorted_arcs())}


def vertex_bits(host: Digraph) -> dict[int, int]:
    return {v: 1 << i for i, v in enumerate(host.vertices)}


def naive_find(host: Digraph, pattern: PatternDigraph, kind: str) -> Model | None:
    return next(naive_models(host, pattern, kind), None)


def naive_is_free(host: Digraph, pattern: PatternDigraph, kind: str) -> bool:
    return naive_find(host, pattern, kind) is None


# ---------------------------------------------------------------------------
# packing and hitting numbers

def _footprints(host: Digraph, pattern: PatternDigraph, kind: str, by_vertices: bool
                ) -> dict[frozenset, Model]:
    """Inclusion-minimal footprints (vertex or arc sets) of all models."""
    # Partial models already covering a known footprint cannot lead to a
    # smaller one and are cut off.
    seen: dict[int, Model] = {}

    def covers(arcs: int, vertices: int) -> bool:
        part = vertices if by_vertices else arcs
        return any(f & part == f for f in seen)

    abit, vbit = arc_bits(host), vertex_bits(host)
    for model in naive_models(host, pattern, kind, prune=covers):
        if by_vertices:
            fp = sum(vbit[v] for v in model.host_vertices())
        else:
            fp = sum(abit[a] for a in model.host_arcs())
        if fp not in seen:
            seen[fp] = model
    minimal: dict[frozenset, Model] = {}
    for f in sorted(seen, key=lambda f: (bin(f).count("1"), f)):
        if not any(g & f == g and g != f for g in seen):
            model = seen[f]
            minimal[model.host_vertices() if by_vertices else model.host_arcs()] = model
    return minimal


def brute_max_packing(host: Digraph, pattern: PatternDigraph, kind: str, disjointness: str
                      ) -> OracleReport:
    """Largest number of pairwise disjoint copies with a witness."""
    if disjointness not in ("arc", "vertex"):
        raise ValueError(f"unknown disjointness {disjointness!r}")
    _cap("host size", host.n, MAX_PACKING_N)
    _cap("pattern size", pattern.m, MAX_PACKING_M)
    digest = instance_digest(host, pattern, kind, disjointness, "packing")
    if pattern.arc_count == 0 and disjointness == "arc":
        raise OracleCapExceeded("arc-disjoint packing of an arcless pattern is unbounded")
    fps = _footprints(host, pattern, kind, disjointness == "vertex")
    items = sorted(fps, key=lambda f: (len(f), sorted(f)))
    best: list[frozenset] = []
    universe = frozenset().union(*items) if items else frozenset()
    smallest = min((len(f) for f in items), default=1)

    def grow(start: int, used: frozenset, chosen: list[frozenset]) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) + len(universe - used) // smallest <= len(best):
            return
        for i in range(start, len(items)):
            f = items[i]
            if used & f:
                continue
            chosen.append(f)
            grow(i + 1, used | f, chosen)
            chosen.pop()

    grow(0, frozenset(), [])
    witness = [fps[f].to_dict() for f in best]
    for f in best:
        assert not verify_model(host, pattern, fps[f], kind)
    return OracleReport(digest, f"max {disjointness}-disjoint {kind} copies", len(best), witness)


def brute_packing_at_least(host: Digraph, pattern: PatternDigraph, kind: str,
                           disjointness: str, k: int) -> list[Model] | None:
    """k pairwise disjoint copies found by taking copies one after another
    in what the earlier ones leave over, or None after trying everything."""
    if disjointness not in ("arc", "vertex"):
        raise ValueError(f"unknown disjointness {disjointness!r}")
    _cap("host size", host.n, MAX_PACKING_N)
    _cap("pattern size", pattern.m, MAX_PACKING_M)

    def more(rest: Digraph, need: int) -> list[Model] | None:
        if need == 0:
            return []
        tried: set[frozenset] = set()
        for model in naive_models(rest, pattern, kind):
            used = model.host_vertices() if disjointness == "vertex" else model.host_arcs()
            if used in tried:
                continue
            tried.add(used)
            if disjointness == "vertex":
                nxt = Digraph([v for v in rest.vertices if v not in used],
                              [a for a in rest.arcs if not set(a) & used])
            else:
                nxt = Digraph(rest.vertices, rest.arcs - used)
            tail = more(nxt, need - 1)
            if tail is not None:
                return [model] + tail
        return None

    found = more(host, k)
    if found is not None:
        for model in found:
            assert not verify_model(host, pattern, model, kind)
    return found


def brute_min_hitting(host: Digraph, pattern: PatternDigraph, kind: str) -> OracleReport:
    """Smallest arc set (immersion) or vertex set (topological minor) whose
    removal leaves no copy, by subsets of increasing size."""
    check_kind(kind)
    _cap("host size", host.n, MAX_ARC_HITTING_N if kind == IMMERSION else MAX_PACKING_N)
    _cap("pattern size", pattern.m, MAX_PACKING_M)
    digest = instance_digest(host, pattern, kind, "hitting")
    # A set hits every copy exactly when it meets every minimal footprint.
    fps = list(_footprints(host, pattern, kind, kind == TOPMINOR))
    pool = sorted(host.arcs) if kind == IMMERSION else list(host.vertices)
    for size in range(len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            chosen = set(combo)
            if all(chosen & f for f in fps):
                rest = (Digraph(host.vertices, host.arcs - chosen) if kind == IMMERSION
                        else Digraph([v for v in host.vertices if v not in chosen],
                                     [a for a in host.arcs if not set(a) & chosen]))
                assert naive_is_free(rest, pattern, kind)
                return OracleReport(digest, f"min {kind} hitting set", size,
                                    [list(x) if isinstance(x, tuple) else x for x in combo])
    raise AssertionError("removing everything must leave no copy")


# ---------------------------------------------------------------------------
# layouts

def _crossing(host: Digraph, order: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    worst = 0
    for gap in range(len(order) + 1):
        c = sum(1 for u, v in host.arcs if pos[u] >= gap > pos[v])
        worst = max(worst, c)
    return worst


def brute_cutwidth(host: Digraph) -> OracleReport:
    """Minimum over all orderings of the most backward arcs over one gap."""
    _cap("host size", host.n, MAX_CUTWIDTH_N)
    n = host.n
    vs = host.vertices
    into = {v: {u for u in vs if host.has_arc(u, v)} for v in vs}
    outof = {v: {w for w in vs if host.has_arc(v, w)} for v in vs}
    best, witness = None, None
    for perm in itertools.permutations(vs):
        # walking left to right: the gap after position i carries the arcs
        # from later vertices into earlier ones
        placed: set[int] = set()
        cur = worst = 0
        for v in perm:
            cur += len(into[v] - placed) - len(outof[v] & placed)
            placed.add(v)
            worst = max(worst, cur)
            if best is not None and worst >= best:
                break
        else:
            if best is None or worst < best:
                best, witness = worst, list(perm)
    if n == 0:
        best, witness = 0, []
    assert _crossing(host, witness) == best
    return OracleReport(instance_digest(host, None, "cutwidth"), "cutwidth", best, witness)


def _interleaving_ok(host: Digraph, starts: dict[int, int], ends: dict[int, int]) -> bool:
    for u in host.vertices:
        for v in host.vertices:
            if u != v and ends[u] < starts[v] and not host.has_arc(u, v):
                return False
    return True


def brute_pathwidth(host: Digraph) -> OracleReport:
    """Minimum over all endpoint interleavings of the largest number of
    simultaneously open intervals, where intervals that do not overlap must
    follow the arc between their vertices."""
    _cap("host size", host.n, MAX_PATHWIDTH_N)
    vs = host.vertices
    if not vs:
        return OracleReport(instance_digest(host, None, "pathwidth"), "pathwidth", 0, {})
    best = [len(vs) + 1, None]

    def walk(events: list[tuple[int, int]], opened: set[int], closed: set[int],
             peak: int) -> None:
        if peak >= best[0]:
            return
        if len(closed) == len(vs):
            best[0], best[1] = peak, list(events)
            return
        for v in vs:
            if v not in opened:
                # an interval starting now lies after every closed one
                if any(not host.has_arc(u, v) for u in closed):
                    continue
                opened.add(v)
                events.append((v, 0))
                walk(events, opened, closed, max(peak, len(opened) - len(closed)))
                events.pop()
                opened.discard(v)
            elif v not in closed:
                closed.add(v)
                events.append((v, 1))
                walk(events, opened, closed, peak)
                events.pop()
                closed.discard(v)

    walk([], set(), set(), 0)
    starts, ends = {}, {}
    for i, (v, kind) in enumerate(best[1]):
        (ends if kind else starts)[v] = i
    assert _interleaving_ok(host, starts, ends)
    witness = {v: [starts[v], ends[v]] for v in vs}
    return OracleReport(instance_digest(host, None, "pathwidth"), "pathwidth", best[0], witness)


# ---------------------------------------------------------------------------
# structural facts about immersion models

def strongly_connected_sets(graph: Digraph) -> list[frozenset[int]]:
    """Strong components by mutual reachability."""
    reach = {}
    for v in graph.vertices:
        seen = {v}
        todo = [v]
        while todo:
            x = todo.pop()
            for y in graph.succ(x):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        reach[v] = seen
    comps = []
    done: set[int] = set()
    for v in graph.vertices:
        if v not in done:
            comp = frozenset(u for u in reach[v] if v in reach[u])
            comps.append(comp)
            done |= comp
    return comps


def last_vertex_has_backward_arc(model: Model, pattern_vertices: Iterable[int],
                                 order: Sequence[int]) -> bool:
    """The part of the model on a strongly connected set of pattern vertices
    has, at its last vertex in ``order``, an out-arc going backward."""
    images, arcs = model.restricted(pattern_vertices)
    touched = set(images.values()) | {x for a in arcs for x in a}
    pos = {v: i for i, v in enumerate(order)}
    last = max(touched, key=pos.__getitem__)
    return any(u == last and pos[w] < pos[u] for u, w in arcs)


def component_inside_one_host_component(host: Digraph, model: Model,
                                        pattern_vertices: Iterable[int]) -> bool:
    images, arcs = model.restricted(pattern_vertices)
    touched = set(images.values()) | {x for a in arcs for x in a}
    return any(touched <= comp for comp in strongly_connected_sets(host))
