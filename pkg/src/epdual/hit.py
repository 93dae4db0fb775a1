"""Packing-or-hitting constructions.

Every public operation either finds the requested number of disjoint copies
of a pattern or a set of arcs (immersions) or vertices (topological minors)
whose removal leaves no copy at all. Sizes are checked against closed-form
bounds in which the layout width actually measured on the host stands in for
the unknown worst-case width, and each recursion step is logged in a trace so
that the per-step size bounds can be audited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .digraph import (Arc, Digraph, PatternDigraph, Tournament, component_pattern,
                      enumerate_component_orderings, strong_components)
from .embed import IMMERSION, TOPMINOR, Budget, BudgetExhausted, Model, check_kind, find_model, is_free
from .layouts import IntervalDecomposition, Ordering, best_ordering, pathwidth_search
from .pack import (ARC, INDEX_LIMIT, VERTEX, PackingCertificate, assemble_interval_packing,
                   copy_index, default_disjointness, pack_acyclic_arc_disjoint,
                   pack_acyclic_vertex_disjoint, pack_arc_disjoint, pack_direct,
                   pack_vertex_disjoint)

#: Node budget of each individual packing query made while building
#: hitting sets; running out counts as "not enough copies".
QUERY_BUDGET = 200_000
#: Node budget of the direct packing attempt made before any hitting branch.
DIRECT_BUDGET = 5_000
#: Hosts up to this size get an exact interval decomposition.
PATHWIDTH_EXACT_CAP = 12


class PackingDetected(Exception):
    """Raised by the strongly-connected constructions when they run into
    disjoint copies instead of a hitting set."""

    def __init__(self, models: Sequence[Model], note: str = ""):
        super().__init__(f"found {len(models)} disjoint copies{': ' + note if note else ''}")
        self.models = list(models)


@dataclass(frozen=True)
class BoundReport:
    k: int
    components: int
    pattern_order: int
    pattern_norm: int
    orderings: int
    width: int
    width_kind: str
    width_exact: bool
    s: int | None
    size: int
    bound: float
    formula: str

    @property
    def holds(self) -> bool:
        return self.size <= self.bound + 1e-9

    def to_dict(self) -> dict:
        return {"k": self.k, "components": self.components, "pattern_order": self.pattern_order,
                "pattern_norm": self.pattern_norm, "orderings": self.orderings,
                "width": self.width, "width_kind": self.width_kind,
                "width_exact": self.width_exact, "s": self.s, "size": self.size,
                "bound": self.bound, "formula": self.formula, "holds": self.holds}

    @classmethod
    def from_dict(cls, d: dict) -> BoundReport:
        return cls(d["k"], d["components"], d["pattern_order"], d["pattern_norm"],
                   d["orderings"], d["width"], d["width_kind"], d["width_exact"], d["s"],
                   d["size"], d["bound"], d["formula"])


@dataclass(frozen=True)
class HittingCertificate:
    kind: str
    elements: tuple
    trace: tuple[dict, ...] = ()

    def __len__(self) -> int:
        return len(self.elements)

    def residual(self, host: Digraph) -> Digraph:
        """The host with the elements removed."""
        if self.kind == IMMERSION:
            return host.delete_arcs(self.elements)
        return host.delete_vertices(self.elements)

    def audit(self, host: Digraph, pattern: PatternDigraph) -> list[str]:
        if self.kind == IMMERSION:
            missing = [a for a in self.elements if not host.has_arc(*a)]
        else:
            missing = [v for v in self.elements if v not in host]
        if missing:
            return [f"elements not in the host: {missing}"]
        model = find_model(self.residual(host), pattern, self.kind)
        if model is not None:
            return [f"a copy survives the removal: vertex map {list(model.vertex_map)}"]
        return []


@dataclass(frozen=True)
class EpOutcome:
    packing: PackingCertificate | None
    hitting: HittingCertificate | None
    report: BoundReport
    trace: tuple[dict, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if (self.packing is None) == (self.hitting is None):
            raise ValueError("exactly one of packing and hitting must be set")

    @property
    def result(self) -> str:
        return "packing" if self.packing is not None else "hitting"


def _ceil_half(k: int) -> int:
    return (k + 1) // 2


def _listed(elements: Iterable) -> list:
    return [list(x) if isinstance(x, tuple) else x for x in sorted(elements)]


def _sorted_elements(kind: str, elements: Iterable) -> tuple:
    return tuple(sorted(set(elements)))


def _require_strong(pattern: PatternDigraph) -> None:
    if pattern.arc_count == 0 or not pattern.is_strongly_connected():
        raise ValueError("pattern must be strongly connected with at least one arc")


def _require_acyclic(pattern: PatternDigraph, want: bool) -> None:
    if pattern.is_acyclic() != want:
        raise ValueError("pattern must be acyclic" if want else "pattern must not be acyclic")


def _cut(t: Digraph, sigma: Ordering, alpha: int) -> set[Arc]:
    pos = sigma.position
    return {(u, v) for u, v in t.arcs if pos[u] > alpha >= pos[v]}


def _ordering_width(t: Digraph, sigma: Ordering) -> int:
    return max((len(_cut(t, sigma, a)) for a in range(len(sigma) + 1)), default=0)


def _members(dec: IntervalDecomposition, lo: int, hi: float, within: Iterable[int] | None = None
             ) -> frozenset[int]:
    pool = dec.intervals if within is None else within
    return frozenset(v for v in pool if lo <= dec.first(v) and dec.last(v) <= hi)


def _vcut(dec: IntervalDecomposition, alpha: int, within: Iterable[int]) -> set[int]:
    return {v for v in within if dec.first(v) <= alpha <= dec.last(v)}


class _Copies:
    """Copy queries inside induced subtournaments of one root tournament."""

    def __init__(self, root: Tournament, pattern: PatternDigraph, kind: str,
                 node_budget: int | None, notes: list[dict]):
        self.root = root
        self.pattern = pattern
        self.kind = kind
        self.node_budget = node_budget
        self.notes = notes
        self.index = copy_index(root, pattern, kind) if root.n <= INDEX_LIMIT else None

    def first(self, vertices: Iterable[int]) -> Model | None:
        vs = tuple(vertices)
        if self.index is not None:
            w = self.index.mask_of(vs)
            for m, model in self.index.entries:
                if m & w == m:
                    return model
            return None
        return find_model(self.root.induced(vs), self.pattern, self.kind)

    def first_prefix(self, order: Sequence[int]) -> tuple[int, Model] | None:
        """Shortest prefix of ``order`` holding a copy, with that copy."""
        if self.index is not None:
            pos = {v: i + 1 for i, v in enumerate(order)}
            best = None
            for m, model in self.index.within(order):
                end = max(pos[v] for v in self.index.vertices_of(m))
                if best is None or end < best[0]:
                    best = (end, model)
            return best
        if self.first(order) is None:
            return None
        lo, hi = 0, len(order)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.first(order[:mid]) is None:
                lo = mid
            else:
                hi = mid
        return hi, self.first(order[:hi])

    def pack(self, vertices: Iterable[int], j: int) -> list[Model] | None:
        vs = tuple(vertices)
        try:
            return pack_vertex_disjoint(self.root, self.pattern, self.kind, j, vs,
                                        Budget(self.node_budget))
        except BudgetExhausted:
            self.notes.append({"op": "budget", "query": "vertex-disjoint copies",
                               "need": j, "window": sorted(vs)})
            return None


# ---------------------------------------------------------------------------
# acyclic patterns

def hit_acyclic_immersion(t: Tournament, pattern: PatternDigraph, k: int, seed: int = 0,
                          node_budget: int | None = DIRECT_BUDGET) -> EpOutcome:
    """k arc-disjoint copies, or all arcs of the host as the hitting set."""
    _require_acyclic(pattern, True)
    trace: list[dict] = []
    cert = None
    if pattern.arc_count == 0:
        if t.n >= pattern.m:
            cert = pack_direct(t, pattern, k, IMMERSION, ARC)
        trace.append({"op": "no-arcs", "copies": k if cert else 0})
    else:
        try:
            cert = pack_acyclic_arc_disjoint(t, pattern, k, seed=seed, node_budget=node_budget)
        except BudgetExhausted:
            trace.append({"op": "budget", "query": "arc-disjoint copies", "need": k})
        trace.append({"op": "acyclic-pack", "found": cert is not None})
    if cert is not None:
        size = len(cert)
        hit = None
    else:
        elements = t.sorted_arcs() if pattern.arc_count else []
        hit = HittingCertificate(IMMERSION, _sorted_elements(IMMERSION, elements), tuple(trace))
        size = len(hit)
    report = BoundReport(k, strong_components(pattern).h, pattern.m, pattern.norm, 1, 0,
                         "none", True, None, size, t.n * (t.n - 1) / 2, "n(n-1)/2")
    return EpOutcome(cert, hit, report, tuple(trace))


def hit_acyclic_topminor(t: Tournament, pattern: PatternDigraph, k: int,
                         node_budget: int | None = DIRECT_BUDGET) -> EpOutcome:
    """k vertex-disjoint copies when the host has at least ``2**m * k``
    vertices (or a direct search finds them), else every host vertex."""
    _require_acyclic(pattern, True)
    trace: list[dict] = []
    cert = pack_acyclic_vertex_disjoint(t, pattern, k)
    trace.append({"op": "acyclic-pack", "blocks": t.n >= 2 ** pattern.m * k,
                  "found": cert is not None})
    if cert is None:
        try:
            cert = pack_direct(t, pattern, k, TOPMINOR, VERTEX, node_budget)
        except BudgetExhausted:
            trace.append({"op": "budget", "query": "vertex-disjoint copies", "need": k})
        trace.append({"op": "direct-pack", "found": cert is not None})
    hit = None
    if cert is None:
        hit = HittingCertificate(TOPMINOR, tuple(t.vertices), tuple(trace))
    size = len(cert) if cert else len(hit)
    report = BoundReport(k, strong_components(pattern).h, pattern.m, pattern.norm, 1, 0,
                         "none", True, None, size, 2 ** pattern.m * k, "2^m*k")
    return EpOutcome(cert, hit, report, tuple(trace))


# ---------------------------------------------------------------------------
# strongly connected patterns, immersions

def hit_strongly_immersion(t: Tournament, pattern: PatternDigraph, k: int, seed: int = 0,
                           sigma: Ordering | None = None,
                           node_budget: int | None = QUERY_BUDGET) -> EpOutcome:
    """Arc hitting set for a strongly connected pattern, assuming the host
    has no k arc-disjoint copies.

    Splits the ordering at the largest prefix without ceil(k/2) copies,
    recurses on both sides and removes the two cuts around the split.
    Meeting k copies instead raises PackingDetected.
    """
    _require_strong(pattern)
    if k < 1:
        raise ValueError("k must be at least 1")
    exact = True
    if sigma is None:
        sigma, width, exact = best_ordering(t, seed)
    else:
        sigma.check(t)
        width = _ordering_width(t, sigma)
    trace: list[dict] = []

    def lacks(vs: Sequence[int], need: int) -> list[Model] | None:
        try:
            return pack_arc_disjoint(t.restrict(vs), pattern, IMMERSION, need, Budget(node_budget))
        except BudgetExhausted:
            trace.append({"op": "budget", "query": "arc-disjoint copies", "need": need,
                          "window": sorted(vs)})
            return None

    def rec(vs: tuple[int, ...], kk: int, depth: int) -> set[Arc]:
        sub = t.restrict(vs)
        if kk == 1:
            model = find_model(sub, pattern, IMMERSION)
            trace.append({"op": "base", "depth": depth, "k": 1, "n": len(vs),
                          "copy": model is not None})
            if model is not None:
                raise PackingDetected([model])
            return set()
        need = _ceil_half(kk)
        local = Ordering(vs)
        node_width = _ordering_width(sub, local)
        # largest prefix length a whose prefix lacks `need` copies
        lo, hi = 0, len(vs) + 1
        found_at: dict[int, list[Model]] = {}
        while hi - lo > 1:
            mid = (lo + hi) // 2
            got = lacks(vs[:mid], need)
            if got is None:
                lo = mid
            else:
                hi = mid
                found_at[mid] = got
        alpha = lo
        if alpha == len(vs):
            trace.append({"op": "halve", "depth": depth, "k": kk, "n": len(vs), "added": 0,
                          "width": node_width})
            try:
                return rec(vs, need, depth + 1)
            except PackingDetected:
                trace.append({"op": "fallback", "depth": depth, "n": len(vs)})
                return set(sub.arcs)
        prefix_models = found_at.get(alpha + 1) or lacks(vs[:alpha + 1], need)
        cuts = _cut(sub, local, alpha) | _cut(sub, local, alpha + 1)
        trace.append({"op": "split", "depth": depth, "k": kk, "n": len(vs), "alpha": alpha,
                      "added": len(cuts), "width": node_width, "elements": _listed(cuts)})
        try:
            left = rec(vs[:alpha], need, depth + 1)
        except PackingDetected:
            trace.append({"op": "fallback", "depth": depth, "n": alpha})
            left = set(t.restrict(vs[:alpha]).arcs)
        try:
            right = rec(vs[alpha + 1:], kk // 2, depth + 1)
        except PackingDetected as exc:
            if prefix_models is None:
                raise
            raise PackingDetected(list(prefix_models) + exc.models) from None
        return left | right | cuts

    elements = rec(sigma.order, k, 0)
    hit = HittingCertificate(IMMERSION, _sorted_elements(IMMERSION, elements), tuple(trace))
    report = BoundReport(k, 1, pattern.m, pattern.norm, 1, width, "cutwidth", exact, None,
                         len(hit), 6 * width * k * k, "6*c*k^2")
    return EpOutcome(None, hit, report, tuple(trace))


def hit_strongly_vrtx_immersion(t: Tournament, pattern: PatternDigraph, k: int,
                                sigma: Ordering | None = None, seed: int = 0,
                                root: Tournament | None = None) -> EpOutcome:
    """Arc hitting set for a strongly connected pattern, assuming the host
    has no k vertex-disjoint copies.

    Repeatedly takes the shortest prefix of the ordering that holds a copy,
    removes the backward arcs leaving its last vertex together with the cut
    behind it, and continues on the remaining suffix with k - 1. Meeting k
    copies instead raises PackingDetected.
    """
    _require_strong(pattern)
    if k < 1:
        raise ValueError("k must be at least 1")
    exact = True
    if sigma is None:
        sigma, width, exact = best_ordering(t, seed)
    else:
        sigma.check(t)
        width = _ordering_width(t, sigma)
    trace: list[dict] = []
    copies = _Copies(root or t, pattern, IMMERSION, QUERY_BUDGET, trace)
    elements: set[Arc] = set()
    peeled: list[Model] = []
    vs = tuple(sigma.order)
    kk = k
    depth = 0
    while True:
        hit = copies.first_prefix(vs)
        if hit is None:
            trace.append({"op": "base", "depth": depth, "k": kk, "n": len(vs), "copy": False})
            break
        alpha, model = hit
        peeled.append(model)
        if kk == 1:
            trace.append({"op": "base", "depth": depth, "k": 1, "n": len(vs), "copy": True})
            raise PackingDetected(peeled)
        sub = t.restrict(vs)
        local = Ordering(vs)
        last = vs[alpha - 1]
        earlier = set(vs[:alpha - 1])
        back = {(last, w) for w in sub.succ(last) if w in earlier}
        block = back | _cut(sub, local, alpha)
        trace.append({"op": "peel", "depth": depth, "k": kk, "n": len(vs), "alpha": alpha,
                      "added": len(block), "width": width, "elements": _listed(block)})
        elements |= block
        vs = vs[alpha:]
        kk -= 1
        depth += 1
    cert = HittingCertificate(IMMERSION, _sorted_elements(IMMERSION, elements), tuple(trace))
    report = BoundReport(k, 1, pattern.m, pattern.norm, 1, width, "cutwidth", exact, None,
                         len(cert), 2 * (k - 1) * width, "2*(k-1)*c")
    return EpOutcome(None, cert, report, tuple(trace))


def choose_s(h: int, width: int, k: int) -> int:
    """Smallest even integer at least h*ceil(sqrt(width)) and 2k."""
    s = max(h * math.isqrt(width - 1) + h if width > 0 else 0, 2 * k, 2)
    return s + (s % 2)


def hit_weakly_immersion(t: Tournament, pattern: PatternDigraph, k: int, seed: int = 0,
                         s: int | None = None) -> EpOutcome:
    """k copies or an arc hitting set for a pattern with a directed cycle.

    For every ordering of the pattern's strong components the host ordering
    is cut into consecutive windows, each the shortest one holding s
    vertex-disjoint copies of the next component. If some component ordering
    fills all its windows the copies are stitched into k copies of the
    pattern; otherwise the union of per-window hitting sets and window-end
    cuts is returned.
    """
    check_k(k)
    _require_acyclic(pattern, False)
    dec = strong_components(pattern)
    h = dec.h
    orderings = enumerate_component_orderings(dec)
    sigma, width, exact = best_ordering(t, seed)
    if s is None:
        s = choose_s(h, width, k)
    elif s % 2 or s < 2 * k:
        raise ValueError("s must be even and at least 2k")
    n = t.n
    order = sigma.order
    trace: list[dict] = [{"op": "layout", "width": width, "exact": exact, "s": s,
                          "orderings": len(orderings)}]
    subs = [component_pattern(pattern, c) for c in dec.components]
    copies = {ci: _Copies(t, subs[ci][0], IMMERSION, QUERY_BUDGET, trace)
              for ci in dec.nontrivial()}

    windows: dict[tuple[int, int], tuple[int, bool, list[Model]]] = {}

    def window(ci: int, alpha: int) -> tuple[int, bool, list[Model]]:
        key = (ci, alpha)
        if key not in windows:
            if dec.is_trivial(ci):
                beta = alpha + s
                if beta <= n:
                    models = [Model((v,), ()) for v in order[alpha:beta]]
                    windows[key] = (beta, True, models)
                else:
                    windows[key] = (n, False, [])
            else:
                cp = copies[ci]
                full = cp.pack(order[alpha:], s)
                if full is None:
                    windows[key] = (n, False, [])
                else:
                    lo, hi = alpha, n
                    best = full
                    while hi - lo > 1:
                        mid = (lo + hi) // 2
                        got = cp.pack(order[alpha:mid], s)
                        if got is None:
                            lo = mid
                        else:
                            hi, best = mid, got
                    windows[key] = (hi, True, best)
        return windows[key]

    rows = []
    for pi in orderings:
        alpha = 0
        spans = []
        for ci in pi:
            beta, full, models = window(ci, alpha)
            spans.append((ci, alpha, beta, full, models))
            alpha = beta
        rows.append((pi, spans))
        if all(sp[3] for sp in spans):
            families = [sp[4] for sp in spans]
            cert = assemble_interval_packing(t, pattern, pi, families, k, IMMERSION, seed)
            trace.append({"op": "stitch", "order": list(pi),
                          "windows": [[a, b] for _, a, b, _, _ in spans]})
            report = BoundReport(k, h, pattern.m, pattern.norm, len(orderings), width,
                                 "cutwidth", exact, s, len(cert), k, "k")
            return EpOutcome(cert, None, report, tuple(trace))

    a_sets: dict[tuple[int, int], set[Arc]] = {}
    elements: set[Arc] = set()
    for pi, spans in rows:
        for ci, alpha, beta, full, _ in spans:
            key = (ci, alpha)
            if key not in a_sets:
                win = order[alpha:beta]
                sub = t.restrict(win)
                if dec.is_trivial(ci):
                    pos = sigma.position
                    a_sets[key] = {(u, v) for u, v in sub.arcs if pos[u] > pos[v]}
                else:
                    try:
                        out = hit_strongly_vrtx_immersion(sub, subs[ci][0], s + 1,
                                                          sigma.restricted(win), root=t)
                        a_sets[key] = set(out.hitting.elements)
                    except PackingDetected:
                        trace.append({"op": "fallback", "component": ci, "window": [alpha, beta]})
                        a_sets[key] = set(sub.arcs)
            b_set = _cut(t, sigma, beta)
            trace.append({"op": "window", "order": list(pi), "component": ci,
                          "window": [alpha, beta], "full": full,
                          "a_size": len(a_sets[key]), "b_size": len(b_set),
                          "a": _listed(a_sets[key]), "b": _listed(b_set)})
            elements |= a_sets[key] | b_set
    hit = HittingCertificate(IMMERSION, _sorted_elements(IMMERSION, elements), tuple(trace))
    report = BoundReport(k, h, pattern.m, pattern.norm, len(orderings), width, "cutwidth", exact,
                         s, len(hit), len(orderings) * pattern.m * (2 * s + 1) * width,
                         "|Pi|*m*(2s+1)*c")
    return EpOutcome(None, hit, report, tuple(trace))


# ---------------------------------------------------------------------------
# topological minors

def audit_windows(t: Digraph, dec: IntervalDecomposition, spans: Sequence[tuple[int, int]]
                  ) -> None:
    """Consecutive windows [a, b] of a valid decomposition hold disjoint
    vertex sets, and every arc between two of them points to the later one."""
    members = [_members(dec, a, b) for a, b in spans]
    for i, x in enumerate(members):
        for j in range(i + 1, len(members)):
            y = members[j]
            if x & y:
                raise AssertionError(f"windows {spans[i]} and {spans[j]} share {sorted(x & y)}")
            for u in x:
                for v in y:
                    if t.has_arc(v, u):
                        raise AssertionError(f"arc {(v, u)} points from window {spans[j]} "
                                             f"back to window {spans[i]}")


def _decomposition(t: Tournament) -> tuple[IntervalDecomposition, int, bool]:
    return pathwidth_search(t, exact_cap=PATHWIDTH_EXACT_CAP)


def hit_strongly_topminor(t: Tournament, pattern: PatternDigraph, k: int,
                          dec: IntervalDecomposition | None = None,
                          root: Tournament | None = None) -> EpOutcome:
    """Vertex hitting set for a strongly connected pattern, assuming the
    host has no k vertex-disjoint copies.

    Splits the interval decomposition at the largest point whose left part
    lacks ceil(k/2) copies, recurses on both sides and removes the vertices
    over the point right after it. Meeting k copies instead raises
    PackingDetected.
    """
    _require_strong(pattern)
    if k < 1:
        raise ValueError("k must be at least 1")
    exact = True
    if dec is None:
        dec, width, exact = _decomposition(t)
    else:
        width = dec.restricted(t.vertices).width
    dec = dec.restricted(t.vertices)
    trace: list[dict] = []
    copies = _Copies(root or t, pattern, TOPMINOR, QUERY_BUDGET, trace)

    def rec(vs: frozenset[int], kk: int, depth: int) -> set[int]:
        if kk == 1:
            model = copies.first(sorted(vs))
            trace.append({"op": "base", "depth": depth, "k": 1, "n": len(vs),
                          "copy": model is not None})
            if model is not None:
                raise PackingDetected([model])
            return set()
        need = _ceil_half(kk)
        node_width = dec.restricted(vs).width if vs else 0
        if copies.pack(sorted(vs), need) is None:
            trace.append({"op": "halve", "depth": depth, "k": kk, "n": len(vs), "added": 0,
                          "width": node_width})
            try:
                return rec(vs, need, depth + 1)
            except PackingDetected:
                trace.append({"op": "fallback", "depth": depth, "n": len(vs)})
                return set(vs)
        top = max(dec.last(v) for v in vs)
        lo, hi = -1, top
        found_at: dict[int, list[Model]] = {}
        while hi - lo > 1:
            mid = (lo + hi) // 2
            got = copies.pack(sorted(_members(dec, 0, mid, vs)), need)
            if got is None:
                lo = mid
            else:
                hi = mid
                found_at[mid] = got
        alpha = lo
        prefix_models = found_at.get(alpha + 1) or copies.pack(
            sorted(_members(dec, 0, alpha + 1, vs)), need)
        middle = _vcut(dec, alpha + 1, vs)
        trace.append({"op": "split", "depth": depth, "k": kk, "n": len(vs), "alpha": alpha,
                      "added": len(middle), "width": node_width, "elements": _listed(middle)})
        left_vs = _members(dec, 0, alpha, vs)
        right_vs = _members(dec, alpha + 2, math.inf, vs)
        try:
            left = rec(left_vs, need, depth + 1)
        except PackingDetected:
            trace.append({"op": "fallback", "depth": depth, "n": len(left_vs)})
            left = set(left_vs)
        try:
            right = rec(right_vs, kk // 2, depth + 1)
        except PackingDetected as exc:
            if prefix_models is None:
                raise
            raise PackingDetected(list(prefix_models) + exc.models) from None
        return left | right | middle

    elements = rec(frozenset(t.vertices), k, 0)
    hit = HittingCertificate(TOPMINOR, _sorted_elements(TOPMINOR, elements), tuple(trace))
    bound = 2 * width * k * math.log2(k) if k >= 2 else 0
    report = BoundReport(k, 1, pattern.m, pattern.norm, 1, width, "pathwidth", exact, None,
                         len(hit), bound, "2*p*k*log2(k)")
    return EpOutcome(None, hit, report, tuple(trace))


def hit_weakly_topminor(t: Tournament, pattern: PatternDigraph, k: int,
                        seed: int = 0) -> EpOutcome:
    """k vertex-disjoint copies or a vertex hitting set for a pattern with a
    directed cycle, using windows of an interval decomposition that each
    hold k copies of the next strong component."""
    check_k(k)
    _require_acyclic(pattern, False)
    dec = strong_components(pattern)
    h = dec.h
    orderings = enumerate_component_orderings(dec)
    idec, width, exact = _decomposition(t)
    top = idec.max_endpoint
    trace: list[dict] = [{"op": "layout", "width": width, "exact": exact, "end": top,
                          "orderings": len(orderings)}]
    subs = [component_pattern(pattern, c) for c in dec.components]
    copies = {ci: _Copies(t, subs[ci][0], TOPMINOR, QUERY_BUDGET, trace)
              for ci in dec.nontrivial()}

    windows: dict[tuple[int, int], tuple[int, bool, list[Model]]] = {}

    def beta_of(ci: int, alpha: int) -> tuple[int, bool, list[Model]]:
        key = (ci, alpha)
        if key not in windows:
            if dec.is_trivial(ci):
                def count(b: int) -> list[Model] | None:
                    inside = sorted(_members(idec, alpha, b))
                    return [Model((v,), ()) for v in inside[:k]] if len(inside) >= k else None
            else:
                def count(b: int) -> list[Model] | None:
                    return copies[ci].pack(sorted(_members(idec, alpha, b)), k)
            full = count(top)
            if full is None:
                windows[key] = (top, False, [])
            else:
                lo, hi, best = alpha - 1, top, full
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    got = count(mid)
                    if got is None:
                        lo = mid
                    else:
                        hi, best = mid, got
                windows[key] = (hi, True, best)
        return windows[key]

    rows = []
    for pi in orderings:
        alpha = 0
        spans = []
        for ci in pi:
            beta, full, models = beta_of(ci, alpha)
            spans.append((ci, alpha, beta, full, models))
            alpha = beta
        audit_windows(t, idec, [(a, b) for _, a, b, _, _ in spans])
        rows.append((pi, spans))
        if all(sp[3] for sp in spans):
            families = [sp[4] for sp in spans]
            cert = assemble_interval_packing(t, pattern, pi, families, k, TOPMINOR, seed)
            trace.append({"op": "stitch", "order": list(pi),
                          "windows": [[a, b] for _, a, b, _, _ in spans]})
            report = BoundReport(k, h, pattern.m, pattern.norm, len(orderings), width,
                                 "pathwidth", exact, None, len(cert), k, "k")
            return EpOutcome(cert, None, report, tuple(trace))

    a_sets: dict[tuple[int, int], set[int]] = {}
    elements: set[int] = set()
    max_a = 0
    for pi, spans in rows:
        for ci, alpha, beta, full, _ in spans:
            key = (ci, alpha)
            if key not in a_sets:
                win = _members(idec, alpha, beta)
                if dec.is_trivial(ci):
                    a_sets[key] = set(win)
                elif not win:
                    a_sets[key] = set()
                else:
                    try:
                        out = hit_strongly_topminor(t.restrict(win), subs[ci][0], k + 1,
                                                    dec=idec, root=t)
                        a_sets[key] = set(out.hitting.elements)
                    except PackingDetected:
                        trace.append({"op": "fallback", "component": ci, "window": [alpha, beta]})
                        a_sets[key] = set(win)
            b_set = _vcut(idec, beta, idec.intervals)
            max_a = max(max_a, len(a_sets[key]))
            trace.append({"op": "window", "order": list(pi), "component": ci,
                          "window": [alpha, beta], "full": full,
                          "a_size": len(a_sets[key]), "b_size": len(b_set),
                          "a": _listed(a_sets[key]), "b": _listed(b_set)})
            elements |= a_sets[key] | b_set
    hit = HittingCertificate(TOPMINOR, _sorted_elements(TOPMINOR, elements), tuple(trace))
    report = BoundReport(k, h, pattern.m, pattern.norm, len(orderings), width, "pathwidth", exact,
                         None, len(hit), len(orderings) * pattern.m * (max_a + width),
                         "|Pi|*m*(maxA+p)")
    return EpOutcome(None, hit, report, tuple(trace))


# ---------------------------------------------------------------------------
# dispatcher

def check_k(k: int) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")


def erdos_posa(t: Tournament, pattern: PatternDigraph, k: int, mode: str, seed: int = 0,
               node_budget: int | None = DIRECT_BUDGET) -> EpOutcome:
    """k disjoint copies of the pattern in the host, or a certified hitting set.

    Copies are arc-disjoint immersions or vertex-disjoint topological minors
    according to ``mode``; the hitting set consists of arcs or vertices
    accordingly. A budgeted direct packing search runs first; then acyclic
    patterns go to the transitive-subtournament construction and all others
    to the window construction. The outcome is verified before it is
    returned.
    """
    check_k(k)
    check_kind(mode)
    if pattern.m == 0:
        raise ValueError("pattern must have at least one vertex")
    trace: list[dict] = []
    direct = None
    if pattern.arc_count > 0:
        try:
            direct = pack_direct(t, pattern, k, mode, default_disjointness(mode), node_budget)
            trace.append({"op": "direct-pack", "found": direct is not None})
        except BudgetExhausted:
            trace.append({"op": "direct-pack", "found": None, "budget": node_budget})
    acyclic = pattern.is_acyclic()
    if direct is not None:
        h = strong_components(pattern).h
        report = BoundReport(k, h, pattern.m, pattern.norm, 0, 0, "none", True, None,
                             len(direct), k, "k")
        outcome = EpOutcome(direct, None, report, tuple(trace))
    elif acyclic and mode == IMMERSION:
        outcome = hit_acyclic_immersion(t, pattern, k, seed, node_budget)
    elif acyclic:
        outcome = hit_acyclic_topminor(t, pattern, k, node_budget)
    elif mode == IMMERSION:
        outcome = hit_weakly_immersion(t, pattern, k, seed)
    else:
        outcome = hit_weakly_topminor(t, pattern, k, seed)
    full_trace = tuple(trace) + tuple(x for x in outcome.trace if x not in trace)
    outcome = EpOutcome(outcome.packing, outcome.hitting, outcome.report, full_trace)
    problems = verify_outcome(t, pattern, k, mode, outcome)
    if problems:
        raise AssertionError(f"outcome failed self-verification: {problems}")
    return outcome


def verify_outcome(t: Digraph, pattern: PatternDigraph, k: int, mode: str,
                   outcome: EpOutcome) -> list[str]:
    if outcome.packing is not None:
        cert = outcome.packing
        out = cert.audit(t)
        if len(cert) < k:
            out.append(f"only {len(cert)} copies, {k} requested")
        if cert.kind != mode:
            out.append(f"copies are {cert.kind} models, not {mode}")
        if mode == IMMERSION and cert.disjointness not in (ARC, VERTEX):
            out.append("unknown disjointness")
        if mode == TOPMINOR and cert.disjointness != VERTEX:
            out.append("topological-minor copies must be vertex-disjoint")
        return out
    hit = outcome.hitting
    if hit.kind != mode:
        return [f"hitting set is for {hit.kind}, not {mode}"]
    return hit.audit(t, pattern)
