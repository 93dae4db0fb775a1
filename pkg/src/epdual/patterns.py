"""Built-in pattern digraphs, addressable by name."""

from __future__ import annotations

import re

from .digraph import PatternDigraph


def path2() -> PatternDigraph:
    return PatternDigraph(2, [(0, 1)], name="P2")


def transitive(m: int) -> PatternDigraph:
    return PatternDigraph(m, [(i, j) for i in range(m) for j in range(i + 1, m)], name=f"TT{m}")


def cycle(m: int) -> PatternDigraph:
    return PatternDigraph(m, [(i, (i + 1) % m) for i in range(m)], name=f"C{m}")


def digon() -> PatternDigraph:
    return PatternDigraph(2, [(0, 1), (1, 0)], name="digon")


def digon_with_tail() -> PatternDigraph:
    return PatternDigraph(3, [(0, 1), (1, 0), (1, 2)], name="digon-with-tail")


def c3_plus_source() -> PatternDigraph:
    """A directed triangle on 0, 1, 2 and a source 3 pointing at 0."""
    return PatternDigraph(4, [(0, 1), (1, 2), (2, 0), (3, 0)], name="C3-plus-source")


def c3_to_c3() -> PatternDigraph:
    """Two directed triangles joined by the single arc (0, 3)."""
    return PatternDigraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)],
                          name="C3->C3")


def independent(m: int) -> PatternDigraph:
    return PatternDigraph(m, [], name=f"E{m}")


_FIXED = {
    "P2": path2,
    "digon": digon,
    "digon-with-tail": digon_with_tail,
    "C3-plus-source": c3_plus_source,
    "C3->C3": c3_to_c3,
}

_FAMILIES = {"TT": transitive, "C": cycle, "E": independent}

#: Patterns of the standard corpus, in corpus order.
CORPUS_PATTERNS = ("P2", "TT3", "C3", "digon", "digon-with-tail", "C3-plus-source", "C3->C3")


def builtin_names() -> list[str]:
    return list(_FIXED) + ["TT<m>", "C<m>", "E<m>"]


def by_name(name: str) -> PatternDigraph:
    if name in _FIXED:
        return _FIXED[name]()
    match = re.fullmatch(r"(TT|C|E)(\d+)", name)
    if match:
        prefix, m = match.group(1), int(match.group(2))
        if prefix == "C" and m < 2:
            raise ValueError("cycles need at least 2 vertices")
        return _FAMILIES[prefix](m)
    raise KeyError(f"unknown pattern {name!r}; built-ins: {', '.join(builtin_names())}")
