"""Seeded random tournaments."""

from __future__ import annotations

import random

from .digraph import Tournament

MODELS = ("uniform", "transitive", "blocks:B", "low-cutwidth:W")


def uniform(n: int, seed: int) -> Tournament:
    """Every pair oriented by a fair coin."""
    rng = random.Random(seed)
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            arcs.append((i, j) if rng.random() < 0.5 else (j, i))
    return Tournament(range(n), arcs)


def transitive(n: int, seed: int) -> Tournament:
    """The transitive tournament along a random ordering."""
    order = list(range(n))
    random.Random(seed).shuffle(order)
    return Tournament.from_ordering(order)


def blocks(n: int, seed: int, size: int) -> Tournament:
    """Consecutive blocks of ``size`` vertices, random inside each block,
    with every arc between blocks pointing to the later block."""
    if size < 1:
        raise ValueError("block size must be positive")
    rng = random.Random(seed)
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            if i // size == j // size and rng.random() >= 0.5:
                arcs.append((j, i))
            else:
                arcs.append((i, j))
    return Tournament(range(n), arcs)


def low_cutwidth(n: int, seed: int, width: int) -> Tournament:
    """A random ordering with backward arcs planted at random while every
    gap of the ordering stays crossed by at most ``width`` of them."""
    if width < 0:
        raise ValueError("width must be non-negative")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    load = [0] * max(n - 1, 0)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(pairs)
    backward = []
    for i, j in pairs:
        # a backward arc between positions i < j crosses the gaps i..j-1
        if all(load[g] < width for g in range(i, j)):
            for g in range(i, j):
                load[g] += 1
            backward.append((order[j], order[i]))
    return Tournament.from_ordering(order, backward)


def generate(n: int, seed: int, model: str = "uniform") -> Tournament:
    """Dispatch on a model name: ``uniform``, ``transitive``, ``blocks:B``
    or ``low-cutwidth:W``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    name, _, arg = model.partition(":")
    if name in ("uniform", "transitive") and not arg:
        return uniform(n, seed) if name == "uniform" else transitive(n, seed)
    if name in ("blocks", "low-cutwidth"):
        if not arg.isdigit():
            raise ValueError(f"model {name} needs a non-negative integer parameter, e.g. {name}:3")
        return blocks(n, seed, int(arg)) if name == "blocks" else low_cutwidth(n, seed, int(arg))
    raise ValueError(f"unknown model {model!r}; expected one of {', '.join(MODELS)}")
