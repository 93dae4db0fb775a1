"""Pure-Python kernels. Same signatures as the compiled ``_ckernels``.

All graphs arrive as dense local indices 0..n-1 with ``out_masks[v]`` the
bitmask of out-neighbours of ``v``.
"""

from __future__ import annotations


class NodeLimit(Exception):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def cutwidth_dp(n: int, out_masks: list[int]) -> tuple[list[int], int]:
    """Exact cutwidth over placed-prefix sets.

    ``cut[S]`` counts arcs from unplaced vertices into the placed set ``S``;
    ``best[S]`` is the least achievable maximum cut over all ways to finish
    an ordering whose prefix is ``S``. The ordering returned is the
    lexicographically smallest optimal one.
    """
    full = (1 << n) - 1
    in_masks = [0] * n
    for u in range(n):
        m = out_masks[u]
        for v in range(n):
            if m >> v & 1:
                in_masks[v] |= 1 << u
    size = 1 << n
    cut = [0] * size
    for s in range(1, size):
        low = s & -s
        v = low.bit_length() - 1
        prev = s ^ low
        cut[s] = (cut[prev] - _popcount(out_masks[v] & prev)
                  + _popcount(in_masks[v] & ~s & full))
    best = [0] * size
    for s in range(full - 1, -1, -1):
        b = 1 << 30
        rest = full & ~s
        while rest:
            low = rest & -rest
            rest ^= low
            t = s | low
            c = cut[t] if cut[t] > best[t] else best[t]
            if c < b:
                b = c
        best[s] = b
    width = best[0]
    order = []
    s = 0
    while s != full:
        for v in range(n):
            bit = 1 << v
            if s & bit:
                continue
            t = s | bit
            if cut[t] <= width and best[t] <= width:
                order.append(v)
                s = t
                break
    return order, width


def cut_sizes(order: list[int], out_masks: list[int]) -> list[int]:
    """Sizes of cut[0..n] for an ordering given as local vertex indices."""
    n = len(order)
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i + 1
    diff = [0] * (n + 2)
    for u in range(n):
        m = out_masks[u]
        pu = pos[u]
        while m:
            low = m & -m
            m ^= low
            pv = pos[low.bit_length() - 1]
            if pu > pv:
                diff[pv] += 1
                diff[pu] -= 1
    sizes = [0] * (n + 1)
    run = 0
    for a in range(n + 1):
        run += diff[a]
        sizes[a] = run
    return sizes


def pathwidth_dp(n: int, out_masks: list[int]) -> tuple[int, list[tuple[int, bool]]]:
    """Exact minimum width over all endpoint interleavings.

    A state is (closed set, open set). Opening ``v`` is allowed when every
    closed vertex has an arc into ``v``; its cost is the new open count.
    Returns the width and an optimal event sequence (vertex, opens?).
    """
    full = (1 << n) - 1
    in_masks = [0] * n
    for u in range(n):
        m = out_masks[u]
        for v in range(n):
            if m >> v & 1:
                in_masks[v] |= 1 << u
    memo: dict[tuple[int, int], int] = {}
    inf = n + 1

    def solve(closed: int, opened: int) -> int:
        if closed == full:
            return 0
        key = (closed, opened)
        got = memo.get(key)
        if got is not None:
            return got
        best = inf
        cnt = _popcount(opened)
        m = opened
        while m:
            low = m & -m
            m ^= low
            r = solve(closed | low, opened ^ low)
            if r < best:
                best = r
        free = full & ~(closed | opened)
        while free:
            low = free & -free
            free ^= low
            v = low.bit_length() - 1
            if closed & ~in_masks[v]:
                continue
            r = solve(closed, opened | low)
            c = cnt + 1 if cnt + 1 > r else r
            if c < best:
                best = c
        memo[key] = best
        return best

    width = solve(0, 0)
    events: list[tuple[int, bool]] = []
    closed = opened = 0
    while closed != full:
        cnt = _popcount(opened)
        moved = False
        m = opened
        while m:
            low = m & -m
            m ^= low
            if solve(closed | low, opened ^ low) <= width:
                events.append((low.bit_length() - 1, False))
                closed |= low
                opened ^= low
                moved = True
                break
        if moved:
            continue
        free = full & ~(closed | opened)
        while free:
            low = free & -free
            free ^= low
            v = low.bit_length() - 1
            if closed & ~in_masks[v]:
                continue
            if cnt + 1 <= width and solve(closed, opened | low) <= width:
                events.append((v, True))
                opened |= low
                break
    return width, events


def pack_disjoint_masks(masks: list[int], k: int, universe: int,
                        node_limit: int = -1) -> list[int] | None:
    """Choose ``k`` pairwise disjoint masks inside ``universe``.

    Branches on the lowest remaining element: either some chosen mask
    covers it, or it is discarded. Raises NodeLimit when more than
    ``node_limit`` branch nodes are expanded (negative means unlimited).
    """
    if k <= 0:
        return []
    masks = sorted({m for m in masks if m and m & universe == m},
                   key=lambda x: ((x & -x).bit_length(), x))
    if not masks:
        return None
    minsize = min(_popcount(m) for m in masks)
    by_low: dict[int, list[int]] = {}
    for m in masks:
        by_low.setdefault(m & -m, []).append(m)
    nodes = [0]
    chosen: list[int] = []

    def search(univ: int, need: int) -> bool:
        if need == 0:
            return True
        while univ:
            nodes[0] += 1
            if node_limit >= 0 and nodes[0] > node_limit:
                raise NodeLimit(nodes[0])
            if _popcount(univ) < need * minsize:
                return False
            low = univ & -univ
            for m in by_low.get(low, ()):
                if m & univ == m:
                    chosen.append(m)
                    if search(univ & ~m, need - 1):
                        return True
                    chosen.pop()
            univ ^= low
        return False

    if search(universe, k):
        return list(chosen)
    return None
