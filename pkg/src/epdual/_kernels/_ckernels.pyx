# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; drop-in replacements for ``_pykernels``.

Bitmask arguments must fit in 63 bits; the dispatcher in ``__init__``
routes larger inputs to the pure-Python versions.
"""

from libc.stdlib cimport malloc, free

from ._pykernels import NodeLimit

ctypedef unsigned long long u64


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popc(u64 x) nogil:
    return __builtin_popcountll(x)


def cutwidth_dp(int n, list out_masks):
    cdef u64 full = (<u64>1 << n) - 1
    cdef u64 size = <u64>1 << n
    cdef u64 outm[64]
    cdef u64 inm[64]
    cdef int u, v, width, c, b
    cdef u64 s, low, prev, rest, t
    for u in range(n):
        outm[u] = <u64>out_masks[u]
        inm[u] = 0
    for u in range(n):
        for v in range(n):
            if (outm[u] >> v) & 1:
                inm[v] |= (<u64>1) << u
    cdef unsigned short *cut = <unsigned short *>malloc(size * sizeof(unsigned short))
    cdef unsigned short *best = <unsigned short *>malloc(size * sizeof(unsigned short))
    if cut == NULL or best == NULL:
        free(cut)
        free(best)
        raise MemoryError()
    order = []
    try:
        with nogil:
            cut[0] = 0
            s = 1
            while s < size:
                low = s & (~s + 1)
                v = __builtin_ctzll(low)
                prev = s ^ low
                cut[s] = <unsigned short>(cut[prev] - popc(outm[v] & prev)
                                          + popc(inm[v] & ~s & full))
                s += 1
            best[full] = 0
            s = full
            while s > 0:
                s -= 1
                b = 1 << 30
                rest = full & ~s
                while rest:
                    low = rest & (~rest + 1)
                    rest ^= low
                    t = s | low
                    c = cut[t] if cut[t] > best[t] else best[t]
                    if c < b:
                        b = c
                best[s] = <unsigned short>b
        width = best[0]
        s = 0
        while s != full:
            for v in range(n):
                low = (<u64>1) << v
                if s & low:
                    continue
                t = s | low
                if cut[t] <= width and best[t] <= width:
                    order.append(v)
                    s = t
                    break
    finally:
        free(cut)
        free(best)
    return order, width


def cut_sizes(list order, list out_masks):
    cdef int n = len(order)
    cdef int i, u, pu, pv
    cdef u64 m, low
    cdef int pos[64]
    cdef int diff[66]
    for i in range(n):
        pos[<int>order[i]] = i + 1
    for i in range(n + 2):
        diff[i] = 0
    for u in range(n):
        m = <u64>out_masks[u]
        pu = pos[u]
        while m:
            low = m & (~m + 1)
            m ^= low
            pv = pos[__builtin_ctzll(low)]
            if pu > pv:
                diff[pv] += 1
                diff[pu] -= 1
    sizes = [0] * (n + 1)
    cdef int run = 0
    for i in range(n + 1):
        run += diff[i]
        sizes[i] = run
    return sizes


cdef int _pw_solve(u64 closed, u64 opened, u64 full, u64 *inm, int n,
                   signed char *memo) nogil:
    # memo indexed by base-3 state code; -1 means unknown
    cdef long code = 0
    cdef long p = 1
    cdef int v
    for v in range(n):
        if (closed >> v) & 1:
            code += 2 * p
        elif (opened >> v) & 1:
            code += p
        p *= 3
    if memo[code] >= 0:
        return memo[code]
    if closed == full:
        memo[code] = 0
        return 0
    cdef int best = n + 1
    cdef int cnt = popc(opened)
    cdef int r, c
    cdef u64 m = opened
    cdef u64 low, fr
    while m:
        low = m & (~m + 1)
        m ^= low
        r = _pw_solve(closed | low, opened ^ low, full, inm, n, memo)
        if r < best:
            best = r
    fr = full & ~(closed | opened)
    while fr:
        low = fr & (~fr + 1)
        fr ^= low
        v = __builtin_ctzll(low)
        if closed & ~inm[v]:
            continue
        r = _pw_solve(closed, opened | low, full, inm, n, memo)
        c = cnt + 1 if cnt + 1 > r else r
        if c < best:
            best = c
    memo[code] = <signed char>best
    return best


def pathwidth_dp(int n, list out_masks):
    if n > 18:
        raise ValueError("pathwidth_dp supports at most 18 vertices")
    cdef u64 full = (<u64>1 << n) - 1
    cdef u64 inm[64]
    cdef u64 outm
    cdef int u, v, width, cnt
    cdef long states = 1
    for u in range(n):
        states *= 3
        inm[u] = 0
    for u in range(n):
        outm = <u64>out_masks[u]
        for v in range(n):
            if (outm >> v) & 1:
                inm[v] |= (<u64>1) << u
    cdef signed char *memo = <signed char *>malloc(states)
    if memo == NULL:
        raise MemoryError()
    cdef long i
    cdef u64 closed = 0, opened = 0, m, low, fr
    cdef bint moved
    events = []
    try:
        for i in range(states):
            memo[i] = -1
        with nogil:
            width = _pw_solve(0, 0, full, inm, n, memo)
        while closed != full:
            cnt = popc(opened)
            moved = False
            m = opened
            while m:
                low = m & (~m + 1)
                m ^= low
                if _pw_solve(closed | low, opened ^ low, full, inm, n, memo) <= width:
                    events.append((__builtin_ctzll(low), False))
                    closed |= low
                    opened ^= low
                    moved = True
                    break
            if moved:
                continue
            fr = full & ~(closed | opened)
            while fr:
                low = fr & (~fr + 1)
                fr ^= low
                v = __builtin_ctzll(low)
                if closed & ~inm[v]:
                    continue
                if cnt + 1 <= width and _pw_solve(closed, opened | low, full, inm, n, memo) <= width:
                    events.append((v, True))
                    opened |= low
                    break
    finally:
        free(memo)
    return width, events


cdef class _Packer:
    cdef u64 *masks
    cdef int *start
    cdef int *count
    cdef int nmasks
    cdef int minsize
    cdef long nodes
    cdef long limit
    cdef u64 *chosen
    cdef int nchosen

    def __dealloc__(self):
        free(self.masks)
        free(self.start)
        free(self.count)
        free(self.chosen)

    cdef int search(self, u64 univ, int need):
        # 1 found, 0 not found, -1 node limit hit
        cdef u64 low, m
        cdef int j, bit, r
        if need == 0:
            return 1
        while univ:
            self.nodes += 1
            if self.limit >= 0 and self.nodes > self.limit:
                return -1
            if popc(univ) < need * self.minsize:
                return 0
            low = univ & (~univ + 1)
            bit = __builtin_ctzll(low)
            for j in range(self.start[bit], self.start[bit] + self.count[bit]):
                m = self.masks[j]
                if m & univ == m:
                    self.chosen[self.nchosen] = m
                    self.nchosen += 1
                    r = self.search(univ & ~m, need - 1)
                    if r != 0:
                        return r
                    self.nchosen -= 1
            univ ^= low
        return 0


def pack_disjoint_masks(list masks, int k, universe, long node_limit=-1):
    if k <= 0:
        return []
    cdef u64 univ = <u64>universe
    kept = sorted({int(m) for m in masks if m and (m & universe) == m},
                  key=lambda x: ((x & -x).bit_length(), x))
    if not kept:
        return None
    cdef _Packer p = _Packer()
    cdef int nm = len(kept)
    cdef int i, bit
    p.masks = <u64 *>malloc(nm * sizeof(u64))
    p.start = <int *>malloc(64 * sizeof(int))
    p.count = <int *>malloc(64 * sizeof(int))
    p.chosen = <u64 *>malloc((k + 1) * sizeof(u64))
    if p.masks == NULL or p.start == NULL or p.count == NULL or p.chosen == NULL:
        raise MemoryError()
    for i in range(64):
        p.start[i] = 0
        p.count[i] = 0
    p.minsize = 64
    for i in range(nm):
        p.masks[i] = <u64>kept[i]
        bit = __builtin_ctzll(p.masks[i])
        if p.count[bit] == 0:
            p.start[bit] = i
        p.count[bit] += 1
        if popc(p.masks[i]) < p.minsize:
            p.minsize = popc(p.masks[i])
    p.nmasks = nm
    p.nodes = 0
    p.limit = node_limit
    p.nchosen = 0
    cdef int r = p.search(univ, k)
    if r < 0:
        raise NodeLimit(p.nodes)
    if r == 0:
        return None
    return [int(p.chosen[i]) for i in range(p.nchosen)]
