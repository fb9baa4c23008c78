"""Array kernels behind words, folding and product automata.

Letters are integer codes: generator ``g`` is ``2*g`` and its inverse is
``2*g + 1``, so ``code ^ 1`` inverts a letter. A deterministic automaton is a
dense ``(n_states, 2*n_gens)`` int64 table with ``-1`` for a missing edge.

Every function here is compiled by numba unless FRAGWORDS_DISABLE_NUMBA is
set; the same source then runs as ordinary Python.
"""

import numpy as np

from ._accel import jit


@jit
def reduce_codes(codes):
    out = np.empty(codes.shape[0], np.int64)
    top = 0
    for i in range(codes.shape[0]):
        c = codes[i]
        if top > 0 and out[top - 1] == (c ^ 1):
            top -= 1
        else:
            out[top] = c
            top += 1
    return out[:top].copy()


@jit
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@jit
def _head(src, dst, occ):
    e = occ >> 1
    if occ & 1:
        return src[e]
    return dst[e]


@jit
def fold_edges(n_states, n_cols, src, gen, dst, pre_a, pre_b):
    """Stallings-style folding of an involutive automaton.

    ``src, gen, dst`` list the positive edges; each also stands for its
    inverse. Edge occurrence ``2*e`` reads edge ``e`` forwards and ``2*e+1``
    backwards. ``pre_a[k] ~ pre_b[k]`` are identifications forced before any
    folding (contractions, empty relation sides).

    Returns ``(root, table, via, events)``. ``table[r, c]`` is the target of
    class ``r`` on letter ``c`` (any member of the target class) and
    ``via[r, c]`` the occurrence that realised it. Each row of ``events`` is
    ``(kind, survivor, absorbed, a, b)``: kind 0 merges the heads of
    occurrences ``a`` and ``b`` (same letter, equivalent tails); kind 1 is
    forced pair ``a``.
    """
    parent = np.arange(n_states)
    size = np.ones(n_states, np.int64)
    table = np.full((n_states, n_cols), -1, np.int64)
    via = np.full((n_states, n_cols), -1, np.int64)
    events = np.full((n_states + 1, 5), -1, np.int64)
    n_events = 0

    for k in range(pre_a.shape[0]):
        ra = _find(parent, pre_a[k])
        rb = _find(parent, pre_b[k])
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
        events[n_events, 0] = 1
        events[n_events, 1] = ra
        events[n_events, 2] = rb
        events[n_events, 3] = k
        n_events += 1

    n_edges = src.shape[0]
    cap = 2 * n_edges + n_cols * n_states + 1
    pend_a = np.empty(cap, np.int64)
    pend_b = np.empty(cap, np.int64)
    top = 0

    for e in range(n_edges):
        for side in range(2):
            occ = 2 * e + side
            if side == 0:
                p = src[e]
                q = dst[e]
                c = 2 * gen[e]
            else:
                p = dst[e]
                q = src[e]
                c = 2 * gen[e] + 1
            r = _find(parent, p)
            t = table[r, c]
            if t == -1:
                table[r, c] = q
                via[r, c] = occ
            elif _find(parent, t) != _find(parent, q):
                pend_a[top] = via[r, c]
                pend_b[top] = occ
                top += 1

        while top > 0:
            top -= 1
            oa = pend_a[top]
            ob = pend_b[top]
            ra = _find(parent, _head(src, dst, oa))
            rb = _find(parent, _head(src, dst, ob))
            if ra == rb:
                continue
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
            events[n_events, 0] = 0
            events[n_events, 1] = ra
            events[n_events, 2] = rb
            events[n_events, 3] = oa
            events[n_events, 4] = ob
            n_events += 1
            for c in range(n_cols):
                t = table[rb, c]
                if t == -1:
                    continue
                s = table[ra, c]
                if s == -1:
                    table[ra, c] = t
                    via[ra, c] = via[rb, c]
                elif _find(parent, s) != _find(parent, t):
                    pend_a[top] = via[ra, c]
                    pend_b[top] = via[rb, c]
                    top += 1

    root = np.empty(n_states, np.int64)
    for x in range(n_states):
        root[x] = _find(parent, x)
    return root, table, via, events[:n_events].copy()


@jit
def run_word(table, start, codes):
    s = start
    n_cols = table.shape[1]
    for i in range(codes.shape[0]):
        c = codes[i]
        if c >= n_cols:
            return -1
        s = table[s, c]
        if s < 0:
            return -1
    return s


@jit
def run_many(table, start, words, lengths):
    """End state of each padded row of ``words`` read from ``start`` (-1 if stuck)."""
    n_cols = table.shape[1]
    out = np.empty(words.shape[0], np.int64)
    for w in range(words.shape[0]):
        s = start
        for i in range(lengths[w]):
            c = words[w, i]
            if c >= n_cols:
                s = -1
                break
            s = table[s, c]
            if s < 0:
                break
        out[w] = s
    return out


@jit
def product_bfs(tables, sizes, starts, hat_gens):
    """Reachable part of a synchronized product of deterministic automata.

    ``tables`` is ``(k, max_states, n_cols)``, padded with -1. Component ``j``
    stays put on generator ``hat_gens[j]`` (its added loops); pass -1 for no
    loops. Returns ``(tuples, src, gen, dst)`` where state ``m`` is the tuple
    ``tuples[m]`` and edges are positive letters only.
    """
    k = tables.shape[0]
    n_cols = tables.shape[2]
    mult = np.ones(k, np.int64)
    for j in range(k - 2, -1, -1):
        mult[j] = mult[j + 1] * sizes[j + 1]

    key0 = 0
    for j in range(k):
        key0 += starts[j] * mult[j]
    index = {key0: 0}

    cap = 64
    tuples = np.empty((cap, k), np.int64)
    tuples[0] = starts
    n = 1
    ecap = 64
    esrc = np.empty(ecap, np.int64)
    egen = np.empty(ecap, np.int64)
    edst = np.empty(ecap, np.int64)
    ne = 0
    nxt = np.empty(k, np.int64)

    head = 0
    while head < n:
        for c in range(n_cols):
            g = c >> 1
            ok = True
            for j in range(k):
                if hat_gens[j] == g:
                    nxt[j] = tuples[head, j]
                else:
                    t = tables[j, tuples[head, j], c]
                    if t < 0:
                        ok = False
                        break
                    nxt[j] = t
            if not ok:
                continue
            key = 0
            for j in range(k):
                key += nxt[j] * mult[j]
            if key in index:
                m = index[key]
            else:
                m = n
                index[key] = m
                if n == cap:
                    grown = np.empty((2 * cap, k), np.int64)
                    grown[:cap] = tuples
                    tuples = grown
                    cap *= 2
                tuples[n] = nxt
                n += 1
            if c & 1 == 0:
                if ne == ecap:
                    s2 = np.empty(2 * ecap, np.int64)
                    g2 = np.empty(2 * ecap, np.int64)
                    d2 = np.empty(2 * ecap, np.int64)
                    s2[:ecap] = esrc
                    g2[:ecap] = egen
                    d2[:ecap] = edst
                    esrc = s2
                    egen = g2
                    edst = d2
                    ecap *= 2
                esrc[ne] = head
                egen[ne] = g
                edst[ne] = m
                ne += 1
        head += 1
    return tuples[:n].copy(), esrc[:ne].copy(), egen[:ne].copy(), edst[:ne].copy()
