"""Compiled inner loops for the project-and-lift completion (needs numba).

Everything works on int64 rows. Reducer search goes through a trie of sign
patterns; pair selection uses support bitmasks, 62 columns per word.
"""
import numpy as np
from numba import njit

WORD = 62
_PAIR_BITS = 40


@njit(cache=True)
def _masks(v, c, sp, sn):
    sp[:] = 0
    sn[:] = 0
    for col in range(c):
        x = v[col]
        if x > 0:
            sp[col // WORD] |= np.int64(1) << (col % WORD)
        elif x < 0:
            sn[col // WORD] |= np.int64(1) << (col % WORD)


# Support trie: one level per compared column, branching on the sign of the
# entry (0 zero, 1 positive, 2 negative). Rows with the same sign pattern
# share a leaf and are chained through ``nxt``. A row can only lie below s
# if its pattern is reachable by taking, at each column, the zero branch or
# the branch of s's own sign.


@njit(cache=True)
def _trie_new(cap):
    kids = np.full((cap, 3), -1, np.int32)
    head = np.full(cap, -1, np.int32)
    return kids, head


@njit(cache=True)
def _trie_grow(kids, head, need):
    cap = kids.shape[0]
    if need <= cap:
        return kids, head
    while cap < need:
        cap *= 2
    k2 = np.full((cap, 3), -1, np.int32)
    k2[:kids.shape[0]] = kids
    h2 = np.full(cap, -1, np.int32)
    h2[:head.shape[0]] = head
    return k2, h2


@njit(cache=True)
def _trie_insert(kids, head, nxt, nodes, row, v, c):
    node = 0
    for col in range(c):
        x = v[col]
        b = 0 if x == 0 else (1 if x > 0 else 2)
        ch = kids[node, b]
        if ch < 0:
            ch = nodes
            nodes += 1
            kids[node, b] = ch
        node = ch
    nxt[row] = head[node]
    head[node] = row
    return nodes


@njit(cache=True)
def _trie_find(kids, head, nxt, G, s, c, stack, depth):
    """Some row r with G[r] ⊑ s on columns [0, c), else -1."""
    top = 1
    stack[0] = 0
    depth[0] = 0
    while top > 0:
        top -= 1
        node = stack[top]
        dep = depth[top]
        if dep == c:
            r = head[node]
            while r >= 0:
                fits = True
                for col in range(c):
                    if abs(G[r, col]) > abs(s[col]):
                        fits = False
                        break
                if fits:
                    return r
                r = nxt[r]
            continue
        x = s[dep]
        ch = kids[node, 0]
        if ch >= 0:
            stack[top] = ch
            depth[top] = dep + 1
            top += 1
        if x != 0:
            ch = kids[node, 1 if x > 0 else 2]
            if ch >= 0:
                stack[top] = ch
                depth[top] = dep + 1
                top += 1
    return -1


@njit(cache=True)
def _reduce(s, kids, head, nxt, G, c, limit, stack, depth):
    """Reduce s in place; returns 0 (zero on [0, c)), 1 (nonzero) or 2 (overflow)."""
    d = s.shape[0]
    while True:
        nz = False
        for col in range(c):
            if s[col] != 0:
                nz = True
                break
        if not nz:
            return 0
        r = _trie_find(kids, head, nxt, G, s, c, stack, depth)
        if r < 0:
            return 1
        t = np.int64(-1)
        for col in range(c):
            g = G[r, col]
            if g != 0:
                q = abs(s[col]) // abs(g)
                if t < 0 or q < t:
                    t = q
        for col in range(d):
            s[col] -= t * G[r, col]
            if abs(s[col]) >= limit:
                return 2


@njit(cache=True)
def _heap_push(heap, n, key):
    heap[n] = key
    i = n
    while i > 0:
        p = (i - 1) // 2
        if heap[p] <= heap[i]:
            break
        heap[p], heap[i] = heap[i], heap[p]
        i = p


@njit(cache=True)
def _heap_pop(heap, n):
    top = heap[0]
    n -= 1
    heap[0] = heap[n]
    i = 0
    while True:
        a = 2 * i + 1
        if a >= n:
            break
        b = a + 1
        if b < n and heap[b] < heap[a]:
            a = b
        if heap[i] <= heap[a]:
            break
        heap[i], heap[a] = heap[a], heap[i]
        i = a
    return top


@njit(cache=True)
def lift_step(G0, j, limit):
    """Complete G0 with respect to ⊑ on columns [0, j]; returns (rows, status).

    Pairs are sign compatible on [0, j) and of opposite sign at j; they are
    processed by increasing 1-norm on [0, j], first in first out on ties.
    status 2 means an entry reached ``limit``.
    """
    n0, d = G0.shape
    c = j + 1
    W = (c + WORD - 1) // WORD
    jw, jb = j // WORD, np.int64(1) << (j % WORD)
    cap = max(64, 2 * n0)
    G = np.empty((cap, d), np.int64)
    GP = np.empty((cap, W), np.int64)
    GN = np.empty((cap, W), np.int64)
    heap = np.empty(1024, np.int64)
    PI = np.empty(1024, np.int32)
    PK = np.empty(1024, np.int32)
    hn = 0
    npairs = 0
    m = 0
    s = np.empty(d, np.int64)
    sp = np.empty(W, np.int64)
    sn = np.empty(W, np.int64)
    low = (np.int64(1) << _PAIR_BITS) - 1
    kids, head = _trie_new(max(1024, n0 + c + 1))
    chain = np.empty(cap, np.int32)
    nodes = 1
    stack = np.empty(2 * c + 2, np.int64)
    depth = np.empty(2 * c + 2, np.int64)
    nxt = 0
    while True:
        if nxt < n0:
            s[:] = G0[nxt]
            nxt += 1
        elif hn > 0:
            key = _heap_pop(heap, hn)
            hn -= 1
            p = key & low
            a, b = PI[p], PK[p]
            for col in range(d):
                s[col] = G[a, col] + G[b, col]
                if abs(s[col]) >= limit:
                    return G[:m].copy(), 2
            st = _reduce(s, kids, head, chain, G, c, limit, stack, depth)
            if st == 2:
                return G[:m].copy(), 2
            if st == 0:
                continue
        else:
            break
        _masks(s, c, sp, sn)
        if m == cap:
            cap *= 2
            G2 = np.empty((cap, d), np.int64)
            G2[:m] = G[:m]
            G = G2
            P2 = np.empty((cap, W), np.int64)
            P2[:m] = GP[:m]
            GP = P2
            N2 = np.empty((cap, W), np.int64)
            N2[:m] = GN[:m]
            GN = N2
            C2 = np.empty(cap, np.int32)
            C2[:m] = chain[:m]
            chain = C2
        G[m] = s
        GP[m] = sp
        GN[m] = sn
        kids, head = _trie_grow(kids, head, nodes + c)
        nodes = _trie_insert(kids, head, chain, nodes, m, s, c)
        if s[j] != 0:
            for k in range(m):
                if G[k, j] * s[j] >= 0:
                    continue
                clash = False
                for w in range(W):
                    x = (GP[k, w] & sn[w]) | (GN[k, w] & sp[w])
                    if w == jw:
                        x &= ~jb
                    if x:
                        clash = True
                        break
                if clash:
                    continue
                nrm = 0
                for col in range(c):
                    nrm += abs(G[k, col] + s[col])
                if npairs == PI.shape[0]:
                    PI = np.concatenate((PI, np.empty_like(PI)))
                    PK = np.concatenate((PK, np.empty_like(PK)))
                if hn == heap.shape[0]:
                    heap = np.concatenate((heap, np.empty_like(heap)))
                PI[npairs] = k
                PK[npairs] = m
                _heap_push(heap, hn, (np.int64(nrm) << _PAIR_BITS) | npairs)
                hn += 1
                npairs += 1
        m += 1
    return G[:m].copy(), 0


@njit(cache=True)
def minimal_mask(X, c):
    """Rows of X (sorted by 1-norm on [0, c), distinct there) that are ⊑-minimal."""
    n = X.shape[0]
    keep = np.zeros(n, np.bool_)
    kids, head = _trie_new(1024)
    chain = np.empty(n, np.int32)
    stack = np.empty(2 * c + 2, np.int64)
    depth = np.empty(2 * c + 2, np.int64)
    nodes = 1
    for i in range(n):
        # a strict dominator is smaller in norm, so it is already kept
        if _trie_find(kids, head, chain, X, X[i], c, stack, depth) < 0:
            keep[i] = True
            kids, head = _trie_grow(kids, head, nodes + c)
            nodes = _trie_insert(kids, head, chain, nodes, i, X[i], c)
    return keep
