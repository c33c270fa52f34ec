# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; a line-for-line twin of ``_pykernels``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint32_t, uint64_t, int64_t

cdef enum:
    MAXSIDE = 16
    MAXCELLS = 256
    MAXDEG = 32

EC_BIT = 1
PUB_BIT = 2
PUC_BIT = 4

ctypedef struct Work:
    int succ[MAXCELLS * MAXDEG]
    int deg[MAXCELLS]
    int aux[MAXCELLS]
    int stack[MAXCELLS]
    int pred[MAXCELLS * MAXDEG]
    int pdeg[MAXCELLS]


cdef inline int lt(const uint32_t* P, int u, int w) nogil:
    return (P[u] >> w) & 1


cdef inline int kind_bits(const uint32_t* A, const uint32_t* B, int x, int y, int z, int t) nogil:
    cdef int bits = 0
    if not (lt(A, x, y) and lt(B, y, z)):
        return 0
    if lt(A, z, t) and lt(B, t, x):
        bits |= 1
    if lt(A, z, t) and not lt(B, t, x) and lt(A, x, t):
        bits |= 2
    if lt(B, x, t) and lt(A, t, z) and lt(B, z, x):
        bits |= 4
    return bits


cdef int rect_flags(int c00, int c10, int c11, int c01, const uint32_t* P0, const uint32_t* P1) nogil:
    cdef int c[2][2]
    cdef int bits = 0, code, fr, fc
    c[0][0] = c00; c[0][1] = c01; c[1][0] = c10; c[1][1] = c11
    for code in range(8):
        fr = code & 1
        fc = (code >> 1) & 1
        if code & 4:
            bits |= kind_bits(P1, P0, c[fr][fc], c[fr][1 ^ fc], c[1 ^ fr][1 ^ fc], c[1 ^ fr][fc])
        else:
            bits |= kind_bits(P0, P1, c[fr][fc], c[1 ^ fr][fc], c[1 ^ fr][1 ^ fc], c[fr][1 ^ fc])
    return bits


cdef int c_pattern_flags(const int* L, int n, int m, const uint32_t* P0, const uint32_t* P1, int stop) nogil:
    cdef int bits = 0, i0, i1, j0, j1
    for i0 in range(n):
        for i1 in range(i0 + 1, n):
            for j0 in range(m):
                for j1 in range(j0 + 1, m):
                    bits |= rect_flags(L[i0 * m + j0], L[i1 * m + j0], L[i1 * m + j1], L[i0 * m + j1], P0, P1)
                    if stop and (bits & stop) == stop:
                        return bits
    return bits


cdef void c_successors(Work* w, const int* L, int n, int m, const uint32_t* P0, const uint32_t* P1,
                       int maximising, uint32_t rowmask, uint32_t colmask) nogil:
    cdef int i, j, k, u, v, lu, cnt, keep, x, y, start
    for u in range(n * m):
        w.deg[u] = 0
    for i in range(n):
        if not (rowmask >> i) & 1:
            continue
        for j in range(m):
            if not (colmask >> j) & 1:
                continue
            u = i * m + j
            lu = L[u]
            start = u * MAXDEG
            cnt = 0
            for k in range(n):
                if k != i and (rowmask >> k) & 1 and lt(P0, lu, L[k * m + j]):
                    w.succ[start + cnt] = k * m + j
                    cnt += 1
            if maximising:
                keep = 0
                for x in range(cnt):
                    v = w.succ[start + x]
                    for y in range(cnt):
                        if lt(P0, L[v], L[w.succ[start + y]]):
                            break
                    else:
                        w.aux[keep] = v
                        keep += 1
                for x in range(keep):
                    w.succ[start + x] = w.aux[x]
                cnt = keep
            w.deg[u] = cnt
            for k in range(m):
                if k != j and (colmask >> k) & 1 and lt(P1, lu, L[i * m + k]):
                    w.succ[start + cnt] = i * m + k
                    cnt += 1
            if maximising:
                keep = 0
                for x in range(w.deg[u], cnt):
                    v = w.succ[start + x]
                    for y in range(w.deg[u], cnt):
                        if lt(P1, L[v], L[w.succ[start + y]]):
                            break
                    else:
                        w.aux[keep] = v
                        keep += 1
                for x in range(keep):
                    w.succ[start + w.deg[u] + x] = w.aux[x]
                cnt = w.deg[u] + keep
            w.deg[u] = cnt


cdef inline int in_sub(int u, int m, uint32_t rowmask, uint32_t colmask) nogil:
    return ((rowmask >> (u // m)) & 1) and ((colmask >> (u % m)) & 1)


cdef int c_has_cycle(Work* w, const int* L, int n, int m, const uint32_t* P0, const uint32_t* P1,
                     int maximising, uint32_t rowmask, uint32_t colmask) nogil:
    cdef int u, v, x, top = 0, removed = 0, total = 0
    c_successors(w, L, n, m, P0, P1, maximising, rowmask, colmask)
    for u in range(n * m):
        w.aux[u] = 0
    for u in range(n * m):
        if in_sub(u, m, rowmask, colmask):
            total += 1
            for x in range(w.deg[u]):
                w.aux[w.succ[u * MAXDEG + x]] += 1
    for u in range(n * m):
        if in_sub(u, m, rowmask, colmask) and w.aux[u] == 0:
            w.stack[top] = u
            top += 1
    while top:
        top -= 1
        u = w.stack[top]
        removed += 1
        for x in range(w.deg[u]):
            v = w.succ[u * MAXDEG + x]
            w.aux[v] -= 1
            if w.aux[v] == 0:
                w.stack[top] = v
                top += 1
    return removed != total


cdef int c_weakly_terminating(Work* w, const int* L, int n, int m, const uint32_t* P0, const uint32_t* P1,
                              int maximising, uint32_t rowmask, uint32_t colmask) nogil:
    cdef int u, v, x, top = 0, count = 0, total = 0
    c_successors(w, L, n, m, P0, P1, maximising, rowmask, colmask)
    for u in range(n * m):
        w.pdeg[u] = 0
        w.aux[u] = 0
    for u in range(n * m):
        if in_sub(u, m, rowmask, colmask):
            total += 1
            for x in range(w.deg[u]):
                v = w.succ[u * MAXDEG + x]
                w.pred[v * MAXDEG + w.pdeg[v]] = u
                w.pdeg[v] += 1
    for u in range(n * m):
        if in_sub(u, m, rowmask, colmask) and w.deg[u] == 0:
            w.aux[u] = 1
            w.stack[top] = u
            top += 1
    while top:
        top -= 1
        v = w.stack[top]
        count += 1
        for x in range(w.pdeg[v]):
            u = w.pred[v * MAXDEG + x]
            if not w.aux[u]:
                w.aux[u] = 1
                w.stack[top] = u
                top += 1
    return count == total


cdef int c_has_four_cycle(const int* L, int n, int m, const uint32_t* P0, const uint32_t* P1) nogil:
    cdef int i0, i1, j0, j1, a, b, c, d
    for i0 in range(n):
        for i1 in range(i0 + 1, n):
            for j0 in range(m):
                for j1 in range(j0 + 1, m):
                    a = L[i0 * m + j0]; b = L[i1 * m + j0]
                    c = L[i1 * m + j1]; d = L[i0 * m + j1]
                    if lt(P0, a, b) and lt(P1, b, c) and lt(P0, c, d) and lt(P1, d, a):
                        return 1
                    if lt(P1, a, d) and lt(P0, d, c) and lt(P1, c, b) and lt(P0, b, a):
                        return 1
    return 0


cdef int c_subgame_without_ne(Work* w, const int* L, int n, int m, const uint32_t* P0, const uint32_t* P1) nogil:
    cdef int i, j, k, u, lu, R, C, found
    for i in range(n):
        for j in range(m):
            u = i * m + j
            lu = L[u]
            w.aux[u] = 0
            w.stack[u] = 0
            for k in range(n):
                if lt(P0, lu, L[k * m + j]):
                    w.aux[u] |= 1 << k
            for k in range(m):
                if lt(P1, lu, L[i * m + k]):
                    w.stack[u] |= 1 << k
    for R in range(1, 1 << n):
        for C in range(1, 1 << m):
            found = 0
            for i in range(n):
                if not (R >> i) & 1:
                    continue
                for j in range(m):
                    if (C >> j) & 1 and not (w.aux[i * m + j] & R) and not (w.stack[i * m + j] & C):
                        found = 1
                        break
                if found:
                    break
            if not found:
                return 1
    return 0


cdef Work* new_work(int n, int m) except NULL:
    if n < 1 or m < 1 or n > MAXSIDE or m > MAXSIDE or n * m > MAXCELLS:
        raise ValueError(f"kernel shapes are limited to {MAXSIDE} strategies per player")
    cdef Work* w = <Work*> malloc(sizeof(Work))
    if w == NULL:
        raise MemoryError()
    return w


cdef inline uint32_t side_mask(long long mask, int k):
    return <uint32_t> (mask & ((1 << k) - 1))


def pattern_flags(const int[::1] labels, int n, int m, const uint32_t[::1] P0, const uint32_t[::1] P1, int stop_mask=0):
    return c_pattern_flags(&labels[0], n, m, &P0[0], &P1[0], stop_mask)


def has_cycle(const int[::1] labels, int n, int m, const uint32_t[::1] P0, const uint32_t[::1] P1,
              bint maximising=False, long long rowmask=-1, long long colmask=-1):
    cdef Work* w = new_work(n, m)
    try:
        return bool(c_has_cycle(w, &labels[0], n, m, &P0[0], &P1[0], maximising,
                                side_mask(rowmask, n), side_mask(colmask, m)))
    finally:
        free(w)


def weakly_terminating(const int[::1] labels, int n, int m, const uint32_t[::1] P0, const uint32_t[::1] P1,
                       bint maximising=False, long long rowmask=-1, long long colmask=-1):
    cdef Work* w = new_work(n, m)
    try:
        return bool(c_weakly_terminating(w, &labels[0], n, m, &P0[0], &P1[0], maximising,
                                         side_mask(rowmask, n), side_mask(colmask, m)))
    finally:
        free(w)


def has_four_cycle(const int[::1] labels, int n, int m, const uint32_t[::1] P0, const uint32_t[::1] P1):
    return bool(c_has_four_cycle(&labels[0], n, m, &P0[0], &P1[0]))


def subgame_without_ne(const int[::1] labels, int n, int m, const uint32_t[::1] P0, const uint32_t[::1] P1):
    cdef Work* w = new_work(n, m)
    try:
        return bool(c_subgame_without_ne(w, &labels[0], n, m, &P0[0], &P1[0]))
    finally:
        free(w)


def sweep_orders(const int[::1] labels, int n, int m, const uint32_t[:, ::1] orders):
    cdef Work* w = new_work(n, m)
    cdef int R = orders.shape[0], a, b, bits
    cdef const int* L = &labels[0]
    cdef uint32_t full_r = (1 << n) - 1, full_c = (1 << m) - 1
    violations = []
    candidates = []
    try:
        for a in range(R):
            for b in range(R):
                bits = c_pattern_flags(L, n, m, &orders[a, 0], &orders[b, 0], 0)
                if bits == 0 and c_has_cycle(w, L, n, m, &orders[a, 0], &orders[b, 0], 0, full_r, full_c):
                    violations.append((a, b))
                if (bits & 3) == 0 and c_has_cycle(w, L, n, m, &orders[a, 0], &orders[b, 0], 1, full_r, full_c):
                    candidates.append((a, b))
    finally:
        free(w)
    return R * R, violations, candidates


def structure_witnesses(const int[::1] labels, int n, int m, const uint32_t[:, ::1] orders):
    cdef Work* w = new_work(n, m)
    cdef int R = orders.shape[0], a, b
    cdef int cyc = 0, four = 0, empty = 0
    cdef const int* L = &labels[0]
    cdef uint32_t full_r = (1 << n) - 1, full_c = (1 << m) - 1
    try:
        for a in range(R):
            for b in range(R):
                if not cyc and c_has_cycle(w, L, n, m, &orders[a, 0], &orders[b, 0], 0, full_r, full_c):
                    cyc = 1
                if not four and c_has_four_cycle(L, n, m, &orders[a, 0], &orders[b, 0]):
                    four = 1
                if not empty and c_subgame_without_ne(w, L, n, m, &orders[a, 0], &orders[b, 0]):
                    empty = 1
                if cyc and four and empty:
                    return True, True, True
    finally:
        free(w)
    return bool(cyc), bool(four), bool(empty)


cdef int c_removable(Work* w, const int* L, int n, int m, const uint32_t* P0, const uint32_t* P1) nogil:
    """Encoded (player * MAXSIDE + strategy), or -1."""
    cdef uint32_t full_r = (1 << n) - 1, full_c = (1 << m) - 1
    cdef int s
    for s in range(n):
        if c_weakly_terminating(w, L, n, m, P0, P1, 1, full_r & ~(1u << s), full_c):
            return s
    for s in range(m):
        if c_weakly_terminating(w, L, n, m, P0, P1, 1, full_r, full_c & ~(1u << s)):
            return MAXSIDE + s
    return -1


def removable_choice(const int[::1] labels, int n, int m, const uint32_t[::1] P0, const uint32_t[::1] P1):
    cdef Work* w = new_work(n, m)
    cdef int code
    try:
        code = c_removable(w, &labels[0], n, m, &P0[0], &P1[0])
    finally:
        free(w)
    if code < 0:
        return None
    return (code // MAXSIDE, code % MAXSIDE)


def sweep_removable(const int[::1] labels, int n, int m, const uint32_t[:, ::1] orders):
    cdef Work* w = new_work(n, m)
    cdef int R = orders.shape[0], a, b
    cdef long long terminating = 0
    cdef const int* L = &labels[0]
    cdef uint32_t full_r = (1 << n) - 1, full_c = (1 << m) - 1
    failures = []
    try:
        for a in range(R):
            for b in range(R):
                if not c_weakly_terminating(w, L, n, m, &orders[a, 0], &orders[b, 0], 1, full_r, full_c):
                    continue
                terminating += 1
                if c_removable(w, L, n, m, &orders[a, 0], &orders[b, 0]) < 0:
                    failures.append((a, b))
    finally:
        free(w)
    return R * R, terminating, failures


def walk(const int64_t[::1] offsets, const int64_t[::1] targets, const unsigned char[::1] absorbing,
         int64_t state, uint64_t p, uint64_t q, const uint64_t[::1] raw):
    cdef Py_ssize_t k, used = 0, total = raw.shape[0]
    cdef uint64_t r
    cdef int64_t lo, deg
    with nogil:
        for k in range(total):
            if absorbing[state]:
                break
            used += 1
            r = raw[k]
            if r % q < p:
                continue
            lo = offsets[state]
            deg = offsets[state + 1] - lo
            state = targets[lo + <int64_t> ((r // q) % <uint64_t> deg)]
    return state, used, bool(absorbing[state])
