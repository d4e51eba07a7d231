# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bit-identical twins of ``_core_py``.

Every loop mirrors the pure implementation event for event (pool updates,
stream advances, heap pushes) so both backends return identical arrays.
Heaps pop the unique minimum of a total order, so pop sequences match
``heapq`` regardless of internal layout; lifetimes use libm's ``log`` like
``math.log`` does.  When editing, change ``_core_py`` first and
transliterate.
"""
import numpy as np

from libc.math cimport INFINITY, log
from libc.stdint cimport int64_t, uint8_t, uint32_t, uint64_t

POLICY_FIFO = 0
POLICY_LIFO = 1
POLICY_RANDOM = 2
POLICY_MAX_PEEL = 3
POLICY_ROUND_ROBIN = 4

IOLD_OFF = 0
IOLD_ALL_COPIES = 1
IOLD_SINGLE_COPY = 2

cdef uint64_t GOLDEN = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t U64MAX = <uint64_t>0xFFFFFFFFFFFFFFFF
cdef object _PYMASK = (1 << 64) - 1


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _derive(uint64_t seed, uint64_t tag) nogil:
    return _mix64(seed + (tag + <uint64_t>1) * GOLDEN)


cdef inline uint64_t _next_u64(uint64_t* state) nogil:
    state[0] = state[0] + GOLDEN
    return _mix64(state[0])


cdef inline uint64_t _next_below(uint64_t* state, uint64_t bound) nogil:
    return ((_next_u64(state) >> 32) * bound) >> 32


def sample_uniform(seed, count, bound):
    cdef Py_ssize_t n = count
    out_np = np.empty(n, dtype=np.uint32)
    cdef uint32_t[::1] out = out_np
    cdef uint64_t s = <uint64_t>(seed & _PYMASK)
    cdef uint64_t b = <uint64_t>bound
    cdef uint64_t z
    cdef Py_ssize_t i
    for i in range(n):
        z = _mix64(s + (<uint64_t>(i + 1)) * GOLDEN)
        out[i] = <uint32_t>(((z >> 32) * b) >> 32)
    return out_np


# ---------------------------------------------------------------------------
# int64 min-heap and (uint64, int64) lexicographic min-heap
# ---------------------------------------------------------------------------

cdef inline void _hpush(int64_t* h, Py_ssize_t* size, int64_t val) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t p
    cdef int64_t tmp
    h[i] = val
    size[0] = i + 1
    while i > 0:
        p = (i - 1) >> 1
        if h[p] <= h[i]:
            break
        tmp = h[p]; h[p] = h[i]; h[i] = tmp
        i = p


cdef inline int64_t _hpop(int64_t* h, Py_ssize_t* size) nogil:
    cdef int64_t top = h[0]
    cdef Py_ssize_t last = size[0] - 1
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t c
    cdef int64_t tmp
    size[0] = last
    h[0] = h[last]
    while True:
        c = 2 * i + 1
        if c >= last:
            break
        if c + 1 < last and h[c + 1] < h[c]:
            c += 1
        if h[i] <= h[c]:
            break
        tmp = h[i]; h[i] = h[c]; h[c] = tmp
        i = c
    return top


cdef inline bint _pair_lt(uint64_t ka, int64_t ia, uint64_t kb, int64_t ib) nogil:
    return ka < kb or (ka == kb and ia < ib)


cdef inline void _hpush2(uint64_t* hk, int64_t* hi, Py_ssize_t* size,
                         uint64_t key, int64_t idx) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t p
    cdef uint64_t tk
    cdef int64_t ti
    hk[i] = key; hi[i] = idx
    size[0] = i + 1
    while i > 0:
        p = (i - 1) >> 1
        if not _pair_lt(hk[i], hi[i], hk[p], hi[p]):
            break
        tk = hk[p]; hk[p] = hk[i]; hk[i] = tk
        ti = hi[p]; hi[p] = hi[i]; hi[i] = ti
        i = p


cdef inline int64_t _hpop2(uint64_t* hk, int64_t* hi, Py_ssize_t* size) nogil:
    cdef int64_t top = hi[0]
    cdef Py_ssize_t last = size[0] - 1
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t c
    cdef uint64_t tk
    cdef int64_t ti
    size[0] = last
    hk[0] = hk[last]; hi[0] = hi[last]
    while True:
        c = 2 * i + 1
        if c >= last:
            break
        if c + 1 < last and _pair_lt(hk[c + 1], hi[c + 1], hk[c], hi[c]):
            c += 1
        if not _pair_lt(hk[c], hi[c], hk[i], hi[i]):
            break
        tk = hk[i]; hk[i] = hk[c]; hk[c] = tk
        ti = hi[i]; hi[i] = hi[c]; hi[c] = ti
        i = c
    return top


# ---------------------------------------------------------------------------
# peeling
# ---------------------------------------------------------------------------

cdef void _build_adjacency(Py_ssize_t n, Py_ssize_t k, const uint32_t[::1] inc,
                           int64_t[::1] indptr, int64_t[::1] adj,
                           int64_t[::1] cursor) nogil:
    cdef Py_ssize_t m = inc.shape[0] // k if k > 0 else 0
    cdef Py_ssize_t e, j
    cdef Py_ssize_t v
    for v in range(n + 1):
        indptr[v] = 0
    for j in range(inc.shape[0]):
        indptr[<Py_ssize_t>inc[j] + 1] += 1
    for v in range(n):
        indptr[v + 1] += indptr[v]
    for v in range(n):
        cursor[v] = indptr[v]
    for e in range(m):
        for j in range(e * k, e * k + k):
            v = <Py_ssize_t>inc[j]
            adj[cursor[v]] = e
            cursor[v] += 1


def peel_kernel(n, k, inc, seed, randomize):
    inc_np = np.ascontiguousarray(inc, dtype=np.uint32)
    cdef const uint32_t[::1] incv = inc_np
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t m = incv.shape[0] // kk
    cdef bint rnd = bool(randomize)

    deg_np = np.zeros(nn, dtype=np.int64)
    indptr_np = np.zeros(nn + 1, dtype=np.int64)
    adj_np = np.zeros(max(incv.shape[0], 1), dtype=np.int64)
    cursor_np = np.zeros(nn, dtype=np.int64)
    alive_np = np.ones(max(m, 1), dtype=np.uint8)
    orient_np = np.full(m, -1, dtype=np.int64)
    order_np = np.empty(m, dtype=np.int64)

    cdef int64_t[::1] deg = deg_np
    cdef int64_t[::1] indptr = indptr_np
    cdef int64_t[::1] adj = adj_np
    cdef int64_t[::1] cursor = cursor_np
    cdef uint8_t[::1] alive = alive_np
    cdef int64_t[::1] orient = orient_np
    cdef int64_t[::1] order = order_np

    cdef Py_ssize_t j, t, i2
    cdef Py_ssize_t u, w, e
    cdef int64_t d
    cdef Py_ssize_t npeeled = 0
    cdef uint64_t state = <uint64_t>(seed & _PYMASK)
    cdef int64_t[::1] heap = None
    cdef Py_ssize_t hsize = 0

    for j in range(incv.shape[0]):
        deg[<Py_ssize_t>incv[j]] += 1
    _build_adjacency(nn, kk, incv, indptr, adj, cursor)

    pool_np = np.empty(nn, dtype=np.int64)
    pos_np = np.full(nn, -1, dtype=np.int64)
    cdef int64_t[::1] pool = pool_np
    cdef int64_t[::1] pos = pos_np
    cdef Py_ssize_t psize = 0
    cdef int64_t last

    if rnd:
        for u in range(nn):
            if deg[u] == 1:
                pos[u] = psize
                pool[psize] = u
                psize += 1
        while psize > 0:
            i2 = <Py_ssize_t>_next_below(&state, <uint64_t>psize)
            u = <Py_ssize_t>pool[i2]
            last = pool[psize - 1]
            pool[i2] = last
            pos[<Py_ssize_t>last] = i2
            psize -= 1
            pos[u] = -1
            e = -1
            for t in range(indptr[u], indptr[u + 1]):
                if alive[<Py_ssize_t>adj[t]]:
                    e = <Py_ssize_t>adj[t]
                    break
            orient[e] = u
            order[npeeled] = e
            npeeled += 1
            alive[e] = 0
            for j in range(e * kk, e * kk + kk):
                w = <Py_ssize_t>incv[j]
                d = deg[w] - 1
                deg[w] = d
                if d == 1:
                    pos[w] = psize
                    pool[psize] = w
                    psize += 1
                elif d == 0 and pos[w] >= 0:
                    i2 = <Py_ssize_t>pos[w]
                    last = pool[psize - 1]
                    pool[i2] = last
                    pos[<Py_ssize_t>last] = i2
                    psize -= 1
                    pos[w] = -1
    else:
        # lowest-index selection via a lazy min-heap; stale entries (degree
        # no longer 1) are discarded at pop time
        heap_np = np.empty(max(nn, 1), dtype=np.int64)
        heap = heap_np
        hsize = 0
        for u in range(nn):
            if deg[u] == 1:
                _hpush(&heap[0], &hsize, <int64_t>u)
        while hsize > 0:
            u = <Py_ssize_t>_hpop(&heap[0], &hsize)
            if deg[u] != 1:
                continue
            e = -1
            for t in range(indptr[u], indptr[u + 1]):
                if alive[<Py_ssize_t>adj[t]]:
                    e = <Py_ssize_t>adj[t]
                    break
            orient[e] = u
            order[npeeled] = e
            npeeled += 1
            alive[e] = 0
            for j in range(e * kk, e * kk + kk):
                w = <Py_ssize_t>incv[j]
                d = deg[w] - 1
                deg[w] = d
                if d == 1:
                    _hpush(&heap[0], &hsize, <int64_t>w)

    return orient_np, order_np[:npeeled].copy(), npeeled


# ---------------------------------------------------------------------------
# dependence statistics
# ---------------------------------------------------------------------------

cdef inline uint64_t _sat_add(uint64_t a, uint64_t b, bint* of) nogil:
    if a > U64MAX - b:
        of[0] = 1
        return U64MAX
    return a + b


def dependence_stats(n, k, inc, orient, order):
    inc_np = np.ascontiguousarray(inc, dtype=np.uint32)
    orient_np = np.ascontiguousarray(orient, dtype=np.int64)
    order_np = np.ascontiguousarray(order, dtype=np.int64)
    cdef const uint32_t[::1] incv = inc_np
    cdef const int64_t[::1] orientv = orient_np
    cdef const int64_t[::1] orderv = order_np
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t m = orientv.shape[0]
    if orderv.shape[0] != m or incv.shape[0] != m * kk:
        raise ValueError("orientation, order and incidence sizes disagree")

    indptr_np = np.zeros(nn + 1, dtype=np.int64)
    adj_np = np.zeros(max(incv.shape[0], 1), dtype=np.int64)
    cursor_np = np.zeros(nn, dtype=np.int64)
    cdef int64_t[::1] indptr = indptr_np
    cdef int64_t[::1] adj = adj_np
    cdef int64_t[::1] cursor = cursor_np
    _build_adjacency(nn, kk, incv, indptr, adj, cursor)

    peel_np = np.zeros(max(m, 1), dtype=np.uint64)
    ending_np = np.ones(nn, dtype=np.uint64)
    cdef uint64_t[::1] peel = peel_np
    cdef uint64_t[::1] ending = ending_np

    cdef bint overflow = 0
    cdef Py_ssize_t idx, t, j
    cdef Py_ssize_t e, e2, v, w
    cdef uint64_t s

    for idx in range(m):
        e = <Py_ssize_t>orderv[idx]
        v = <Py_ssize_t>orientv[e]
        s = 0
        for t in range(indptr[v], indptr[v + 1]):
            e2 = <Py_ssize_t>adj[t]
            if e2 == e:
                continue
            s = _sat_add(s, _sat_add(1, peel[e2], &overflow), &overflow)
        peel[e] = s

    for idx in range(m - 1, -1, -1):
        e = <Py_ssize_t>orderv[idx]
        v = <Py_ssize_t>orientv[e]
        s = 1
        for j in range(e * kk, e * kk + kk):
            w = <Py_ssize_t>incv[j]
            if w == v:
                continue
            s = _sat_add(s, ending[w], &overflow)
        ending[v] = s

    return peel_np[:m], ending_np, bool(overflow)


# ---------------------------------------------------------------------------
# eviction process and bulk insertion
# ---------------------------------------------------------------------------

cdef inline int64_t _draw_vertex_c(const uint32_t* inc, uint64_t* state, Py_ssize_t e,
                                   Py_ssize_t k, int64_t ex, int iold_mode) nogil:
    cdef uint64_t r = _next_u64(&state[e]) >> 32
    cdef Py_ssize_t base = e * k
    cdef Py_ssize_t j, cnt, skip
    cdef uint64_t t
    if iold_mode == 0 or ex < 0:
        return <int64_t>inc[base + <Py_ssize_t>((r * <uint64_t>k) >> 32)]
    if iold_mode == 1:
        cnt = 0
        for j in range(base, base + k):
            if <int64_t>inc[j] != ex:
                cnt += 1
        if cnt == 0:
            return <int64_t>inc[base + <Py_ssize_t>((r * <uint64_t>k) >> 32)]
        t = (r * <uint64_t>cnt) >> 32
        for j in range(base, base + k):
            if <int64_t>inc[j] != ex:
                if t == 0:
                    return <int64_t>inc[j]
                t -= 1
    else:
        skip = -1
        for j in range(base, base + k):
            if <int64_t>inc[j] == ex:
                skip = j
                break
        if skip < 0:
            return <int64_t>inc[base + <Py_ssize_t>((r * <uint64_t>k) >> 32)]
        t = (r * <uint64_t>(k - 1)) >> 32
        for j in range(base, base + k):
            if j == skip:
                continue
            if t == 0:
                return <int64_t>inc[j]
            t -= 1
    return <int64_t>inc[base]  # unreachable


def rep_kernel(n, k, inc, seed, policy, target, cap, iold_mode, peel_key):
    inc_np = np.ascontiguousarray(inc, dtype=np.uint32)
    cdef const uint32_t[::1] incv = inc_np
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t m = incv.shape[0] // kk
    cdef int pol = policy
    cdef int iold = iold_mode
    cdef int64_t cap_ = cap

    moves_np = np.zeros(m, dtype=np.int64)
    work_np = np.zeros(m, dtype=np.int64)
    f_np = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return moves_np, 0, True, f_np, work_np

    cdef int64_t[::1] moves = moves_np
    cdef int64_t[::1] work = work_np
    cdef int64_t[::1] f = f_np

    cdef bint has_target = target is not None
    if has_target:
        target_np = np.ascontiguousarray(target, dtype=np.int64)
        if target_np.shape[0] != m:
            raise ValueError("target orientation length mismatch")
    else:
        target_np = np.empty(0, dtype=np.int64)
    cdef const int64_t[::1] targetv = target_np

    owner_np = np.full(nn, -1, dtype=np.int64)
    holder_np = np.arange(m, dtype=np.int64)
    last_ev_np = np.full(m, -1, dtype=np.int64)
    state_np = np.empty(m, dtype=np.uint64)
    cdef int64_t[::1] owner = owner_np
    cdef int64_t[::1] holder = holder_np
    cdef int64_t[::1] last_ev = last_ev_np
    cdef uint64_t[::1] state = state_np

    cdef uint64_t sd = <uint64_t>(seed & _PYMASK)
    cdef Py_ssize_t e0
    for e0 in range(m):
        state[e0] = _derive(sd, <uint64_t>e0)
    cdef uint64_t pol_state = _derive(sd, <uint64_t>m)

    # policy structures (allocated per policy)
    cdef int64_t[::1] ring = None
    cdef int64_t[::1] stack = None
    cdef int64_t[::1] arr = None
    cdef uint64_t[::1] hk = None
    cdef int64_t[::1] hi = None
    cdef uint8_t[::1] in_heap = None
    cdef uint64_t[::1] keys = None
    cdef const uint64_t[::1] kp = None
    cdef Py_ssize_t head = 0, tail = 0, ssize = 0, asize = 0, hsize = 0, ptr = 0
    cdef Py_ssize_t ring_cap = m + 1

    if pol == 0:  # fifo
        ring_np = np.empty(ring_cap, dtype=np.int64)
        ring = ring_np
        for e0 in range(m):
            ring[e0] = e0
        head = 0
        tail = m
    elif pol == 1:  # lifo: lower initial indices pop first
        stack_np = np.empty(m, dtype=np.int64)
        stack = stack_np
        for e0 in range(m):
            stack[e0] = m - 1 - e0
        ssize = m
    elif pol == 2:  # uniform random over the eligible set
        arr_np = np.empty(m, dtype=np.int64)
        arr = arr_np
        for e0 in range(m):
            arr[e0] = e0
        asize = m
    elif pol == 3:  # max-peel with lazy deletions
        keys_np = np.empty(m, dtype=np.uint64)
        keys = keys_np
        kp_np = np.ascontiguousarray(peel_key, dtype=np.uint64)
        if kp_np.shape[0] != m:
            raise ValueError("peel key length mismatch")
        kp = kp_np
        for e0 in range(m):
            keys[e0] = U64MAX - kp[e0]
        hk_np = np.empty(m + 1, dtype=np.uint64)
        hi_np = np.empty(m + 1, dtype=np.int64)
        hk = hk_np
        hi = hi_np
        in_heap_np = np.ones(m, dtype=np.uint8)
        in_heap = in_heap_np
        hsize = 0
        for e0 in range(m):
            _hpush2(&hk[0], &hi[0], &hsize, keys[e0], <int64_t>e0)
    elif pol == 4:
        ptr = 0
    else:
        raise ValueError(f"unknown policy id {policy}")

    cdef Py_ssize_t count = m
    cdef int64_t rounds = 0
    cdef Py_ssize_t e, p
    cdef int64_t v, old, prev
    cdef int64_t ex
    cdef bint ok

    while count > 0 and rounds < cap_:
        if pol == 0:
            e = <Py_ssize_t>ring[head]
            head += 1
            if head == ring_cap:
                head = 0
        elif pol == 1:
            ssize -= 1
            e = <Py_ssize_t>stack[ssize]
        elif pol == 2:
            p = <Py_ssize_t>_next_below(&pol_state, <uint64_t>asize)
            e = <Py_ssize_t>arr[p]
            asize -= 1
            arr[p] = arr[asize]
        elif pol == 3:
            while True:
                e = <Py_ssize_t>_hpop2(&hk[0], &hi[0], &hsize)
                in_heap[e] = 0
                ok = (f[e] == -1) if not has_target else (f[e] != targetv[e])
                if ok:
                    break
        else:
            p = ptr
            while True:
                ok = (f[p] == -1) if not has_target else (f[p] != targetv[p])
                if ok:
                    break
                p = p + 1 if p + 1 < m else 0
            e = p
            ptr = p + 1 if p + 1 < m else 0

        rounds += 1
        moves[e] += 1
        work[<Py_ssize_t>holder[e]] += 1

        ex = last_ev[e] if iold != 0 else -1
        v = _draw_vertex_c(&incv[0], &state[0], e, kk, ex, iold)

        old = f[e]
        if old >= 0:
            owner[<Py_ssize_t>old] = -1
        prev = owner[<Py_ssize_t>v]
        if prev >= 0:
            f[<Py_ssize_t>prev] = -1
            last_ev[<Py_ssize_t>prev] = v
            holder[<Py_ssize_t>prev] = holder[e]
            if (not has_target) or targetv[<Py_ssize_t>prev] == v:
                count += 1
                if pol == 0:
                    ring[tail] = prev
                    tail += 1
                    if tail == ring_cap:
                        tail = 0
                elif pol == 1:
                    stack[ssize] = prev
                    ssize += 1
                elif pol == 2:
                    arr[asize] = prev
                    asize += 1
                elif pol == 3 and not in_heap[<Py_ssize_t>prev]:
                    in_heap[<Py_ssize_t>prev] = 1
                    _hpush2(&hk[0], &hi[0], &hsize, keys[<Py_ssize_t>prev], prev)
            elif pol == 3 and not in_heap[<Py_ssize_t>prev]:
                in_heap[<Py_ssize_t>prev] = 1
                _hpush2(&hk[0], &hi[0], &hsize, keys[<Py_ssize_t>prev], prev)
        owner[<Py_ssize_t>v] = e
        f[e] = v

        if not has_target:
            count -= 1
        elif v == targetv[e]:
            count -= 1
        else:
            if pol == 0:
                ring[tail] = e
                tail += 1
                if tail == ring_cap:
                    tail = 0
            elif pol == 1:
                stack[ssize] = e
                ssize += 1
            elif pol == 2:
                arr[asize] = e
                asize += 1
            elif pol == 3 and not in_heap[e]:
                in_heap[e] = 1
                _hpush2(&hk[0], &hi[0], &hsize, keys[e], <int64_t>e)

    return moves_np, int(rounds), count == 0, f_np, work_np


def bulk_insert_kernel(n, k, inc, seed, iold_mode, insert_cap):
    inc_np = np.ascontiguousarray(inc, dtype=np.uint32)
    cdef const uint32_t[::1] incv = inc_np
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t m = incv.shape[0] // kk
    cdef int iold = iold_mode
    cdef int64_t cap_ = insert_cap

    key_moves_np = np.zeros(m, dtype=np.int64)
    insert_iters_np = np.zeros(m, dtype=np.int64)
    capped_np = np.zeros(m, dtype=np.uint8)
    occupant_np = np.full(nn, -1, dtype=np.int64)
    position_np = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return key_moves_np, insert_iters_np, capped_np, occupant_np, position_np

    cdef int64_t[::1] key_moves = key_moves_np
    cdef int64_t[::1] insert_iters = insert_iters_np
    cdef uint8_t[::1] capped = capped_np
    cdef int64_t[::1] occupant = occupant_np
    cdef int64_t[::1] position = position_np

    last_ev_np = np.full(m, -1, dtype=np.int64)
    state_np = np.empty(m, dtype=np.uint64)
    cdef int64_t[::1] last_ev = last_ev_np
    cdef uint64_t[::1] state = state_np
    cdef uint64_t sd = <uint64_t>(seed & _PYMASK)
    cdef Py_ssize_t j0
    for j0 in range(m):
        state[j0] = _derive(sd, <uint64_t>j0)

    cdef Py_ssize_t j, cur
    cdef int64_t v, prev, iters, ex
    cdef bint placed

    for j in range(m):
        cur = j
        iters = 0
        placed = 0
        while iters < cap_:
            ex = last_ev[cur] if iold != 0 else -1
            v = _draw_vertex_c(&incv[0], &state[0], cur, kk, ex, iold)
            iters += 1
            key_moves[cur] += 1
            prev = occupant[<Py_ssize_t>v]
            occupant[<Py_ssize_t>v] = cur
            position[cur] = v
            if prev < 0:
                placed = 1
                break
            position[<Py_ssize_t>prev] = -1
            last_ev[<Py_ssize_t>prev] = v
            cur = <Py_ssize_t>prev
        insert_iters[j] = iters
        if not placed:
            capped[j] = 1

    return key_moves_np, insert_iters_np, capped_np, occupant_np, position_np


# ---------------------------------------------------------------------------
# continuous-time peeling
# ---------------------------------------------------------------------------

cdef inline void _flush(double limit, bint inclusive,
                        const double[::1] grid, Py_ssize_t ng, Py_ssize_t* gi,
                        double* pend_t, bint* have_pend,
                        double[::1] st, int64_t[::1] sb, int64_t[::1] sl,
                        Py_ssize_t* ns, int64_t balls, Py_ssize_t psize) nogil:
    cdef double tg, tb, t
    while gi[0] < ng or have_pend[0]:
        tg = grid[gi[0]] if gi[0] < ng else INFINITY
        tb = pend_t[0] if have_pend[0] else INFINITY
        t = tg if tg <= tb else tb
        if t > limit or (t == limit and not inclusive):
            break
        st[ns[0]] = t
        sb[ns[0]] = balls
        sl[ns[0]] = psize
        ns[0] += 1
        if tg <= tb:
            gi[0] += 1
        else:
            have_pend[0] = 0


def continuous_peel_kernel(n, m, k, seed, grid):
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t mm = m
    cdef Py_ssize_t kk = k
    cdef Py_ssize_t km = kk * mm
    grid_np = np.ascontiguousarray(grid, dtype=np.float64)
    cdef const double[::1] gridv = grid_np
    cdef Py_ssize_t ng = gridv.shape[0]

    cdef uint64_t sd = <uint64_t>(seed & _PYMASK)
    vert_np = sample_uniform(_derive(sd, 0), km, nn)
    cdef uint32_t[::1] vert = vert_np

    life_np = np.empty(km, dtype=np.float64)
    cdef double[::1] life = life_np
    cdef uint64_t st_life = _derive(sd, 1)
    cdef Py_ssize_t i
    cdef double u
    for i in range(km):
        u = (<double>((_next_u64(&st_life) >> 11) + 1)) * (2.0 ** -53)
        life[i] = -log(u)
    order_np = np.argsort(life_np, kind="stable")
    cdef int64_t[::1] order = order_np
    cdef uint64_t st_pick = _derive(sd, 2)

    cnt_np = np.zeros(nn, dtype=np.int64)
    sum_ids_np = np.zeros(nn, dtype=np.int64)
    alive_np = np.ones(max(km, 1), dtype=np.uint8)
    pool_np = np.empty(nn, dtype=np.int64)
    pos_np = np.full(nn, -1, dtype=np.int64)
    cdef int64_t[::1] cnt = cnt_np
    cdef int64_t[::1] sum_ids = sum_ids_np
    cdef uint8_t[::1] alive = alive_np
    cdef int64_t[::1] pool = pool_np
    cdef int64_t[::1] pos = pos_np

    cdef Py_ssize_t v
    for i in range(km):
        v = <Py_ssize_t>vert[i]
        cnt[v] += 1
        sum_ids[v] += i
    cdef Py_ssize_t psize = 0
    for v in range(nn):
        if cnt[v] == 1:
            pos[v] = psize
            pool[psize] = v
            psize += 1

    cdef Py_ssize_t max_samples = ng + mm + 1
    times_np = np.empty(max_samples, dtype=np.float64)
    sb_np = np.empty(max_samples, dtype=np.int64)
    sl_np = np.empty(max_samples, dtype=np.int64)
    cdef double[::1] times = times_np
    cdef int64_t[::1] sb = sb_np
    cdef int64_t[::1] sl = sl_np
    cdef Py_ssize_t ns = 0

    edges_np = np.empty(max(km, 1), dtype=np.uint32)
    owners_np = np.empty(max(mm, 1), dtype=np.uint32)
    cdef uint32_t[::1] edges = edges_np
    cdef uint32_t[::1] owners = owners_np
    cdef Py_ssize_t ne = 0
    cdef Py_ssize_t rounds = 0

    cdef int64_t balls = km
    cdef double clock = 0.0
    cdef Py_ssize_t ptr = 0
    cdef Py_ssize_t gi = 0
    cdef double pend_t = 0.0
    cdef bint have_pend = 0

    cdef Py_ssize_t uu, i2, b, b0, w
    cdef int64_t last
    cdef int64_t c
    cdef Py_ssize_t dth

    while psize > 0:
        # samples due at the current clock precede the instantaneous removal
        _flush(clock, 1, gridv, ng, &gi, &pend_t, &have_pend,
               times, sb, sl, &ns, balls, psize)
        i2 = <Py_ssize_t>_next_below(&st_pick, <uint64_t>psize)
        uu = <Py_ssize_t>pool[i2]
        last = pool[psize - 1]
        pool[i2] = last
        pos[<Py_ssize_t>last] = i2
        psize -= 1
        pos[uu] = -1
        b0 = <Py_ssize_t>sum_ids[uu]
        # remove ball b0 (vertex uu leaves the pool above)
        alive[b0] = 0
        cnt[uu] -= 1
        sum_ids[uu] -= b0
        balls -= 1
        owners[rounds] = <uint32_t>uu
        edges[ne] = <uint32_t>uu
        ne += 1
        for dth in range(kk - 1):
            while not alive[<Py_ssize_t>order[ptr]]:
                ptr += 1
            b = <Py_ssize_t>order[ptr]
            ptr += 1
            _flush(life[b], 0, gridv, ng, &gi, &pend_t, &have_pend,
                   times, sb, sl, &ns, balls, psize)
            clock = life[b]
            edges[ne] = vert[b]
            ne += 1
            alive[b] = 0
            w = <Py_ssize_t>vert[b]
            c = cnt[w] - 1
            cnt[w] = c
            sum_ids[w] -= b
            balls -= 1
            if c == 1:
                pos[w] = psize
                pool[psize] = w
                psize += 1
            elif c == 0 and pos[w] >= 0:
                i2 = <Py_ssize_t>pos[w]
                last = pool[psize - 1]
                pool[i2] = last
                pos[<Py_ssize_t>last] = i2
                psize -= 1
                pos[w] = -1
        rounds += 1
        pend_t = clock
        have_pend = 1

    cdef double tau = clock
    _flush(INFINITY, 1, gridv, ng, &gi, &pend_t, &have_pend,
           times, sb, sl, &ns, balls, psize)

    times_out = times_np[:ns].copy()
    balls_out = sb_np[:ns].copy()
    light_out = sl_np[:ns].copy()
    return (
        times_out,
        balls_out,
        balls_out - light_out,
        light_out,
        float(tau),
        balls == 0,
        edges_np[:ne].copy(),
        owners_np[:rounds].copy(),
    )
