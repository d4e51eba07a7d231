"""Pure-Python kernels.

Reference implementations of the hot inner loops: hypergraph sampling,
2-core peeling, dependence-number dynamic programs, the random eviction
process, bulk random-walk insertion, and the continuous-time peeling
simulation.  The compiled twin in ``_core_c.pyx`` implements the same
contracts and must produce bit-identical outputs; keep the event order of
every loop in sync between the two files.

All randomness comes from splitmix64 streams (see ``rng``).  Per-function
stream layout:

* ``sample_uniform``, ``peel_kernel``: consume ``stream(seed)`` directly.
* ``rep_kernel``: edge ``e`` draws from ``derive_seed(seed, e)``; the policy
  (when it needs randomness) draws from ``derive_seed(seed, m)``.
* ``bulk_insert_kernel``: key ``j`` draws from ``derive_seed(seed, j)``, the
  same layout as ``rep_kernel`` so scheduling-equivalent runs consume
  identical randomness per edge.
* ``continuous_peel_kernel``: ball vertices from ``derive_seed(seed, 0)``,
  lifetimes from ``derive_seed(seed, 1)``, light-ball picks from
  ``derive_seed(seed, 2)``.
"""
from __future__ import annotations

import heapq
import math
from collections import deque

import numpy as np

from .rng import GOLDEN, MASK64, derive_seed, mix64

U64_MAX = MASK64
_INF = math.inf

# Policy ids shared with the compiled kernels.
POLICY_FIFO = 0
POLICY_LIFO = 1
POLICY_RANDOM = 2
POLICY_MAX_PEEL = 3
POLICY_ROUND_ROBIN = 4

# i_old exclusion modes: 0 = off, 1 = exclude every copy of the forbidden
# bucket, 2 = exclude a single copy.
IOLD_OFF = 0
IOLD_ALL_COPIES = 1
IOLD_SINGLE_COPY = 2


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def sample_uniform(seed: int, count: int, bound: int) -> np.ndarray:
    """``count`` uniform draws from [0, bound), the i-th being output i of
    ``stream(seed)`` reduced by the shared 32-bit multiply-shift."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = _mix64_np(np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN))
    return (((z >> np.uint64(32)) * np.uint64(bound)) >> np.uint64(32)).astype(
        np.uint32
    )


def _build_adjacency(n: int, k: int, inc: list) -> tuple[list, list]:
    """CSR lists of incident edge ids per vertex, one entry per copy."""
    m = len(inc) // k
    indptr = [0] * (n + 1)
    for v in inc:
        indptr[v + 1] += 1
    for v in range(n):
        indptr[v + 1] += indptr[v]
    cursor = indptr[:-1].copy()
    adj = [0] * (k * m)
    for e in range(m):
        base = e * k
        for j in range(base, base + k):
            v = inc[j]
            adj[cursor[v]] = e
            cursor[v] += 1
    return indptr, adj


def peel_kernel(
    n: int, k: int, inc: np.ndarray, seed: int, randomize: bool
) -> tuple[np.ndarray, np.ndarray, int]:
    """Exhaustive greedy peeling.

    Repeatedly selects a degree-1 vertex (uniformly at random when
    ``randomize``, else the lowest index), orients its unique live edge to
    it and removes the edge.  Returns ``(orient, order, npeeled)`` where
    unpeeled edges keep ``orient == -1``.
    """
    inc_l = inc.tolist()
    m = len(inc_l) // k
    deg = [0] * n
    for v in inc_l:
        deg[v] += 1
    indptr, adj = _build_adjacency(n, k, inc_l)
    alive = bytearray(b"\x01") * m
    orient = [-1] * m
    order = []

    if randomize:
        state = seed & MASK64
        pool = []
        pos = [-1] * n
        for v in range(n):
            if deg[v] == 1:
                pos[v] = len(pool)
                pool.append(v)
        while pool:
            state = (state + GOLDEN) & MASK64
            i = ((mix64(state) >> 32) * len(pool)) >> 32
            u = pool[i]
            last = pool[-1]
            pool[i] = last
            pos[last] = i
            pool.pop()
            pos[u] = -1
            e = -1
            for t in range(indptr[u], indptr[u + 1]):
                if alive[adj[t]]:
                    e = adj[t]
                    break
            orient[e] = u
            order.append(e)
            alive[e] = 0
            base = e * k
            for j in range(base, base + k):
                w = inc_l[j]
                d = deg[w] - 1
                deg[w] = d
                if d == 1:
                    pos[w] = len(pool)
                    pool.append(w)
                elif d == 0 and pos[w] >= 0:
                    i2 = pos[w]
                    last = pool[-1]
                    pool[i2] = last
                    pos[last] = i2
                    pool.pop()
                    pos[w] = -1
    else:
        # Lowest-index selection via a lazy min-heap: each vertex's degree
        # hits 1 at most once, so entries are unique; stale entries (degree
        # already 0) are discarded at pop time.
        heap = [v for v in range(n) if deg[v] == 1]
        heapq.heapify(heap)
        while heap:
            u = heapq.heappop(heap)
            if deg[u] != 1:
                continue
            e = -1
            for t in range(indptr[u], indptr[u + 1]):
                if alive[adj[t]]:
                    e = adj[t]
                    break
            orient[e] = u
            order.append(e)
            alive[e] = 0
            base = e * k
            for j in range(base, base + k):
                w = inc_l[j]
                d = deg[w] - 1
                deg[w] = d
                if d == 1:
                    heapq.heappush(heap, w)

    return (
        np.array(orient, dtype=np.int64),
        np.array(order, dtype=np.int64),
        len(order),
    )


def dependence_stats(
    n: int, k: int, inc: np.ndarray, orient: np.ndarray, order: np.ndarray
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Per-edge peeling numbers and per-vertex ending-path counts.

    ``peel[e]`` is the saturating sum ``sum_{e' in D(e)} (1 + peel[e'])``
    evaluated in peel order; ``ending[v]`` counts paths of the vertex-based
    dependence graph that end in ``v``, including the trivial path, via the
    reverse-order recurrence.  Both use 64-bit saturating arithmetic with a
    sticky overflow flag.
    """
    inc_l = inc.tolist()
    orient_l = orient.tolist()
    order_l = order.tolist()
    m = len(orient_l)
    if len(order_l) != m or len(inc_l) != m * k:
        raise ValueError("orientation, order and incidence sizes disagree")
    indptr, adj = _build_adjacency(n, k, inc_l)
    overflow = False

    peel = [0] * m
    for e in order_l:
        v = orient_l[e]
        s = 0
        for t in range(indptr[v], indptr[v + 1]):
            e2 = adj[t]
            if e2 == e:
                continue
            s += 1 + peel[e2]
            if s > U64_MAX:
                s = U64_MAX
                overflow = True
        peel[e] = s

    ending = [1] * n
    for i in range(m - 1, -1, -1):
        e = order_l[i]
        v = orient_l[e]
        s = 1
        base = e * k
        for j in range(base, base + k):
            w = inc_l[j]
            if w == v:
                continue
            s += ending[w]
            if s > U64_MAX:
                s = U64_MAX
                overflow = True
        ending[v] = s

    return (
        np.array(peel, dtype=np.uint64),
        np.array(ending, dtype=np.uint64),
        overflow,
    )


def _draw_vertex(inc_l, state, e, k, ex, iold_mode):
    """One uniform draw from edge ``e``'s incidences using its substream.

    ``ex`` is the forbidden bucket (-1 for none).  Mode 1 removes every copy
    of ``ex`` (falling back to all k incidences when that empties the set);
    mode 2 removes one copy.  Copies of a non-excluded bucket keep
    proportionally higher probability.  Exactly one stream step per call.
    """
    s = (state[e] + GOLDEN) & MASK64
    state[e] = s
    r = mix64(s) >> 32
    base = e * k
    if iold_mode == IOLD_OFF or ex < 0:
        return inc_l[base + ((r * k) >> 32)]
    if iold_mode == IOLD_ALL_COPIES:
        cnt = 0
        for j in range(base, base + k):
            if inc_l[j] != ex:
                cnt += 1
        if cnt == 0:
            return inc_l[base + ((r * k) >> 32)]
        t = (r * cnt) >> 32
        for j in range(base, base + k):
            if inc_l[j] != ex:
                if t == 0:
                    return inc_l[j]
                t -= 1
    else:  # IOLD_SINGLE_COPY
        skip = -1
        for j in range(base, base + k):
            if inc_l[j] == ex:
                skip = j
                break
        if skip < 0:
            return inc_l[base + ((r * k) >> 32)]
        t = (r * (k - 1)) >> 32
        for j in range(base, base + k):
            if j == skip:
                continue
            if t == 0:
                return inc_l[j]
            t -= 1
    raise AssertionError("unreachable")


def rep_kernel(
    n: int,
    k: int,
    inc: np.ndarray,
    seed: int,
    policy: int,
    target,
    cap: int,
    iold_mode: int,
    peel_key,
) -> tuple[np.ndarray, int, bool, np.ndarray, np.ndarray]:
    """Random eviction process, with or without a target orientation.

    ``target is None`` runs the plain process (eligible = unoriented edges,
    terminates when every edge is oriented); otherwise eligible means
    ``f(e) != target[e]`` and the process terminates only at ``f == target``.
    Each round the policy picks an eligible edge, a uniform incident vertex
    is drawn from the edge's substream, the edge is oriented there and any
    previous occupant is evicted.

    Policy structures hold every eligible edge exactly once (the max-peel
    heap is lazy with an in-heap flag).  The lifo stack pops lower initial
    indices first and puts evicted edges on top, which makes it exactly the
    sequential-insertion schedule.  Round-robin cycles over edge indices.

    Returns ``(moves, rounds, done, f, thread_work)``; ``thread_work[t]`` is
    the number of rounds charged to logical insertion thread ``t`` (the
    thread of an evicted edge becomes the evictor's thread, mirroring a
    random-walk insertion chain).
    """
    inc_l = inc.tolist()
    m = len(inc_l) // k
    moves = [0] * m
    work = [0] * m
    f = [-1] * m
    if m == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, 0, True, empty.copy(), empty.copy()

    target_l = target.tolist() if target is not None else None
    if target_l is not None and len(target_l) != m:
        raise ValueError("target orientation length mismatch")
    owner = [-1] * n
    holder = list(range(m))
    last_ev = [-1] * m
    state = [derive_seed(seed, e) for e in range(m)]
    pol_state = derive_seed(seed, m)

    count = m  # eligible edges; all start unoriented (and off-target)
    rounds = 0

    # Policy state.
    if policy == POLICY_FIFO:
        queue = deque(range(m))
    elif policy == POLICY_LIFO:
        stack = list(range(m - 1, -1, -1))
    elif policy == POLICY_RANDOM:
        arr = list(range(m))
    elif policy == POLICY_MAX_PEEL:
        if len(peel_key) != m:
            raise ValueError("peel key length mismatch")
        keys = [U64_MAX - int(x) for x in peel_key]
        heap = [(keys[e], e) for e in range(m)]
        heapq.heapify(heap)
        in_heap = bytearray(b"\x01") * m
    elif policy == POLICY_ROUND_ROBIN:
        ptr = 0
    else:
        raise ValueError(f"unknown policy id {policy}")

    while count > 0 and rounds < cap:
        # Select an eligible edge.
        if policy == POLICY_FIFO:
            e = queue.popleft()
        elif policy == POLICY_LIFO:
            e = stack.pop()
        elif policy == POLICY_RANDOM:
            pol_state = (pol_state + GOLDEN) & MASK64
            i = ((mix64(pol_state) >> 32) * len(arr)) >> 32
            e = arr[i]
            arr[i] = arr[-1]
            arr.pop()
        elif policy == POLICY_MAX_PEEL:
            while True:
                _, e = heapq.heappop(heap)
                in_heap[e] = 0
                if (f[e] == -1) if target_l is None else (f[e] != target_l[e]):
                    break
        else:  # round robin: next eligible edge index cyclically
            p = ptr
            while True:
                ok = (f[p] == -1) if target_l is None else (f[p] != target_l[p])
                if ok:
                    break
                p = p + 1 if p + 1 < m else 0
            e = p
            ptr = p + 1 if p + 1 < m else 0

        rounds += 1
        moves[e] += 1
        work[holder[e]] += 1

        ex = last_ev[e] if iold_mode != IOLD_OFF else -1
        v = _draw_vertex(inc_l, state, e, k, ex, iold_mode)

        old = f[e]
        if old >= 0:
            owner[old] = -1
        prev = owner[v]
        if prev >= 0:
            f[prev] = -1
            last_ev[prev] = v
            holder[prev] = holder[e]
            if target_l is None or target_l[prev] == v:
                # prev was ineligible (oriented / on target); it joins again.
                count += 1
                if policy == POLICY_FIFO:
                    queue.append(prev)
                elif policy == POLICY_LIFO:
                    stack.append(prev)
                elif policy == POLICY_RANDOM:
                    arr.append(prev)
                elif policy == POLICY_MAX_PEEL and not in_heap[prev]:
                    in_heap[prev] = 1
                    heapq.heappush(heap, (keys[prev], prev))
            elif policy == POLICY_MAX_PEEL and not in_heap[prev]:
                in_heap[prev] = 1
                heapq.heappush(heap, (keys[prev], prev))
        owner[v] = e
        f[e] = v

        if target_l is None:
            count -= 1
        elif v == target_l[e]:
            count -= 1
        else:
            # Still off target: e stays eligible.
            if policy == POLICY_FIFO:
                queue.append(e)
            elif policy == POLICY_LIFO:
                stack.append(e)
            elif policy == POLICY_RANDOM:
                arr.append(e)
            elif policy == POLICY_MAX_PEEL and not in_heap[e]:
                in_heap[e] = 1
                heapq.heappush(heap, (keys[e], e))

    return (
        np.array(moves, dtype=np.int64),
        rounds,
        count == 0,
        np.array(f, dtype=np.int64),
        np.array(work, dtype=np.int64),
    )


def bulk_insert_kernel(
    n: int, k: int, inc: np.ndarray, seed: int, iold_mode: int, insert_cap: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Sequential random-walk insertion of keys 0..m-1.

    Key ``j``'s choices come from ``derive_seed(seed, j)``; an eviction chain
    charges each displaced key's counter and continues with that key's own
    substream.  An insertion aborts (leaving the current key unplaced and the
    placement otherwise intact) once it has spent ``insert_cap`` iterations.

    Returns ``(key_moves, insert_iters, insert_capped, occupant, position)``.
    """
    inc_l = inc.tolist()
    m = len(inc_l) // k
    key_moves = [0] * m
    insert_iters = [0] * m
    capped = bytearray(m)
    occupant = [-1] * n
    position = [-1] * m
    last_ev = [-1] * m
    state = [derive_seed(seed, j) for j in range(m)]

    for j in range(m):
        cur = j
        iters = 0
        placed = False
        while iters < insert_cap:
            ex = last_ev[cur] if iold_mode != IOLD_OFF else -1
            v = _draw_vertex(inc_l, state, cur, k, ex, iold_mode)
            iters += 1
            key_moves[cur] += 1
            prev = occupant[v]
            occupant[v] = cur
            position[cur] = v
            if prev < 0:
                placed = True
                break
            position[prev] = -1
            last_ev[prev] = v
            cur = prev
        insert_iters[j] = iters
        if not placed:
            capped[j] = 1

    return (
        np.array(key_moves, dtype=np.int64),
        np.array(insert_iters, dtype=np.int64),
        np.frombuffer(bytes(capped), dtype=np.uint8).copy(),
        np.array(occupant, dtype=np.int64),
        np.array(position, dtype=np.int64),
    )


def continuous_peel_kernel(
    n: int, m: int, k: int, seed: int, grid: np.ndarray
) -> tuple:
    """Continuous-time peeling of the configuration model.

    ``k*m`` balls get uniform vertices and independent Exp(1) lifetimes.
    Each round removes one uniformly random light ball instantly (no clock
    advance) and then the next ``k-1`` balls to die, emitting the hyperedge
    of those k balls, owned by (oriented to) the light ball's vertex.  The
    process stops when no light ball remains.

    Counts are sampled at every grid time and at every round boundary, in
    time order; a sample due at time t reflects every death up to and
    including t but not an instantaneous removal happening at t, so the
    sample at t=0 shows all k*m balls.  Grid times past the stopping time
    report the final (frozen) state.

    Returns ``(times, balls, heavy, light, tau, emptied, edges, owners)``.
    """
    km = k * m
    grid_l = [float(g) for g in grid]
    ng = len(grid_l)

    vert = sample_uniform(derive_seed(seed, 0), km, n).tolist()
    st_life = derive_seed(seed, 1)
    lifetimes = [0.0] * km
    for i in range(km):
        st_life = (st_life + GOLDEN) & MASK64
        u = ((mix64(st_life) >> 11) + 1) * 2.0**-53
        lifetimes[i] = -math.log(u)
    order = np.argsort(np.array(lifetimes), kind="stable").tolist()
    st_pick = derive_seed(seed, 2)

    cnt = [0] * n
    sum_ids = [0] * n
    for i in range(km):
        v = vert[i]
        cnt[v] += 1
        sum_ids[v] += i
    alive = bytearray(b"\x01") * km
    pool = []
    pos = [-1] * n
    for v in range(n):
        if cnt[v] == 1:
            pos[v] = len(pool)
            pool.append(v)

    times: list[float] = []
    s_balls: list[int] = []
    s_light: list[int] = []
    owners: list[int] = []
    edges: list[int] = []

    balls = km
    clock = 0.0
    ptr = 0
    gi = 0
    pend_t = 0.0
    have_pend = False

    def flush(limit: float, inclusive: bool) -> None:
        nonlocal gi, have_pend
        while gi < ng or have_pend:
            tg = grid_l[gi] if gi < ng else _INF
            tb = pend_t if have_pend else _INF
            t = tg if tg <= tb else tb
            if t > limit or (t == limit and not inclusive):
                break
            times.append(t)
            s_balls.append(balls)
            s_light.append(len(pool))
            if tg <= tb:
                gi += 1
            else:
                have_pend = False

    def remove_ball(b: int) -> None:
        nonlocal balls
        alive[b] = 0
        w = vert[b]
        c = cnt[w] - 1
        cnt[w] = c
        sum_ids[w] -= b
        balls -= 1
        if c == 1:
            pos[w] = len(pool)
            pool.append(w)
        elif c == 0 and pos[w] >= 0:
            i2 = pos[w]
            last = pool[-1]
            pool[i2] = last
            pos[last] = i2
            pool.pop()
            pos[w] = -1

    while pool:
        # Samples due at the current clock precede the instantaneous removal.
        flush(clock, True)
        st_pick = (st_pick + GOLDEN) & MASK64
        i = ((mix64(st_pick) >> 32) * len(pool)) >> 32
        u = pool[i]
        last = pool[-1]
        pool[i] = last
        pos[last] = i
        pool.pop()
        pos[u] = -1
        b0 = sum_ids[u]
        remove_ball(b0)
        owners.append(u)
        edges.append(u)
        for _ in range(k - 1):
            while not alive[order[ptr]]:
                ptr += 1
            b = order[ptr]
            ptr += 1
            flush(lifetimes[b], False)
            clock = lifetimes[b]
            edges.append(vert[b])
            remove_ball(b)
        pend_t = clock
        have_pend = True

    tau = clock
    flush(_INF, True)

    return (
        np.array(times, dtype=np.float64),
        np.array(s_balls, dtype=np.int64),
        np.array(s_balls, dtype=np.int64) - np.array(s_light, dtype=np.int64),
        np.array(s_light, dtype=np.int64),
        tau,
        balls == 0,
        np.array(edges, dtype=np.uint32),
        np.array(owners, dtype=np.uint32),
    )
