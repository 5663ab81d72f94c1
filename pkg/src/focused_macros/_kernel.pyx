# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled best-first search over tabular action models.

Mirrors ``_kernel_py.run_search`` exactly; see that module for the contract.
"""

import numpy as np

from libc.stdint cimport uint8_t, int16_t, int32_t, int64_t, uint64_t
from libc.string cimport memcmp, memcpy
from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue

cdef enum:
    FOCUS_INF = 1 << 30

cdef uint64_t KEY_MAX = 0xFFFFFFFFFFFFFFFFULL


cdef inline uint64_t _hash_state(const uint8_t* p, Py_ssize_t n) noexcept nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef Py_ssize_t i
    for i in range(n):
        h ^= p[i]
        h *= 1099511628211ULL
    h ^= h >> 32
    return h


cdef void _rehash(vector[int32_t]& table, const vector[uint64_t]& hashes, Py_ssize_t cap) noexcept nogil:
    cdef Py_ssize_t mask = cap - 1
    cdef Py_ssize_t idx, slot
    table.assign(cap, -1)
    for idx in range(<Py_ssize_t>hashes.size()):
        slot = <Py_ssize_t>(hashes[idx] & mask)
        while table[slot] != -1:
            slot = (slot + 1) & mask
        table[slot] = <int32_t>idx


def run_search(
    const uint8_t[:, :, ::1] maps,
    const int32_t[::1] pre_start,
    const int32_t[::1] pre_var,
    const uint8_t[::1] pre_val,
    const uint8_t[::1] start,
    const int16_t[::1] goal,
    int64_t budget,
    int mode,
    const uint8_t[::1] origin,
    bint lifo=False,
):
    cdef Py_ssize_t n_actions = maps.shape[0]
    cdef Py_ssize_t n = maps.shape[1]
    cdef Py_ssize_t n_values = maps.shape[2]
    cdef const uint8_t* table_base = &maps[0, 0, 0]
    cdef vector[uint8_t] arena
    cdef vector[int32_t] parent
    cdef vector[int32_t] action
    cdef vector[int32_t] hval
    cdef vector[int32_t] depth
    cdef vector[uint64_t] hashes
    cdef vector[int32_t] table
    cdef vector[uint8_t] cur
    cdef priority_queue[uint64_t] heap
    cdef Py_ssize_t cap = 1024
    cdef Py_ssize_t mask
    cdef Py_ssize_t i, a, p, slot, base, other
    cdef int64_t generated = 0
    cdef int64_t expanded = 0
    cdef int64_t goal_node = -1
    cdef int32_t node, idx, score, prio
    cdef uint64_t h, top
    cdef const uint8_t* mp
    cdef uint8_t* succ
    cdef bint ok, dup, stop = False

    cur.resize(n)
    arena.resize(n)
    for i in range(n):
        arena[i] = start[i]

    with nogil:
        score = 0
        for i in range(n):
            if mode == 0:
                if goal[i] >= 0 and arena[i] != goal[i]:
                    score += 1
            elif arena[i] != origin[i]:
                score += 1
        parent.push_back(-1)
        action.push_back(-1)
        hval.push_back(score)
        depth.push_back(0)
        if mode == 0 and score == 0:
            goal_node = 0
            stop = True
        h = _hash_state(&arena[0], n)
        hashes.push_back(h)
        table.assign(cap, -1)
        mask = cap - 1
        table[<Py_ssize_t>(h & mask)] = 0
        if mode == 0:
            prio = score
        else:
            prio = FOCUS_INF if score == 0 else score
        heap.push(KEY_MAX - ((<uint64_t>prio << 32) | (0xFFFFFFFFULL if lifo else 0)))

        while not stop and not heap.empty():
            top = KEY_MAX - heap.top()
            heap.pop()
            node = <int32_t>(top & 0xFFFFFFFFULL)
            if lifo:
                node = <int32_t>(0xFFFFFFFFULL - (top & 0xFFFFFFFFULL))
            expanded += 1
            memcpy(&cur[0], &arena[<Py_ssize_t>node * n], n)
            for a in range(n_actions):
                ok = True
                for p in range(pre_start[a], pre_start[a + 1]):
                    if cur[pre_var[p]] != pre_val[p]:
                        ok = False
                        break
                if not ok:
                    continue
                if generated >= budget:
                    stop = True
                    break
                generated += 1
                base = <Py_ssize_t>arena.size()
                arena.resize(base + n)
                succ = &arena[base]
                mp = table_base + a * n * n_values
                score = 0
                if mode == 0:
                    for i in range(n):
                        succ[i] = mp[i * n_values + cur[i]]
                        if goal[i] >= 0 and succ[i] != goal[i]:
                            score += 1
                else:
                    for i in range(n):
                        succ[i] = mp[i * n_values + cur[i]]
                        if succ[i] != origin[i]:
                            score += 1
                if mode == 0 and score == 0:
                    goal_node = <int64_t>parent.size()
                    parent.push_back(node)
                    action.push_back(<int32_t>a)
                    hval.push_back(0)
                    depth.push_back(depth[node] + 1)
                    stop = True
                    break
                h = _hash_state(succ, n)
                slot = <Py_ssize_t>(h & mask)
                dup = False
                while table[slot] != -1:
                    other = table[slot]
                    if hashes[other] == h and memcmp(&arena[other * n], succ, n) == 0:
                        dup = True
                        break
                    slot = (slot + 1) & mask
                if dup:
                    arena.resize(base)
                    continue
                idx = <int32_t>parent.size()
                parent.push_back(node)
                action.push_back(<int32_t>a)
                hval.push_back(score)
                depth.push_back(depth[node] + 1)
                hashes.push_back(h)
                table[slot] = idx
                if 2 * (<Py_ssize_t>idx + 1) > cap:
                    cap *= 2
                    mask = cap - 1
                    _rehash(table, hashes, cap)
                if mode == 0:
                    prio = score
                else:
                    prio = depth[idx] + (FOCUS_INF if score == 0 else score)
                if lifo:
                    heap.push(KEY_MAX - ((<uint64_t>prio << 32) | (0xFFFFFFFFULL - <uint64_t>idx)))
                else:
                    heap.push(KEY_MAX - ((<uint64_t>prio << 32) | <uint64_t>idx))

    count = parent.size()
    parents = np.empty(count, dtype=np.int32)
    actions = np.empty(count, dtype=np.int32)
    scores = np.empty(count, dtype=np.int32)
    depths = np.empty(count, dtype=np.int32)
    cdef int32_t[::1] pv = parents
    cdef int32_t[::1] av = actions
    cdef int32_t[::1] sv = scores
    cdef int32_t[::1] dv = depths
    for i in range(<Py_ssize_t>count):
        pv[i] = parent[i]
        av[i] = action[i]
        sv[i] = hval[i]
        dv[i] = depth[i]
    return goal_node, generated, expanded, parents, actions, scores, depths
