"""Pure-Python best-first search kernel (reference and fallback backend).

``run_search`` expands nodes in order of an integer priority, ties broken by
insertion order.  Two scoring modes exist:

* ``GREEDY`` (0): priority is the goal count against ``goal`` (entries of -1
  are unconstrained); a successor meeting the goal ends the search.
* ``FOCUS`` (1): priority is depth plus the number of variables differing
  from ``origin``, or depth plus a large constant when nothing differs.  No
  goal test; the search runs until the budget or the queue is exhausted.

Equal priorities pop in insertion order, or newest first when ``lifo`` is
set.  Every successor computed costs one unit of ``budget``, duplicates included.
Duplicate states are dropped and never re-queued.  The return value is
``(goal_node, generated, expanded, parents, actions, scores, depths)`` where
the arrays describe every unique node in insertion order and ``scores`` holds
the goal count (GREEDY) or raw difference count (FOCUS).
"""

from __future__ import annotations

import heapq

import numpy as np

GREEDY = 0
FOCUS = 1
FOCUS_INF = 1 << 30


def run_search(maps, pre_start, pre_var, pre_val, start, goal, budget, mode, origin, lifo=False):
    n_actions, n, n_values = maps.shape
    flat = maps.reshape(n_actions, n * n_values)
    offsets = np.arange(n) * n_values
    constrained = goal >= 0
    goal_vals = goal.astype(np.int64)
    pres = [
        list(zip(pre_var[pre_start[a]:pre_start[a + 1]].tolist(), pre_val[pre_start[a]:pre_start[a + 1]].tolist()))
        for a in range(n_actions)
    ]

    def score_of(state):
        if mode == GREEDY:
            return int(np.count_nonzero(constrained & (state != goal_vals)))
        return int(np.count_nonzero(state != origin))

    root = np.array(start, dtype=np.uint8)
    parents = [-1]
    actions = [-1]
    scores = [score_of(root)]
    depths = [0]
    states = [root]
    generated = 0
    expanded = 0
    if mode == GREEDY and scores[0] == 0:
        return _pack(0, generated, expanded, parents, actions, scores, depths)

    seen = {root.tobytes(): 0}
    first = scores[0] if mode == GREEDY else (FOCUS_INF if scores[0] == 0 else scores[0])
    heap = [(first, 0)]
    sign = -1 if lifo else 1
    while heap:
        _, tie = heapq.heappop(heap)
        node = sign * tie
        expanded += 1
        cur = states[node]
        cur_list = cur.tolist()
        index = offsets + cur
        for a in range(n_actions):
            if any(cur_list[var] != val for var, val in pres[a]):
                continue
            if generated >= budget:
                return _pack(-1, generated, expanded, parents, actions, scores, depths)
            generated += 1
            succ = flat[a, index]
            score = score_of(succ)
            if mode == GREEDY and score == 0:
                parents.append(node)
                actions.append(a)
                scores.append(0)
                depths.append(depths[node] + 1)
                return _pack(len(parents) - 1, generated, expanded, parents, actions, scores, depths)
            key = succ.tobytes()
            if key in seen:
                continue
            idx = len(parents)
            seen[key] = idx
            parents.append(node)
            actions.append(a)
            scores.append(score)
            depths.append(depths[node] + 1)
            states.append(succ)
            if mode == GREEDY:
                prio = score
            else:
                prio = depths[idx] + (FOCUS_INF if score == 0 else score)
            heapq.heappush(heap, (prio, sign * idx))
    return _pack(-1, generated, expanded, parents, actions, scores, depths)


def _pack(goal_node, generated, expanded, parents, actions, scores, depths):
    return (
        goal_node,
        generated,
        expanded,
        np.asarray(parents, dtype=np.int32),
        np.asarray(actions, dtype=np.int32),
        np.asarray(scores, dtype=np.int32),
        np.asarray(depths, dtype=np.int32),
    )
