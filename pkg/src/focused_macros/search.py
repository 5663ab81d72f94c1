"""Budgeted best-first search.

``best_first_search`` is the generic driver: any priority function, any goal
test, every successor produced through ``Simulator.step``.
``gbfs_goal_count`` is greedy best-first search with the goal-count heuristic
and runs in the search kernel; for the same inputs both return identical
results.

Shared semantics: lowest key first, ties broken first-in-first-out; the goal
test runs when a state is generated; every generated successor costs one
budget unit even when it duplicates a state seen earlier, but duplicates are
never queued again; successors are generated in action-table order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .core import Goal, Simulator, apply_plan

__all__ = ["SearchResult", "best_first_search", "gbfs_goal_count", "trace_path"]


@dataclass
class SearchResult:
    plan: list[int]
    generated: int
    expanded: int
    solved: bool
    plan_length_primitive: int = 0
    final_state: np.ndarray | None = field(default=None, repr=False)

    def __eq__(self, other):
        if not isinstance(other, SearchResult):
            return NotImplemented
        return (self.plan, self.generated, self.expanded, self.solved, self.plan_length_primitive) == (
            other.plan,
            other.generated,
            other.expanded,
            other.solved,
            other.plan_length_primitive,
        )


def trace_path(parents: np.ndarray, actions: np.ndarray, node: int) -> list[int]:
    """Action sequence from the root to ``node`` in a parent-pointer tree."""
    path = []
    while node > 0:
        path.append(int(actions[node]))
        node = int(parents[node])
    path.reverse()
    return path


def best_first_search(
    sim: Simulator,
    start: np.ndarray,
    priority_fn: Callable[[np.ndarray, Sequence[int]], tuple],
    goal_test: Callable[[np.ndarray], bool],
    budget: int,
    on_generate: Callable[[np.ndarray, list[int]], None] | None = None,
) -> SearchResult:
    """Expand nodes by ``priority_fn(state, path)``; stop on goal, empty queue or budget.

    ``on_generate`` sees every newly generated (non-duplicate) state with its path.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    start = np.asarray(start, dtype=np.uint8)
    lengths = sim.action_lengths
    if goal_test(start):
        return SearchResult([], 0, 0, True, 0, start)

    generated = expanded = 0
    serial = 0
    seen = {start.tobytes()}
    queue = [(priority_fn(start, []), serial, start, [])]
    while queue:
        _, _, state, path = heapq.heappop(queue)
        expanded += 1
        for action in sim.applicable(state):
            if generated >= budget:
                return SearchResult([], generated, expanded, False)
            succ = sim.step(state, action)
            generated += 1
            succ_path = path + [action]
            if goal_test(succ):
                return SearchResult(
                    succ_path, generated, expanded, True, sum(lengths[a] for a in succ_path), succ
                )
            key = succ.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if on_generate is not None:
                on_generate(succ, succ_path)
            serial += 1
            heapq.heappush(queue, (priority_fn(succ, succ_path), serial, succ, succ_path))
    return SearchResult([], generated, expanded, False)


def gbfs_goal_count(
    sim: Simulator,
    start: np.ndarray,
    goal: Goal,
    budget: int,
    backend: str | None = None,
    validate: bool = True,
) -> SearchResult:
    """Greedy best-first search ordered by goal count alone.

    The generated-state count is added to ``sim.queries``.  A returned plan is
    re-checked with ``apply_plan`` unless ``validate`` is false.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    start = np.asarray(start, dtype=np.uint8)
    goal_vec = goal.vector(sim.n_vars)
    goal_node, generated, expanded, parents, actions, _, _ = kernels.run_search(
        sim.table, start, budget=budget, mode=kernels.GREEDY, goal=goal_vec, backend=backend
    )
    sim.record_queries(generated)
    if goal_node < 0:
        return SearchResult([], int(generated), int(expanded), False)
    plan = trace_path(parents, actions, int(goal_node))
    final = apply_plan(sim, start, plan)
    if validate and not goal.satisfied_by(final):
        raise AssertionError("search returned a plan that does not reach the goal")
    primitive = sum(sim.action_lengths[a] for a in plan)
    return SearchResult(plan, int(generated), int(expanded), True, primitive, final)
