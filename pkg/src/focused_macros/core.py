"""States, goals, the simulator contract, effect sizes and the goal-count heuristic.

A state is a 1-D ``numpy.uint8`` vector of finite-domain variable values.  A
goal is a conjunction of ``(variable, value)`` literals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .tables import ActionTable, Literal

__all__ = [
    "Goal",
    "InapplicableActionError",
    "Simulator",
    "apply_plan",
    "as_state",
    "goal_count",
    "macro_effect_size",
    "net_effect",
]


class InapplicableActionError(ValueError):
    """An action in a plan or sequence is not applicable where it is used."""

    def __init__(self, position: int, action: int, name: str = ""):
        label = name or str(action)
        super().__init__(f"action {label} at position {position} is not applicable")
        self.position = position
        self.action = action


def as_state(values: Iterable[int]) -> np.ndarray:
    state = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
    if state.ndim != 1:
        raise ValueError("a state is a 1-D vector")
    if state.size and (state.min() < 0 or state.max() > 255):
        raise ValueError("state values must lie in 0..255")
    return state.astype(np.uint8)


@dataclass(frozen=True)
class Goal:
    """Conjunction of ``(variable index, required value)`` literals."""

    literals: tuple[Literal, ...]

    def __post_init__(self):
        lits = tuple(sorted((int(v), int(x)) for v, x in self.literals))
        variables = [v for v, _ in lits]
        if len(set(variables)) != len(variables):
            raise ValueError("a goal may require at most one value per variable")
        if any(v < 0 for v in variables):
            raise ValueError("negative variable index in goal")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def from_state(cls, state: Sequence[int]) -> "Goal":
        """Single-state goal: one literal per variable."""
        return cls(tuple((i, int(v)) for i, v in enumerate(state)))

    def vector(self, n_vars: int) -> np.ndarray:
        """Dense form: required value per variable, -1 where unconstrained."""
        out = np.full(n_vars, -1, dtype=np.int16)
        for var, val in self.literals:
            if var >= n_vars:
                raise IndexError(f"goal variable {var} out of range for {n_vars} variables")
            out[var] = val
        return out

    def satisfied_by(self, state: np.ndarray) -> bool:
        return goal_count(state, self) == 0


def goal_count(state: np.ndarray, goal: Goal) -> int:
    """Number of goal literals that ``state`` does not satisfy."""
    n = len(state)
    missed = 0
    for var, val in goal.literals:
        if var >= n:
            raise IndexError(f"goal variable {var} out of range for state of length {n}")
        if state[var] != val:
            missed += 1
    return missed


def net_effect(s0: np.ndarray, s1: np.ndarray) -> set[int]:
    """Indices of the variables whose values differ between two states."""
    if len(s0) != len(s1):
        raise ValueError(f"state lengths differ: {len(s0)} != {len(s1)}")
    return set(np.flatnonzero(np.asarray(s0) != np.asarray(s1)).tolist())


class Simulator:
    """Black-box simulator over an ``ActionTable``.

    ``applicable`` is free; every ``step`` is one query, macros included.
    Searches that run inside the compiled kernel add their generated-state
    count through ``record_queries`` so ``queries`` always reflects the total.
    """

    def __init__(self, table: ActionTable, name: str = "", n_primitive: int | None = None):
        self.table = table
        self.name = name
        self.n_primitive = table.n_actions if n_primitive is None else n_primitive
        self.queries = 0

    def __repr__(self) -> str:
        return f"Simulator({self.name!r}, actions={self.n_actions}, queries={self.queries})"

    @property
    def n_actions(self) -> int:
        return self.table.n_actions

    @property
    def n_vars(self) -> int:
        return self.table.n_vars

    @property
    def action_names(self) -> tuple[str, ...]:
        return self.table.names

    @property
    def action_lengths(self) -> tuple[int, ...]:
        return self.table.lengths

    def applicable(self, state: np.ndarray) -> list[int]:
        return self.table.applicable(state)

    def step(self, state: np.ndarray, action: int) -> np.ndarray:
        if not self.table.is_applicable(state, action):
            raise InapplicableActionError(0, action, self.table.names[action])
        self.queries += 1
        return self.table.apply(state, action)

    def record_queries(self, count: int) -> None:
        self.queries += int(count)

    def fork(self) -> "Simulator":
        """Same action table, fresh query counter."""
        return Simulator(self.table, self.name, self.n_primitive)


def _walk(sim: Simulator, s0: np.ndarray, seq: Sequence[int], counted: bool) -> np.ndarray:
    state = np.asarray(s0, dtype=np.uint8)
    for pos, action in enumerate(seq):
        if not sim.table.is_applicable(state, action):
            raise InapplicableActionError(pos, action, sim.table.names[action])
        state = sim.step(state, action) if counted else sim.table.apply(state, action)
    return state


def macro_effect_size(sim: Simulator, s0: np.ndarray, seq: Sequence[int]) -> int:
    """Variables changed between the start and the end of ``seq`` (one query per step)."""
    return len(net_effect(s0, _walk(sim, s0, seq, counted=True)))


def apply_plan(sim: Simulator, s0: np.ndarray, plan: Sequence[int]) -> np.ndarray:
    """Final state of ``plan`` from ``s0``; a validation oracle, so no queries are counted."""
    return _walk(sim, s0, plan, counted=False)
