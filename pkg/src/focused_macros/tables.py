"""Tabular action model shared by every domain simulator.

Each action is stored as a per-variable value map: applying action ``a`` to
state ``s`` yields ``s'[i] = maps[a, i, s[i]]``.  Permutation puzzles,
modular dials and STRIPS add/delete lists are all expressible this way, so a
single search kernel serves all of them.  Preconditions are conjunctions of
``(variable, value)`` literals.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

Literal = tuple[int, int]


class UnchainableSequenceError(ValueError):
    """An action in a sequence cannot run after its predecessors."""

    def __init__(self, position: int, message: str):
        super().__init__(f"step {position}: {message}")
        self.position = position


class ActionTable:
    """Immutable table of value maps, preconditions, names and lengths.

    ``lengths[a]`` is the number of primitive actions that action ``a``
    stands for (1 for primitives, the sequence length for macros).
    """

    def __init__(
        self,
        maps: np.ndarray,
        preconditions: Sequence[Sequence[Literal]],
        names: Sequence[str],
        lengths: Sequence[int] | None = None,
    ):
        maps = np.ascontiguousarray(maps, dtype=np.uint8)
        if maps.ndim != 3:
            raise ValueError("maps must have shape (actions, variables, values)")
        n_actions = maps.shape[0]
        if len(preconditions) != n_actions or len(names) != n_actions:
            raise ValueError("preconditions and names must match the number of actions")
        self.maps = maps
        self.maps.setflags(write=False)
        self.preconditions: tuple[tuple[Literal, ...], ...] = tuple(
            tuple((int(v), int(x)) for v, x in pre) for pre in preconditions
        )
        self.names: tuple[str, ...] = tuple(names)
        if lengths is None:
            lengths = [1] * n_actions
        self.lengths: tuple[int, ...] = tuple(int(n) for n in lengths)

        starts = [0]
        pre_var: list[int] = []
        pre_val: list[int] = []
        for pre in self.preconditions:
            for var, val in pre:
                if not 0 <= var < self.n_vars or not 0 <= val < self.n_values:
                    raise ValueError(f"precondition literal {(var, val)} out of range")
                pre_var.append(var)
                pre_val.append(val)
            starts.append(len(pre_var))
        self.pre_start = np.asarray(starts, dtype=np.int32)
        self.pre_var = np.asarray(pre_var, dtype=np.int32)
        self.pre_val = np.asarray(pre_val, dtype=np.uint8)
        self._rows = np.arange(self.n_vars)

    @property
    def n_actions(self) -> int:
        return self.maps.shape[0]

    @property
    def n_vars(self) -> int:
        return self.maps.shape[1]

    @property
    def n_values(self) -> int:
        return self.maps.shape[2]

    def is_applicable(self, state: np.ndarray, action: int) -> bool:
        return all(state[var] == val for var, val in self.preconditions[action])

    def applicable(self, state: np.ndarray) -> list[int]:
        return [a for a in range(self.n_actions) if self.is_applicable(state, a)]

    def apply(self, state: np.ndarray, action: int) -> np.ndarray:
        return self.maps[action, self._rows, state]

    def identity_map(self) -> np.ndarray:
        return np.tile(np.arange(self.n_values, dtype=np.uint8), (self.n_vars, 1))

    def compose(self, seq: Iterable[int]) -> tuple[np.ndarray, tuple[Literal, ...]]:
        """Collapse an action sequence into one value map and precondition.

        The precondition lists, for each variable some step tests, the single
        starting value that makes the test pass.  Tests already guaranteed by
        earlier effects are dropped.
        """
        cur = self.identity_map()
        required: dict[int, int] = {}
        for pos, action in enumerate(seq):
            for var, val in self.preconditions[action]:
                if var in required:
                    if cur[var, required[var]] != val:
                        raise UnchainableSequenceError(
                            pos, f"{self.names[action]} needs var {var}={val}, contradicting earlier steps"
                        )
                    continue
                hits = np.flatnonzero(cur[var] == val)
                if hits.size == self.n_values:
                    continue
                if hits.size == 0:
                    raise UnchainableSequenceError(
                        pos, f"{self.names[action]} needs var {var}={val}, which earlier steps rule out"
                    )
                if hits.size > 1:
                    raise UnchainableSequenceError(
                        pos, f"precondition on var {var} is not a single starting value"
                    )
                required[var] = int(hits[0])
            cur = self.maps[action, self._rows[:, None], cur]
        return cur, tuple(sorted(required.items()))

    def signature(self, action: int) -> tuple:
        return effect_signature(self.maps[action], self.preconditions[action])

    def extend(
        self,
        maps: np.ndarray,
        preconditions: Sequence[Sequence[Literal]],
        names: Sequence[str],
        lengths: Sequence[int],
    ) -> "ActionTable":
        """Return a new table with extra actions appended after the existing ones."""
        if len(names) == 0:
            return self
        maps = np.asarray(maps, dtype=np.uint8).reshape(-1, self.n_vars, self.n_values)
        return ActionTable(
            np.concatenate([self.maps, maps]),
            list(self.preconditions) + list(preconditions),
            list(self.names) + list(names),
            list(self.lengths) + list(lengths),
        )


def normalized_map(effect_map: np.ndarray, precondition: Sequence[Literal]) -> np.ndarray:
    """Value map with rows of precondition variables fixed to their one live entry."""
    out = np.array(effect_map, dtype=np.uint8, copy=True)
    for var, val in precondition:
        out[var, :] = effect_map[var, val]
    return out


def effect_signature(effect_map: np.ndarray, precondition: Sequence[Literal]) -> tuple:
    """State-independent key identifying a net effect together with its precondition."""
    pre = tuple(sorted((int(v), int(x)) for v, x in precondition))
    return pre, normalized_map(effect_map, pre).tobytes()

