"""Sliding-tile puzzle (15-puzzle by default) in the position-based encoding.

Variable 0 holds the cell of the blank; variable ``t`` holds the cell of tile
``t``.  Cells are numbered row-major.  The solved state puts the blank in cell
0 and tile ``t`` in cell ``t``, i.e. the identity vector.

Move ``mv<f>-<t>`` swaps the blank (which must sit in cell ``f``) with the
tile in the adjacent cell ``t``.  On the position vector this relabels value
``f`` as ``t`` and vice versa, so moves and macros are permutations of cell
labels applied to every variable, guarded by the blank's cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from ..core import Goal, Simulator
from ..tables import ActionTable, UnchainableSequenceError

__all__ = [
    "NPuzzle",
    "PuzzleMacro",
    "parity_invariant",
    "puzzle_applicable",
    "read_puzzle",
    "scramble_puzzle",
    "summarize_effects",
    "write_puzzle",
]

BLANK = 0


@dataclass(frozen=True)
class PuzzleMacro:
    required_blank_cell: int
    permutation: np.ndarray
    primitive_seq: tuple[int, ...]

    @property
    def effect_size(self) -> int:
        return int(np.count_nonzero(self.permutation != np.arange(self.permutation.size)))

    def apply(self, state: np.ndarray) -> np.ndarray:
        if state[BLANK] != self.required_blank_cell:
            raise ValueError("blank is not at the macro's required cell")
        return self.permutation[state]


class NPuzzle:
    name = "npuzzle"

    def __init__(self, side: int = 4):
        if side < 2:
            raise ValueError("side must be at least 2")
        self.side = side
        self.n_cells = side * side
        moves = []
        for cell in range(self.n_cells):
            row, col = divmod(cell, side)
            for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
                r, c = row + dr, col + dc
                if 0 <= r < side and 0 <= c < side:
                    moves.append((cell, r * side + c))
        self.moves: tuple[tuple[int, int], ...] = tuple(moves)

    def __repr__(self) -> str:
        return f"NPuzzle(side={self.side})"

    @property
    def action_names(self) -> list[str]:
        return [f"mv{f}-{t}" for f, t in self.moves]

    def move_permutation(self, move: int) -> np.ndarray:
        f, t = self.moves[move]
        perm = np.arange(self.n_cells, dtype=np.uint8)
        perm[f], perm[t] = t, f
        return perm

    @cached_property
    def table(self) -> ActionTable:
        perms = np.stack([self.move_permutation(m) for m in range(len(self.moves))])
        maps = np.repeat(perms[:, None, :], self.n_cells, axis=1)
        pres = [((BLANK, f),) for f, _ in self.moves]
        return ActionTable(maps, pres, self.action_names)

    def simulator(self) -> Simulator:
        return Simulator(self.table, self.name)

    def solved_state(self) -> np.ndarray:
        return np.arange(self.n_cells, dtype=np.uint8)

    def default_goal(self) -> Goal:
        return Goal.from_state(self.solved_state())

    def is_valid(self, state) -> bool:
        state = np.asarray(state)
        return state.shape == (self.n_cells,) and np.array_equal(np.sort(state), np.arange(self.n_cells))

    def is_solvable(self, state) -> bool:
        return self.is_valid(state) and parity_invariant(self, state) == parity_invariant(self, self.solved_state())

    def random_state(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform draw over the solvable half of the permutations."""
        state = rng.permutation(self.n_cells).astype(np.uint8)
        if parity_invariant(self, state) != parity_invariant(self, self.solved_state()):
            state[1], state[2] = state[2], state[1]
        return state

    def pre_token(self, precondition) -> str:
        """``blank@<cell>`` for the blank-position guard, ``-`` when unguarded."""
        return "+".join(f"blank@{x}" if v == BLANK else f"v{v}={x}" for v, x in precondition) or "-"

    def macro_from_summary(self, macro: PuzzleMacro) -> tuple[np.ndarray, tuple]:
        maps = np.repeat(macro.permutation[None, :], self.n_cells, axis=0)
        return maps, ((BLANK, macro.required_blank_cell),)


def _permutation_parity(values: np.ndarray) -> int:
    seen = np.zeros(values.size, dtype=bool)
    parity = 0
    for i in range(values.size):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(values[j])
            length += 1
        parity ^= (length - 1) & 1
    return parity


def parity_invariant(puzzle: NPuzzle, state) -> int:
    """Permutation parity XOR taxicab parity of the blank; every move preserves it."""
    state = np.asarray(state)
    row, col = divmod(int(state[BLANK]), puzzle.side)
    return _permutation_parity(state) ^ ((row + col) & 1)


def puzzle_applicable(sim: Simulator, state) -> list[int]:
    """Moves and macros whose required blank cell matches the state."""
    return sim.applicable(np.asarray(state, dtype=np.uint8))


def summarize_effects(puzzle: NPuzzle, seq) -> PuzzleMacro:
    """Compose a chain of moves into one cell permutation plus its blank precondition."""
    seq = tuple(int(a) for a in seq)
    if not seq:
        raise ValueError("empty move sequence")
    perm = np.arange(puzzle.n_cells, dtype=np.uint8)
    blank = puzzle.moves[seq[0]][0]
    for pos, move in enumerate(seq):
        f, t = puzzle.moves[move]
        if f != blank:
            raise UnchainableSequenceError(pos, f"mv{f}-{t} needs the blank at {f}, it is at {blank}")
        perm = puzzle.move_permutation(move)[perm]
        blank = t
    return PuzzleMacro(puzzle.moves[seq[0]][0], perm, seq)


def scramble_puzzle(seed: int, puzzle: NPuzzle | None = None, steps: int | None = None) -> np.ndarray:
    """Random walk from the solved state of 225 or 226 moves (chosen by ``seed``)."""
    puzzle = puzzle or NPuzzle()
    rng = np.random.default_rng(seed)
    if steps is None:
        steps = 225 + int(rng.integers(2))
    table = puzzle.table
    state = puzzle.solved_state()
    for _ in range(steps):
        options = table.applicable(state)
        state = table.apply(state, options[int(rng.integers(len(options)))])
    return state


def write_puzzle(path, state, seed: int, side: int = 4) -> None:
    Path(path).write_text(f"npuzzle {side}x{side} seed={seed}\n" + " ".join(str(int(v)) for v in state) + "\n")


def read_puzzle(path) -> tuple[np.ndarray, int]:
    lines = Path(path).read_text().split("\n")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "npuzzle" or not head[2].startswith("seed="):
        raise ValueError(f"bad puzzle header: {lines[0]!r}")
    side = int(head[1].split("x")[0])
    state = np.array([int(v) for v in lines[1].split()], dtype=np.uint8)
    if not NPuzzle(side).is_valid(state):
        raise ValueError("tile positions are not a permutation of the cells")
    return state, int(head[2][5:])
