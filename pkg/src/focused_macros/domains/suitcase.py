"""Suitcase Lock: N dials with M digits, actions that turn fixed subsets of dials.

Increment action ``i`` adds row ``i`` of a binary N x N matrix to the dials
(mod M); decrement action ``i`` subtracts it.  For M = 2 the two coincide and
only the increments are kept.  Generated matrices are invertible over GF(2),
so every combination is reachable from every other one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core import Goal, Simulator
from ..tables import ActionTable

__all__ = [
    "DistanceTable",
    "LockGenerationError",
    "StateSpaceTooLarge",
    "SuitcaseLock",
    "all_pairs_distances",
    "generate_lock",
    "gf2_rank",
    "lock_step",
    "read_lock",
    "write_lock",
]

MAX_DRAWS = 10_000
MAX_ENUMERATED_STATES = 1 << 20


class LockGenerationError(RuntimeError):
    pass


class StateSpaceTooLarge(ValueError):
    pass


def gf2_rank(matrix) -> int:
    """Rank over GF(2), rows packed into Python ints for XOR elimination."""
    rows = [int("".join(str(int(b) & 1) for b in row), 2) if len(row) else 0 for row in np.asarray(matrix)]
    rank = 0
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
    return rank


@dataclass(frozen=True, eq=False)
class SuitcaseLock:
    N: int
    M: int
    inc_matrix: np.ndarray
    k_bar: int
    seed: int | None = None
    _table: ActionTable | None = field(default=None, repr=False, compare=False)

    name = "suitcase"

    @property
    def n_actions(self) -> int:
        return self.N if self.M == 2 else 2 * self.N

    @property
    def action_rows(self) -> np.ndarray:
        """Per-action additive offsets, increments first then decrements."""
        inc = self.inc_matrix.astype(np.int64)
        if self.M == 2:
            return inc
        return np.concatenate([inc, (-inc) % self.M])

    @property
    def action_names(self) -> list[str]:
        names = [f"inc{i}" for i in range(self.N)]
        if self.M != 2:
            names += [f"dec{i}" for i in range(self.N)]
        return names

    @property
    def table(self) -> ActionTable:
        if self._table is None:
            values = np.arange(self.M)
            maps = (values[None, None, :] + self.action_rows[:, :, None]) % self.M
            object.__setattr__(self, "_table", ActionTable(maps, [()] * self.n_actions, self.action_names))
        return self._table

    def simulator(self) -> Simulator:
        return Simulator(self.table, self.name)

    def random_state(self, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.M, size=self.N).astype(np.uint8)

    def solved_state(self) -> np.ndarray:
        return np.zeros(self.N, dtype=np.uint8)

    def default_goal(self) -> Goal:
        return Goal.from_state(self.solved_state())

    def delta(self, seq) -> np.ndarray:
        """Net dial offset of an action sequence (mod M)."""
        rows = self.action_rows
        total = np.zeros(self.N, dtype=np.int64)
        for a in seq:
            total += rows[a]
        return total % self.M


def generate_lock(N: int, M: int, k_bar: int, seed: int | None = None) -> SuitcaseLock:
    """Draw a full-rank increment matrix whose rows average ``k_bar`` ones.

    ``k_bar == 1`` gives the identity; ``k_bar == N - 1`` gives ``1 - I`` with
    its top-left entry set.  Otherwise the matrix starts as a random
    permutation matrix and the remaining ``N * (k_bar - 1)`` ones go to
    uniformly chosen empty cells, redrawing until it has full rank over GF(2).
    Seeding every row and column with a one keeps acceptance high at small
    ``k_bar``, where uniform placement almost never yields full rank.
    """
    if N < 2 or M < 2:
        raise ValueError("need N >= 2 dials and M >= 2 digits")
    if not 1 <= k_bar <= N - 1:
        raise ValueError(f"k_bar must lie in 1..{N - 1}, got {k_bar}")
    if k_bar == 1:
        inc = np.eye(N, dtype=np.uint8)
    elif k_bar == N - 1:
        inc = 1 - np.eye(N, dtype=np.uint8)
        inc[0, 0] = 1
    else:
        rng = np.random.default_rng(seed)
        for _ in range(MAX_DRAWS):
            inc = np.zeros((N, N), dtype=np.uint8)
            inc[np.arange(N), rng.permutation(N)] = 1
            empty = np.flatnonzero(inc.ravel() == 0)
            inc.ravel()[rng.choice(empty, size=N * (k_bar - 1), replace=False)] = 1
            if gf2_rank(inc) == N:
                break
        else:
            raise LockGenerationError(f"no full-rank matrix found in {MAX_DRAWS} draws (N={N}, k_bar={k_bar})")
    return SuitcaseLock(N, M, inc, k_bar, seed)


def lock_step(lock: SuitcaseLock, state: np.ndarray, action: int) -> np.ndarray:
    if not 0 <= action < lock.n_actions:
        raise IndexError(f"action {action} out of range")
    return ((np.asarray(state, dtype=np.int64) + lock.action_rows[action]) % lock.M).astype(np.uint8)


def _encode(states: np.ndarray, M: int) -> np.ndarray:
    powers = M ** np.arange(states.shape[-1], dtype=np.int64)
    return (states.astype(np.int64) * powers).sum(axis=-1)


def _decode(codes: np.ndarray, N: int, M: int) -> np.ndarray:
    powers = M ** np.arange(N, dtype=np.int64)
    return ((np.asarray(codes, dtype=np.int64)[..., None] // powers) % M).astype(np.uint8)


class DistanceTable:
    """Exact shortest-path distances between every pair of lock states.

    Actions are translations of Z_M^N, so ``d(s, t) = d(0, t - s)`` and a
    single breadth-first search from the zero state determines every pair.
    ``from_zero[c]`` is the distance to the state with code ``c``
    (little-endian base-M digits).
    """

    def __init__(self, lock: SuitcaseLock, from_zero: np.ndarray):
        self.lock = lock
        self.from_zero = from_zero

    @property
    def n_states(self) -> int:
        return self.from_zero.size

    def distance(self, s, t) -> int:
        diff = (np.asarray(t, dtype=np.int64) - np.asarray(s, dtype=np.int64)) % self.lock.M
        return int(self.from_zero[_encode(diff, self.lock.M)])

    def states(self) -> np.ndarray:
        return _decode(np.arange(self.n_states), self.lock.N, self.lock.M)

    def matrix(self) -> np.ndarray:
        """Full ``n_states x n_states`` matrix, row = start code, column = goal code."""
        st = self.states()
        diff = (st[None, :, :].astype(np.int64) - st[:, None, :]) % self.lock.M
        return self.from_zero[_encode(diff, self.lock.M)]

    def pair_samples(self) -> tuple[np.ndarray, np.ndarray]:
        """(goal count, distance) over all ordered pairs, as one entry per state difference.

        Every difference vector occurs for exactly ``M**N`` ordered pairs, so the
        uniform multiset of pairs is the difference multiset repeated.
        """
        st = self.states()
        return np.count_nonzero(st, axis=1), self.from_zero.copy()


def bfs_distances(lock: SuitcaseLock, source: np.ndarray) -> np.ndarray:
    """Level-synchronous BFS from ``source`` over the full state space."""
    n_states = lock.M**lock.N
    if n_states > MAX_ENUMERATED_STATES:
        raise StateSpaceTooLarge(f"{n_states} states exceed the enumeration limit {MAX_ENUMERATED_STATES}")
    codes = np.arange(n_states)
    digits = _decode(codes, lock.N, lock.M).astype(np.int64)
    succ = np.stack([_encode((digits + row) % lock.M, lock.M) for row in lock.action_rows])
    dist = np.full(n_states, -1, dtype=np.int64)
    frontier = np.array([_encode(np.asarray(source), lock.M)])
    dist[frontier] = 0
    level = 0
    while frontier.size:
        level += 1
        nxt = np.unique(succ[:, frontier].ravel())
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = level
        frontier = nxt
    return dist


def all_pairs_distances(lock: SuitcaseLock) -> DistanceTable:
    return DistanceTable(lock, bfs_distances(lock, np.zeros(lock.N, dtype=np.uint8)))


def write_lock(path, lock: SuitcaseLock) -> None:
    lines = [f"suitcase N={lock.N} M={lock.M} kbar={lock.k_bar} seed={lock.seed if lock.seed is not None else -1}"]
    lines += ["".join(str(int(b)) for b in row) for row in lock.inc_matrix]
    Path(path).write_text("\n".join(lines) + "\n")


def read_lock(path) -> SuitcaseLock:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "suitcase":
        raise ValueError(f"not a suitcase lock file: {lines[0]!r}")
    fields = dict(tok.split("=", 1) for tok in head[1:])
    N, M, k_bar, seed = int(fields["N"]), int(fields["M"]), int(fields["kbar"]), int(fields["seed"])
    rows = lines[1 : 1 + N]
    if len(rows) != N or any(len(r) != N or set(r) - {"0", "1"} for r in rows):
        raise ValueError("expected N rows of N bits")
    inc = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)
    return SuitcaseLock(N, M, inc, k_bar, None if seed < 0 else seed)

