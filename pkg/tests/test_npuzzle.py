from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from focused_macros.domains.npuzzle import (
    NPuzzle,
    parity_invariant,
    puzzle_applicable,
    read_puzzle,
    scramble_puzzle,
    summarize_effects,
    write_puzzle,
)
from focused_macros.tables import UnchainableSequenceError


def random_walk(puzzle, start, length, rng):
    state, seq = start, []
    for _ in range(length):
        options = puzzle.table.applicable(state)
        a = options[int(rng.integers(len(options)))]
        seq.append(a)
        state = puzzle.table.apply(state, a)
    return state, seq


def test_action_space(puzzle):
    assert len(puzzle.moves) == 48
    counts = {len(puzzle.table.applicable(puzzle.random_state(np.random.default_rng(i)))) for i in range(200)}
    assert counts == {2, 3, 4}
    assert puzzle.action_names[0] == "mv0-1"


def test_move_changes_exactly_blank_and_one_tile(puzzle, rng):
    s = puzzle.random_state(rng)
    for a in puzzle_applicable(puzzle.simulator(), s):
        assert np.count_nonzero(puzzle.table.apply(s, a) != s) == 2


@given(st.integers(0, 2**32 - 1))
def test_moves_preserve_parity_invariant(seed):
    puzzle = NPuzzle(4)
    rng = np.random.default_rng(seed)
    start = puzzle.random_state(rng)
    end, _ = random_walk(puzzle, start, 30, rng)
    assert puzzle.is_solvable(start)
    assert parity_invariant(puzzle, start) == parity_invariant(puzzle, end)


def test_swapping_two_tiles_breaks_solvability(puzzle):
    s = puzzle.solved_state().copy()
    s[1], s[2] = s[2], s[1]
    assert puzzle.is_valid(s)
    assert not puzzle.is_solvable(s)


@given(st.integers(0, 2**32 - 1), st.integers(1, 40))
def test_summary_matches_stepwise_application(seed, length):
    puzzle = NPuzzle(4)
    rng = np.random.default_rng(seed)
    start = puzzle.random_state(rng)
    end, seq = random_walk(puzzle, start, length, rng)
    macro = summarize_effects(puzzle, seq)
    assert macro.required_blank_cell == start[0]
    assert np.array_equal(macro.apply(start), end)
    effect_map, pre = puzzle.macro_from_summary(macro)
    composed, composed_pre = puzzle.table.compose(seq)
    assert pre == composed_pre
    assert np.array_equal(effect_map, composed)


def test_summary_rejects_broken_chain(puzzle):
    seq = [puzzle.action_names.index("mv0-1"), puzzle.action_names.index("mv0-4")]
    with pytest.raises(UnchainableSequenceError):
        summarize_effects(puzzle, seq)
    with pytest.raises(ValueError):
        summarize_effects(puzzle, [])


def test_macro_guard_on_blank_cell(puzzle, rng):
    macro = summarize_effects(puzzle, [puzzle.action_names.index("mv5-6")])
    s = puzzle.solved_state()
    with pytest.raises(ValueError):
        macro.apply(s)


def test_scramble_is_seeded_and_solvable(puzzle):
    a = scramble_puzzle(4, puzzle)
    assert np.array_equal(a, scramble_puzzle(4, puzzle))
    assert puzzle.is_solvable(a)
    blanks = {int(scramble_puzzle(s, puzzle)[0]) % 2 for s in range(40)}
    assert blanks == {0, 1}  # 225 or 226 steps reach both blank-cell colours


def test_puzzle_file_round_trip(tmp_path, puzzle):
    s = scramble_puzzle(8, puzzle)
    path = tmp_path / "p.txt"
    write_puzzle(path, s, 8)
    assert path.read_text().startswith("npuzzle 4x4 seed=8\n")
    state, seed = read_puzzle(path)
    assert seed == 8 and np.array_equal(state, s)
    path.write_text("npuzzle 4x4 seed=1\n" + " ".join(["0"] * 16) + "\n")
    with pytest.raises(ValueError):
        read_puzzle(path)


def test_pre_token(puzzle):
    assert puzzle.pre_token(((0, 5),)) == "blank@5"
    assert puzzle.pre_token(()) == "-"
