"""3x3x3 Rubik's cube with a fixed orientation and 48 sticker-position variables.

Stickers are indexed face by face in the order U, D, L, R, F, B; within a
face row-major as seen from outside the cube, skipping the centre, giving 8
stickers per face.  The state stores, for every sticker, the index of the
slot it currently occupies; the solved state is the identity vector.

Geometry: x points from L to R, y from D to U, z from B to F.  Every move is
derived from a 3-D rotation of the affected layer, so whole-cube rotations
and mirror images can be checked against the same model.  The in-face axes
that define row-major order are listed in ``_FACE_AXES``.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import numpy as np

from ..core import Goal, Simulator
from ..tables import ActionTable

__all__ = [
    "EXPERT_MACROS",
    "MOVE_TOKENS",
    "RubiksCube",
    "compose_permutations",
    "cube_step",
    "expand_expert_variants",
    "expert_catalog",
    "format_moves",
    "parse_moves",
    "read_scramble",
    "scramble_cube",
    "write_scramble",
]

FACES = "UDLRFB"
NORMALS = {
    "U": (0, 1, 0),
    "D": (0, -1, 0),
    "L": (-1, 0, 0),
    "R": (1, 0, 0),
    "F": (0, 0, 1),
    "B": (0, 0, -1),
}
_FACE_AXES = {
    "U": ((0, 0, -1), (1, 0, 0)),
    "D": ((0, 0, 1), (1, 0, 0)),
    "F": ((0, -1, 0), (1, 0, 0)),
    "B": ((0, -1, 0), (-1, 0, 0)),
    "L": ((0, -1, 0), (0, 0, 1)),
    "R": ((0, -1, 0), (0, 0, -1)),
}
MOVE_TOKENS = ("U", "U'", "D", "D'", "L", "L'", "R", "R'", "F", "F'", "B", "B'")

EXPERT_MACROS = {
    "swap-three-corners": "L' B L F' L' B' L F",
    "swap-three-middle-edges": "L' R U U R' L F F",
    "swap-three-face-edges": "R R U R U R' U' R' U' R' U R'",
    "rotate-two-corners": "R B' R' U' B' U F U' B U R B R' F'",
    "r-permutation": "F F R' F' U' F' U F R F' U U F U U F' U'",
    "flip-two-edges": "L R' F L R' D L R' B L R' U U L R' F L R' D L R' B L R'",
}


def _build_slots():
    """Return ``[(position, normal)]`` for the 48 non-centre sticker slots."""
    slots = []
    for face in FACES:
        n = np.array(NORMALS[face])
        row_axis, col_axis = (np.array(v) for v in _FACE_AXES[face])
        for r in (-1, 0, 1):
            for c in (-1, 0, 1):
                if r == 0 and c == 0:
                    continue
                pos = n + r * row_axis + c * col_axis
                slots.append((tuple(int(v) for v in pos), tuple(int(v) for v in n)))
    return slots


_SLOTS = _build_slots()
_SLOT_INDEX = {slot: i for i, slot in enumerate(_SLOTS)}


def _rotation_matrix(axis: tuple[int, int, int], quarter_turns: int) -> np.ndarray:
    """Integer matrix rotating by ``quarter_turns * 90`` degrees about ``axis`` (right-hand rule)."""
    ax = np.array(axis)
    k = np.array([[0, -ax[2], ax[1]], [ax[2], 0, -ax[0]], [-ax[1], ax[0], 0]])
    quarter = np.outer(ax, ax) + k  # Rodrigues at 90 degrees for a unit axis
    out = np.eye(3, dtype=int)
    for _ in range(quarter_turns % 4):
        out = quarter @ out
    return out


def _slot_permutation(matrix: np.ndarray, layer=None) -> np.ndarray:
    """Slot permutation induced by an orthogonal ``matrix``.

    ``layer=(axis, sign)`` restricts the motion to slots whose position has
    that coordinate sign on the axis (a face turn); otherwise the whole cube moves.
    """
    perm = np.empty(len(_SLOTS), dtype=np.uint8)
    for i, (pos, normal) in enumerate(_SLOTS):
        if layer is not None and pos[layer[0]] != layer[1]:
            perm[i] = i
            continue
        p = tuple(int(v) for v in matrix @ np.array(pos))
        q = tuple(int(v) for v in matrix @ np.array(normal))
        perm[i] = _SLOT_INDEX[(p, q)]
    return perm


def _face_turn(face: str, clockwise: bool) -> np.ndarray:
    normal = NORMALS[face]
    axis = int(np.flatnonzero(normal)[0])
    # clockwise seen from outside = negative rotation about the outward normal
    matrix = _rotation_matrix(normal, 3 if clockwise else 1)
    return _slot_permutation(matrix, layer=(axis, normal[axis]))


def _token(face: str, clockwise: bool) -> str:
    return face if clockwise else face + "'"


class RubiksCube:
    name = "cube"
    n_vars = 48

    def __init__(self):
        self.move_perms = np.stack([_face_turn(tok[0], not tok.endswith("'")) for tok in MOVE_TOKENS])
        maps = np.repeat(self.move_perms[:, None, :], self.n_vars, axis=1)
        self.table = ActionTable(maps, [()] * len(MOVE_TOKENS), MOVE_TOKENS)

    def __repr__(self) -> str:
        return "RubiksCube()"

    @property
    def action_names(self) -> tuple[str, ...]:
        return MOVE_TOKENS

    def simulator(self) -> Simulator:
        return Simulator(self.table, self.name)

    def solved_state(self) -> np.ndarray:
        return np.arange(self.n_vars, dtype=np.uint8)

    def default_goal(self) -> Goal:
        return Goal.from_state(self.solved_state())

    def random_state(self, rng: np.random.Generator) -> np.ndarray:
        return scramble_cube(60, int(rng.integers(2**63)), self)

    def macro_from_permutation(self, perm: np.ndarray) -> tuple[np.ndarray, tuple]:
        return np.repeat(np.asarray(perm, dtype=np.uint8)[None, :], self.n_vars, axis=0), ()


@lru_cache(maxsize=1)
def _default_cube() -> RubiksCube:
    return RubiksCube()


def parse_moves(text: str) -> list[int]:
    """Tokens in standard notation; ``X2`` expands to two quarter-turns."""
    out = []
    for tok in text.replace(",", " ").split():
        if tok.endswith("2") and tok[:-1] in MOVE_TOKENS:
            out += [MOVE_TOKENS.index(tok[:-1])] * 2
        elif tok in MOVE_TOKENS:
            out.append(MOVE_TOKENS.index(tok))
        else:
            raise ValueError(f"unknown cube move {tok!r}")
    return out


def format_moves(seq) -> str:
    return " ".join(MOVE_TOKENS[a] for a in seq)


def cube_step(state: np.ndarray, move: int | np.ndarray, cube: RubiksCube | None = None) -> np.ndarray:
    """Apply a move index or any 48-permutation (e.g. a composed macro)."""
    cube = cube or _default_cube()
    perm = cube.move_perms[move] if np.isscalar(move) else np.asarray(move)
    return perm[np.asarray(state)]


def compose_permutations(seq, cube: RubiksCube | None = None) -> np.ndarray:
    """Single permutation equal to applying ``seq`` (move indices or permutations) in order."""
    cube = cube or _default_cube()
    total = np.arange(48, dtype=np.uint8)
    for item in seq:
        perm = cube.move_perms[item] if np.isscalar(item) else np.asarray(item, dtype=np.uint8)
        total = perm[total]
    return total


def inverse_sequence(seq) -> list[int]:
    """Reverse order, invert each quarter-turn."""
    return [a ^ 1 for a in reversed(seq)]


@lru_cache(maxsize=1)
def orientations() -> tuple[np.ndarray, ...]:
    """The 24 proper rotations of the cube, identity first, in a fixed order."""
    gens = [_rotation_matrix((1, 0, 0), 1), _rotation_matrix((0, 1, 0), 1)]
    found = [np.eye(3, dtype=int)]
    keys = {found[0].tobytes()}
    frontier = list(found)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                r = g @ m
                if r.tobytes() not in keys:
                    keys.add(r.tobytes())
                    found.append(r)
                    nxt.append(r)
        frontier = nxt
    assert len(found) == 24
    return tuple(found)


MIRROR = np.diag([-1, 1, 1])


def _face_of(normal) -> str:
    normal = tuple(int(v) for v in normal)
    return next(f for f, n in NORMALS.items() if n == normal)


def relabel_move(move: int, matrix: np.ndarray) -> int:
    """Move that performs ``move`` on a cube transformed by ``matrix``.

    Rotations keep the turning direction; reflections reverse it.
    """
    tok = MOVE_TOKENS[move]
    face, clockwise = tok[0], not tok.endswith("'")
    new_face = _face_of(matrix @ np.array(NORMALS[face]))
    if round(np.linalg.det(matrix)) < 0:
        clockwise = not clockwise
    return MOVE_TOKENS.index(_token(new_face, clockwise))


def whole_cube_permutation(matrix: np.ndarray) -> np.ndarray:
    """Slot permutation of a whole-cube rotation or reflection."""
    return _slot_permutation(np.asarray(matrix))


def expand_expert_variants(base) -> list[list[int]]:
    """All 96 variants: 24 orientations x {plain, mirrored} x {forward, inverse}.

    Variant 0 is the base sequence.  Identical permutations are kept.
    """
    base = parse_moves(base) if isinstance(base, str) else list(base)
    out = []
    for rot in orientations():
        for mirrored in (False, True):
            matrix = rot @ MIRROR if mirrored else rot
            seq = [relabel_move(a, matrix) for a in base]
            out.append(seq)
            out.append(inverse_sequence(seq))
    return out


def expert_catalog() -> list[tuple[str, int, list[int]]]:
    """``(base name, variant index, moves)`` for all 576 expert macros."""
    return [
        (name, i, seq)
        for name, text in EXPERT_MACROS.items()
        for i, seq in enumerate(expand_expert_variants(text))
    ]


def scramble_cube(steps: int, seed: int, cube: RubiksCube | None = None) -> np.ndarray:
    """``steps`` uniformly random quarter-turns from the solved state."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    cube = cube or _default_cube()
    return cube_step(cube.solved_state(), compose_permutations(scramble_moves(steps, seed), cube), cube)


def scramble_moves(steps: int, seed: int) -> list[int]:
    rng = np.random.default_rng(seed)
    return [int(a) for a in rng.integers(0, len(MOVE_TOKENS), size=steps)]


def write_scramble(path, steps: int, seed: int) -> None:
    Path(path).write_text(f"cube seed={seed} steps={steps}\n{format_moves(scramble_moves(steps, seed))}\n")


def read_scramble(path) -> tuple[np.ndarray, int, int]:
    lines = Path(path).read_text().split("\n")
    head = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    moves = parse_moves(lines[1]) if len(lines) > 1 else []
    if len(moves) != int(head["steps"]):
        raise ValueError("move count does not match header")
    return compose_permutations(moves)[np.arange(48)], int(head["seed"]), int(head["steps"])
