"""Focused macro learning, random-macro baselines and macro libraries.

A macro is a sequence of primitive actions collapsed into one value map plus
the precondition its first steps impose (``ActionTable.compose``).  Two
macros are duplicates when their precondition and normalized value map agree,
which is a state-independent notion of "same net effect".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .core import Simulator
from .search import trace_path
from .tables import ActionTable, Literal, effect_signature

__all__ = [
    "MAX_RESTART_ATTEMPTS",
    "LibraryFormatError",
    "Macro",
    "MacroConfigError",
    "MacroLibrary",
    "attach_macros",
    "build_macro",
    "dedup_by_net_effect",
    "format_precondition",
    "generate_random_macros",
    "learn_focused_macros",
    "read_library",
    "write_library",
]

MAX_RESTART_ATTEMPTS = 10_000


class MacroConfigError(ValueError):
    pass


class LibraryFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Macro:
    primitive_seq: tuple[int, ...]
    effect_map: np.ndarray = field(repr=False)
    precondition: tuple[Literal, ...]
    effect_size: int

    @property
    def length(self) -> int:
        return len(self.primitive_seq)

    @property
    def signature(self) -> tuple:
        return effect_signature(self.effect_map, self.precondition)


@dataclass
class MacroLibrary:
    macros: list[Macro]
    provenance: list[dict]
    params: dict
    domain: str = ""
    seed: int = 0
    stopped_at: int | None = None  # repetition whose restart sampling failed

    def __len__(self) -> int:
        return len(self.macros)

    def lengths(self) -> list[int]:
        return [m.length for m in self.macros]

    def effect_sizes(self) -> list[int]:
        return [m.effect_size for m in self.macros]


def build_macro(table: ActionTable, seq: Sequence[int], effect_size: int) -> Macro:
    effect_map, pre = table.compose(seq)
    return Macro(tuple(int(a) for a in seq), effect_map, pre, int(effect_size))


def _restart(sim, library_pres, sampler, rng):
    """A sampled state on which no saved macro applies, or None."""
    if any(len(pre) == 0 for pre in library_pres):
        return None
    for _ in range(MAX_RESTART_ATTEMPTS):
        state = np.asarray(sampler(rng), dtype=np.uint8)
        if not any(all(state[v] == x for v, x in pre) for pre in library_pres):
            return state
    return None


def learn_focused_macros(
    sim: Simulator,
    s0: np.ndarray,
    N_M: int,
    R_M: int,
    B_M: int,
    restart_sampler: Callable[[np.random.Generator], np.ndarray] | None = None,
    seed: int = 0,
    backend: str | None = None,
) -> MacroLibrary:
    """Learn up to ``N_M`` macros whose net effect from their start state is small.

    Each of the ``R_M`` repetitions runs a best-first search from the current
    start with ``B_M // R_M`` simulator queries, ordered by path length plus
    the number of variables changed since the start (unbounded when none
    changed), equal scores popping newest first.  Among all generated
    states, the ``N_M // R_M`` with the fewest changed variables (then
    shorter, then earlier) are kept as macros, the
    last repetition also receiving the remainder of ``N_M``.  Macros whose
    net effect repeats a primitive action or a saved macro are dropped.  The
    next start is a sampled state on which no saved macro applies; if no such
    state is found, learning stops early.
    """
    if R_M < 1:
        raise MacroConfigError("R_M must be at least 1")
    if N_M < 0:
        raise MacroConfigError("N_M must be non-negative")
    params = {"N_M": N_M, "R_M": R_M, "B_M": B_M}
    library = MacroLibrary([], [], params, sim.name, seed)
    if N_M == 0:
        return library
    if B_M < R_M:
        raise MacroConfigError(f"B_M={B_M} leaves no budget for each of R_M={R_M} repetitions")

    table = sim.table
    rng = np.random.default_rng(seed)
    seen = {table.signature(a) for a in range(table.n_actions)}
    per_rep_budget = B_M // R_M
    state = np.asarray(s0, dtype=np.uint8)
    for rep in range(R_M):
        capacity = N_M // R_M + (N_M % R_M if rep == R_M - 1 else 0)
        _, generated, _, parents, actions, scores, depths = kernels.run_search(
            table, state, budget=per_rep_budget, mode=kernels.FOCUS, origin=state, lifo=True, backend=backend
        )
        sim.record_queries(generated)
        nodes = np.flatnonzero(scores > 0)
        order = np.lexsort((nodes, depths[nodes], scores[nodes]))
        for node in nodes[order][:capacity]:
            macro = build_macro(table, trace_path(parents, actions, int(node)), int(scores[node]))
            sig = macro.signature
            if sig in seen:
                continue
            seen.add(sig)
            library.macros.append(macro)
            library.provenance.append({"seed": seed, "repetition": rep, "h": macro.effect_size})
        if rep == R_M - 1:
            break
        if restart_sampler is None:
            library.stopped_at = rep + 1
            break
        nxt = _restart(sim, [m.precondition for m in library.macros], restart_sampler, rng)
        if nxt is None:
            library.stopped_at = rep + 1
            break
        state = nxt
    return library


def generate_random_macros(
    sim: Simulator,
    s0: np.ndarray,
    length_schedule: Sequence[int],
    count: int | None = None,
    seed: int = 0,
    start_sampler: Callable[[np.random.Generator], np.ndarray] | None = None,
) -> MacroLibrary:
    """Random walks of the scheduled lengths, choosing uniformly among applicable actions.

    Walks start at ``s0``, or at a fresh ``start_sampler`` draw when one is
    given.  The schedule is cycled when ``count`` exceeds its length.  A walk
    that reaches a dead end is redrawn.  Duplicates are kept.  Walk steps go
    through the simulator and are counted as queries.
    """
    lengths = list(length_schedule)
    if count is None:
        count = len(lengths)
    if count and not lengths:
        raise MacroConfigError("empty length schedule")
    if any(k < 1 for k in lengths):
        raise MacroConfigError("macro lengths must be at least 1")
    rng = np.random.default_rng(seed)
    table = sim.table
    library = MacroLibrary([], [], {"count": count}, sim.name, seed)
    for i in range(count):
        length = lengths[i % len(lengths)]
        for _ in range(MAX_RESTART_ATTEMPTS):
            start = np.asarray(start_sampler(rng) if start_sampler else s0, dtype=np.uint8)
            state, seq = start, []
            while len(seq) < length:
                options = table.applicable(state)
                if not options:
                    break
                action = options[int(rng.integers(len(options)))]
                state = sim.step(state, action)
                seq.append(action)
            if len(seq) == length:
                break
        else:
            raise RuntimeError(f"no walk of length {length} found")
        macro = build_macro(table, seq, int(np.count_nonzero(state != start)))
        library.macros.append(macro)
        library.provenance.append({"seed": seed, "repetition": 0, "h": macro.effect_size})
    return library


def dedup_by_net_effect(candidates: Sequence[Macro]) -> list[Macro]:
    """Shortest macro per net-effect signature, ties kept in input order."""
    out, seen = [], set()
    for macro in sorted(candidates, key=lambda m: m.length):
        sig = macro.signature
        if sig not in seen:
            seen.add(sig)
            out.append(macro)
    return out


def attach_macros(sim: Simulator, library: MacroLibrary | Sequence[Macro]) -> Simulator:
    """New simulator whose action table is the primitives followed by the macros.

    Each macro is recomposed from its primitive sequence and must reproduce
    its stored map and precondition.
    """
    macros = library.macros if isinstance(library, MacroLibrary) else list(library)
    base = sim.table
    for i, macro in enumerate(macros):
        if any(not 0 <= a < sim.n_primitive for a in macro.primitive_seq):
            raise ValueError(f"macro {i} uses an action outside the primitive set")
        effect_map, pre = base.compose(macro.primitive_seq)
        if pre != macro.precondition or not np.array_equal(effect_map, macro.effect_map):
            raise ValueError(f"macro {i} does not match its primitive sequence")
    if not macros:
        return Simulator(base, sim.name, sim.n_primitive)
    table = base.extend(
        np.stack([m.effect_map for m in macros]),
        [m.precondition for m in macros],
        [f"macro{i}" for i in range(len(macros))],
        [m.length for m in macros],
    )
    return Simulator(table, sim.name, sim.n_primitive)


def format_precondition(domain, precondition: Sequence[Literal]) -> str:
    """Domain token for a precondition (``domain.pre_token`` if defined), ``-`` when empty."""
    if hasattr(domain, "pre_token"):
        return domain.pre_token(precondition)
    return "+".join(f"v{v}={x}" for v, x in precondition) or "-"


def write_library(path, library: MacroLibrary, domain, sim: Simulator) -> None:
    p = library.params
    lines = [
        f"macros v1 domain={library.domain or sim.name} N_M={p.get('N_M', len(library))} "
        f"R_M={p.get('R_M', 0)} B_M={p.get('B_M', 0)} seed={library.seed}"
    ]
    names = sim.action_names
    for i, m in enumerate(library.macros):
        seq = ",".join(names[a] for a in m.primitive_seq)
        lines.append(
            f"{i} len={m.length} seq={seq} effect_size={m.effect_size} "
            f"pre={format_precondition(domain, m.precondition)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def _fields(tokens, line_no):
    out = {}
    for tok in tokens:
        key, eq, value = tok.partition("=")
        if not eq:
            raise LibraryFormatError(f"line {line_no}: expected key=value, got {tok!r}")
        out[key] = value
    return out


def read_library(path, domain, sim: Simulator) -> MacroLibrary:
    """Load a library written by ``write_library``, recomposing every macro."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("macros v1 "):
        raise LibraryFormatError("line 1: missing 'macros v1' header")
    head = _fields(lines[0].split()[2:], 1)
    try:
        params = {k: int(head[k]) for k in ("N_M", "R_M", "B_M")}
        seed = int(head["seed"])
    except (KeyError, ValueError) as exc:
        raise LibraryFormatError(f"line 1: bad header field ({exc})") from None
    if head.get("domain") != sim.name:
        raise LibraryFormatError(f"line 1: library is for domain {head.get('domain')!r}, not {sim.name!r}")
    index = {name: a for a, name in enumerate(sim.action_names[: sim.n_primitive])}
    library = MacroLibrary([], [], params, sim.name, seed)
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if int(parts[0]) != len(library.macros):
            raise LibraryFormatError(f"line {line_no}: macro ids must count up from 0")
        f = _fields(parts[1:], line_no)
        try:
            seq = [index[tok] for tok in f["seq"].split(",")]
        except KeyError as exc:
            raise LibraryFormatError(f"line {line_no}: unknown action {exc}") from None
        if len(seq) != int(f["len"]):
            raise LibraryFormatError(f"line {line_no}: len does not match seq")
        macro = build_macro(sim.table, seq, int(f["effect_size"]))
        if format_precondition(domain, macro.precondition) != f["pre"]:
            raise LibraryFormatError(f"line {line_no}: precondition token does not match seq")
        library.macros.append(macro)
        library.provenance.append({"seed": seed, "repetition": None, "h": macro.effect_size})
    return library
