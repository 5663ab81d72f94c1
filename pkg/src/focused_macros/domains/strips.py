"""Ground STRIPS domains as black-box simulators.

Atoms become 0/1 state variables (1 = true).  Actions delete then add, so an
atom listed in both lists ends up true; the loader folds such overlaps into
the add list.  Goals are positive conjunctions.

File format::

    atoms:
      clear-a
      on-a-b
    action move-a-b:
      pre: clear-a on-a-b
      add: clear-b
      del: on-a-b
    init:
      clear-a on-a-b
    goal:
      clear-b

Lines starting with ``#`` are comments.  Atom and action names match
``[A-Za-z0-9_-]+``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from ..core import Goal, Simulator
from ..tables import ActionTable, UnchainableSequenceError

__all__ = [
    "GroundAction",
    "GroundMacroSummary",
    "GroundStripsDomain",
    "StripsParseError",
    "format_ground_strips",
    "generate_hanoi",
    "parse_ground_strips",
    "strips_step",
    "summarize_ground_macro",
]

TOKEN = re.compile(r"^[A-Za-z0-9_-]+$")


class StripsParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class GroundAction:
    name: str
    pre: frozenset[str]
    add: frozenset[str]
    delete: frozenset[str]


@dataclass(frozen=True)
class GroundMacroSummary:
    pre: frozenset[str]
    add: frozenset[str]
    delete: frozenset[str]

    def applicable(self, true_atoms: frozenset[str]) -> bool:
        return self.pre <= true_atoms

    def apply(self, true_atoms: frozenset[str]) -> frozenset[str]:
        return (frozenset(true_atoms) - self.delete) | self.add


@dataclass(eq=False)
class GroundStripsDomain:
    atoms: list[str]
    actions: list[GroundAction]
    init: frozenset[str]
    goal: frozenset[str]
    name: str = "strips"
    sampler: Callable[[np.random.Generator], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.index = {a: i for i, a in enumerate(self.atoms)}
        if len(self.index) != len(self.atoms):
            raise ValueError("duplicate atom names")
        for atoms in [self.init, self.goal] + [a.pre | a.add | a.delete for a in self.actions]:
            missing = set(atoms) - self.index.keys()
            if missing:
                raise ValueError(f"undeclared atoms: {sorted(missing)}")

    @property
    def action_names(self) -> list[str]:
        return [a.name for a in self.actions]

    @cached_property
    def table(self) -> ActionTable:
        n = len(self.atoms)
        maps = np.tile(np.array([0, 1], dtype=np.uint8), (len(self.actions), n, 1))
        pres = []
        for k, act in enumerate(self.actions):
            for atom in act.delete:
                maps[k, self.index[atom]] = 0
            for atom in act.add:
                maps[k, self.index[atom]] = 1
            pres.append(tuple(sorted((self.index[p], 1) for p in act.pre)))
        return ActionTable(maps, pres, self.action_names)

    def simulator(self) -> Simulator:
        return Simulator(self.table, self.name)

    def state(self, true_atoms) -> np.ndarray:
        out = np.zeros(len(self.atoms), dtype=np.uint8)
        for atom in true_atoms:
            out[self.index[atom]] = 1
        return out

    def true_atoms(self, state) -> frozenset[str]:
        return frozenset(self.atoms[i] for i in np.flatnonzero(np.asarray(state)))

    def initial_state(self) -> np.ndarray:
        return self.state(self.init)

    def default_goal(self) -> Goal:
        return self.goal_for(self.goal)

    def goal_for(self, atoms) -> Goal:
        return Goal(tuple((self.index[a], 1) for a in atoms))

    def random_state(self, rng: np.random.Generator) -> np.ndarray:
        """Domain sampler if one was supplied, else a random walk from ``init``."""
        if self.sampler is not None:
            return self.sampler(rng)
        table = self.table
        state = self.initial_state()
        for _ in range(int(rng.integers(0, 4 * len(self.atoms) + 1))):
            options = table.applicable(state)
            if not options:
                break
            state = table.apply(state, options[int(rng.integers(len(options)))])
        return state

    def summary_from_table(self, effect_map: np.ndarray, precondition) -> GroundMacroSummary:
        pre = {var for var, _ in precondition}
        add, delete = set(), set()
        for i, row in enumerate(effect_map):
            if i in pre:
                if row[1] == 0:
                    delete.add(self.atoms[i])
            elif row[0] == 1 and row[1] == 1:
                add.add(self.atoms[i])
            elif row[0] == 0 and row[1] == 0:
                delete.add(self.atoms[i])
        return GroundMacroSummary(
            frozenset(self.atoms[i] for i in pre), frozenset(add), frozenset(delete)
        )

    def pre_token(self, precondition) -> str:
        return "+".join(self.atoms[var] for var, _ in precondition) or "-"


def strips_step(domain: GroundStripsDomain, state, action: int) -> np.ndarray:
    act = domain.actions[action]
    true = domain.true_atoms(state)
    if not act.pre <= true:
        raise ValueError(f"{act.name} is not applicable")
    return domain.state((true - act.delete) | act.add)


def summarize_ground_macro(domain: GroundStripsDomain, seq: Sequence[int]) -> GroundMacroSummary:
    """Net precondition and effects of a chain of ground actions.

    Preconditions already produced by earlier steps are not required of the
    start state.  An add of an atom the macro also requires is dropped, since
    that atom is true on entry anyway.  Deletes always stay: without negative
    preconditions the start value of a deleted atom is unknown.
    """
    pre: set[str] = set()
    add: set[str] = set()
    delete: set[str] = set()
    for pos, k in enumerate(seq):
        act = domain.actions[k]
        for atom in act.pre:
            if atom in add:
                continue
            if atom in delete:
                raise UnchainableSequenceError(pos, f"{act.name} needs {atom}, deleted earlier")
            pre.add(atom)
        add -= act.delete
        delete |= act.delete
        delete -= act.add
        add |= act.add
    add -= pre
    return GroundMacroSummary(frozenset(pre), frozenset(add), frozenset(delete))


def _atoms_on_line(tokens, line_no, known):
    for tok in tokens:
        if not TOKEN.match(tok):
            raise StripsParseError(line_no, f"bad token {tok!r}")
        if known is not None and tok not in known:
            raise StripsParseError(line_no, f"undeclared atom {tok!r}")
    return tokens


def parse_ground_strips(text: str, name: str = "strips") -> GroundStripsDomain:
    atoms: list[str] = []
    known: set[str] = set()
    actions: list[GroundAction] = []
    init: set[str] = set()
    goal: set[str] = set()
    section = None
    current = None

    def close_action():
        nonlocal current
        if current is not None:
            act_name, parts, line_no = current
            add = frozenset(parts["add"])
            delete = frozenset(parts["del"]) - add
            actions.append(GroundAction(act_name, frozenset(parts["pre"]), add, delete))
            current = None

    names_seen: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        body = line.strip()
        if not indented:
            close_action()
            if body in ("atoms:", "init:", "goal:"):
                section = body[:-1]
            elif body.startswith("action ") and body.endswith(":"):
                act_name = body[len("action ") : -1].strip()
                if not TOKEN.match(act_name):
                    raise StripsParseError(line_no, f"bad action name {act_name!r}")
                if act_name in names_seen:
                    raise StripsParseError(line_no, f"duplicate action {act_name!r}")
                names_seen.add(act_name)
                section = "action"
                current = (act_name, {"pre": [], "add": [], "del": []}, line_no)
            else:
                raise StripsParseError(line_no, f"unknown section header {body!r}")
            continue
        if section is None:
            raise StripsParseError(line_no, "indented line outside any section")
        if section == "atoms":
            for atom in _atoms_on_line(body.split(), line_no, None):
                if atom in known:
                    raise StripsParseError(line_no, f"duplicate atom {atom!r}")
                atoms.append(atom)
                known.add(atom)
        elif section == "action":
            key, _, rest = body.partition(":")
            if key not in ("pre", "add", "del") or not _:
                raise StripsParseError(line_no, f"expected pre:, add: or del:, got {body!r}")
            current[1][key] += _atoms_on_line(rest.split(), line_no, known)
        else:
            target = init if section == "init" else goal
            target.update(_atoms_on_line(body.split(), line_no, known))
    close_action()
    return GroundStripsDomain(atoms, actions, frozenset(init), frozenset(goal), name)


def format_ground_strips(domain: GroundStripsDomain) -> str:
    lines = ["atoms:"] + [f"  {a}" for a in domain.atoms]
    order = domain.index.__getitem__
    for act in domain.actions:
        lines.append(f"action {act.name}:")
        for key, atoms in (("pre", act.pre), ("add", act.add), ("del", act.delete)):
            lines.append(f"  {key}: " + " ".join(sorted(atoms, key=order)) if atoms else f"  {key}:")
    lines.append("init:")
    lines.append("  " + " ".join(sorted(domain.init, key=order)))
    lines.append("goal:")
    lines.append("  " + " ".join(sorted(domain.goal, key=order)))
    return "\n".join(lines) + "\n"


def _hanoi_atoms_for(placement, disks, pegs):
    """True atoms of a legal placement: ``placement[d]`` is the peg index of disk d."""
    true = set()
    for p, peg in enumerate(pegs):
        stack = [d for d in reversed(range(len(disks))) if placement[d] == p]  # bottom first
        below = peg
        for d in stack:
            true.add(f"on-{disks[d]}-{below}")
            below = disks[d]
        true.add(f"clear-{below}")
    for i, d in enumerate(disks):
        for e in disks[i + 1 :]:
            true.add(f"smaller-{d}-{e}")
        for peg in pegs:
            true.add(f"smaller-{d}-{peg}")
    return true


def generate_hanoi(n_disks: int) -> GroundStripsDomain:
    """Three-peg Tower of Hanoi; ``d1`` is the smallest disk, all disks start on ``p1``.

    Goal: the full tower on ``p3``.
    """
    if n_disks < 1:
        raise ValueError("need at least one disk")
    disks = [f"d{i}" for i in range(1, n_disks + 1)]
    pegs = ["p1", "p2", "p3"]
    atoms = []
    for i, d in enumerate(disks):
        for below in pegs + disks[i + 1 :]:
            atoms.append(f"on-{d}-{below}")
    atoms += [f"clear-{x}" for x in disks + pegs]
    for i, d in enumerate(disks):
        atoms += [f"smaller-{d}-{x}" for x in disks[i + 1 :] + pegs]
    actions = []
    for i, d in enumerate(disks):
        supports = pegs + disks[i + 1 :]
        for src in supports:
            for dst in supports:
                if src == dst:
                    continue
                actions.append(
                    GroundAction(
                        f"move-{d}-{src}-{dst}",
                        frozenset({f"on-{d}-{src}", f"clear-{d}", f"clear-{dst}", f"smaller-{d}-{dst}"}),
                        frozenset({f"on-{d}-{dst}", f"clear-{src}"}),
                        frozenset({f"on-{d}-{src}", f"clear-{dst}"}),
                    )
                )
    init = frozenset(_hanoi_atoms_for([0] * n_disks, disks, pegs))
    goal_atoms = {f"on-{disks[-1]}-p3"} | {f"on-{disks[i]}-{disks[i + 1]}" for i in range(n_disks - 1)}
    domain = GroundStripsDomain(atoms, actions, init, frozenset(goal_atoms), f"hanoi{n_disks}")

    def sampler(rng: np.random.Generator) -> np.ndarray:
        return domain.state(_hanoi_atoms_for(rng.integers(0, 3, size=n_disks).tolist(), disks, pegs))

    domain.sampler = sampler
    return domain
