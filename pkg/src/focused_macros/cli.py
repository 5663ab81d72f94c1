"""Command-line driver for the experiments.

Verbs:

``correlate``  goal count vs true distance on small Suitcase Locks
``sweep``      GBFS generated states vs effect size on Suitcase Locks
``learn``      build a macro library (focused, random or expert)
``plan``       solve a batch of instances with or without macros

Every verb accepts ``--config FILE`` with ``key=value`` lines; keys are the
option destinations (``budget=500000``, ``n_m=576``, ``n=10``).
Command-line flags override the file.  All CSV output starts with a ``#`` line naming the schema version, and is a
pure function of the arguments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .core import Goal
from .domains.cube import RubiksCube, expert_catalog, scramble_cube
from .domains.npuzzle import NPuzzle, scramble_puzzle
from .domains.strips import generate_hanoi, parse_ground_strips
from .domains.suitcase import all_pairs_distances, generate_lock
from .macros import (
    LibraryFormatError,
    MacroConfigError,
    MacroLibrary,
    attach_macros,
    build_macro,
    generate_random_macros,
    learn_focused_macros,
    read_library,
    write_library,
)
from .search import gbfs_goal_count
from .stats import pearson, spearman

__all__ = ["build_parser", "main"]

SCHEMA = "v1"
DOMAINS = ("npuzzle", "cube", "hanoi", "strips")
LEARN_DEFAULTS = {
    "npuzzle": {"n_m": 1600, "r_m": 16, "b_m": 1_000_000},
    "cube": {"n_m": 576, "r_m": 1, "b_m": 1_000_000},
    "hanoi": {"n_m": 8, "r_m": 1, "b_m": 100_000},
    "strips": {"n_m": 8, "r_m": 1, "b_m": 100_000},
}
PLAN_BUDGETS = {"npuzzle": 500_000, "cube": 2_000_000, "hanoi": 100_000, "strips": 100_000}
SWEEP_BUDGET = 500_000
CUBE_SCRAMBLE_STEPS = 60


class ConfigError(ValueError):
    pass


def parse_range(text: str) -> list[int]:
    """``"1-9"``, ``"1,3,5"`` or a mix such as ``"1-3,7"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = (int(v) for v in part.split("-", 1))
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    return out


def read_config(path) -> dict[str, str]:
    cfg = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"{path}:{line_no}: expected key=value")
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _common(p: argparse.ArgumentParser, domain_choices, default_domain) -> None:
    p.add_argument("--domain", choices=domain_choices, default=default_domain)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--config", help="key=value file supplying option defaults")
    p.add_argument("--backend", choices=kernels.backends(), default=None, help="search kernel")


def _domain_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--disks", type=int, default=7, help="Tower of Hanoi size")
    p.add_argument("--problem", help="ground STRIPS file for --domain strips")
    p.add_argument("--side", type=int, default=4, help="sliding-puzzle side length")


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser; ``parser.verbs`` maps each verb to its subparser."""
    parser = argparse.ArgumentParser(prog="focused-macros", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", help="goal count vs distance correlation per k-bar")
    _common(p, ("suitcase",), "suitcase")
    p.add_argument("--N", type=int, default=10, dest="n")
    p.add_argument("--M", type=int, default=2, dest="m")
    p.add_argument("--kbar", default=None, help="range such as 1-9 (default 1..N-1)")
    p.add_argument("--seeds", type=int, default=10, help="locks per k-bar")

    p = sub.add_parser("sweep", help="generated states vs k-bar")
    _common(p, ("suitcase",), "suitcase")
    p.add_argument("--N", type=int, default=20, dest="n")
    p.add_argument("--M", type=int, default=2, dest="m")
    p.add_argument("--kbar", default=None)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--budget", type=int, default=SWEEP_BUDGET)
    p.add_argument("--runs-out", default=None, help="optional per-run CSV")

    p = sub.add_parser("learn", help="write a macro library")
    _common(p, DOMAINS, "npuzzle")
    _domain_options(p)
    p.add_argument("--macros", choices=("focused", "random", "expert"), default="focused")
    p.add_argument("--N-M", type=int, default=None, dest="n_m")
    p.add_argument("--R-M", type=int, default=None, dest="r_m")
    p.add_argument("--B-M", type=int, default=None, dest="b_m")
    p.add_argument("--lengths-from", default=None, help="library whose macro lengths random macros copy")
    p.add_argument("--records-out", default=None, help="CSV of (length, effect size) per macro")

    p = sub.add_parser("plan", help="solve instances with GBFS and the goal count")
    _common(p, DOMAINS, "npuzzle")
    _domain_options(p)
    p.add_argument("--macros", choices=("none", "focused", "random", "expert"), default="none")
    p.add_argument("--library", default=None, help="macro library file")
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--goal", choices=("default", "random"), default="default")
    parser.verbs = dict(sub.choices)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        sub = parser.verbs[args.command]
        actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
        unknown = sorted(set(cfg) - set(actions))
        if unknown:
            raise ConfigError(f"unknown config keys for {args.command}: {unknown}")
        typed = {}
        for action in actions.values():
            if action.dest in cfg:
                value = cfg[action.dest]
                value = action.type(value) if action.type else value
                if action.choices is not None and value not in action.choices:
                    raise ConfigError(f"config {action.dest}={value!r} is not one of {list(action.choices)}")
                typed[action.dest] = value
        sub.set_defaults(**typed)
        args = parser.parse_args(argv)
    return args


# domains ------------------------------------------------------------------


def make_domain(args):
    if args.domain == "npuzzle":
        return NPuzzle(args.side)
    if args.domain == "cube":
        return RubiksCube()
    if args.domain == "hanoi":
        return generate_hanoi(args.disks)
    if args.domain == "strips":
        if not args.problem:
            raise ConfigError("--domain strips needs --problem FILE")
        return parse_ground_strips(Path(args.problem).read_text(), name="strips")
    raise ConfigError(f"unknown domain {args.domain!r}")


def draw_state(domain, rng: np.random.Generator) -> np.ndarray:
    """One problem state: scrambles for the puzzles, the domain sampler otherwise."""
    if isinstance(domain, NPuzzle):
        return scramble_puzzle(int(rng.integers(2**63)), domain)
    if isinstance(domain, RubiksCube):
        return scramble_cube(CUBE_SCRAMBLE_STEPS, int(rng.integers(2**63)), domain)
    return domain.random_state(rng)


def unique_states(domain, count: int, rng: np.random.Generator, limit: int = 100_000) -> list[np.ndarray]:
    out, seen = [], set()
    for _ in range(limit):
        if len(out) == count:
            return out
        state = draw_state(domain, rng)
        if state.tobytes() not in seen:
            seen.add(state.tobytes())
            out.append(state)
    raise RuntimeError(f"found only {len(out)} distinct states, wanted {count}")


def goal_from_state(domain, state) -> Goal:
    if hasattr(domain, "goal_for"):
        return domain.goal_for(domain.true_atoms(state))
    return Goal.from_state(state)


def expert_macros(domain) -> MacroLibrary:
    if not isinstance(domain, RubiksCube):
        raise ConfigError("expert macros exist only for the cube")
    solved = domain.solved_state()
    macros = []
    for _, _, seq in expert_catalog():
        perm = domain.table.compose(seq)[0][0]
        macros.append(build_macro(domain.table, seq, int(np.count_nonzero(perm[solved] != solved))))
    provenance = [{"seed": None, "repetition": None, "h": m.effect_size} for m in macros]
    return MacroLibrary(macros, provenance, {"N_M": len(macros), "R_M": 0, "B_M": 0}, domain.name, 0)


# output helpers -----------------------------------------------------------


def _write(path, lines) -> None:
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _kbars(args) -> list[int]:
    ks = parse_range(args.kbar) if args.kbar else list(range(1, args.n))
    bad = [k for k in ks if not 1 <= k <= args.n - 1]
    if bad:
        raise ConfigError(f"k-bar values {bad} outside 1..{args.n - 1}")
    return ks


# commands -----------------------------------------------------------------


def correlation_row(N: int, M: int, k_bar: int, seeds: int, seed: int) -> tuple[float, float, int]:
    """Pooled correlation between goal count and distance over ``seeds`` locks.

    Each lock contributes every ordered (start, goal) pair once.
    """
    hs, ds = [], []
    for i in range(seeds):
        h, d = all_pairs_distances(generate_lock(N, M, k_bar, seed + i)).pair_samples()
        hs.append(h)
        ds.append(d)
    h = np.concatenate(hs)
    d = np.concatenate(ds)
    return pearson(h, d), spearman(h, d), seeds * (M**N) ** 2


def cmd_correlate(args) -> int:
    if args.seeds < 1:
        raise ConfigError("--seeds must be positive")
    lines = [
        f"# focused-macros correlate {SCHEMA} N={args.n} M={args.m} seeds={args.seeds} seed={args.seed}",
        "kbar,pearson,spearman,samples",
    ]
    for k in _kbars(args):
        rp, rs, count = correlation_row(args.n, args.m, k, args.seeds, args.seed)
        lines.append(f"{k},{rp:.6f},{rs:.6f},{count}")
    _write(args.out, lines)
    return 0


def sweep_runs(N, M, k_bar, seeds, seed, budget, backend=None):
    """``(seed index, solved, generated)`` per lock; start and goal are distinct random states."""
    out = []
    for i in range(seeds):
        lock = generate_lock(N, M, k_bar, seed + i)
        rng = np.random.default_rng([seed, k_bar, i])
        start = lock.random_state(rng)
        goal_state = lock.random_state(rng)
        while np.array_equal(goal_state, start):
            goal_state = lock.random_state(rng)
        sim = lock.simulator()
        res = gbfs_goal_count(sim, start, Goal.from_state(goal_state), budget, backend=backend)
        assert res.generated == sim.queries
        out.append((i, res.solved, res.generated))
    return out


def cmd_sweep(args) -> int:
    if args.seeds < 1 or args.budget < 1:
        raise ConfigError("--seeds and --budget must be positive")
    head = f"N={args.n} M={args.m} seeds={args.seeds} seed={args.seed} budget={args.budget}"
    lines = [f"# focused-macros sweep {SCHEMA} {head}", "kbar,n_seeds,solved,median_generated,mean_generated,max_generated"]
    runs = [f"# focused-macros sweep-runs {SCHEMA} {head}", "kbar,seed_index,solved,generated"]
    for k in _kbars(args):
        rows = sweep_runs(args.n, args.m, k, args.seeds, args.seed, args.budget, args.backend)
        gen = np.array([g for _, _, g in rows])
        solved = sum(s for _, s, _ in rows)
        lines.append(f"{k},{len(rows)},{solved},{np.median(gen):.1f},{gen.mean():.1f},{gen.max()}")
        runs += [f"{k},{i},{int(s)},{g}" for i, s, g in rows]
    _write(args.out, lines)
    if args.runs_out:
        _write(args.runs_out, runs)
    return 0


def cmd_learn(args) -> int:
    domain = make_domain(args)
    sim = domain.simulator()
    defaults = LEARN_DEFAULTS[args.domain]
    n_m = defaults["n_m"] if args.n_m is None else args.n_m
    r_m = defaults["r_m"] if args.r_m is None else args.r_m
    b_m = defaults["b_m"] if args.b_m is None else args.b_m
    if args.out in (None, "-"):
        raise ConfigError("learn needs --out FILE for the library")
    if args.macros == "focused":
        s0 = domain.random_state(np.random.default_rng([args.seed, 0]))
        library = learn_focused_macros(sim, s0, n_m, r_m, b_m, domain.random_state, args.seed, backend=args.backend)
    elif args.macros == "random":
        if args.lengths_from:
            lengths = read_library(args.lengths_from, domain, sim).lengths()
        elif isinstance(domain, RubiksCube):
            lengths = [len(seq) for _, _, seq in expert_catalog()]
        else:
            raise ConfigError("random macros need --lengths-from LIBRARY")
        s0 = domain.random_state(np.random.default_rng([args.seed, 0]))
        library = generate_random_macros(sim, s0, lengths, seed=args.seed, start_sampler=domain.random_state)
        library.params = {"N_M": len(lengths), "R_M": 0, "B_M": 0}
    else:
        library = expert_macros(domain)
    library.domain = sim.name
    library.seed = args.seed
    write_library(args.out, library, domain, sim)
    if args.records_out:
        _write(
            args.records_out,
            [f"# focused-macros learn-records {SCHEMA} domain={sim.name} macros={args.macros} seed={args.seed}",
             "macro,length,effect_size"]
            + [f"{i},{m.length},{m.effect_size}" for i, m in enumerate(library.macros)],
        )
    if library.macros:
        sizes = np.array(library.effect_sizes())
        lens = np.array(library.lengths())
        print(
            f"{args.macros} macros={len(library)} queries={sim.queries} "
            f"length_mean={lens.mean():.2f} effect_min={sizes.min()} effect_mean={sizes.mean():.2f} "
            f"effect_max={sizes.max()}",
            file=sys.stderr,
        )
    else:
        print(f"{args.macros} macros=0 queries={sim.queries}", file=sys.stderr)
    return 0


def plan_instances(domain, count: int, seed: int, goal_source: str):
    starts = unique_states(domain, count, np.random.default_rng([seed, 1]))
    if goal_source == "default":
        return [(s, domain.default_goal()) for s in starts]
    goal_rng = np.random.default_rng([seed, 2])
    return [(s, goal_from_state(domain, draw_state(domain, goal_rng))) for s in starts]


def cmd_plan(args) -> int:
    domain = make_domain(args)
    base = domain.simulator()
    budget = PLAN_BUDGETS[args.domain] if args.budget is None else args.budget
    if budget < 1 or args.instances < 1:
        raise ConfigError("--budget and --instances must be positive")
    if args.macros == "expert":
        sim = attach_macros(base, expert_macros(domain))
    elif args.macros == "none":
        sim = base
    else:
        if not args.library or not Path(args.library).exists():
            raise ConfigError(f"--macros {args.macros} needs an existing --library file")
        sim = attach_macros(base, read_library(args.library, domain, base))
    lines = [
        f"# focused-macros plan {SCHEMA} domain={sim.name} macros={args.macros} goal={args.goal} "
        f"instances={args.instances} budget={budget} seed={args.seed}",
        "instance,solved,generated,plan_len,plan_len_primitive",
    ]
    generated = []
    solved = 0
    for i, (start, goal) in enumerate(plan_instances(domain, args.instances, args.seed, args.goal)):
        run = sim.fork()
        res = gbfs_goal_count(run, start, goal, budget, backend=args.backend)
        assert res.generated == run.queries
        generated.append(res.generated)
        solved += res.solved
        lines.append(f"{i},{int(res.solved)},{res.generated},{len(res.plan)},{res.plan_length_primitive}")
    lines.append(f"# mean_generated={np.mean(generated):.1f} solve_rate={solved / len(generated):.3f}")
    _write(args.out, lines)
    return 0


COMMANDS = {"correlate": cmd_correlate, "sweep": cmd_sweep, "learn": cmd_learn, "plan": cmd_plan}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except (ConfigError, MacroConfigError, LibraryFormatError, FileNotFoundError) as exc:
        print(f"focused-macros: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
