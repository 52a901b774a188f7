"""Command line entry point: ``tdcycles {solve,count,verify,decompose,bench}``."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import oracle
from .counter import CallStats, count_pairs
from .graph import (
    EliminationForest,
    Graph,
    GraphError,
    cycle_graph,
    dfs_forest,
    format_forest,
    optimal_forest,
    parse_forest,
    parse_graph,
    separator_forest,
    subdivide,
    validate_forest,
)
from .poly import CoeffRing
from .solver import (
    DEFAULT_REPETITIONS,
    PccInstance,
    SolverConfig,
    SolverError,
    Verdict,
    solve_hamiltonian_cycle,
    solve_hamiltonian_path,
    solve_long_cycle,
    solve_long_path,
    solve_min_cycle_cover,
    solve_pcc,
)

EXIT_YES, EXIT_NO, EXIT_USAGE = 0, 1, 2
TIMING_FIELDS = ("wall_time",)


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    instance: dict
    seed: Optional[int] = None
    repetitions: Optional[int] = None
    answer: Optional[bool] = None
    result: Optional[object] = None
    table: Optional[dict] = None
    calls: Optional[int] = None
    max_depth: Optional[int] = None
    call_bound: Optional[int] = None
    notes: list = field(default_factory=list)
    wall_time: float = 0.0

    def to_json(self) -> str:
        d = asdict(self)
        if d["table"] is not None:
            d["table"] = {str(w): c for w, c in sorted(d["table"].items())}
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        if d.get("table") is not None:
            d["table"] = {int(w): c for w, c in d["table"].items()}
        return cls(**d)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_instance(graph_path: str, forest_path: Optional[str]) -> tuple[Graph, EliminationForest]:
    g = parse_graph(_read(graph_path))
    f = parse_forest(_read(forest_path)) if forest_path else dfs_forest(g)
    check = validate_forest(g, f)
    if not check:
        raise UsageError(f"invalid elimination forest: {check.message}")
    return g, f


def _summary(g: Graph, f: EliminationForest, **extra) -> dict:
    return {"n": g.n, "m": g.m, "tau": f.depth, **extra}


def _emit(report: RunReport, as_json: bool, text_lines: list[str]):
    if as_json:
        print(report.to_json())
    else:
        for line in text_lines:
            print(line)


# -- solve ----------------------------------------------------------------

PROBLEMS = ("pcc", "hc", "hp", "long-cycle", "long-path", "min-cycle-cover")


def cmd_solve(args) -> int:
    g, f = load_instance(args.graph, args.forest)
    cfg = SolverConfig(seed=args.seed, repetitions=args.reps, exact=args.exact)
    start = time.perf_counter()
    k, ell = args.k, args.l
    result = None
    if args.problem == "pcc":
        if k is None or ell is None:
            raise UsageError("--problem pcc needs -k and -l")
        if not 0 <= ell <= g.n or k < 0:
            raise UsageError(f"need k >= 0 and 0 <= l <= {g.n}")
        verdict = solve_pcc(PccInstance(g, k, ell), f, cfg)
    elif args.problem == "hc":
        verdict = solve_hamiltonian_cycle(g, f, cfg)
    elif args.problem == "hp":
        verdict = solve_hamiltonian_path(g, f, cfg)
    elif args.problem in ("long-cycle", "long-path"):
        if ell is None:
            raise UsageError(f"--problem {args.problem} needs -l (minimum length)")
        fn = solve_long_cycle if args.problem == "long-cycle" else solve_long_path
        try:
            verdict = fn(g, f, cfg, ell)
        except SolverError as exc:
            raise UsageError(str(exc)) from None
    else:
        result = solve_min_cycle_cover(g, f, cfg)
        verdict = Verdict(result is not None)
    report = RunReport(
        command=f"solve --problem {args.problem}",
        instance=_summary(g, f, k=k, ell=ell),
        seed=args.seed,
        repetitions=args.reps,
        answer=verdict.answer,
        result=result if args.problem == "min-cycle-cover" else verdict.witness_weight,
        calls=verdict.stats.calls if verdict.stats.calls else None,
        max_depth=verdict.stats.max_depth if verdict.stats.calls else None,
        notes=[verdict.note] if verdict.note else [],
        wall_time=time.perf_counter() - start,
    )
    lines = ["yes" if verdict.answer else "no"]
    if args.problem == "min-cycle-cover":
        lines = [str(result) if result is not None else "none"]
    _emit(report, args.json, lines)
    return EXIT_YES if verdict.answer else EXIT_NO


# -- count ----------------------------------------------------------------

def cmd_count(args) -> int:
    g, f = load_instance(args.graph, args.forest)
    ell = args.l
    start = time.perf_counter()
    notes = []
    stats = CallStats()
    if ell % 2 or not 0 <= ell <= g.n:
        table = {}
        notes.append(f"l={ell} is odd or outside 0..{g.n}: every count is zero")
    else:
        table = count_pairs(g, f, ell, g.weight_list(), CoeffRing.exact(), stats=stats)
    report = RunReport(
        command="count",
        instance=_summary(g, f, ell=ell),
        table=table,
        calls=stats.calls,
        max_depth=stats.max_depth,
        call_bound=f.call_bound(),
        notes=notes,
        wall_time=time.perf_counter() - start,
    )
    lines = [f"# {note}" for note in notes] + [f"w={w}: {c}" for w, c in sorted(table.items())]
    _emit(report, args.json, lines)
    return 0


# -- verify ---------------------------------------------------------------

def random_connected_graph(n: int, rng: random.Random, p: float = 0.45) -> Graph:
    """Random spanning tree plus independent extra edges."""
    edges = set()
    for v in range(2, n + 1):
        u = rng.randint(1, v - 1)
        edges.add((u, v))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < p:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def verify_graph(g: Graph, rng: random.Random, weightings: int = 3, seeds: int = 2) -> list[str]:
    """Cross-check counter and solver against the oracle; returns the list of
    disagreements (empty when everything agrees)."""
    problems = []
    forest = separator_forest(g)
    for _ in range(weightings):
        ws = [rng.randint(1, 4) for _ in range(g.m)]
        for ell in range(0, g.n + 1, 2):
            got = count_pairs(g, forest, ell, ws)
            want = oracle.enumerate_pairs(g, ws, ell)
            if got != want:
                problems.append(f"count l={ell} weights={ws}: {got} != {want}")
            if g.n <= oracle.MAX_IE_VERTICES:
                for w, c in want.items():
                    ie = oracle.eval_inclusion_exclusion(g, ws, ell, w)
                    if ie != c:
                        problems.append(f"inclusion-exclusion l={ell} w={w}: {ie} != {c}")
    for ell in range(3, g.n + 1):
        for k in (1, 2):
            truth = oracle.decide_pcc_exact(g, k, ell)
            for s in range(seeds):
                got = solve_pcc(PccInstance(g, k, ell), forest,
                                SolverConfig(seed=rng.getrandbits(32), repetitions=DEFAULT_REPETITIONS))
                if got.answer != truth:
                    problems.append(f"solve k={k} l={ell}: {got.answer} != {truth}")
    return problems


def cmd_verify(args) -> int:
    if args.random:
        n, count, seed = args.random
        if n > oracle.MAX_PAIR_VERTICES:
            raise UsageError(f"oracle size guard: n <= {oracle.MAX_PAIR_VERTICES}")
        rng = random.Random(seed)
        graphs = [random_connected_graph(n, rng) for _ in range(count)]
    elif args.graph:
        g = parse_graph(_read(args.graph))
        graphs = [g]
        rng = random.Random(args.seed)
    else:
        raise UsageError("verify needs a graph file or --random N COUNT SEED")
    failures = 0
    for i, g in enumerate(graphs):
        if g.n > oracle.MAX_PAIR_VERTICES or g.m > oracle.MAX_PAIR_EDGES:
            raise UsageError(f"graph {i} exceeds the oracle size guard "
                             f"(n <= {oracle.MAX_PAIR_VERTICES}, m <= {oracle.MAX_PAIR_EDGES})")
        problems = verify_graph(g, rng)
        failures += bool(problems)
        for p in problems:
            print(f"graph {i}: {p}", file=sys.stderr)
    print(f"{len(graphs) - failures}/{len(graphs)} instances agree")
    return 0 if failures == 0 else 1


# -- decompose ------------------------------------------------------------

HEURISTICS = {"dfs": dfs_forest, "separator": separator_forest, "optimal": optimal_forest}


def cmd_decompose(args) -> int:
    g = parse_graph(_read(args.graph))
    f = HEURISTICS[args.heuristic](g)
    text = format_forest(f)
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
    print(f"depth {f.depth}", file=sys.stderr if not args.output else sys.stdout)
    return 0


# -- bench ----------------------------------------------------------------

BENCH_HEADER = "instance,n,m,tau,calls,bound,millis,verdict"


def bench_row(name: str, g: Graph, f: EliminationForest, seed: int) -> dict:
    """Hamiltonian cycle, one repetition.  ``tau``, ``calls`` and ``bound``
    refer to the subdivided forest the counter actually walks."""
    sub = subdivide(g, f)
    start = time.perf_counter()
    v = solve_hamiltonian_cycle(g, f, SolverConfig(seed=seed, repetitions=1))
    millis = (time.perf_counter() - start) * 1000
    return {
        "instance": name, "n": g.n, "m": g.m, "tau": sub.forest.depth,
        "calls": v.stats.calls, "bound": sub.forest.call_bound(),
        "millis": round(millis, 1), "verdict": "yes" if v.answer else "no",
    }


def cmd_bench(args) -> int:
    jobs = []
    for size in args.cycles or []:
        g = cycle_graph(size)
        jobs.append((f"C{size}", g, separator_forest(g)))
    for path in args.graphs:
        g, f = load_instance(path, None)
        jobs.append((path, g, HEURISTICS[args.heuristic](g) if args.heuristic != "dfs" else f))
    if not jobs:
        raise UsageError("nothing to benchmark: give --cycles or graph files")
    if not args.json:
        print(BENCH_HEADER)
    for name, g, f in jobs:
        row = bench_row(name, g, f, args.seed)
        if args.json:
            print(json.dumps(row, sort_keys=True))
        else:
            print(",".join(str(row[k]) for k in BENCH_HEADER.split(",")))
        sys.stdout.flush()
    return 0


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdcycles", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="decide a cycle problem")
    s.add_argument("graph")
    s.add_argument("--problem", choices=PROBLEMS, default="pcc")
    s.add_argument("-k", type=int, help="maximum number of cycles (pcc)")
    s.add_argument("-l", type=int, help="covered vertices (pcc) or minimum length (long-*)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--reps", type=int, default=DEFAULT_REPETITIONS)
    s.add_argument("--forest", help="elimination forest file (default: DFS forest)")
    s.add_argument("--exact", action="store_true", help="count over the integers")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("count", help="exact consistent-matching pair counts per weight")
    c.add_argument("graph")
    c.add_argument("-l", type=int, required=True)
    c.add_argument("--forest")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_count)

    v = sub.add_parser("verify", help="cross-check against brute force")
    v.add_argument("graph", nargs="?")
    v.add_argument("--random", nargs=3, type=int, metavar=("N", "COUNT", "SEED"))
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decompose", help="write an elimination forest")
    d.add_argument("graph")
    d.add_argument("-o", "--output")
    d.add_argument("--heuristic", choices=sorted(HEURISTICS), default="dfs")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("bench", help="time Hamiltonian cycle runs against the call bound")
    b.add_argument("graphs", nargs="*")
    b.add_argument("--cycles", type=int, nargs="+", metavar="N")
    b.add_argument("--heuristic", choices=sorted(HEURISTICS), default="separator")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, GraphError, oracle.OracleGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
