"""Command-line front end: ``gp-pursuit <command> ...``.

Exit codes: 0 success, 1 verification violation, 2 parameter error,
3 resource or budget error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from .errors import BudgetError, FamilyError, GPPursuitError, ParamError, TrappedError
from .game import GameState, Turn, is_capture, is_legal_cop_move, is_trapped
from .graph import (
    expected_coincidences,
    export_graph,
    family_membership,
    girth,
    girth7_conditions,
    has_dotted_edge,
    make_graph,
    neighbourhood_tree,
    parse_vertex,
)

EXIT_OK, EXIT_VIOLATION, EXIT_PARAM, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_CACHE = "./gpwt-cache"


@dataclass
class RunReport:
    command: str
    parameters: dict
    results: dict = field(default_factory=dict)
    wall_time_ms: int = 0
    worker_count: int = 1
    table_cache_hit: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str)


def _cache_dir(args) -> str | None:
    if args.no_cache:
        return None
    return args.cache_dir or os.environ.get("GP_PURSUIT_CACHE") or DEFAULT_CACHE


def _threads(args) -> int:
    from .solver.core import default_threads

    return args.threads if args.threads else default_threads()


# ---------------------------------------------------------------------------


def cmd_graph(args, out) -> int:
    g = make_graph(args.n, args.k)
    out.write(export_graph(g, args.format))
    if args.format == "json":
        out.write("\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    g = make_graph(args.n, args.k)
    fam = family_membership(args.n, args.k)
    results = {
        "girth": girth(g),
        "tags": sorted(t.value for t in girth7_conditions(args.n, args.k)),
        "family": None if fam is None else {"divisor": fam.divisor, "exception": fam.exception},
    }
    report = RunReport("classify", {"n": args.n, "k": args.k}, results)
    if args.json:
        out.write(report.to_json() + "\n")
    else:
        out.write(f"GP({args.n},{args.k})\n")
        out.write(f"girth: {results['girth']}\n")
        out.write(f"girth-7 tags: {{{', '.join(results['tags'])}}}\n")
        if fam is None:
            out.write("family: no\n")
        else:
            out.write(f"family: yes i={fam.divisor} exception={str(fam.exception).lower()}\n")
    return EXIT_OK


def cmd_copnumber(args, out) -> int:
    from .solver import cop_number

    g = make_graph(args.n, args.k)
    threads = _threads(args)
    t0 = time.perf_counter()
    res = cop_number(
        g,
        max_c=args.max_cops,
        symmetry=args.symmetry == "on",
        threads=threads,
        budget=int(args.budget_gib * 2**30),
        cache_dir=_cache_dir(args),
        assume_upper_4=args.assume_upper_4,
    )
    report = RunReport(
        "copnumber",
        {"n": args.n, "k": args.k, "max_cops": args.max_cops, "symmetry": args.symmetry,
         "assume_upper_4": args.assume_upper_4},
        {"cop_number": res.cop_number, "per_c": res.per_c, "assumed_upper": res.assumed_upper},
        int((time.perf_counter() - t0) * 1000),
        threads,
        res.cache_hits > 0,
    )
    if args.json:
        out.write(report.to_json() + "\n")
    else:
        out.write(f"cop number: {res.cop_number}\n")
        for row in res.per_c:
            if row.get("assumed"):
                out.write(f"  c={row['c']}: cops win (assumed upper bound 4)\n")
                continue
            verdict = "cops win" if row["cops_win"] else "robber wins"
            src = "cache" if row.get("cache_hit") else f"{row.get('seconds', 0)}s, {row.get('iterations')} layers"
            out.write(f"  c={row['c']}: {verdict}; {row['states']} states ({src})\n")
    return EXIT_OK


def structure_audit(g) -> dict:
    from .graph import b

    roots = []
    bad = 0
    for v in range(g.order):
        tree = neighbourhood_tree(g, v)
        i = v % g.n
        closing = {b(i + 3 * g.k, g.n), b(i - 3 * g.k, g.n)} if v >= g.n else set()
        ok = (
            len(tree.coincidences) == 4
            and not tree.shallow_repeats
            and tree.coincident_vertices() == expected_coincidences(g, v)
            and set(tree.closures) == closing
            and [len(layer) for layer in tree.layers] == [1, 3, 6, 12, 24]
        )
        bad += not ok
        roots.append(len(tree.coincidences))
    dotted = all(has_dotted_edge(g, j) for j in range(g.n))
    gir = girth(g)
    return {
        "girth": gir,
        "roots": g.order,
        "coincident_pairs_min": min(roots),
        "coincident_pairs_max": max(roots),
        "bad_roots": bad,
        "dotted_edge_all_j": dotted,
        "violations": bad + (not dotted) + (gir != 7),
    }


def cmd_verify(args, out) -> int:
    from . import strategy

    g = make_graph(args.n, args.k)
    t0 = time.perf_counter()
    scope = args.scope
    if args.lemma == "lemma1":
        rep = strategy.verify_lemma1(g, scope, seed=args.seed, workers=args.workers)
        results = json.loads(rep.to_json())
    elif args.lemma == "lemma2":
        rep = strategy.verify_lemma2(g, scope, seed=args.seed, workers=args.workers)
        results = json.loads(rep.to_json())
    elif args.lemma == "counts":
        rep = strategy.trapped_set_counts(g, check_placements=scope == "exhaustive")
        results = rep.summary()
        results["violation_count"] = (
            (results["adjacent_min"], results["adjacent_max"]) != (10, 10)
        ) + ((results["ideal_min"], results["ideal_max"]) != (13, 13)) + results["placement_failures"]
    else:
        from .graph import require_family

        require_family(g)
        results = structure_audit(g)
        results["violation_count"] = results.pop("violations")
    report = RunReport(
        "verify",
        {"n": args.n, "k": args.k, "lemma": args.lemma, "scope": scope, "seed": args.seed},
        results,
        int((time.perf_counter() - t0) * 1000),
        args.workers,
    )
    if args.json:
        out.write(report.to_json() + "\n")
    else:
        out.write(f"verify {args.lemma} on GP({args.n},{args.k}), scope={scope}\n")
        for key, val in results.items():
            if key != "violations":
                out.write(f"  {key}: {val}\n")
        for v in results.get("violations", [])[:10]:
            out.write(f"  violation: {v}\n")
    return EXIT_VIOLATION if results["violation_count"] else EXIT_OK


# ---------------------------------------------------------------------------
# interactive play


def _read_cops(g, c, line):
    parts = line.replace(",", " ").split()
    if len(parts) != c:
        raise ParamError(f"enter exactly {c} vertices")
    return tuple(sorted(parse_vertex(p, g.n) for p in parts))


def play_session(g, c: int, robber: str, infile, out, max_plies: int = 0, threads: int = 1) -> RunReport:
    """Human cops against a robber policy.  Reads one line per cop turn."""
    from . import strategy

    table = None
    if robber == "strategy":
        if c != 3:
            raise ParamError("the strategy robber plays against exactly 3 cops")
        strategy.tables(g)  # raises FamilyError outside the family
    else:
        from .solver import solve

        table = solve(g, c, True, threads)
    transcript = []
    outcome = "quit"
    state = None
    plies = 0

    def prompt(msg):
        out.write(msg)
        out.flush()
        return infile.readline()

    out.write(f"GP({g.n},{g.k}): you move {c} cops against the {robber} robber. 'quit' ends.\n")
    while True:
        line = prompt(f"place {c} cops> " if state is None else "cops> ")
        if not line or line.strip().lower() in ("quit", "q", "exit"):
            break
        try:
            cops = _read_cops(g, c, line)
            if state is not None and not is_legal_cop_move(g, state.cops, cops):
                raise ParamError("illegal move: every cop moves at most one edge")
        except GPPursuitError as exc:
            out.write(f"  {exc}; try again\n")
            continue
        if state is None:
            if robber == "strategy":
                r = strategy.initial_placement(g, cops)
            else:
                from .solver import optimal_robber_placement

                r = optimal_robber_placement(table, cops)
            state = GameState(cops, r, Turn.COPS)
            out.write(f"  robber starts on {g.name(r)}\n")
            transcript.append(state.to_text(g.n))
            continue
        state = GameState(cops, state.robber, Turn.ROBBER)
        plies += 1
        transcript.append(state.to_text(g.n))
        if is_capture(state):
            outcome = "captured"
            out.write("  robber captured\n")
            break
        if robber == "strategy":
            try:
                r = strategy.safe_move(g, state)
            except TrappedError:
                outcome = "trapped"
                out.write("  robber is trapped\n")
                break
        else:
            from .solver import optimal_robber_policy

            r = optimal_robber_policy(table, state)
        state = GameState(state.cops, r, Turn.COPS)
        plies += 1
        transcript.append(state.to_text(g.n))
        out.write(f"  robber moves to {g.name(r)}\n")
        if is_capture(state):
            outcome = "captured"
            break
        if max_plies and plies >= max_plies:
            outcome = "ply limit"
            break
    trapped_seen = any(
        is_trapped(g, GameState.from_text(s, g.n)) for s in transcript if s.endswith("turn=R")
    )
    return RunReport(
        "play",
        {"n": g.n, "k": g.k, "cops": c, "robber": robber},
        {"outcome": outcome, "plies": plies, "robber_trapped": trapped_seen, "transcript": transcript},
    )


def cmd_play(args, out) -> int:
    g = make_graph(args.n, args.k)
    t0 = time.perf_counter()
    report = play_session(g, args.cops, args.robber, sys.stdin, out, args.max_plies, _threads(args))
    report.wall_time_ms = int((time.perf_counter() - t0) * 1000)
    report.worker_count = _threads(args)
    out.write(report.to_json() + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


SUITES = {
    "small": [(5, 2, 3), (14, 4, 3)],
    "full": [(5, 2, 3), (14, 4, 3), (28, 8, 3), (28, 8, 4)],
}


def run_bench(suite: str, max_threads: int) -> list[dict]:
    from .solver import placement_game, solve

    rows = []
    for n, k, c in SUITES[suite]:
        g = make_graph(n, k)
        for sym in (True, False):
            if not sym and c == 4:
                continue
            for threads in sorted({1, max_threads}):
                t = solve(g, c, sym, threads)
                rows.append({
                    "n": n, "k": k, "c": c, "symmetry": "on" if sym else "off",
                    "requested_threads": threads, "threads": t.stats["threads"], "engine": t.stats["engine"],
                    "states": t.stats["states"], "iterations": t.stats["iterations"],
                    "seconds": t.stats["seconds"], "cops_win": placement_game(t).cops_win,
                    "checksum": t.checksum()[:16],
                })
    return rows


def cmd_bench(args, out) -> int:
    rows = run_bench(args.suite, _threads(args))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    out.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gp-pursuit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)

    def solver_args(sp):
        sp.add_argument("--threads", type=int, default=0, help="default: available parallelism")
        sp.add_argument("--cache-dir", default=None, help=f"default: $GP_PURSUIT_CACHE or {DEFAULT_CACHE}")
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--budget-gib", type=float, default=8.0)

    sp = sub.add_parser("graph", help="serialise GP(n,k)")
    graph_args(sp)
    sp.add_argument("--format", choices=["dot", "json", "adjlist"], default="adjlist")
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("classify", help="girth, girth-7 tags and family membership")
    graph_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("copnumber", help="exact cop number by retrograde analysis")
    graph_args(sp)
    solver_args(sp)
    sp.add_argument("--max-cops", type=int, default=4)
    sp.add_argument("--symmetry", choices=["on", "off"], default="on")
    sp.add_argument("--assume-upper-4", action="store_true",
                    help="skip the 4-cop solve and use the known bound c(G) <= 4")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_copnumber)

    sp = sub.add_parser("verify", help="audit the evasion strategy, trapped-set counts and neighbourhood structure")
    graph_args(sp)
    sp.add_argument("--lemma", choices=["lemma1", "lemma2", "counts", "figures"], required=True)
    sp.add_argument("--scope", default="exhaustive", help="'exhaustive' or a sample size")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("play", help="play the cops against a robber policy")
    graph_args(sp)
    sp.add_argument("--cops", type=int, default=3)
    sp.add_argument("--robber", choices=["strategy", "optimal"], default="strategy")
    sp.add_argument("--max-plies", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("bench", help="time the solver on a fixed matrix; CSV output")
    sp.add_argument("--suite", choices=sorted(SUITES), default="small")
    sp.add_argument("--threads", type=int, default=0)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err)
    try:
        return args.func(args, out)
    except (ParamError, FamilyError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_PARAM
    except (BudgetError, MemoryError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_BUDGET
    except GPPursuitError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
