"""Command line front end: solve, encode, verify and bench over the four
puzzle instance formats.

Exit codes: 0 verified solution / accept, 1 rejected solution, 2 input
error, 10 unknown (budget/timeout), 20 proven infeasible.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import shlex
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cnf import CnfBuilder
from .optimize import maximize
from .solver import (
    DEFAULT_SOLVER_ENV,
    SolveFn,
    external_solve_fn,
    solve_internal,
)
from .puzzles import (
    LoopSolution,
    RoadrunnerSolution,
    ColoringSolution,
    build_masyu,
    build_roadrunner,
    build_shingoki,
    build_tapa,
    decode_coloring,
    decode_loop,
    decode_roadrunner,
    parse_masyu,
    parse_roadrunner,
    parse_shingoki,
    parse_tapa,
    verify_masyu,
    verify_roadrunner,
    verify_shingoki,
    verify_tapa,
)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_INPUT = 2
EXIT_UNKNOWN = 10
EXIT_INFEASIBLE = 20

KINDS = ("roadrunner", "masyu", "shingoki", "tapa")
_EXTENSIONS = {
    ".roadrunner": "roadrunner",
    ".rr": "roadrunner",
    ".masyu": "masyu",
    ".shingoki": "shingoki",
    ".tapa": "tapa",
}


@dataclass
class RunConfig:
    kind: str
    path: str
    solver_cmd: list[str] | None  # None = internal solver
    timeout: float
    output: str  # "ascii" | "json"
    seed: int = 0
    jobs: int = 1


def infer_kind(path: str, flag: str | None) -> str:
    if flag:
        if flag not in KINDS:
            raise ValueError(f"unknown puzzle kind {flag!r}")
        return flag
    ext = os.path.splitext(path)[1].lower()
    if ext in _EXTENSIONS:
        return _EXTENSIONS[ext]
    raise ValueError(f"cannot infer puzzle kind from {path!r}; use --puzzle")


def make_config(args, path: str) -> RunConfig:
    kind = infer_kind(path, getattr(args, "puzzle", None))
    solver = getattr(args, "solver", None) or os.environ.get(DEFAULT_SOLVER_ENV)
    cmd = shlex.split(solver) if solver else None
    timeout = getattr(args, "timeout", 300.0)
    if timeout <= 0:
        raise ValueError("time budget must be positive")
    return RunConfig(
        kind=kind,
        path=path,
        solver_cmd=cmd,
        timeout=timeout,
        output=getattr(args, "output", "ascii"),
        seed=getattr(args, "seed", 0),
        jobs=getattr(args, "jobs", 1),
    )


def solve_fn_for(config: RunConfig) -> SolveFn:
    if config.solver_cmd:
        return external_solve_fn(config.solver_cmd, timeout=config.timeout)
    return solve_internal


_PARSERS = {
    "roadrunner": parse_roadrunner,
    "masyu": parse_masyu,
    "shingoki": parse_shingoki,
    "tapa": parse_tapa,
}


def _load_instance(config: RunConfig):
    with open(config.path) as f:
        return _PARSERS[config.kind](f.read())


def _build(config: RunConfig, inst):
    """Returns (builder, decode(assignment) -> solution, verify(sol),
    objective counter or None)."""
    builder = CnfBuilder()
    if config.kind == "roadrunner":
        laser, road, edges, count = build_roadrunner(builder, inst)

        def decode(assignment):
            return decode_roadrunner(assignment, inst, laser, road)

        return builder, decode, lambda s: verify_roadrunner(inst, s), count
    if config.kind == "masyu":
        grid, edges, _ = build_masyu(builder, inst)
        return (
            builder,
            lambda a: decode_loop(a, grid, edges),
            lambda s: verify_masyu(inst, s),
            None,
        )
    if config.kind == "shingoki":
        grid, edges, _ = build_shingoki(builder, inst)
        return (
            builder,
            lambda a: decode_loop(a, grid, edges),
            lambda s: verify_shingoki(inst, s),
            None,
        )
    grid = build_tapa(builder, inst)
    return (
        builder,
        lambda a: decode_coloring(a, grid),
        lambda s: verify_tapa(inst, s),
        None,
    )


# -- rendering ----------------------------------------------------------

_LOOP_CHARS = {
    frozenset({(-1, 0), (1, 0)}): "|",
    frozenset({(0, -1), (0, 1)}): "-",
    frozenset({(-1, 0), (0, 1)}): "L",
    frozenset({(-1, 0), (0, -1)}): "J",
    frozenset({(1, 0), (0, 1)}): "r",
    frozenset({(1, 0), (0, -1)}): "7",
}


def render_loop(rows: int, cols: int, sol: LoopSolution) -> str:
    chars = [["."] * cols for _ in range(rows)]
    n = len(sol.cycle)
    for i, (r, c) in enumerate(sol.cycle):
        if n == 1:
            chars[r - 1][c - 1] = "O"
            continue
        pr, pc = sol.cycle[(i - 1) % n]
        nr, nc = sol.cycle[(i + 1) % n]
        dirs = frozenset({(pr - r, pc - c), (nr - r, nc - c)})
        chars[r - 1][c - 1] = _LOOP_CHARS.get(dirs, "#")
    return "\n".join("".join(row) for row in chars)


def render_roadrunner(inst, sol: RoadrunnerSolution) -> str:
    lines = []
    clue_at = {(x, y): num for x, y, num in inst.clues}
    for y in range(1, inst.max_y + 1):
        row = []
        for x in range(1, inst.max_x + 1):
            if (x, y) in clue_at:
                row.append(str(clue_at[(x, y)]))
            elif inst.is_hill(x, y):
                row.append("#")
            elif sol.laser_at(x, y):
                row.append("L")
            elif sol.road_at(x, y):
                row.append("o")
            else:
                row.append(".")
        lines.append("".join(row))
    return "\n".join(lines)


def render_tapa(inst, sol: ColoringSolution) -> str:
    lines = []
    for r in range(1, inst.n + 1):
        row = []
        for c in range(1, inst.n + 1):
            clue = inst.at(r, c)
            if clue is not None:
                row.append("".join(str(d) for d in clue))
            elif sol.is_black(r, c):
                row.append("#")
            else:
                row.append(".")
        lines.append(" ".join(f"{s:>4}" for s in row))
    return "\n".join(lines)


def solution_json(config: RunConfig, inst, sol) -> dict:
    if config.kind == "roadrunner":
        return {
            "kind": "roadrunner",
            "maxX": inst.max_x,
            "maxY": inst.max_y,
            "laser": sol.laser,
            "road": sol.road,
            "k": sol.k,
        }
    if config.kind == "tapa":
        return {"kind": "tapa", "n": inst.n, "black": sol.black}
    return {
        "kind": config.kind,
        "n": inst.n,
        "cycle": [list(c) for c in sol.cycle],
        "k": sol.k,
    }


def solution_from_json(kind: str, inst, data: dict):
    if kind == "roadrunner":
        laser, road = data["laser"], data["road"]
        return RoadrunnerSolution(laser, road, int(data.get("k", sum(map(sum, road)))))
    if kind == "tapa":
        return ColoringSolution(data["black"])
    cycle = [(int(r), int(c)) for r, c in data["cycle"]]
    return LoopSolution(set(cycle), cycle)


# -- subcommands --------------------------------------------------------

def cmd_solve(args) -> int:
    try:
        config = make_config(args, args.instance)
        inst = _load_instance(config)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    builder, decode, verify, objective = _build(config, inst)
    fn = solve_fn_for(config)
    if config.kind == "roadrunner":
        if builder.unsat:
            print("INFEASIBLE")
            return EXIT_INFEASIBLE
        result = maximize(
            builder.clauses, builder.var_count, objective, solve_fn=fn, lo=1
        )
        if result.status == "infeasible":
            print("INFEASIBLE")
            return EXIT_INFEASIBLE
        if result.status != "optimal":
            print(f"UNKNOWN: {result.reason}")
            return EXIT_UNKNOWN
        sol = decode(result.best_model.assignment)
        reason = verify(sol)
        if reason:
            print(f"error: decoded solution rejected: {reason}", file=sys.stderr)
            return EXIT_REJECT
        if config.output == "json":
            print(json.dumps(solution_json(config, inst, sol)))
        else:
            print(f"safecircuitlen({sol.k}).")
            print(render_roadrunner(inst, sol))
            print("VERIFIED")
        return EXIT_OK
    if builder.unsat:
        print("INFEASIBLE")
        return EXIT_INFEASIBLE
    outcome = fn(builder.clauses, builder.var_count)
    if outcome.is_unsat:
        print("INFEASIBLE")
        return EXIT_INFEASIBLE
    if not outcome.is_sat:
        print(f"UNKNOWN: {outcome.reason}")
        return EXIT_UNKNOWN
    sol = decode(outcome.model.assignment)
    reason = verify(sol)
    if reason:
        print(f"error: decoded solution rejected: {reason}", file=sys.stderr)
        return EXIT_REJECT
    if config.output == "json":
        print(json.dumps(solution_json(config, inst, sol)))
    else:
        if config.kind == "tapa":
            print(render_tapa(inst, sol))
        else:
            print(render_loop(inst.n, inst.n, sol))
        print("VERIFIED")
    return EXIT_OK


def cmd_encode(args) -> int:
    try:
        config = make_config(args, args.instance)
        inst = _load_instance(config)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    builder, _, _, _ = _build(config, inst)
    out = args.out or config.path + ".cnf"
    mapfile = args.map or out + ".map"
    with open(out, "w") as f:
        builder.emit_dimacs(f)
    with open(mapfile, "w") as f:
        builder.emit_varmap(f)
    print(f"wrote {out} ({builder.var_count} vars, {len(builder.clauses)} clauses)")
    print(f"wrote {mapfile}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        config = make_config(args, args.instance)
        inst = _load_instance(config)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        with open(args.solution) as f:
            data = json.load(f)
        sol = solution_from_json(config.kind, inst, data)
    except (OSError, ValueError, KeyError, TypeError) as e:
        print(f"error: bad solution file: {e}", file=sys.stderr)
        return EXIT_INPUT
    verifier = {
        "roadrunner": verify_roadrunner,
        "masyu": verify_masyu,
        "shingoki": verify_shingoki,
        "tapa": verify_tapa,
    }[config.kind]
    try:
        reason = verifier(inst, sol)
    except (ValueError, IndexError, KeyError, TypeError):
        print("REJECT malformed-solution")
        return EXIT_INPUT
    if reason:
        print(f"REJECT {reason}")
        # a wrong-size grid is a malformed solution file, not a near-miss
        return EXIT_INPUT if reason == "wrong-grid-size" else EXIT_REJECT
    print("ACCEPT")
    return EXIT_OK


def _bench_one(args, path: str):
    start = time.monotonic()
    try:
        config = make_config(args, path)
        inst = _load_instance(config)
        builder, decode, verify, objective = _build(config, inst)
        fn = solve_fn_for(config)
        nvars, nclauses = builder.var_count, len(builder.clauses)
        if builder.unsat:
            result = "infeasible"
        elif config.kind == "roadrunner":
            r = maximize(builder.clauses, nvars, objective, solve_fn=fn, lo=1)
            result = r.status if r.status != "optimal" else f"optimal k={r.best_value}"
        else:
            o = fn(builder.clauses, nvars)
            result = {"sat": "sat", "unsat": "infeasible"}.get(o.status, "unknown")
        return (os.path.basename(path), nvars, nclauses, time.monotonic() - start, result)
    except Exception as e:  # per-instance failures recorded, run continues
        return (os.path.basename(path), 0, 0, time.monotonic() - start, f"error: {e}")


def cmd_bench(args) -> int:
    paths = sorted(
        os.path.join(args.directory, name)
        for name in os.listdir(args.directory)
        if os.path.splitext(name)[1].lower() in _EXTENSIONS
    )
    if not paths:
        print(f"error: no instances in {args.directory}", file=sys.stderr)
        return EXIT_INPUT
    jobs = max(1, args.jobs)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda p: _bench_one(args, p), paths))
    else:
        rows = [_bench_one(args, p) for p in paths]
    writer = csv.writer(sys.stdout)
    writer.writerow(["instance", "vars", "clauses", "seconds", "result"])
    for name, nvars, nclauses, seconds, result in rows:
        writer.writerow([name, nvars, nclauses, f"{seconds:.3f}", result])
    writer.writerow(
        [
            "TOTAL",
            sum(r[1] for r in rows),
            sum(r[2] for r in rows),
            f"{sum(r[3] for r in rows):.3f}",
            "",
        ]
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridloop", description="SAT-based grid puzzle solver"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--puzzle", choices=KINDS, help="puzzle kind (else inferred from extension)")
        p.add_argument("--solver", help=f"external solver command (default: ${DEFAULT_SOLVER_ENV} or internal)")
        p.add_argument("--timeout", type=float, default=300.0, help="time budget in seconds")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="solve an instance and verify the solution")
    p.add_argument("instance")
    common(p)
    p.add_argument("--output", choices=("ascii", "json"), default="ascii")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("encode", help="write DIMACS plus a variable-map sidecar")
    p.add_argument("instance")
    common(p)
    p.add_argument("-o", "--out", help="output CNF path (default: INSTANCE.cnf)")
    p.add_argument("--map", help="variable map path (default: OUT.map)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("verify", help="check a JSON solution against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="solve a directory of instances, emit CSV")
    p.add_argument("directory")
    common(p)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
