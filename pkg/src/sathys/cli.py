"""Command line: ``sathys {solve,bench,gen,mus}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import bench
from .cnf import DimacsError, parse_dimacs, verify_model
from .hybrid import DEFAULT_TIME_LIMIT
from .mus import criticality_report, mus_report
from .outcome import Status

EXIT_SAT, EXIT_UNSAT, EXIT_UNKNOWN, EXIT_ERROR = 10, 20, 0, 1
EXIT_DISAGREEMENT = 3
TIMEOUT_ENV = "SATHYS_TIMEOUT"


def default_timeout() -> float:
    raw = os.environ.get(TIMEOUT_ENV)
    return float(raw) if raw else DEFAULT_TIME_LIMIT


def model_lines(model: dict[int, bool], per_line: int = 10) -> list[str]:
    lits = [v if model[v] else -v for v in sorted(model)] + [0]
    return ["v " + " ".join(map(str, lits[i:i + per_line])) for i in range(0, len(lits), per_line)]


def cmd_solve(args) -> int:
    try:
        formula = parse_dimacs(Path(args.file).read_bytes())
    except (OSError, DimacsError) as e:
        print(f"error: {args.file}: {e}", file=sys.stderr)
        return EXIT_ERROR
    out = bench.run_mode(formula, args.mode, seed=args.seed, timeout=args.timeout,
                         max_flips=args.max_flips, flip_limit=args.flip_limit)
    lines = [f"c sathys mode={args.mode} seed={args.seed}"]
    lines += ["c " + kv for kv in out.stats.lines(with_time=args.stats)]
    if out.status is Status.SAT and args.verify:
        if not verify_model(formula, out.model):
            print("error: model failed verification", file=sys.stderr)
            return EXIT_ERROR
        lines.append("c model verified")
    lines.append({Status.SAT: "s SATISFIABLE", Status.UNSAT: "s UNSATISFIABLE",
                  Status.UNKNOWN: "s UNKNOWN"}[out.status])
    if out.status is Status.SAT:
        lines += model_lines(out.model)
    print("\n".join(lines), flush=True)
    return {Status.SAT: EXIT_SAT, Status.UNSAT: EXIT_UNSAT, Status.UNKNOWN: EXIT_UNKNOWN}[out.status]


def cmd_bench(args) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    try:
        result = bench.run_bench(args.corpus, modes=modes, timeout=args.timeout, jobs=args.jobs,
                                 seed=args.seed, out_dir=args.out)
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    for r in result.records:
        print(f"c {r.instance} {r.mode} {r.status.value}" + (f" {r.seconds:.3f}s" if args.stats else ""))
    print(f"c runs={len(result.records)} disagreements={len(result.disagreements)}")
    if result.disagreements:
        for d in result.disagreements:
            print(f"fatal: status disagreement: {d}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    return 0


def cmd_gen(args) -> int:
    if args.kind == "random-3sat":
        params = {"num_vars": args.vars, "ratio": args.ratio}
    else:
        params = {"pigeons": args.pigeons, "holes": args.holes}
    try:
        paths = bench.gen_instances(args.kind, args.out, count=args.count, seed=args.seed, **params)
    except (ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


def cmd_mus(args) -> int:
    try:
        formula = parse_dimacs(Path(args.file).read_bytes())
        if args.assignment:
            lits = [int(x) for x in args.assignment.replace(",", " ").split()]
            ic = {abs(x): x > 0 for x in lits}
            missing = set(range(1, formula.num_vars + 1)) - set(ic)
            if missing:
                raise ValueError(f"assignment misses variables {sorted(missing)}")
            sys.stdout.write(criticality_report(formula, ic))
        sys.stdout.write(mus_report(formula))
    except (OSError, DimacsError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sathys", description="Hybrid local search / CDCL SAT solver")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one DIMACS file")
    s.add_argument("file")
    s.add_argument("--mode", choices=bench.MODES, default="hybrid")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-flips", type=int, default=None, help="default: 100 * number of variables")
    s.add_argument("--timeout", type=float, default=None,
                   help=f"wall-clock seconds (default ${TIMEOUT_ENV} or {DEFAULT_TIME_LIMIT:g})")
    s.add_argument("--flip-limit", type=int, default=None)
    s.add_argument("--stats", action="store_true", help="include timing in the statistics")
    s.add_argument("--verify", action="store_true", help="re-check the model against the input")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run modes over a directory of DIMACS files")
    b.add_argument("corpus")
    b.add_argument("--modes", default="hybrid,cdcl")
    b.add_argument("--timeout", type=float, default=None)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default=None, help="directory for results.csv and cactus.csv")
    b.add_argument("--stats", action="store_true")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="generate instances")
    g.add_argument("kind", choices=["random-3sat", "pigeonhole"])
    g.add_argument("--vars", type=int, default=50)
    g.add_argument("--ratio", type=float, default=4.26)
    g.add_argument("--pigeons", type=int, default=3)
    g.add_argument("--holes", type=int, default=2)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=".")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("mus", help="enumerate MUSes (and criticality) of a small instance")
    m.add_argument("file")
    m.add_argument("--assignment", default=None, help='complete assignment, e.g. "1 -2 3"')
    m.set_defaults(func=cmd_mus)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="c %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "timeout", "unset") is None:
        args.timeout = default_timeout()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
