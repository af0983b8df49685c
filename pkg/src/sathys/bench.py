"""Desk-scale benchmark harness: run modes over a corpus, emit CSV and cactus data."""
from __future__ import annotations

import csv
import logging
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, field
from pathlib import Path

from .cdcl import solve_cdcl
from .cnf import Formula, parse_dimacs, to_dimacs, verify_model
from .generators import pigeonhole, random_3sat
from .hybrid import HybridParams, solve_hybrid
from .local_search import solve_ls_only
from .outcome import SolveOutcome, Stats, Status

log = logging.getLogger(__name__)

MODES = ("hybrid", "cdcl", "ls-only")
STAT_FIELDS = tuple(Stats().as_dict(with_time=False))
CNF_SUFFIXES = (".cnf", ".dimacs")


def run_mode(formula: Formula, mode: str, seed: int = 0, timeout: float | None = None,
             max_flips: int | None = None, flip_limit: int | None = None) -> SolveOutcome:
    if mode == "hybrid":
        return solve_hybrid(formula, HybridParams(max_flips=max_flips, seed=seed,
                                                  time_limit=timeout, flip_limit=flip_limit))
    if mode == "cdcl":
        return solve_cdcl(formula, time_limit=timeout)
    if mode == "ls-only":
        return solve_ls_only(formula, seed=seed, time_limit=timeout, flip_limit=flip_limit)
    raise ValueError(f"unknown mode {mode!r} (expected one of {', '.join(MODES)})")


@dataclass
class RunRecord:
    instance: str
    mode: str
    status: Status
    seconds: float
    seed: int
    stats: dict = field(default_factory=dict)
    note: str = ""

    def row(self) -> list:
        return ([self.instance, self.mode, self.status.value, f"{self.seconds:.4f}", self.seed]
                + [self.stats.get(k, 0) for k in STAT_FIELDS] + [self.note])


@dataclass
class BenchResult:
    records: list[RunRecord]
    disagreements: list[str]

    def cactus(self) -> dict[str, list[float]]:
        """Per mode, the sorted times of the instances it solved."""
        out: dict[str, list[float]] = {}
        for r in self.records:
            out.setdefault(r.mode, [])
            if r.status is not Status.UNKNOWN:
                out[r.mode].append(r.seconds)
        return {m: sorted(ts) for m, ts in out.items()}


def instance_seed(base: int, name: str) -> int:
    return (base * 1_000_003 + zlib.crc32(name.encode())) % (2**31)


def run_one(path: str, mode: str, seed: int, timeout: float | None) -> RunRecord:
    """Solve one file in one mode; failures become UNKNOWN records, never exceptions."""
    name = Path(path).name
    start = time.perf_counter()
    try:
        formula = parse_dimacs(Path(path).read_bytes())
        out = run_mode(formula, mode, seed=seed, timeout=timeout)
        note = ""
        if out.status is Status.SAT and not verify_model(formula, out.model):
            return RunRecord(name, mode, Status.UNKNOWN, time.perf_counter() - start, seed,
                             out.stats.as_dict(False), "model failed verification")
        return RunRecord(name, mode, out.status, time.perf_counter() - start, seed,
                         out.stats.as_dict(False), note)
    except Exception as e:  # recorded, the batch goes on
        return RunRecord(name, mode, Status.UNKNOWN, time.perf_counter() - start, seed, {},
                         f"error: {type(e).__name__}: {e}")


def find_instances(corpus: str | Path) -> list[Path]:
    corpus = Path(corpus)
    if not corpus.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus}")
    return sorted(p for p in corpus.iterdir() if p.suffix in CNF_SUFFIXES and p.is_file())


def check_agreement(records: list[RunRecord]) -> list[str]:
    by_instance: dict[str, dict[str, Status]] = {}
    for r in records:
        by_instance.setdefault(r.instance, {})[r.mode] = r.status
    bad = []
    for name, modes in sorted(by_instance.items()):
        found = {s for s in modes.values() if s is not Status.UNKNOWN}
        if len(found) > 1:
            detail = ", ".join(f"{m}={s.value}" for m, s in sorted(modes.items()))
            bad.append(f"{name}: {detail}")
    return bad


def run_bench(corpus: str | Path, modes=("hybrid", "cdcl"), timeout: float | None = 60.0,
              jobs: int = 1, seed: int = 0, out_dir: str | Path | None = None) -> BenchResult:
    """Run every (instance, mode) pair, each in a worker process.

    A SAT/UNSAT contradiction between modes is reported in
    ``BenchResult.disagreements``; the caller decides how fatal that is.
    """
    for m in modes:
        if m not in MODES:
            raise ValueError(f"unknown mode {m!r}")
    tasks = [(str(p), m, instance_seed(seed, p.name), timeout)
             for p in find_instances(corpus) for m in modes]
    records: list[RunRecord] = []
    if tasks:
        with ProcessPoolExecutor(max_workers=max(1, jobs)) as pool:
            futures = [pool.submit(run_one, *t) for t in tasks]
            for t, fut in zip(tasks, futures):
                try:
                    records.append(fut.result())
                except BrokenProcessPool as e:
                    records.append(RunRecord(Path(t[0]).name, t[1], Status.UNKNOWN, 0.0, t[2], {},
                                             f"worker crashed: {e}"))
    result = BenchResult(records, check_agreement(records))
    for d in result.disagreements:
        log.error("status disagreement: %s", d)
    if out_dir is not None:
        write_outputs(result, out_dir)
    return result


def write_outputs(result: BenchResult, out_dir: str | Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = out_dir / "results.csv"
    with results.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["instance", "mode", "status", "seconds", "seed", *STAT_FIELDS, "note"])
        for r in result.records:
            w.writerow(r.row())
    cactus = out_dir / "cactus.csv"
    with cactus.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mode", "rank", "seconds"])
        for mode, times in result.cactus().items():
            for rank, t in enumerate(times, 1):
                w.writerow([mode, rank, f"{t:.4f}"])
    return results, cactus


def gen_instances(kind: str, out_dir: str | Path, count: int = 1, seed: int = 0, **params) -> list[Path]:
    """Write generated DIMACS files; identical arguments give identical bytes."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    if kind == "random-3sat":
        n, ratio = int(params["num_vars"]), float(params["ratio"])
        for k in range(count):
            s = seed + k
            f = random_3sat(n, ratio, s)
            p = out_dir / f"rand3_n{n}_r{ratio:g}_s{s}.cnf"
            p.write_text(f"c random 3-SAT n={n} ratio={ratio:g} seed={s}\n" + to_dimacs(f))
            paths.append(p)
    elif kind == "pigeonhole":
        ph, h = int(params["pigeons"]), int(params["holes"])
        p = out_dir / f"php_{ph}_{h}.cnf"
        p.write_text(f"c pigeonhole pigeons={ph} holes={h}\n" + to_dimacs(pigeonhole(ph, h)))
        paths.append(p)
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    return paths
