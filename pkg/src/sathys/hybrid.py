"""Local search driven hybrid: CDCL fixes variables at every local minimum."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .cdcl import UnsatProved, VarActivity, analyze_conflict, learn, reduce_learned
from .cnf import Clause, Formula, verify_model
from .local_search import LocalSearch
from .outcome import SolveOutcome, Stats, Status, Tracer
from .trail import TRUE, UNASSIGNED, Trail

DEFAULT_TIME_LIMIT = 1200.0


@dataclass
class HybridParams:
    """``max_flips`` defaults to 100 * num_vars when None."""

    max_flips: int | None = None
    seed: int = 0
    time_limit: float | None = DEFAULT_TIME_LIMIT
    flip_limit: int | None = None

    def __post_init__(self):
        if self.max_flips is not None and self.max_flips < 1:
            raise ValueError("max_flips must be >= 1")


def merged_model(trail: Trail, values: list[bool]) -> dict[int, bool]:
    """Trail values where assigned, the complete assignment elsewhere."""
    model = {v + 1: b for v, b in enumerate(values)}
    for code in trail.lits:
        v = code >> 1
        want = not (code & 1)
        if values[v] != want:
            raise AssertionError(f"assignment disagrees with trail on variable {v + 1}")
        model[v + 1] = want
    return model


class HybridSolver:
    def __init__(self, formula: Formula, params: HybridParams | None = None,
                 tracer: Tracer | None = None):
        self.params = params or HybridParams()
        self.source = formula
        self.formula = formula.copy()
        self.trail = Trail(self.formula)
        self.activity = VarActivity(formula.num_vars)
        self.rng = random.Random(self.params.seed)
        self.tracer = tracer
        self.stats = Stats()
        self.ls = LocalSearch(self.formula, self.trail, self.rng, tracer)

    def solve(self) -> SolveOutcome:
        p, stats, t, ls, rng = self.params, self.stats, self.trail, self.ls, self.rng
        start = time.perf_counter()
        deadline = None if p.time_limit is None else start + p.time_limit
        max_flips = p.max_flips or max(1, 100 * self.formula.num_vars)
        status = Status.UNKNOWN
        first = True
        while status is Status.UNKNOWN:
            if not first:
                stats.restarts += 1
            first = False
            t.backjump(0)
            if t.propagate() is not None:
                status = Status.UNSAT
                break
            stats.deleted += reduce_learned(t)
            ls.init_random()
            for _ in range(max_flips):
                if not ls.falsified:
                    status = Status.SAT
                    break
                if p.flip_limit is not None and ls.flips >= p.flip_limit:
                    break
                if deadline is not None and time.perf_counter() >= deadline:
                    break
                if ls.try_descent_step() is None:
                    stats.local_minima += 1
                    clause = ls.clauses[rng.choice(ls.falsified)]
                    if self.fix(clause) is Status.UNSAT:
                        status = Status.UNSAT
                        break
            else:
                continue
            if status is Status.UNKNOWN:
                break
        stats.flips = ls.flips
        stats.time = time.perf_counter() - start
        model = None
        if status is Status.SAT:
            model = merged_model(t, ls.values)
            if not verify_model(self.source, model):
                raise AssertionError("hybrid solver produced a non-model")
        return SolveOutcome(status, model, stats)

    def fix(self, clause: Clause) -> Status:
        """Decide the clause's free literals true one by one, learning on conflict.

        Returns UNSAT when a level-0 conflict proves unsatisfiability,
        UNKNOWN otherwise. On return the complete assignment agrees with the
        trail.
        """
        t, ls, stats = self.trail, self.ls, self.stats
        vals = t.vals
        values = ls.values
        if any(vals[c] == TRUE or values[c >> 1] != bool(c & 1) for c in clause.lits):
            raise AssertionError(f"fix called on a clause that is not falsified: {clause}")
        if self.tracer is not None:
            self.tracer.on_fix(self, clause)
        stats.fix_calls += 1
        score = self.activity.score
        pending = sorted((c for c in clause.lits if vals[c] == UNASSIGNED),
                         key=lambda c: -score[c >> 1])
        conflict = None
        while pending and conflict is None:
            t.decide(pending.pop(0))
            stats.decisions += 1
            conflict = t.propagate()
            pending = [c for c in pending if vals[c] == UNASSIGNED]
        # a conflict found while propagating the asserted literal is repaired
        # here too; left for later, the next decision level would absorb the
        # propagation and the trail could come to falsify a clause outright
        while conflict is not None:
            stats.conflicts += 1
            try:
                info = analyze_conflict(t, conflict, self.activity)
            except UnsatProved:
                return Status.UNSAT
            if self.tracer is not None:
                self.tracer.on_learn(info, t)
            learn(t, info, self.activity)
            stats.learned += 1
            ls.add_clause(info.clause)
            conflict = t.propagate()
        ls.sync()
        return Status.UNKNOWN


def solve_hybrid(formula: Formula, params: HybridParams | None = None,
                 tracer: Tracer | None = None) -> SolveOutcome:
    return HybridSolver(formula, params, tracer).solve()
