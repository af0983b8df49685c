"""Descent-only local search over a complete assignment.

Variables are 0-based here, as in :mod:`sathys.trail`. Variables assigned on
the trail are fixed: the search reads the formula through the partial
assignment and never flips them.
"""
from __future__ import annotations

import random
import time

from .cnf import Formula, verify_model
from .outcome import SolveOutcome, Stats, Status, Tracer
from .trail import UNASSIGNED, Trail


WALK_NOISE = 0.5


class TabuViolation(AssertionError):
    """Local search tried to flip a variable fixed by the trail."""


class LocalSearch:
    """Complete assignment plus incremental clause bookkeeping.

    ``true_count[i]`` is the number of literals of clause ``i`` true under the
    assignment. Clauses with a zero count form the falsified set; as long as
    the assignment agrees with the trail, a clause satisfied by the trail
    always has a nonzero count, so the falsified set is exactly the falsified
    part of the formula simplified by the trail.
    """

    def __init__(self, formula: Formula, trail: Trail, rng: random.Random,
                 tracer: Tracer | None = None):
        self.formula = formula
        self.trail = trail
        self.rng = rng
        self.tracer = tracer
        self.values = [False] * formula.num_vars
        self.flips = 0
        self.rebuild()

    # -- bookkeeping ---------------------------------------------------------

    def rebuild(self) -> None:
        """Recount everything from scratch against ``formula.clauses``."""
        self.clauses = []
        self.occ: list[list[int]] = [[] for _ in range(2 * self.formula.num_vars)]
        self.true_count: list[int] = []
        self.falsified: list[int] = []
        self._pos: list[int] = []
        for c in self.formula.clauses:
            self.add_clause(c)

    def add_clause(self, clause) -> int:
        i = len(self.clauses)
        self.clauses.append(clause)
        values = self.values
        n = 0
        for code in clause.lits:
            self.occ[code].append(i)
            if values[code >> 1] != bool(code & 1):
                n += 1
        self.true_count.append(n)
        self._pos.append(-1)
        if n == 0:
            self._mark(i)
        return i

    def _mark(self, i: int) -> None:
        self._pos[i] = len(self.falsified)
        self.falsified.append(i)

    def _unmark(self, i: int) -> None:
        p = self._pos[i]
        last = self.falsified.pop()
        if last != i:
            self.falsified[p] = last
            self._pos[last] = p
        self._pos[i] = -1

    def init_random(self) -> None:
        """Trail variables copy the trail; the rest are drawn uniformly."""
        vals, rnd = self.trail.vals, self.rng.random
        for v in range(self.formula.num_vars):
            tv = vals[2 * v]
            self.values[v] = (tv > 0) if tv != UNASSIGNED else rnd() < 0.5
        self.rebuild()

    # -- moves ---------------------------------------------------------------

    def is_free(self, v: int) -> bool:
        return self.trail.vals[2 * v] == UNASSIGNED

    def flip_delta(self, v: int) -> int:
        """Change in the number of falsified clauses if ``v`` were flipped."""
        if not self.is_free(v):
            raise TabuViolation(f"variable {v + 1} is fixed by the trail")
        true_lit = 2 * v if self.values[v] else 2 * v + 1
        tc = self.true_count
        delta = 0
        for i in self.occ[true_lit]:
            if tc[i] == 1:
                delta += 1
        for i in self.occ[true_lit ^ 1]:
            if tc[i] == 0:
                delta -= 1
        return delta

    def break_count(self, v: int) -> int:
        """Clauses that flipping ``v`` would falsify."""
        true_lit = 2 * v if self.values[v] else 2 * v + 1
        tc = self.true_count
        return sum(1 for i in self.occ[true_lit] if tc[i] == 1)

    def flip(self, v: int) -> None:
        if not self.is_free(v):
            raise TabuViolation(f"variable {v + 1} is fixed by the trail")
        if self.tracer is not None:
            self.tracer.on_flip(v, self.trail)
        self._toggle(v)
        self.flips += 1

    def _toggle(self, v: int) -> None:
        was_true = 2 * v if self.values[v] else 2 * v + 1
        self.values[v] = not self.values[v]
        tc = self.true_count
        for i in self.occ[was_true]:
            tc[i] -= 1
            if tc[i] == 0:
                self._mark(i)
        for i in self.occ[was_true ^ 1]:
            tc[i] += 1
            if tc[i] == 1:
                self._unmark(i)

    def try_descent_step(self) -> int | None:
        """Flip one variable that strictly reduces the falsified count.

        Falsified clauses are examined in uniformly random order; inside the
        first clause that admits a descent the most improving variable is
        flipped (ties broken at random). Returns the flipped variable, or None
        at a local minimum.
        """
        if not self.falsified:
            raise ValueError("no falsified clause: the assignment is already a model")
        rng, vals = self.rng, self.trail.vals
        work = self.falsified[:]
        k = len(work)
        while k:
            j = rng.randrange(k)
            i = work[j]
            k -= 1
            work[j] = work[k]
            best, ties = 0, []
            for code in self.clauses[i].lits:
                v = code >> 1
                if vals[code] != UNASSIGNED:
                    continue
                d = self.flip_delta(v)
                if d < best:
                    best, ties = d, [v]
                elif d == best and d < 0:
                    ties.append(v)
            if ties:
                v = ties[0] if len(ties) == 1 else rng.choice(ties)
                self.flip(v)
                return v
        return None

    # -- trail coupling ------------------------------------------------------

    def sync(self) -> int:
        """Overwrite assignment values that disagree with the trail; returns how many."""
        changed = 0
        values = self.values
        for code in self.trail.lits:
            v = code >> 1
            if values[v] == bool(code & 1):
                self._toggle(v)
                changed += 1
        return changed

    def falsified_clauses(self):
        return [self.clauses[i] for i in self.falsified]

    def model(self) -> dict[int, bool]:
        return {v + 1: b for v, b in enumerate(self.values)}


def solve_ls_only(formula: Formula, seed: int = 0, time_limit: float | None = None,
                  flip_limit: int | None = None, tracer: Tracer | None = None,
                  noise: float = WALK_NOISE) -> SolveOutcome:
    """Baseline without the CDCL part: a WalkSAT-style search.

    Each step picks a random falsified clause and flips a variable of it that
    breaks nothing if there is one; otherwise, with probability ``noise``, a
    random variable of the clause, else one of least break count.
    Incomplete: returns SAT or UNKNOWN, never UNSAT.
    """
    start = time.perf_counter()
    stats = Stats()
    work = formula.copy()
    if work.has_empty_clause():
        stats.time = time.perf_counter() - start
        return SolveOutcome(Status.UNKNOWN, None, stats)
    trail = Trail(work)
    rng = random.Random(seed)
    ls = LocalSearch(work, trail, rng, tracer)
    ls.init_random()
    status = Status.UNKNOWN
    while True:
        if not ls.falsified:
            status = Status.SAT
            break
        if flip_limit is not None and ls.flips >= flip_limit:
            break
        if time_limit is not None and ls.flips % 64 == 0 and time.perf_counter() - start >= time_limit:
            break
        variables = [c >> 1 for c in ls.clauses[rng.choice(ls.falsified)].lits]
        breaks = [ls.break_count(v) for v in variables]
        best = min(breaks)
        if best > 0 and rng.random() < noise:
            ls.flip(rng.choice(variables))
        else:
            ls.flip(rng.choice([v for v, b in zip(variables, breaks) if b == best]))
    stats.flips = ls.flips
    stats.time = time.perf_counter() - start
    model = ls.model() if status is Status.SAT else None
    if model is not None and not verify_model(formula, model):
        raise AssertionError("local search produced a non-model")
    return SolveOutcome(status, model, stats)
