"""First-UIP conflict analysis, learning, restarts and a complete CDCL solver."""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

from .cnf import Clause, Formula, verify_model
from .outcome import SolveOutcome, Stats, Status, Tracer
from .trail import TRUE, UNASSIGNED, Trail

RESCALE_LIMIT = 1e100


class UnsatProved(Exception):
    """A conflict occurred at decision level 0."""


@dataclass
class LearnedClauseInfo:
    clause: Clause
    asserting_literal: int  # internal code, always clause.lits[0]
    backjump_level: int
    conflict_level: int


class VarActivity:
    """VSIDS-style scores with a lazy max-heap; also tracks clause activity."""

    def __init__(self, num_vars: int, decay: float = 0.95, clause_decay: float = 0.999):
        if not 0.0 < decay < 1.0:
            raise ValueError("decay must be in (0, 1)")
        self.score = [0.0] * num_vars
        self.inc = 1.0
        self.decay_factor = decay
        self.cla_inc = 1.0
        self.clause_decay = clause_decay
        self._rebuild()

    def _rebuild(self) -> None:
        self.heap = [(-s, v) for v, s in enumerate(self.score)]
        heapq.heapify(self.heap)

    def bump(self, v: int) -> None:
        s = self.score[v] + self.inc
        self.score[v] = s
        if s > RESCALE_LIMIT:
            self.score = [x / RESCALE_LIMIT for x in self.score]
            self.inc /= RESCALE_LIMIT
            self._rebuild()
        else:
            heapq.heappush(self.heap, (-s, v))

    def bump_clause(self, c: Clause, store: list[Clause]) -> None:
        c.activity += self.cla_inc
        if c.activity > RESCALE_LIMIT:
            for d in store:
                d.activity /= RESCALE_LIMIT
            self.cla_inc /= RESCALE_LIMIT

    def decay(self) -> None:
        self.inc /= self.decay_factor
        self.cla_inc /= self.clause_decay

    def push(self, v: int) -> None:
        heapq.heappush(self.heap, (-self.score[v], v))

    def pop_unassigned(self, vals: list[int]) -> int | None:
        """Highest-score unassigned variable (ties: lowest index), or None."""
        heap, score = self.heap, self.score
        if len(heap) > 8 * len(score) + 64:
            self._rebuild()
            heap = self.heap
        while heap:
            s, v = heapq.heappop(heap)
            if vals[2 * v] == UNASSIGNED and -s == score[v]:
                return v
        return None


def compute_backjump_level(clause: Clause, trail: Trail) -> int:
    """Second-highest decision level among the clause's literals (0 if unit)."""
    levels = sorted((trail.level[c >> 1] for c in clause.lits), reverse=True)
    return levels[1] if len(levels) > 1 else 0


def analyze_conflict(trail: Trail, conflict: Clause, activity: VarActivity | None = None,
                     minimize: bool = True) -> LearnedClauseInfo:
    """Derive the first-UIP nogood for ``conflict`` (falsified under ``trail``).

    The returned clause has the asserting literal first and a literal of the
    backjump level second, so it can be attached with valid watches after
    backjumping. Raises :class:`UnsatProved` for a level-0 conflict.
    """
    level, reason, tl = trail.level, trail.reason, trail.lits
    clevel = max((level[q >> 1] for q in conflict.lits), default=0)
    if clevel == 0:
        raise UnsatProved()
    if clevel < trail.decision_level:
        trail.backjump(clevel)

    seen: set[int] = set()
    learnt: list[int] = [-1]
    pending = 0
    p = None
    idx = len(tl) - 1
    c = conflict
    while True:
        if activity is not None and c.learned:
            activity.bump_clause(c, trail.formula.learned)
        for q in (c.lits if p is None else c.lits[1:]):
            v = q >> 1
            if v in seen or level[v] == 0:
                continue
            seen.add(v)
            if activity is not None:
                activity.bump(v)
            if level[v] >= clevel:
                pending += 1
            else:
                learnt.append(q)
        while (tl[idx] >> 1) not in seen:
            idx -= 1
        p = tl[idx]
        idx -= 1
        seen.discard(p >> 1)
        pending -= 1
        if pending == 0:
            break
        c = reason[p >> 1]
    learnt[0] = p ^ 1

    if minimize and len(learnt) > 2:
        abstract = 0
        for q in learnt[1:]:
            abstract |= 1 << (level[q >> 1] & 31)
        learnt = [learnt[0]] + [q for q in learnt[1:]
                                if reason[q >> 1] is None or not _redundant(q, abstract, seen, trail)]

    bl = 0
    if len(learnt) > 1:
        best = max(range(1, len(learnt)), key=lambda i: level[learnt[i] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        bl = level[learnt[1] >> 1]
    if activity is not None:
        activity.decay()
    return LearnedClauseInfo(Clause(learnt, learned=True), learnt[0], bl, clevel)


def _redundant(q: int, abstract: int, seen: set[int], trail: Trail) -> bool:
    # q is implied by the rest of the learnt clause through its reason chain
    level, reason = trail.level, trail.reason
    stack = [q]
    added = []
    while stack:
        r = stack.pop()
        for x in reason[r >> 1].lits[1:]:
            v = x >> 1
            if v in seen or level[v] == 0:
                continue
            if reason[v] is not None and (1 << (level[v] & 31)) & abstract:
                seen.add(v)
                added.append(v)
                stack.append(x)
            else:
                for a in added:
                    seen.discard(a)
                return False
    return True


def learn(trail: Trail, info: LearnedClauseInfo, activity: VarActivity | None = None) -> None:
    """Store the nogood, backjump, and assert its first literal."""
    c = info.clause
    trail.formula.add_learned(c)
    if activity is not None:
        activity.bump_clause(c, trail.formula.learned)
    trail.backjump(info.backjump_level)
    trail.attach(c)
    trail.assign(info.asserting_literal, c)


def reduce_learned(trail: Trail, force: bool = False) -> int:
    """Halve the learned store once it outgrows max(4000, 2 * original).

    Clauses of size <= 2 and reasons of current trail literals are kept.
    Returns the number of deleted clauses.
    """
    f = trail.formula
    if not force and len(f.learned) <= max(4000, 2 * len(f.original)):
        return 0
    reason = trail.reason
    candidates = [c for c in f.learned
                  if len(c.lits) > 2 and reason[c.lits[0] >> 1] is not c]
    candidates.sort(key=lambda c: c.activity)
    doomed = set(candidates[: len(f.learned) // 2])
    if not doomed:
        return 0
    f.learned = [c for c in f.learned if c not in doomed]
    trail.detach_many(doomed)
    return len(doomed)


def luby(i: int) -> int:
    """i-th term (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class CdclSolver:
    """Complete CDCL search over a private copy of ``formula``.

    ``restarts`` is ``"luby"`` (unit ``restart_unit`` conflicts), ``"always"``
    (after every conflict) or ``"never"``.
    """

    def __init__(self, formula: Formula, restarts: str = "luby", restart_unit: int = 64,
                 minimize: bool = True, tracer: Tracer | None = None):
        if restarts not in ("luby", "always", "never"):
            raise ValueError(f"unknown restart policy {restarts!r}")
        self.source = formula
        self.formula = formula.copy()
        self.trail = Trail(self.formula)
        self.activity = VarActivity(formula.num_vars)
        self.phase = [2 * v + 1 for v in range(formula.num_vars)]
        self.trail.on_unassign = self._unassigned
        self.restarts = restarts
        self.restart_unit = restart_unit
        self.minimize = minimize
        self.tracer = tracer
        self.stats = Stats()

    def _unassigned(self, v: int, code: int) -> None:
        self.phase[v] = code
        self.activity.push(v)

    def solve(self, conflict_limit: int | None = None, time_limit: float | None = None) -> SolveOutcome:
        start = time.perf_counter()
        deadline = None if time_limit is None else start + time_limit
        stats, t, act = self.stats, self.trail, self.activity
        restart_idx = 0
        next_restart = luby(0) * self.restart_unit
        since_restart = 0
        status = Status.UNKNOWN
        while True:
            confl = t.propagate()
            if confl is not None:
                stats.conflicts += 1
                try:
                    info = analyze_conflict(t, confl, act, self.minimize)
                except UnsatProved:
                    status = Status.UNSAT
                    break
                if self.tracer is not None:
                    self.tracer.on_learn(info, t)
                learn(t, info, act)
                stats.learned += 1
                since_restart += 1
                if self.restarts == "always" or (self.restarts == "luby" and since_restart >= next_restart):
                    t.backjump(0)
                    stats.restarts += 1
                    since_restart = 0
                    restart_idx += 1
                    next_restart = luby(restart_idx) * self.restart_unit
                if conflict_limit is not None and stats.conflicts >= conflict_limit:
                    break
                if deadline is not None and time.perf_counter() >= deadline:
                    break
                continue
            stats.deleted += reduce_learned(t)
            v = act.pop_unassigned(t.vals)
            if v is None:
                status = Status.SAT
                break
            t.decide(self.phase[v])
            stats.decisions += 1
            if deadline is not None and stats.decisions % 128 == 0 and time.perf_counter() >= deadline:
                break
        stats.time = time.perf_counter() - start
        model = None
        if status is Status.SAT:
            vals = t.vals
            model = {v + 1: vals[2 * v] == TRUE for v in range(self.formula.num_vars)}
            if not verify_model(self.source, model):
                raise AssertionError("CDCL produced a non-model")
        return SolveOutcome(status, model, stats)


def solve_cdcl(formula: Formula, conflict_limit: int | None = None, time_limit: float | None = None,
               **options) -> SolveOutcome:
    return CdclSolver(formula, **options).solve(conflict_limit, time_limit)
