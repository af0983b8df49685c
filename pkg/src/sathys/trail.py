"""Partial assignment with decision levels, reasons and watched-literal BCP."""
from __future__ import annotations

from .cnf import Clause, Formula, lit

TRUE, FALSE, UNASSIGNED = 1, -1, 0


class Trail:
    """The CDCL partial interpretation over one formula.

    Watching reorders literals inside the formula's clauses, so a formula
    should back at most one live trail (solvers work on ``formula.copy()``).

    ``vals`` is indexed by literal code (1 true, -1 false, 0 unassigned);
    ``level`` and ``reason`` by 0-based variable. A reason of ``None`` on an
    assigned variable marks a decision.
    """

    def __init__(self, formula: Formula):
        self.formula = formula
        n = formula.num_vars
        self.vals = [UNASSIGNED] * (2 * n)
        self.level = [-1] * n
        self.reason: list[Clause | None] = [None] * n
        self.lits: list[int] = []
        self.level_starts: list[int] = []
        self.qhead = 0
        self.watches: list[list[Clause]] = [[] for _ in range(2 * n)]
        self.units: list[Clause] = []
        self.empty: list[Clause] = []
        # called with each variable as it is unassigned (phase saving, heap refill)
        self.on_unassign = None
        for c in formula.clauses:
            self.attach(c)

    # -- clause database ---------------------------------------------------

    def attach(self, clause: Clause) -> None:
        n = len(clause.lits)
        if n == 0:
            self.empty.append(clause)
        elif n == 1:
            self.units.append(clause)
        else:
            self.watches[clause.lits[0]].append(clause)
            self.watches[clause.lits[1]].append(clause)

    def detach_many(self, doomed: set) -> None:
        self.units = [c for c in self.units if c not in doomed]
        for i, ws in enumerate(self.watches):
            if ws:
                self.watches[i] = [c for c in ws if c not in doomed]

    # -- queries -------------------------------------------------------------

    @property
    def decision_level(self) -> int:
        return len(self.level_starts)

    def value(self, ext_lit: int) -> bool | None:
        v = self.vals[lit(ext_lit)]
        return None if v == UNASSIGNED else v == TRUE

    def is_assigned(self, v: int) -> bool:
        """``v`` is a 0-based variable."""
        return self.vals[2 * v] != UNASSIGNED

    def assignment(self) -> dict[int, bool]:
        """Set view of the trail: 1-based variable -> value."""
        return {(c >> 1) + 1: not (c & 1) for c in self.lits}

    def entries(self) -> list[tuple[int, int, Clause | None]]:
        """(internal literal, level, reason) per trail position."""
        return [(c, self.level[c >> 1], self.reason[c >> 1]) for c in self.lits]

    def satisfies(self, clause: Clause) -> bool:
        vals = self.vals
        return any(vals[c] == TRUE for c in clause.lits)

    # -- mutation ------------------------------------------------------------

    def assign(self, code: int, reason: Clause | None) -> None:
        v = code >> 1
        if self.vals[code] != UNASSIGNED:
            raise AssertionError(f"variable {v + 1} already assigned")
        self.vals[code] = TRUE
        self.vals[code ^ 1] = FALSE
        self.level[v] = len(self.level_starts)
        self.reason[v] = reason
        self.lits.append(code)

    def decide(self, code: int) -> None:
        if self.vals[code] != UNASSIGNED:
            raise AssertionError(f"decision on assigned variable {(code >> 1) + 1}")
        self.level_starts.append(len(self.lits))
        self.assign(code, None)

    def backjump(self, level: int) -> None:
        if level > self.decision_level or level < 0:
            raise AssertionError(f"cannot backjump to {level} from {self.decision_level}")
        if level == self.decision_level:
            return
        start = self.level_starts[level]
        vals, hook = self.vals, self.on_unassign
        for code in reversed(self.lits[start:]):
            v = code >> 1
            vals[code] = UNASSIGNED
            vals[code ^ 1] = UNASSIGNED
            self.level[v] = -1
            self.reason[v] = None
            if hook is not None:
                hook(v, code)
        del self.lits[start:]
        del self.level_starts[level:]
        self.qhead = min(self.qhead, start)

    def propagate(self) -> Clause | None:
        """Unit propagation to fixpoint; returns a falsified clause or None."""
        vals = self.vals
        if self.empty:
            return self.empty[0]
        if not self.level_starts:
            for c in self.units:
                x = c.lits[0]
                if vals[x] == FALSE:
                    return c
                if vals[x] == UNASSIGNED:
                    self.assign(x, c)
        lits, watches = self.lits, self.watches
        while self.qhead < len(lits):
            false_lit = lits[self.qhead] ^ 1
            self.qhead += 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                cl = c.lits
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], false_lit
                first = cl[0]
                if vals[first] == TRUE:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(cl)):
                    if vals[cl[k]] != FALSE:
                        cl[1], cl[k] = cl[k], false_lit
                        watches[cl[1]].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if vals[first] == FALSE:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(lits)
                        return c
                    self.assign(first, c)
            del ws[j:]
        return None


def up_entails(formula: Formula, ext_lit: int) -> bool:
    """Whether unit propagation alone derives ``ext_lit`` from ``formula``.

    Asserts the negation at level 0 of a fresh trail and propagates; the
    formula itself is left untouched.
    """
    t = Trail(formula.copy())
    if t.propagate() is not None:
        return True
    code = lit(ext_lit)
    if t.vals[code] == TRUE:
        return True
    if t.vals[code] == FALSE:
        return False
    t.assign(code ^ 1, None)
    return t.propagate() is not None
