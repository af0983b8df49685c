"""Once-satisfied / critical / linked clauses and brute-force MUS enumeration.

These are diagnostics for small formulas. Everything works on clauses given
as lists of signed ints; assignments map 1-based variables to booleans (a dict
or a sequence with index 0 unused). A :class:`~sathys.cnf.Formula` is accepted
wherever a clause list is, and contributes its learned clauses too.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cnf import Formula
from .oracle import truth_table

MAX_MUS_CLAUSES = 24
MAX_MUS_VARS = 16


def as_clause_list(f) -> list[list[int]]:
    if isinstance(f, Formula):
        return f.as_ints(include_learned=True)
    return [list(c) for c in f]


def _true(x: int, ic) -> bool:
    return bool(ic[abs(x)]) == (x > 0)


def restrict_clause(clause: Sequence[int], fixed: Mapping[int, bool]) -> list[int] | None:
    """The clause under a partial assignment: None if satisfied, else its free part."""
    out = []
    for x in clause:
        v = abs(x)
        if v in fixed:
            if bool(fixed[v]) == (x > 0):
                return None
        else:
            out.append(x)
    return out


def restrict(f, fixed: Mapping[int, bool]) -> list[list[int]]:
    """The formula simplified by a partial assignment (satisfied clauses dropped)."""
    out = []
    for c in as_clause_list(f):
        r = restrict_clause(c, fixed)
        if r is not None:
            out.append(r)
    return out


def satisfying_literals(clause: Iterable[int], ic) -> list[int]:
    return [x for x in clause if _true(x, ic)]


def once_satisfied_on(clause: Iterable[int], ic) -> int | None:
    """The unique true literal of ``clause`` under ``ic``, or None."""
    sat = satisfying_literals(clause, ic)
    return sat[0] if len(sat) == 1 else None


@dataclass
class CriticalityReport:
    clause: list[int]
    critical: bool
    # literal of the clause -> clauses containing its negation, once-satisfied on it
    links: dict[int, list[list[int]]] = field(default_factory=dict)


def is_critical(alpha: Sequence[int], f, ic, fixed: Mapping[int, bool] | None = None) -> CriticalityReport:
    """Whether ``alpha`` is falsified by ``ic`` and every literal has a linked clause.

    A clause linked through literal l contains -l and is once-satisfied on
    -l, so flipping l would break it. With ``fixed`` the test is made on the
    formula simplified by that partial assignment.
    """
    clauses = as_clause_list(f)
    alpha = list(alpha)
    if fixed:
        clauses = restrict(clauses, fixed)
        reduced = restrict_clause(alpha, fixed)
        if reduced is None:
            return CriticalityReport(alpha, False)
        alpha = reduced
    if satisfying_literals(alpha, ic):
        return CriticalityReport(alpha, False)
    links: dict[int, list[list[int]]] = {}
    for x in alpha:
        links[x] = [c for c in clauses if -x in c and once_satisfied_on(c, ic) == -x]
    return CriticalityReport(alpha, all(links.values()), links)


def _falsify_masks(clauses: list[list[int]], num_vars: int) -> list[int]:
    # bit r of mask i is set iff truth-table row r falsifies clause i
    table = truth_table(num_vars)
    masks = []
    for c in clauses:
        sat = np.zeros(table.shape[0], dtype=bool)
        for x in c:
            sat |= table[:, x] if x > 0 else ~table[:, -x]
        bits = np.packbits(~sat, bitorder="little")
        masks.append(int.from_bytes(bits.tobytes(), "little"))
    return masks


def enumerate_mus(f, num_vars: int | None = None) -> list[list[list[int]]]:
    """All minimal unsatisfiable subsets, smallest first.

    Depth-first over clause subsets in index order, with each subset's set of
    falsified truth-table rows kept as a bitset. A branch is cut as soon as
    the subset is unsatisfiable (supersets are not minimal) or when adding
    every remaining clause still leaves a model.
    """
    clauses = as_clause_list(f)
    if num_vars is None:
        num_vars = f.num_vars if isinstance(f, Formula) else max((abs(x) for c in clauses for x in c), default=0)
    if len(clauses) > MAX_MUS_CLAUSES or num_vars > MAX_MUS_VARS:
        raise ValueError(f"MUS enumeration is oracle-scale only "
                         f"(<= {MAX_MUS_CLAUSES} clauses, <= {MAX_MUS_VARS} variables)")
    masks = _falsify_masks(clauses, num_vars)
    full = (1 << (1 << num_vars)) - 1
    m = len(masks)
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[i]
    if suffix[0] != full:
        return []

    found: list[tuple[int, ...]] = []

    def minimal(subset: tuple[int, ...]) -> bool:
        for drop in subset:
            cover = 0
            for i in subset:
                if i != drop:
                    cover |= masks[i]
            if cover == full:
                return False
        return True

    stack: list[tuple[tuple[int, ...], int, int]] = [((), 0, 0)]
    while stack:
        subset, cover, nxt = stack.pop()
        for i in range(m - 1, nxt - 1, -1):
            if cover | suffix[i] != full:
                continue
            c2 = cover | masks[i]
            s2 = subset + (i,)
            if c2 == full:
                if minimal(s2):
                    found.append(s2)
            else:
                stack.append((s2, c2, i + 1))
    found = sorted(set(found), key=lambda s: (len(s), s))
    return [[clauses[i] for i in s] for s in found]


def check_prop2(f, ic, muses: Iterable[Iterable[Sequence[int]]],
                fixed: Mapping[int, bool] | None = None) -> bool:
    """Every MUS holds at least one clause critical under ``ic``.

    Meant for local minima of ``f``; vacuously true without MUSes.
    """
    clauses = as_clause_list(f)
    for mus in muses:
        if not any(is_critical(c, clauses, ic, fixed).critical for c in mus):
            return False
    return True


def local_minima(f, num_vars: int) -> list[dict[int, bool]]:
    """Every assignment with falsified clauses where no single flip lowers their number."""
    clauses = as_clause_list(f)
    table = truth_table(num_vars)
    count = np.zeros(table.shape[0], dtype=np.int64)
    for c in clauses:
        sat = np.zeros(table.shape[0], dtype=bool)
        for x in c:
            sat |= table[:, x] if x > 0 else ~table[:, -x]
        count += ~sat
    rows = np.arange(table.shape[0])
    is_min = count > 0
    for v in range(1, num_vars + 1):
        is_min &= count[rows ^ (1 << (v - 1))] >= count
    return [{v: bool(table[r, v]) for v in range(1, num_vars + 1)} for r in np.flatnonzero(is_min)]


def mus_report(f, num_vars: int | None = None) -> str:
    """Human-readable MUS listing used by the command line."""
    muses = enumerate_mus(f, num_vars)
    if not muses:
        return "c no MUS (formula is satisfiable)\n"
    lines = [f"c {len(muses)} MUS"]
    for k, mus in enumerate(muses, 1):
        body = "  ".join("(" + " ".join(map(str, c)) + ")" for c in mus)
        lines.append(f"c mus {k} size={len(mus)}: {body}")
    return "\n".join(lines) + "\n"


def criticality_report(f, ic) -> str:
    clauses = as_clause_list(f)
    lines = []
    for c in clauses:
        if satisfying_literals(c, ic):
            continue
        rep = is_critical(c, clauses, ic)
        links = "; ".join(f"{x}: " + " ".join("(" + " ".join(map(str, l)) + ")" for l in ls)
                          for x, ls in rep.links.items())
        tag = "critical" if rep.critical else "not-critical"
        lines.append(f"c falsified ({' '.join(map(str, c))}) {tag} {links}".rstrip())
    if not lines:
        lines.append("c assignment satisfies every clause")
    return "\n".join(lines) + "\n"


__all__ = [
    "CriticalityReport", "as_clause_list", "check_prop2", "criticality_report",
    "enumerate_mus", "is_critical", "local_minima", "mus_report", "once_satisfied_on",
    "restrict", "restrict_clause",
]
