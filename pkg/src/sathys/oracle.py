"""Exhaustive truth-table evaluation for small formulas (test and MUS oracle)."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

MAX_VARS = 22


def truth_table(num_vars: int) -> np.ndarray:
    """Boolean matrix of shape (2**num_vars, num_vars + 1); column v is variable v.

    Column 0 is unused so that signed DIMACS literals index directly.
    """
    if num_vars > MAX_VARS:
        raise ValueError(f"truth table over {num_vars} variables is too large")
    rows = np.arange(1 << num_vars, dtype=np.int64)
    table = np.zeros((rows.size, num_vars + 1), dtype=bool)
    for v in range(1, num_vars + 1):
        table[:, v] = (rows >> (v - 1)) & 1
    return table


def satisfied_rows(clauses: Iterable[Sequence[int]], num_vars: int,
                   table: np.ndarray | None = None) -> np.ndarray:
    """Mask of assignments satisfying every clause."""
    if table is None:
        table = truth_table(num_vars)
    ok = np.ones(table.shape[0], dtype=bool)
    for clause in clauses:
        sat = np.zeros(table.shape[0], dtype=bool)
        for x in clause:
            sat |= table[:, x] if x > 0 else ~table[:, -x]
        ok &= sat
        if not ok.any():
            break
    return ok


def brute_force_model(clauses: Iterable[Sequence[int]], num_vars: int) -> dict[int, bool] | None:
    table = truth_table(num_vars)
    ok = satisfied_rows(clauses, num_vars, table)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    row = table[hits[0]]
    return {v: bool(row[v]) for v in range(1, num_vars + 1)}


def is_satisfiable(clauses: Iterable[Sequence[int]], num_vars: int) -> bool:
    return bool(satisfied_rows(clauses, num_vars).any())


def implies(clauses: Iterable[Sequence[int]], num_vars: int, clause: Sequence[int]) -> bool:
    """Every model of ``clauses`` satisfies ``clause``."""
    negated = [[-x] for x in clause]
    return not is_satisfiable(list(clauses) + negated, num_vars)
