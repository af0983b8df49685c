"""Benchmark instance generators: uniform random 3-SAT and pigeonhole."""
from __future__ import annotations

import random

from .cnf import Formula


def random_ksat(num_vars: int, ratio: float, seed: int, k: int = 3) -> Formula:
    """round(ratio * num_vars) clauses over k distinct variables each.

    Tautologies cannot occur because the variables of a clause are distinct.
    """
    if num_vars < k or k < 1 or ratio <= 0:
        raise ValueError(f"need num_vars >= k >= 1 and ratio > 0 (got n={num_vars}, k={k}, ratio={ratio})")
    rng = random.Random(seed)
    m = round(ratio * num_vars)
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, num_vars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Formula.from_clauses(clauses, num_vars)


def random_3sat(num_vars: int, ratio: float, seed: int) -> Formula:
    return random_ksat(num_vars, ratio, seed, 3)


def pigeonhole(pigeons: int, holes: int) -> Formula:
    """Variable (i - 1) * holes + j means pigeon i sits in hole j.

    Unsatisfiable whenever pigeons > holes.
    """
    if pigeons < 1 or holes < 1:
        raise ValueError("pigeons and holes must be positive")

    def x(i, j):
        return (i - 1) * holes + j

    clauses = [[x(i, j) for j in range(1, holes + 1)] for i in range(1, pigeons + 1)]
    for j in range(1, holes + 1):
        for i1 in range(1, pigeons + 1):
            for i2 in range(i1 + 1, pigeons + 1):
                clauses.append([-x(i1, j), -x(i2, j)])
    return Formula.from_clauses(clauses, pigeons * holes)
