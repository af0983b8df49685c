import random

import pytest

from sathys.cnf import Formula
from sathys.outcome import Tracer
from sathys.trail import UNASSIGNED

# a=1 b=2 c=3 d=4 e=5
TWO_MUS_FORMULA = [[-4, 5], [2, -3], [-4], [-1, 2], [1], [1, -3, 5], [-1, 3, 4], [-2]]
# a=1 b=2 c=3
CYCLE_FORMULA = [[-1, -2, -3], [1, -2], [2, -3], [3, -1]]

ACCEPTANCE_LINES = []


def random_clauses(rng, n, m, k=3):
    k = min(k, n)
    return [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), k)]
            for _ in range(m)]


def random_formula(rng, n_range=(3, 15), ratio_range=(2.0, 6.0)):
    n = rng.randint(*n_range)
    m = max(1, round(n * rng.uniform(*ratio_range)))
    return Formula.from_clauses(random_clauses(rng, n, m), n)


class Recorder(Tracer):
    """Collects learned clauses and checks every flip against the trail."""

    def __init__(self):
        self.learned = []
        self.tabu_violations = 0
        self.flips = 0
        self.asserting_failures = 0

    def on_learn(self, info, trail):
        at_conflict = [c for c in info.clause.lits if trail.level[c >> 1] == info.conflict_level]
        if at_conflict != [info.asserting_literal]:
            self.asserting_failures += 1
        self.learned.append(info.clause.ints())

    def on_flip(self, var, trail):
        self.flips += 1
        if trail.vals[2 * var] != UNASSIGNED:
            self.tabu_violations += 1


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
