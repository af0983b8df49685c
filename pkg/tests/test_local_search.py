import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sathys.cnf import Formula, lit
from sathys.generators import pigeonhole, random_3sat
from sathys.local_search import LocalSearch, TabuViolation, solve_ls_only
from sathys.outcome import Status
from sathys.trail import Trail

from conftest import CYCLE_FORMULA, Recorder, random_clauses


def make_ls(clauses, n=None, values=None, seed=0):
    f = Formula.from_clauses(clauses, n)
    t = Trail(f)
    ls = LocalSearch(f, t, random.Random(seed))
    if values is not None:
        ls.values = list(values)
        ls.rebuild()
    return ls


def recount(ls):
    tc = [sum(ls.values[c >> 1] != bool(c & 1) for c in cl.lits) for cl in ls.clauses]
    return tc, sorted(i for i, k in enumerate(tc) if k == 0)


def test_flip_delta_examples():
    ls = make_ls([[1, 2], [-1]], 2, [False, False])
    assert ls.falsified == [0]
    assert ls.flip_delta(0) == 0   # repairs (1 2), breaks (-1)
    assert ls.flip_delta(1) == -1
    ls2 = make_ls([[1, 2], [1, -2], [-1, 2]], 2, [True, True])
    assert ls2.falsified == []
    assert ls2.flip_delta(0) == 1
    assert ls2.flip_delta(1) == 1


def test_descent_step_takes_the_improving_flip():
    ls = make_ls([[1, 2], [-1]], 2, [False, False])
    assert ls.try_descent_step() == 1
    assert ls.values == [False, True] and ls.falsified == []
    with pytest.raises(ValueError):
        ls.try_descent_step()


def test_cycle_formula_local_minimum():
    ls = make_ls(CYCLE_FORMULA, 3, [True, True, True])
    assert ls.falsified_clauses()[0].ints() == [-1, -2, -3]
    assert [ls.flip_delta(v) for v in range(3)] == [0, 0, 0]
    assert ls.try_descent_step() is None
    assert ls.values == [True, True, True] and ls.flips == 0


def test_flip_is_involution_and_counters_match_recount():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(3, 10)
        ls = make_ls(random_clauses(rng, n, rng.randint(n, 5 * n)), n, seed=rng.randrange(99))
        ls.init_random()
        for _ in range(30):
            v = rng.randrange(n)
            before = (ls.true_count[:], sorted(ls.falsified))
            d = ls.flip_delta(v)
            ls.flip(v)
            assert len(ls.falsified) - len(before[1]) == d
            tc, fal = recount(ls)
            assert ls.true_count == tc and sorted(ls.falsified) == fal
            assert all(ls.falsified[ls._pos[i]] == i for i in ls.falsified)
            ls.flip(v)
            assert (ls.true_count, sorted(ls.falsified)) == before
            ls.flip(v)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_descent_is_strict_and_stops_at_real_minima(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 10)
    ls = make_ls(random_clauses(rng, n, rng.randint(n, 6 * n)), n, seed=seed)
    ls.init_random()
    while ls.falsified:
        before = len(ls.falsified)
        v = ls.try_descent_step()
        if v is None:
            for i in ls.falsified:
                for code in ls.clauses[i].lits:
                    assert ls.flip_delta(code >> 1) >= 0
            break
        assert len(ls.falsified) < before


def test_gamma_is_exact_under_a_trail():
    rng = random.Random(8)
    for _ in range(100):
        n = rng.randint(4, 10)
        clauses = random_clauses(rng, n, rng.randint(n, 4 * n))
        f = Formula.from_clauses(clauses, n)
        t = Trail(f)
        ls = LocalSearch(f, t, random.Random(1))
        if t.propagate() is not None:
            continue
        for v in rng.sample(range(n), 2):
            if t.is_assigned(v):
                continue
            t.decide(2 * v + rng.randint(0, 1))
            if t.propagate() is not None:
                break
        else:
            ls.init_random()
            assigned = t.assignment()
            assert all(ls.values[v - 1] == b for v, b in assigned.items())
            for i, c in enumerate(ls.clauses):
                falsified = all(ls.values[x >> 1] == bool(x & 1) for x in c.lits)
                assert (i in ls.falsified) == falsified
                if falsified:
                    assert not t.satisfies(c)
            # a flip can never touch a trail variable
            for v in range(n):
                if t.is_assigned(v):
                    with pytest.raises(TabuViolation):
                        ls.flip(v)


def test_tabu_violation():
    ls = make_ls([[1, 2]], 2)
    ls.trail.decide(lit(1))
    with pytest.raises(TabuViolation):
        ls.flip(0)
    with pytest.raises(TabuViolation):
        ls.flip_delta(0)
    ls.flip(1)


def test_init_random_deterministic_and_copies_trail():
    a = make_ls([[1, 2, 3]], 8, seed=42)
    b = make_ls([[1, 2, 3]], 8, seed=42)
    a.trail.decide(lit(-5))
    b.trail.decide(lit(-5))
    a.init_random()
    b.init_random()
    assert a.values == b.values
    assert a.values[4] is False


def test_sync_overwrites_disagreeing_values():
    ls = make_ls([[1, 2], [-1, 3]], 3, [False, False, False])
    ls.trail.decide(lit(1))
    ls.trail.propagate()
    assert ls.sync() == 2
    assert ls.values == [True, False, True]
    assert recount(ls)[1] == sorted(ls.falsified) == []


def test_added_clause_is_tracked():
    ls = make_ls([[1, 2]], 2, [True, False])
    i = ls.add_clause(Formula.from_clauses([[-1]]).original[0])
    assert ls.falsified == [i]
    ls.flip(0)
    assert i not in ls.falsified and ls.falsified == [0]


def test_ls_only_solves_easy_and_never_proves_unsat():
    out = solve_ls_only(random_3sat(30, 3.0, 1), seed=3)
    assert out.status is Status.SAT
    out = solve_ls_only(pigeonhole(4, 3), seed=1, flip_limit=2000)
    assert out.status is Status.UNKNOWN and out.stats.flips == 2000


def test_ls_only_tracer_sees_every_flip():
    rec = Recorder()
    out = solve_ls_only(random_3sat(20, 3.5, 2), seed=0, flip_limit=500, tracer=rec)
    assert rec.flips == out.stats.flips and rec.tabu_violations == 0
