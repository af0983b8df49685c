import csv
import subprocess
import sys

import pytest

from sathys import bench
from sathys.cli import main
from sathys.cnf import Formula, parse_dimacs, to_dimacs, verify_model
from sathys.generators import pigeonhole, random_3sat
from sathys.outcome import Status

from conftest import TWO_MUS_FORMULA


def write(path, formula):
    path.write_text(to_dimacs(formula))
    return path


def parse_v_lines(out):
    lits = [int(x) for line in out.splitlines() if line.startswith("v ") for x in line[2:].split()]
    assert lits[-1] == 0
    return {abs(x): x > 0 for x in lits[:-1]}


def test_solve_unsat_exit_code(tmp_path, capsys):
    f = write(tmp_path / "two_mus.cnf", Formula.from_clauses(TWO_MUS_FORMULA, 5))
    assert main(["solve", str(f)]) == 20
    out = capsys.readouterr().out
    assert "s UNSATISFIABLE" in out and "\nv " not in out


@pytest.mark.parametrize("mode", ["hybrid", "cdcl", "ls-only"])
def test_solve_sat_model_parses_back(tmp_path, capsys, mode):
    g = random_3sat(30, 3.0, 4)
    f = write(tmp_path / "r.cnf", g)
    assert main(["solve", str(f), "--mode", mode, "--verify"]) == 10
    out = capsys.readouterr().out
    assert "c model verified" in out and "s SATISFIABLE" in out
    model = parse_v_lines(out)
    assert len(model) == 30 and verify_model(g, model)
    assert all(len(line.split()) <= 11 for line in out.splitlines() if line.startswith("v "))


def test_solve_stats_lines(tmp_path, capsys):
    f = write(tmp_path / "php.cnf", pigeonhole(4, 3))
    main(["solve", str(f)])
    out = capsys.readouterr().out
    assert "c flips=" in out and "c conflicts=" in out and "c time=" not in out
    main(["solve", str(f), "--stats"])
    assert "c time=" in capsys.readouterr().out


@pytest.mark.parametrize("text", ["p cnf 2 1\n1 3 0\n", "garbage\n", "p cnf 2 1\n1 x 0\n"])
def test_malformed_input_is_an_error(tmp_path, capsys, text):
    f = tmp_path / "bad.cnf"
    f.write_text(text)
    code = main(["solve", str(f)])
    assert code not in (0, 10, 20)
    assert "line" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.cnf")]) == 1


def test_timeout_gives_unknown(tmp_path, capsys):
    f = write(tmp_path / "php.cnf", pigeonhole(9, 8))
    assert main(["solve", str(f), "--timeout", "0.2"]) == 0
    assert "s UNKNOWN" in capsys.readouterr().out


def test_timeout_from_environment(tmp_path, capsys, monkeypatch):
    f = write(tmp_path / "php.cnf", pigeonhole(9, 8))
    monkeypatch.setenv("SATHYS_TIMEOUT", "0.1")
    assert main(["solve", str(f), "--mode", "cdcl"]) == 0


def test_gen_random_is_deterministic(tmp_path, capsys):
    args = ["gen", "random-3sat", "--vars", "20", "--ratio", "3.0", "--seed", "7"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "rand3_n20_r3_s7.cnf").read_bytes()
    b = (tmp_path / "b" / "rand3_n20_r3_s7.cnf").read_bytes()
    assert a == b
    f = parse_dimacs(a)
    assert f.num_vars == 20 and len(f.original) == 60
    assert all(len(c.lits) == 3 for c in f.original)


def test_gen_pigeonhole(tmp_path, capsys):
    assert main(["gen", "pigeonhole", "--pigeons", "3", "--holes", "2", "--out", str(tmp_path)]) == 0
    f = parse_dimacs((tmp_path / "php_3_2.cnf").read_bytes())
    # 3 at-least-one clauses, 2 holes * C(3,2) at-most-one clauses
    assert f.num_vars == 6 and len(f.original) == 9


def test_gen_rejects_bad_parameters(tmp_path, capsys):
    assert main(["gen", "random-3sat", "--vars", "2", "--out", str(tmp_path)]) == 2
    assert main(["gen", "pigeonhole", "--pigeons", "0", "--out", str(tmp_path)]) == 2


def toy_corpus(root, count=20):
    root.mkdir(exist_ok=True)
    for i in range(count):
        f = random_3sat(12 + i % 5, 3.5 + (i % 4) * 0.5, i) if i % 4 else pigeonhole(3 + i % 3, 2 + i % 3)
        write(root / f"toy{i:02d}.cnf", f)
    (root / "README.txt").write_text("not an instance")
    return root


def test_bench_toy_corpus(tmp_path):
    corpus = toy_corpus(tmp_path / "corpus")
    res = bench.run_bench(corpus, modes=("hybrid", "cdcl"), timeout=30, jobs=2, out_dir=tmp_path / "out")
    assert len(res.records) == 40 and res.disagreements == []
    assert all(r.status is not Status.UNKNOWN for r in res.records)
    with open(tmp_path / "out" / "results.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 40 and set(rows[0]) >= {"instance", "mode", "status", "seconds", "flips", "note"}
    with open(tmp_path / "out" / "cactus.csv") as fh:
        cactus = list(csv.DictReader(fh))
    assert len(cactus) == 40


def test_bench_empty_and_missing_corpus(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    res = bench.run_bench(tmp_path / "empty")
    assert res.records == [] and res.disagreements == []
    assert main(["bench", str(tmp_path / "missing")]) == 1
    assert main(["bench", str(tmp_path / "empty"), "--modes", "nonsense"]) == 1


def test_bench_timeouts_become_unknown(tmp_path):
    corpus = tmp_path / "hard"
    corpus.mkdir()
    for p in (9, 10):
        write(corpus / f"php{p}.cnf", pigeonhole(p, p - 1))
    res = bench.run_bench(corpus, modes=("hybrid", "cdcl"), timeout=0.01)
    assert [r.status for r in res.records] == [Status.UNKNOWN] * 4
    assert res.cactus() == {"hybrid": [], "cdcl": []}


def test_bench_records_bad_files(tmp_path):
    corpus = tmp_path / "c"
    corpus.mkdir()
    (corpus / "bad.cnf").write_text("p cnf 1 1\n5 0\n")
    res = bench.run_bench(corpus, modes=("cdcl",))
    assert res.records[0].status is Status.UNKNOWN and "DimacsError" in res.records[0].note


def test_check_agreement_flags_contradictions():
    recs = [bench.RunRecord("x", "hybrid", Status.SAT, 0.1, 0),
            bench.RunRecord("x", "cdcl", Status.UNSAT, 0.1, 0),
            bench.RunRecord("y", "hybrid", Status.UNKNOWN, 0.1, 0),
            bench.RunRecord("y", "cdcl", Status.UNSAT, 0.1, 0)]
    assert bench.check_agreement(recs) == ["x: cdcl=UNSAT, hybrid=SAT"]


def test_bench_cli_disagreement_exit(tmp_path, capsys, monkeypatch):
    def fake(corpus, **kw):
        return bench.BenchResult([], ["x: cdcl=UNSAT, hybrid=SAT"])
    monkeypatch.setattr(bench, "run_bench", fake)
    assert main(["bench", str(tmp_path)]) == 3
    assert "disagreement" in capsys.readouterr().err


def test_mus_subcommand(tmp_path, capsys):
    f = write(tmp_path / "two_mus.cnf", Formula.from_clauses(TWO_MUS_FORMULA, 5))
    assert main(["mus", str(f)]) == 0
    out = capsys.readouterr().out
    assert "c 2 MUS" in out
    g = tmp_path / "cycle.cnf"
    g.write_text("p cnf 3 4\n-1 -2 -3 0\n1 -2 0\n2 -3 0\n3 -1 0\n")
    assert main(["mus", str(g), "--assignment", "1 2 3"]) == 0
    assert "critical" in capsys.readouterr().out
    assert main(["mus", str(g), "--assignment", "1 2"]) == 1


def test_module_entry_point(tmp_path):
    f = write(tmp_path / "two_mus.cnf", Formula.from_clauses(TWO_MUS_FORMULA, 5))
    proc = subprocess.run([sys.executable, "-m", "sathys", "solve", str(f)], capture_output=True, text=True)
    assert proc.returncode == 20 and "s UNSATISFIABLE" in proc.stdout
