import csv
import io
import json
import os
import subprocess
import sys

import pytest

from gr1perf.gr1solve import SolverOptions, solve_gr1
from gr1perf.harness.bench import COLUMNS, BenchConfig, run_bench
from gr1perf.harness.cli import run_cli
from gr1perf.harness.corpus import CORPUS_DIR, load_corpus, write_corpus
from gr1perf.harness.families import generate_counter_family
from gr1perf.harness.validate import validate_all

LISTINGS = CORPUS_DIR / "listings"


def small_bench(reps=3):
    specs = [("eun", generate_counter_family(8, "EUN_GOOD")),
             ("efp", generate_counter_family(3, "EFP_GOOD"))]
    return run_bench(BenchConfig(specs, "both", reps=reps))


def test_bench_rows_and_columns():
    rep = small_bench()
    assert len(rep.rows) == 2 * 2 * 3 * 8
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert list(rows[0]) == COLUMNS
    assert all(int(r["wall_ns"]) > 0 for r in rows)


def test_bench_counters_identical_across_reps():
    rep = small_bench()
    seen = {}
    for r in rep.rows:
        key = (r["spec"], r["engine"], r["efp"], r["eun"], r["fpr"])
        counters = tuple(r[c] for c in ("z_sweeps", "js_body", "y_iters", "x_iters", "cpre_calls"))
        assert seen.setdefault(key, counters) == counters


def test_bench_baseline_ratio_is_one():
    q = small_bench().quartiles()
    for engine in ("gr1", "rabin"):
        assert all(v == 1.0 for v in q[(engine, "base")].values())
        assert len(q) == 16


def test_bench_json_has_quartiles():
    d = json.loads(small_bench(reps=1).to_json())
    assert {"engine", "config", "MIN", "Q1", "Q2", "Q3", "MAX"} <= set(d["quartiles"][0])


def test_bench_rejects_zero_reps():
    with pytest.raises(ValueError):
        BenchConfig([], reps=0)


def test_validate_clean_corpus(corpus):
    rep = validate_all(corpus)
    assert rep.ok, rep.summary()
    assert {"oracle", "determinacy", "verdict", "winning", "monotone", "strategy", "core"} <= set(rep.checks)


def test_validate_catches_a_broken_solver():
    def broken(g, opts=SolverOptions(), seed=None):
        r = solve_gr1(g, opts, seed)
        if opts.fpr:
            r.winning = r.winning & ~g.J_s[0]
        return r

    corpus = [("efp", generate_counter_family(3, "EFP_GOOD"))]
    rep = validate_all(corpus, solvers={"gr1": broken})
    assert not rep.ok
    assert rep.failed("winning")


def test_validate_empty_corpus_warns():
    rep = validate_all([])
    assert rep.ok and rep.warnings == ["empty corpus"]


def test_corpus_files_match_generators(tmp_path):
    write_corpus(tmp_path)
    for p in sorted((tmp_path).rglob("*.spec")):
        shipped = CORPUS_DIR / p.relative_to(tmp_path)
        assert shipped.read_text() == p.read_text(), shipped


def test_corpus_is_small(corpus):
    assert len(corpus) >= 20
    assert all(spec.state_bits <= 16 for _, spec in corpus)


# -- command line -------------------------------------------------------------------


def cli(capsys, *argv):
    code = run_cli([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_check_unrealizable(capsys):
    code, out, _ = cli(capsys, "check", "--efp", "--eun", "--fpr", LISTINGS / "listing3.spec")
    assert code == 1
    d = json.loads(out)
    assert d["realizable"] is False and d["stats"]["js_body_executions"] == 2


def test_cli_check_realizable_rabin(capsys):
    code, out, _ = cli(capsys, "check", "--rabin", LISTINGS / "listing1.spec")
    assert code == 0 and json.loads(out)["engine"] == "rabin"


def test_cli_core(capsys):
    code, out, _ = cli(capsys, "core", "--sets", LISTINGS / "listing7.spec")
    d = json.loads(out)
    assert code == 0 and d["core"] == ["g1", "g4"]
    assert d["checks_run"] == 6


def test_cli_core_on_realizable(capsys):
    code, _, err = cli(capsys, "core", LISTINGS / "listing1.spec")
    assert code == 1 and "realizable" in err


def test_cli_synth(capsys):
    code, out, _ = cli(capsys, "synth", "--fpr", LISTINGS / "listing5.spec")
    assert code == 0 and json.loads(out)["role"] == "sys"
    code, out, _ = cli(capsys, "synth", LISTINGS / "listing9.spec")
    assert code == 1 and json.loads(out)["role"] == "env"


def test_cli_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text("sys boolean x; gar x = !x;")
    code, _, err = cli(capsys, "check", bad)
    assert code == 2 and "syntax error" in err


def test_cli_usage_errors(capsys, tmp_path):
    assert cli(capsys, "check")[0] == 2
    assert cli(capsys, "frobnicate")[0] == 2
    assert cli(capsys, "check", tmp_path / "missing.spec")[0] == 2
    assert cli(capsys, "gen")[0] == 2


def test_cli_gen(capsys, tmp_path):
    code, out, _ = cli(capsys, "gen", "DEADLOCK", 7)
    assert code == 0 and "Int(0..7)" in out
    code, out, _ = cli(capsys, "gen", "--corpus", tmp_path)
    assert code == 0 and len(load_corpus(tmp_path)) == len(out.split())


def test_cli_bench(capsys, tmp_path):
    prefix = tmp_path / "b"
    code, out, _ = cli(capsys, "bench", "--reps", 2, "--seed", 3, "--out", prefix,
                       LISTINGS / "listing1.spec")
    assert code == 0 and "efp+eun+fpr" in out
    assert (tmp_path / "b.csv").read_text().startswith(",".join(COLUMNS))
    assert json.loads((tmp_path / "b.json").read_text())["quartiles"]


def test_cli_validate(capsys):
    code, out, _ = cli(capsys, "validate", LISTINGS / "listing8.spec")
    assert code == 0 and "core" in out


def test_module_entry_point_and_pure_backend():
    env = dict(os.environ, GR1PERF_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "import gr1perf.symcore as s; print(s.BACKEND)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    r = subprocess.run([sys.executable, "-m", "gr1perf", "check", str(LISTINGS / "listing1.spec")],
                       env=env, capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["realizable"]
