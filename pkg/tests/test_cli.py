import json
import subprocess
import sys
from pathlib import Path

import pytest

from flipfair.cli import main
from flipfair.fixtures import corpus_dir


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def write_instance(tmp_path, doc, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


ZERO_INSTANCE = {"n": 2, "k": 2, "values": [["0", "0", "0", "0"], ["0", "0", "0", "0"]]}


def test_audit_all_zero_instance(capsys, tmp_path):
    inst = write_instance(tmp_path, ZERO_INSTANCE)
    alloc = tmp_path / "alloc.json"
    alloc.write_text(json.dumps({"bundles": [[0, 1], [2, 3]]}))
    code, out = run_cli(capsys, ["audit", "--instance", inst, "--allocation", str(alloc)])
    assert code == 0
    doc = json.loads(out)
    level = doc["audit"]["allocation"]
    assert level["ef"] == level["eff1"] == level["effx"] == "1"
    assert level["gamma_approx"]["effx"] == 1.0


def test_solve_round_robin(capsys):
    inst = str(corpus_dir() / "genrr.instance.json")
    code, out = run_cli(capsys, ["solve", "--instance", inst, "--alg", "rr", "--order", "0,1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["allocation"]["bundles"] == [[0, 2, 4], [1, 3, 5]]
    assert doc["audit"]["allocation"]["eff1"] == "1"


def test_solve_missing_sequence_is_usage_error(capsys):
    inst = str(corpus_dir() / "genrr.instance.json")
    code, out = run_cli(capsys, ["solve", "--instance", inst, "--alg", "genrr"])
    assert code == 2
    assert "sequence" in json.loads(out)["error"]["message"]


def test_solve_with_sequence_and_script(capsys, tmp_path):
    inst = str(corpus_dir() / "genrr.instance.json")
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps([[0, 1], [1, 0], [0, 1]]))
    code, out = run_cli(
        capsys, ["solve", "--instance", inst, "--alg", "genrr", "--sequence", str(seq)]
    )
    assert code == 0
    assert json.loads(out)["allocation"]["bundles"] == [[0, 3, 4], [1, 2, 5]]

    ece_inst = str(corpus_dir() / "ece_bad.instance.json")
    facts = json.loads((corpus_dir() / "ece_bad.facts.json").read_text())
    script = tmp_path / "script.json"
    script.write_text(json.dumps(facts["script"]))
    code, out = run_cli(
        capsys, ["solve", "--instance", ece_inst, "--alg", "ece", "--script", str(script)]
    )
    assert code == 0
    assert json.loads(out)["allocation"]["bundles"][1] == [2, 3, 4]


def test_oracle_mnw(capsys):
    inst = str(corpus_dir() / "mnw_tight.instance.json")
    code, out = run_cli(capsys, ["oracle", "mnw", "--instance", inst])
    assert code == 0
    doc = json.loads(out)
    assert doc["optimum"] == [[0, 1, 2], [3, 4, 5]]
    assert doc["optima_count"] == 1
    assert doc["positive_agents"] == [0, 1]
    assert "optima" not in doc


def test_oracle_leximin_all_optima(capsys):
    inst = str(corpus_dir() / "appD2.instance.json")
    code, out = run_cli(capsys, ["oracle", "leximin", "--instance", inst, "--all-optima"])
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["value_vector"] == ["31", "34", "50"]
    assert doc["optima"] == [[[0, 7, 8], [2, 3, 5], [1, 4, 6]]]


def test_oracle_po(capsys, tmp_path):
    inst = write_instance(tmp_path, {"n": 2, "k": 1, "values": [["1", "2"], ["2", "1"]]})
    alloc = tmp_path / "alloc.json"
    alloc.write_text(json.dumps({"bundles": [[0], [1]]}))
    code, out = run_cli(capsys, ["oracle", "po", "--instance", inst, "--allocation", str(alloc)])
    assert code == 0
    doc = json.loads(out)
    assert doc["pareto_optimal"] is False
    assert doc["certificate"] == [[1], [0]]


def test_oracle_exists(capsys):
    inst = str(corpus_dir() / "genrr.instance.json")
    code, out = run_cli(
        capsys, ["oracle", "exists", "--instance", inst, "--notion", "effx", "--gamma", "1"]
    )
    assert code == 0
    assert json.loads(out)["found"] == [[0, 4, 5], [1, 2, 3]]


def test_oracle_budget_refusal(capsys, tmp_path):
    doc = {"n": 4, "k": 4, "values": [["1"] * 16 for _ in range(4)]}
    inst = write_instance(tmp_path, doc)
    code, out = run_cli(capsys, ["oracle", "mnw", "--instance", inst])
    assert code == 3
    err = json.loads(out)["error"]
    assert err["type"] == "budget" and err["count"] == 63063000


def test_reproduce_fixture(capsys):
    code, out = run_cli(capsys, ["reproduce", "appD2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    labels = [f["label"] for f in doc["fixture"]["facts"]]
    assert any("32/33" in lab for lab in labels)
    assert any("(50, 34, 31)" in lab for lab in labels)


def test_reproduce_all(capsys):
    code, out = run_cli(capsys, ["reproduce", "all"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert len(doc["fixtures"]) == 9


def test_reproduce_unknown_name(capsys):
    code, out = run_cli(capsys, ["reproduce", "nope"])
    assert code == 2


def test_reproduce_failing_fixture_exits_4(capsys, monkeypatch):
    import flipfair.fixtures as fixtures

    def broken():
        fx = fixtures.build_ex1()
        bad = fixtures.Fact(
            "alloc_gamma",
            "deliberately wrong expectation",
            {"alloc": "shaded", "notion": "eff1", "equals": "1/2"},
        )
        return fixtures.Fixture(
            fx.name, fx.constants, fx.instance, fx.allocations, fx.script, (bad,)
        )

    monkeypatch.setitem(fixtures._BUILDERS, "ex1", broken)
    code, out = run_cli(capsys, ["reproduce", "ex1"])
    assert code == 4
    doc = json.loads(out)
    assert doc["pass"] is False
    assert doc["fixture"]["facts"][0]["pass"] is False
    assert "got" in doc["fixture"]["facts"][0]["detail"]


def test_gen_and_sidecar(capsys, tmp_path):
    out_path = tmp_path / "gen.json"
    code, out = run_cli(
        capsys,
        ["gen", "--family", "ordered", "--n", "3", "--k", "2", "--seed", "5",
         "--out", str(out_path)],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["sidecar"]["family"] == "ordered"
    assert out_path.exists()
    assert Path(str(out_path) + ".sidecar.json").exists()


def test_gen_usage_error(capsys):
    code, out = run_cli(capsys, ["gen", "--family", "rho-bounded", "--n", "2", "--k", "2", "--seed", "1"])
    assert code == 2  # rho missing


def test_experiment_deterministic(capsys):
    argv = [
        "experiment", "--family", "ordered", "--alg", "ece", "--notion", "effx",
        "--trials", "25", "--n", "3", "--k", "3", "--seed", "1",
    ]
    code1, out1 = run_cli(capsys, argv)
    code2, out2 = run_cli(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    from fractions import Fraction

    assert Fraction(doc["worst"]["gamma"]) >= Fraction(1, 2)


def test_experiment_report_files(capsys, tmp_path):
    outdir = tmp_path / "report"
    code, out = run_cli(
        capsys,
        ["experiment", "--family", "top-n-agreement", "--alg", "ece-swaps",
         "--notion", "ef", "--trials", "10", "--n", "3", "--k", "2",
         "--rho", "2", "--seed", "3", "--report-dir", str(outdir)],
    )
    assert code == 0
    doc = json.loads(out)
    assert sorted(Path(p).name for p in doc["report_files"]) == ["gamma_hist.png", "trials.csv"]
    csv_text = (outdir / "trials.csv").read_text().splitlines()
    assert csv_text[0] == "trial,seed,gamma,gamma_approx,rho"
    assert len(csv_text) == 11
    assert (outdir / "gamma_hist.png").stat().st_size > 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "flipfair.cli", "reproduce", "ex1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
