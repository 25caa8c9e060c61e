import json

import pandas as pd
import pytest

import main
from coloring import assignment_from_json, evaluate
from hypergraph import load_hypergraph


def run(argv, capsys):
    code = main.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_robust_lp_round(capsys, data_dir):
    path = data_dir / "instance_b.ecc"
    code, out, _ = run(["solve", "--variant", "robust", "--budget", 1, "--algo", "lp-round",
                        "--eps", 0.333333, path], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["deleted"] == [2, 3]
    assert data["mistakes"] == 0
    assert data["param"] == "eps=0.333333"

    variant, assignment = assignment_from_json(out)
    assert evaluate(load_hypergraph(path), assignment, variant).mistakes == 0


def test_solve_greedy_with_trace(capsys, tmp_path, data_dir):
    trace = tmp_path / "trace.csv"
    code, out, _ = run(["solve", "--variant", "global", "--budget", 2, "--algo", "greedy",
                        "--trace", trace, data_dir / "instance_a.ecc"], capsys)
    assert code == 0
    assert json.loads(out)["mistakes"] == 0
    frame = pd.read_csv(trace)
    assert frame["node"].tolist() == [2, 3]


def test_solve_exact(capsys, data_dir):
    code, out, _ = run(["solve", "--variant", "local", "--budget", 1, "--algo", "exact",
                        "--kernelize", data_dir / "instance_a.ecc"], capsys)
    assert code == 0
    assert json.loads(out)["optimum"] == 1


def test_decide_answers(capsys, data_dir):
    path = data_dir / "instance_a.ecc"
    code, out, _ = run(["decide", "--variant", "local", "--budget", 1, "--mistakes", 0, path],
                       capsys)
    assert code == 1
    assert json.loads(out)["answer"] == "no"
    code, out, _ = run(["decide", "--variant", "local", "--budget", 1, "--mistakes", 1,
                        "--method", "enumeration", path], capsys)
    assert code == 0
    assert len(json.loads(out)["removed_edges"]) == 1


def test_stats_monochromatic(capsys, ecc_file):
    path = ecc_file("4 3 3\n1 1 2\n1 2 3 4\n1 1 4\n")
    code, out, _ = run(["stats", "--nodes", path], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["structure"]["frac_chromatic_gt_1"] == 0
    assert data["summary"]["nodes"] == 4
    assert len(data["nodes"]) == 4


def test_lp_command_dumps_model(capsys, tmp_path, data_dir):
    dump = tmp_path / "b.lp"
    code, out, _ = run(["lp", "--variant", "robust", "--budget", 1, "--dump-lp", dump,
                        data_dir / "instance_b.ecc"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["lp_value"] == pytest.approx(0.0)
    assert data["integral"] is False
    assert dump.read_text(encoding="utf-8").startswith("\\ robust(b=1) relaxation")


def test_generate(capsys, tmp_path):
    out_path = tmp_path / "gen.ecc"
    code, out, _ = run(["generate", "--nodes", 20, "--edges", 30, "--seed", 3,
                        "--out", out_path], capsys)
    assert code == 0
    hg = load_hypergraph(out_path)
    assert (hg.num_nodes, hg.num_edges) == (20, 30)


def test_experiment_command(capsys, tmp_path, data_dir):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({
        "datasets": [str(data_dir / "instance_a.ecc")],
        "variants": ["local"],
        "algorithms": ["greedy"],
        "budgets": {"local": [1, 2]},
    }), encoding="utf-8")
    out_path = tmp_path / "runs.csv"
    code, out, _ = run(["experiment", "--config", config, "--out", out_path], capsys)
    assert code == 0
    assert "2 rows written" in out
    assert (tmp_path / "runs.summary.csv").exists()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve", "--variant", "local", "--budget", "1", "x.ecc"],
        ["solve", "--variant", "local", "--budget", "1", "--algo", "greedy", "--rho", "0.5",
         "x.ecc"],
        ["solve", "--variant", "local", "--budget", "1", "--algo", "lp-round", "--eps", "0.2",
         "x.ecc"],
        ["solve", "--variant", "robust", "--budget", "1", "--algo", "lp-round", "--eps", "0.7",
         "x.ecc"],
        ["solve", "--variant", "local", "--budget", "1", "--algo", "exact", "--trace", "t.csv",
         "x.ecc"],
        ["decide", "--variant", "local", "--budget", "1", "x.ecc"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_missing_file(capsys, tmp_path):
    code, _, err = run(["stats", tmp_path / "missing.ecc"], capsys)
    assert code == 3
    assert err.startswith("ecc: error:")


def test_bad_input_file(capsys, ecc_file):
    path = ecc_file("3 1 2\n1 1 9\n")
    code, _, err = run(["stats", path], capsys)
    assert code == 3
    assert ":2:" in err


def test_invalid_budget(capsys, data_dir):
    code, _, _ = run(["solve", "--variant", "local", "--budget", 0, "--algo", "greedy",
                      data_dir / "instance_a.ecc"], capsys)
    assert code == 3


def test_guard_exit(capsys, monkeypatch, data_dir):
    monkeypatch.setattr("algorithms.exact.BRANCHING_MAX_DEPTH", 0)
    code, _, err = run(["solve", "--variant", "local", "--budget", 1, "--algo", "exact",
                        data_dir / "instance_a.ecc"], capsys)
    assert code == 4
    assert "guard" in err


def test_lp_command_dumps_edgeless_model(capsys, tmp_path, ecc_file):
    dump = tmp_path / "empty.lp"
    code, out, _ = run(["lp", "--variant", "local", "--budget", 1, "--dump-lp", dump,
                        ecc_file("3 0 2\n")], capsys)
    assert code == 0
    assert json.loads(out)["lp_value"] == 0
    assert " obj: 0" in dump.read_text(encoding="utf-8").splitlines()


def test_experiment_with_non_numeric_budget(capsys, tmp_path, data_dir):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({
        "datasets": [str(data_dir / "instance_a.ecc")],
        "variants": ["local"],
        "algorithms": ["greedy"],
        "budgets": {"local": ["1"]},
    }), encoding="utf-8")
    code, _, err = run(["experiment", "--config", config, "--out", tmp_path / "runs.csv"],
                       capsys)
    assert code == 3
    assert "must be numbers" in err


@pytest.mark.parametrize(
    "algo_args",
    [
        ["--algo", "greedy"],
        ["--algo", "lp-round", "--eps", 0.25],
        ["--algo", "exact"],
    ],
)
def test_solve_output_is_reproducible(capsys, data_dir, algo_args):
    argv = ["solve", "--variant", "robust", "--budget", 1, *algo_args,
            data_dir / "instance_b.ecc"]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first[0] == 0
    assert first[1] == second[1]
