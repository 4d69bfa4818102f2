import json
import subprocess
import sys

import numpy as np
import pytest

from icpricing.cli import main
from icpricing.instance import load_dataset, save_dataset


@pytest.fixture
def ex1_path(tmp_path, ex1):
    path = tmp_path / "ex1.csv"
    save_dataset(ex1, path)
    return str(path)


def test_solve_example_one(ex1_path, capsys):
    assert main(["solve", "--data", ex1_path, "--delta", "0.06", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["prices"] == pytest.approx([0.99, 1.98])
    assert out["g_value"] == pytest.approx(4.0)
    assert out["strict_total"] == pytest.approx(3.96)


def test_solve_highs_backend(ex1_path, capsys):
    assert main(["solve", "--data", ex1_path, "--backend", "highs_milp", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["g_value"] == pytest.approx(4.0)


def test_solve_node_cap_exit_code(tmp_path):
    rng = np.random.default_rng(7)
    from icpricing.instance import TransactionDataset

    path = tmp_path / "big.csv"
    save_dataset(TransactionDataset(rng.uniform(0, 10, (12, 5)), rng.integers(0, 5, 12)), path)
    assert main(["solve", "--data", str(path), "--node-cap", "1", "--out", str(tmp_path / "s.txt")]) == 3
    assert "gap" in (tmp_path / "s.txt").read_text()


def test_evaluate_formats(ex1_path, capsys):
    assert main(["evaluate", "--data", ex1_path, "--prices", "1.2,2.3"]) == 0
    assert "1.2" in capsys.readouterr().out
    assert main(["evaluate", "--data", ex1_path, "--prices", "3,3", "--semantics", "strict", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "customer,revenue,purchased"
    assert all(line.endswith(",0") for line in lines[1:])
    assert main(["evaluate", "--data", ex1_path, "--prices", "1,3", "--semantics", "closure", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["total"] == pytest.approx(3.0)


@pytest.mark.parametrize("name, total", [("conservative", 3.0), ("cutoff", 3.0), ("average", None),
                                          ("lp-relaxation", None), ("random-historical", None)])
def test_heuristics(ex1_path, capsys, name, total):
    assert main(["heuristic", name, "--data", ex1_path, "--seed", "1", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    if total is not None:
        assert out["g_value"] == pytest.approx(total)


@pytest.mark.parametrize("model", ["uniform", "mnl", "mixed-logit", "conservative-tight", "cutoff-tight"])
def test_generate(tmp_path, model):
    out = tmp_path / "d.csv"
    args = ["generate", model, "--m", "12", "--n", "3", "--k", "2", "--seed", "4", "--out", str(out)]
    if model in ("mnl", "mixed-logit"):
        args += ["--utility", "high_utility", "--params-out", str(tmp_path / "params.ini")]
    assert main(args) == 0
    ds = load_dataset(out)
    assert ds.m >= 1
    if model in ("mnl", "mixed-logit"):
        assert (tmp_path / "params.ini").exists()


def test_generate_without_buyers_is_rejected(tmp_path):
    # at low utility a dozen customers usually all walk away
    assert main(["generate", "mixed-logit", "--m", "12", "--n", "3", "--seed", "4",
                 "--out", str(tmp_path / "d.csv")]) == 2


def test_generate_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["generate", "mnl", "--m", "30", "--n", "4", "--seed", "9", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_experiment_writes_report(tmp_path):
    out = tmp_path / "rep"
    assert main(["experiment", "approx_performance", "--m", "4", "--n", "2", "--seeds", "2",
                 "--out", str(out)]) == 0
    assert (out / "summary.md").read_text().startswith("# approx_performance")


def test_experiment_flagged_exit_code(tmp_path):
    assert main(["experiment", "approx_performance", "--m", "12", "--n", "5", "--seeds", "1", "--seed", "5",
                 "--node-cap", "1", "--out", str(tmp_path)]) == 3


@pytest.mark.parametrize("argv", [
    ["evaluate", "--data", "{data}", "--prices", "1"],
    ["evaluate", "--data", "{data}", "--prices", "a,b"],
    ["solve", "--data", "{data}", "--delta", "0"],
    ["solve"],
    ["experiment", "approx_performance", "--seeds", "0", "--out", "{tmp}"],
    ["generate", "cutoff-tight", "--m", "3", "--k", "5"],
])
def test_validation_exit_code(argv, ex1_path, tmp_path):
    argv = [a.format(data=ex1_path, tmp=tmp_path) for a in argv]
    assert main(argv) == 2


def test_bad_csv_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("p1,p2,choice\n1,2,7\n")
    assert main(["solve", "--data", str(bad)]) == 2


def test_missing_file_exit_code(tmp_path):
    assert main(["solve", "--data", str(tmp_path / "missing.csv")]) == 4


def test_unwritable_output_exit_code(ex1_path, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["experiment", "custom", "--data", ex1_path, "--out", str(blocker / "out")]) == 4


def test_module_entry_point(ex1_path):
    res = subprocess.run([sys.executable, "-m", "icpricing", "evaluate", "--data", ex1_path, "--prices", "1,2",
                          "--semantics", "closure"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "4" in res.stdout
