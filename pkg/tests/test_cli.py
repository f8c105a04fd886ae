import hashlib
import json

import pytest

from qaoaforge import cli
from qaoaforge.errors import OptimizerDivergence


@pytest.fixture
def c4_file(tmp_path):
    f = tmp_path / "c4.json"
    f.write_text(json.dumps({
        "type": "maxcut", "vertices": 4,
        "edges": [[0, 1], [1, 2], [2, 3], [3, 0]],
    }))
    return f


@pytest.fixture
def knapsack_file(tmp_path):
    f = tmp_path / "knap.json"
    f.write_text(json.dumps({
        "type": "knapsack", "values": [4, 4, 2, 2, 4],
        "weights": [4, 3, 1, 2, 1], "capacity": 7,
    }))
    return f


def solve_args(problem, out, extra=()):
    return ["solve", str(problem), "--layers", "2", "--iters", "300",
            "--restarts", "6", "--seed", "1", "--out", str(out), *extra]


def test_solve_writes_artifacts_and_finds_cut(c4_file, tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(solve_args(c4_file, out)) == 0
    for name in ("manifest.json", "run.json", "histogram.csv", "trace.csv"):
        assert (out / name).exists()
    record = json.loads((out / "run.json").read_text())
    assert record["best_bitstring"] in ("0101", "1010")
    assert record["best_cost"] == -4.0
    assert "best bitstring" in capsys.readouterr().out

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["problem"]["sha256"] == hashlib.sha256(c4_file.read_bytes()).hexdigest()
    assert manifest["circuit"]["layers"] == 2
    assert manifest["optimizer"]["seed"] == 1


def test_histogram_csv_sorted_by_energy(c4_file, tmp_path):
    out = tmp_path / "run"
    assert cli.main(solve_args(c4_file, out)) == 0
    lines = (out / "histogram.csv").read_text().strip().split("\n")
    assert lines[0] == "bitstring,basis_index,scaled_energy,objective,probability"
    energies = [float(line.split(",")[2]) for line in lines[1:]]
    assert energies == sorted(energies)
    assert len(energies) == 16


def test_trace_csv_has_initial_row(c4_file, tmp_path):
    out = tmp_path / "run"
    assert cli.main(solve_args(c4_file, out)) == 0
    lines = (out / "trace.csv").read_text().strip().split("\n")
    assert lines[0] == "iter,energy"
    assert lines[1].startswith("0,")
    assert len(lines) == 2 + 300
    record = json.loads((out / "run.json").read_text())
    best = record["best_restart"]
    assert float(lines[1].split(",")[1]) == record["initial_energies"][best]


def test_solve_reproducible_from_same_inputs(c4_file, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli.main(solve_args(c4_file, out1)) == 0
    assert cli.main(solve_args(c4_file, out2)) == 0
    r1 = json.loads((out1 / "run.json").read_text())
    r2 = json.loads((out2 / "run.json").read_text())
    r1.pop("wall_time_s"), r2.pop("wall_time_s")
    assert r1 == r2
    assert (out1 / "histogram.csv").read_text() == (out2 / "histogram.csv").read_text()


def test_exact_and_sampled_modes_find_optima(c4_file, tmp_path):
    # the ring has two optimal cuts, so the two modes may pick either one
    out0, out1 = tmp_path / "exact", tmp_path / "shots"
    assert cli.main(solve_args(c4_file, out0, ("--shots", "0"))) == 0
    assert cli.main(solve_args(c4_file, out1, ("--shots", "1000000"))) == 0
    r0 = json.loads((out0 / "run.json").read_text())
    r1 = json.loads((out1 / "run.json").read_text())
    assert r0["best_bitstring"] in {"0101", "1010"}
    assert r1["best_bitstring"] in {"0101", "1010"}
    assert r0["best_cost"] == -4 and r1["best_cost"] == -4
    assert r0["histogram_mode"] == "exact"
    assert r1["histogram_mode"] == "counts"
    assert sum(r1["histogram"].values()) == 1000000


def test_solve_optimizer_and_squash_flags(c4_file, tmp_path):
    out = tmp_path / "gd"
    args = ["solve", str(c4_file), "--optimizer", "gd", "--iters", "40",
            "--restarts", "1", "--squash", "tanh", "--out", str(out)]
    assert cli.main(args) == 0
    record = json.loads((out / "run.json").read_text())
    assert record["method"] == "gd"
    assert record["config"]["squash"] == "tanh"


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "maxcut",\n "vertices": }')
    assert cli.main(["solve", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err


def test_missing_file_exits_2(tmp_path):
    assert cli.main(["solve", str(tmp_path / "nope.json")]) == 2


def test_size_cap_exits_3(tmp_path):
    big = tmp_path / "big.json"
    big.write_text(json.dumps({
        "type": "maxcut", "vertices": 25,
        "edges": [[i, (i + 1) % 25] for i in range(25)],
    }))
    assert cli.main(["solve", str(big), "--iters", "1"]) == 3
    assert cli.main(["brute", str(big)]) == 3


def test_optimizer_abort_exits_4(c4_file, monkeypatch):
    def explode(*args, **kwargs):
        raise OptimizerDivergence("boom")

    monkeypatch.setattr(cli, "optimize", explode)
    assert cli.main(["solve", str(c4_file)]) == 4


def test_scan_grid(c4_file, tmp_path):
    out = tmp_path / "grid.csv"
    assert cli.main(["scan", str(c4_file), "--resolution", "2", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0].startswith("beta\\gamma,")
    assert len(lines) == 3
    assert len(lines[1].split(",")) == 3


def test_scan_scaled_vs_raw_differ(knapsack_file, tmp_path):
    a, b = tmp_path / "scaled.csv", tmp_path / "raw.csv"
    assert cli.main(["scan", str(knapsack_file), "--resolution", "9", "--out", str(a)]) == 0
    assert cli.main(["scan", str(knapsack_file), "--resolution", "9", "--no-scale",
                     "--out", str(b)]) == 0

    def values(path):
        rows = path.read_text().strip().split("\n")[1:]
        return [[float(v) for v in row.split(",")[1:]] for row in rows]

    va, vb = values(a), values(b)
    diff = max(abs(x - y) for ra, rb in zip(va, vb) for x, y in zip(ra, rb))
    assert diff > 0.0


def test_scan_range_flag(c4_file, tmp_path):
    out = tmp_path / "grid.csv"
    assert cli.main(["scan", str(c4_file), "--resolution", "3",
                     "--range", "0:3.14159", "--out", str(out)]) == 0
    header = out.read_text().split("\n")[0]
    assert header.split(",")[1] == "0"
    assert cli.main(["scan", str(c4_file), "--range", "oops", "--out", str(out)]) == 2


def test_brute_square_graph(c4_file, capsys):
    assert cli.main(["brute", str(c4_file)]) == 0
    out = capsys.readouterr().out
    assert "optimum cost  -4" in out
    assert "1010" in out and "0101" in out


def test_brute_empty_graph_all_optimal(tmp_path, capsys):
    f = tmp_path / "empty.json"
    f.write_text(json.dumps({"type": "maxcut", "vertices": 3, "edges": []}))
    assert cli.main(["brute", str(f)]) == 0
    out = capsys.readouterr().out
    assert "optimum cost  0" in out
    assert "optima        8" in out


def test_brute_loose_knapsack_prefers_all_ones(tmp_path, capsys):
    f = tmp_path / "loose.json"
    f.write_text(json.dumps({
        "type": "knapsack", "values": [1, 2], "weights": [1, 1], "capacity": 5,
    }))
    assert cli.main(["brute", str(f)]) == 0
    assert "11" in capsys.readouterr().out


def test_verify_suite_exit_codes(capsys):
    assert cli.main(["verify", "--suite", "gates"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_env_var_defaults(c4_file, tmp_path, monkeypatch):
    monkeypatch.setenv("QAOAFORGE_SEED", "9")
    monkeypatch.setenv("QAOAFORGE_ITERS", "25")
    out = tmp_path / "env_run"
    assert cli.main(["solve", str(c4_file), "--restarts", "1", "--out", str(out)]) == 0
    record = json.loads((out / "run.json").read_text())
    assert record["config"]["seed"] == 9
    assert record["config"]["max_iters"] == 25


def test_bad_env_var_exits_2(c4_file, monkeypatch, capsys):
    monkeypatch.setenv("QAOAFORGE_ITERS", "many")
    assert cli.main(["solve", str(c4_file)]) == 2
    assert "error" in capsys.readouterr().err
