import json
import math

import numpy as np
import pytest

from cloneforge import BipartitePureState, ShiftedSetSpec, build_group_shifted, group_from_name
from cloneforge.cli import main, state_set_payload


def write_state_set(path, states):
    path.write_text(json.dumps(state_set_payload(states)), encoding="utf-8")


def run(argv):
    return main([str(a) for a in argv])


def test_clone_sim_qubit_pair(tmp_path):
    out = tmp_path / "report.json"
    code = run(["clone-sim", "--group", "Z2", "--weights", "0.7,0.3", "--out", out])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == 1
    assert report["min_fidelity"] >= 1 - 1e-9
    assert report["input_independence_gap"] <= 1e-9
    assert report["status"] == "ok"
    assert len(report["per_branch"]) == 4
    assert report["group"]["cayley"] == [[0, 1], [1, 0]]


def test_clone_sim_s3(tmp_path):
    out = tmp_path / "report.json"
    code = run(["clone-sim", "--group", "S3",
                "--weights", "0.25,0.2,0.18,0.15,0.12,0.1", "--out", out])
    assert code == 0
    assert json.loads(out.read_text())["min_fidelity"] >= 1 - 1e-9


def test_clone_sim_shift_side_a(tmp_path):
    out = tmp_path / "report.json"
    code = run(["clone-sim", "--group", "Z3", "--weights", "0.5,0.3,0.2",
                "--shift-side", "A", "--out", out])
    assert code == 0


def test_clone_sim_two_copies_unequal_blocks(tmp_path):
    out = tmp_path / "report.json"
    code = run(["clone-sim", "--group", "Z2", "--copies", "2",
                "--weights", "0.4,0.1,0.3,0.2", "--out", out])
    assert code == 2
    report = json.loads(out.read_text())
    assert report["status"] == "fidelity_deviation"
    w = np.array([0.4, 0.1, 0.3, 0.2]).reshape(2, 2)
    oracle = float(np.sum(w / np.sqrt(2 * w.sum(axis=0)[None, :])) ** 2)
    assert abs(report["min_fidelity"] - oracle) <= 1e-9


def test_clone_sim_two_copies_equal_blocks(tmp_path):
    out = tmp_path / "report.json"
    code = run(["clone-sim", "--group", "Z3", "--copies", "2",
                "--weights", "0.2,0.1,0.2,0.15,0.1,0.25", "--out", out])
    assert code == 0


def test_clone_sim_usage_errors(tmp_path):
    assert run(["clone-sim", "--group", "X7", "--weights", "0.5,0.5"]) == 1
    assert run(["clone-sim", "--group", "Z2", "--weights", "0.5,0.3,0.2"]) == 1
    assert run(["clone-sim", "--weights", "0.5,0.5"]) == 1
    assert run(["frobnicate"]) == 1


def test_clone_sim_env_tolerance(tmp_path, monkeypatch):
    out = tmp_path / "report.json"
    args = ["clone-sim", "--group", "Z2", "--copies", "2",
            "--weights", "0.4,0.1,0.3,0.2", "--out", out]
    monkeypatch.setenv("CLONEFORGE_TOL", "0.2")
    assert run(args) == 0
    monkeypatch.setenv("CLONEFORGE_TOL", "1e-9")
    assert run(args) == 2
    # the flag beats the environment
    assert run(args + ["--tol", "0.2"]) == 0


def test_check_set_shifted_family(tmp_path):
    spec = ShiftedSetSpec(group_from_name("Z3"), np.array([0.5, 0.3, 0.2]))
    src = tmp_path / "set.json"
    write_state_set(src, build_group_shifted(spec))
    out = tmp_path / "report.json"
    assert run(["check-set", "--input", src, "--out", out]) == 0
    report = json.loads(out.read_text())
    assert report["overall"] is True
    assert report["verdict"] == "consistent with necessary conditions"
    assert report["group_closure"]["group"]["order"] == 3
    assert report["divisibility"] == {"n_t": 1, "passed": True}


def test_check_set_mixed_pair_fails(tmp_path):
    states = [
        BipartitePureState(np.diag(np.sqrt([0.7, 0.3]))),
        BipartitePureState(np.diag(np.sqrt([0.6, 0.4]))),
    ]
    src = tmp_path / "set.json"
    write_state_set(src, states)
    out = tmp_path / "report.json"
    assert run(["check-set", "--input", src, "--out", out]) == 3
    report = json.loads(out.read_text())
    assert report["overall"] is False
    assert "equal_gconcurrence" in report["failed_checks"]


def test_check_set_qubit_canonical_form(tmp_path):
    lam = 0.7
    states = [
        BipartitePureState(np.diag(np.sqrt([lam, 1 - lam]))),
        BipartitePureState(np.array([[0, np.sqrt(1 - lam)], [np.sqrt(lam), 0]])),
    ]
    src = tmp_path / "set.json"
    write_state_set(src, states)
    out = tmp_path / "report.json"
    assert run(["check-set", "--input", src, "--out", out]) == 0
    report = json.loads(out.read_text())
    assert report["qubit_form"]["accepted"] is True
    assert report["qubit_form"]["branch"] == "lower"
    assert abs(report["qubit_form"]["lambda"] - lam) < 1e-10


def test_check_set_io_errors(tmp_path):
    assert run(["check-set", "--input", tmp_path / "missing.json"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["check-set", "--input", bad]) == 1
    unnormalized = tmp_path / "unnorm.json"
    unnormalized.write_text(json.dumps({
        "dims": [2, 2],
        "states": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]],
    }))
    assert run(["check-set", "--input", unnormalized]) == 1


def test_blank_bounds_qutrit_third(tmp_path):
    out = tmp_path / "bounds.json"
    assert run(["blank-bounds", "--group", "Z3", "--weights", "0.5,0.3,0.2",
                "--out", out]) == 0
    report = json.loads(out.read_text())
    assert abs(report["gamma_min_lower"] - 1 / 3) <= 1e-10
    assert report["majorization_passed"] is True


def test_blank_bounds_qubit_gap(tmp_path):
    out = tmp_path / "bounds.json"
    assert run(["blank-bounds", "--group", "Z2", "--weights", "0.7,0.3",
                "--out", out]) == 0
    report = json.loads(out.read_text())
    assert abs(report["gap"] - 0.10016) < 1e-5
    assert abs(report["shannon_q"] - 0.98145) < 1e-5
    assert abs(report["entropy_lambda"] - 0.88129) < 1e-5
    assert report["q"] == [0.58, 0.42]
    assert abs(report["monotone_bounds"]["g_concurrence"] - 0.91651514) < 1e-8


def test_blank_bounds_strategies_and_copies(tmp_path):
    out = tmp_path / "bounds.json"
    assert run(["blank-bounds", "--group", "Z2", "--weights", "0.7,0.3",
                "--mu", "sampled:40", "--seed", "3", "--out", out]) == 0
    report = json.loads(out.read_text())
    assert report["gamma_min_lower"] >= 0.5 - 1e-12
    assert run(["blank-bounds", "--group", "Z2", "--copies", "2",
                "--weights", "0.4,0.1,0.3,0.2", "--out", out]) == 0
    report = json.loads(out.read_text())
    assert report["q"] is None and report["gap"] is None
    assert run(["blank-bounds", "--group", "Z2", "--weights", "0.7,0.3",
                "--mu", "nonsense"]) == 1


def test_blank_bounds_explicit_gamma(tmp_path):
    out = tmp_path / "bounds.json"
    assert run(["blank-bounds", "--group", "Z2", "--weights", "0.7,0.3",
                "--gamma", "0.7,0.3", "--out", out]) == 0
    assert json.loads(out.read_text())["majorization_passed"] is False


def test_sweep_csv_contract(tmp_path):
    out = tmp_path / "sweep.csv"
    assert run(["sweep", "--group", "Z4", "--grid", "coarse", "--out", out]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "l0,l1,l2,l3,gamma_min_lower,entropy_gap"
    rows = [[float(c) for c in line.split(",")] for line in lines[1:]]
    assert len(rows) == math.comb(9, 3)
    grid_points = [tuple(r[:4]) for r in rows]
    assert grid_points == sorted(grid_points)
    for row in rows:
        assert abs(sum(row[:4]) - 1.0) < 1e-12
        assert 0.0 < row[4] <= 0.25 + 1e-12
        assert row[5] >= -1e-12


def test_sweep_degenerate_grids(tmp_path):
    assert run(["sweep", "--group", "Z4", "--grid", "step:0.3"]) == 1
    assert run(["sweep", "--group", "Z4", "--grid", "step:0.5"]) == 1
    assert run(["sweep", "--group", "Z4", "--grid", "nonsense"]) == 1


def test_group_file_input(tmp_path):
    gfile = tmp_path / "group.json"
    z3 = group_from_name("Z3")
    gfile.write_text(json.dumps({"label": "Z3", "order": 3,
                                 "cayley": z3.cayley.tolist()}))
    out = tmp_path / "report.json"
    assert run(["clone-sim", "--group-file", gfile, "--weights", "0.5,0.3,0.2",
                "--out", out]) == 0
    bad = tmp_path / "bad_group.json"
    bad.write_text(json.dumps({"label": "broken", "order": 2,
                               "cayley": [[0, 1], [1, 1]]}))
    assert run(["clone-sim", "--group-file", bad, "--weights", "0.5,0.5"]) == 1


def test_demo_runs(tmp_path, capsys):
    out = tmp_path / "demo.json"
    assert run(["demo", "--out", out]) == 0
    captured = capsys.readouterr().out
    assert "min fidelity" in captured
    payload = json.loads(out.read_text())
    assert abs(payload["gamma_min_bounds"]["D2"] - 0.5) <= 1e-10
    assert abs(payload["gamma_min_bounds"]["D3"] - 1 / 3) <= 1e-10


@pytest.mark.parametrize("argv", [
    ["clone-sim", "--group", "Z2", "--weights", "0.7,0.3"],
    ["clone-sim", "--group", "Z2", "--copies", "2", "--weights", "0.4,0.1,0.3,0.2"],
    ["blank-bounds", "--group", "Z3", "--weights", "0.5,0.3,0.2", "--mu", "sampled:30"],
    ["sweep", "--group", "Z3", "--grid", "coarse"],
    ["demo"],
])
def test_reports_are_byte_identical(tmp_path, argv):
    out1 = tmp_path / "a.out"
    out2 = tmp_path / "b.out"
    run(argv + ["--out", str(out1), "--seed", "7"])
    run(argv + ["--out", str(out2), "--seed", "7"])
    assert out1.read_bytes() == out2.read_bytes()


def test_check_set_byte_identical(tmp_path):
    spec = ShiftedSetSpec(group_from_name("Z2"), np.array([0.7, 0.3]))
    src = tmp_path / "set.json"
    write_state_set(src, build_group_shifted(spec))
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    run(["check-set", "--input", str(src), "--out", str(out1)])
    run(["check-set", "--input", str(src), "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
