import json
import os

import pytest

from quarticlab.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_analyze_x4p2(capsys):
    code, out = run_cli(capsys, ["analyze", "--poly", "2,0,0,0"])
    assert code == 0
    data = json.loads(out)
    assert data["galois"]["class"] == "D4"
    assert data["Dq2"] == 8
    assert data["normform"]["q2"] == {"(0, 0, 2)": "2", "(2, 0, 0)": "1"}
    assert data["meta"]["version"]


def test_analyze_c4(capsys):
    code, out = run_cli(capsys, ["analyze", "--poly", "1,1,1,1"])
    data = json.loads(out)
    assert data["galois"]["class"] == "C4" and data["t1"] == 2 and data["t2"] == -1


def test_verify_exit_zero(capsys):
    code, out = run_cli(capsys, ["verify", "--poly", "3,3,0,0", "--trials", "4"])
    assert code == 0
    data = json.loads(out)
    assert data["pass"] is True
    assert all(e["pass"] for e in data["identities"])


def test_local_jsonl_exit_zero(capsys):
    code, out = run_cli(
        capsys, ["local", "--poly", "2,0,0,0", "--pmax", "40", "--pairs", "6"]
    )
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert "meta" in lines[0]
    assert len(lines) > 1 and all(r["agree"] for r in lines[1:])


def test_lattice_command(capsys):
    code, out = run_cli(
        capsys, ["lattice", "--minpoly", "2,0,0,0,1", "--d", "1,1,0,0"]
    )
    assert code == 0
    data = json.loads(out)
    assert data["T"] == [0, 0, 1, 1] and data["det_sq"] == 2 and data["z1"] == [1, 0, 0, 0]


def test_config_check_paper(capsys):
    code, out = run_cli(capsys, ["config", "check", "paper", "--distrinorm"])
    assert code == 0
    data = json.loads(out)
    assert data["constants"]["pass"] is True
    hyp = data["distrinorm_hypotheses"]
    assert hyp["ell"] == 6
    assert hyp["scale=4/(1+a0)"]["pass"] is True


def test_config_check_file(capsys, tmp_path):
    cfg = os.path.join(
        os.path.dirname(__file__), "..", "src", "quarticlab", "data", "paper.toml"
    )
    code, out = run_cli(capsys, ["config", "check", cfg])
    assert code == 0
    # a broken config exits 1
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "alpha0": "0.001",
                "theta": {f"t1{j}": "0.1398" if j == 1 else f"0.1{40+j}" for j in range(1, 7)}
                | {"t21": "0.001"},
                "tau": {f"t1{j}": "0.0000001" for j in range(1, 7)} | {"t21": "0.0000001"},
            }
        )
    )
    code, out = run_cli(capsys, ["config", "check", str(bad)])
    assert code == 1


def test_scan_csv_and_threads(capsys):
    code, out1 = run_cli(
        capsys,
        ["scan", "--poly", "2,0,0,0", "--x", "400", "--c-grid", "0,1/2,1", "--format", "csv"],
    )
    assert code == 0
    assert out1.splitlines()[0] == "c,count,proportion,x"
    code, out2 = run_cli(
        capsys,
        [
            "scan", "--poly", "2,0,0,0", "--x", "400", "--c-grid", "0,1/2,1",
            "--format", "csv", "--threads", "3",
        ],
    )
    assert out1 == out2


def test_distrinorm_and_gamma_params(capsys, tmp_path):
    prm = tmp_path / "d.json"
    prm.write_text(
        json.dumps(
            {
                "poly": [2, 0, 0, 0],
                "X": 100,
                "box": [[5, 20], [5, 20], [5, 20]],
                "windows": [["33/100", "42/100"]],
                "m": 2,
                "u0": [1, 0, 1],
                "p_window": ["1/4", "3/5"],
            }
        )
    )
    code, out = run_cli(capsys, ["distrinorm", "--params", str(prm)])
    assert code == 0
    g = tmp_path / "g.json"
    g.write_text(
        json.dumps(
            {
                "poly": [2, 0, 0, 0],
                "box": [[1, 29], [1, 29], [1, 29]],
                "u0": [0, 0, 0],
                "q": 1,
                "d": [[7, 1]],
            }
        )
    )
    code, out = run_cli(capsys, ["gamma", "--params", str(g)])
    assert code == 0
    data = json.loads(out)
    assert data["identities"][0]["pass"] is True


def test_selftest(capsys):
    code, out = run_cli(capsys, ["selftest"])
    assert code == 0
    data = json.loads(out)
    assert data["pass"] is True


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as ei:
        main(["analyze", "--poly", "1,2,3"])
    assert ei.value.code == 2


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _ = run_cli(
        capsys, ["lattice", "--minpoly", "2,0,0,0,1", "--d", "1,0,0,0", "--out", str(path)]
    )
    assert code == 0
    assert json.loads(path.read_text())["det_sq"] == 1
