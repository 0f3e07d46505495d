"""CLI tests: formats, error handling, reproducibility, precedence."""

import json
import subprocess
import sys

import pytest

from chainrec import exact
from chainrec.cli import main

from conftest import ELEVEN_POINT_CHAIN, ELEVEN_POINT_MARKS, FOUR_POINT_MARKS


def write_marks_csv(path, marks):
    d = len(marks[0])
    lines = [",".join(f"x{i}" for i in range(1, d + 1))]
    lines += [",".join(repr(c) for c in m) for m in marks]
    path.write_text("\n".join(lines) + "\n")


def data_rows(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")][1:]


# ---------------------------------------------------------------------------
# detect


def test_detect_four_point_fixture(tmp_path, capsys):
    src = tmp_path / "marks.csv"
    write_marks_csv(src, FOUR_POINT_MARKS)
    assert main(["detect", "--in", str(src)]) == 0
    rows = data_rows(capsys.readouterr().out)
    assert rows == [
        "1,1,1,1,11",
        "2,1,1,1,11",
        "3,0,1,0,01",
        "4,1,1,1,11",
    ]


def test_detect_eleven_point_fixture(tmp_path):
    src = tmp_path / "marks.csv"
    out = tmp_path / "flags.csv"
    write_marks_csv(src, ELEVEN_POINT_MARKS)
    assert main(["detect", "--in", str(src), "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# chainrec ")
    rows = data_rows(text)
    chain = [int(r.split(",")[0]) for r in rows if r.split(",")[1] == "1"]
    assert chain == ELEVEN_POINT_CHAIN


def test_detect_single_row(tmp_path, capsys):
    src = tmp_path / "one.csv"
    write_marks_csv(src, [(0.4, 0.2, 0.9)])
    assert main(["detect", "--in", str(src)]) == 0
    assert data_rows(capsys.readouterr().out) == ["1,1,1,1,111"]


@pytest.mark.parametrize(
    "body, fragment",
    [
        ("x1,x2\n0.1,0.2\n0.3\n", "line 3"),
        ("x1,x2\n0.1,0.2\n0.3,oops\n", "line 3"),
        ("x1,x2\n0.1,1.2\n", "line 2"),
        ("a,b\n0.1,0.2\n", "header"),
        ("x1,x2\n", "no marks"),
    ],
)
def test_detect_bad_input(tmp_path, capsys, body, fragment):
    src = tmp_path / "bad.csv"
    src.write_text(body)
    assert main(["detect", "--in", str(src)]) == 1
    assert fragment in capsys.readouterr().err


def test_detect_dimension_check(tmp_path, capsys):
    src = tmp_path / "marks.csv"
    write_marks_csv(src, FOUR_POINT_MARKS)
    assert main(["detect", "--in", str(src), "--d", "3"]) == 1
    assert "dimension" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# exact


def chain_column(text):
    return [r.split(",")[1] for r in data_rows(text)]


def test_exact_table_dimension_two(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["exact", "--d", "2", "--n", "5", "--out", str(out)]) == 0
    assert chain_column(out.read_text()) == ["1", "1/4", "1/6", "1/8", "1/10"]


def test_exact_table_dimension_one(capsys):
    assert main(["exact", "--d", "1", "--n", "3"]) == 0
    assert chain_column(capsys.readouterr().out) == ["1", "1/2", "1/3"]


def test_exact_table_dimension_three(capsys):
    assert main(["exact", "--d", "3", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert chain_column(out) == ["1", "1/8"]
    header = data_rows(out) and [l for l in out.splitlines() if l.startswith("n,")][0]
    assert header.startswith("n,p_exact_fraction,p_exact_decimal15")


def test_exact_decimal_column(capsys):
    assert main(["exact", "--d", "2", "--n", "3"]) == 0
    rows = data_rows(capsys.readouterr().out)
    cells = rows[2].split(",")
    assert cells[1] == "1/6"
    assert cells[2] == exact.format_decimal15(exact.chain_record_prob(2, 3))


def test_exact_cap_error(capsys):
    assert main(["exact", "--d", "2", "--n", "600"]) == 1
    assert "cap" in capsys.readouterr().err
    assert main(["exact", "--d", "1", "--n", "600", "--n-cap", "600"]) == 0


def test_exact_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["exact", "--d", "2", "--n", "30", "--out", str(a)])
    main(["exact", "--d", "2", "--n", "30", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# simulate


def test_simulate_count_mean_near_exact(tmp_path):
    out = tmp_path / "run"
    args = ["simulate", "--what", "chain-count", "--method", "sojourn", "--d", "2",
            "--n", "100", "--replicates", "10000", "--seed", "42", "--out", str(out)]
    assert main(args) == 0
    doc = json.loads((tmp_path / "run.json").read_text())
    target = float(exact.expected_chain_count(2, 100))
    assert abs(doc["value"] - target) < 4 * doc["std_error"]
    assert doc["replicates"] == 10000
    assert doc["meta"]["seed"] == 42
    csv_text = (tmp_path / "run.csv").read_text()
    assert csv_text.startswith("# chainrec ")
    assert "estimator,value,std_error,replicates,seed" in csv_text


def test_simulate_is_reproducible_across_workers(tmp_path):
    base = ["simulate", "--what", "chain-count", "--d", "2", "--n", "50",
            "--replicates", "3000", "--seed", "7"]
    for i, workers in enumerate(("1", "4")):
        assert main([*base, "--workers", workers, "--out", str(tmp_path / f"r{i}")]) == 0
    assert (tmp_path / "r0.json").read_bytes() == (tmp_path / "r1.json").read_bytes()
    assert (tmp_path / "r0.csv").read_bytes() == (tmp_path / "r1.csv").read_bytes()


def test_simulate_single_replicate_reports_na(tmp_path, capsys):
    args = ["simulate", "--what", "chain-count", "--d", "2", "--n", "20",
            "--replicates", "1", "--seed", "5"]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["std_error"] is None
    out = tmp_path / "single"
    assert main([*args, "--out", str(out)]) == 0
    assert ",NA," in (tmp_path / "single.csv").read_text()


def test_simulate_poisson_estimands(capsys):
    for what, check in (
        ("poisson-count", None),
        ("poisson-integral", None),
        ("poisson-state", lambda v: abs(v - exact.moment_series(2, 1, 3.0)) < 0.05),
    ):
        args = ["simulate", "--what", what, "--d", "2", "--t", "3.0",
                "--replicates", "5000", "--seed", "11"]
        assert main(args) == 0
        doc = json.loads(capsys.readouterr().out)
        if check:
            assert check(doc["value"])


def test_simulate_limit_variable(capsys):
    args = ["simulate", "--what", "limit-variable", "--d", "2",
            "--replicates", "20000", "--seed", "13"]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["value"] - 0.5) < 4 * doc["std_error"]


def test_simulate_missing_horizon(capsys):
    assert main(["simulate", "--what", "chain-count", "--d", "2",
                 "--replicates", "10", "--seed", "1"]) == 1
    assert "--n is required" in capsys.readouterr().err
    assert main(["simulate", "--what", "poisson-count", "--d", "2",
                 "--replicates", "10", "--seed", "1"]) == 1
    assert "--t is required" in capsys.readouterr().err


def test_simulate_trace_dump(tmp_path):
    out = tmp_path / "tr"
    args = ["simulate", "--what", "chain-count", "--method", "sojourn", "--d", "2",
            "--n", "50", "--replicates", "3", "--seed", "9", "--out", str(out),
            "--trace-out", str(tmp_path / "traces.csv")]
    assert main(args) == 0
    lines = (tmp_path / "traces.csv").read_text().splitlines()
    assert lines[1] == "replicate,k,T_k,H_k"
    first = lines[2].split(",")
    assert first[0] == "0" and first[1] == "1" and first[2] == "1"
    assert 0 < float(first[3]) < 1


# ---------------------------------------------------------------------------
# limits


def test_limits_variable_samples(tmp_path):
    out = tmp_path / "y.txt"
    args = ["limits", "--kind", "y", "--d", "1", "--replicates", "4000",
            "--seed", "3", "--out", str(out)]
    assert main(args) == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    values = [float(v) for v in lines]
    assert len(values) == 4000
    assert abs(sum(values) / len(values) - 1.0) < 0.1


def test_limits_window_csv(tmp_path):
    out = tmp_path / "w.csv"
    args = ["limits", "--kind", "window", "--d", "2", "--window", "0.05,2.0,8.0",
            "--seed", "21", "--out", str(out)]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "xi,sigma"
    for row in lines[2:]:
        xi, sigma = (float(v) for v in row.split(","))
        assert 0.05 <= xi <= 2.0 and 0 < sigma <= 8.0


def test_limits_bad_window(capsys):
    assert main(["limits", "--kind", "window", "--d", "2", "--window", "nope",
                 "--seed", "1"]) == 1
    assert "--window" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# config file, environment, argument errors


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("d=2\nn=3\n")
    assert main(["exact", "--config", str(cfg)]) == 0
    assert len(chain_column(capsys.readouterr().out)) == 3
    # the flag wins over the config value
    assert main(["exact", "--config", str(cfg), "--n", "5"]) == 0
    assert len(chain_column(capsys.readouterr().out)) == 5


def test_env_var_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("CHAINREC_OUT_DIR", str(tmp_path))
    assert main(["exact", "--d", "1", "--n", "2", "--out", "sub/table.csv"]) == 0
    assert (tmp_path / "sub" / "table.csv").exists()


def test_unknown_flag_fails_fast():
    proc = subprocess.run(
        [sys.executable, "-m", "chainrec", "exact", "--d", "1", "--n", "2", "--frobnicate"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "unrecognized" in proc.stderr


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "chainrec", "exact", "--d", "2", "--n", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "1/8" in proc.stdout


# ---------------------------------------------------------------------------
# verify


def test_verify_exact_suite(tmp_path, capsys):
    out = tmp_path / "report"
    assert main(["verify", "--suite", "exact", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert printed.count("PASS") == 5 and "FAIL" not in printed
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["all_pass"] is True
    assert len(doc["criteria"]) == 5
    for entry in doc["criteria"]:
        assert set(entry) == {"criterion", "name", "oracle", "value", "target",
                              "tolerance", "pass"}
    csv_lines = (tmp_path / "report.csv").read_text().splitlines()
    assert csv_lines[1] == "criterion,name,oracle,value,target,tolerance,pass"
    assert len(csv_lines) == 7


def test_verify_reruns_are_byte_identical_across_workers(tmp_path, capsys):
    for name, workers in (("v0", "1"), ("v1", "3")):
        assert main(["verify", "--suite", "limit", "--seed", "99",
                     "--workers", workers, "--out", str(tmp_path / name)]) == 0
    capsys.readouterr()
    assert (tmp_path / "v0.json").read_bytes() == (tmp_path / "v1.json").read_bytes()
    assert (tmp_path / "v0.csv").read_bytes() == (tmp_path / "v1.csv").read_bytes()


def test_verify_tolerance_override_can_force_failure(tmp_path, capsys):
    out = tmp_path / "strict"
    code = main(["verify", "--suite", "exact", "--out", str(out),
                 "--tolerance", "c04=1e-30"])
    assert code == 1
    doc = json.loads((tmp_path / "strict.json").read_text())
    failed = [c for c in doc["criteria"] if not c["pass"]]
    assert [c["criterion"] for c in failed] == ["c04"]
