import io
import json

import pytest

from kgyukawa.cli import run_cli


def run(*argv):
    out = io.StringIO()
    code = run_cli(list(argv), out=out)
    return code, out.getvalue()


def test_nonrel():
    code, out = run("nonrel", "--lambda", "4", "--delta", "0.4", "--n", "0", "--l", "0", "--hbar", "1", "--mu", "0.5")
    assert code == 0
    assert float(out) == pytest.approx(-3.24, rel=1e-12)
    assert out.strip().startswith("-3.2400")


def test_solve_scalar():
    code, out = run("solve", "--mode", "scalar-only", "--m0", "1", "--m1", "0.1", "--s0", "1",
                    "--delta", "0.1", "--n", "0", "--l", "0")
    assert code == 0
    values = [float(line.split("\t")[1]) for line in out.strip().splitlines()]
    assert values == pytest.approx([-0.9987492177, 0.9987492177], abs=1e-9)


def test_solve_no_root_is_solver_error():
    code, _ = run("solve", "--mode", "vector-only", "--delta", "3")
    assert code == 2


def test_table_csv():
    code, out = run("table", "--id", "6", "--format", "csv")
    assert code == 0
    assert len(out.strip().splitlines()) == 9


def test_table_json_to_file(tmp_path):
    target = tmp_path / "t5.json"
    code, out = run("table", "--id", "5", "--format", "json", "--out", str(target), "--delta-convention", "g*lambda")
    assert code == 0 and out == ""
    assert len(json.loads(target.read_text())["rows"]) == 18


def test_usage_errors():
    assert run("table", "--id", "7")[0] == 1
    assert run("solve", "--bogus")[0] == 1
    assert run()[0] == 1
    assert run("nonrel", "--delta", "0.4")[0] == 1


def test_domain_error_is_usage():
    assert run("nonrel", "--lambda", "1", "--delta", "0")[0] == 1


def test_unwritable_output(tmp_path):
    code, _ = run("table", "--id", "6", "--out", str(tmp_path / "nope" / "x.csv"))
    assert code == 2


def test_config_defaults_and_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"lambda": 4, "delta": 0.4, "mu": 0.5}))
    code, out = run("--config", str(cfg), "nonrel")
    assert code == 0 and float(out) == pytest.approx(-3.24)
    code, out = run("nonrel", "--config", str(cfg), "--delta", "0.2")
    assert code == 0 and float(out) == pytest.approx(-3.61)


def test_bad_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("[1, 2]")
    assert run("--config", str(cfg), "nonrel")[0] == 1
    assert run("--config", str(tmp_path / "missing.json"), "nonrel")[0] == 1


def test_oracle():
    code, out = run("oracle", "--lambda", "1", "--delta", "1e-9", "--l", "0", "--nodes", "0")
    assert code == 0 and float(out) == pytest.approx(-0.5, abs=1e-6)


def test_oracle_not_found():
    assert run("oracle", "--lambda", "0.1", "--delta", "5", "--l", "0", "--nodes", "0")[0] == 2


def test_wavefunction(tmp_path):
    code, out = run("wavefunction", "--m1", "0.1", "--s0", "1", "--delta", "0.1", "--points", "50")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "r,u,energy" and len(lines) == 51


def test_check_matrix():
    code, out = run("check")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("mode,energy")
    modes = {line.split(",")[0] for line in lines[1:]}
    assert len(modes) == 6


def test_help():
    assert run("--help")[0] == 0
