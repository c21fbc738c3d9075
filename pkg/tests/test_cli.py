import json
import math

import pytest

from quadratise.cli import main
from quadratise.pbf import parse_pbf, serialize_pbf
from quadratise.pbf import PBF


@pytest.fixture
def eq3_file(tmp_path):
    f = PBF.from_terms([((1, 2, 3), math.pi), ((2, 4, 5, 6), -13.0), ((1, 3), 7.0)], n=6)
    path = tmp_path / "eq3.json"
    path.write_text(serialize_pbf(f))
    return path


def test_reduce_running_example(eq3_file, tmp_path, capsys):
    out = tmp_path / "out.json"
    rc = main(["reduce", str(eq3_file), "--algo", "lsr", "--q", "1.0", "--seed", "7", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["substitutions"][0] == [7, 1, 3]  # the only multiplicity-2 pair
    reduced = parse_pbf(json.dumps(data["reduced"]))
    assert reduced.degree() <= 2
    summary = capsys.readouterr().out
    assert "variables: 6 ->" in summary
    assert "iterations:" in summary


def test_reduce_default_subcommand_shorthand(eq3_file, tmp_path):
    out = tmp_path / "out.json"
    rc = main([str(eq3_file), "--algo", "lsr", "--q", "0.5", "--seed", "1", "--out", str(out)])
    assert rc == 0
    assert out.exists()


def test_reduce_quadratic_input_is_identity(tmp_path):
    f = PBF.from_terms([((1, 2), 2.0), ((1,), -1.0)], n=2)
    src = tmp_path / "quad.json"
    src.write_text(serialize_pbf(f))
    out = tmp_path / "out.json"
    assert main(["reduce", str(src), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert parse_pbf(json.dumps(data["reduced"])) == f
    assert data["penalty"]["terms"] == []
    assert data["substitutions"] == []


def test_reduce_missing_file_fails_with_diagnostic(tmp_path, capsys):
    rc = main(["reduce", str(tmp_path / "nope.json"), "--out", str(tmp_path / "out.json")])
    assert rc != 0
    assert "error:" in capsys.readouterr().err


def test_reduce_byte_identical_across_runs(eq3_file, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    args = ["--algo", "lsr", "--q", "0.5", "--seed", "123"]
    assert main(["reduce", str(eq3_file), *args, "--out", str(out1)]) == 0
    assert main(["reduce", str(eq3_file), *args, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_baseline_reduce_records_variant(eq3_file, tmp_path):
    out = tmp_path / "out.json"
    assert main(["reduce", str(eq3_file), "--algo", "baseline", "--variant", "medium", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["meta"]["variant"] == "medium"


def test_generate_then_parse_roundtrip(tmp_path, capsys):
    out = tmp_path / "gen.json"
    rc = main(["generate", "--n", "7", "--degree", "4", "--density", "0.4", "--seed", "5", "--out", str(out)])
    assert rc == 0
    f = parse_pbf(out.read_text())
    assert f.n_original == 7
    assert f.degree() == 4


def test_verify_subcommand_passes(eq3_file, capsys):
    rc = main(["verify", "--input", str(eq3_file), "--algo", "lsr", "--q", "1.0", "--max-bits", "22"])
    assert rc == 0
    out = capsys.readouterr().out
    assert '"passed": true' in out


def test_verify_baseline_variant(eq3_file):
    assert main(["verify", "--input", str(eq3_file), "--algo", "baseline", "--variant", "sparse"]) == 0


def test_verify_exits_nonzero_when_cap_refuses(eq3_file, capsys):
    rc = main(["verify", "--input", str(eq3_file), "--algo", "lsr", "--max-bits", "5"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_module_entry_point(eq3_file, tmp_path):
    import subprocess
    import sys

    out = tmp_path / "out.json"
    proc = subprocess.run(
        [sys.executable, "-m", "quadratise", "reduce", str(eq3_file), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "variables: 6 ->" in proc.stdout
    assert out.exists()


def test_scaling_subcommand(tmp_path):
    csv_path = tmp_path / "scaling.csv"
    rc = main(["scaling", "--n-max", "8", "--deg-max", "8", "--csv", str(csv_path)])
    assert rc == 0
    lines = csv_path.read_text().splitlines()
    assert lines[1] == "n,degree,terms"
    assert lines[-1] == "8,8,255"  # 2^8 - 1


def test_bench_subcommand_with_plots(tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(
        json.dumps(
            {
                "n_values": [6],
                "densities": [0.4],
                "algorithms": ["lsr-q1.0", "base-dense"],
                "seeds": [0],
                "degree": 3,
            }
        )
    )
    csv_path = tmp_path / "bench.csv"
    plots = tmp_path / "figs"
    rc = main(["bench", "--config", str(config), "--csv", str(csv_path), "--plots", str(plots)])
    assert rc == 0
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 2 + 2  # version, header, two records
    assert (plots / "runtime_vs_n.png").exists()


def test_bad_generate_arguments_fail(tmp_path, capsys):
    rc = main(["generate", "--n", "4", "--degree", "9", "--density", "0.5", "--out", str(tmp_path / "x.json")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
