"""CLI subcommands, config-file handling, and exit codes."""

import csv
import json
import subprocess
import sys

import pytest

from hetqram.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sim_stdout_csv(capsys):
    code, out, _ = run_cli(
        ["sim", "--arch", "bb-hetero", "--n", "2", "--trials", "50", "--seed", "4"],
        capsys,
    )
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 1
    assert rows[0]["architecture"] == "bb-hetero"
    assert 0.0 <= float(rows[0]["mean_infidelity"]) <= 1.0


def test_sim_json_to_file(tmp_path, capsys):
    path = str(tmp_path / "out.json")
    code, _, _ = run_cli(
        ["sim", "--arch", "walker", "--n", "2..3", "--trials", "40", "--seed", "2",
         "--format", "json", "--out", path],
        capsys,
    )
    assert code == 0
    data = json.loads(open(path).read())
    assert [d["n"] for d in data] == [2, 3]
    assert all(d["router_kind"] == "qutrit" for d in data)


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "# sweep settings\narch = bb-hetero\nn = 2\ntrials = 30\nseed = 9\np-prime = 0.2\n"
    )
    code, out, _ = run_cli(["sim", "--config", str(cfg), "--trials", "35"], capsys)
    assert code == 0
    row = next(csv.DictReader(out.splitlines()))
    assert row["trials"] == "35"  # flag wins
    assert row["p_prime"] == "0.2"  # file value survives


def test_config_file_bad_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 9\n")
    code, _, err = run_cli(["sim", "--config", str(cfg)], capsys)
    assert code == 2
    assert "frobnicate" in err


def test_invalid_arch_exit_2(capsys):
    code, _, _ = run_cli(["sim", "--arch", "nope", "--n", "2"], capsys)
    assert code == 2


def test_bad_n_range_exit_2(capsys):
    code, _, _ = run_cli(["sim", "--arch", "bb-hetero", "--n", "9..4"], capsys)
    assert code == 2


def test_resource_limit_exit_3(capsys):
    code, _, err = run_cli(
        ["sim", "--arch", "bb-hetero", "--n", "12", "--trials", "10"], capsys
    )
    assert code == 3
    assert "basis" in err


def test_io_failure_exit_4(capsys, tmp_path):
    code, _, _ = run_cli(
        ["sim", "--arch", "bb-hetero", "--n", "2", "--trials", "10",
         "--out", str(tmp_path / "missing" / "x.csv")],
        capsys,
    )
    assert code == 4


def test_bounds_command(capsys):
    code, out, _ = run_cli(
        ["bounds", "--arch", "ft-hetero,bb-hetero", "--n", "20..21", "--routers", "qubit"],
        capsys,
    )
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 4
    for row in rows:
        assert float(row["bound"]) > 0


def test_resources_command(capsys):
    code, out, _ = run_cli(
        ["resources", "--arch", "bb-hetero", "--n", "40", "--efficient"], capsys
    )
    assert code == 0
    row = next(csv.DictReader(out.splitlines()))
    assert float(row["per_entry_overhead"]) == pytest.approx(82, rel=0.05)


def test_compare_command(capsys):
    code, out, _ = run_cli(["compare", "--arch", "bb-hetero", "--n", "30"], capsys)
    assert code == 0
    row = next(csv.DictReader(out.splitlines()))
    assert float(row["ratio"]) >= 4.0


def test_fit_command(tmp_path, capsys):
    report = tmp_path / "sweep.csv"
    lines = [
        "architecture,router_kind,n,p_prime,trials,mean_infidelity,"
        "ci95_low,ci95_high,analytic_bound,seed"
    ]
    for n in (4, 5, 6, 7):
        y = 1e-3 * n * n
        lines.append(f"uniform-bb,qutrit,{n},0.1,100,{y},{y},{y},1.0,7")
    report.write_text("\n".join(lines) + "\n")
    code, out, _ = run_cli(["fit", "--in", str(report)], capsys)
    assert code == 0
    row = next(csv.DictReader(out.splitlines()))
    assert float(row["slope"]) == pytest.approx(2.0, abs=1e-6)
    assert row["points"] == "4"


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "hetqram.cli", "resources", "--arch", "ft-hetero", "--n", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "physical_qubits" in proc.stdout


def test_deterministic_csv_bytes(tmp_path, capsys):
    args = ["sim", "--arch", "bb-hetero,uniform-bb", "--n", "2..3",
            "--trials", "60", "--seed", "13", "--format", "csv"]
    p1, p2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert main(args + ["--out", p1]) == 0
    assert main(args + ["--out", p2]) == 0
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_config_file_mirrors_every_flag(tmp_path, capsys):
    cfg = tmp_path / "full.cfg"
    cfg.write_text(
        "arch = uniform-bb\n"
        "routers = qubit\n"
        "n = 3..4\n"
        "p-prime = 0.15\n"
        "epsilon-prime = 0.02\n"
        "c = 3\n"
        "s = 2\n"
        "trials = 25\n"
        "seed = 77\n"
        "profile = uniform:5\n"
        "address-mode = superposition\n"
        "database = all_one\n"
        "round-trip = on\n"
        "batch-size = 16\n"
        "format = json\n"
    )
    code, out, _ = run_cli(["sim", "--config", str(cfg)], capsys)
    assert code == 0
    data = json.loads(out)
    assert [d["n"] for d in data] == [3, 4]
    assert data[0]["router_kind"] == "qubit"
    assert data[0]["p_prime"] == 0.15
    assert data[0]["trials"] == 25
    assert data[0]["seed"] == 77
