import csv
import json
import subprocess
import sys

import pytest

from blochlab import __version__
from blochlab.cli import COMMANDS, RunConfig, main, run
from blochlab.report import CSV_COLUMNS, EstimateReport, Row


def invoke(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def load(tmp_path, command):
    stem = command.replace("-", "_")
    data = json.loads((tmp_path / f"{stem}.json").read_text())
    with open(tmp_path / f"{stem}.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    return data, rows


class TestCommands:
    def test_lemma31(self, tmp_path):
        assert invoke(tmp_path, "verify-lemma31", "--gauge", "const", "--mmax", "20") == 0
        data, rows = load(tmp_path, "verify-lemma31")
        assert data["extremal_constant"] > 0
        assert data["verdict"] == "holds"
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == 22

    def test_phi_doubling(self, tmp_path):
        assert invoke(tmp_path, "verify-phi-doubling", "--gauge", "pow:0.5") == 0

    def test_reverse(self, tmp_path):
        assert invoke(tmp_path, "verify-reverse", "--gauge", "pow:0.5", "--p", "1") == 0
        data, _ = load(tmp_path, "verify-reverse")
        assert data["extremal_constant"] > 0
        assert data["extra"]["normalization"] > 0

    def test_reverse_inadmissible_eps(self, tmp_path, capsys):
        # t^0.5 / t^(1 - 0.8) increases, so the regularity hypothesis fails
        assert invoke(tmp_path, "verify-reverse", "--gauge", "pow:0.5;eps=0.8", "--p", "1") == 1
        assert "omega(t)/t^(1-eps) nonincreasing" in capsys.readouterr().err

    def test_reverse_montecarlo(self, tmp_path):
        args = ("verify-reverse", "--p", "2", "--K", "8", "--mmax", "4", "--mode", "mc",
                "--seed", "7", "--samples", "4000")
        assert invoke(tmp_path, *args) == 0
        data, _ = load(tmp_path, "verify-reverse")
        assert data["provenance"]["seed"] == 7
        assert data["config"]["mode"] == "mc"

    def test_violated_exit_code(self, tmp_path):
        args = ("hyperbolic-audit", "--map", "scale:1", "--gauge", "pow:0.5", "--omega2", "const",
                "--mmax", "8")
        assert invoke(tmp_path, *args) == 2
        data, _ = load(tmp_path, "hyperbolic-audit")
        assert data["verdict"] == "violated"

    @pytest.mark.parametrize("args", [
        ("gauge-report", "--gauge", "log:-0.5"),
        ("extremal-build", "--mmax", "12"),
        ("verify-direct", "--p", "2", "--mmax", "10"),
        ("verify-hardy-bloch", "--p", "2", "--mmax", "8"),
        ("divergence-demo", "--gauge", "pow:0.5"),
        ("carleson", "--measure", "power:0", "--K", "6", "--mmax", "10"),
        ("hyperbolic-audit", "--map", "scale:0.5", "--gauge", "pow:0.5", "--omega2", "const",
         "--mmax", "8"),
    ])
    def test_other_commands_hold(self, tmp_path, args):
        assert invoke(tmp_path, *args) == 0

    def test_command_list(self):
        assert len(COMMANDS) == 10


class TestErrors:
    def test_parse_error_shows_position(self, tmp_path, capsys):
        assert invoke(tmp_path, "gauge-report", "--gauge", "pow:0.5;eps=x") == 1
        err = capsys.readouterr().err
        assert "position 12" in err
        assert err.rstrip().endswith("^")

    def test_missing_measure(self, tmp_path):
        assert invoke(tmp_path, "carleson") == 1

    def test_bad_measure(self, tmp_path):
        assert invoke(tmp_path, "carleson", "--measure", "power:") == 1

    def test_unknown_command(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            invoke(tmp_path, "verify-everything")
        assert info.value.code == 1

    def test_precondition(self, tmp_path):
        assert invoke(tmp_path, "verify-hardy-bloch", "--p", "1") == 1


class TestReports:
    def test_config_and_version_echoed(self, tmp_path):
        invoke(tmp_path, "verify-lemma31", "--gauge", "log:-0.5", "--mmax", "6", "--seed", "3")
        data, _ = load(tmp_path, "verify-lemma31")
        assert data["version"] == __version__
        assert data["config"]["gauge"] == "log:-0.5"
        assert data["config"]["seed"] == 3
        assert data["config"]["m_max"] == 6
        assert {"name", "rows", "ratios", "extremal_constant", "verdict", "grid"} <= set(data)

    def test_byte_identical(self, tmp_path):
        cfg = RunConfig(command="divergence-demo", gauge="const", m_max=14, seed=5, out=str(tmp_path))
        names = ("divergence_demo.json", "divergence_demo.csv")
        assert run(cfg) == 0
        first = [(tmp_path / n).read_bytes() for n in names]
        assert run(cfg) == 0
        assert [(tmp_path / n).read_bytes() for n in names] == first

    def test_non_finite_values_serialize(self):
        rep = EstimateReport("x", "const", {}, [Row(0.5, None, float("inf"), 1.0, 0.0)], "max",
                             float("nan"), "violated")
        data = json.loads(rep.to_json())
        assert data["extremal_constant"] == "nan"
        assert rep.to_csv().splitlines()[1] == "0.5,,inf,1.0,0.0"

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "blochlab", "verify-phi-doubling",
                               "--gauge", "log:-0.5", "--out", str(tmp_path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert (tmp_path / "verify_phi_doubling.json").exists()
