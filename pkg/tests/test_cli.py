"""Tests for the atomc command line."""

import json

import pytest

from cli import main, parse_values
from errors import StudyError
from qasm_io import parse_qasm

GHZ = ["compile", "--bench", "ghz", "--n", "3", "--rows", "3", "--cols", "3", "--no-lower",
       "--layout", "identity"]


class TestParseValues:
    def test_list_and_ranges(self):
        assert parse_values("1, 1.5,2") == [1, 1.5, 2]
        assert parse_values("1:4") == [1, 2, 3, 4]
        assert parse_values("0.5:1.5:0.5") == pytest.approx([0.5, 1.0, 1.5])

    @pytest.mark.parametrize("text", ["", "5:1", "1:2:0", "a", "1:2:3:4"])
    def test_rejects(self, text):
        with pytest.raises(StudyError):
            parse_values(text)


class TestCompile:
    def test_report_on_stdout(self, capsys):
        assert main(GHZ) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["P"] == pytest.approx(0.987056, abs=1e-6)
        assert report["makespan_us"] == pytest.approx(1.9)

    def test_byte_identical_reruns(self, capsys):
        args = ["compile", "--bench", "twolocal", "--n", "6", "--seed", "3", "--rows", "3",
                "--cols", "3", "--rint", "1"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first

    def test_files(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(GHZ + ["--out", str(out), "--csv", str(tmp_path / "t.csv")]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text())["n_swaps"] == 0
        assert (tmp_path / "t.csv").read_text().startswith("index,op,kind,traps,qubits")

    def test_missing_width_is_usage_error(self):
        assert main(["compile", "--bench", "ghz"]) == 2

    def test_source_required(self):
        with pytest.raises(SystemExit) as info:
            main(["compile"])
        assert info.value.code == 2

    def test_failed_run(self, tmp_path, capsys):
        assert main(["compile", "--qasm", str(tmp_path / "missing.qasm")]) == 1
        assert "cannot read" in capsys.readouterr().err

    def test_bad_qasm_reports_line(self, tmp_path, capsys):
        path = tmp_path / "bad.qasm"
        path.write_text("qreg q[2];\nfoo q[0];\n")
        assert main(["compile", "--qasm", str(path)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_environment_seed(self, monkeypatch, capsys):
        monkeypatch.setenv("ATOMC_SEED", "4")
        main(["compile", "--bench", "dj", "--n", "5"])
        assert json.loads(capsys.readouterr().out)["options"]["seed"] == 4


class TestTradeoff:
    def test_velocity_csv(self, capsys):
        code = main(["tradeoff", "velocity", "--hw", "rubidium", "--values", "1,50,343",
                     "--dist", "6"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].split(",")[:3] == ["n_idle", "dist_um", "t_swap_us"]
        assert len(lines) == 4
        assert "infeasible" in lines[3]

    def test_json_copy(self, tmp_path, capsys):
        out = tmp_path / "rows.json"
        assert main(["tradeoff", "decomposition", "--hw", "strontium", "--out", str(out),
                     "--csv", str(tmp_path / "rows.csv")]) == 0
        data = json.loads(out.read_text())
        assert data["study"] == "decomposition"
        assert len(data["rows"]) == 2

    def test_teff_sweep_on_benchmark(self, capsys):
        code = main(["tradeoff", "teff-sweep", "--bench", "ghz", "--n", "6", "--values", "1,2"])
        assert code == 0
        assert len(capsys.readouterr().out.splitlines()) == 3

    def test_empty_range(self, capsys):
        assert main(["tradeoff", "velocity", "--values", "5:1"]) == 1
        assert "range" in capsys.readouterr().err

    def test_unknown_kind(self):
        with pytest.raises(SystemExit):
            main(["tradeoff", "bogus"])


class TestValidateMoves:
    def write(self, tmp_path, moves, d_min=1.0):
        path = tmp_path / "moves.json"
        path.write_text(json.dumps({"grid": {"x": [0, 3], "y": [0], "d_min": d_min},
                                    "moves": moves}))
        return str(path)

    def test_valid(self, tmp_path, capsys):
        path = self.write(tmp_path, [{"dx": [3, 3], "dy": [0]}])
        assert main(["validate-moves", path]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result == {"valid": True, "n_moves": 1, "violations": []}

    def test_crossing(self, tmp_path, capsys):
        path = self.write(tmp_path, [{"dx": [4, 0], "dy": [0]}])
        assert main(["validate-moves", path]) == 1
        captured = capsys.readouterr()
        result = json.loads(captured.out)
        assert result["violations"][0]["kind"] == "crossing"
        assert "crossing" in captured.err

    def test_d_min_override(self, tmp_path, capsys):
        path = self.write(tmp_path, [{"dx": [0, -1.5], "dy": [0]}])
        assert main(["validate-moves", path]) == 0
        assert main(["validate-moves", path, "--d-min", "2"]) == 1

    def test_malformed(self, tmp_path, capsys):
        path = tmp_path / "moves.json"
        path.write_text("[]")
        assert main(["validate-moves", str(path)]) == 1


class TestGenerate:
    def test_stdout(self, capsys):
        assert main(["generate", "ghz", "--n", "3"]) == 0
        circuit = parse_qasm(capsys.readouterr().out)
        assert circuit.name == "ghz_3"
        assert len(circuit) == 3

    def test_file_and_options(self, tmp_path):
        out = tmp_path / "qft.qasm"
        assert main(["generate", "qft", "--n", "4", "--no-final-swaps", "--out", str(out)]) == 0
        assert "swap" not in parse_qasm(out.read_text()).count_by_kind()

    def test_invalid_width(self, capsys):
        assert main(["generate", "graphstate", "--n", "2"]) == 1


def test_unknown_hardware(capsys):
    assert main(["compile", "--bench", "ghz", "--n", "3", "--hw", "nosuch"]) == 1
    assert "unknown hardware preset" in capsys.readouterr().err


def test_seeded_ghz_has_no_swaps(capsys):
    assert main(["compile", "--bench", "ghz", "--n", "3", "--hw", "rubidium", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["n_swaps"] == 0
