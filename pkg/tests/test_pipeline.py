"""Tests for the compile pipeline and its configuration."""

import csv
import json

import pytest
from pydantic import ValidationError

from config import RunConfig, get_config
from errors import HardwareSpecError
from pipeline import CompilationPipeline, load_circuit, resolve_spec
from qasm_io import parse_qasm


def ghz_config(**overrides):
    options = dict(bench="ghz", n=3, hardware="rubidium", rows=3, cols=3, lower=False,
                   layout_strategy="identity")
    options.update(overrides)
    return RunConfig(**options)


class TestRunConfig:
    def test_needs_exactly_one_source(self):
        with pytest.raises(ValidationError):
            RunConfig(qasm="a.qasm", bench="ghz", n=3)
        with pytest.raises(ValidationError):
            RunConfig()

    def test_bench_needs_width(self):
        with pytest.raises(ValidationError):
            RunConfig(bench="ghz")

    def test_idle_mode_checked(self):
        with pytest.raises(ValidationError):
            RunConfig(bench="ghz", n=3, idle_mode="bogus")

    def test_source_label(self):
        assert ghz_config().source_label == "ghz:3"


class TestEnvironment:
    def test_defaults(self):
        config = get_config()
        assert config["seed"] == 0
        assert config["idle_mode"] is None
        assert config["hw_dirs"] == []

    def test_overrides(self, monkeypatch):
        monkeypatch.setenv("ATOMC_SEED", "7")
        monkeypatch.setenv("ATOMC_IDLE_MODE", "literal_eq15")
        monkeypatch.setenv("ATOMC_GRID_ROWS", "4")
        config = get_config()
        assert (config["seed"], config["idle_mode"], config["grid_rows"]) == (7, "gate_sum", 4)

    def test_bad_idle_mode(self, monkeypatch):
        monkeypatch.setenv("ATOMC_IDLE_MODE", "sometimes")
        with pytest.raises(ValueError):
            get_config()


class TestResolveSpec:
    def test_auto_grid_for_presets(self):
        spec = resolve_spec("rubidium", 10)
        assert (spec.rows, spec.cols) == (3, 4)

    def test_single_dimension_fills_the_other(self):
        spec = resolve_spec("strontium", 120, rows=12)
        assert (spec.rows, spec.cols) == (12, 10)

    def test_environment_grid(self, monkeypatch):
        monkeypatch.setenv("ATOMC_GRID_ROWS", "5")
        monkeypatch.setenv("ATOMC_GRID_COLS", "6")
        spec = resolve_spec("rubidium", 4)
        assert (spec.rows, spec.cols) == (5, 6)

    def test_radii_and_idle_mode(self, monkeypatch):
        spec = resolve_spec("rubidium", 4, r_int=1.5)
        assert spec.r_re == pytest.approx(3.0)
        monkeypatch.setenv("ATOMC_IDLE_MODE", "gate_sum")
        assert resolve_spec("rubidium", 4).idle_mode == "gate_sum"
        assert resolve_spec("rubidium", 4, idle_mode="arity_weighted").idle_mode == "arity_weighted"

    def test_unknown_hardware(self):
        with pytest.raises(HardwareSpecError):
            resolve_spec("plutonium", 4)


class TestPipeline:
    def test_ghz_report(self):
        result = CompilationPipeline(ghz_config()).run()
        assert result["status"] == "success"
        report = result["report"]
        assert report["format"] == "atomc-report/1"
        assert report["n_swaps"] == 0
        assert report["makespan_us"] == pytest.approx(1.9)
        assert report["t_idle_us"] == pytest.approx(2.4)
        assert report["P"] == pytest.approx(0.987056, abs=1e-6)
        assert report["depth"] == 3
        assert report["circuit"]["counts"] == {"cx": 2, "h": 1}
        assert json.loads(result["text"])["P"] == report["P"]

    def test_gate_sum_idle_mode(self):
        report = CompilationPipeline(ghz_config(idle_mode="literal_eq15")).run()["report"]
        assert report["t_idle_us"] == pytest.approx(3.8)
        assert report["idle_mode"] == "gate_sum"

    def test_reports_are_deterministic(self):
        cfg = RunConfig(bench="qft", n=6, rows=3, cols=3, r_int=1.0, r_re=2.0, seed=5)
        assert CompilationPipeline(cfg).run()["text"] == CompilationPipeline(cfg).run()["text"]

    @pytest.mark.parametrize("scenario", ["shuttle-parallel", "shuttle-sequential"])
    def test_shuttle_scenarios(self, scenario):
        cfg = RunConfig(bench="qft", n=6, rows=3, cols=3, r_int=1.0, r_re=2.0, scenario=scenario)
        report = CompilationPipeline(cfg).run()["report"]
        assert report["n_swaps"] > 0
        assert report["shuttle"]["n_ops"] > 0
        assert "swap" not in report["counts"]
        gate = CompilationPipeline(cfg.model_copy(update={"scenario": "gate"})).run()["report"]
        assert report["makespan_us"] > gate["makespan_us"]

    def test_output_files(self, tmp_path):
        cfg = ghz_config(out=str(tmp_path / "r.json"), csv=str(tmp_path / "s.csv"),
                         qasm_out=str(tmp_path / "sub" / "m.qasm"))
        result = CompilationPipeline(cfg).run()
        assert result["text"] is None
        assert len(result["files"]) == 3
        assert json.loads((tmp_path / "r.json").read_text())["n_swaps"] == 0
        with open(tmp_path / "s.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert [r["op"] for r in rows] == ["h", "cx", "cx"]
        assert rows[1]["source"] == "1"
        mapped = parse_qasm((tmp_path / "sub" / "m.qasm").read_text())
        assert mapped.n == 9

    def test_missing_qasm_file(self, tmp_path):
        result = CompilationPipeline(RunConfig(qasm=str(tmp_path / "none.qasm"))).run()
        assert result["status"] == "error"
        assert "cannot read" in result["message"]

    def test_too_small_grid(self):
        result = CompilationPipeline(RunConfig(bench="ghz", n=10, rows=2, cols=2)).run()
        assert result["status"] == "error"

    def test_qasm_file_name(self, tmp_path):
        path = tmp_path / "bell.qasm"
        path.write_text("qreg q[2];\nh q[0];\ncx q[0],q[1];\n")
        assert load_circuit(qasm=str(path)).name == "bell"

    def test_multiqubit_decomposition_costs_more(self, tmp_path):
        path = tmp_path / "tof.qasm"
        path.write_text("qreg q[3];\nccz q[0],q[1],q[2];\n")
        native = CompilationPipeline(RunConfig(qasm=str(path), hardware="rubidium")).run()
        blocks = CompilationPipeline(RunConfig(qasm=str(path), hardware="rubidium",
                                               multiqubit_native=False)).run()
        assert native["report"]["counts"] == {"ccz": 1}
        assert blocks["report"]["counts"]["cz"] == 6
        assert blocks["report"]["P"] < native["report"]["P"]


@pytest.mark.slow
def test_desk_scale_compile():
    cfg = RunConfig(bench="twolocal", n=120, hardware="strontium", rows=12, cols=10)
    result = CompilationPipeline(cfg).run()
    assert result["status"] == "success"
    assert result["report"]["circuit"]["n_qubits"] == 120


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["ghz", "wstate", "graphstate", "dj", "qft", "twolocal"])
def test_desk_scale_benchmarks(kind):
    cfg = RunConfig(bench=kind, n=120, hardware="rubidium", rows=12, cols=10)
    result = CompilationPipeline(cfg).run()
    assert result["status"] == "success"
    assert result["report"]["format"] == "atomc-report/1"
