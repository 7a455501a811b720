"""Compilation pipeline: lower → map → verify → schedule → fidelity.

`CompilationPipeline` coordinates the stages for one `RunConfig` and returns
a result dict in the same shape every entry point uses:
{"status": "success", ...} or {"status": "error", "message": ...}.
Progress lines go to stderr so stdout and report files stay machine-readable.
"""

import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from benchmarks import generate
from circuit import Circuit, NativeSet, lower_to_native
from config import RunConfig, get_config
from errors import AtomcError, QasmError, RoutingError
from fidelity import success_probability
from hardware import PRESETS, HardwareSpec, auto_grid, resolve_hardware
from mapper import MappedCircuit, RoutingParams, initial_layout, route, verify
from qasm_io import emit_qasm, parse_qasm
from reports import REPORT_FORMAT, SCHEDULE_COLUMNS, to_json, write_csv, write_json, write_text
from scheduler import Schedule, metrics, schedule
from shuttle import ShuttlePlan, schedule_shuttle_plan, shuttles_from_swaps


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def load_circuit(
    qasm: Optional[str] = None, bench: Optional[str] = None, n: Optional[int] = None, seed: int = 0
) -> Circuit:
    """Read a QASM file or generate a benchmark."""
    if qasm is not None:
        try:
            text = Path(qasm).read_text(encoding="utf-8")
        except OSError as exc:
            raise QasmError(f"cannot read '{qasm}': {exc}") from exc
        return parse_qasm(text, name=Path(qasm).stem)
    if bench is None or n is None:
        raise AtomcError("an input circuit needs --qasm or --bench with --n")
    return generate(bench, n, seed=seed)


def prepare_circuit(circuit: Circuit, lower: bool = True, cp_native: bool = False,
                    multiqubit_native: bool = True) -> Circuit:
    if not lower:
        return circuit
    return lower_to_native(circuit, NativeSet(cp_native=cp_native, multiqubit_native=multiqubit_native))


def resolve_spec(
    hardware: str,
    n: int,
    rows: Optional[int] = None,
    cols: Optional[int] = None,
    r_int: Optional[float] = None,
    r_re: Optional[float] = None,
    idle_mode: Optional[str] = None,
) -> HardwareSpec:
    """HardwareSpec for an n-qubit run.

    Grid precedence: explicit rows/cols, then ATOMC_GRID_ROWS/COLS, then the
    file's own grid, and for presets the smallest near-square grid holding n.
    """
    config = get_config()
    rows = rows or config["grid_rows"]
    cols = cols or config["grid_cols"]
    if rows is None and cols is None and hardware.lower() in PRESETS:
        rows, cols = auto_grid(n)
    elif (rows is None) != (cols is None) and hardware.lower() in PRESETS:
        given = rows or cols
        other = math.ceil(n / given)
        rows, cols = (given, other) if rows is not None else (other, given)
    spec = resolve_hardware(hardware, rows, cols)
    if r_int is not None or r_re is not None:
        spec = spec.with_radii(r_int=r_int, r_re=r_re)
    idle_mode = idle_mode or config["idle_mode"]
    if idle_mode is not None:
        spec = spec.with_idle_mode(idle_mode)
    return spec


class CompilationPipeline:
    """Runs one compile invocation end to end."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.mapped: Optional[MappedCircuit] = None
        self.sched: Optional[Schedule] = None

    def _map(self, circuit: Circuit, spec: HardwareSpec) -> MappedCircuit:
        cfg = self.cfg
        layout = initial_layout(circuit, spec, cfg.layout_strategy, cfg.seed)
        params = RoutingParams(lookahead_size=cfg.lookahead, decay=cfg.decay, seed=cfg.seed)
        mapped = route(circuit, spec, layout, params)
        violations = verify(mapped, spec)
        if violations:
            raise RoutingError(f"mapped circuit failed verification: {violations[0]}")
        return mapped

    def _schedule(self, mapped: MappedCircuit, spec: HardwareSpec) -> Tuple[Schedule, Optional[ShuttlePlan]]:
        if self.cfg.scenario == "gate":
            return schedule(mapped, spec), None
        scenario = "parallel" if self.cfg.scenario == "shuttle-parallel" else "sequential"
        plan = shuttles_from_swaps(mapped, spec, scenario)
        return schedule_shuttle_plan(plan, mapped, spec), plan

    def build_report(self) -> Dict[str, Any]:
        """Run every stage and return the report dict. Raises AtomcError."""
        cfg = self.cfg
        source = load_circuit(cfg.qasm, cfg.bench, cfg.n, cfg.seed)
        circuit = prepare_circuit(source, cfg.lower, cfg.cp_native, cfg.multiqubit_native)
        spec = resolve_spec(cfg.hardware, circuit.n, cfg.rows, cfg.cols, cfg.r_int, cfg.r_re, cfg.idle_mode)
        _status(f"🧭 {circuit.name}: {circuit.n} qubits, {len(circuit)} gates on "
                f"{spec.name} {spec.rows}x{spec.cols}")

        mapped = self._map(circuit, spec)
        sched, plan = self._schedule(mapped, spec)
        fid = success_probability(sched, spec, circuit.n, mapped.n_swaps)
        stats = metrics(sched)
        report: Dict[str, Any] = {
            "format": REPORT_FORMAT,
            "source": cfg.source_label,
            "circuit": {
                "name": source.name,
                "n_qubits": source.n,
                "n_gates": len(source),
                "counts": source.count_by_kind(),
                "lowered_gates": len(circuit),
            },
            "hardware": spec.to_dict(),
            "options": {
                "scenario": cfg.scenario,
                "seed": cfg.seed,
                "layout_strategy": cfg.layout_strategy,
                "lookahead": cfg.lookahead,
                "decay": cfg.decay,
                "lower": cfg.lower,
                "cp_native": cfg.cp_native,
                "multiqubit_native": cfg.multiqubit_native,
            },
            "n_swaps": mapped.n_swaps,
            "makespan_us": stats["makespan_us"],
            "depth": stats["depth"],
            "counts": stats["counts"],
            "t_idle_us": fid.t_idle_us,
            "idle_mode": spec.idle_mode,
            "P": fid.p,
            "gate_factor": fid.gate_factor,
            "idle_factor": fid.idle_factor,
            "t_eff_us": spec.t_eff_us,
            "mapping": mapped.to_dict(),
        }
        if plan is not None:
            report["shuttle"] = {
                "n_ops": len(plan.ops),
                "total_duration_us": plan.total_duration_us,
                "idle_us": sched.shuttle_idle_us,
                "plan": plan.to_dict(spec),
            }
        self.mapped, self.sched = mapped, sched
        return report

    def _write_outputs(self, report: Dict[str, Any]) -> List[str]:
        cfg = self.cfg
        mapped, sched = self.mapped, self.sched
        written: List[str] = []
        jobs = []
        if cfg.out:
            jobs.append(lambda: write_json(cfg.out, report))
        if cfg.csv:
            jobs.append(lambda: write_csv(cfg.csv, SCHEDULE_COLUMNS, sched.to_rows()))
        if cfg.qasm_out:
            jobs.append(lambda: write_text(cfg.qasm_out, emit_qasm(mapped.to_circuit())))
        for job in jobs:
            result = job()
            if result["status"] != "success":
                raise AtomcError(result["message"])
            written.append(result["file_path"])
        return written

    def run(self) -> Dict[str, Any]:
        try:
            report = self.build_report()
            files = self._write_outputs(report)
        except (AtomcError, ValueError) as exc:
            _status(f"❌ {exc}")
            return {"status": "error", "message": str(exc)}
        _status(f"✅ P={report['P']:.6g}, {report['n_swaps']} swaps, "
                f"makespan {report['makespan_us']:.6g} us")
        return {"status": "success", "report": report, "files": files,
                "text": None if self.cfg.out else to_json(report)}
