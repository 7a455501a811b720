"""Gate-based SWAPs vs. shuttling for one routed circuit.

The circuit is routed once. Its SWAPs are then either executed as gates or
replaced by shuttles scheduled in the parallel and sequential scenarios. For
each CX fidelity in the sweep the row reports the mapping fidelities and the
effective coherence times at which shuttling starts to win.
"""

from typing import Any, Dict, List, Sequence

from errors import StudyError
from fidelity import f_shuttle, f_swap, shuttle_crossover_teff
from mapper import MappedCircuit, RoutingParams, initial_layout, route
from scheduler import idle_time, schedule
from shuttle import schedule_shuttle_plan, shuttles_from_swaps
from studies.base_study import BaseStudy


class ShuttleVsGateStudy(BaseStudy):
    name = "shuttle-vs-gate"
    needs_circuit = True
    default_bench = ("qft", 16)
    columns = (
        "f_cx", "n_swaps", "t_idle_gate_us", "t_idle_parallel_us", "t_idle_sequential_us",
        "f_swap", "f_shuttle_parallel", "f_shuttle_sequential",
        "t_eff_crossover_parallel_us", "t_eff_crossover_sequential_us",
    )

    def default_values(self) -> List[Any]:
        return [0.99, 0.995, 0.999, 0.9999]

    def check_values(self, values: Sequence[Any]) -> None:
        super().check_values(values)
        if any(not 0 < v <= 1 for v in values):
            raise StudyError(f"{self.name}: F_CX values must be in (0, 1]")

    def setup(self) -> None:
        circuit = self.circuit_for(self.seed)
        layout = initial_layout(circuit, self.spec, "affinity", self.seed)
        self.mapped: MappedCircuit = route(circuit, self.spec, layout, RoutingParams(seed=self.seed))
        n = circuit.n
        self.t_idle_gate = idle_time(schedule(self.mapped, self.spec), n, self.spec.idle_mode)
        self.t_idle_shuttle: Dict[str, float] = {}
        for scenario in ("parallel", "sequential"):
            plan = shuttles_from_swaps(self.mapped, self.spec, scenario)
            sched = schedule_shuttle_plan(plan, self.mapped, self.spec)
            self.t_idle_shuttle[scenario] = idle_time(sched, n, self.spec.idle_mode)

    def evaluate(self, value: Any) -> List[Dict[str, Any]]:
        f_cx = float(value)
        n_swaps = self.mapped.n_swaps
        par, seq = self.t_idle_shuttle["parallel"], self.t_idle_shuttle["sequential"]
        return [{
            "f_cx": f_cx,
            "n_swaps": n_swaps,
            "t_idle_gate_us": self.t_idle_gate,
            "t_idle_parallel_us": par,
            "t_idle_sequential_us": seq,
            "f_swap": f_swap(n_swaps, self.t_idle_gate, self.spec, f_cx),
            "f_shuttle_parallel": f_shuttle(par, self.spec),
            "f_shuttle_sequential": f_shuttle(seq, self.spec),
            "t_eff_crossover_parallel_us": shuttle_crossover_teff(self.t_idle_gate, n_swaps, par, f_cx),
            "t_eff_crossover_sequential_us": shuttle_crossover_teff(self.t_idle_gate, n_swaps, seq, f_cx),
        }]
