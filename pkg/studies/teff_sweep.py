"""Radius sweep: SWAP overhead vs. idle time and the coherence-time crossover.

For each interaction radius (or restriction radius) the circuit is routed and
scheduled; the row reports the SWAP count, the idle time and the effective
coherence time at which idle decay and SWAP error contribute equally. The
circuit is also routed from the identity layout, and `t_eff_layout_balance_us`
is the coherence time at which both compilations score the same P.
"""

from typing import Any, Dict, List, Sequence, Tuple

from circuit import Circuit
from errors import StudyError
from fidelity import balance_teff, crossover_teff, cx_composite, success_probability
from hardware import HardwareSpec
from mapper import MappedCircuit, RoutingParams, initial_layout, route
from scheduler import Schedule, idle_time, metrics, schedule
from studies.base_study import BaseStudy

DEFAULT_RINT_VALUES = [1.0, 1.5, 2.0, 2.5, 3.0]
DEFAULT_RRE_VALUES = [2.0, 3.0, 4.0, 5.0, 6.0]


class TeffSweepStudy(BaseStudy):
    name = "teff-sweep"
    needs_circuit = True
    columns = (
        "sweep", "r_int", "r_re", "n_swaps", "makespan_us", "depth", "t_idle_us",
        "p", "f_cx", "t_eff_crossover_us",
        "n_swaps_identity", "t_idle_identity_us", "t_eff_layout_balance_us",
    )

    @property
    def sweep(self) -> str:
        return self.options.get("sweep", "rint")

    def default_values(self) -> List[Any]:
        return list(DEFAULT_RINT_VALUES if self.sweep == "rint" else DEFAULT_RRE_VALUES)

    def check_values(self, values: Sequence[Any]) -> None:
        super().check_values(values)
        if self.sweep not in ("rint", "rre"):
            raise StudyError(f"unknown sweep '{self.sweep}', expected rint or rre")
        if any(not v > 0 for v in values):
            raise StudyError(f"{self.name}: radii must be positive, got {list(values)}")

    def _compile(
        self, circuit: Circuit, spec: HardwareSpec, strategy: str
    ) -> Tuple[MappedCircuit, Schedule, float]:
        layout = initial_layout(circuit, spec, strategy, self.seed)
        mapped = route(circuit, spec, layout, RoutingParams(seed=self.seed))
        sched = schedule(mapped, spec)
        return mapped, sched, idle_time(sched, circuit.n, spec.idle_mode)

    def evaluate(self, value: Any) -> List[Dict[str, Any]]:
        if self.sweep == "rint":
            spec = self.spec.with_radii(r_int=float(value))
        else:
            spec = self.spec.with_radii(r_re=float(value))
        circuit = self.circuit_for(self.seed)
        mapped, sched, t_idle = self._compile(circuit, spec, "affinity")
        plain, _, t_idle_plain = self._compile(circuit, spec, "identity")
        f_cx = cx_composite(spec).fidelity
        crossover = crossover_teff(t_idle, mapped.n_swaps, f_cx) if t_idle > 0 else None
        stats = metrics(sched)
        return [{
            "sweep": self.sweep,
            "r_int": spec.r_int,
            "r_re": spec.r_re,
            "n_swaps": mapped.n_swaps,
            "makespan_us": stats["makespan_us"],
            "depth": stats["depth"],
            "t_idle_us": t_idle,
            "p": success_probability(sched, spec, circuit.n, mapped.n_swaps).p,
            "f_cx": f_cx,
            "t_eff_crossover_us": crossover,
            "n_swaps_identity": plain.n_swaps,
            "t_idle_identity_us": t_idle_plain,
            "t_eff_layout_balance_us": balance_teff(
                t_idle, mapped.n_swaps, t_idle_plain, plain.n_swaps, f_cx
            ),
        }]
