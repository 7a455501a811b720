"""Shuttling layers with one evolving layout vs. full reconfiguration."""

from typing import Any, Dict, List, Sequence

from errors import StudyError
from mapper import route_layered
from shuttle import shuttle_layer_stats
from studies.base_study import BaseStudy

BREAKDOWN_KEYS = ("gate_us", "shuttle_motion_us", "trap_switch_us", "n_shuttles", "shuttle_fraction")


class LayerReductionStudy(BaseStudy):
    """Sweeps seeds; each seed regenerates the benchmark (a fixed QASM input
    only changes with the layout seed)."""

    name = "layer-reduction"
    needs_circuit = True
    default_bench = ("twolocal", 8)
    columns = ("seed", "n_qubits", "layers_fixed", "layers_reconfig", "reduction_ratio") + tuple(
        f"{mode}_{key}" for mode in ("fixed", "reconfig") for key in BREAKDOWN_KEYS
    )

    def default_values(self) -> List[Any]:
        return [self.seed]

    def check_values(self, values: Sequence[Any]) -> None:
        super().check_values(values)
        if any(int(v) != v for v in values):
            raise StudyError(f"{self.name}: seeds must be integers")

    def evaluate(self, value: Any) -> List[Dict[str, Any]]:
        seed = int(value)
        circuit = self.circuit_for(seed)
        fixed = route_layered(circuit, self.spec, "fixed", seed)
        reconfig = route_layered(circuit, self.spec, "reconfig", seed)
        stats = shuttle_layer_stats(fixed, reconfig, self.spec)
        row: Dict[str, Any] = {
            "seed": seed,
            "n_qubits": circuit.n,
            "layers_fixed": stats["layers_fixed"],
            "layers_reconfig": stats["layers_reconfig"],
            "reduction_ratio": stats["reduction_ratio"],
        }
        for mode in ("fixed", "reconfig"):
            for key in BREAKDOWN_KEYS:
                row[f"{mode}_{key}"] = stats[mode][key]
        return [row]
