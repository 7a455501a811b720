"""Required shuttle velocity vs. the number of idling qubits."""

from typing import Any, Dict, List, Sequence

from errors import StudyError
from fidelity import required_velocity, swap_substitution
from studies.base_study import BaseStudy


class VelocityStudy(BaseStudy):
    """One row per n_idle.

    Spectator model: all n_idle qubits idle for the whole SWAP, whether it
    runs as three CX gates or as a shuttle; the gate version also pays
    F_CX^3. `v_required_um_per_us` is "infeasible" when no speed within the
    hardware limit reaches the gate-based fidelity.
    """

    name = "velocity"
    columns = (
        "n_idle", "dist_um", "t_swap_us", "t_shuttle_breakeven_us", "v_required_um_per_us",
        "feasible", "f_gate_swap", "f_shuttle_vmax", "shuttle_preferred",
    )

    @property
    def dist_um(self) -> float:
        return float(self.options.get("dist_um") or 2 * self.spec.d_um)

    def default_values(self) -> List[Any]:
        return list(range(1, 601))

    def check_values(self, values: Sequence[Any]) -> None:
        super().check_values(values)
        if any(int(v) != v or v < 1 for v in values):
            raise StudyError(f"{self.name}: n_idle values must be integers >= 1")
        if not self.dist_um > 0:
            raise StudyError(f"{self.name}: shuttle distance must be positive")

    def evaluate(self, value: Any) -> List[Dict[str, Any]]:
        n_idle = int(value)
        result = required_velocity(n_idle, self.spec, self.dist_um)
        substitution = swap_substitution(n_idle, self.spec, self.dist_um)
        return [{
            "n_idle": n_idle,
            "dist_um": self.dist_um,
            "t_swap_us": result.t_swap_us,
            "t_shuttle_breakeven_us": result.t_shuttle_us,
            "v_required_um_per_us": result.velocity_um_per_us if result.feasible else "infeasible",
            "feasible": result.feasible,
            "f_gate_swap": substitution.f_gate,
            "f_shuttle_vmax": substitution.f_shuttle,
            "shuttle_preferred": substitution.shuttle_preferred,
        }]
