"""Native multi-qubit gates vs. their CZ-based replacement blocks."""

from typing import Any, Dict, List, Sequence

from errors import StudyError
from fidelity import decomposition_breakeven
from studies.base_study import BaseStudy

GATES = ("ccz", "cccz")


class DecompositionStudy(BaseStudy):
    """Rows for CCZ and CCCZ. With --values, each value is a CZ fidelity and
    the breakeven native fidelity is reported for it."""

    name = "decomposition"
    columns = (
        "gate", "f_cz", "f_native", "p_native", "p_decomposed", "breakeven_fidelity",
        "preferred", "n_one_qubit", "n_cz",
    )

    def default_values(self) -> List[Any]:
        return [None]

    def check_values(self, values: Sequence[Any]) -> None:
        super().check_values(values)
        if any(v is not None and not 0 < v <= 1 for v in values):
            raise StudyError(f"{self.name}: CZ fidelities must be in (0, 1]")

    def evaluate(self, value: Any) -> List[Dict[str, Any]]:
        spec = self.spec if value is None else self.spec.with_fidelity("cz", float(value))
        rows = []
        for gate in GATES:
            result = decomposition_breakeven(gate, spec)
            rows.append({
                "gate": gate,
                "f_cz": spec.fidelities["cz"],
                "f_native": spec.fidelities[gate],
                "p_native": result.p_native,
                "p_decomposed": result.p_decomposed,
                "breakeven_fidelity": result.breakeven_fidelity,
                "preferred": "native" if result.native_preferred else "decomposed",
                "n_one_qubit": result.n_one_qubit,
                "n_cz": result.n_cz,
            })
        return rows
