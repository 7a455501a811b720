"""Trade-off studies package."""

from typing import Dict, Type

from errors import StudyError
from studies.base_study import BaseStudy
from studies.decomposition import DecompositionStudy
from studies.layer_reduction import LayerReductionStudy
from studies.shuttle_vs_gate import ShuttleVsGateStudy
from studies.teff_sweep import TeffSweepStudy
from studies.velocity import VelocityStudy

STUDIES: Dict[str, Type[BaseStudy]] = {
    "teff-sweep": TeffSweepStudy,
    "velocity": VelocityStudy,
    "decomposition": DecompositionStudy,
    "shuttle-vs-gate": ShuttleVsGateStudy,
    "layer-reduction": LayerReductionStudy,
}


def get_study(kind: str) -> Type[BaseStudy]:
    if kind not in STUDIES:
        raise StudyError(f"unknown study '{kind}' (known: {', '.join(STUDIES)})")
    return STUDIES[kind]


__all__ = [
    "BaseStudy", "DecompositionStudy", "LayerReductionStudy", "ShuttleVsGateStudy",
    "TeffSweepStudy", "VelocityStudy", "STUDIES", "get_study",
]
