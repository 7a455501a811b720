"""Central configuration for the atomc toolkit.

Defaults live here as module constants; `get_config()` overlays environment
variables on top of them and `RunConfig` validates one compile/study run.
"""

import os
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


# Default Configuration
DEFAULT_HARDWARE = "rubidium"
DEFAULT_SEED = 0
DEFAULT_IDLE_MODE = "arity_weighted"
DEFAULT_GRID_ROWS = 10
DEFAULT_GRID_COLS = 10
DEFAULT_LAYOUT_STRATEGY = "affinity"
DEFAULT_LOOKAHEAD = 20
DEFAULT_LOOKAHEAD_WEIGHT = 0.5
DEFAULT_DECAY = 0.001
DEFAULT_SCENARIO = "gate"
MAX_PARALLEL_POINTS = 8

IDLE_MODE_ALIASES = {"literal_eq15": "gate_sum"}
IDLE_MODES = ("arity_weighted", "gate_sum")
SCENARIOS = ("gate", "shuttle-parallel", "shuttle-sequential")


def normalize_idle_mode(mode: str) -> str:
    mode = IDLE_MODE_ALIASES.get(mode, mode)
    if mode not in IDLE_MODES:
        raise ValueError(f"unknown idle mode '{mode}', expected one of {IDLE_MODES}")
    return mode


def _split_dirs(value: Optional[str]) -> List[str]:
    if not value:
        return []
    return [d for d in value.split(os.pathsep) if d]


def _optional_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    return int(value) if value else None


def _optional_idle_mode() -> Optional[str]:
    value = os.getenv("ATOMC_IDLE_MODE")
    return normalize_idle_mode(value) if value else None


def get_config() -> Dict[str, Any]:
    """Get toolkit configuration.

    Returns:
        Configuration dictionary
    """
    return {
        "hw_dirs": _split_dirs(os.getenv("ATOMC_HW_DIR")),
        "seed": int(os.getenv("ATOMC_SEED", str(DEFAULT_SEED))),
        "idle_mode": _optional_idle_mode(),
        "grid_rows": _optional_int("ATOMC_GRID_ROWS"),
        "grid_cols": _optional_int("ATOMC_GRID_COLS"),
    }


class RunConfig(BaseModel):
    """One resolved compile or study invocation."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    qasm: Optional[str] = None
    bench: Optional[str] = None
    n: Optional[int] = Field(default=None, ge=1)
    hardware: str = DEFAULT_HARDWARE
    rows: Optional[int] = Field(default=None, ge=1)
    cols: Optional[int] = Field(default=None, ge=1)
    r_int: Optional[float] = Field(default=None, gt=0)
    r_re: Optional[float] = Field(default=None, gt=0)
    idle_mode: Optional[str] = None
    scenario: Literal["gate", "shuttle-parallel", "shuttle-sequential"] = "gate"
    seed: int = DEFAULT_SEED
    layout_strategy: Literal["identity", "random", "affinity"] = "affinity"
    lookahead: int = Field(default=DEFAULT_LOOKAHEAD, ge=0)
    decay: float = Field(default=DEFAULT_DECAY, ge=0)
    lower: bool = True
    cp_native: bool = False
    multiqubit_native: bool = True
    out: Optional[str] = None
    csv: Optional[str] = None
    qasm_out: Optional[str] = None

    @model_validator(mode="after")
    def _check_input(self) -> "RunConfig":
        if (self.qasm is None) == (self.bench is None):
            raise ValueError("exactly one input source is required: qasm or bench")
        if self.bench is not None and self.n is None:
            raise ValueError("--bench requires --n")
        if self.idle_mode is not None:
            normalize_idle_mode(self.idle_mode)
        return self

    @property
    def source_label(self) -> str:
        return self.qasm if self.qasm is not None else f"{self.bench}:{self.n}"


# Environment variable documentation
"""
Environment Variables:
----------------------

ATOMC_HW_DIR: Directories searched for hardware JSON files given by bare name
    Separated by os.pathsep (":" on Linux/macOS)
    Example: export ATOMC_HW_DIR=$HOME/atomc/hardware

ATOMC_SEED: Default seed when --seed is not given
    Default: 0
    Example: export ATOMC_SEED=7

ATOMC_IDLE_MODE: Idle-time accounting (arity_weighted, gate_sum) overriding the hardware spec
    Default: unset (the spec's idle_mode, arity_weighted for presets)
    Example: export ATOMC_IDLE_MODE=gate_sum

ATOMC_GRID_ROWS / ATOMC_GRID_COLS: Grid used with presets when --rows/--cols are absent
    Default: smallest near-square grid holding the circuit
    Example: export ATOMC_GRID_ROWS=12 ATOMC_GRID_COLS=10

Usage Examples:
--------------

# Compile a benchmark on the Rubidium preset:
atomc compile --bench ghz --n 16 --hw rubidium

# Use a custom hardware file from the search path:
export ATOMC_HW_DIR=./hardware
atomc compile --qasm circuit.qasm --hw my_array
"""
