"""Hardware description of a grid-based neutral-atom processor.

Traps sit on a rows x cols grid with spacing d. Trap index i lives at
row i // cols, column i % cols, i.e. at (x, y) = (col * d, row * d) in μm.
Radii are given in units of d; the `*_um` properties convert them.

Time units: gate durations and shuttle times are μs, coherence times are s.
"""

import json
import logging
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from circuit import GateTag
from config import (
    DEFAULT_GRID_COLS, DEFAULT_GRID_ROWS, DEFAULT_IDLE_MODE, get_config, normalize_idle_mode,
)
from errors import HardwareSpecError

logger = logging.getLogger(__name__)

# absolute slack (μm) for distance comparisons against radii
DIST_TOL = 1e-9
US_PER_S = 1e6

GATE_CLASSES = ("1q", "cz", "ccz", "cccz")

Position = Tuple[float, float]


class ShuttleParams(BaseModel):
    """AOD shuttling parameters."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    v_max_um_per_us: float = Field(gt=0)
    t_trap_us: float = Field(gt=0)
    fidelity: float = Field(default=1.0, gt=0, le=1)
    # cycle: t_trap_us is one full pickup+drop cycle; switch: one trap switch
    trap_time_mode: Literal["cycle", "switch"] = "cycle"

    @property
    def cycle_us(self) -> float:
        return self.t_trap_us if self.trap_time_mode == "cycle" else 2 * self.t_trap_us


class HardwareSpec(BaseModel):
    """Grid geometry, radii, gate table, coherence and shuttle parameters.

    JSON documents may give either `r_re` or `blocking_factor`; the other one
    is derived (r_re = blocking_factor * r_int). Unknown fields are rejected.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    d_um: float = Field(gt=0)
    r_int: float = Field(gt=0)
    r_re: float = Field(gt=0)
    blocking_factor: float = Field(ge=1)
    durations_us: Dict[str, float]
    fidelities: Dict[str, float]
    t1_s: float = Field(gt=0)
    t2_s: float = Field(gt=0)
    shuttle: ShuttleParams
    idle_mode: Literal["arity_weighted", "gate_sum"] = DEFAULT_IDLE_MODE

    @model_validator(mode="before")
    @classmethod
    def _derive_restriction(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        r_int = data.get("r_int")
        r_re = data.get("r_re")
        k = data.get("blocking_factor")
        if r_int is None:
            return data
        if r_re is None and k is None:
            raise ValueError("one of r_re or blocking_factor is required")
        if r_re is None:
            data["r_re"] = float(k) * float(r_int)
        elif k is None:
            data["blocking_factor"] = float(r_re) / float(r_int)
        elif not math.isclose(float(r_re), float(k) * float(r_int), rel_tol=1e-9):
            raise ValueError(f"r_re={r_re} disagrees with blocking_factor={k} * r_int={r_int}")
        return data

    @field_validator("idle_mode", mode="before")
    @classmethod
    def _alias_idle_mode(cls, value: Any) -> Any:
        return normalize_idle_mode(value) if isinstance(value, str) else value

    @model_validator(mode="after")
    def _check_tables(self) -> "HardwareSpec":
        if self.r_re < self.r_int - DIST_TOL:
            raise ValueError(f"r_re ({self.r_re}) must be >= r_int ({self.r_int})")
        for table, label in ((self.durations_us, "durations_us"), (self.fidelities, "fidelities")):
            missing = [c for c in GATE_CLASSES if c not in table]
            if missing:
                raise ValueError(f"{label} missing gate classes {missing}")
            unknown = [c for c in table if c not in GATE_CLASSES]
            if unknown:
                raise ValueError(f"{label} has unknown gate classes {unknown}")
        for cls_name, value in self.durations_us.items():
            if not value > 0:
                raise ValueError(f"duration of {cls_name} must be > 0, got {value}")
        for cls_name, value in self.fidelities.items():
            if not 0 < value <= 1:
                raise ValueError(f"fidelity of {cls_name} must be in (0, 1], got {value}")
        return self

    # geometry

    @property
    def n_traps(self) -> int:
        return self.rows * self.cols

    @property
    def r_int_um(self) -> float:
        return self.r_int * self.d_um

    @property
    def r_re_um(self) -> float:
        return self.r_re * self.d_um

    def position(self, trap: int) -> Position:
        row, col = divmod(trap, self.cols)
        return (col * self.d_um, row * self.d_um)

    def positions(self) -> np.ndarray:
        return _grid_positions(self.rows, self.cols, self.d_um)

    def distance(self, a: int, b: int) -> float:
        (xa, ya), (xb, yb) = self.position(a), self.position(b)
        return math.hypot(xa - xb, ya - yb)

    # time and error tables

    @property
    def t_eff_s(self) -> float:
        return effective_coherence_time(self.t1_s, self.t2_s)

    @property
    def t_eff_us(self) -> float:
        return self.t_eff_s * US_PER_S

    @property
    def trap_cycle_us(self) -> float:
        return self.shuttle.cycle_us

    def duration_us(self, tag: GateTag) -> float:
        """Duration of one gate; CX and SWAP are priced as composites."""
        t1q, tcz = self.durations_us["1q"], self.durations_us["cz"]
        if tag in (GateTag.R1Q, GateTag.H, GateTag.X):
            return t1q
        if tag in (GateTag.CZ, GateTag.CP):
            return tcz
        if tag == GateTag.CX:
            return t1q + tcz
        if tag == GateTag.SWAP:
            return 3 * (t1q + tcz)
        return self.durations_us[tag.value]

    def fidelity(self, tag: GateTag) -> float:
        f1q, fcz = self.fidelities["1q"], self.fidelities["cz"]
        if tag in (GateTag.R1Q, GateTag.H, GateTag.X):
            return f1q
        if tag in (GateTag.CZ, GateTag.CP):
            return fcz
        if tag == GateTag.CX:
            return f1q * fcz
        if tag == GateTag.SWAP:
            return (f1q * fcz) ** 3
        return self.fidelities[tag.value]

    # derived specs

    def with_grid(self, rows: int, cols: int) -> "HardwareSpec":
        return _revalidate(self, rows=rows, cols=cols)

    def with_radii(self, r_int: Optional[float] = None, r_re: Optional[float] = None) -> "HardwareSpec":
        """Override radii; a lone r_int keeps the blocking factor."""
        new_r_int = self.r_int if r_int is None else r_int
        if r_re is None:
            new_r_re = self.blocking_factor * new_r_int if r_int is not None else self.r_re
        else:
            new_r_re = r_re
        return _revalidate(self, r_int=new_r_int, r_re=new_r_re, blocking_factor=None)

    def with_idle_mode(self, idle_mode: str) -> "HardwareSpec":
        return _revalidate(self, idle_mode=idle_mode)

    def with_fidelity(self, gate_class: str, value: float) -> "HardwareSpec":
        return _revalidate(self, fidelities={**self.fidelities, gate_class: value})

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def _revalidate(spec: HardwareSpec, **updates: Any) -> HardwareSpec:
    data = spec.model_dump()
    data.update(updates)
    if data.get("blocking_factor") is None:
        data.pop("blocking_factor", None)
    try:
        return HardwareSpec.model_validate(data)
    except ValidationError as exc:
        raise HardwareSpecError(f"invalid hardware spec '{spec.name}': {exc}") from exc


@lru_cache(maxsize=64)
def _grid_positions(rows: int, cols: int, d_um: float) -> np.ndarray:
    r, c = np.divmod(np.arange(rows * cols), cols)
    positions = np.stack([c * d_um, r * d_um], axis=1).astype(float)
    positions.setflags(write=False)
    return positions


@dataclass(frozen=True, eq=False)
class CouplingGraph:
    """Undirected trap connectivity plus all-pairs hop distances.

    The wrapped networkx graph is shared between callers and must not be
    mutated.
    """
    graph: nx.Graph
    hops: Dict[int, Dict[int, int]]
    hop_matrix: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.graph.number_of_nodes()

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((min(a, b), max(a, b)) for a, b in self.graph.edges())

    def has_edge(self, a: int, b: int) -> bool:
        return self.graph.has_edge(a, b)

    def neighbors(self, trap: int) -> List[int]:
        return sorted(self.graph.neighbors(trap))

    def hop(self, a: int, b: int) -> float:
        """Shortest-path hop count, inf when a and b are disconnected."""
        return self.hops[a].get(b, math.inf)

    def shortest_path(self, a: int, b: int) -> List[int]:
        return nx.shortest_path(self.graph, a, b)


@lru_cache(maxsize=64)
def _coupling_graph(rows: int, cols: int, d_um: float, r_int: float) -> CouplingGraph:
    positions = _grid_positions(rows, cols, d_um)
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    within = dist <= r_int * d_um + DIST_TOL
    ii, jj = np.nonzero(np.triu(within, k=1))

    graph = nx.Graph()
    graph.add_nodes_from(range(rows * cols))
    graph.add_edges_from(zip(ii.tolist(), jj.tolist()))
    hops = {src: dict(lengths) for src, lengths in nx.all_pairs_shortest_path_length(graph)}
    hop_matrix = np.full((rows * cols, rows * cols), np.inf)
    for src, lengths in hops.items():
        hop_matrix[src, list(lengths)] = list(lengths.values())
    hop_matrix.setflags(write=False)
    logger.debug("coupling graph %dx%d r_int=%g: %d edges", rows, cols, r_int,
                 graph.number_of_edges())
    return CouplingGraph(graph, hops, hop_matrix)


def coupling_graph(spec: HardwareSpec) -> CouplingGraph:
    """Edges are all trap pairs at Euclidean distance <= r_int * d."""
    return _coupling_graph(spec.rows, spec.cols, spec.d_um, spec.r_int)


def _pairwise_max(points: np.ndarray) -> float:
    diff = points[:, None, :] - points[None, :, :]
    return float(np.hypot(diff[..., 0], diff[..., 1]).max())


def gate_mappable(positions: Sequence[Position], r_int_abs: float) -> bool:
    """True iff every pair of operand positions is within r_int_abs (μm)."""
    points = np.asarray(positions, dtype=float)
    if len(points) < 2:
        return True
    return _pairwise_max(points) <= r_int_abs + DIST_TOL


def restriction_conflict(
    gate_a: Sequence[Position], gate_b: Sequence[Position], r_re_abs: float
) -> bool:
    """True iff two entangling gates may not run concurrently.

    Parallel execution needs every cross pair strictly farther apart than
    r_re_abs, so a minimum distance equal to r_re_abs is a conflict.

    Raises:
        ValueError: if the two gates share an operand position.
    """
    a = np.asarray(gate_a, dtype=float)
    b = np.asarray(gate_b, dtype=float)
    diff = a[:, None, :] - b[None, :, :]
    min_dist = float(np.hypot(diff[..., 0], diff[..., 1]).min())
    if min_dist <= DIST_TOL:
        raise ValueError("restriction check on gates with overlapping operands")
    return min_dist <= r_re_abs + DIST_TOL


def effective_coherence_time(t1: float, t2: float) -> float:
    """T1*T2/(T1+T2); never larger than the shorter of the two."""
    if t1 <= 0 or t2 <= 0:
        raise ValueError(f"coherence times must be positive, got T1={t1}, T2={t2}")
    return t1 * t2 / (t1 + t2)


def vdw_interaction(c6: float, dist: float) -> float:
    """Van der Waals interaction C6 / dist^6."""
    if dist <= 0:
        raise ValueError(f"distance must be positive, got {dist}")
    return c6 / dist ** 6


def blockade_radius(c6_over_hbar_omega: float) -> float:
    """Blockade radius (C6 / hbar Omega)^(1/6)."""
    if c6_over_hbar_omega <= 0:
        raise ValueError(f"C6/(hbar Omega) must be positive, got {c6_over_hbar_omega}")
    return c6_over_hbar_omega ** (1.0 / 6.0)


# Presets. Lower bounds in the published table are taken as equalities.
PRESETS: Dict[str, Dict[str, Any]] = {
    "strontium": {
        "name": "strontium",
        "d_um": 3.0,
        "r_int": 2.0,
        "r_re": 4.0,
        "durations_us": {"1q": 200.0, "cz": 0.1, "ccz": 1.0, "cccz": 1.0},
        "fidelities": {"1q": 0.99, "cz": 0.99, "ccz": 0.95, "cccz": 0.95},
        "t1_s": 1.0,
        "t2_s": 10.0,
        "shuttle": {"v_max_um_per_us": 0.025, "t_trap_us": 40.0, "fidelity": 1.0},
    },
    "rubidium": {
        "name": "rubidium",
        "d_um": 3.0,
        "r_int": 2.0,
        "r_re": 4.0,
        "durations_us": {"1q": 0.5, "cz": 0.2, "ccz": 1.0, "cccz": 1.0},
        "fidelities": {"1q": 0.999, "cz": 0.995, "ccz": 0.98, "cccz": 0.95},
        "t1_s": 100.0,
        "t2_s": 1.5,
        "shuttle": {"v_max_um_per_us": 0.55, "t_trap_us": 40.0, "fidelity": 1.0},
    },
}


def preset(name: str, rows: Optional[int] = None, cols: Optional[int] = None) -> HardwareSpec:
    """Return a preset HardwareSpec on a rows x cols grid.

    Raises:
        HardwareSpecError: unknown preset name.
    """
    key = name.lower()
    if key not in PRESETS:
        raise HardwareSpecError(
            f"unknown hardware preset '{name}' (known: {', '.join(sorted(PRESETS))})"
        )
    data = dict(PRESETS[key])
    data["rows"] = rows if rows is not None else DEFAULT_GRID_ROWS
    data["cols"] = cols if cols is not None else DEFAULT_GRID_COLS
    return HardwareSpec.model_validate(data)


def load_hardware(path: str) -> HardwareSpec:
    """Read a HardwareSpec JSON document.

    Raises:
        HardwareSpecError: unreadable file, malformed JSON or schema violation.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise HardwareSpecError(f"cannot read hardware file '{path}': {exc}") from exc
    try:
        return HardwareSpec.model_validate(data)
    except ValidationError as exc:
        raise HardwareSpecError(f"invalid hardware file '{path}': {exc}") from exc


def _search_path(name: str) -> Optional[str]:
    if os.path.isfile(name):
        return name
    for directory in get_config()["hw_dirs"]:
        for candidate in (name, f"{name}.json"):
            path = os.path.join(directory, candidate)
            if os.path.isfile(path):
                return path
    return None


def resolve_hardware(
    name_or_path: str, rows: Optional[int] = None, cols: Optional[int] = None
) -> HardwareSpec:
    """Preset name, file path, or bare name found on ATOMC_HW_DIR.

    `rows`/`cols` override the grid of the resolved spec when given.
    """
    if name_or_path.lower() in PRESETS:
        return preset(name_or_path, rows, cols)
    path = _search_path(name_or_path)
    if path is None:
        raise HardwareSpecError(
            f"unknown hardware preset '{name_or_path}' and no such spec file "
            f"(searched: ., {', '.join(get_config()['hw_dirs']) or 'ATOMC_HW_DIR unset'})"
        )
    spec = load_hardware(path)
    logger.info("loaded hardware spec '%s' from %s", spec.name, path)
    if rows is not None or cols is not None:
        spec = spec.with_grid(rows or spec.rows, cols or spec.cols)
    return spec


def auto_grid(n: int) -> Tuple[int, int]:
    """Smallest near-square grid (rows, cols) with at least n traps."""
    cols = max(1, math.ceil(math.sqrt(n)))
    rows = max(1, math.ceil(n / cols))
    return rows, cols
