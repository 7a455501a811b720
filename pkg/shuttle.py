"""Atom shuttling: AOD move validation, SWAP-to-shuttle substitution and
shuttle-aware scheduling.

An AOD is described by its column coordinates x and row coordinates y. A move
displaces whole columns and rows, so it is valid only if the coordinates stay
strictly ordered with gaps larger than d_min on both axes. With simultaneous
linear ramps, checking the end points is enough.

Shuttle time follows t = 2 * (t_cycle + distance / v), where t_cycle is one
full pickup and drop and the leading factor covers the two sequential atom
moves of an exchange.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from errors import PlanMismatchError
from hardware import HardwareSpec
from mapper import EMPTY, Layout, LayeredPlan, MappedCircuit, MappedGate
from scheduler import ListScheduler, Schedule, ScheduledOp, place_gate

logger = logging.getLogger(__name__)

Scenario = Literal["parallel", "sequential"]


class AodGrid(BaseModel):
    """AOD column (x) and row (y) coordinates in μm."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    x: Tuple[float, ...]
    y: Tuple[float, ...]
    d_min: float = 0.0

    @model_validator(mode="after")
    def _check_spacing(self) -> "AodGrid":
        if self.d_min < 0:
            raise ValueError(f"d_min must be >= 0, got {self.d_min}")
        for axis, coords in (("x", self.x), ("y", self.y)):
            if not all(math.isfinite(c) for c in coords):
                raise ValueError(f"{axis} coordinates must be finite")
            for a, b in zip(coords, coords[1:]):
                if not b - a > self.d_min:
                    raise ValueError(
                        f"{axis} coordinates must increase by more than d_min={self.d_min}: "
                        f"{a} then {b}"
                    )
        return self

    def moved(self, move: "Move") -> "AodGrid":
        return AodGrid(
            x=tuple(c + dx for c, dx in zip(self.x, move.dx)),
            y=tuple(c + dy for c, dy in zip(self.y, move.dy)),
            d_min=self.d_min,
        )


class Move(BaseModel):
    """Per-column displacements dx and per-row displacements dy (μm)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    dx: Tuple[float, ...]
    dy: Tuple[float, ...]


@dataclass(frozen=True)
class MoveViolation:
    axis: str
    kind: str
    message: str
    index: Optional[int] = None
    move_index: Optional[int] = None

    def __str__(self) -> str:
        where = f"move {self.move_index}: " if self.move_index is not None else ""
        return f"{where}{self.axis} axis {self.kind}: {self.message}"


def _check_axis(axis: str, coords: Sequence[float], deltas: Sequence[float], d_min: float) -> List[MoveViolation]:
    if len(deltas) != len(coords):
        return [MoveViolation(axis, "length", f"{len(deltas)} displacements for {len(coords)} coordinates")]
    if not all(math.isfinite(d) for d in deltas):
        return [MoveViolation(axis, "non-finite", "displacements must be finite")]
    targets = [c + d for c, d in zip(coords, deltas)]
    violations = []
    for i, (a, b) in enumerate(zip(targets, targets[1:])):
        if b < a:
            violations.append(MoveViolation(
                axis, "crossing", f"lines {i} and {i + 1} cross ({a:g} > {b:g})", index=i
            ))
        elif b - a <= d_min:
            violations.append(MoveViolation(
                axis, "gap", f"lines {i} and {i + 1} end {b - a:g} apart, need > {d_min:g}", index=i
            ))
    return violations


def validate_move(grid: AodGrid, move: Move) -> List[MoveViolation]:
    """Empty list iff the move keeps both axes ordered with gaps > d_min."""
    return (_check_axis("x", grid.x, move.dx, grid.d_min)
            + _check_axis("y", grid.y, move.dy, grid.d_min))


def validate_move_sequence(grid: AodGrid, moves: Sequence[Move]) -> List[MoveViolation]:
    """Validate moves applied one after another; invalid moves are skipped."""
    violations: List[MoveViolation] = []
    current = grid
    for index, move in enumerate(moves):
        found = validate_move(current, move)
        if found:
            violations.extend(
                MoveViolation(v.axis, v.kind, v.message, v.index, move_index=index) for v in found
            )
            continue
        current = current.moved(move)
    return violations


def shuttle_duration(distance: float, spec: HardwareSpec, velocity: Optional[float] = None) -> float:
    """Duration in μs of a shuttle over `distance` μm.

    Raises:
        ValueError: negative distance, or a velocity that is not positive or
            exceeds the hardware maximum.
    """
    if distance < 0:
        raise ValueError(f"shuttle distance must be >= 0, got {distance}")
    v_max = spec.shuttle.v_max_um_per_us
    v = v_max if velocity is None else velocity
    if v <= 0 or v > v_max * (1 + 1e-12):
        raise ValueError(f"shuttle velocity {v} outside (0, {v_max}]")
    return 2 * (spec.trap_cycle_us + distance / v)


@dataclass(frozen=True)
class ShuttleOp:
    """One atom transport. An exchange swaps `qubit` and `partner` between
    two traps; a move carries `qubit` alone. `group` numbers the block of
    consecutive SWAPs that completes the transport and `position` is that
    block's first index in the mapped gate sequence."""
    qubit: int
    source: int
    destination: int
    distance_um: float
    duration_us: float
    kind: Literal["move", "exchange"] = "move"
    partner: Optional[int] = None
    group: int = 0
    position: int = 0

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,) if self.partner is None else (self.qubit, self.partner)

    def to_dict(self, spec: Optional[HardwareSpec] = None) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.kind,
            "qubit": self.qubit,
            "partner": self.partner,
            "source": self.source,
            "destination": self.destination,
            "distance_um": self.distance_um,
            "duration_us": self.duration_us,
            "group": self.group,
            "position": self.position,
        }
        if spec is not None:
            data["source_xy"] = list(spec.position(self.source))
            data["destination_xy"] = list(spec.position(self.destination))
        return data


@dataclass(frozen=True)
class ShuttlePlan:
    ops: Tuple[ShuttleOp, ...]
    scenario: Scenario = "parallel"

    def groups(self) -> Dict[int, List[ShuttleOp]]:
        grouped: Dict[int, List[ShuttleOp]] = {}
        for op in self.ops:
            grouped.setdefault(op.group, []).append(op)
        return grouped

    @property
    def total_duration_us(self) -> float:
        return sum(op.duration_us for op in self.ops)

    def to_dict(self, spec: Optional[HardwareSpec] = None) -> Dict[str, Any]:
        return {"scenario": self.scenario, "ops": [op.to_dict(spec) for op in self.ops]}


Transport = Tuple[int, int, int]


def _collapse(
    transports: Sequence[Transport], spec: HardwareSpec, group: int, position: int
) -> List[ShuttleOp]:
    """One op per (qubit, source, destination); two atoms trading traps share an exchange."""
    by_route: Dict[Tuple[int, int], List[int]] = {}
    for q, src, dst in sorted(transports):
        by_route.setdefault((src, dst), []).append(q)
    paired: Set[int] = set()
    ops = []
    for q, src, dst in sorted(transports):
        if q in paired:
            continue
        partner = next((p for p in by_route.get((dst, src), []) if p not in paired), None)
        if partner is not None:
            paired.update((q, partner))
        dist = spec.distance(src, dst)
        kind = "move" if partner is None else "exchange"
        ops.append(ShuttleOp(q, src, dst, dist, shuttle_duration(dist, spec), kind, partner,
                             group, position))
    return ops


def net_moves(
    occupancy: Sequence[int],
    swaps: Sequence[Tuple[int, int]],
    spec: HardwareSpec,
    group: int = 0,
    position: int = 0,
) -> List[ShuttleOp]:
    """Collapse a block of trap swaps into shuttle ops.

    Every atom that ends the block on a different trap is transported once,
    from its start trap to its end trap. Two atoms that trade traps form one
    exchange; the rest move alone. Empty traps produce nothing.
    """
    slots = list(occupancy)
    start = {q: t for t, q in enumerate(occupancy) if q != EMPTY}
    for a, b in swaps:
        slots[a], slots[b] = slots[b], slots[a]
    transports = [(q, start[q], t) for t, q in enumerate(slots) if q != EMPTY and start[q] != t]
    return _collapse(transports, spec, group, position)


def _swap_blocks(mapped: MappedCircuit) -> List[Tuple[int, List[Tuple[int, int]]]]:
    """(first index, swaps) for every maximal run of consecutive inserted SWAPs."""
    blocks: List[Tuple[int, List[Tuple[int, int]]]] = []
    for index, mg in enumerate(mapped.gates):
        if not mg.is_swap:
            continue
        pair = (mg.traps[0], mg.traps[1])
        if blocks and blocks[-1][0] + len(blocks[-1][1]) == index:
            blocks[-1][1].append(pair)
        else:
            blocks.append((index, [pair]))
    return blocks


def _qubit_runs(mapped: MappedCircuit) -> List[Tuple[int, int, int, int]]:
    """(qubit, start trap, end trap, last SWAP index) per run of SWAPs on one qubit.

    A run ends at the next non-SWAP gate acting on that qubit; gates on other
    qubits do not interrupt it. Runs that return the qubit to its start are dropped.
    """
    occupancy = mapped.initial_layout.occupancy()
    where = list(mapped.initial_layout.traps)
    open_runs: Dict[int, List[int]] = {}
    runs = []

    def close(q: int) -> None:
        start, last = open_runs.pop(q)
        if where[q] != start:
            runs.append((q, start, where[q], last))

    for index, mg in enumerate(mapped.gates):
        if mg.is_swap:
            a, b = mg.traps
            for trap in (a, b):
                q = occupancy[trap]
                if q != EMPTY:
                    open_runs.setdefault(q, [trap, index])[1] = index
            occupancy[a], occupancy[b] = occupancy[b], occupancy[a]
            for trap in (a, b):
                if occupancy[trap] != EMPTY:
                    where[occupancy[trap]] = trap
        else:
            for q in mg.qubits:
                if q in open_runs:
                    close(q)
    for q in sorted(open_runs):
        close(q)
    return runs


def shuttles_from_swaps(
    mapped: MappedCircuit, spec: HardwareSpec, scenario: Scenario = "parallel"
) -> ShuttlePlan:
    """Replace the inserted SWAPs of a mapped circuit by shuttle operations.

    Each run of SWAPs carrying one qubit becomes a single transport from the
    run's first trap to its last, placed with the SWAP block that ends the run.
    Intermediate trap occupancy is not re-checked.
    """
    blocks = _swap_blocks(mapped)
    block_of = {
        first + offset: number
        for number, (first, swaps) in enumerate(blocks)
        for offset in range(len(swaps))
    }
    grouped: Dict[int, List[Transport]] = {}
    for q, start, end, last in _qubit_runs(mapped):
        grouped.setdefault(block_of[last], []).append((q, start, end))
    ops: List[ShuttleOp] = []
    for number in sorted(grouped):
        ops.extend(_collapse(grouped[number], spec, number, blocks[number][0]))
    logger.debug("%d swaps became %d shuttle ops", mapped.n_swaps, len(ops))
    return ShuttlePlan(tuple(ops), scenario)


def replay_plan(plan: ShuttlePlan, layout: Layout) -> Layout:
    """Layout reached by applying every group of `plan` to `layout`.

    Raises:
        PlanMismatchError: an op's source trap does not hold its qubit.
    """
    traps = list(layout.traps)
    for group, ops in sorted(plan.groups().items()):
        updates: Dict[int, int] = {}
        for op in ops:
            for q, src, dst in _endpoints(op):
                if traps[q] != src:
                    raise PlanMismatchError(
                        f"group {group}: qubit {q} expected on trap {src}, found on {traps[q]}"
                    )
                updates[q] = dst
        for q, dst in updates.items():
            traps[q] = dst
    return Layout(tuple(traps), layout.n_traps)


def _endpoints(op: ShuttleOp) -> List[Tuple[int, int, int]]:
    if op.kind == "exchange" and op.partner is not None:
        return [(op.qubit, op.source, op.destination), (op.partner, op.destination, op.source)]
    return [(op.qubit, op.source, op.destination)]


def _place_shuttle(
    scheduler: ListScheduler, op: ShuttleOp, spec: HardwareSpec, not_before: float
) -> ScheduledOp:
    return scheduler.place(
        label=f"shuttle-{op.kind}",
        kind="shuttle",
        traps=(op.source, op.destination),
        qubits=op.qubits,
        duration=op.duration_us,
        fidelity=spec.shuttle.fidelity,
        not_before=not_before,
    )


def schedule_shuttle_plan(
    plan: ShuttlePlan,
    mapped: MappedCircuit,
    spec: HardwareSpec,
    scenario: Optional[Scenario] = None,
) -> Schedule:
    """Schedule gates with shuttles in place of the inserted SWAPs.

    parallel: shuttles on disjoint qubits and traps overlap each other and
    unrelated gates. sequential: each group of shuttles forms its own layer
    that starts after everything before it and runs one op at a time; later
    operations start after the layer.
    """
    scenario = scenario or plan.scenario
    groups = plan.groups()
    by_position = {ops[0].position: ops for ops in groups.values()}
    swap_positions = {i for i, mg in enumerate(mapped.gates) if mg.is_swap}
    if not set(by_position) <= {first for first, _ in _swap_blocks(mapped)}:
        raise PlanMismatchError("shuttle plan does not match the mapped circuit's SWAP blocks")

    scheduler = ListScheduler(spec, mapped.circuit.n)
    barrier = 0.0
    for index, mg in enumerate(mapped.gates):
        if index in by_position:
            if scenario == "sequential":
                barrier = scheduler.makespan
                for op in by_position[index]:
                    barrier = _place_shuttle(scheduler, op, spec, barrier).end
            else:
                for op in by_position[index]:
                    _place_shuttle(scheduler, op, spec, 0.0)
        if index in swap_positions:
            continue
        place_gate(scheduler, mg, not_before=barrier)
    return scheduler.build()


def _layer_gate_time(spec: HardwareSpec, layout: Layout, gate_indices: Sequence[int], plan: LayeredPlan) -> float:
    scheduler = ListScheduler(spec, plan.circuit.n)
    for i in gate_indices:
        gate = plan.circuit.gates[i]
        traps = [layout.traps[q] for q in gate.operands]
        place_gate(scheduler, MappedGate(gate.on(traps), gate.operands, i))
    return scheduler.makespan


def _transition_ops(plan: LayeredPlan, spec: HardwareSpec) -> List[ShuttleOp]:
    ops: List[ShuttleOp] = []
    previous: Optional[Layout] = None
    for number, layer in enumerate(plan.layers):
        if plan.mode == "fixed":
            if layer.transition:
                if previous is None:
                    # first layer: undo the transition to recover the starting layout
                    occupancy = layer.layout.occupancy()
                    for a, b in reversed(layer.transition):
                        occupancy[a], occupancy[b] = occupancy[b], occupancy[a]
                else:
                    occupancy = previous.occupancy()
                ops.extend(net_moves(occupancy, layer.transition, spec, number, number))
        elif previous is not None:
            for q, (src, dst) in enumerate(zip(previous.traps, layer.layout.traps)):
                if src != dst:
                    dist = spec.distance(src, dst)
                    ops.append(ShuttleOp(q, src, dst, dist, shuttle_duration(dist, spec),
                                         "move", None, number, number))
        previous = layer.layout
    return ops


def _breakdown(plan: LayeredPlan, spec: HardwareSpec) -> Dict[str, float]:
    gate_us = sum(_layer_gate_time(spec, layer.layout, layer.gate_indices, plan) for layer in plan.layers)
    ops = _transition_ops(plan, spec)
    switch_us = 2 * spec.trap_cycle_us * len(ops)
    motion_us = sum(op.duration_us for op in ops) - switch_us
    total = gate_us + motion_us + switch_us
    return {
        "gate_us": gate_us,
        "shuttle_motion_us": motion_us,
        "trap_switch_us": switch_us,
        "n_shuttles": len(ops),
        "shuttle_fraction": (motion_us + switch_us) / total if total > 0 else 0.0,
    }


def _check_same_circuit(fixed: LayeredPlan, reconfig: LayeredPlan) -> None:
    if fixed.circuit.n != reconfig.circuit.n or fixed.circuit.gates != reconfig.circuit.gates:
        raise PlanMismatchError("layered plans cover different circuits")
    for plan in (fixed, reconfig):
        covered = sorted(i for layer in plan.layers for i in layer.gate_indices)
        if covered != list(range(len(plan.circuit.gates))):
            raise PlanMismatchError(f"{plan.mode} plan does not execute every gate exactly once")


def shuttle_layer_stats(fixed: LayeredPlan, reconfig: LayeredPlan, spec: HardwareSpec) -> Dict[str, Any]:
    """Layer counts, reduction ratio and time breakdown of two layered plans.

    Transitions are executed as sequential shuttles: fixed-mode swap blocks
    are consolidated with `net_moves`, reconfig transitions move every qubit
    whose trap changed.

    Raises:
        PlanMismatchError: the plans do not cover the same circuit.
    """
    _check_same_circuit(fixed, reconfig)
    n_fixed, n_reconfig = fixed.n_layers, reconfig.n_layers
    return {
        "layers_fixed": n_fixed,
        "layers_reconfig": n_reconfig,
        "reduction_ratio": 1 - n_reconfig / n_fixed if n_fixed else 0.0,
        "fixed": _breakdown(fixed, spec),
        "reconfig": _breakdown(reconfig, spec),
    }
