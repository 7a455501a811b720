"""Restriction-aware ASAP scheduling.

Operations are placed in program order. Each one starts as soon as its traps
and qubits are free and, for entangling gates, once every earlier entangling
gate with an atom within the restriction radius of one of its atoms has
finished. Overlapping entangling gates therefore never conflict. Single-qubit
gates ignore restriction zones.

`ListScheduler` is the shared core; the shuttle scenarios in `shuttle.py`
feed it shuttle operations as well as gates.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from circuit import GateTag
from config import normalize_idle_mode
from hardware import DIST_TOL, HardwareSpec
from mapper import MappedCircuit, MappedGate

logger = logging.getLogger(__name__)

TIME_TOL = 1e-9


@dataclass(frozen=True)
class ScheduledOp:
    """One timed operation. `kind` is "gate" or "shuttle"."""
    label: str
    kind: str
    traps: Tuple[int, ...]
    qubits: Tuple[int, ...]
    start: float
    end: float
    fidelity: float
    entangling: bool = False
    tag: Optional[GateTag] = None
    source_index: Optional[int] = None

    @property
    def duration(self) -> float:
        return self.end - self.start

    def to_dict(self) -> Dict[str, Any]:
        return {
            "op": self.label,
            "kind": self.kind,
            "traps": list(self.traps),
            "qubits": list(self.qubits),
            "start_us": self.start,
            "end_us": self.end,
            "source": self.source_index,
        }


@dataclass(frozen=True)
class Schedule:
    """Timed operations plus per-qubit busy times (μs) over n circuit qubits.

    `busy` counts gate time only; time a qubit spends being shuttled counts
    as idle and is reported separately in `shuttle_busy`.
    """
    ops: Tuple[ScheduledOp, ...]
    n_qubits: int
    makespan: float
    busy: Tuple[float, ...]
    shuttle_busy: Tuple[float, ...]

    @property
    def shuttle_idle_us(self) -> float:
        return float(sum(self.shuttle_busy))

    def gate_ops(self) -> List[ScheduledOp]:
        return [op for op in self.ops if op.kind == "gate"]

    def shuttle_ops(self) -> List[ScheduledOp]:
        return [op for op in self.ops if op.kind == "shuttle"]

    def to_rows(self) -> List[Dict[str, Any]]:
        return [dict(index=i, **op.to_dict()) for i, op in enumerate(self.ops)]


class ListScheduler:
    """Greedy ASAP placement with trap/qubit exclusivity and restriction zones.

    An entangling operation waits for every earlier entangling operation
    (in program order) that has an atom within r_re of one of its atoms.
    Conflicts therefore act as extra precedence edges, so start times only
    grow when the restriction radius grows.
    """

    def __init__(self, spec: HardwareSpec, n_qubits: int, restriction: bool = True):
        self.spec = spec
        self.n_qubits = n_qubits
        self.restriction = restriction
        self.trap_free = np.zeros(spec.n_traps)
        self.qubit_free = np.zeros(n_qubits)
        self.entangling_free = np.zeros(spec.n_traps)
        self.busy = np.zeros(n_qubits)
        self.shuttle_busy = np.zeros(n_qubits)
        self.ops: List[ScheduledOp] = []
        positions = spec.positions()
        diff = positions[:, None, :] - positions[None, :, :]
        self._near = np.hypot(diff[..., 0], diff[..., 1]) <= spec.r_re_um + DIST_TOL

    @property
    def makespan(self) -> float:
        return max((op.end for op in self.ops), default=0.0)

    def _restriction_ready(self, traps: Sequence[int]) -> float:
        zone = self._near[list(traps)].any(axis=0)
        return float(self.entangling_free[zone].max(initial=0.0))

    def place(
        self,
        label: str,
        kind: str,
        traps: Sequence[int],
        qubits: Sequence[int],
        duration: float,
        fidelity: float,
        entangling: bool = False,
        tag: Optional[GateTag] = None,
        source_index: Optional[int] = None,
        not_before: float = 0.0,
    ) -> ScheduledOp:
        traps = tuple(traps)
        qubits = tuple(qubits)
        real = [q for q in qubits if q >= 0]
        start = max(
            [not_before]
            + [float(self.trap_free[t]) for t in traps]
            + [float(self.qubit_free[q]) for q in real]
        )
        if entangling and self.restriction:
            start = max(start, self._restriction_ready(traps))
        end = start + duration
        op = ScheduledOp(label, kind, traps, qubits, start, end, fidelity, entangling, tag, source_index)
        self.ops.append(op)
        for t in traps:
            self.trap_free[t] = end
            if entangling:
                self.entangling_free[t] = max(self.entangling_free[t], end)
        for q in real:
            self.qubit_free[q] = end
            if kind == "gate":
                self.busy[q] += duration
            else:
                self.shuttle_busy[q] += duration
        return op

    def build(self) -> Schedule:
        return Schedule(
            tuple(self.ops),
            self.n_qubits,
            self.makespan,
            tuple(float(b) for b in self.busy),
            tuple(float(b) for b in self.shuttle_busy),
        )


def place_gate(scheduler: ListScheduler, mg: MappedGate, not_before: float = 0.0) -> ScheduledOp:
    """Schedule one MappedGate with the spec's duration and fidelity."""
    spec = scheduler.spec
    tag = mg.gate.tag
    return scheduler.place(
        label=str(mg.gate.kind),
        kind="gate",
        traps=mg.traps,
        qubits=mg.qubits,
        duration=spec.duration_us(tag),
        fidelity=spec.fidelity(tag),
        entangling=len(mg.traps) >= 2,
        tag=tag,
        source_index=mg.source_index,
        not_before=not_before,
    )


def schedule(mapped: MappedCircuit, spec: HardwareSpec) -> Schedule:
    """ASAP schedule of a mapped circuit; inserted SWAPs run as gates."""
    scheduler = ListScheduler(spec, mapped.circuit.n)
    for mg in mapped.gates:
        place_gate(scheduler, mg)
    result = scheduler.build()
    logger.debug("scheduled %d ops, makespan %.6g us", len(result.ops), result.makespan)
    return result


def idle_time(sched: Schedule, n: int, mode: str = "arity_weighted") -> float:
    """Register idle time in μs.

    arity_weighted: n*T minus the per-qubit gate-busy time.
    gate_sum: n*T minus the plain sum of gate durations.
    """
    mode = normalize_idle_mode(mode)
    total = n * sched.makespan
    if mode == "arity_weighted":
        idle = total - sum(sched.busy[:n])
    else:
        idle = total - sum(op.duration for op in sched.gate_ops())
    # float noise around fully packed schedules
    return 0.0 if abs(idle) < TIME_TOL * max(1.0, total) else idle


def metrics(sched: Schedule) -> Dict[str, Any]:
    """Makespan, depth and per-kind operation counts.

    depth is the longest chain of operations each starting after the previous
    one ended, i.e. the number of layers in the earliest-start layering.
    """
    ops = sched.ops
    layer = [0] * len(ops)
    by_start = sorted(range(len(ops)), key=lambda i: (ops[i].start, i))
    by_end = sorted(range(len(ops)), key=lambda i: (ops[i].end, i))
    pointer = 0
    deepest_finished = 0
    for i in by_start:
        while pointer < len(by_end) and ops[by_end[pointer]].end <= ops[i].start + TIME_TOL:
            deepest_finished = max(deepest_finished, layer[by_end[pointer]])
            pointer += 1
        layer[i] = deepest_finished + 1

    counts: Dict[str, int] = {}
    for op in ops:
        key = op.tag.value if op.tag is not None else op.kind
        counts[key] = counts.get(key, 0) + 1
    return {
        "makespan_us": sched.makespan,
        "depth": max(layer, default=0),
        "counts": dict(sorted(counts.items())),
    }
