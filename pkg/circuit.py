"""Circuit intermediate representation.

Gates, circuits and native gate sets, the rule-based lowering onto a native
set, and the dependency DAG used by the mapper and the scheduler.

Values here are immutable after construction; every operation returns a new
object.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from errors import CircuitError, LoweringError


class GateTag(str, Enum):
    """Gate kinds known to the toolkit."""
    R1Q = "r1q"
    H = "h"
    X = "x"
    CX = "cx"
    CZ = "cz"
    CP = "cp"
    SWAP = "swap"
    CCZ = "ccz"
    CCCZ = "cccz"


ARITY: Dict[GateTag, int] = {
    GateTag.R1Q: 1,
    GateTag.H: 1,
    GateTag.X: 1,
    GateTag.CX: 2,
    GateTag.CZ: 2,
    GateTag.CP: 2,
    GateTag.SWAP: 2,
    GateTag.CCZ: 3,
    GateTag.CCCZ: 4,
}

AXES = ("x", "y", "z")

# (one-qubit gates, CZ gates) charged for a non-native multi-qubit gate
BLOCK_COUNTS: Dict[GateTag, Tuple[int, int]] = {
    GateTag.CCZ: (9, 6),
    GateTag.CCCZ: (28, 20),
}


@dataclass(frozen=True)
class GateKind:
    """Gate tag plus its parameters.

    `axis` and `angle` are only meaningful for R1Q (both) and CP (angle).
    `label` records where a lowered gate came from and is ignored by equality.
    """
    tag: GateTag
    axis: Optional[str] = None
    angle: Optional[float] = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        tag = GateTag(self.tag)
        object.__setattr__(self, "tag", tag)
        if tag == GateTag.R1Q:
            if self.axis not in AXES:
                raise CircuitError(f"R1Q axis must be one of {AXES}, got {self.axis!r}")
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError(f"R1Q angle must be finite, got {self.angle!r}")
        elif tag == GateTag.CP:
            if self.axis is not None:
                raise CircuitError("CP takes no axis")
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError(f"CP angle must be finite, got {self.angle!r}")
            if not (-2 * math.pi < self.angle <= 2 * math.pi):
                raise CircuitError(f"CP angle {self.angle} outside (-2π, 2π]")
        elif self.axis is not None or self.angle is not None:
            raise CircuitError(f"{tag.value} takes no parameters")

    @property
    def arity(self) -> int:
        return ARITY[self.tag]

    @property
    def is_entangling(self) -> bool:
        return self.arity >= 2

    def __str__(self) -> str:
        if self.tag == GateTag.R1Q:
            return f"r{self.axis}({self.angle:g})"
        if self.tag == GateTag.CP:
            return f"cp({self.angle:g})"
        return self.tag.value


@dataclass(frozen=True)
class Gate:
    """A gate kind applied to an ordered tuple of qubit indices."""
    kind: GateKind
    operands: Tuple[int, ...]

    def __post_init__(self):
        operands = tuple(int(q) for q in self.operands)
        object.__setattr__(self, "operands", operands)
        if len(operands) != self.kind.arity:
            raise CircuitError(
                f"{self.kind.tag.value} expects {self.kind.arity} operands, got {len(operands)}"
            )
        if len(set(operands)) != len(operands):
            raise CircuitError(f"duplicate operand in {self.kind.tag.value}{operands}")
        if any(q < 0 for q in operands):
            raise CircuitError(f"negative operand in {self.kind.tag.value}{operands}")

    @property
    def tag(self) -> GateTag:
        return self.kind.tag

    def on(self, operands: Sequence[int]) -> "Gate":
        """Same kind on other operands (used when relabelling onto traps)."""
        return Gate(self.kind, tuple(operands))

    def __str__(self) -> str:
        return f"{self.kind}{list(self.operands)}"


# Constructors in the usual circuit-building style

def r1q(axis: str, angle: float, q: int, label: str = "") -> Gate:
    return Gate(GateKind(GateTag.R1Q, axis=axis, angle=float(angle), label=label), (q,))


def rx(angle: float, q: int) -> Gate:
    return r1q("x", angle, q)


def ry(angle: float, q: int) -> Gate:
    return r1q("y", angle, q)


def rz(angle: float, q: int) -> Gate:
    return r1q("z", angle, q)


def h(q: int) -> Gate:
    return Gate(GateKind(GateTag.H), (q,))


def x(q: int) -> Gate:
    return Gate(GateKind(GateTag.X), (q,))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind(GateTag.CX), (control, target))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind(GateTag.CZ), (a, b))


def cp(angle: float, control: int, target: int) -> Gate:
    return Gate(GateKind(GateTag.CP, angle=float(angle)), (control, target))


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind(GateTag.SWAP), (a, b))


def ccz(a: int, b: int, c: int) -> Gate:
    return Gate(GateKind(GateTag.CCZ), (a, b, c))


def cccz(a: int, b: int, c: int, d: int) -> Gate:
    return Gate(GateKind(GateTag.CCCZ), (a, b, c, d))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence over `n` circuit qubits."""
    n: int
    gates: Tuple[Gate, ...] = ()
    name: str = "circuit"

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise CircuitError(f"circuit needs at least one qubit, got n={self.n}")
        for index, gate in enumerate(self.gates):
            for q in gate.operands:
                if q >= self.n:
                    raise CircuitError(
                        f"gate {index} ({gate}) uses qubit {q} but the circuit has {self.n}"
                    )

    def __len__(self) -> int:
        return len(self.gates)

    def with_gates(self, gates: Iterable[Gate], name: Optional[str] = None) -> "Circuit":
        return Circuit(self.n, tuple(gates), name or self.name)

    def count_by_kind(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for gate in self.gates:
            counts[gate.tag.value] = counts.get(gate.tag.value, 0) + 1
        return dict(sorted(counts.items()))

    def interaction_weights(self) -> Dict[Tuple[int, int], int]:
        """How often each qubit pair meets inside an entangling gate."""
        weights: Dict[Tuple[int, int], int] = {}
        for gate in self.gates:
            ops = gate.operands
            for i in range(len(ops)):
                for j in range(i + 1, len(ops)):
                    key = (min(ops[i], ops[j]), max(ops[i], ops[j]))
                    weights[key] = weights.get(key, 0) + 1
        return weights


@dataclass(frozen=True)
class NativeSet:
    """Gate tags the hardware executes directly.

    R1Q and CZ are always present. `cp_native` adds arbitrary-angle CP and
    `multiqubit_native` adds CCZ/CCCZ.
    """
    tags: FrozenSet[GateTag] = frozenset({GateTag.R1Q, GateTag.CZ})
    cp_native: bool = False
    multiqubit_native: bool = True

    def __post_init__(self):
        tags = frozenset(GateTag(t) for t in self.tags)
        missing = {GateTag.R1Q, GateTag.CZ} - tags
        if missing:
            raise CircuitError(
                f"native set must contain r1q and cz, missing {sorted(t.value for t in missing)}"
            )
        object.__setattr__(self, "tags", tags)

    @property
    def allowed(self) -> FrozenSet[GateTag]:
        allowed = set(self.tags)
        if self.cp_native:
            allowed.add(GateTag.CP)
        if self.multiqubit_native:
            allowed.update((GateTag.CCZ, GateTag.CCCZ))
        return frozenset(allowed)

    def allows(self, tag: GateTag) -> bool:
        return tag in self.allowed


# Multi-qubit cost blocks: rounds of one rotation per operand followed by CZs
_CCZ_ROUNDS = (((0, 1), (1, 2)), ((0, 2), (0, 1)), ((1, 2), (0, 2)))
_CCCZ_PAIRS = ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2))
_CCCZ_CZ_PER_ROUND = (3, 3, 3, 3, 3, 3, 2)


def multiqubit_block(gate: Gate) -> List[Gate]:
    """Replacement block for a non-native CCZ/CCCZ.

    The block reproduces the gate counts of a transpiled decomposition
    (9 one-qubit + 6 CZ, resp. 28 + 20) and is used for cost accounting
    only; it is not a verified unitary decomposition.
    """
    ops = gate.operands
    label = f"{gate.tag.value}-block"
    if gate.tag == GateTag.CCZ:
        rounds = _CCZ_ROUNDS
    elif gate.tag == GateTag.CCCZ:
        pairs = iter(_CCCZ_PAIRS * 4)
        rounds = tuple(tuple(next(pairs) for _ in range(k)) for k in _CCCZ_CZ_PER_ROUND)
    else:
        raise LoweringError(f"no multi-qubit block for {gate.tag.value}")

    block: List[Gate] = []
    for index, pairs_in_round in enumerate(rounds):
        axis, angle = ("y", math.pi / 2) if index % 2 == 0 else ("z", math.pi / 4)
        block.extend(r1q(axis, angle, q, label=label) for q in ops)
        block.extend(cz(ops[a], ops[b]) for a, b in pairs_in_round)
    return block


def _expand(gate: Gate, native: NativeSet) -> List[Gate]:
    tag = gate.tag
    if native.allows(tag):
        return [gate]
    ops = gate.operands
    if tag == GateTag.H:
        return [r1q("y", math.pi / 2, ops[0], label="h")]
    if tag == GateTag.X:
        return [r1q("x", math.pi, ops[0], label="x")]
    if tag == GateTag.CX:
        control, target = ops
        return _expand(h(target), native) + [cz(control, target)] + _expand(h(target), native)
    if tag == GateTag.SWAP:
        a, b = ops
        out: List[Gate] = []
        for g in (cx(a, b), cx(b, a), cx(a, b)):
            out.extend(_expand(g, native))
        return out
    if tag == GateTag.CP:
        control, target = ops
        theta = gate.kind.angle
        out = []
        for g in (rz(theta / 2, control), cx(control, target), rz(-theta / 2, target),
                  cx(control, target), rz(theta / 2, target)):
            out.extend(_expand(g, native))
        return out
    if tag in BLOCK_COUNTS:
        return multiqubit_block(gate)
    raise LoweringError(f"no lowering rule for {tag.value}")


def lower_to_native(circuit: Circuit, native: Optional[NativeSet] = None) -> Circuit:
    """Rewrite every gate into kinds allowed by `native`."""
    native = native or NativeSet()
    lowered: List[Gate] = []
    for index, gate in enumerate(circuit.gates):
        for out in _expand(gate, native):
            if not native.allows(out.tag):
                raise LoweringError(
                    f"gate {index} ({gate}) lowers to {out.tag.value}, which is not native"
                )
            lowered.append(out)
    return circuit.with_gates(lowered)


@dataclass(frozen=True)
class DepGraph:
    """Dependency DAG over gate indices.

    Edge (i, j) carries `qubits`: the qubits on which j directly follows i.
    """
    graph: nx.DiGraph
    n_qubits: int
    chains: Dict[int, Tuple[int, ...]]

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def successors(self, node: int) -> List[int]:
        return sorted(self.graph.successors(node))

    def predecessors(self, node: int) -> List[int]:
        return sorted(self.graph.predecessors(node))

    def chain(self, qubit: int) -> Tuple[int, ...]:
        return self.chains.get(qubit, ())

    def topological_order(self) -> List[int]:
        """Topological order, ties broken by gate index."""
        return list(nx.lexicographical_topological_sort(self.graph))

    def front_layer(self) -> List[int]:
        return sorted(n for n, deg in self.graph.in_degree() if deg == 0)


def build_dag(circuit: Circuit) -> DepGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(circuit.gates)))
    last: Dict[int, int] = {}
    chains: Dict[int, List[int]] = {}
    for index, gate in enumerate(circuit.gates):
        graph.nodes[index]["gate"] = gate
        for q in gate.operands:
            if q in last:
                prev = last[q]
                if graph.has_edge(prev, index):
                    graph.edges[prev, index]["qubits"].append(q)
                else:
                    graph.add_edge(prev, index, qubits=[q])
            last[q] = index
            chains.setdefault(q, []).append(index)
    return DepGraph(graph, circuit.n, {q: tuple(c) for q, c in chains.items()})
