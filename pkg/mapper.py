"""Qubit placement and SWAP-insertion routing on the coupling graph.

`route` is a SABRE-style router: it keeps the DAG front layer, executes every
gate the current layout allows, and otherwise inserts the SWAP that minimizes
the decayed sum of hop distances over the blocked front gates plus a weighted
lookahead window. Gates on three or more qubits are made executable by
gathering their operands into a group of traps that are pairwise within the
interaction radius.

`route_layered` exposes the same machinery as a sequence of execution layers,
either with one evolving layout (fixed) or with a fresh placement per layer
(reconfig).
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from circuit import Circuit, DepGraph, Gate, build_dag, swap
from errors import RoutingError
from hardware import CouplingGraph, HardwareSpec, coupling_graph, gate_mappable
from seeding import make_rng

logger = logging.getLogger(__name__)

EMPTY = -1
# large finite stand-in for unreachable traps during placement
_FAR = 1e18


@dataclass(frozen=True)
class Layout:
    """traps[q] is the trap holding circuit qubit q."""
    traps: Tuple[int, ...]
    n_traps: int

    def __post_init__(self):
        traps = tuple(int(t) for t in self.traps)
        object.__setattr__(self, "traps", traps)
        if len(set(traps)) != len(traps):
            raise RoutingError(f"layout maps two qubits to one trap: {traps}")
        if any(t < 0 or t >= self.n_traps for t in traps):
            raise RoutingError(f"layout uses traps outside 0..{self.n_traps - 1}: {traps}")

    @property
    def n_qubits(self) -> int:
        return len(self.traps)

    def trap_of(self, qubit: int) -> int:
        return self.traps[qubit]

    def occupancy(self) -> List[int]:
        """Inverse map as a list: occupancy()[trap] is the qubit there or -1."""
        slots = [EMPTY] * self.n_traps
        for q, t in enumerate(self.traps):
            slots[t] = q
        return slots

    def qubit_at(self, trap: int) -> int:
        return self.occupancy()[trap]

    def swapped(self, a: int, b: int) -> "Layout":
        """Layout after exchanging the contents of traps a and b."""
        exchange = {a: b, b: a}
        return Layout(tuple(exchange.get(t, t) for t in self.traps), self.n_traps)


@dataclass(frozen=True)
class RoutingParams:
    lookahead_size: int = 20
    lookahead_weight: float = 0.5
    decay: float = 0.001
    decay_reset: int = 5
    seed: int = 0
    # swaps without executing a gate before the release valve fires; None = 5 * traps
    stall_limit: Optional[int] = None


@dataclass(frozen=True)
class MappedGate:
    """A gate on trap operands.

    `source_index` is the gate's position in the source circuit, or None for
    a SWAP inserted by routing. `qubits` are the circuit qubits sitting on the
    traps when the gate runs (-1 for an empty trap).
    """
    gate: Gate
    qubits: Tuple[int, ...]
    source_index: Optional[int] = None

    @property
    def traps(self) -> Tuple[int, ...]:
        return self.gate.operands

    @property
    def is_swap(self) -> bool:
        return self.source_index is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "op": str(self.gate.kind),
            "traps": list(self.traps),
            "qubits": list(self.qubits),
            "swap": self.is_swap,
            "source": self.source_index,
        }


@dataclass(frozen=True)
class MappedCircuit:
    circuit: Circuit
    gates: Tuple[MappedGate, ...]
    initial_layout: Layout
    final_layout: Layout

    @property
    def n_traps(self) -> int:
        return self.initial_layout.n_traps

    @property
    def n_swaps(self) -> int:
        return sum(1 for g in self.gates if g.is_swap)

    def to_circuit(self) -> Circuit:
        """Hardware-level circuit on trap indices, inserted SWAPs included."""
        return Circuit(self.n_traps, tuple(g.gate for g in self.gates), f"{self.circuit.name}_mapped")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_swaps": self.n_swaps,
            "initial_layout": list(self.initial_layout.traps),
            "final_layout": list(self.final_layout.traps),
            "gates": [g.to_dict() for g in self.gates],
        }


@dataclass(frozen=True)
class PlanLayer:
    """Gates executed under one layout; `transition` holds the trap swaps
    that produced this layout from the previous layer's (fixed mode only)."""
    layout: Layout
    gate_indices: Tuple[int, ...]
    transition: Tuple[Tuple[int, int], ...] = ()


@dataclass(frozen=True)
class LayeredPlan:
    circuit: Circuit
    mode: Literal["fixed", "reconfig"]
    layers: Tuple[PlanLayer, ...]

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "n_layers": self.n_layers,
            "layers": [
                {
                    "layout": list(layer.layout.traps),
                    "gates": list(layer.gate_indices),
                    "transition": [list(s) for s in layer.transition],
                }
                for layer in self.layers
            ],
        }


@dataclass(frozen=True)
class Violation:
    """A connectivity or bookkeeping error found by `verify`; index -1 is global."""
    index: int
    gate: str
    message: str

    def __str__(self) -> str:
        return f"gate {self.index} ({self.gate}): {self.message}"


def _executable(gate: Gate, traps: Sequence[int], spec: HardwareSpec, graph: CouplingGraph) -> bool:
    arity = len(traps)
    if arity == 1:
        return True
    if arity == 2:
        return graph.has_edge(traps[0], traps[1])
    return gate_mappable([spec.position(t) for t in traps], spec.r_int_um)


def _check_capacity(circuit: Circuit, spec: HardwareSpec) -> None:
    if circuit.n > spec.n_traps:
        raise RoutingError(
            f"circuit needs {circuit.n} qubits but {spec.name} has {spec.n_traps} traps "
            f"({spec.rows}x{spec.cols})"
        )


def _affinity_order(circuit: Circuit) -> List[int]:
    seen: Dict[int, None] = {}
    for gate in circuit.gates:
        for q in gate.operands:
            seen.setdefault(q, None)
    order = list(seen)
    order.extend(q for q in range(circuit.n) if q not in seen)
    return order


def _affinity_layout(circuit: Circuit, spec: HardwareSpec) -> Tuple[int, ...]:
    graph = coupling_graph(spec)
    hop = np.where(np.isinf(graph.hop_matrix), _FAR, graph.hop_matrix)
    partners: Dict[int, Dict[int, int]] = {q: {} for q in range(circuit.n)}
    for (a, b), weight in circuit.interaction_weights().items():
        partners[a][b] = weight
        partners[b][a] = weight

    traps = [EMPTY] * circuit.n
    free = np.ones(spec.n_traps, dtype=bool)
    placed: List[int] = []
    for q in _affinity_order(circuit):
        linked = [(traps[p], w) for p, w in partners[q].items() if traps[p] != EMPTY]
        if linked:
            cost = sum(w * hop[t] for t, w in linked)
        elif placed:
            cost = hop[placed].sum(axis=0)
        else:
            cost = np.zeros(spec.n_traps)
        cost = np.where(free, cost, np.inf)
        trap = int(np.argmin(cost))
        traps[q] = trap
        free[trap] = False
        placed.append(trap)
    return tuple(traps)


def initial_layout(
    circuit: Circuit, spec: HardwareSpec, strategy: str = "affinity", seed: int = 0
) -> Layout:
    """Place circuit qubits on traps.

    identity puts q_i on trap i, random draws a seeded injection, and affinity
    places qubits in order of first use, each on the free trap closest (in
    weighted hops) to its already placed interaction partners.
    """
    _check_capacity(circuit, spec)
    if strategy == "identity":
        traps: Tuple[int, ...] = tuple(range(circuit.n))
    elif strategy == "random":
        rng = make_rng(seed, "layout", "random")
        traps = tuple(int(t) for t in rng.permutation(spec.n_traps)[: circuit.n])
    elif strategy == "affinity":
        traps = _affinity_layout(circuit, spec)
    else:
        raise RoutingError(f"unknown layout strategy '{strategy}'")
    logger.debug("initial %s layout: %s", strategy, traps)
    return Layout(traps, spec.n_traps)


class _Router:
    """Mutable routing state for one circuit; drives both route and route_layered."""

    def __init__(self, circuit: Circuit, spec: HardwareSpec, layout: Layout, params: RoutingParams):
        if layout.n_qubits != circuit.n or layout.n_traps != spec.n_traps:
            raise RoutingError(
                f"layout for {layout.n_qubits} qubits on {layout.n_traps} traps does not fit "
                f"a {circuit.n}-qubit circuit on {spec.n_traps} traps"
            )
        self.circuit = circuit
        self.spec = spec
        self.params = params
        self.graph = coupling_graph(spec)
        self.dag: DepGraph = build_dag(circuit)
        self.l2p = list(layout.traps)
        self.p2l = layout.occupancy()
        self.in_degree = {node: deg for node, deg in self.dag.graph.in_degree()}
        self.front: Set[int] = {node for node, deg in self.in_degree.items() if deg == 0}
        self.done: Set[int] = set()
        self.out: List[MappedGate] = []
        self.decay = np.ones(spec.n_traps)
        self.swaps_since_reset = 0
        self.swaps_since_progress = 0
        self.stall_limit = params.stall_limit or 5 * max(1, spec.n_traps)

    def layout(self) -> Layout:
        return Layout(tuple(self.l2p), self.spec.n_traps)

    def _gate(self, node: int) -> Gate:
        return self.circuit.gates[node]

    def _traps(self, node: int) -> List[int]:
        return [self.l2p[q] for q in self._gate(node).operands]

    def advance(self) -> List[int]:
        """Execute every gate the current layout allows; return them in emission order."""
        executed: List[int] = []
        pending = sorted(self.front)
        while pending:
            ready_next: List[int] = []
            for node in pending:
                traps = self._traps(node)
                if not _executable(self._gate(node), traps, self.spec, self.graph):
                    continue
                self.out.append(MappedGate(self._gate(node).on(traps), tuple(self._gate(node).operands), node))
                self.front.discard(node)
                self.done.add(node)
                executed.append(node)
                for succ in self.dag.graph.successors(node):
                    self.in_degree[succ] -= 1
                    if self.in_degree[succ] == 0:
                        self.front.add(succ)
                        ready_next.append(succ)
            pending = sorted(ready_next)
        if executed:
            self.decay[:] = 1.0
            self.swaps_since_reset = 0
            self.swaps_since_progress = 0
        return executed

    def apply_swap(self, a: int, b: int) -> None:
        qa, qb = self.p2l[a], self.p2l[b]
        self.out.append(MappedGate(swap(a, b), (qa, qb), None))
        self.p2l[a], self.p2l[b] = qb, qa
        if qa != EMPTY:
            self.l2p[qa] = b
        if qb != EMPTY:
            self.l2p[qb] = a
        self.decay[a] += self.params.decay
        self.decay[b] += self.params.decay
        self.swaps_since_reset += 1
        self.swaps_since_progress += 1
        if self.swaps_since_reset >= self.params.decay_reset:
            self.decay[:] = 1.0
            self.swaps_since_reset = 0

    def step(self) -> List[Tuple[int, int]]:
        """One routing action on a blocked front; returns the swaps applied."""
        start = len(self.out)
        blocked = sorted(n for n in self.front if len(self._gate(n).operands) == 2)
        if blocked:
            for node in blocked:
                a, b = self._traps(node)
                if self.graph.hop(a, b) == float("inf"):
                    raise RoutingError(
                        f"operands on traps {a} and {b} lie in disconnected coupling components",
                        gate_index=node,
                    )
            if self.swaps_since_progress >= self.stall_limit:
                self._release_valve(blocked)
            else:
                self.apply_swap(*self._choose_swap(blocked))
        else:
            self._gather(min(self.front))
        return [(g.traps[0], g.traps[1]) for g in self.out[start:]]

    def _extended_set(self) -> List[int]:
        size = self.params.lookahead_size
        extended: List[int] = []
        seen = set(self.front)
        queue = deque(sorted(self.front))
        while queue and len(extended) < size:
            node = queue.popleft()
            for succ in sorted(self.dag.graph.successors(node)):
                if succ in seen:
                    continue
                seen.add(succ)
                if len(self._gate(succ).operands) == 2:
                    extended.append(succ)
                    if len(extended) >= size:
                        break
                queue.append(succ)
        return extended

    def _choose_swap(self, blocked: List[int]) -> Tuple[int, int]:
        weight = self.params.lookahead_weight
        terms: List[Tuple[float, int, int]] = []
        for node in blocked:
            a, b = self._traps(node)
            terms.append((1.0, a, b))
        for node in self._extended_set():
            a, b = self._traps(node)
            terms.append((weight, a, b))

        hop = self.graph.hop
        by_trap: Dict[int, List[int]] = {}
        base = 0.0
        for idx, (w, a, b) in enumerate(terms):
            base += w * hop(a, b)
            by_trap.setdefault(a, []).append(idx)
            by_trap.setdefault(b, []).append(idx)

        candidates: Set[Tuple[int, int]] = set()
        for node in blocked:
            for t in self._traps(node):
                for nb in self.graph.neighbors(t):
                    candidates.add((min(t, nb), max(t, nb)))

        best: Optional[Tuple[int, int]] = None
        best_score = float("inf")
        for cand in sorted(candidates):
            a, b = cand
            moved = {a: b, b: a}
            delta = 0.0
            for idx in set(by_trap.get(a, ())) | set(by_trap.get(b, ())):
                w, ta, tb = terms[idx]
                delta += w * (hop(moved.get(ta, ta), moved.get(tb, tb)) - hop(ta, tb))
            score = max(self.decay[a], self.decay[b]) * (base + delta)
            if score < best_score:
                best, best_score = cand, score
        assert best is not None
        return best

    def _release_valve(self, blocked: List[int]) -> None:
        node = min(blocked, key=lambda n: (self.graph.hop(*self._traps(n)), n))
        a, b = self._traps(node)
        path = self.graph.shortest_path(a, b)
        logger.debug("release valve on gate %d: walking %d hops", node, len(path) - 2)
        current = a
        for nxt in path[1:-1]:
            self.apply_swap(current, nxt)
            current = nxt

    def _trap_group(self, center: int, size: int, positions: np.ndarray) -> Optional[List[int]]:
        dist = np.hypot(*(positions - positions[center]).T)
        reach = self.spec.r_int_um
        order = sorted(
            (t for t in range(self.spec.n_traps) if dist[t] <= reach + 1e-9 and t != center),
            key=lambda t: (dist[t], t),
        )
        group = [center]
        for t in order:
            if len(group) == size:
                break
            if gate_mappable([tuple(positions[g]) for g in group] + [tuple(positions[t])], reach):
                group.append(t)
        return group if len(group) == size else None

    def _assign(self, operands: Sequence[int], group: Sequence[int], center: int) -> Tuple[float, List[Tuple[int, int]]]:
        hop = self.graph.hop
        ordered = sorted(operands, key=lambda q: (hop(self.l2p[q], center), q))
        free = list(group)
        total = 0.0
        pairs = []
        for q in ordered:
            slot = min(free, key=lambda s: (hop(self.l2p[q], s), s))
            total += hop(self.l2p[q], slot)
            free.remove(slot)
            pairs.append((q, slot))
        return total, pairs

    def _gather(self, node: int, retries: int = 3) -> None:
        gate = self._gate(node)
        size = len(gate.operands)
        positions = self.spec.positions()
        best: Optional[Tuple[float, int, List[Tuple[int, int]]]] = None
        for center in range(self.spec.n_traps):
            group = self._trap_group(center, size, positions)
            if group is None:
                continue
            cost, pairs = self._assign(gate.operands, group, center)
            if cost == float("inf"):
                continue
            if best is None or cost < best[0]:
                best = (cost, center, pairs)
        if best is None:
            raise RoutingError(
                f"no group of {size} traps pairwise within r_int={self.spec.r_int} "
                f"reachable by all operands of {gate}",
                gate_index=node,
            )
        _, center, pairs = best
        logger.debug("gathering gate %d around trap %d", node, center)

        locked: Set[int] = set()
        for q, slot in pairs:
            source = self.l2p[q]
            try:
                view = nx.subgraph_view(self.graph.graph, filter_node=lambda v: v not in locked)
                path = nx.shortest_path(view, source, slot)
            except (nx.NetworkXNoPath, nx.NodeNotFound):
                path = self.graph.shortest_path(source, slot)
            current = source
            for nxt in path[1:]:
                self.apply_swap(current, nxt)
                current = nxt
            locked.add(slot)

        if not _executable(gate, self._traps(node), self.spec, self.graph):
            if retries <= 0:
                raise RoutingError(f"could not gather operands of {gate}", gate_index=node)
            self._gather(node, retries - 1)

    def run(self) -> None:
        while True:
            self.advance()
            if not self.front:
                return
            self.step()


def route(
    circuit: Circuit,
    spec: HardwareSpec,
    layout: Optional[Layout] = None,
    params: Optional[RoutingParams] = None,
) -> MappedCircuit:
    """Insert SWAPs until every gate is executable where it runs.

    Raises:
        RoutingError: operands split across disconnected coupling components,
            or a multi-qubit gate with no feasible trap group.
    """
    params = params or RoutingParams()
    _check_capacity(circuit, spec)
    layout = layout or initial_layout(circuit, spec, "affinity", params.seed)
    router = _Router(circuit, spec, layout, params)
    router.run()
    mapped = MappedCircuit(circuit, tuple(router.out), layout, router.layout())
    logger.info("routed %s on %s: %d gates, %d swaps", circuit.name, spec.name,
                len(circuit.gates), mapped.n_swaps)
    return mapped


def _closure(
    circuit: Circuit,
    dag: DepGraph,
    done: Set[int],
    traps: Sequence[int],
    spec: HardwareSpec,
    graph: CouplingGraph,
) -> List[int]:
    """Gates executable from `done` under a fixed layout, without any swap."""
    in_degree = {
        n: sum(1 for p in dag.graph.predecessors(n) if p not in done)
        for n in dag.graph.nodes if n not in done
    }
    pending = sorted(n for n, deg in in_degree.items() if deg == 0)
    executed: List[int] = []
    while pending:
        ready_next = []
        for node in pending:
            gate = circuit.gates[node]
            if not _executable(gate, [traps[q] for q in gate.operands], spec, graph):
                continue
            executed.append(node)
            for succ in dag.graph.successors(node):
                in_degree[succ] -= 1
                if in_degree[succ] == 0:
                    ready_next.append(succ)
        pending = sorted(ready_next)
    return executed


def _route_fixed(circuit: Circuit, spec: HardwareSpec, params: RoutingParams) -> LayeredPlan:
    router = _Router(circuit, spec, initial_layout(circuit, spec, "affinity", params.seed), params)
    layers: List[PlanLayer] = []
    transition: List[Tuple[int, int]] = []
    while True:
        executed = router.advance()
        if executed:
            layers.append(PlanLayer(router.layout(), tuple(sorted(executed)), tuple(transition)))
            transition = []
        if not router.front:
            break
        transition.extend(router.step())
    return LayeredPlan(circuit, "fixed", tuple(layers))


def _route_reconfig(
    circuit: Circuit, spec: HardwareSpec, params: RoutingParams, fixed: LayeredPlan
) -> LayeredPlan:
    # fresh placement wins only if it runs a superset of the fixed layout's gates
    dag = build_dag(circuit)
    graph = coupling_graph(spec)
    done: Set[int] = set()
    layers: List[PlanLayer] = []
    total = len(circuit.gates)
    while len(done) < total:
        fallback = next(
            layer.layout for layer in fixed.layers if any(i not in done for i in layer.gate_indices)
        )
        remaining = circuit.with_gates(g for i, g in enumerate(circuit.gates) if i not in done)
        fresh = initial_layout(remaining, spec, "affinity", params.seed)
        fresh_run = _closure(circuit, dag, done, fresh.traps, spec, graph)
        fallback_run = _closure(circuit, dag, done, fallback.traps, spec, graph)
        if set(fresh_run) >= set(fallback_run):
            layout, executed = fresh, fresh_run
        else:
            layout, executed = fallback, fallback_run
        if not executed:
            raise RoutingError("reconfiguration made no progress")
        layers.append(PlanLayer(layout, tuple(sorted(executed))))
        done.update(executed)
    return LayeredPlan(circuit, "reconfig", tuple(layers))


def route_layered(
    circuit: Circuit,
    spec: HardwareSpec,
    mode: str = "fixed",
    seed: int = 0,
    params: Optional[RoutingParams] = None,
) -> LayeredPlan:
    """Split execution into layers of gates run under one layout.

    fixed: one layout evolves through swap transitions between layers.
    reconfig: each layer tries a fresh affinity placement of the remaining
    circuit and keeps it only when it executes every gate the fixed plan's
    next layout would. Otherwise the layer reuses that fixed layout, so a
    reconfig layer's layout may equal a fixed-mode one.
    """
    params = params or RoutingParams(seed=seed)
    _check_capacity(circuit, spec)
    fixed = _route_fixed(circuit, spec, params)
    if mode == "fixed":
        plan = fixed
    elif mode == "reconfig":
        plan = _route_reconfig(circuit, spec, params, fixed)
    else:
        raise RoutingError(f"unknown layered mode '{mode}'")
    logger.info("layered %s plan for %s: %d layers", mode, circuit.name, plan.n_layers)
    return plan


def verify(mapped: MappedCircuit, spec: HardwareSpec) -> List[Violation]:
    """Replay a mapped circuit and report every connectivity or bookkeeping error.

    An empty list means every entangling gate met the interaction radius at its
    execution point, source gates appear once each in per-qubit order, and the
    SWAP replay ends in the recorded final layout.
    """
    violations: List[Violation] = []
    graph = coupling_graph(spec)
    if mapped.n_traps != spec.n_traps:
        return [Violation(-1, "-", f"mapped for {mapped.n_traps} traps, spec has {spec.n_traps}")]

    slots = mapped.initial_layout.occupancy()
    last_on_qubit: Dict[int, int] = {}
    seen: Set[int] = set()
    for index, mg in enumerate(mapped.gates):
        label = str(mg.gate)
        traps = mg.traps
        if len(traps) > 1 and not _executable(mg.gate, traps, spec, graph):
            dist = max(spec.distance(a, b) for a in traps for b in traps)
            violations.append(Violation(
                index, label, f"operands {dist / spec.d_um:g}d apart exceed r_int={spec.r_int}"
            ))
        occupants = tuple(slots[t] for t in traps)
        if occupants != tuple(mg.qubits):
            violations.append(Violation(
                index, label, f"recorded qubits {list(mg.qubits)} but traps hold {list(occupants)}"
            ))
        if mg.is_swap:
            a, b = traps
            slots[a], slots[b] = slots[b], slots[a]
            continue
        src = mg.source_index
        if src in seen:
            violations.append(Violation(index, label, f"source gate {src} executed twice"))
        seen.add(src)
        source_gate = mapped.circuit.gates[src] if 0 <= src < len(mapped.circuit.gates) else None
        if source_gate is None or source_gate.kind != mg.gate.kind or source_gate.operands != occupants:
            violations.append(Violation(index, label, f"does not match source gate {src}"))
        for q in occupants:
            if q != EMPTY and last_on_qubit.get(q, -1) > src:
                violations.append(Violation(index, label, f"reorders gates on qubit {q}"))
            last_on_qubit[q] = src

    missing = set(range(len(mapped.circuit.gates))) - seen
    if missing:
        violations.append(Violation(-1, "-", f"{len(missing)} source gates never executed"))
    if slots != mapped.final_layout.occupancy():
        violations.append(Violation(-1, "-", "final layout does not match the SWAP replay"))
    return violations
