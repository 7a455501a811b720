"""Tests for the circuit IR, lowering and dependency DAG."""

import math
import random

import networkx as nx
import pytest

from benchmarks import generate
from circuit import (
    BLOCK_COUNTS, Circuit, Gate, GateKind, GateTag, NativeSet, build_dag, ccz, cccz, cp, cx,
    cz, h, lower_to_native, multiqubit_block, r1q, rz, swap, x,
)
from errors import CircuitError, LoweringError


def random_circuit(n, n_gates, seed):
    rnd = random.Random(seed)
    gates = []
    for _ in range(n_gates):
        kind = rnd.choice(["h", "cz", "cx", "ccz"] if n >= 3 else ["h", "cz", "cx"])
        if kind == "h":
            gates.append(h(rnd.randrange(n)))
        elif kind == "ccz":
            gates.append(ccz(*rnd.sample(range(n), 3)))
        else:
            a, b = rnd.sample(range(n), 2)
            gates.append(cz(a, b) if kind == "cz" else cx(a, b))
    return Circuit(n, tuple(gates), "random")


class TestGateKinds:
    def test_r1q_requires_axis_and_finite_angle(self):
        with pytest.raises(CircuitError):
            GateKind(GateTag.R1Q, axis="w", angle=0.1)
        with pytest.raises(CircuitError):
            GateKind(GateTag.R1Q, axis="x", angle=math.inf)

    @pytest.mark.parametrize("angle", [2 * math.pi, -2 * math.pi + 1e-9, 0.3])
    def test_cp_angle_range_accepts(self, angle):
        assert cp(angle, 0, 1).kind.angle == angle

    @pytest.mark.parametrize("angle", [-2 * math.pi, 2 * math.pi + 1e-6, math.nan])
    def test_cp_angle_range_rejects(self, angle):
        with pytest.raises(CircuitError):
            cp(angle, 0, 1)

    def test_arity_is_fixed_by_tag(self):
        with pytest.raises(CircuitError):
            Gate(GateKind(GateTag.CZ), (0,))
        with pytest.raises(CircuitError):
            Gate(GateKind(GateTag.CCZ), (0, 1, 2, 3))

    def test_duplicate_operands_rejected(self):
        with pytest.raises(CircuitError):
            cz(1, 1)

    def test_parameterless_tags_take_no_parameters(self):
        with pytest.raises(CircuitError):
            GateKind(GateTag.CZ, angle=0.5)

    def test_label_does_not_affect_equality(self):
        assert r1q("y", 0.5, 0, label="h") == r1q("y", 0.5, 0)


class TestCircuit:
    def test_operands_must_fit_register(self):
        with pytest.raises(CircuitError):
            Circuit(2, (cz(0, 2),))

    def test_empty_circuit_allowed(self):
        c = Circuit(1)
        assert len(c) == 0

    def test_zero_qubits_rejected(self):
        with pytest.raises(CircuitError):
            Circuit(0)

    def test_count_by_kind(self):
        c = generate("ghz", 3)
        assert c.count_by_kind() == {"cx": 2, "h": 1}

    def test_interaction_weights(self):
        c = Circuit(3, (cz(0, 1), cz(1, 0), ccz(0, 1, 2)))
        assert c.interaction_weights() == {(0, 1): 3, (0, 2): 1, (1, 2): 1}


class TestNativeSet:
    def test_must_contain_r1q_and_cz(self):
        with pytest.raises(CircuitError):
            NativeSet(tags=frozenset({GateTag.R1Q}))

    def test_flags_extend_allowed(self):
        assert NativeSet().allowed == {GateTag.R1Q, GateTag.CZ, GateTag.CCZ, GateTag.CCCZ}
        assert GateTag.CP in NativeSet(cp_native=True).allowed
        assert GateTag.CCZ not in NativeSet(multiqubit_native=False).allowed


class TestLowering:
    def test_cx_becomes_h_cz_h(self):
        lowered = lower_to_native(Circuit(2, (cx(0, 1),)))
        assert [g.tag for g in lowered.gates] == [GateTag.R1Q, GateTag.CZ, GateTag.R1Q]
        assert lowered.gates[0].operands == (1,)
        assert lowered.gates[0].kind.label == "h"
        assert lowered.gates[1] == cz(0, 1)
        assert lowered.gates[2].operands == (1,)

    def test_h_and_x_become_single_rotations(self):
        lowered = lower_to_native(Circuit(1, (h(0), x(0))))
        assert [g.tag for g in lowered.gates] == [GateTag.R1Q, GateTag.R1Q]

    def test_swap_becomes_three_cx(self):
        lowered = lower_to_native(Circuit(2, (swap(0, 1),)))
        assert lowered.count_by_kind() == {"cz": 3, "r1q": 6}

    def test_cp_lowered_unless_native(self):
        circuit = Circuit(2, (cp(0.4, 0, 1),))
        lowered = lower_to_native(circuit)
        assert lowered.count_by_kind() == {"cz": 2, "r1q": 7}
        z_rotations = [g for g in lowered.gates if g.kind.axis == "z"]
        assert len(z_rotations) == 3
        assert lower_to_native(circuit, NativeSet(cp_native=True)).gates == circuit.gates

    def test_ccz_native_is_identity(self):
        circuit = Circuit(3, (ccz(0, 1, 2),))
        assert lower_to_native(circuit).gates == circuit.gates

    @pytest.mark.parametrize("gate,counts", [
        (ccz(0, 1, 2), (9, 6)),
        (cccz(0, 1, 2, 3), (28, 20)),
    ])
    def test_multiqubit_block_counts(self, gate, counts):
        lowered = lower_to_native(Circuit(4, (gate,)), NativeSet(multiqubit_native=False))
        tally = lowered.count_by_kind()
        assert (tally["r1q"], tally["cz"]) == counts == BLOCK_COUNTS[gate.tag]
        assert set(q for g in lowered.gates for q in g.operands) == set(gate.operands)

    def test_block_rejects_other_gates(self):
        with pytest.raises(LoweringError):
            multiqubit_block(cz(0, 1))

    def test_native_h_is_kept_inside_cx(self):
        native = NativeSet(tags=frozenset({GateTag.R1Q, GateTag.CZ, GateTag.H}))
        assert lower_to_native(Circuit(2, (cx(0, 1),)), native).count_by_kind() == {"cz": 1, "h": 2}

    @pytest.mark.parametrize("kind", ["ghz", "wstate", "dj", "qft", "twolocal", "graphstate"])
    def test_lowering_stays_native_and_keeps_width(self, kind):
        circuit = generate(kind, 6, seed=3)
        native = NativeSet()
        lowered = lower_to_native(circuit, native)
        assert lowered.n == circuit.n
        assert all(native.allows(g.tag) for g in lowered.gates)

    def test_rz_helper_is_z_rotation(self):
        assert rz(0.1, 0).kind.axis == "z"


class TestDag:
    def test_disjoint_gates_have_no_edges(self):
        dag = build_dag(Circuit(4, (cz(0, 1), cz(2, 3))))
        assert dag.graph.number_of_edges() == 0
        assert dag.front_layer() == [0, 1]

    def test_ghz_is_a_chain(self):
        dag = build_dag(generate("ghz", 3))
        assert sorted(dag.graph.edges) == [(0, 1), (1, 2)]
        assert dag.chain(0) == (0, 1)
        assert dag.chain(2) == (2,)

    def test_edge_records_all_shared_qubits(self):
        dag = build_dag(Circuit(2, (cz(0, 1), cz(1, 0))))
        assert sorted(dag.graph.edges[0, 1]["qubits"]) == [0, 1]

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_brute_force(self, seed):
        circuit = random_circuit(5, 20 + seed, seed)
        dag = build_dag(circuit)
        gates = circuit.gates
        expected = set()
        for i in range(len(gates)):
            for j in range(i + 1, len(gates)):
                shared = set(gates[i].operands) & set(gates[j].operands)
                for q in shared:
                    between = any(q in gates[k].operands for k in range(i + 1, j))
                    if not between:
                        expected.add((i, j))
        assert set(dag.graph.edges) == expected
        assert nx.is_directed_acyclic_graph(dag.graph)

        for q in range(circuit.n):
            touching = tuple(i for i, g in enumerate(gates) if q in g.operands)
            assert dag.chain(q) == touching
            for a, b in zip(touching, touching[1:]):
                assert dag.graph.has_edge(a, b)

        order = dag.topological_order()
        position = {node: k for k, node in enumerate(order)}
        for i, j in dag.graph.edges:
            assert position[i] < position[j]
        reordered = [gates[i] for i in order]
        for q in range(circuit.n):
            assert [g for g in reordered if q in g.operands] == [g for g in gates if q in g.operands]
