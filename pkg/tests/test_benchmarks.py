"""Tests for the benchmark generators."""

import math

import networkx as nx
import pytest

from benchmarks import BENCHMARK_KINDS, MIN_QUBITS, generate
from circuit import GateTag, cp, cx, h, swap
from errors import CircuitError


@pytest.mark.parametrize("kind", BENCHMARK_KINDS)
def test_generators_are_deterministic(kind):
    a = generate(kind, 7, seed=5)
    b = generate(kind, 7, seed=5)
    assert a == b
    assert a.name == f"{kind}_7"
    assert a.n == 7


@pytest.mark.parametrize("kind", ["graphstate", "dj", "twolocal"])
def test_seed_changes_random_families(kind):
    circuits = {generate(kind, 9, seed=s).gates for s in range(6)}
    assert len(circuits) > 1


@pytest.mark.parametrize("kind", BENCHMARK_KINDS)
def test_below_minimum_width_rejected(kind):
    with pytest.raises(CircuitError):
        generate(kind, MIN_QUBITS[kind] - 1)


def test_unknown_kind_rejected():
    with pytest.raises(CircuitError, match="unknown benchmark"):
        generate("bogus", 4)


def test_ghz_shape():
    circuit = generate("ghz", 4)
    assert circuit.gates == (h(0), cx(0, 1), cx(1, 2), cx(2, 3))


def test_qft_shape_and_final_swaps():
    n = 4
    circuit = generate("qft", n)
    counts = circuit.count_by_kind()
    assert counts == {"cp": n * (n - 1) // 2, "h": n, "swap": n // 2}
    assert cp(math.pi / 2, 1, 0) in circuit.gates
    assert circuit.gates[-2:] == (swap(0, 3), swap(1, 2))
    assert "swap" not in generate("qft", n, final_swaps=False).count_by_kind()


@pytest.mark.parametrize("n", [3, 4, 7, 10, 13])
def test_graphstate_is_two_regular(n):
    circuit = generate("graphstate", n, seed=n)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(g.operands for g in circuit.gates if g.tag == GateTag.CZ)
    assert all(degree == 2 for _, degree in graph.degree())
    assert all(len(c) >= 3 for c in nx.connected_components(graph))


def test_dj_oracle_targets_ancilla():
    circuit = generate("dj", 6, seed=2)
    cxs = [g for g in circuit.gates if g.tag == GateTag.CX]
    assert cxs
    assert all(g.operands[1] == 5 for g in cxs)


def test_twolocal_ring_and_reps():
    circuit = generate("twolocal", 4, seed=1, reps=2)
    counts = circuit.count_by_kind()
    assert counts == {"cx": 2 * 4, "r1q": 3 * 4}
    two = generate("twolocal", 2, seed=1, reps=1)
    assert two.count_by_kind()["cx"] == 1


def test_twolocal_needs_a_repetition():
    with pytest.raises(CircuitError):
        generate("twolocal", 4, reps=0)


def test_wstate_counts():
    n = 5
    counts = generate("wstate", n).count_by_kind()
    assert counts == {"cx": n - 1, "cz": n - 1, "r1q": 2 * (n - 1), "x": 1}
