"""Deterministic benchmark circuit generators.

Six families are provided: ghz, wstate, graphstate, dj, qft and twolocal.
For a fixed (kind, n, seed) every generator returns the same circuit, bit for
bit. Random choices come from `seeding.make_rng(seed, "bench", kind, n)`.
"""

import math
from typing import Callable, Dict, List

import numpy as np

from circuit import Circuit, Gate, cp, cx, cz, h, ry, swap, x
from errors import CircuitError
from seeding import make_rng

DEFAULT_TWOLOCAL_REPS = 3

MIN_QUBITS: Dict[str, int] = {
    "ghz": 2,
    "wstate": 2,
    "graphstate": 3,
    "dj": 2,
    "qft": 2,
    "twolocal": 2,
}


def ghz(n: int) -> List[Gate]:
    gates = [h(0)]
    gates.extend(cx(i, i + 1) for i in range(n - 1))
    return gates


def wstate(n: int) -> List[Gate]:
    """Recursive controlled-RY construction followed by a CX cascade."""
    gates = [x(n - 1)]
    for m in range(1, n):
        target, control = n - m - 1, n - m
        theta = math.acos(math.sqrt(1.0 / (n - m + 1)))
        gates.extend([ry(-theta, target), cz(control, target), ry(theta, target)])
    gates.extend(cx(k - 1, k) for k in range(n - 1, 0, -1))
    return gates


def graphstate(n: int, rng: np.random.Generator) -> List[Gate]:
    """Random 2-regular graph state: disjoint cycles of length >= 3."""
    nodes = [int(v) for v in rng.permutation(n)]
    edges = []
    start = 0
    while start < n:
        remaining = n - start
        size = int(rng.integers(3, remaining + 1)) if remaining > 3 else remaining
        if remaining - size in (1, 2):
            size = remaining
        cycle = nodes[start:start + size]
        for i, a in enumerate(cycle):
            b = cycle[(i + 1) % size]
            edges.append((min(a, b), max(a, b)))
        start += size
    gates = [h(q) for q in range(n)]
    gates.extend(cz(a, b) for a, b in edges)
    return gates


def dj(n: int, rng: np.random.Generator) -> List[Gate]:
    """Deutsch-Jozsa with a balanced oracle on n-1 inputs and one ancilla.

    The oracle is f(x) = s.x (mod 2) with a seeded nonzero mask s, wrapped in
    X gates on a seeded input pattern.
    """
    inputs = n - 1
    ancilla = n - 1
    mask = rng.integers(0, 2, size=inputs)
    if not mask.any():
        mask[int(rng.integers(0, inputs))] = 1
    flips = rng.integers(0, 2, size=inputs)

    gates = [x(ancilla)]
    gates.extend(h(q) for q in range(n))
    gates.extend(x(q) for q in range(inputs) if flips[q])
    gates.extend(cx(q, ancilla) for q in range(inputs) if mask[q])
    gates.extend(x(q) for q in range(inputs) if flips[q])
    gates.extend(h(q) for q in range(inputs))
    return gates


def qft(n: int, final_swaps: bool = True) -> List[Gate]:
    gates: List[Gate] = []
    for j in range(n):
        gates.append(h(j))
        for k in range(j + 1, n):
            gates.append(cp(math.pi / 2 ** (k - j), k, j))
    if final_swaps:
        gates.extend(swap(i, n - 1 - i) for i in range(n // 2))
    return gates


def twolocal(n: int, rng: np.random.Generator, reps: int = DEFAULT_TWOLOCAL_REPS) -> List[Gate]:
    """Alternating RY layers and CX rings; the ring closes only for n > 2."""
    ring = [(i, i + 1) for i in range(n - 1)]
    if n > 2:
        ring.append((n - 1, 0))
    gates: List[Gate] = []
    for _ in range(reps):
        gates.extend(ry(float(a), q) for q, a in enumerate(rng.uniform(-math.pi, math.pi, n)))
        gates.extend(cx(a, b) for a, b in ring)
    gates.extend(ry(float(a), q) for q, a in enumerate(rng.uniform(-math.pi, math.pi, n)))
    return gates


BENCHMARK_KINDS = tuple(MIN_QUBITS)


def generate(
    kind: str,
    n: int,
    seed: int = 0,
    final_swaps: bool = True,
    reps: int = DEFAULT_TWOLOCAL_REPS,
) -> Circuit:
    """Build benchmark `kind` on `n` qubits.

    Raises:
        CircuitError: unknown kind or n below the kind's minimum.
    """
    if kind not in MIN_QUBITS:
        raise CircuitError(f"unknown benchmark '{kind}', expected one of {BENCHMARK_KINDS}")
    if n < MIN_QUBITS[kind]:
        raise CircuitError(f"benchmark '{kind}' needs n >= {MIN_QUBITS[kind]}, got {n}")
    if reps < 1:
        raise CircuitError(f"twolocal needs at least one repetition, got {reps}")

    rng = make_rng(seed, "bench", kind, n)
    builders: Dict[str, Callable[[], List[Gate]]] = {
        "ghz": lambda: ghz(n),
        "wstate": lambda: wstate(n),
        "graphstate": lambda: graphstate(n, rng),
        "dj": lambda: dj(n, rng),
        "qft": lambda: qft(n, final_swaps),
        "twolocal": lambda: twolocal(n, rng, reps),
    }
    return Circuit(n, tuple(builders[kind]()), f"{kind}_{n}")
