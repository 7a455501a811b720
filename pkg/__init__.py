"""atomc: compilation trade-offs for grid-based neutral-atom processors.

Quick Start:
    >>> from benchmarks import generate
    >>> from hardware import preset
    >>> from mapper import route
    >>> from scheduler import schedule
    >>> from fidelity import success_probability
    >>>
    >>> circuit = generate("ghz", 8, seed=0)
    >>> spec = preset("rubidium", rows=3, cols=3)
    >>> mapped = route(circuit, spec)
    >>> report = success_probability(schedule(mapped, spec), spec, circuit.n, mapped.n_swaps)

Main Components:
    - circuit / qasm_io / benchmarks: circuit IR, OpenQASM subset, generators
    - hardware: HardwareSpec, presets, coupling graph, geometric predicates
    - mapper / scheduler / shuttle: routing, restriction-aware timing, shuttling
    - fidelity: approximate success probability and crossover solvers
    - pipeline / studies / cli: compile runs, trade-off sweeps, command line
"""

__version__ = "0.1.0"

from circuit import Circuit, Gate, GateKind, GateTag, NativeSet, build_dag, lower_to_native
from hardware import HardwareSpec, coupling_graph, preset
from mapper import initial_layout, route, route_layered, verify
from scheduler import idle_time, metrics, schedule
from shuttle import schedule_shuttle_plan, shuttle_duration, shuttles_from_swaps
from fidelity import success_probability
from pipeline import CompilationPipeline
from studies import STUDIES

__all__ = [
    "Circuit", "Gate", "GateKind", "GateTag", "NativeSet", "build_dag", "lower_to_native",
    "HardwareSpec", "coupling_graph", "preset",
    "initial_layout", "route", "route_layered", "verify",
    "idle_time", "metrics", "schedule",
    "schedule_shuttle_plan", "shuttle_duration", "shuttles_from_swaps",
    "success_probability",
    "CompilationPipeline",
    "STUDIES",
    "__version__",
]
