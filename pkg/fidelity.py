"""Approximate success probability and the trade-off solvers built on it.

P = exp(-t_idle / T_eff) * prod(F_op). Everything is accumulated in log space
so that large circuits do not underflow. Times are μs throughout; T_eff is
converted from the spec's seconds.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

from circuit import BLOCK_COUNTS, GateTag, ccz, cccz, multiqubit_block
from errors import CircuitError
from hardware import HardwareSpec
from scheduler import Schedule, idle_time, metrics
from shuttle import shuttle_duration


@dataclass(frozen=True)
class FidelityReport:
    p: float
    gate_factor: float
    idle_factor: float
    t_idle_us: float
    makespan_us: float
    n_swaps: int
    counts: Dict[str, int]
    log_p: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def success_probability(
    sched: Schedule,
    spec: HardwareSpec,
    n: int,
    n_swaps: int = 0,
    idle_mode: Optional[str] = None,
) -> FidelityReport:
    """Gate factor times idle factor for a schedule on an n-qubit register.

    Shuttle operations contribute the spec's shuttle fidelity; the time a
    qubit spends being shuttled counts as idle.
    """
    log_gate = sum(math.log(op.fidelity) for op in sched.ops)
    t_idle = idle_time(sched, n, idle_mode or spec.idle_mode)
    log_idle = -t_idle / spec.t_eff_us
    return FidelityReport(
        p=math.exp(log_gate + log_idle),
        gate_factor=math.exp(log_gate),
        idle_factor=math.exp(log_idle),
        t_idle_us=t_idle,
        makespan_us=sched.makespan,
        n_swaps=n_swaps,
        counts=metrics(sched)["counts"],
        log_p=log_gate + log_idle,
    )


@dataclass(frozen=True)
class CxComposite:
    fidelity: float
    duration_us: float


def cx_composite(spec: HardwareSpec) -> CxComposite:
    """CX priced as one 1q rotation plus one CZ."""
    return CxComposite(
        fidelity=spec.fidelities["1q"] * spec.fidelities["cz"],
        duration_us=spec.durations_us["1q"] + spec.durations_us["cz"],
    )


def f_swap(n_swaps: int, t_idle_us: float, spec: HardwareSpec, f_cx: Optional[float] = None) -> float:
    """Fidelity of gate-based mapping: idle decay times three CX per SWAP."""
    if n_swaps < 0 or t_idle_us < 0:
        raise ValueError("n_swaps and t_idle must be non-negative")
    f_cx = cx_composite(spec).fidelity if f_cx is None else f_cx
    return math.exp(-t_idle_us / spec.t_eff_us + 3 * n_swaps * math.log(f_cx))


def f_shuttle(t_idle_sh_us: float, spec: HardwareSpec) -> float:
    """Fidelity of shuttling-based mapping: idle decay only."""
    if t_idle_sh_us < 0:
        raise ValueError("shuttle idle time must be non-negative")
    return math.exp(-t_idle_sh_us / spec.t_eff_us)


@dataclass(frozen=True)
class DecompositionResult:
    gate: str
    p_native: float
    p_decomposed: float
    breakeven_fidelity: float
    native_preferred: bool
    n_one_qubit: int
    n_cz: int
    idle_decomposed_us: float
    idle_native_us: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _block_idle(spec: HardwareSpec, gates: Sequence, n: int) -> float:
    """Idle time of an ASAP timeline of `gates` on their own n qubits."""
    ready = [0.0] * n
    busy = [0.0] * n
    total_gate = 0.0
    for gate in gates:
        duration = spec.duration_us(gate.tag)
        start = max(ready[q] for q in gate.operands)
        for q in gate.operands:
            ready[q] = start + duration
            busy[q] += duration
        total_gate += duration
    makespan = max(ready, default=0.0)
    if spec.idle_mode == "arity_weighted":
        return n * makespan - sum(busy)
    return n * makespan - total_gate


def decomposition_breakeven(gate: str, spec: HardwareSpec) -> DecompositionResult:
    """Compare a native CCZ/CCCZ against its CZ-based replacement block.

    Both options are evaluated on an isolated register of the gate's arity.
    `breakeven_fidelity` is the native fidelity at which both are equal.
    """
    builders = {"ccz": lambda: ccz(0, 1, 2), "cccz": lambda: cccz(0, 1, 2, 3)}
    key = gate.lower()
    if key not in builders:
        raise CircuitError(f"decomposition comparison supports ccz and cccz, got '{gate}'")
    native_gate = builders[key]()
    arity = len(native_gate.operands)
    tag = GateTag(key)
    n_1q, n_cz = BLOCK_COUNTS[tag]

    block = multiqubit_block(native_gate)
    idle_dec = _block_idle(spec, block, arity)
    idle_native = _block_idle(spec, [native_gate], arity)
    t_eff = spec.t_eff_us
    log_dec = (n_1q * math.log(spec.fidelities["1q"]) + n_cz * math.log(spec.fidelities["cz"])
               - idle_dec / t_eff)
    p_dec = math.exp(log_dec)
    idle_factor_native = math.exp(-idle_native / t_eff)
    p_native = spec.fidelities[key] * idle_factor_native
    breakeven = p_dec / idle_factor_native
    return DecompositionResult(
        gate=key,
        p_native=p_native,
        p_decomposed=p_dec,
        breakeven_fidelity=breakeven,
        native_preferred=p_native > p_dec,
        n_one_qubit=n_1q,
        n_cz=n_cz,
        idle_decomposed_us=idle_dec,
        idle_native_us=idle_native,
    )


def required_native_fidelity(gate: str, spec: HardwareSpec, f_cz: float) -> float:
    """Breakeven native fidelity when the CZ fidelity is `f_cz`."""
    return decomposition_breakeven(gate, spec.with_fidelity("cz", f_cz)).breakeven_fidelity


def balance_teff(
    t_idle_a: float, n_swaps_a: int, t_idle_b: float, n_swaps_b: int, f_cx: float
) -> Optional[float]:
    """T_eff (μs) at which two compilations of one circuit reach equal P.

    Returns None when the two never cross at a finite positive T_eff.
    """
    if not 0 < f_cx <= 1:
        raise ValueError(f"F_CX must be in (0, 1], got {f_cx}")
    denominator = 3 * math.log(f_cx) * (n_swaps_b - n_swaps_a)
    numerator = t_idle_b - t_idle_a
    if denominator == 0 or numerator == 0:
        return None
    t_eff = numerator / denominator
    return t_eff if t_eff > 0 and math.isfinite(t_eff) else None


def crossover_teff(t_idle_us: float, n_swaps: int, f_cx: float) -> Optional[float]:
    """T_eff (μs) at which idle decay and SWAP error contribute equally.

    Above the returned value the SWAP error dominates. None means there is
    no finite crossover (no SWAPs, or perfect CX).
    """
    if t_idle_us <= 0:
        raise ValueError(f"t_idle must be positive, got {t_idle_us}")
    if not 0 < f_cx <= 1:
        raise ValueError(f"F_CX must be in (0, 1], got {f_cx}")
    if n_swaps <= 0 or f_cx == 1:
        return None
    return -t_idle_us / (3 * n_swaps * math.log(f_cx))


def shuttle_crossover_teff(
    t_idle_gate_us: float, n_swaps: int, t_idle_shuttle_us: float, f_cx: float
) -> Optional[float]:
    """T_eff (μs) above which shuttling beats gate-based SWAPs; None if never."""
    return balance_teff(t_idle_gate_us, n_swaps, t_idle_shuttle_us, 0, f_cx)


@dataclass(frozen=True)
class SubstitutionFidelity:
    """One SWAP with n_idle spectators idling for its whole duration."""
    n_idle: int
    t_swap_us: float
    t_shuttle_us: float
    f_gate: float
    f_shuttle: float

    @property
    def shuttle_preferred(self) -> bool:
        return self.f_shuttle > self.f_gate


def swap_substitution(n_idle: int, spec: HardwareSpec, dist_um: float) -> SubstitutionFidelity:
    """Gate SWAP vs. one shuttle over `dist_um` at maximum speed."""
    cx = cx_composite(spec)
    t_swap = 3 * cx.duration_us
    t_sh = shuttle_duration(dist_um, spec)
    t_eff = spec.t_eff_us
    return SubstitutionFidelity(
        n_idle=n_idle,
        t_swap_us=t_swap,
        t_shuttle_us=t_sh,
        f_gate=math.exp(3 * math.log(cx.fidelity) - n_idle * t_swap / t_eff),
        f_shuttle=math.exp(-n_idle * t_sh / t_eff),
    )


@dataclass(frozen=True)
class VelocityResult:
    n_idle: int
    feasible: bool
    velocity_um_per_us: Optional[float]
    t_shuttle_us: float
    t_swap_us: float
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def required_velocity(n_idle: int, spec: HardwareSpec, dist_um: float) -> VelocityResult:
    """Slowest shuttle speed that matches a gate-based SWAP in fidelity.

    With n_idle qubits idling for the whole SWAP, the breakeven shuttle time
    is t_swap - 3 * T_eff * ln(F_CX) / n_idle; the speed follows by inverting
    the shuttle duration. The result is infeasible when that time does not
    exceed two trap cycles or the speed exceeds v_max.
    """
    if n_idle < 1:
        raise ValueError(f"n_idle must be >= 1, got {n_idle}")
    if dist_um <= 0:
        raise ValueError(f"distance must be positive, got {dist_um}")
    cx = cx_composite(spec)
    t_swap = 3 * cx.duration_us
    t_sh = t_swap - 3 * spec.t_eff_us * math.log(cx.fidelity) / n_idle
    floor = 2 * spec.trap_cycle_us
    if t_sh <= floor:
        return VelocityResult(n_idle, False, None, t_sh, t_swap,
                              f"breakeven shuttle time {t_sh:.6g} us <= trap switching {floor:g} us")
    velocity = 2 * dist_um / (t_sh - floor)
    if velocity > spec.shuttle.v_max_um_per_us:
        return VelocityResult(n_idle, False, velocity, t_sh, t_swap,
                              f"needs {velocity:.6g} um/us > v_max {spec.shuttle.v_max_um_per_us:g}")
    return VelocityResult(n_idle, True, velocity, t_sh, t_swap)
