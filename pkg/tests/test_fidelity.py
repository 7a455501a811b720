"""Tests for the success-probability model and the trade-off solvers."""

import math
import random

import pytest

from benchmarks import generate
from circuit import lower_to_native
from errors import CircuitError
from hardware import preset
from fidelity import (
    balance_teff, crossover_teff, cx_composite, decomposition_breakeven, f_shuttle, f_swap,
    required_native_fidelity, required_velocity, shuttle_crossover_teff, success_probability,
    swap_substitution,
)
from mapper import initial_layout, route
from scheduler import schedule
from shuttle import shuttle_duration


def bisect(fn, lo, hi, iterations=200):
    """Root of a monotone function on [lo, hi]."""
    f_lo = fn(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if (fn(mid) > 0) == (f_lo > 0):
            lo, f_lo = mid, fn(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestSuccessProbability:
    def setup_method(self):
        self.spec = preset("rubidium", 3, 3)
        circuit = generate("ghz", 3)
        mapped = route(circuit, self.spec, initial_layout(circuit, self.spec, "identity"))
        self.sched = schedule(mapped, self.spec)

    def test_ghz_value(self):
        report = success_probability(self.sched, self.spec, 3)
        assert report.p == pytest.approx(0.987056, abs=1e-6)
        assert report.t_idle_us == pytest.approx(2.4)
        assert report.p == pytest.approx(report.gate_factor * report.idle_factor)
        assert report.counts == {"cx": 2, "h": 1}

    def test_idle_mode_override(self):
        weighted = success_probability(self.sched, self.spec, 3)
        plain = success_probability(self.sched, self.spec, 3, idle_mode="gate_sum")
        assert plain.t_idle_us == pytest.approx(3.8)
        assert plain.p < weighted.p

    def test_large_circuit_does_not_underflow(self):
        spec = preset("strontium", 5, 5)
        circuit = lower_to_native(generate("qft", 25))
        mapped = route(circuit, spec)
        report = success_probability(schedule(mapped, spec), spec, circuit.n, mapped.n_swaps)
        assert math.isfinite(report.log_p)
        assert report.log_p < 0
        assert report.n_swaps == mapped.n_swaps

    def test_to_dict(self):
        data = success_probability(self.sched, self.spec, 3).to_dict()
        assert set(data) >= {"p", "gate_factor", "idle_factor", "t_idle_us", "makespan_us"}


class TestClosedForms:
    def test_cx_composite(self):
        cx = cx_composite(preset("rubidium"))
        assert cx.fidelity == pytest.approx(0.999 * 0.995)
        assert cx.duration_us == pytest.approx(0.7)

    def test_f_swap_three_cx_per_swap(self):
        assert f_swap(1, 0.0, preset("rubidium"), f_cx=0.99) == pytest.approx(0.970299)

    def test_f_swap_uses_spec_cx(self):
        spec = preset("rubidium").with_fidelity("1q", 1.0).with_fidelity("cz", 0.99)
        assert f_swap(1, 0.0, spec) == pytest.approx(0.970299)

    def test_f_shuttle(self):
        spec = preset("rubidium")
        assert f_shuttle(0.0, spec) == 1.0
        assert f_shuttle(spec.t_eff_us, spec) == pytest.approx(math.exp(-1))

    @pytest.mark.parametrize("call", [
        lambda spec: f_swap(-1, 0.0, spec),
        lambda spec: f_swap(1, -1.0, spec),
        lambda spec: f_shuttle(-1.0, spec),
    ])
    def test_negative_inputs(self, call):
        with pytest.raises(ValueError):
            call(preset("rubidium"))


class TestCrossover:
    def test_reference_value(self):
        assert crossover_teff(1e5, 100, 0.995) == pytest.approx(66500, rel=1e-4)

    @pytest.mark.parametrize("t_idle,n,f", [(1e5, 100, 0.995), (2.5e3, 7, 0.99), (40.0, 1, 0.9999)])
    def test_matches_bisection(self, t_idle, n, f):
        expected = bisect(lambda t: t_idle / t + 3 * n * math.log(f), 1e-6, 1e12)
        assert crossover_teff(t_idle, n, f) == pytest.approx(expected, rel=1e-6)

    def test_no_crossover(self):
        assert crossover_teff(10.0, 0, 0.99) is None
        assert crossover_teff(10.0, 5, 1.0) is None

    @pytest.mark.parametrize("args", [(0.0, 1, 0.99), (1.0, 1, 0.0), (1.0, 1, 1.5)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            crossover_teff(*args)

    def test_balance_matches_bisection(self):
        t_a, n_a, t_b, n_b, f = 500.0, 40, 9000.0, 0, 0.995

        def gap(t_eff):
            p_a = -t_a / t_eff + 3 * n_a * math.log(f)
            p_b = -t_b / t_eff + 3 * n_b * math.log(f)
            return p_a - p_b

        expected = bisect(gap, 1.0, 1e12)
        assert balance_teff(t_a, n_a, t_b, n_b, f) == pytest.approx(expected, rel=1e-6)

    def test_balance_none_when_one_side_dominates(self):
        # fewer swaps and less idle time: never worse
        assert balance_teff(100.0, 10, 50.0, 5, 0.99) is None
        assert balance_teff(100.0, 10, 100.0, 10, 0.99) is None

    def test_shuttle_crossover(self):
        value = shuttle_crossover_teff(100.0, 20, 5000.0, 0.99)
        assert value == pytest.approx((5000.0 - 100.0) / (3 * math.log(0.99) * -20))
        p_gate = -100.0 / value + 60 * math.log(0.99)
        p_shuttle = -5000.0 / value
        assert p_gate == pytest.approx(p_shuttle)


class TestDecomposition:
    @pytest.mark.parametrize("name,expected", [("rubidium", 0.96166), ("strontium", 0.86006)])
    def test_ccz_decomposed_probability(self, name, expected):
        result = decomposition_breakeven("ccz", preset(name))
        assert result.p_decomposed == pytest.approx(expected, abs=2e-4)
        assert result.native_preferred
        assert (result.n_one_qubit, result.n_cz) == (9, 6)

    def test_cccz_counts(self):
        result = decomposition_breakeven("CCCZ", preset("rubidium"))
        assert result.gate == "cccz"
        assert (result.n_one_qubit, result.n_cz) == (28, 20)
        assert result.p_decomposed < decomposition_breakeven("ccz", preset("rubidium")).p_decomposed

    def test_breakeven_equalizes(self):
        spec = preset("strontium")
        result = decomposition_breakeven("ccz", spec)
        at_breakeven = decomposition_breakeven("ccz", spec.with_fidelity("ccz", result.breakeven_fidelity))
        assert at_breakeven.p_native == pytest.approx(at_breakeven.p_decomposed)

    def test_required_fidelity_rises_with_cz(self):
        spec = preset("rubidium")
        values = [required_native_fidelity("ccz", spec, f) for f in (0.99, 0.995, 0.999)]
        assert values == sorted(values)

    def test_unsupported_gate(self):
        with pytest.raises(CircuitError):
            decomposition_breakeven("cz", preset("rubidium"))


class TestVelocity:
    def test_rubidium_reference(self):
        result = required_velocity(50, preset("rubidium"), 6.0)
        assert result.feasible
        assert result.t_shuttle_us == pytest.approx(535.3, abs=0.1)
        assert result.velocity_um_per_us == pytest.approx(0.02636, abs=1e-5)

    def test_single_spectator(self):
        result = required_velocity(1, preset("rubidium"), 6.0)
        assert result.velocity_um_per_us == pytest.approx(4.5e-4, rel=0.01)

    def test_infeasible_when_below_trap_switching(self):
        result = required_velocity(343, preset("rubidium"), 6.0)
        assert not result.feasible
        assert result.velocity_um_per_us is None
        assert "trap switching" in result.reason

    @pytest.mark.parametrize("n_idle", [1, 5, 50, 200])
    def test_velocity_equalizes_fidelities(self, n_idle):
        spec = preset("rubidium")
        result = required_velocity(n_idle, spec, 6.0)
        t_sh = shuttle_duration(6.0, spec, velocity=result.velocity_um_per_us)
        cx = cx_composite(spec)
        log_gate = 3 * math.log(cx.fidelity) - n_idle * 3 * cx.duration_us / spec.t_eff_us
        log_shuttle = -n_idle * t_sh / spec.t_eff_us
        assert log_shuttle == pytest.approx(log_gate, rel=1e-9)

    def test_curve_is_monotone_until_infeasible(self):
        spec = preset("rubidium")
        results = [required_velocity(n, spec, 6.0) for n in range(1, 343)]
        speeds = [r.velocity_um_per_us for r in results if r.feasible]
        assert speeds == sorted(speeds)

    @pytest.mark.parametrize("n_idle,dist", [(0, 6.0), (5, 0.0)])
    def test_invalid(self, n_idle, dist):
        with pytest.raises(ValueError):
            required_velocity(n_idle, preset("rubidium"), dist)


class TestSubstitution:
    def test_strontium_swap_time(self):
        result = swap_substitution(1, preset("strontium"), 3.0)
        assert result.t_swap_us == pytest.approx(600.3)
        assert result.t_shuttle_us == pytest.approx(320.0)

    def test_strontium_prefers_shuttling(self):
        spec = preset("strontium")
        assert all(swap_substitution(n, spec, 3.0).shuttle_preferred for n in range(1, 1001))

    def test_rubidium_switches_to_gates_for_large_registers(self):
        spec = preset("rubidium")
        assert swap_substitution(1, spec, 6.0).shuttle_preferred
        assert not swap_substitution(400, spec, 6.0).shuttle_preferred


def test_crossover_matches_bisection_on_random_draws():
    rnd = random.Random(11)
    for _ in range(200):
        t_idle = 10 ** rnd.uniform(0, 6)
        n = rnd.randint(1, 500)
        f = rnd.uniform(0.9, 0.99999)
        expected = bisect(lambda t: t_idle / t + 3 * n * math.log(f), 1e-9, 1e15, iterations=400)
        assert crossover_teff(t_idle, n, f) == pytest.approx(expected, rel=1e-9)
