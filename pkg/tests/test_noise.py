#!/usr/bin/env python3
"""
Tests for noise.py - correlated noise model, gate budgets and Monte Carlo
"""
import pytest
import sys
import os
from decimal import Decimal

import numpy as np

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../'))

from src.codes import builtin
from src.noise import (
    NoiseParams, CycleHistory, correlated_probability, relapse_probability,
    power_of_ten, gate_budget, configured_budgets, sample_cycle, monte_carlo,
)
from src.tcqec import InjectedError


class TestNoiseParams:
    """Test parameter validation and configuration"""

    def test_defaults_from_config(self):
        """Test config/simulation.yaml defaults"""
        params = NoiseParams.from_config()
        assert params.epsilon == 0.01
        assert params.lam == 0.1
        assert params.delta == 1.0
        assert params.relapse_type_policy == 'same_type'
        assert params.cap == 1.0

    def test_overrides(self):
        """Test keyword overrides, None keeps the default"""
        params = NoiseParams.from_config(epsilon=0.2, lam=None, relapse_type_policy='uniform_XYZ')
        assert params.epsilon == 0.2
        assert params.lam == 0.1
        assert params.relapse_type_policy == 'uniform_XYZ'

    def test_invalid(self):
        """Test out-of-range parameters"""
        with pytest.raises(ValueError):
            NoiseParams(1.5, 0.1)
        with pytest.raises(ValueError):
            NoiseParams(0.1, -1)
        with pytest.raises(ValueError):
            NoiseParams(0.1, 0.1, delta=0)
        with pytest.raises(ValueError):
            NoiseParams(0.1, 0.1, relapse_type_policy='sometimes')
        with pytest.raises(ValueError):
            NoiseParams(0.1, 0.1, cap=0)

    def test_dict_round_trip(self):
        """Test to_dict uses the 'lambda' key"""
        params = NoiseParams(0.05, 0.3, 2.0, 'uniform_XYZ', 0.5)
        data = params.to_dict()
        assert data['lambda'] == 0.3
        restored = NoiseParams.from_dict(data)
        assert restored.to_dict() == data


class TestCorrelatedProbability:
    """Test the two-time error probability"""

    def test_no_noise(self):
        """Test epsilon = lambda = 0 gives zero"""
        result = correlated_probability(NoiseParams(0, 0), 1, 0)
        assert result.total == 0

    def test_reference_value(self):
        """Test epsilon = 0.01, lambda = 0.1, one-cycle gap"""
        result = correlated_probability(NoiseParams(0.01, 0.1, 1.0), 2, 1)
        assert result.independent == pytest.approx(2.5e-5)
        assert result.correlated == pytest.approx(1.25e-5)
        assert result.total == pytest.approx(3.75e-5)

    def test_inverse_fourth_power(self):
        """Test doubling the gap divides the correlated term by 16"""
        params = NoiseParams(0.01, 0.5, 1.0)
        near = correlated_probability(params, 1, 0).correlated
        far = correlated_probability(params, 2, 0).correlated
        assert near / far == pytest.approx(16)

    def test_symmetric_in_time(self):
        """Test only the gap matters"""
        params = NoiseParams(0.01, 0.5)
        assert correlated_probability(params, 3, 5) == correlated_probability(params, 5, 3)

    def test_equal_times(self):
        """Test t1 == t2 is rejected"""
        with pytest.raises(ValueError):
            correlated_probability(NoiseParams(0.01, 0.1), 4, 4)

    def test_cap(self):
        """Test large couplings are capped"""
        result = correlated_probability(NoiseParams(0.01, 10.0), 1, 0)
        assert result.correlated == 1.0
        assert result.total == 1.0

    def test_relapse_probability(self):
        """Test the one-cycle relapse hazard lambda^4 / 8"""
        assert relapse_probability(NoiseParams(0, 0.8)) == pytest.approx(0.8 ** 4 / 8)


class TestGateBudget:
    """Test decoherence gate budgets"""

    def test_configured_rows(self):
        """Test every configured implementation"""
        budgets = {b.implementation: power_of_ten(b.n_gates) for b in configured_budgets()}
        assert budgets == {
            'Nuclear spin': '10^7',
            'Trapped Indium ion': '10^13',
            'Quantum dots/charge': '10^3',
            'Quantum dots/spin': '10^3',
            'Optical cavity': '10^9',
        }

    def test_exact_arithmetic(self):
        """Test the quotient is an exact decimal"""
        assert gate_budget('1e4', '1e-3').n_gates == Decimal('1e7')
        assert gate_budget(1e-5, 1e-14).n_gates == Decimal('1e9')

    def test_equal_times(self):
        """Test equal times give one gate"""
        assert power_of_ten(gate_budget('1e-6', '1e-6').n_gates) == '10^0'

    def test_non_positive(self):
        """Test zero and negative times"""
        with pytest.raises(ValueError):
            gate_budget(0, '1e-3')
        with pytest.raises(ValueError):
            gate_budget('1e-3', '-1e-9')

    def test_power_of_ten(self):
        """Test rendering"""
        assert power_of_ten(Decimal('1e-3')) == '10^-3'
        assert power_of_ten(Decimal('2.5')) == '2.5'

    def test_to_dict(self):
        """Test serialisation"""
        data = gate_budget('1e-1', '1e-14', 'Trapped Indium ion').to_dict()
        assert data['n_gates'] == '10^13'
        assert data['tau_dch'] == '10^-1'


class TestCycleHistory:
    """Test the per-cycle record"""

    def test_new_error_preferred(self):
        """Test the new-error qubit is recorded over the relapse"""
        history = CycleHistory()
        record = history.record(0, [InjectedError(3, 'Z', True), InjectedError(5, 'X')])
        assert record.qubit == 5
        assert record.kind == 'X'

    def test_relapse_only(self):
        """Test a lone relapse is recorded"""
        history = CycleHistory()
        assert history.record(0, [InjectedError(3, 'Z', True)]).qubit == 3

    def test_empty_cycle(self):
        """Test cycles without errors"""
        history = CycleHistory()
        history.record(0, [])
        assert history.last().qubit is None
        assert len(history) == 1

    def test_out_of_order(self):
        """Test cycles must increase"""
        history = CycleHistory()
        history.record(2, [])
        with pytest.raises(ValueError):
            history.record(2, [])


class TestSampleCycle:
    """Test error sampling"""

    def test_no_noise(self):
        """Test zero rates never produce errors"""
        params = NoiseParams(0, 0)
        history = CycleHistory()
        history.record(0, [InjectedError(2, 'X')])
        rng = np.random.default_rng(0)
        assert all(sample_cycle(params, history, 7, rng) == [] for _ in range(1000))

    def test_certain_errors(self):
        """Test saturated rates give one relapse and one new error"""
        params = NoiseParams(1.0, 10.0)
        history = CycleHistory()
        history.record(0, [InjectedError(4, 'Y')])
        rng = np.random.default_rng(1)
        for _ in range(100):
            errors = sample_cycle(params, history, 7, rng)
            assert len(errors) == 2
            relapse, new = errors
            assert relapse.correlated and relapse.target == 4 and relapse.kind == 'Y'
            assert not new.correlated and 1 <= new.target <= 7

    def test_no_relapse_without_history(self):
        """Test the first cycle has only new errors"""
        params = NoiseParams(0.0, 10.0)
        assert sample_cycle(params, CycleHistory(), 7, np.random.default_rng(0)) == []

    def test_relapse_frequency(self):
        """Test the relapse rate matches lambda^4 / 8"""
        params = NoiseParams(0.0, 0.8)
        history = CycleHistory()
        history.record(0, [InjectedError(1, 'Z')])
        rng = np.random.default_rng(31)
        trials = 100000
        relapses = sum(len(sample_cycle(params, history, 7, rng)) for _ in range(trials))
        p = 0.8 ** 4 / 8
        sigma = np.sqrt(p * (1 - p) / trials)
        assert abs(relapses / trials - p) < 4 * sigma

    def test_uniform_policy(self):
        """Test uniform_XYZ relapses take every type"""
        params = NoiseParams(0.0, 10.0, relapse_type_policy='uniform_XYZ')
        history = CycleHistory()
        history.record(0, [InjectedError(1, 'Z')])
        rng = np.random.default_rng(2)
        kinds = {sample_cycle(params, history, 7, rng)[0].kind for _ in range(200)}
        assert kinds == {'X', 'Y', 'Z'}


def relapse_after_error(cycle, history, rng):
    """X3 in cycle 0, then Z3 relapse with a new X5 in cycle 1, then nothing"""
    if cycle == 0:
        return [InjectedError(3, 'X')]
    if cycle == 1:
        return [InjectedError(3, 'Z', True), InjectedError(5, 'X')]
    return []


def relapse_with_new_error(cycle, history, rng):
    """Y2 in cycle 0, then Y2 relapses alongside a new Z6"""
    if cycle == 0:
        return [InjectedError(2, 'Y')]
    if cycle == 1:
        return [InjectedError(2, 'Y', True), InjectedError(6, 'Z')]
    return []


class TestMonteCarlo:
    """Test the decoder comparison"""

    def test_no_noise(self):
        """Test zero noise gives only no_error verdicts"""
        stats = monte_carlo(builtin('steane'), NoiseParams(0, 0), cycles=3, trials=4, seed=1)
        assert stats.extended.verdicts['no_error'] == 12
        assert stats.baseline.verdicts['no_error'] == 12
        assert stats.extended.failures == 0
        assert stats.baseline.failures == 0
        assert stats.new_errors == 0

    def test_injected_double_errors(self):
        """Test the extended decoder survives what the baseline cannot"""
        stats = monte_carlo(builtin('steane'), NoiseParams(0, 0), cycles=3, trials=5, seed=2,
                            injector=relapse_after_error)
        assert stats.double_events == 5
        assert stats.relapses == 5
        assert stats.new_errors == 10
        assert stats.extended.failures == 0
        assert stats.extended.verdicts['double'] == 5
        assert stats.baseline.failures == 5
        assert stats.baseline.verdicts['uncorrectable'] == 5

    def test_relapse_storyline(self):
        """Test a Y relapse next to a new error is a double verdict every trial"""
        stats = monte_carlo(builtin('steane'), NoiseParams(0, 0), cycles=2, trials=3, seed=3,
                            injector=relapse_with_new_error)
        assert stats.extended.verdicts['double'] == 3
        assert stats.extended.failures == 0
        assert stats.baseline.failures == 3

    def test_deterministic(self):
        """Test equal seeds give identical output"""
        code = builtin('steane')
        params = NoiseParams(0.2, 0.9)
        first = monte_carlo(code, params, cycles=5, trials=20, seed=42)
        second = monte_carlo(code, params, cycles=5, trials=20, seed=42)
        assert first.render_kv() == second.render_kv()
        assert first.render_table() == second.render_table()
        assert first.to_dict() == second.to_dict()

    def test_failure_counts_bounded(self):
        """Test failures never exceed trials"""
        stats = monte_carlo(builtin('five_qubit'), NoiseParams(0.3, 1.0), cycles=4, trials=10, seed=5)
        assert 0 <= stats.extended.failures <= 10
        assert 0 <= stats.baseline.failures <= 10
        assert 'extended.failure_rate=' in stats.render_kv()

    def test_ancilla_errors_rejected(self):
        """Test injectors must hit data qubits"""
        with pytest.raises(ValueError):
            monte_carlo(builtin('steane'), NoiseParams(0, 0), cycles=1, trials=1, seed=0,
                        injector=lambda cycle, history, rng: [InjectedError('A', 'X')])

    def test_invalid_sizes(self):
        """Test zero cycles or trials"""
        with pytest.raises(ValueError):
            monte_carlo(builtin('steane'), NoiseParams(0, 0), cycles=0, trials=1, seed=0)
