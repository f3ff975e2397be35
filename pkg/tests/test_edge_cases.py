#!/usr/bin/env python3
"""
Tests for edge cases and error conditions
"""
import pytest
import sys
import os

import numpy as np

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../'))

from src.circuit import Circuit, Gate, parse
from src.codes import StabilizerCode, Syndrome, builtin, syndrome_of, validate, distance
from src.pauli import PauliOp, single
from src.tableau import Tableau
from src.tcqec import (
    SINGLE, CorrectionDecision, InjectedError, build_protocol, full_cycle, prepare_register,
    codeword_valid,
)


class TestEdgeCases:
    """Test edge cases and error conditions"""

    def test_single_qubit_register(self):
        """Test the smallest tableau"""
        state = Tableau(1)
        state.apply_gate(Gate('Y', [0]))
        assert state.measure(0, np.random.default_rng(0)) == (1, True)

    def test_header_only_circuit(self):
        """Test a circuit with no gates"""
        circuit = parse("qubits 3\n")
        assert len(circuit) == 0
        assert circuit.measurement_groups() == []
        assert Tableau(3).run(circuit, np.random.default_rng(0)) == []

    def test_identity_observable(self):
        """Test measuring +/- identity"""
        rng = np.random.default_rng(0)
        assert Tableau(2).measure_pauli(PauliOp.identity(2), rng) == (0, True)
        assert Tableau(2).measure_pauli(PauliOp.from_string("-II"), rng) == (1, True)

    def test_signed_generator_syndrome(self):
        """Test syndromes ignore generator signs"""
        code = StabilizerCode('neg', 1, 0, [PauliOp.from_string("-Z")])
        assert validate(code).passed
        assert syndrome_of(code, single(1, 1, 'X')) == Syndrome([1])
        assert syndrome_of(code, single(1, 1, 'Z')) == Syndrome([0])

    def test_code_without_generators(self):
        """Test a trivial code with one unprotected qubit"""
        code = StabilizerCode('bare', 1, 1, [])
        assert validate(code).passed
        assert len(syndrome_of(code, single(1, 1, 'X'))) == 0
        assert distance(code) == 1

    def test_tracked_qubit_at_edges(self):
        """Test the first and last qubits as tracked qubit"""
        code = builtin('steane')
        register = prepare_register(code)
        for j, new in ((1, 7), (7, 1)):
            state = register.copy()
            decision = full_cycle(build_protocol(code, j), state,
                                  [InjectedError(j, 'Y', True), InjectedError(new, 'Y')],
                                  np.random.default_rng(j))
            assert decision.corrected_qubit() == new
            assert codeword_valid(code, state)

    def test_consecutive_cycles(self):
        """Test tracking the corrected qubit over several cycles"""
        code = builtin('steane')
        state = prepare_register(code)
        rng = np.random.default_rng(12)
        tracked = 2
        stream = [
            [InjectedError(2, 'X', True), InjectedError(6, 'Z')],
            [InjectedError(6, 'Z', True), InjectedError(1, 'Y')],
            [InjectedError(1, 'X', True)],
            [],
        ]
        for errors in stream:
            decision = full_cycle(build_protocol(code, tracked), state, errors, rng)
            assert codeword_valid(code, state)
            tracked = decision.corrected_qubit() or tracked
        assert decision.message() == "no error detected"

    def test_single_decision_fields(self):
        """Test a single verdict has no correlated or new error"""
        decision = CorrectionDecision(SINGLE, [single(5, 2, 'X')], 5)
        assert decision.correction == single(5, 2, 'X')
        assert decision.correlated_error is None
        assert decision.new_error is None

    def test_circuit_width_vs_tableau(self):
        """Test circuits wider than the tableau"""
        state = Tableau(2)
        with pytest.raises(IndexError):
            state.apply_circuit(Circuit(3, [Gate('H', [2])]))

    def test_pauli_bits_wrapped(self):
        """Test bit values other than 0/1 are reduced mod 2"""
        p = PauliOp([3, 2], [0, 1], phase=6)
        assert str(p) == "-XZ"

    def test_mismatched_bit_lengths(self):
        """Test x and z vectors of different length"""
        with pytest.raises(ValueError):
            PauliOp([1, 0], [1])
