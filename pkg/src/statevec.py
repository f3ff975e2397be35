"""
Dense state-vector oracle for small registers

Basis index bit order: qubit 0 (qubit 1 in Pauli strings) is the most
significant bit, so |10010> puts qubits 1 and 4 in state |1>.
"""
from typing import Dict, Any, Iterable, Optional
import logging

import numpy as np

from config.settings import SIMULATION_CONFIG
from .circuit import Circuit, Gate
from .pauli import PauliOp

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12

_SQRT2_INV = 1 / np.sqrt(2)
_MATRICES = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
    'H': np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    'S': np.array([[1, 0], [0, 1j]], dtype=complex),
    'SDG': np.array([[1, 0], [0, -1j]], dtype=complex),
}


def _check_size(n: int):
    limit = SIMULATION_CONFIG['statevec_max_qubits']
    if n > limit:
        raise ValueError(f"State-vector oracle is limited to {limit} qubits, got {n}")


class DenseState:
    """Normalised amplitude vector over 2^n basis states"""

    def __init__(self, n: int, amplitudes: Iterable[complex]):
        _check_size(n)
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** n:
            raise ValueError(f"Expected {2 ** n} amplitudes for {n} qubits, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise ValueError(f"State is not normalised (norm {norm})")
        self.n = int(n)
        self.amplitudes = amps

    @classmethod
    def zero(cls, n: int) -> 'DenseState':
        """|0...0>"""
        return cls.basis(n, '0' * n)

    @classmethod
    def basis(cls, n: int, label: str) -> 'DenseState':
        """Computational basis state from a bit label, qubit 1 leftmost"""
        if len(label) != n or set(label) - {'0', '1'}:
            raise ValueError(f"Invalid basis label '{label}' for {n} qubits")
        _check_size(n)
        amps = np.zeros(2 ** n, dtype=complex)
        amps[int(label, 2)] = 1
        return cls(n, amps)

    @classmethod
    def from_signed_labels(cls, n: int, plus: Iterable[str], minus: Iterable[str],
                           scale: Optional[float] = None) -> 'DenseState':
        """
        Superposition with amplitude +scale on `plus` labels and -scale on `minus` labels

        Args:
            n: qubit count
            plus: basis labels with positive sign
            minus: basis labels with negative sign
            scale: common magnitude, default 1/sqrt(number of labels)
        """
        plus, minus = list(plus), list(minus)
        scale = scale if scale is not None else 1 / np.sqrt(len(plus) + len(minus))
        _check_size(n)
        amps = np.zeros(2 ** n, dtype=complex)
        for label, sign in [(l, 1) for l in plus] + [(l, -1) for l in minus]:
            if len(label) != n:
                raise ValueError(f"Basis label '{label}' does not have {n} qubits")
            amps[int(label, 2)] += sign * scale
        return cls(n, amps)

    def tensor(self, other: 'DenseState') -> 'DenseState':
        """self x other, self on the leading qubits"""
        return DenseState(self.n + other.n, np.kron(self.amplitudes, other.amplitudes))

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'amplitudes': [complex(a) for a in self.amplitudes]}

    def __str__(self):
        return f"DenseState(n={self.n})"

    def __repr__(self):
        return self.__str__()


def _apply_single(psi: np.ndarray, matrix: np.ndarray, q: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(matrix, psi, axes=([1], [q])), 0, q)


def _apply_gate(psi: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    if gate.kind in _MATRICES:
        return _apply_single(psi, _MATRICES[gate.kind], gate.operands[0])

    c, t = gate.operands

    def idx(vc, vt):
        i = [slice(None)] * n
        i[c], i[t] = vc, vt
        return tuple(i)

    new = psi.copy()
    if gate.kind == 'CNOT':
        new[idx(1, 0)] = psi[idx(1, 1)]
        new[idx(1, 1)] = psi[idx(1, 0)]
    elif gate.kind == 'CZ':
        new[idx(1, 1)] = -psi[idx(1, 1)]
    else:
        raise ValueError(f"Gate {gate.kind} is not a unitary")
    return new


def run(circuit: Circuit, initial: DenseState) -> DenseState:
    """Apply a measurement-free circuit exactly"""
    if circuit.num_qubits > initial.n:
        raise ValueError(f"Circuit needs {circuit.num_qubits} qubits, state has {initial.n}")
    n = initial.n
    psi = initial.amplitudes.reshape([2] * n)
    for gate in circuit:
        if gate.kind == 'MEASURE':
            raise ValueError("MEASURE is not allowed in the state-vector oracle; use probability_one")
        psi = _apply_gate(psi, gate, n)
    return DenseState(n, psi.reshape(-1))


def apply_pauli(state: DenseState, p: PauliOp) -> np.ndarray:
    """Unnormalised vector p|state>"""
    if p.n != state.n:
        raise ValueError(f"Pauli acts on {p.n} qubits, state has {state.n}")
    psi = state.amplitudes.reshape([2] * state.n)
    for q, letter in enumerate(p.letters()):
        if letter != 'I':
            psi = _apply_single(psi, _MATRICES[letter], q)
    return (1j ** p.phase) * psi.reshape(-1)


def expectation(state: DenseState, p: PauliOp) -> float:
    """<state|p|state>, real for Hermitian p"""
    value = np.vdot(state.amplitudes, apply_pauli(state, p))
    return float(value.real)


def fidelity(a: DenseState, b: DenseState) -> float:
    """|<a|b>|^2"""
    if a.n != b.n:
        raise ValueError(f"State size mismatch: {a.n} != {b.n}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def probability_one(state: DenseState, qubit: int) -> float:
    """Probability that a Z measurement of the 0-based qubit gives 1"""
    if not 0 <= qubit < state.n:
        raise IndexError(f"Qubit {qubit} out of range 0..{state.n - 1}")
    probs = np.abs(state.amplitudes.reshape([2] * state.n)) ** 2
    return float(np.take(probs, 1, axis=qubit).sum())


def pauli_matrix(p: PauliOp) -> np.ndarray:
    """Explicit 2^n x 2^n matrix, qubit 1 as the leftmost Kronecker factor"""
    _check_size(p.n)
    matrix = np.eye(1, dtype=complex)
    for letter in p.letters():
        matrix = np.kron(matrix, _MATRICES[letter])
    return (1j ** p.phase) * matrix
