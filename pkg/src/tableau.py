"""
Stabilizer tableau simulator (destabilizer/stabilizer form)

Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers; each row is an
X-bit vector, a Z-bit vector and a sign bit. Qubit arguments are 0-based,
matching Gate operands.
"""
from typing import List, NamedTuple, Optional
import logging

import numpy as np

from config.settings import SIMULATION_CONFIG
from .circuit import Circuit, Gate
from .pauli import PauliOp, phase_exponent

logger = logging.getLogger(__name__)


class TableauInvariantError(RuntimeError):
    """Raised by the debug validator when the row structure is broken"""


class MeasurementResult(NamedTuple):
    outcome: int
    deterministic: bool


def _row_product(x1, z1, r1, x2, z2, r2):
    """Signed product of two commuting rows: (x1,z1,r1) * (x2,z2,r2)"""
    exponent = 2 * int(r1) + 2 * int(r2) + int(phase_exponent(x1, z1, x2, z2).sum())
    return x1 ^ x2, z1 ^ z2, (exponent % 4) // 2


class Tableau:
    """Stabilizer state of n qubits, initialised to |0...0>"""

    def __init__(self, n: int, debug: Optional[bool] = None):
        if n < 1:
            raise ValueError(f"Tableau needs at least one qubit, got {n}")
        self.n = int(n)
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1
        self.z[n + idx, idx] = 1
        self.debug = SIMULATION_CONFIG['tableau_debug'] if debug is None else debug

    def copy(self) -> 'Tableau':
        clone = Tableau.__new__(Tableau)
        clone.n = self.n
        clone.x = self.x.copy()
        clone.z = self.z.copy()
        clone.r = self.r.copy()
        clone.debug = self.debug
        return clone

    # -- gates -------------------------------------------------------------

    def _hadamard(self, a):
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def _phase(self, a):
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def _phase_dagger(self, a):
        self.r ^= self.x[:, a] & (self.z[:, a] ^ 1)
        self.z[:, a] ^= self.x[:, a]

    def _cnot(self, a, b):
        self.r ^= self.x[:, a] & self.z[:, b] & (self.x[:, b] ^ self.z[:, a] ^ 1)
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def _cz(self, a, b):
        self._hadamard(b)
        self._cnot(a, b)
        self._hadamard(b)

    def apply_gate(self, gate: Gate):
        """Conjugate every row by a unitary gate"""
        for q in gate.operands:
            if q >= self.n:
                raise IndexError(f"Gate {gate} exceeds {self.n} qubits")
        kind = gate.kind
        ops = gate.operands
        if kind == 'H':
            self._hadamard(ops[0])
        elif kind == 'S':
            self._phase(ops[0])
        elif kind == 'SDG':
            self._phase_dagger(ops[0])
        elif kind == 'X':
            self.r ^= self.z[:, ops[0]]
        elif kind == 'Z':
            self.r ^= self.x[:, ops[0]]
        elif kind == 'Y':
            self.r ^= self.x[:, ops[0]] ^ self.z[:, ops[0]]
        elif kind == 'CNOT':
            self._cnot(*ops)
        elif kind == 'CZ':
            self._cz(*ops)
        else:
            raise ValueError(f"Gate {kind} cannot be applied as a unitary; use measure()")
        self._after_update()

    def apply_circuit(self, circuit: Circuit):
        """Apply a measurement-free circuit"""
        for gate in circuit:
            self.apply_gate(gate)

    def apply_error(self, error: PauliOp):
        """Multiply the state by a Pauli error (only signs change)"""
        if error.n != self.n:
            raise ValueError(f"Error acts on {error.n} qubits, tableau has {self.n}")
        self.r ^= self._anticommutation(error)
        self._after_update()

    # -- measurement -------------------------------------------------------

    def _anticommutation(self, p: PauliOp) -> np.ndarray:
        """1 for every row anticommuting with p"""
        return ((self.x.astype(np.int64) @ p.z_bits + self.z.astype(np.int64) @ p.x_bits) % 2).astype(np.uint8)

    def _rowsum(self, h, i):
        self.x[h], self.z[h], self.r[h] = _row_product(
            self.x[i], self.z[i], self.r[i], self.x[h], self.z[h], self.r[h])

    def _stabilizer_sign(self, p: PauliOp, anti: np.ndarray) -> int:
        """Sign bit of the stabilizer element equal to unsigned p (p commutes with all stabilizers)"""
        n = self.n
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        r = 0
        for i in np.flatnonzero(anti[:n]):
            x, z, r = _row_product(self.x[n + i], self.z[n + i], self.r[n + i], x, z, r)
        return int(r)

    def measure_pauli(self, p: PauliOp, rng: np.random.Generator) -> MeasurementResult:
        """
        Measure a Hermitian Pauli observable

        Args:
            p: observable on all n qubits, phase +1 or -1
            rng: random stream consumed only by non-deterministic outcomes

        Returns:
            MeasurementResult: outcome bit b (eigenvalue (-1)^b) and whether it was forced
        """
        if p.n != self.n:
            raise ValueError(f"Observable acts on {p.n} qubits, tableau has {self.n}")
        if not p.is_hermitian():
            raise ValueError(f"Observable {p} is not Hermitian")
        if p.is_identity():
            return MeasurementResult(p.phase // 2, True)
        n = self.n
        flip = p.phase // 2
        anti = self._anticommutation(p)
        stab_hits = np.flatnonzero(anti[n:])

        if stab_hits.size == 0:
            outcome = self._stabilizer_sign(p, anti) ^ flip
            logger.debug(f"Deterministic measurement of {p}: {outcome}")
            return MeasurementResult(outcome, True)

        pivot = n + int(stab_hits[0])
        for i in np.flatnonzero(anti):
            if i != pivot:
                self._rowsum(int(i), pivot)
        self.x[pivot - n] = self.x[pivot]
        self.z[pivot - n] = self.z[pivot]
        self.r[pivot - n] = self.r[pivot]
        outcome = int(rng.integers(2))
        self.x[pivot] = p.x_bits
        self.z[pivot] = p.z_bits
        self.r[pivot] = outcome ^ flip
        logger.debug(f"Random measurement of {p}: {outcome}")
        self._after_update()
        return MeasurementResult(outcome, False)

    def measure(self, qubit: int, rng: np.random.Generator) -> MeasurementResult:
        """Z-basis measurement of a 0-based qubit"""
        if not 0 <= qubit < self.n:
            raise IndexError(f"Qubit {qubit} out of range 0..{self.n - 1}")
        z = np.zeros(self.n, dtype=np.uint8)
        z[qubit] = 1
        return self.measure_pauli(PauliOp(np.zeros(self.n, dtype=np.uint8), z), rng)

    def reset(self, qubit: int, rng: np.random.Generator):
        """Return a qubit to |0>"""
        if self.measure(qubit, rng).outcome:
            self.apply_gate(Gate('X', [qubit]))

    def pauli_expectation(self, p: PauliOp) -> int:
        """<p> on the current state: +1, -1, or 0 when p anticommutes with a stabilizer"""
        if p.n != self.n:
            raise ValueError(f"Observable acts on {p.n} qubits, tableau has {self.n}")
        if not p.is_hermitian():
            raise ValueError(f"Observable {p} is not Hermitian")
        anti = self._anticommutation(p)
        if anti[self.n:].any():
            return 0
        sign = self._stabilizer_sign(p, anti) ^ (p.phase // 2)
        return -1 if sign else 1

    def run(self, circuit: Circuit, rng: np.random.Generator) -> List[int]:
        """Execute a circuit (narrower circuits act on the leading qubits) and return measurement outcomes in order"""
        if circuit.num_qubits > self.n:
            raise ValueError(f"Circuit needs {circuit.num_qubits} qubits, tableau has {self.n}")
        outcomes = []
        for gate in circuit:
            if gate.kind == 'MEASURE':
                outcomes.append(self.measure(gate.operands[0], rng).outcome)
            else:
                self.apply_gate(gate)
        return outcomes

    # -- inspection --------------------------------------------------------

    def stabilizers(self) -> List[PauliOp]:
        n = self.n
        return [PauliOp(self.x[n + i], self.z[n + i], 2 * int(self.r[n + i])) for i in range(n)]

    def destabilizers(self) -> List[PauliOp]:
        return [PauliOp(self.x[i], self.z[i], 2 * int(self.r[i])) for i in range(self.n)]

    def canonical_stabilizers(self) -> List[PauliOp]:
        """
        Stabilizer generators in reduced row echelon form

        Columns are eliminated in the order x_1..x_n, z_1..z_n, so two tableaus
        describe the same state iff their canonical lists are equal.
        """
        n = self.n
        x = self.x[n:].copy()
        z = self.z[n:].copy()
        r = self.r[n:].copy()
        row = 0
        for col in range(2 * n):
            bits = x[:, col] if col < n else z[:, col - n]
            candidates = [i for i in range(row, n) if bits[i]]
            if not candidates:
                continue
            pivot = candidates[0]
            if pivot != row:
                x[[row, pivot]] = x[[pivot, row]]
                z[[row, pivot]] = z[[pivot, row]]
                r[[row, pivot]] = r[[pivot, row]]
            for i in range(n):
                bits = x[:, col] if col < n else z[:, col - n]
                if i != row and bits[i]:
                    x[i], z[i], r[i] = _row_product(x[row], z[row], r[row], x[i], z[i], r[i])
            row += 1
            if row == n:
                break
        return [PauliOp(x[i], z[i], 2 * int(r[i])) for i in range(n)]

    def same_state(self, other: 'Tableau') -> bool:
        return self.n == other.n and self.canonical_stabilizers() == other.canonical_stabilizers()

    def dump(self) -> str:
        """Stabilizer rows as signed Pauli strings, one per line"""
        return '\n'.join(str(p) for p in self.stabilizers())

    def check_invariants(self) -> List[str]:
        """Describe every violated row relation (empty when the tableau is sound)"""
        n = self.n
        x = self.x.astype(np.int64)
        z = self.z.astype(np.int64)
        gram = (x @ z.T + z @ x.T) % 2
        problems = []
        if gram[n:, n:].any():
            problems.append("stabilizer rows do not pairwise commute")
        if not np.array_equal(gram[:n, n:], np.eye(n, dtype=np.int64)):
            problems.append("destabilizer/stabilizer pairing broken")
        if gram[:n, :n].any():
            problems.append("destabilizer rows do not pairwise commute")
        return problems

    def _after_update(self):
        if self.debug:
            problems = self.check_invariants()
            if problems:
                raise TableauInvariantError('; '.join(problems))

    def __str__(self):
        return f"Tableau(n={self.n})"

    def __repr__(self):
        return self.__str__()
