"""
Pauli group elements in symplectic (X-bits, Z-bits, phase) form

Qubit indices are 1-based in every user-facing call and string, and 0-based
in the underlying bit arrays: qubit q lives at array position q - 1. The
leftmost character of a Pauli string is qubit 1.
"""
from typing import Dict, Any, Iterable, List
import logging
import re

import numpy as np

logger = logging.getLogger(__name__)

# (x, z) -> letter
_LETTERS = {(0, 0): 'I', (1, 0): 'X', (0, 1): 'Z', (1, 1): 'Y'}
_BITS = {letter: bits for bits, letter in _LETTERS.items()}
_PHASE_PREFIX = ['+', '+i', '-', '-i']
_PAULI_PATTERN = re.compile(r'^\s*([+-]?)(i?)([IXYZ]*)\s*$')


def phase_exponent(x1, z1, x2, z2) -> np.ndarray:
    """
    Per-qubit power of i picked up by sigma(x1, z1) * sigma(x2, z2)

    Works elementwise on equally shaped 0/1 arrays and returns values in {-1, 0, 1}.
    """
    x1 = np.asarray(x1, dtype=np.int8)
    z1 = np.asarray(z1, dtype=np.int8)
    x2 = np.asarray(x2, dtype=np.int8)
    z2 = np.asarray(z2, dtype=np.int8)
    return np.where(
        (x1 == 1) & (z1 == 1), z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1),
                 np.where(z1 == 1, x2 * (1 - 2 * z2), 0)))


class PauliOp:
    """An n-qubit Pauli operator i^phase * (sigma_1 x ... x sigma_n)"""

    __slots__ = ('n', 'x_bits', 'z_bits', 'phase')

    def __init__(self, x_bits: Iterable[int], z_bits: Iterable[int], phase: int = 0):
        x = np.array(list(x_bits) if not isinstance(x_bits, np.ndarray) else x_bits, dtype=np.uint8).reshape(-1)
        z = np.array(list(z_bits) if not isinstance(z_bits, np.ndarray) else z_bits, dtype=np.uint8).reshape(-1)
        if x.size != z.size:
            raise ValueError(f"x_bits and z_bits differ in length ({x.size} != {z.size})")
        x &= 1
        z &= 1
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, 'n', int(x.size))
        object.__setattr__(self, 'x_bits', x)
        object.__setattr__(self, 'z_bits', z)
        object.__setattr__(self, 'phase', int(phase) % 4)

    def __setattr__(self, name, value):
        raise AttributeError("PauliOp is immutable")

    @classmethod
    def identity(cls, n: int) -> 'PauliOp':
        """Identity operator on n qubits"""
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_string(cls, text: str) -> 'PauliOp':
        """
        Parse a Pauli string such as "XZZXI", "+XZZXI", "-iYZ"

        Args:
            text: optional sign, optional 'i', then one letter per qubit

        Returns:
            PauliOp: the parsed operator
        """
        match = _PAULI_PATTERN.match(text)
        if not match:
            raise ValueError(f"Invalid Pauli string '{text}'")
        sign, imag, letters = match.groups()
        if not letters:
            raise ValueError(f"Pauli string '{text}' has no qubits")
        phase = (2 if sign == '-' else 0) + (1 if imag else 0)
        x = [_BITS[c][0] for c in letters]
        z = [_BITS[c][1] for c in letters]
        return cls(x, z, phase)

    def letters(self) -> str:
        """Unsigned letter string, qubit 1 first"""
        return ''.join(_LETTERS[(int(x), int(z))] for x, z in zip(self.x_bits, self.z_bits))

    def kind_at(self, qubit: int) -> str:
        """Pauli letter acting on a 1-based qubit"""
        _check_qubit(self.n, qubit)
        return _LETTERS[(int(self.x_bits[qubit - 1]), int(self.z_bits[qubit - 1]))]

    def support(self) -> List[int]:
        """1-based qubits carrying a non-identity factor"""
        return [int(q) + 1 for q in np.flatnonzero(self.x_bits | self.z_bits)]

    def unsigned(self) -> 'PauliOp':
        """Same operator with phase dropped"""
        return PauliOp(self.x_bits, self.z_bits, 0)

    def is_identity(self) -> bool:
        """True when every factor is sigma_I (phase ignored)"""
        return not (self.x_bits.any() or self.z_bits.any())

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def embed(self, width: int, offset: int = 0) -> 'PauliOp':
        """Place this operator on qubits offset+1..offset+n of a width-qubit register"""
        if offset < 0 or offset + self.n > width:
            raise ValueError(f"Cannot embed {self.n}-qubit operator at offset {offset} into {width} qubits")
        x = np.zeros(width, dtype=np.uint8)
        z = np.zeros(width, dtype=np.uint8)
        x[offset:offset + self.n] = self.x_bits
        z[offset:offset + self.n] = self.z_bits
        return PauliOp(x, z, self.phase)

    def restrict(self, count: int) -> 'PauliOp':
        """Keep only the first count qubits"""
        return PauliOp(self.x_bits[:count], self.z_bits[:count], self.phase)

    def symplectic(self) -> np.ndarray:
        """Concatenated [x | z] bit vector"""
        return np.concatenate([self.x_bits, self.z_bits])

    def to_dict(self) -> Dict[str, Any]:
        """Convert PauliOp to dictionary"""
        return {
            'n': self.n,
            'x_bits': ''.join(str(int(b)) for b in self.x_bits),
            'z_bits': ''.join(str(int(b)) for b in self.z_bits),
            'phase': self.phase,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PauliOp':
        """Create PauliOp from dictionary"""
        return cls([int(c) for c in data['x_bits']], [int(c) for c in data['z_bits']], data.get('phase', 0))

    def label(self) -> str:
        """
        Subscript label in the style of the syndrome tables, e.g. "X3" or "X1X2"

        Identity renders as "I".
        """
        parts = [f"{self.kind_at(q)}{q}" for q in self.support()]
        return ''.join(parts) if parts else 'I'

    def __mul__(self, other: 'PauliOp') -> 'PauliOp':
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (self.n == other.n and self.phase == other.phase
                and np.array_equal(self.x_bits, other.x_bits)
                and np.array_equal(self.z_bits, other.z_bits))

    def __hash__(self):
        return hash((self.n, self.phase, self.x_bits.tobytes(), self.z_bits.tobytes()))

    def __str__(self):
        return f"{_PHASE_PREFIX[self.phase]}{self.letters()}"

    def __repr__(self):
        return f"PauliOp('{self}')"


def _check_qubit(n: int, qubit: int):
    if not 1 <= qubit <= n:
        raise IndexError(f"Qubit {qubit} out of range 1..{n}")


def _check_sizes(a: PauliOp, b: PauliOp):
    if a.n != b.n:
        raise ValueError(f"Pauli size mismatch: {a.n} != {b.n}")


def single(n: int, qubit: int, kind: str) -> PauliOp:
    """Weight-1 operator with `kind` (X, Y or Z) on a 1-based qubit"""
    _check_qubit(n, qubit)
    kind = kind.upper()
    if kind not in ('X', 'Y', 'Z'):
        raise ValueError(f"Invalid Pauli kind '{kind}'. Must be one of: X, Y, Z")
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    x[qubit - 1], z[qubit - 1] = _BITS[kind]
    return PauliOp(x, z)


def multiply(a: PauliOp, b: PauliOp) -> PauliOp:
    """Product a*b with exact phase"""
    _check_sizes(a, b)
    exponent = int(phase_exponent(a.x_bits, a.z_bits, b.x_bits, b.z_bits).sum())
    return PauliOp(a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, a.phase + b.phase + exponent)


def commutes(a: PauliOp, b: PauliOp) -> bool:
    """True iff the symplectic inner product of a and b vanishes"""
    _check_sizes(a, b)
    product = int(np.dot(a.x_bits, b.z_bits)) + int(np.dot(a.z_bits, b.x_bits))
    return product % 2 == 0


def weight(a: PauliOp) -> int:
    """Number of non-identity tensor factors"""
    return int(np.count_nonzero(a.x_bits | a.z_bits))


def product(ops: Iterable[PauliOp], n: int) -> PauliOp:
    """Ordered product of ops, identity for an empty sequence"""
    result = PauliOp.identity(n)
    for op in ops:
        result = multiply(result, op)
    return result


def all_unsigned(n: int) -> Iterable[PauliOp]:
    """Every unsigned n-qubit Pauli, identity first"""
    for index in range(4 ** n):
        letters = []
        for _ in range(n):
            letters.append('IXZY'[index % 4])
            index //= 4
        yield PauliOp.from_string(''.join(reversed(letters)))
