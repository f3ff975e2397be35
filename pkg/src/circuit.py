"""
Circuit model and the line-oriented `.stab` circuit language

Grammar (UTF-8, `#` starts a comment):

    qubits N
    h q | s q | sdg q | x q | y q | z q | measure q
    cnot c t | cz c t

Indices in the text are 1-based; Gate operands are 0-based.
"""
from typing import Dict, Any, Iterable, Iterator, List, Optional, Sequence
from pathlib import Path
import logging

import numpy as np

logger = logging.getLogger(__name__)

GATE_ARITY = {
    'H': 1, 'S': 1, 'SDG': 1, 'X': 1, 'Y': 1, 'Z': 1, 'MEASURE': 1,
    'CNOT': 2, 'CZ': 2,
}

# DSL mnemonic -> gate kind
MNEMONICS = {
    'h': 'H', 's': 'S', 'sdg': 'SDG', 'x': 'X', 'y': 'Y', 'z': 'Z',
    'measure': 'MEASURE', 'cnot': 'CNOT', 'cz': 'CZ',
}
_KIND_TO_MNEMONIC = {kind: mnemonic for mnemonic, kind in MNEMONICS.items()}

# Gate calls of the graph-state test script and the mnemonic each maps to
SCRIPT_ALIASES = {
    'hadamard': 'h',
    'cnot': 'cnot',
    'cphase': 'cz',
    'bitflip': 'x',
    'phaseflip': 'z',
    'measure': 'measure',
}

UNITARY_KINDS = [kind for kind in GATE_ARITY if kind != 'MEASURE']


class CircuitParseError(ValueError):
    """Raised for malformed circuit text, carries the 1-based line number"""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class Gate:
    """A single gate: kind plus 0-based operands, control first"""

    __slots__ = ('kind', 'operands')

    def __init__(self, kind: str, operands: Sequence[int]):
        kind = kind.upper()
        if kind not in GATE_ARITY:
            raise ValueError(f"Unknown gate kind '{kind}'")
        operands = tuple(int(q) for q in operands)
        if len(operands) != GATE_ARITY[kind]:
            raise ValueError(f"Gate {kind} takes {GATE_ARITY[kind]} operand(s), got {len(operands)}")
        if any(q < 0 for q in operands):
            raise ValueError(f"Negative operand in {kind}{operands}")
        if len(operands) == 2 and operands[0] == operands[1]:
            raise ValueError(f"Gate {kind} needs distinct operands, got {operands[0] + 1} twice")
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'operands', operands)

    def __setattr__(self, name, value):
        raise AttributeError("Gate is immutable")

    def inverse(self) -> 'Gate':
        """Inverse gate (every supported unitary except S is self-inverse)"""
        if self.kind == 'MEASURE':
            raise ValueError("MEASURE has no inverse")
        if self.kind == 'S':
            return Gate('SDG', self.operands)
        if self.kind == 'SDG':
            return Gate('S', self.operands)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'operands': list(self.operands)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Gate':
        return cls(data['kind'], data['operands'])

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        return self.kind == other.kind and self.operands == other.operands

    def __hash__(self):
        return hash((self.kind, self.operands))

    def __str__(self):
        return ' '.join([_KIND_TO_MNEMONIC[self.kind]] + [str(q + 1) for q in self.operands])

    def __repr__(self):
        return f"Gate('{self.kind}', {self.operands})"


class Circuit:
    """Ordered gate list over a fixed register width"""

    def __init__(self, num_qubits: int, gates: Optional[Iterable[Gate]] = None):
        if num_qubits < 1:
            raise ValueError(f"Circuit needs at least one qubit, got {num_qubits}")
        self.num_qubits = int(num_qubits)
        self.gates: List[Gate] = []
        for gate in gates or []:
            self.append(gate)

    def append(self, gate: Gate) -> 'Circuit':
        """Append a gate, checking operands against the register width"""
        for q in gate.operands:
            if q >= self.num_qubits:
                raise ValueError(f"Operand {q + 1} of {gate} exceeds {self.num_qubits} qubits")
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> 'Circuit':
        for gate in gates:
            self.append(gate)
        return self

    def inverse(self) -> 'Circuit':
        """Gates inverted in reverse order"""
        return Circuit(self.num_qubits, [g.inverse() for g in reversed(self.gates)])

    def measured_qubits(self) -> List[int]:
        return [g.operands[0] for g in self.gates if g.kind == 'MEASURE']

    def measurement_groups(self) -> List[int]:
        """Sizes of the runs of consecutive MEASURE gates, in order"""
        groups = []
        previous = None
        for gate in self.gates:
            if gate.kind == 'MEASURE':
                if previous == 'MEASURE':
                    groups[-1] += 1
                else:
                    groups.append(1)
            previous = gate.kind
        return groups

    def to_dict(self) -> Dict[str, Any]:
        return {'num_qubits': self.num_qubits, 'gates': [g.to_dict() for g in self.gates]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Circuit':
        return cls(data['num_qubits'], [Gate.from_dict(g) for g in data['gates']])

    def __len__(self):
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.num_qubits == other.num_qubits and self.gates == other.gates

    def __str__(self):
        return f"Circuit(num_qubits={self.num_qubits}, gates={len(self.gates)})"

    def __repr__(self):
        return self.__str__()


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0].strip()


def parse(text: str) -> Circuit:
    """
    Parse `.stab` text into a Circuit

    Args:
        text: circuit source; the first meaningful line must be `qubits N`

    Returns:
        Circuit: parsed circuit with 0-based operands

    Raises:
        CircuitParseError: on any malformed line, with its line number
    """
    circuit = None
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        tokens = line.split()
        mnemonic = tokens[0].lower()

        if circuit is None:
            if mnemonic != 'qubits' or len(tokens) != 2:
                raise CircuitParseError(line_number, "expected header 'qubits N'")
            try:
                count = int(tokens[1])
            except ValueError:
                raise CircuitParseError(line_number, f"invalid qubit count '{tokens[1]}'")
            if count < 1:
                raise CircuitParseError(line_number, f"qubit count must be positive, got {count}")
            circuit = Circuit(count)
            continue

        if mnemonic == 'qubits':
            raise CircuitParseError(line_number, "duplicate 'qubits' header")
        mnemonic = SCRIPT_ALIASES.get(mnemonic, mnemonic)
        if mnemonic not in MNEMONICS:
            raise CircuitParseError(line_number, f"unknown gate '{tokens[0]}'")
        kind = MNEMONICS[mnemonic]

        args = tokens[1:]
        if len(args) != GATE_ARITY[kind]:
            raise CircuitParseError(
                line_number, f"'{mnemonic}' takes {GATE_ARITY[kind]} operand(s), got {len(args)}")
        operands = []
        for arg in args:
            try:
                q = int(arg)
            except ValueError:
                raise CircuitParseError(line_number, f"invalid qubit index '{arg}'")
            if not 1 <= q <= circuit.num_qubits:
                raise CircuitParseError(line_number, f"qubit {q} out of range 1..{circuit.num_qubits}")
            operands.append(q - 1)
        if len(operands) == 2 and operands[0] == operands[1]:
            raise CircuitParseError(line_number, f"'{mnemonic}' needs distinct operands")
        circuit.append(Gate(kind, operands))

    if circuit is None:
        raise CircuitParseError(1, "missing 'qubits N' header")
    logger.debug(f"Parsed circuit with {circuit.num_qubits} qubits and {len(circuit)} gates")
    return circuit


def emit(circuit: Circuit) -> str:
    """Canonical text: header, then one lowercase gate per line with 1-based indices"""
    lines = [f"qubits {circuit.num_qubits}"]
    lines.extend(str(gate) for gate in circuit.gates)
    return '\n'.join(lines)


def load(path) -> Circuit:
    """Read and parse a `.stab` file"""
    with open(Path(path), 'r', encoding='utf-8') as f:
        return parse(f.read())


def hcnot(control: int, target: int) -> List[Gate]:
    """HCNOT on 0-based qubits: copies the control in the X basis"""
    if control == target:
        raise ValueError(f"HCNOT needs distinct operands, got {control + 1} twice")
    return [Gate('H', [control]), Gate('CNOT', [control, target]), Gate('H', [control])]


def random_clifford(num_qubits: int, depth: int, rng: np.random.Generator,
                    kinds: Optional[Sequence[str]] = None) -> Circuit:
    """Random unitary Clifford circuit drawn from `kinds` (default: all unitary kinds)"""
    kinds = list(kinds or UNITARY_KINDS)
    if num_qubits < 2:
        kinds = [k for k in kinds if GATE_ARITY[k] == 1]
    circuit = Circuit(num_qubits)
    for _ in range(depth):
        kind = kinds[int(rng.integers(len(kinds)))]
        if GATE_ARITY[kind] == 1:
            circuit.append(Gate(kind, [int(rng.integers(num_qubits))]))
        else:
            control, target = rng.choice(num_qubits, size=2, replace=False)
            circuit.append(Gate(kind, [int(control), int(target)]))
    return circuit
