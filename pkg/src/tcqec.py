"""
Correction of one time-correlated error plus one new error per cycle

The qubit corrected in the previous cycle (j) is copied onto two extra
ancillas: A in the Z basis (CNOT) and B in the X basis (HCNOT). The extended
generators let one syndrome measurement see errors on the codeword and on
the copies; after disentangling, A reads 1 for a relapsed bit-flip and B
reads 1 for a relapsed phase-flip.

Register layout (1-based): data 1..n, A = n+1, B = n+2, then one syndrome
ancilla per generator.
"""
from typing import Dict, Any, Iterable, List, NamedTuple, Optional, Tuple, Union
import logging

import numpy as np

from config.settings import PAULI_KINDS
from .circuit import Circuit, Gate, hcnot
from .codes import (
    StabilizerCode, Syndrome, syndrome_of, decode_single, prepare_codeword,
)
from .pauli import PauliOp, single, product
from .tableau import Tableau

logger = logging.getLogger(__name__)

NO_ERROR = 'no_error'
SINGLE = 'single'
DOUBLE = 'double'
UNCORRECTABLE = 'uncorrectable'
VERDICTS = [NO_ERROR, SINGLE, DOUBLE, UNCORRECTABLE]

# (A, B) outcome -> type of the relapsed error on the tracked qubit
ANCILLA_TYPES = {(1, 0): 'X', (0, 1): 'Z', (1, 1): 'Y'}


def register_width(code: StabilizerCode) -> int:
    """Data qubits, the two copy ancillas and one syndrome ancilla per generator"""
    return code.n + 2 + code.num_generators


class InjectedError:
    """A single-qubit Pauli error placed on a data qubit (1-based) or on ancilla 'A'/'B'"""

    def __init__(self, target: Union[int, str], kind: str, correlated: bool = False):
        kind = kind.upper()
        if kind not in PAULI_KINDS:
            raise ValueError(f"Invalid error kind '{kind}'. Must be one of: {', '.join(PAULI_KINDS)}")
        if isinstance(target, str):
            if target.upper() in ('A', 'B'):
                target = target.upper()
            else:
                try:
                    target = int(target)
                except ValueError:
                    raise ValueError(f"Invalid error target '{target}'. Must be a qubit number, A or B")
        if isinstance(target, int) and target < 1:
            raise ValueError(f"Qubit numbers start at 1, got {target}")
        self.target = target
        self.kind = kind
        self.correlated = correlated

    def position(self, n: int) -> int:
        """1-based register position for a code of length n"""
        if self.target == 'A':
            return n + 1
        if self.target == 'B':
            return n + 2
        if self.target > n:
            raise ValueError(f"Error target {self.target} exceeds code length {n}")
        return self.target

    def to_pauli(self, n: int, width: int) -> PauliOp:
        return single(width, self.position(n), self.kind)

    def on_data(self) -> bool:
        return isinstance(self.target, int)

    def to_dict(self) -> Dict[str, Any]:
        return {'target': self.target, 'kind': self.kind, 'correlated': self.correlated}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'InjectedError':
        return cls(data['target'], data['kind'], data.get('correlated', False))

    def __eq__(self, other):
        if not isinstance(other, InjectedError):
            return NotImplemented
        return (self.target, self.kind, self.correlated) == (other.target, other.kind, other.correlated)

    def __str__(self):
        return f"{self.kind}{self.target}"

    def __repr__(self):
        return f"InjectedError({self.target!r}, '{self.kind}', correlated={self.correlated})"


class ExtendedProtocol:
    """A code plus the tracked qubit j, the copy ancillas and the circuits around them"""

    def __init__(self, code: StabilizerCode, tracked_qubit: int,
                 entangle_circuit: Circuit, disentangle_circuit: Circuit,
                 extended_generators: List[PauliOp]):
        self.code = code
        self.tracked_qubit = tracked_qubit
        self.ancilla_a = code.n + 1
        self.ancilla_b = code.n + 2
        self.width = register_width(code)
        self.entangle_circuit = entangle_circuit
        self.disentangle_circuit = disentangle_circuit
        self.extended_generators = extended_generators

    def syndrome_ancilla(self, index: int) -> int:
        """0-based register position of the ancilla measuring extended generator `index` (0-based)"""
        return self.code.n + 2 + index

    def to_dict(self) -> Dict[str, Any]:
        return {
            'code': self.code.name,
            'tracked_qubit': self.tracked_qubit,
            'ancilla_a': self.ancilla_a,
            'ancilla_b': self.ancilla_b,
            'entangle': [str(g) for g in self.entangle_circuit],
            'disentangle': [str(g) for g in self.disentangle_circuit],
            'extended_generators': [str(g) for g in self.extended_generators],
        }

    def __str__(self):
        return f"ExtendedProtocol(code='{self.code.name}', tracked_qubit={self.tracked_qubit})"

    def __repr__(self):
        return self.__str__()


class CycleOutcome(NamedTuple):
    sigma: Syndrome
    ancilla: Tuple[int, int]


class CorrectionDecision:
    """Verdict of one cycle with the errors it names and the correction to apply on the data qubits"""

    def __init__(self, verdict: str, errors: Iterable[PauliOp] = (), n: int = 0,
                 sigma: Optional[Syndrome] = None, ancilla: Optional[Tuple[int, int]] = None):
        if verdict not in VERDICTS:
            raise ValueError(f"Invalid verdict '{verdict}'. Must be one of: {', '.join(VERDICTS)}")
        self.verdict = verdict
        self.errors = list(errors)
        self.sigma = sigma
        self.ancilla = ancilla
        if verdict == UNCORRECTABLE:
            self.correction = None
        else:
            self.correction = product(self.errors, n).unsigned() if n else None

    @property
    def correlated_error(self) -> Optional[PauliOp]:
        return self.errors[0] if self.verdict == DOUBLE else None

    @property
    def new_error(self) -> Optional[PauliOp]:
        return self.errors[1] if self.verdict == DOUBLE else None

    def corrected_qubit(self) -> Optional[int]:
        """Qubit to track in the next cycle: the new error's qubit for a double verdict"""
        if self.verdict == SINGLE:
            return self.errors[0].support()[0]
        if self.verdict == DOUBLE:
            return self.errors[1].support()[0]
        return None

    def message(self) -> str:
        if self.verdict == NO_ERROR:
            return "no error detected"
        if self.verdict == UNCORRECTABLE:
            return "uncorrectable: two or more new errors"
        parts = [f"{e.kind_at(e.support()[0])} on qubit {e.support()[0]}" for e in self.errors]
        return "correct " + ' and '.join(parts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict,
            'errors': [e.label() for e in self.errors],
            'correction': self.correction.label() if self.correction is not None else None,
            'sigma': str(self.sigma) if self.sigma is not None else None,
            'ancilla': ''.join(str(b) for b in self.ancilla) if self.ancilla is not None else None,
        }

    def __str__(self):
        return f"CorrectionDecision({self.verdict}: {self.message()})"

    def __repr__(self):
        return self.__str__()


def extended_generators(code: StabilizerCode, j: int) -> List[PauliOp]:
    """
    Generators widened to n+2 qubits for tracked qubit j

    X at j adds X on A, Z at j adds X on B, Y at j adds X on both.
    """
    if not 1 <= j <= code.n:
        raise IndexError(f"Tracked qubit {j} out of range 1..{code.n}")
    n = code.n
    result = []
    for g in code.generators:
        x = np.zeros(n + 2, dtype=np.uint8)
        z = np.zeros(n + 2, dtype=np.uint8)
        x[:n] = g.x_bits
        z[:n] = g.z_bits
        x[n] = g.x_bits[j - 1]
        x[n + 1] = g.z_bits[j - 1]
        result.append(PauliOp(x, z, g.phase))
    return result


def precedence_window(code: StabilizerCode, j: int) -> List[Tuple[PauliOp, PauliOp]]:
    """
    (correlated, new) pairs whose combined syndrome equals a single-error syndrome on j

    Such pairs would be taken for a lone error on j by the first decision rule.
    """
    n = code.n
    on_j = {syndrome_of(code, single(n, j, kind)) for kind in PAULI_KINDS}
    window = []
    for corr_kind in PAULI_KINDS:
        corr = single(n, j, corr_kind)
        for i in range(1, n + 1):
            if i == j:
                continue
            for kind in PAULI_KINDS:
                new = single(n, i, kind)
                if syndrome_of(code, corr * new) in on_j:
                    window.append((corr, new))
    return window


def build_protocol(code: StabilizerCode, j: int) -> ExtendedProtocol:
    """Entangle/disentangle circuits and extended generators around tracked qubit j"""
    if not 1 <= j <= code.n:
        raise IndexError(f"Tracked qubit {j} out of range 1..{code.n}")
    n = code.n
    width = n + 2
    entangle = Circuit(width, [Gate('CNOT', [j - 1, n])] + hcnot(j - 1, n + 1))
    disentangle = entangle.inverse()
    protocol = ExtendedProtocol(code, j, entangle, disentangle, extended_generators(code, j))

    window = precedence_window(code, j)
    if window:
        logger.warning(f"{code.name}, j={j}: {len(window)} (correlated, new) pairs share a syndrome "
                       f"with a single error on qubit {j}")
    logger.info(f"Built extended protocol for {code.name} tracking qubit {j}")
    return protocol


def syndrome_gadget(generator: PauliOp, ancilla: int, measure: bool = True) -> List[Gate]:
    """
    Ancilla-controlled generator between two Hadamards, then a Z measurement

    `ancilla` is a 0-based position outside the generator's support. Y
    factors are controlled through SDG, CNOT, S.
    """
    gates = [Gate('H', [ancilla])]
    for q in generator.support():
        target = q - 1
        kind = generator.kind_at(q)
        if kind == 'X':
            gates.append(Gate('CNOT', [ancilla, target]))
        elif kind == 'Z':
            gates.append(Gate('CZ', [ancilla, target]))
        else:
            gates.extend([Gate('SDG', [target]), Gate('CNOT', [ancilla, target]), Gate('S', [target])])
    gates.append(Gate('H', [ancilla]))
    if measure:
        gates.append(Gate('MEASURE', [ancilla]))
    return gates


def _measure_generators(state: Tableau, generators: List[PauliOp], first_ancilla: int,
                        rng: np.random.Generator) -> Syndrome:
    bits = []
    for index, g in enumerate(generators):
        ancilla = first_ancilla + index
        gadget = Circuit(state.n, syndrome_gadget(g, ancilla))
        outcome = state.run(gadget, rng)[0]
        # A -1 sign on the generator flips the eigenvalue read from the ancilla
        bits.append(outcome ^ (g.phase // 2))
    return Syndrome(bits)


def _inject(state: Tableau, code: StabilizerCode, errors: Iterable[InjectedError]):
    for error in errors:
        logger.debug(f"Injecting {error}")
        state.apply_error(error.to_pauli(code.n, state.n))


def _reset_ancillas(state: Tableau, code: StabilizerCode, rng: np.random.Generator):
    for q in range(code.n, state.n):
        state.reset(q, rng)


def entangle(protocol: ExtendedProtocol, state: Tableau):
    """Copy the tracked qubit onto ancillas A and B"""
    state.apply_circuit(protocol.entangle_circuit)


def run_cycle(protocol: ExtendedProtocol, state: Tableau, injected_errors: Iterable[InjectedError],
              rng: np.random.Generator) -> CycleOutcome:
    """
    Inject errors, measure the extended syndrome, disentangle and read A then B

    Args:
        protocol: the extended protocol
        state: tableau of protocol.width qubits already entangled
        injected_errors: errors placed after entanglement
        rng: random stream for measurement outcomes

    Returns:
        CycleOutcome: extended syndrome and the (A, B) outcomes
    """
    if state.n < protocol.width:
        raise ValueError(f"State has {state.n} qubits, protocol needs {protocol.width}")
    code = protocol.code
    _inject(state, code, injected_errors)
    sigma = _measure_generators(state, protocol.extended_generators, protocol.syndrome_ancilla(0), rng)
    state.apply_circuit(protocol.disentangle_circuit)
    a = state.measure(protocol.ancilla_a - 1, rng).outcome
    b = state.measure(protocol.ancilla_b - 1, rng).outcome
    logger.debug(f"Cycle outcome: sigma={sigma} ancilla={a}{b}")
    return CycleOutcome(sigma, (a, b))


def decide(protocol: ExtendedProtocol, sigma: Syndrome, ancilla: Tuple[int, int]) -> CorrectionDecision:
    """
    Decision rules, in order:

    1. sigma is a single-error syndrome of the tracked qubit j: correct that error.
    2. ancilla 00: zero sigma means no error, a single-error syndrome is corrected,
       anything else is uncorrectable.
    3. otherwise the ancilla names the relapsed type T on j; sigma XOR sigma(T_j)
       must be a single-error syndrome of the new error.
    """
    code = protocol.code
    n = code.n
    j = protocol.tracked_qubit
    ancilla = tuple(int(b) for b in ancilla)

    def decision(verdict, errors=()):
        return CorrectionDecision(verdict, errors, n, sigma=sigma, ancilla=ancilla)

    on_j = {kind: single(n, j, kind) for kind in PAULI_KINDS}
    for kind in PAULI_KINDS:
        if sigma == syndrome_of(code, on_j[kind]):
            return decision(SINGLE, [on_j[kind]])

    if ancilla == (0, 0):
        if sigma.is_zero():
            return decision(NO_ERROR)
        found = decode_single(code, sigma)
        if found is None:
            logger.warning(f"Syndrome {sigma} with ancilla 00 matches no single error")
            return decision(UNCORRECTABLE)
        return decision(SINGLE, [found])

    correlated = on_j[ANCILLA_TYPES[ancilla]]
    remainder = sigma ^ syndrome_of(code, correlated)
    new = decode_single(code, remainder)
    if new is None:
        logger.warning(f"Syndrome {sigma} with ancilla {ancilla[0]}{ancilla[1]} leaves {remainder}, "
                       f"which matches no single error")
        return decision(UNCORRECTABLE)
    return decision(DOUBLE, [correlated, new])


def apply_correction(state: Tableau, decision: CorrectionDecision):
    if decision.correction is not None and not decision.correction.is_identity():
        state.apply_error(decision.correction.embed(state.n))


def full_cycle(protocol: ExtendedProtocol, state: Tableau, injected_errors: Iterable[InjectedError],
               rng: np.random.Generator) -> CorrectionDecision:
    """Entangle, run the cycle, decide, correct the data qubits and reset every ancilla"""
    entangle(protocol, state)
    outcome = run_cycle(protocol, state, injected_errors, rng)
    decision = decide(protocol, outcome.sigma, outcome.ancilla)
    apply_correction(state, decision)
    _reset_ancillas(state, protocol.code, rng)
    if decision.verdict == UNCORRECTABLE:
        logger.warning(f"Uncorrectable cycle: sigma={outcome.sigma} ancilla={outcome.ancilla}")
    else:
        logger.info(f"Cycle verdict {decision.verdict}: {decision.message()}")
    return decision


def run_plain_cycle(code: StabilizerCode, state: Tableau, injected_errors: Iterable[InjectedError],
                    rng: np.random.Generator) -> CorrectionDecision:
    """Standard cycle: measure the original generators and correct with the single-error table"""
    errors = list(injected_errors)
    for error in errors:
        if not error.on_data():
            raise ValueError(f"Plain cycle has no copy ancillas; cannot inject {error}")
    if state.n < register_width(code):
        raise ValueError(f"State has {state.n} qubits, plain cycle needs {register_width(code)}")
    _inject(state, code, errors)
    sigma = _measure_generators(state, code.generators, code.n + 2, rng)
    found = decode_single(code, sigma)
    if found is None:
        decision = CorrectionDecision(UNCORRECTABLE, sigma=sigma)
    elif found.is_identity():
        decision = CorrectionDecision(NO_ERROR, n=code.n, sigma=sigma)
    else:
        decision = CorrectionDecision(SINGLE, [found], code.n, sigma=sigma)
    apply_correction(state, decision)
    _reset_ancillas(state, code, rng)
    return decision


def prepare_register(code: StabilizerCode, rng: Optional[np.random.Generator] = None) -> Tableau:
    """Codeword on the data qubits, every ancilla in |0>"""
    return prepare_codeword(code, register_width(code), rng)


def codeword_valid(code: StabilizerCode, state: Tableau) -> bool:
    """True when every original generator has expectation +1 on the data qubits"""
    return all(state.pauli_expectation(g.embed(state.n)) == 1 for g in code.generators)
