"""
Stabilizer code definitions, validation and syndrome machinery
"""
from typing import Dict, Any, Iterable, List, Optional, Tuple, Union
from itertools import combinations, product as cartesian
from pathlib import Path
import logging

import numpy as np

from config.settings import SIMULATION_CONFIG, get_codes_config
from .circuit import Circuit, parse as parse_circuit
from .pauli import PauliOp, single, commutes, product
from .statevec import DenseState
from .tableau import Tableau

logger = logging.getLogger(__name__)

# Enumeration order of single-qubit error kinds in syndrome tables
TABLE_KINDS = ['X', 'Z', 'Y']


# -- GF(2) helpers ---------------------------------------------------------

def _eliminate(rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray, List[int]]:
    """
    Reduced row echelon form over GF(2)

    Returns:
        tuple: (reduced rows, combination matrix, pivot columns). Row i of the
        combination matrix says which input rows XOR to reduced row i, so the
        rows past the rank give the dependencies between inputs.
    """
    a = (np.array(rows, dtype=np.uint8) % 2).reshape(len(rows), -1)
    m = a.shape[0]
    comb = np.eye(m, dtype=np.uint8)
    pivots = []
    r = 0
    for col in range(a.shape[1]):
        if r == m:
            break
        hits = np.flatnonzero(a[r:, col])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            comb[[r, p]] = comb[[p, r]]
        others = np.flatnonzero(a[:, col])
        others = others[others != r]
        a[others] ^= a[r]
        comb[others] ^= comb[r]
        pivots.append(col)
        r += 1
    return a, comb, pivots


def gf2_rank(rows: np.ndarray) -> int:
    if len(rows) == 0:
        return 0
    return len(_eliminate(rows)[2])


def gf2_solve(rows: np.ndarray, target: np.ndarray) -> Optional[np.ndarray]:
    """Coefficients c with c @ rows == target (mod 2), or None if target is outside the row space"""
    target = np.array(target, dtype=np.uint8) % 2
    if len(rows) == 0:
        return np.zeros(0, dtype=np.uint8) if not target.any() else None
    reduced, comb, pivots = _eliminate(rows)
    coeffs = np.zeros(len(rows), dtype=np.uint8)
    for i, col in enumerate(pivots):
        if target[col]:
            target ^= reduced[i]
            coeffs ^= comb[i]
    return None if target.any() else coeffs


# -- types -----------------------------------------------------------------

class Syndrome:
    """Ordered syndrome bits (f_M1 ... f_Mm), rendered leftmost first"""

    __slots__ = ('bits',)

    def __init__(self, bits: Iterable[int]):
        object.__setattr__(self, 'bits', tuple(int(b) & 1 for b in bits))

    def __setattr__(self, name, value):
        raise AttributeError("Syndrome is immutable")

    @classmethod
    def from_string(cls, text: str) -> 'Syndrome':
        text = text.strip()
        if not text or set(text) - {'0', '1'}:
            raise ValueError(f"Invalid syndrome '{text}'. Must be a binary string")
        return cls(int(c) for c in text)

    @classmethod
    def zeros(cls, length: int) -> 'Syndrome':
        return cls([0] * length)

    def is_zero(self) -> bool:
        return not any(self.bits)

    def __xor__(self, other: 'Syndrome') -> 'Syndrome':
        if len(self) != len(other):
            raise ValueError(f"Syndrome length mismatch: {len(self)} != {len(other)}")
        return Syndrome(a ^ b for a, b in zip(self.bits, other.bits))

    def __len__(self):
        return len(self.bits)

    def __eq__(self, other):
        if not isinstance(other, Syndrome):
            return NotImplemented
        return self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __str__(self):
        return ''.join(str(b) for b in self.bits)

    def __repr__(self):
        return f"Syndrome('{self}')"


class StabilizerCode:
    """An [[n, k]] stabilizer code given by its generator list"""

    def __init__(self, name: str, n: int, k: int, generators: List[PauliOp],
                 declared_distance: Optional[int] = None,
                 logical_states: Optional[Dict[str, Dict[str, List[str]]]] = None,
                 encoding_circuit: Optional[Circuit] = None):
        if n < 1:
            raise ValueError(f"Code length must be positive, got {n}")
        if not 0 <= k <= n:
            raise ValueError(f"Invalid number of logical qubits {k} for n={n}")
        for g in generators:
            if g.n != n:
                raise ValueError(f"Generator {g} has {g.n} qubits, code has n={n}")
        if encoding_circuit is not None and encoding_circuit.num_qubits != n:
            raise ValueError(f"Encoding circuit acts on {encoding_circuit.num_qubits} qubits, code has n={n}")
        self.name = name
        self.n = int(n)
        self.k = int(k)
        self.generators = list(generators)
        self.declared_distance = declared_distance
        self.logical_states = logical_states or {}
        self.encoding_circuit = encoding_circuit
        self._tables: Dict[int, 'SyndromeTable'] = {}

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def check_matrix(self) -> np.ndarray:
        """Generator rows as [x | z] bit vectors"""
        if not self.generators:
            return np.zeros((0, 2 * self.n), dtype=np.uint8)
        return np.array([g.symplectic() for g in self.generators], dtype=np.uint8)

    def logical_state(self, label: str) -> DenseState:
        """Dense amplitude vector of a stored logical state ('zero' or 'one')"""
        if label not in self.logical_states:
            raise ValueError(f"Code {self.name} has no logical state '{label}'")
        table = self.logical_states[label]
        return DenseState.from_signed_labels(self.n, table.get('+', []), table.get('-', []))

    def table(self, max_weight: int = 1) -> 'SyndromeTable':
        """Cached syndrome table"""
        if max_weight not in self._tables:
            self._tables[max_weight] = syndrome_table(self, max_weight)
        return self._tables[max_weight]

    def to_dict(self) -> Dict[str, Any]:
        """Convert StabilizerCode to dictionary"""
        return {
            'name': self.name,
            'n': self.n,
            'k': self.k,
            'generators': [str(g) for g in self.generators],
            'distance': self.declared_distance,
        }

    def __str__(self):
        return f"StabilizerCode(name='{self.name}', n={self.n}, k={self.k})"

    def __repr__(self):
        return self.__str__()


class ValidationReport:
    """Outcome of validate(); empty `failures` means the generators define a stabilizer code"""

    def __init__(self, code_name: str, failures: Optional[List[str]] = None):
        self.code_name = code_name
        self.failures = failures or []

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {'code': self.code_name, 'passed': self.passed, 'failures': list(self.failures)}

    def __str__(self):
        if self.passed:
            return f"{self.code_name}: valid stabilizer code"
        return f"{self.code_name}: " + '; '.join(self.failures)


class SyndromeTable:
    """Errors up to a weight grouped by syndrome"""

    def __init__(self, code_name: str, max_weight: int):
        self.code_name = code_name
        self.max_weight = max_weight
        self.rows: List[Tuple[PauliOp, Syndrome]] = []
        self.entries: Dict[Syndrome, PauliOp] = {}
        self.collisions: List[Tuple[Syndrome, List[PauliOp]]] = []
        self.undetectable: List[PauliOp] = []

    def lookup(self, syndrome: Syndrome) -> Optional[PauliOp]:
        return self.entries.get(syndrome)

    def collides(self, a: PauliOp, b: PauliOp) -> bool:
        """True if a and b appear in the same collision group"""
        return any(a in group and b in group for _, group in self.collisions)

    def __len__(self):
        return len(self.entries)


# -- operations ------------------------------------------------------------

def _check_size(code: StabilizerCode, e: PauliOp):
    if e.n != code.n:
        raise ValueError(f"Operator acts on {e.n} qubits, code {code.name} has n={code.n}")


def syndrome_of(code: StabilizerCode, e: PauliOp) -> Syndrome:
    """Bit j is 1 iff e anticommutes with generator j"""
    _check_size(code, e)
    if not code.generators:
        return Syndrome([])
    h = code.check_matrix().astype(np.int64)
    n = code.n
    bits = (h[:, :n] @ e.z_bits + h[:, n:] @ e.x_bits) % 2
    return Syndrome(bits)


def anticommuting_generators(code: StabilizerCode, e: PauliOp) -> List[int]:
    """1-based indices of the generators anticommuting with e"""
    return [i + 1 for i, bit in enumerate(syndrome_of(code, e).bits) if bit]


def validate(code: StabilizerCode) -> ValidationReport:
    """
    Check the stabilizer conditions without raising

    Reports non-Hermitian generators, non-commuting pairs, a generator count
    other than n-k, dependent generators and -I in the generated group.
    """
    failures = []
    gens = code.generators
    for i, g in enumerate(gens, start=1):
        if not g.is_hermitian():
            failures.append(f"M{i} = {g} is not Hermitian")
        if g.is_identity():
            failures.append(f"M{i} is a multiple of the identity")
    for (i, a), (j, b) in combinations(enumerate(gens, start=1), 2):
        if not commutes(a, b):
            failures.append(f"M{i} and M{j} do not commute")
    if len(gens) != code.n - code.k:
        failures.append(f"expected {code.n - code.k} generators for n={code.n}, k={code.k}, got {len(gens)}")

    if gens:
        _, comb, pivots = _eliminate(code.check_matrix())
        for row in comb[len(pivots):]:
            members = [i for i in np.flatnonzero(row)]
            names = '*'.join(f"M{i + 1}" for i in members)
            failures.append(f"generators are dependent: {names} has no X or Z bits")
            total = product((gens[i] for i in members), code.n)
            if total.phase == 2:
                failures.append(f"-I is generated by {names}")

    report = ValidationReport(code.name, failures)
    if not report.passed:
        logger.warning(f"Code {code.name} failed validation: {report}")
    return report


def syndrome_table(code: StabilizerCode, max_weight: int = 1) -> SyndromeTable:
    """
    Enumerate every error of weight 1..max_weight with its syndrome

    Args:
        code: the stabilizer code
        max_weight: largest error weight, bounded by the configured table limit

    Returns:
        SyndromeTable: rows in enumeration order, collision-free entries and
        every group of errors sharing a syndrome
    """
    limit = SIMULATION_CONFIG['table_max_weight']
    if not 1 <= max_weight <= limit:
        raise ValueError(f"max_weight must be between 1 and {limit}, got {max_weight}")

    table = SyndromeTable(code.name, max_weight)
    groups: Dict[Syndrome, List[PauliOp]] = {}
    for w in range(1, min(max_weight, code.n) + 1):
        for qubits in combinations(range(1, code.n + 1), w):
            for kinds in cartesian(TABLE_KINDS, repeat=w):
                e = product((single(code.n, q, kind) for q, kind in zip(qubits, kinds)), code.n)
                s = syndrome_of(code, e)
                table.rows.append((e, s))
                if s.is_zero():
                    table.undetectable.append(e)
                else:
                    groups.setdefault(s, []).append(e)

    for s, errors in groups.items():
        if len(errors) == 1:
            table.entries[s] = errors[0]
        else:
            table.collisions.append((s, errors))
    if table.collisions:
        logger.warning(f"Syndrome table of {code.name} (weight <= {max_weight}) has {len(table.collisions)} collisions")
    logger.info(f"Built syndrome table for {code.name}: {len(table.entries)} entries")
    return table


def decode_single(code: StabilizerCode, syndrome: Syndrome) -> Optional[PauliOp]:
    """
    Look up the weight-1 error for a syndrome

    Returns:
        PauliOp: identity for the zero syndrome, the unique weight-1 error
        otherwise, or None when no weight-1 error has this syndrome
    """
    if len(syndrome) != code.num_generators:
        raise ValueError(f"Syndrome {syndrome} has {len(syndrome)} bits, code {code.name} has {code.num_generators} generators")
    if syndrome.is_zero():
        return PauliOp.identity(code.n)
    return code.table(1).lookup(syndrome)


def decode_with_prior(code: StabilizerCode, syndrome: Syndrome, prior: PauliOp) -> Optional[PauliOp]:
    """The error F with syndrome_of(prior * F) == syndrome, given a known prior error"""
    return decode_single(code, syndrome ^ syndrome_of(code, prior))


def in_stabilizer(code: StabilizerCode, p: PauliOp) -> bool:
    """Signed membership of p in the group generated by the code"""
    _check_size(code, p)
    coeffs = gf2_solve(code.check_matrix(), p.symplectic())
    if coeffs is None:
        return False
    element = product((g for g, c in zip(code.generators, coeffs) if c), code.n)
    return element == p


def is_logical_error(code: StabilizerCode, p: PauliOp) -> bool:
    """True iff unsigned p commutes with every generator but is not in the stabilizer group"""
    _check_size(code, p)
    if not syndrome_of(code, p).is_zero():
        return False
    return gf2_solve(code.check_matrix(), p.symplectic()) is None


def distance(code: StabilizerCode) -> int:
    """Minimum weight over N(S) - S by exhaustive enumeration of unsigned Paulis"""
    n = code.n
    limit = SIMULATION_CONFIG['distance_max_qubits']
    if n > limit:
        raise ValueError(f"Brute-force distance is limited to n <= {limit}, code {code.name} has n={n}")
    if code.k == 0:
        raise ValueError(f"Code {code.name} encodes no logical qubits")

    index = np.arange(1, 4 ** n, dtype=np.int64)
    shifts = np.arange(2 * n, dtype=np.int64)
    ops = ((index[:, None] >> shifts) & 1).astype(np.uint8)
    h = code.check_matrix()

    if len(h):
        hz = h[:, n:].astype(np.int64)
        hx = h[:, :n].astype(np.int64)
        anti = (ops[:, :n].astype(np.int64) @ hz.T + ops[:, n:].astype(np.int64) @ hx.T) % 2
        ops = ops[~anti.any(axis=1)]

        # Strip stabilizer components; a zero residual means the operator is in S
        reduced, _, pivots = _eliminate(h)
        residual = ops.copy()
        for i, col in enumerate(pivots):
            hit = residual[:, col] == 1
            residual[hit] ^= reduced[i]
        ops = ops[residual.any(axis=1)]

    weights = np.count_nonzero(ops[:, :n] | ops[:, n:], axis=1)
    d = int(weights.min())
    logger.info(f"Distance of {code.name}: {d}")
    return d


def hamming_bound_holds(n: int, k: int = 1) -> bool:
    """Non-degenerate quantum Hamming bound for single-error correction: 2^k (3n + 1) <= 2^n"""
    return 2 ** k * (3 * n + 1) <= 2 ** n


def hamming_bound_min_n(k: int = 1) -> int:
    n = 1
    while not hamming_bound_holds(n, k):
        n += 1
    return n


def pure_errors(code: StabilizerCode) -> List[PauliOp]:
    """
    Pauli D_i anticommuting with generator i and commuting with every other generator

    Raises:
        ValueError: if the generators are dependent
    """
    n = code.n
    h = code.check_matrix()
    # Syndrome bit j of (x, z) is h_x[j].z + h_z[j].x, so solve [h_z | h_x] v = e_i
    swapped = np.concatenate([h[:, n:], h[:, :n]], axis=1)
    result = []
    for i in range(code.num_generators):
        target = np.zeros(code.num_generators, dtype=np.uint8)
        target[i] = 1
        v = gf2_solve(swapped.T, target)
        if v is None:
            raise ValueError(f"Generators of {code.name} are dependent; no pure error for M{i + 1}")
        result.append(PauliOp(v[:n], v[n:]))
    return result


def prepare_codeword(code: StabilizerCode, width: Optional[int] = None,
                     rng: Optional[np.random.Generator] = None) -> Tableau:
    """
    Tableau holding a codeword of `code` on the first n qubits of a `width`-qubit register

    Uses the encoding circuit when the code has one; otherwise measures every
    generator and flips wrong signs with the matching pure error.
    """
    width = width or code.n
    if width < code.n:
        raise ValueError(f"Register of {width} qubits cannot hold an n={code.n} codeword")
    state = Tableau(width)
    if code.encoding_circuit is not None:
        state.apply_circuit(code.encoding_circuit)
        return state

    rng = rng if rng is not None else np.random.default_rng(0)
    fixes = pure_errors(code)
    for g, fix in zip(code.generators, fixes):
        if state.measure_pauli(g.embed(width), rng).outcome:
            state.apply_error(fix.embed(width))
    logger.debug(f"Prepared {code.name} codeword by measurement")
    return state


# -- builtin codes and code files ------------------------------------------

def _code_from_config(name: str, data: Dict[str, Any]) -> StabilizerCode:
    circuit = parse_circuit(data['encoding_circuit']) if data.get('encoding_circuit') else None
    return StabilizerCode(
        name=name,
        n=data['n'],
        k=data['k'],
        generators=[PauliOp.from_string(g) for g in data['generators']],
        declared_distance=data.get('distance'),
        logical_states=data.get('logical_states'),
        encoding_circuit=circuit,
    )


def builtin_names() -> List[str]:
    return list(get_codes_config().keys())


def builtin(name: str) -> StabilizerCode:
    """Builtin code by name (five_qubit, steane)"""
    codes = get_codes_config()
    if name not in codes:
        raise ValueError(f"Unknown code '{name}'. Must be one of: {', '.join(codes)}")
    return _code_from_config(name, codes[name])


class CodeFileError(ValueError):
    """Raised for malformed `.code` files, carries the 1-based line number"""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


def parse_code(text: str) -> StabilizerCode:
    """
    Parse a code definition

    Format: `name:`, `n:` and `k:` header lines, then one generator Pauli
    string per line. `#` starts a comment.
    """
    header: Dict[str, str] = {}
    generators = []
    last_line = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        last_line = line_number
        if ':' in line:
            key, value = (part.strip() for part in line.split(':', 1))
            key = key.lower()
            if key not in ('name', 'n', 'k'):
                raise CodeFileError(line_number, f"unknown key '{key}'")
            if key in header:
                raise CodeFileError(line_number, f"duplicate key '{key}'")
            if generators:
                raise CodeFileError(line_number, f"'{key}' must come before the generators")
            header[key] = value
            continue
        try:
            g = PauliOp.from_string(line)
        except ValueError as e:
            raise CodeFileError(line_number, str(e))
        if 'n' in header and g.n != int(header['n']):
            raise CodeFileError(line_number, f"generator {line} has {g.n} qubits, expected {header['n']}")
        generators.append(g)

    for key in ('name', 'n', 'k'):
        if key not in header:
            raise CodeFileError(last_line or 1, f"missing '{key}:' line")
    try:
        n, k = int(header['n']), int(header['k'])
    except ValueError:
        raise CodeFileError(1, f"n and k must be integers, got n={header['n']}, k={header['k']}")
    try:
        return StabilizerCode(header['name'], n, k, generators)
    except ValueError as e:
        raise CodeFileError(last_line or 1, str(e))


def load_code_file(path: Union[str, Path]) -> StabilizerCode:
    """Read and parse a `.code` file"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Code file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return parse_code(f.read())


class CodeRegistry:
    """Resolves builtin names and code file paths, caching builtins"""

    def __init__(self):
        self._cache: Dict[str, StabilizerCode] = {}

    def get(self, name_or_path: str) -> StabilizerCode:
        if name_or_path in self._cache:
            return self._cache[name_or_path]
        if name_or_path in builtin_names():
            code = builtin(name_or_path)
            self._cache[name_or_path] = code
            return code
        if Path(name_or_path).exists():
            return load_code_file(name_or_path)
        raise ValueError(f"Unknown code '{name_or_path}'. Use one of {', '.join(builtin_names())} or a .code file path")

    def list_builtins(self) -> List[str]:
        return builtin_names()


# Global code registry instance
code_registry = CodeRegistry()
