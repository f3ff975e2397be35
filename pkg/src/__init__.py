"""
tcqec - time-correlated quantum error correction simulator

Stabilizer codes, a tableau simulator with a dense state-vector oracle, and
the extended syndrome protocol that corrects one time-correlated error plus
one new error per error-correction cycle.
"""

from .pauli import PauliOp, single, multiply, commutes, weight
from .circuit import Gate, Circuit, CircuitParseError, parse, emit, hcnot
from .tableau import Tableau, TableauInvariantError
from .statevec import DenseState
from .codes import (
    StabilizerCode, Syndrome, ValidationReport, SyndromeTable, CodeFileError,
    builtin, validate, syndrome_of, anticommuting_generators, syndrome_table,
    decode_single, decode_with_prior, distance, hamming_bound_min_n,
    code_registry,
)
from .tcqec import (
    InjectedError, ExtendedProtocol, CorrectionDecision,
    extended_generators, build_protocol, run_cycle, decide, full_cycle,
)
from .noise import (
    NoiseParams, DecoherenceBudget, CycleHistory,
    correlated_probability, gate_budget, sample_cycle, monte_carlo,
)
from .scenario import ScenarioConfig, ScenarioError

__version__ = "1.0.0"
__author__ = "tcqec Team"

# Export main classes and functions
__all__ = [
    'PauliOp', 'single', 'multiply', 'commutes', 'weight',
    'Gate', 'Circuit', 'CircuitParseError', 'parse', 'emit', 'hcnot',
    'Tableau', 'TableauInvariantError',
    'DenseState',
    'StabilizerCode', 'Syndrome', 'ValidationReport', 'SyndromeTable', 'CodeFileError',
    'builtin', 'validate', 'syndrome_of', 'anticommuting_generators', 'syndrome_table',
    'decode_single', 'decode_with_prior', 'distance', 'hamming_bound_min_n',
    'code_registry',
    'InjectedError', 'ExtendedProtocol', 'CorrectionDecision',
    'extended_generators', 'build_protocol', 'run_cycle', 'decide', 'full_cycle',
    'NoiseParams', 'DecoherenceBudget', 'CycleHistory',
    'correlated_probability', 'gate_budget', 'sample_cycle', 'monte_carlo',
    'ScenarioConfig', 'ScenarioError',
]
