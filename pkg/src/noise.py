"""
Noise models for cycle simulation and decoherence gate budgets

New errors arrive at a constant rate epsilon per cycle. A qubit hit in the
previous cycle may relapse with the correlated term of

    P = (epsilon/2)^2 + lambda^4 delta^4 / (8 (t1 - t2)^4)

evaluated at a one-cycle gap, i.e. lambda^4 / 8. Older history is dropped.
"""
from typing import Callable, Dict, Any, List, NamedTuple, Optional, Union
from decimal import Decimal
import logging

import numpy as np

from config.settings import (
    PAULI_KINDS, RELAPSE_POLICIES, DEFAULT_RELAPSE_POLICY, DEFAULT_CAP,
    get_noise_config, get_budget_config,
)
from .codes import StabilizerCode, is_logical_error
from .pauli import PauliOp, product
from .tcqec import (
    VERDICTS, UNCORRECTABLE, InjectedError, build_protocol, full_cycle,
    run_plain_cycle, prepare_register,
)

logger = logging.getLogger(__name__)


class NoiseParams:
    """Per-cycle error model parameters"""

    def __init__(self, epsilon: float, lam: float, delta: float = 1.0,
                 relapse_type_policy: str = DEFAULT_RELAPSE_POLICY, cap: float = DEFAULT_CAP):
        if not 0 <= epsilon <= 1:
            raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        if delta <= 0:
            raise ValueError(f"delta must be positive, got {delta}")
        if relapse_type_policy not in RELAPSE_POLICIES:
            raise ValueError(f"Invalid relapse policy '{relapse_type_policy}'. "
                             f"Must be one of: {', '.join(RELAPSE_POLICIES)}")
        if not 0 < cap <= 1:
            raise ValueError(f"cap must be in (0, 1], got {cap}")
        self.epsilon = float(epsilon)
        self.lam = float(lam)
        self.delta = float(delta)
        self.relapse_type_policy = relapse_type_policy
        self.cap = float(cap)

    @classmethod
    def from_config(cls, **overrides) -> 'NoiseParams':
        """Defaults from config/simulation.yaml, with keyword overrides (None means keep the default)"""
        data = get_noise_config()
        values = {
            'epsilon': data['epsilon'],
            'lam': data['lambda'],
            'delta': data['delta'],
            'relapse_type_policy': data['relapse_type_policy'],
            'cap': data['cap'],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'epsilon': self.epsilon,
            'lambda': self.lam,
            'delta': self.delta,
            'relapse_type_policy': self.relapse_type_policy,
            'cap': self.cap,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'NoiseParams':
        return cls(data['epsilon'], data['lambda'], data.get('delta', 1.0),
                   data.get('relapse_type_policy', DEFAULT_RELAPSE_POLICY), data.get('cap', DEFAULT_CAP))

    def __str__(self):
        return (f"NoiseParams(epsilon={self.epsilon}, lambda={self.lam}, delta={self.delta}, "
                f"policy={self.relapse_type_policy})")

    def __repr__(self):
        return self.__str__()


class CorrelatedProbability(NamedTuple):
    independent: float
    correlated: float
    total: float


def correlated_probability(params: NoiseParams, t1: float, t2: float) -> CorrelatedProbability:
    """
    Probability of errors at both cycle times t1 and t2

    Args:
        params: noise parameters
        t1, t2: cycle times, in the same unit as params.delta

    Returns:
        CorrelatedProbability: the (epsilon/2)^2 term, the algebraic decay term
        and their sum, each capped
    """
    if t1 == t2:
        raise ValueError("t1 and t2 must differ")
    gap = abs(t1 - t2)
    independent = min((params.epsilon / 2) ** 2, params.cap)
    correlated = min(params.lam ** 4 * params.delta ** 4 / (8 * gap ** 4), params.cap)
    return CorrelatedProbability(independent, correlated, min(independent + correlated, params.cap))


def relapse_probability(params: NoiseParams) -> float:
    """Correlated term at a one-cycle gap"""
    return correlated_probability(params, params.delta, 0.0).correlated


def power_of_ten(value: Decimal) -> str:
    """'10^k' for exact powers of ten, plain decimal text otherwise"""
    normalized = value.normalize()
    sign, digits, exponent = normalized.as_tuple()
    if sign == 0 and digits == (1,):
        return f"10^{exponent}"
    return str(normalized)


class DecoherenceBudget:
    """Number of gates that fit into one decoherence time"""

    def __init__(self, tau_dch: Decimal, tau_gate: Decimal, implementation: str = ''):
        self.implementation = implementation
        self.tau_dch = tau_dch
        self.tau_gate = tau_gate

    @property
    def n_gates(self) -> Decimal:
        return self.tau_dch / self.tau_gate

    def to_dict(self) -> Dict[str, Any]:
        return {
            'implementation': self.implementation,
            'tau_dch': power_of_ten(self.tau_dch),
            'tau_gate': power_of_ten(self.tau_gate),
            'n_gates': power_of_ten(self.n_gates),
        }

    def __str__(self):
        return f"DecoherenceBudget({self.implementation or 'custom'}: {power_of_ten(self.n_gates)} gates)"

    def __repr__(self):
        return self.__str__()


def gate_budget(tau_dch: Union[str, float, Decimal], tau_gate: Union[str, float, Decimal],
                implementation: str = '') -> DecoherenceBudget:
    """tau_dch / tau_gate with exact decimal arithmetic"""
    dch = Decimal(str(tau_dch))
    gate = Decimal(str(tau_gate))
    if dch <= 0 or gate <= 0:
        raise ValueError(f"Decoherence and gate times must be positive, got {tau_dch} and {tau_gate}")
    return DecoherenceBudget(dch, gate, implementation)


def configured_budgets() -> List[DecoherenceBudget]:
    """Gate budgets for the configured qubit implementations"""
    return [gate_budget(row['tau_dch'], row['tau_gate'], row['implementation'])
            for row in get_budget_config()]


class CycleRecord(NamedTuple):
    cycle: int
    qubit: Optional[int]
    kind: Optional[str]


class CycleHistory:
    """Append-only per-cycle record of the qubit hit in each cycle"""

    def __init__(self):
        self._records: List[CycleRecord] = []

    def record(self, cycle: int, errors: List[InjectedError]) -> CycleRecord:
        """Store the cycle's new-error qubit, else its relapse qubit"""
        if self._records and cycle <= self._records[-1].cycle:
            raise ValueError(f"Cycle {cycle} recorded out of order")
        data = [e for e in errors if e.on_data()]
        chosen = next((e for e in data if not e.correlated), data[0] if data else None)
        entry = CycleRecord(cycle, chosen.target if chosen else None, chosen.kind if chosen else None)
        self._records.append(entry)
        return entry

    def last(self) -> Optional[CycleRecord]:
        return self._records[-1] if self._records else None

    @property
    def records(self) -> List[CycleRecord]:
        return list(self._records)

    def __len__(self):
        return len(self._records)


def sample_cycle(params: NoiseParams, history: CycleHistory, n: int,
                 rng: np.random.Generator) -> List[InjectedError]:
    """
    Errors for the next cycle: an optional relapse of the previous cycle's qubit
    followed by an optional new error on a uniformly random (qubit, kind)
    """
    errors = []
    last = history.last()
    if last is not None and last.qubit is not None:
        if rng.random() < relapse_probability(params):
            if params.relapse_type_policy == 'same_type':
                kind = last.kind
            else:
                kind = PAULI_KINDS[int(rng.integers(3))]
            errors.append(InjectedError(last.qubit, kind, correlated=True))
    if rng.random() < params.epsilon:
        qubit = int(rng.integers(1, n + 1))
        kind = PAULI_KINDS[int(rng.integers(3))]
        errors.append(InjectedError(qubit, kind))
    return errors


# injector(cycle, history, rng) -> errors for that cycle
Injector = Callable[[int, CycleHistory, np.random.Generator], List[InjectedError]]


class DecoderStats:
    """Verdict counts and failures of one decoder across all trials"""

    def __init__(self, name: str):
        self.name = name
        self.verdicts = {verdict: 0 for verdict in VERDICTS}
        self.failures = 0
        self.cycles_run = 0

    def failure_rate(self, trials: int) -> float:
        return self.failures / trials if trials else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'verdicts': dict(self.verdicts),
                'failures': self.failures, 'cycles_run': self.cycles_run}


class MonteCarloStats:
    """Aggregated Monte Carlo results, rendered deterministically"""

    def __init__(self, code_name: str, params: NoiseParams, cycles: int, trials: int, seed: int):
        self.code_name = code_name
        self.params = params
        self.cycles = cycles
        self.trials = trials
        self.seed = seed
        self.extended = DecoderStats('extended')
        self.baseline = DecoderStats('baseline')
        self.new_errors = 0
        self.relapses = 0
        self.double_events = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'code': self.code_name,
            'params': self.params.to_dict(),
            'cycles': self.cycles,
            'trials': self.trials,
            'seed': self.seed,
            'new_errors': self.new_errors,
            'relapses': self.relapses,
            'double_events': self.double_events,
            'extended': self.extended.to_dict(),
            'baseline': self.baseline.to_dict(),
        }

    def render_kv(self) -> str:
        lines = [
            f"code={self.code_name}",
            f"epsilon={self.params.epsilon}",
            f"lambda={self.params.lam}",
            f"delta={self.params.delta}",
            f"policy={self.params.relapse_type_policy}",
            f"cycles={self.cycles}",
            f"trials={self.trials}",
            f"seed={self.seed}",
            f"new_errors={self.new_errors}",
            f"relapses={self.relapses}",
            f"double_events={self.double_events}",
        ]
        for stats in (self.extended, self.baseline):
            for verdict in VERDICTS:
                lines.append(f"{stats.name}.{verdict}={stats.verdicts[verdict]}")
            lines.append(f"{stats.name}.cycles_run={stats.cycles_run}")
            lines.append(f"{stats.name}.failures={stats.failures}")
            lines.append(f"{stats.name}.failure_rate={stats.failure_rate(self.trials):.6f}")
        return '\n'.join(lines)

    def render_table(self) -> str:
        header = ['decoder'] + VERDICTS + ['failures', 'failure_rate']
        rows = []
        for stats in (self.extended, self.baseline):
            rows.append([stats.name] + [str(stats.verdicts[v]) for v in VERDICTS]
                        + [str(stats.failures), f"{stats.failure_rate(self.trials):.6f}"])
        widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
        lines = [
            f"Monte Carlo: code={self.code_name} cycles={self.cycles} trials={self.trials} seed={self.seed}",
            f"epsilon={self.params.epsilon} lambda={self.params.lam} delta={self.params.delta} "
            f"policy={self.params.relapse_type_policy}",
            f"new errors={self.new_errors} relapses={self.relapses} double events={self.double_events}",
            '  '.join(h.ljust(w) for h, w in zip(header, widths)),
        ]
        for row in rows:
            lines.append('  '.join(c.ljust(w) for c, w in zip(row, widths)))
        return '\n'.join(line.rstrip() for line in lines)


def _run_decoder(code: StabilizerCode, stream: List[List[InjectedError]], protocols: Dict[int, Any],
                 extended: bool, rng: np.random.Generator, stats: DecoderStats):
    """Run one trial's error stream; stops at the first logical failure"""
    state = prepare_register(code, rng)
    frame = PauliOp.identity(code.n)
    tracked = None
    for errors in stream:
        if extended and tracked is not None:
            decision = full_cycle(protocols[tracked], state, errors, rng)
        else:
            decision = run_plain_cycle(code, state, errors, rng)
        stats.cycles_run += 1
        stats.verdicts[decision.verdict] += 1
        if decision.verdict == UNCORRECTABLE:
            stats.failures += 1
            return
        injected = product((e.to_pauli(code.n, code.n) for e in errors), code.n)
        frame = (frame * injected * decision.correction).unsigned()
        if is_logical_error(code, frame):
            stats.failures += 1
            return
        tracked = decision.corrected_qubit()


def monte_carlo(code: StabilizerCode, params: NoiseParams, cycles: int, trials: int, seed: int,
                injector: Optional[Injector] = None) -> MonteCarloStats:
    """
    Compare the extended decoder with the single-error baseline on identical error streams

    Args:
        code: the stabilizer code
        params: noise parameters used by sample_cycle
        cycles: cycles per trial
        trials: number of independent trials
        seed: root seed; trial t uses the t-th spawned child stream
        injector: optional replacement for sample_cycle (data-qubit errors only)

    Returns:
        MonteCarloStats: verdict counts, failures and event counts
    """
    if cycles < 1 or trials < 1:
        raise ValueError(f"cycles and trials must be positive, got {cycles} and {trials}")
    stats = MonteCarloStats(code.name, params, cycles, trials, seed)
    protocols = {j: build_protocol(code, j) for j in range(1, code.n + 1)}

    for t, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        stream_seq, sim_seq = child.spawn(2)
        stream_rng = np.random.default_rng(stream_seq)
        history = CycleHistory()
        stream = []
        for c in range(cycles):
            if injector is not None:
                errors = injector(c, history, stream_rng)
            else:
                errors = sample_cycle(params, history, code.n, stream_rng)
            for e in errors:
                if not e.on_data():
                    raise ValueError(f"Monte Carlo streams must hit data qubits, got {e}")
            history.record(c, errors)
            stream.append(errors)
            correlated = [e for e in errors if e.correlated]
            new = [e for e in errors if not e.correlated]
            stats.relapses += len(correlated)
            stats.new_errors += len(new)
            if correlated and new:
                stats.double_events += 1

        _run_decoder(code, stream, protocols, True, np.random.default_rng(sim_seq), stats.extended)
        _run_decoder(code, stream, protocols, False, np.random.default_rng(sim_seq), stats.baseline)
        logger.debug(f"Trial {t} done")

    logger.info(f"Monte Carlo finished: {trials} trials x {cycles} cycles, "
                f"extended failures {stats.extended.failures}, baseline failures {stats.baseline.failures}")
    return stats
