"""
Command Line Interface for tcqec
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from config.settings import LOG_LEVEL, LOG_FORMAT, RELAPSE_POLICIES
from . import circuit as circuit_dsl
from .codes import (
    StabilizerCode, code_registry, validate, syndrome_table, anticommuting_generators,
    distance, hamming_bound_holds, hamming_bound_min_n, prepare_codeword,
)
from .noise import NoiseParams, monte_carlo, configured_budgets, power_of_ten
from .scenario import load_scenario
from .statevec import expectation
from .tableau import Tableau
from .tcqec import UNCORRECTABLE, build_protocol, full_cycle, prepare_register, codeword_valid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_UNCORRECTABLE = 2
EXIT_USAGE = 3

FORMATS = ['table', 'kv']


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog='tcqec', description="tcqec - time-correlated quantum error correction simulator")
    parser.add_argument('-v', '--verbose', action='count', default=0, help='Increase log verbosity (-v info, -vv debug)')
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    table_parser = subparsers.add_parser('table', help='Print the syndrome table of a code')
    table_parser.add_argument('code', help='Builtin code name or .code file')
    table_parser.add_argument('--max-weight', type=int, default=1, help='Largest error weight to enumerate')
    table_parser.add_argument('--format', choices=FORMATS, default='table')

    verify_parser = subparsers.add_parser('verify', help='Validate a code and check its codewords')
    verify_parser.add_argument('code', help='Builtin code name or .code file')
    verify_parser.add_argument('--format', choices=FORMATS, default='table')

    run_parser = subparsers.add_parser('run', help='Run one protocol cycle from a scenario file')
    run_parser.add_argument('scenario', help='Scenario file (.stab-scn)')
    run_parser.add_argument('--allow-failure', action='store_true', help='Exit 0 on an uncorrectable verdict')
    run_parser.add_argument('--format', choices=FORMATS, default='table')

    mc_parser = subparsers.add_parser('montecarlo', help='Compare extended and baseline decoders')
    mc_parser.add_argument('--code', default='steane', help='Builtin code name or .code file')
    mc_parser.add_argument('--epsilon', type=float, help='New-error probability per cycle')
    mc_parser.add_argument('--lambda', dest='lam', type=float, help='Coupling constant')
    mc_parser.add_argument('--delta', type=float, help='Error-correction cycle period')
    mc_parser.add_argument('--policy', choices=RELAPSE_POLICIES, help='Relapse error type policy')
    mc_parser.add_argument('--cycles', type=int, default=10)
    mc_parser.add_argument('--trials', type=int, default=100)
    mc_parser.add_argument('--seed', type=int, required=True)
    mc_parser.add_argument('--format', choices=FORMATS, default='table')

    budget_parser = subparsers.add_parser('budget', help='Print decoherence gate budgets')
    budget_parser.add_argument('--format', choices=FORMATS, default='table')

    distance_parser = subparsers.add_parser('distance', help='Brute-force code distance')
    distance_parser.add_argument('code', help='Builtin code name or .code file')
    distance_parser.add_argument('--format', choices=FORMATS, default='table')

    sim_parser = subparsers.add_parser('sim', help='Execute a .stab circuit on the tableau simulator')
    sim_parser.add_argument('circuit', help='Circuit file (.stab)')
    sim_parser.add_argument('--seed', type=int, required=True)
    sim_parser.add_argument('--dump', action='store_true', help='Print the final stabilizer rows')

    bound_parser = subparsers.add_parser('bound', help='Quantum Hamming bound for single-error correction')
    bound_parser.add_argument('--max-n', type=int, default=8)

    return parser


def configure_logging(verbosity: int):
    level = LOG_LEVEL
    if verbosity == 1:
        level = 'INFO'
    elif verbosity >= 2:
        level = 'DEBUG'
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.WARNING), format=LOG_FORMAT)


def _align(rows: List[List[str]], separator: str = '  ') -> List[str]:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return [separator.join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]


def handle_table_command(args) -> int:
    """Handle table command"""
    code = code_registry.get(args.code)
    table = syndrome_table(code, args.max_weight)

    if args.format == 'kv':
        for error, syndrome in table.rows:
            print(f"{error.label()}={syndrome}")
        for syndrome, errors in table.collisions:
            print(f"collision.{syndrome}={','.join(e.label() for e in errors)}")
        return EXIT_OK

    def cell(error, syndrome):
        generators = ','.join(f"M{i}" for i in anticommuting_generators(code, error))
        return f"{error.label()} {syndrome} ({generators})"

    print(f"Syndrome table for {code.name} (n={code.n}, k={code.k})")
    singles = [(e, s) for e, s in table.rows if len(e.support()) == 1]
    per_qubit = [singles[i:i + 3] for i in range(0, len(singles), 3)]
    for line in _align([[cell(e, s) for e, s in group] for group in per_qubit], ' | '):
        print(line)
    for error, syndrome in table.rows:
        if len(error.support()) > 1:
            print(cell(error, syndrome))
    for syndrome, errors in table.collisions:
        print(f"collision {syndrome}: {' '.join(e.label() for e in errors)}")
    return EXIT_OK


def _codeword_checks(code: StabilizerCode) -> List[tuple]:
    """(state label, generator index, expectation) for every stored or prepared codeword"""
    checks = []
    if code.logical_states:
        for label in code.logical_states:
            state = code.logical_state(label)
            for i, g in enumerate(code.generators, start=1):
                checks.append((label, i, expectation(state, g)))
    else:
        tableau = prepare_codeword(code, rng=np.random.default_rng(0))
        for i, g in enumerate(code.generators, start=1):
            checks.append(('prepared', i, float(tableau.pauli_expectation(g))))
    return checks


def handle_verify_command(args) -> int:
    """Handle verify command"""
    code = code_registry.get(args.code)
    report = validate(code)
    checks = _codeword_checks(code) if report.passed else []
    stabilized = all(abs(value - 1) < 1e-12 for _, _, value in checks)

    if args.format == 'kv':
        print(f"code={code.name}")
        print(f"valid={'yes' if report.passed else 'no'}")
        for failure in report.failures:
            print(f"failure={failure}")
        for label, i, value in checks:
            print(f"{label}.M{i}={value:+.12f}")
    else:
        print(str(report))
        for failure in report.failures:
            print(f"  - {failure}")
        for label, i, value in checks:
            print(f"  <M{i}> on {label}: {value:+.6f}")
        if report.passed:
            print(f"codewords stabilized: {'yes' if stabilized else 'no'}")

    if not report.passed or not stabilized:
        logger.error(f"Verification of {code.name} failed")
        return EXIT_VALIDATION
    return EXIT_OK


def handle_run_command(args) -> int:
    """Handle run command"""
    scenario = load_scenario(args.scenario)
    code = code_registry.get(scenario.code_reference())
    scenario.validate(code)

    rng = np.random.default_rng(scenario.seed)
    protocol = build_protocol(code, scenario.tracked)
    state = prepare_register(code, rng)
    decision = full_cycle(protocol, state, scenario.errors, rng)
    valid = codeword_valid(code, state)

    fields = [
        ('code', code.name),
        ('tracked', str(scenario.tracked)),
        ('injected', ','.join(str(e) for e in scenario.errors) or 'none'),
        ('sigma', str(decision.sigma)),
        ('ancilla', ''.join(str(b) for b in decision.ancilla)),
        ('verdict', decision.verdict),
        ('decision', decision.message()),
        ('codeword_valid', 'yes' if valid else 'no'),
    ]
    if args.format == 'kv':
        for key, value in fields:
            print(f"{key}={value}")
    else:
        for line in _align([[f"{key}:", value] for key, value in fields]):
            print(line)
        if scenario.verbosity > 0:
            print(f"extended generators: {' '.join(str(g) for g in protocol.extended_generators)}")

    if decision.verdict == UNCORRECTABLE and not args.allow_failure:
        logger.error(f"Uncorrectable verdict for {args.scenario}")
        return EXIT_UNCORRECTABLE
    return EXIT_OK


def handle_montecarlo_command(args) -> int:
    """Handle montecarlo command"""
    code = code_registry.get(args.code)
    params = NoiseParams.from_config(epsilon=args.epsilon, lam=args.lam, delta=args.delta,
                                     relapse_type_policy=args.policy)
    stats = monte_carlo(code, params, args.cycles, args.trials, args.seed)
    print(stats.render_kv() if args.format == 'kv' else stats.render_table())
    return EXIT_OK


def handle_budget_command(args) -> int:
    """Handle budget command"""
    budgets = configured_budgets()
    if args.format == 'kv':
        for b in budgets:
            key = b.implementation.lower().replace(' ', '_').replace('/', '_')
            print(f"{key}.tau_dch={power_of_ten(b.tau_dch)}")
            print(f"{key}.tau_gate={power_of_ten(b.tau_gate)}")
            print(f"{key}.n_gates={power_of_ten(b.n_gates)}")
        return EXIT_OK

    rows = [['Implementation', 'tau_dch (s)', 'tau_gate (s)', 'n_gates']]
    for b in budgets:
        rows.append([b.implementation, power_of_ten(b.tau_dch), power_of_ten(b.tau_gate), power_of_ten(b.n_gates)])
    for line in _align(rows):
        print(line)
    return EXIT_OK


def handle_distance_command(args) -> int:
    """Handle distance command"""
    code = code_registry.get(args.code)
    d = distance(code)
    if args.format == 'kv':
        print(f"code={code.name}")
        print(f"distance={d}")
    else:
        print(f"{code.name}: n={code.n} k={code.k} distance={d}")
    if code.declared_distance is not None and code.declared_distance != d:
        logger.error(f"Declared distance {code.declared_distance} of {code.name} differs from computed {d}")
        return EXIT_VALIDATION
    return EXIT_OK


def handle_sim_command(args) -> int:
    """Handle sim command"""
    circuit = circuit_dsl.load(args.circuit)
    state = Tableau(circuit.num_qubits)
    outcomes = state.run(circuit, np.random.default_rng(args.seed))
    start = 0
    for size in circuit.measurement_groups():
        print(''.join(str(b) for b in outcomes[start:start + size]))
        start += size
    if args.dump:
        print(state.dump())
    return EXIT_OK


def handle_bound_command(args) -> int:
    """Handle bound command"""
    rows = [['n', '2(3n+1)', '2^n', 'holds']]
    for n in range(1, args.max_n + 1):
        rows.append([str(n), str(2 * (3 * n + 1)), str(2 ** n), 'yes' if hamming_bound_holds(n) else 'no'])
    for line in _align(rows):
        print(line)
    print(f"smallest n: {hamming_bound_min_n()}")
    return EXIT_OK


HANDLERS = {
    'table': handle_table_command,
    'verify': handle_verify_command,
    'run': handle_run_command,
    'montecarlo': handle_montecarlo_command,
    'budget': handle_budget_command,
    'distance': handle_distance_command,
    'sim': handle_sim_command,
    'bound': handle_bound_command,
}


def run_command(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch to a handler and return the exit status"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    configure_logging(args.verbose)
    try:
        return HANDLERS[args.command](args)
    except (ValueError, IndexError, FileNotFoundError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


def main():
    """Main CLI entry point"""
    sys.exit(run_command())


if __name__ == "__main__":
    main()
