#!/usr/bin/env python3
"""
Tests for cli.py - Command Line Interface
"""
import pytest
import sys
import os
from unittest.mock import patch

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../'))

from src.cli import main, run_command, build_parser, EXIT_OK, EXIT_VALIDATION, EXIT_UNCORRECTABLE, EXIT_USAGE

SAMPLES_DIR = os.path.join(os.path.dirname(__file__), '..', 'samples')


def sample(name):
    return os.path.join(SAMPLES_DIR, name)


class TestCLI:
    """Test CLI functionality"""

    def test_main_no_args(self, capsys):
        """Test main with no arguments prints help"""
        with patch('sys.argv', ['tcqec']):
            with pytest.raises(SystemExit) as excinfo:
                main()
            assert excinfo.value.code == EXIT_USAGE
            captured = capsys.readouterr()
            assert "time-correlated quantum error correction" in captured.out

    def test_main_help(self, capsys):
        """Test main with help argument"""
        with patch('sys.argv', ['tcqec', '--help']):
            with pytest.raises(SystemExit) as excinfo:
                main()
            assert excinfo.value.code == EXIT_OK
            captured = capsys.readouterr()
            assert "montecarlo" in captured.out

    def test_unknown_command(self):
        """Test an unknown subcommand is a usage error"""
        assert run_command(['teleport']) == EXIT_USAGE

    def test_parser_commands(self):
        """Test every subcommand is registered"""
        parser = build_parser()
        args = parser.parse_args(['sim', 'x.stab', '--seed', '3'])
        assert args.command == 'sim'
        assert args.seed == 3


class TestTableCommand:
    """Test the table command"""

    def test_steane_table(self, capsys):
        """Test Steane cells with generator lists"""
        assert run_command(['table', 'steane']) == EXIT_OK
        out = capsys.readouterr().out
        assert "Syndrome table for steane (n=7, k=1)" in out
        assert "X1 000001 (M6)" in out
        assert "Z3 011000 (M2,M3)" in out
        assert "Y7 111111 (M1,M2,M3,M4,M5,M6)" in out
        assert "collision" not in out

    def test_five_qubit_kv(self, capsys):
        """Test key=value output"""
        assert run_command(['table', 'five_qubit', '--format', 'kv']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert "X1=0001" in lines
        assert "Z4=1001" in lines
        assert len(lines) == 15

    def test_weight_two_collisions(self, capsys):
        """Test weight-2 tables list the X1X2/Z4 collision"""
        assert run_command(['table', 'five_qubit', '--max-weight', '2', '--format', 'kv']) == EXIT_OK
        out = capsys.readouterr().out
        collision = [line for line in out.splitlines() if line.startswith("collision.1001=")][0]
        assert "Z4" in collision.split('=')[1].split(',')
        assert "X1X2" in collision.split('=')[1].split(',')

    def test_unknown_code(self, capsys):
        """Test unknown codes exit with 1"""
        assert run_command(['table', 'shor']) == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err

    def test_invalid_format(self):
        """Test invalid --format values"""
        assert run_command(['table', 'steane', '--format', 'json']) == EXIT_USAGE


class TestVerifyCommand:
    """Test the verify command"""

    def test_builtin_codes(self, capsys):
        """Test both builtin codes verify"""
        for name in ('five_qubit', 'steane'):
            assert run_command(['verify', name]) == EXIT_OK
            out = capsys.readouterr().out
            assert "valid stabilizer code" in out
            assert "codewords stabilized: yes" in out

    def test_kv(self, capsys):
        """Test key=value output"""
        assert run_command(['verify', 'five_qubit', '--format', 'kv']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert "valid=yes" in lines
        assert "zero.M1=+1.000000000000" in lines

    def test_invalid_code_file(self, tmp_path, capsys):
        """Test non-commuting generators exit with 1"""
        path = tmp_path / "bad.code"
        path.write_text("name: bad\nn: 2\nk: 0\nXI\nZI\n")
        assert run_command(['verify', str(path)]) == EXIT_VALIDATION
        assert "do not commute" in capsys.readouterr().out

    def test_code_file_prepared_codeword(self, capsys):
        """Test codes without stored states are checked on a prepared codeword"""
        assert run_command(['verify', sample('five_qubit.code')]) == EXIT_OK
        assert "<M4> on prepared: +1.000000" in capsys.readouterr().out


class TestRunCommand:
    """Test the run command"""

    def test_double_error_example(self, capsys):
        """Test the Z3 relapse plus new Z5 example"""
        assert run_command(['run', sample('steane_relapse_plus_new.stab-scn'), '--format', 'kv']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert "sigma=110000" in lines
        assert "ancilla=01" in lines
        assert "verdict=double" in lines
        assert "decision=correct Z on qubit 3 and Z on qubit 5" in lines
        assert "codeword_valid=yes" in lines

    def test_new_error_example(self, capsys):
        """Test the lone new Z6 example"""
        assert run_command(['run', sample('steane_new_error.stab-scn')]) == EXIT_OK
        out = capsys.readouterr().out
        assert "correct Z on qubit 6" in out
        assert "single" in out

    def test_uncorrectable(self, tmp_path, capsys):
        """Test exit 2 unless failures are allowed"""
        path = tmp_path / "two_new.stab-scn"
        path.write_text("code: steane\ntracked: 3\nerror: 5 Z\nerror: 6 X\nseed: 1\n")
        assert run_command(['run', str(path)]) == EXIT_UNCORRECTABLE
        assert "uncorrectable" in capsys.readouterr().out
        assert run_command(['run', str(path), '--allow-failure']) == EXIT_OK

    def test_verbose_scenario(self, tmp_path, capsys):
        """Test verbosity prints the extended generators"""
        path = tmp_path / "verbose.stab-scn"
        path.write_text("code: steane\ntracked: 3\nseed: 1\nverbosity: 1\n")
        assert run_command(['run', str(path)]) == EXIT_OK
        assert "+IXXIIXXXI" in capsys.readouterr().out

    def test_bad_scenario(self, tmp_path, capsys):
        """Test malformed scenarios exit with 1"""
        path = tmp_path / "bad.stab-scn"
        path.write_text("code: steane\ntracked: 12\nseed: 1\n")
        assert run_command(['run', str(path)]) == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err


class TestMonteCarloCommand:
    """Test the montecarlo command"""

    def test_seed_required(self):
        """Test a missing --seed is a usage error"""
        assert run_command(['montecarlo', '--trials', '2']) == EXIT_USAGE

    def test_deterministic_output(self, capsys):
        """Test equal seeds print identical output"""
        argv = ['montecarlo', '--epsilon', '0.2', '--lambda', '0.9', '--cycles', '3',
                '--trials', '5', '--seed', '11', '--format', 'kv']
        assert run_command(argv) == EXIT_OK
        first = capsys.readouterr().out
        assert run_command(argv) == EXIT_OK
        second = capsys.readouterr().out
        assert first == second
        assert "seed=11" in first
        assert "lambda=0.9" in first

    def test_table_format(self, capsys):
        """Test the table header"""
        assert run_command(['montecarlo', '--code', 'five_qubit', '--cycles', '2',
                            '--trials', '2', '--seed', '1']) == EXIT_OK
        out = capsys.readouterr().out
        assert "Monte Carlo: code=five_qubit" in out
        assert "failure_rate" in out


class TestBudgetCommand:
    """Test the budget command"""

    def test_table(self, capsys):
        """Test every row"""
        assert run_command(['budget']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("Implementation")
        rows = {line.split('  ')[0]: line.split()[-1] for line in lines[1:]}
        assert rows == {
            'Nuclear spin': '10^7',
            'Trapped Indium ion': '10^13',
            'Quantum dots/charge': '10^3',
            'Quantum dots/spin': '10^3',
            'Optical cavity': '10^9',
        }

    def test_kv(self, capsys):
        """Test key=value output"""
        assert run_command(['budget', '--format', 'kv']) == EXIT_OK
        assert "nuclear_spin.n_gates=10^7" in capsys.readouterr().out.splitlines()


class TestDistanceCommand:
    """Test the distance command"""

    def test_builtin(self, capsys):
        """Test the declared distance is confirmed"""
        assert run_command(['distance', 'five_qubit', '--format', 'kv']) == EXIT_OK
        assert "distance=3" in capsys.readouterr().out.splitlines()

    def test_code_file(self, capsys):
        """Test code files without a declared distance"""
        assert run_command(['distance', sample('five_qubit.code')]) == EXIT_OK
        assert "distance=3" in capsys.readouterr().out


class TestSimCommand:
    """Test the sim command"""

    def test_regression_circuit(self, capsys):
        """Test the Steane regression prints 10, 100011, 000000"""
        assert run_command(['sim', sample('steane_regression.stab'), '--seed', '0']) == EXIT_OK
        assert capsys.readouterr().out == "10\n100011\n000000\n"

    def test_seed_independent(self, capsys):
        """Test deterministic circuits print the same for any seed"""
        outputs = set()
        for seed in (1, 2, 3):
            run_command(['sim', sample('steane_regression.stab'), '--seed', str(seed)])
            outputs.add(capsys.readouterr().out)
        assert len(outputs) == 1

    def test_bell_dump(self, capsys):
        """Test correlated Bell outcomes and the final rows"""
        assert run_command(['sim', sample('bell.stab'), '--seed', '4', '--dump']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] in ("00", "11")
        assert len(lines) == 3

    def test_missing_file(self, capsys):
        """Test missing circuits exit with 1"""
        assert run_command(['sim', sample('missing.stab'), '--seed', '0']) == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err

    def test_parse_error(self, tmp_path, capsys):
        """Test parse errors name the line"""
        path = tmp_path / "broken.stab"
        path.write_text("qubits 1\nh 2\n")
        assert run_command(['sim', str(path), '--seed', '0']) == EXIT_VALIDATION
        assert "line 2" in capsys.readouterr().err


class TestBoundCommand:
    """Test the bound command"""

    def test_smallest_n(self, capsys):
        """Test the Hamming bound first holds at n = 5"""
        assert run_command(['bound']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[-1] == "smallest n: 5"
        assert lines[5].split() == ['5', '32', '32', 'yes']
        assert lines[4].split() == ['4', '26', '16', 'no']
