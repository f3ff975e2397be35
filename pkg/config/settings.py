"""
Configuration settings for the tcqec project
"""
import os
import yaml
from pathlib import Path

# Get the project root directory
PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_DIR = PROJECT_ROOT / "config"


def _load_yaml(name):
    config_file = CONFIG_DIR / name

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_file}")

    with open(config_file, 'r', encoding='utf-8') as f:
        return yaml.safe_load(f)


def load_config():
    """Load simulation configuration from YAML file"""
    return _load_yaml("simulation.yaml")


def get_limits_config():
    """Get size limits for the brute-force and dense-state routines"""
    return load_config()['limits']


def get_noise_config():
    """Get default noise parameters"""
    return load_config()['noise']


def get_budget_config():
    """Get decoherence budget rows"""
    return load_config()['budgets']


def get_logging_config():
    """Get logging level and format"""
    return load_config()['logging']


def get_codes_config():
    """Get builtin code definitions"""
    return _load_yaml("codes.yaml")


def _env_flag(name, default):
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


_limits = get_limits_config()
_logging = get_logging_config()

# Environment variables override
SIMULATION_CONFIG = {
    'statevec_max_qubits': int(os.getenv('TCQEC_STATEVEC_MAX_QUBITS', _limits['statevec_max_qubits'])),
    'distance_max_qubits': int(os.getenv('TCQEC_DISTANCE_MAX_QUBITS', _limits['distance_max_qubits'])),
    'table_max_weight': int(_limits['table_max_weight']),
    'tableau_debug': _env_flag('TCQEC_TABLEAU_DEBUG', bool(load_config()['tableau']['debug_checks'])),
}

LOG_LEVEL = os.getenv('TCQEC_LOG_LEVEL', _logging['level'])
LOG_FORMAT = _logging['format']

# Pauli kinds accepted for errors and corrections
PAULI_KINDS = ['X', 'Y', 'Z']

# Relapse type policies for the noise model
RELAPSE_POLICIES = ['same_type', 'uniform_XYZ']

# Default values
DEFAULT_RELAPSE_POLICY = 'same_type'
DEFAULT_CAP = 1.0
