"""
Scenario files (`.stab-scn`) for single protocol cycles

Line-oriented `key: value` text, `#` comments:

    code: steane          builtin name or path to a .code file
    tracked: 3            qubit corrected in the previous cycle (1-based)
    error: 3 Z            target (qubit, A or B) and kind; repeatable
    error: 5 Z
    seed: 7
    verbosity: 0
"""
from typing import Dict, Any, List, Optional, Union
from pathlib import Path
import logging

from .codes import StabilizerCode
from .tcqec import InjectedError

logger = logging.getLogger(__name__)

SCENARIO_KEYS = ['code', 'tracked', 'error', 'seed', 'verbosity']
REQUIRED_KEYS = ['code', 'tracked', 'seed']


class ScenarioError(ValueError):
    """Raised for malformed scenario text, carries the 1-based line number"""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class ScenarioConfig:
    """One protocol cycle to run: code, tracked qubit, injected errors and seed"""

    def __init__(self, code: str, tracked: int, errors: List[InjectedError], seed: int,
                 verbosity: int = 0, base_dir: Optional[Path] = None):
        self.code = code
        self.tracked = tracked
        self.errors = errors
        self.seed = seed
        self.verbosity = verbosity
        self.base_dir = base_dir

    def code_reference(self) -> str:
        """Code name, or a code file path resolved against the scenario's directory"""
        if self.base_dir is not None and not Path(self.code).is_absolute():
            candidate = self.base_dir / self.code
            if candidate.exists():
                return str(candidate)
        return self.code

    def validate(self, code: StabilizerCode):
        """Check the tracked qubit and every error target against the code length"""
        if not 1 <= self.tracked <= code.n:
            raise ValueError(f"Tracked qubit {self.tracked} out of range 1..{code.n} for code {code.name}")
        for error in self.errors:
            error.position(code.n)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'code': self.code,
            'tracked': self.tracked,
            'errors': [e.to_dict() for e in self.errors],
            'seed': self.seed,
            'verbosity': self.verbosity,
        }

    def __str__(self):
        errors = ', '.join(str(e) for e in self.errors) or 'none'
        return f"ScenarioConfig(code='{self.code}', tracked={self.tracked}, errors=[{errors}], seed={self.seed})"

    def __repr__(self):
        return self.__str__()


def _parse_int(line_number: int, key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ScenarioError(line_number, f"'{key}' must be an integer, got '{value}'")


def parse_scenario(text: str, base_dir: Optional[Path] = None) -> ScenarioConfig:
    """
    Parse scenario text

    Errors on the tracked qubit are marked correlated.

    Raises:
        ScenarioError: on unknown keys, duplicates, bad values or missing required keys
    """
    values: Dict[str, Any] = {}
    raw_errors = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if ':' not in line:
            raise ScenarioError(line_number, f"expected 'key: value', got '{line}'")
        key, value = (part.strip() for part in line.split(':', 1))
        key = key.lower()
        if key not in SCENARIO_KEYS:
            raise ScenarioError(line_number, f"unknown key '{key}'. Must be one of: {', '.join(SCENARIO_KEYS)}")
        if key == 'error':
            tokens = value.split()
            if len(tokens) != 2:
                raise ScenarioError(line_number, f"'error' takes a target and a kind, got '{value}'")
            raw_errors.append((line_number, tokens[0], tokens[1]))
            continue
        if key in values:
            raise ScenarioError(line_number, f"duplicate key '{key}'")
        if key == 'code':
            if not value:
                raise ScenarioError(line_number, "'code' is empty")
            values[key] = value
        else:
            values[key] = _parse_int(line_number, key, value)

    for key in REQUIRED_KEYS:
        if key not in values:
            raise ScenarioError(max(1, len(text.splitlines())), f"missing '{key}:' line")

    errors = []
    for line_number, target, kind in raw_errors:
        try:
            error = InjectedError(target, kind)
        except ValueError as e:
            raise ScenarioError(line_number, str(e))
        error.correlated = error.target == values['tracked']
        errors.append(error)

    config = ScenarioConfig(values['code'], values['tracked'], errors, values['seed'],
                            values.get('verbosity', 0), base_dir)
    logger.debug(f"Parsed {config}")
    return config


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read and parse a `.stab-scn` file"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Scenario file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return parse_scenario(f.read(), base_dir=path.parent)
