#!/usr/bin/env python3

import pytest

import sys
import os

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../'))          

# Import targets
import src
from src import codes as codes_module
from src.codes import code_registry


@pytest.fixture
def fresh_registry(monkeypatch):
    # Start every test with an empty builtin cache
    monkeypatch.setattr(code_registry, "_cache", {}, raising=True)
    return monkeypatch


def test_all_names_exported():
    missing = [name for name in src.__all__ if not hasattr(src, name)]
    assert missing == []


def test_version():
    assert src.__version__ == "1.0.0"


def test_registry_caches_builtins(fresh_registry):
    calls = []
    original = codes_module.builtin

    def counting_builtin(name):
        calls.append(name)
        return original(name)

    fresh_registry.setattr(codes_module, "builtin", counting_builtin, raising=True)

    first = code_registry.get("steane")
    second = code_registry.get("steane")

    assert first is second
    assert calls == ["steane"]
    assert first.n == 7 and first.k == 1


def test_registry_loads_code_files(fresh_registry, tmp_path):
    path = tmp_path / "repetition.code"
    path.write_text("name: repetition\nn: 3\nk: 1\nZZI\nIZZ\n")

    code = code_registry.get(str(path))

    assert code.name == "repetition"
    assert [str(g) for g in code.generators] == ["+ZZI", "+IZZ"]
    # files are re-read, only builtins are cached
    assert str(path) not in code_registry._cache


def test_registry_unknown_name(fresh_registry):
    with pytest.raises(ValueError) as excinfo:
        code_registry.get("shor")
    assert "five_qubit" in str(excinfo.value)
    assert "steane" in str(excinfo.value)


def test_registry_lists_builtins():
    assert sorted(code_registry.list_builtins()) == ["five_qubit", "steane"]


def test_end_to_end_cycle():
    import numpy as np

    code = code_registry.get("steane")
    protocol = src.build_protocol(code, 3)
    state = src.tcqec.prepare_register(code)
    decision = src.full_cycle(protocol, state,
                              [src.InjectedError(3, 'Z', True), src.InjectedError(5, 'Z')],
                              np.random.default_rng(0))

    assert decision.verdict == "double"
    assert decision.to_dict()["errors"] == ["Z3", "Z5"]
