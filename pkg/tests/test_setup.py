#!/usr/bin/env python3
"""
Test script to verify tcqec setup and basic functionality
"""
import sys
import os

# Add the project root to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../'))

def test_imports():
    """Test that all modules can be imported"""
    print("Testing imports...")
    
    try:
        from src import PauliOp, Tableau, StabilizerCode, build_protocol, monte_carlo, code_registry
        print("✓ All main modules imported successfully")
        assert True, "All main modules imported successfully"
    except ImportError as e:
        print(f"✗ Import error: {e}")
        assert False, f"Import error: {e}"

def test_config():
    """Test configuration loading"""
    print("Testing configuration...")
    
    try:
        from config.settings import SIMULATION_CONFIG, PAULI_KINDS, get_noise_config
        print(f"✓ Simulation limits loaded: statevec <= {SIMULATION_CONFIG['statevec_max_qubits']} qubits")
        print(f"✓ Pauli kinds: {PAULI_KINDS}")
        print(f"✓ Default noise: {get_noise_config()}")
        assert SIMULATION_CONFIG['statevec_max_qubits'] >= 10, "State-vector limit too small for the ancilla checks"
    except Exception as e:
        print(f"✗ Configuration error: {e}")
        assert False, f"Configuration error: {e}"

def test_builtin_codes():
    """Test builtin codes load and validate"""
    print("Testing builtin codes...")
    
    try:
        from src.codes import builtin, validate
        for name in ('five_qubit', 'steane'):
            report = validate(builtin(name))
            print(f"✓ {report}")
            assert report.passed, str(report)
    except Exception as e:
        print(f"✗ Code setup error: {e}")
        assert False, f"Code setup error: {e}"

def test_protocol():
    """Test one protocol cycle (Steane code, no errors)"""
    print("Testing protocol cycle...")
    
    try:
        import numpy as np
        from src.codes import builtin
        from src.tcqec import build_protocol, full_cycle, prepare_register
        
        code = builtin('steane')
        state = prepare_register(code)
        decision = full_cycle(build_protocol(code, 3), state, [], np.random.default_rng(0))
        print(f"✓ Cycle verdict: {decision.verdict}")
        
        assert decision.verdict == 'no_error', "Error-free cycle reported an error"
    except Exception as e:
        print(f"✗ Protocol error: {e}")
        assert False, f"Protocol error: {e}"

def main():
    """Run all tests"""
    print("tcqec Setup Test")
    print("=" * 50)
    
    tests = [
        test_imports,
        test_config,
        test_builtin_codes,
        test_protocol
    ]
    
    passed = 0
    total = len(tests)
    
    for test in tests:
        try:
            test()
            passed += 1
        except AssertionError as e:
            print(f"✗ Test failed: {e}")
        except Exception as e:
            print(f"✗ Unexpected error: {e}")
        print()
    
    print("=" * 50)
    print(f"Tests passed: {passed}/{total}")
    
    if passed == total:
        print("✓ All tests passed! tcqec is ready to use.")
        print("\nNext steps:")
        print("1. Run: python -m src.cli table steane")
        print("2. Run: python -m src.cli run samples/steane_relapse_plus_new.stab-scn")
        print("3. Run: python -m src.cli montecarlo --seed 1")
    else:
        print("✗ Some tests failed. Please check the errors above.")
        sys.exit(1)

if __name__ == "__main__":
    main()
