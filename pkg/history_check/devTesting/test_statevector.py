import math

import numpy as np
import pytest

from history_check.environment.circuit import Gate, QuantumCircuit, gate
from history_check.environment.pauli import PAULI_MATRICES, PauliString
from history_check.environment.statevector import (IntegrityError, ResourceLimitError, StateVector, apply_gate, expectation,
                                                   fidelity, ground_energy, hamiltonian_matrix, measure_qubit_pauli,
                                                   run_prefixes)
from history_check.tasks.hamiltonian import LocalHamiltonian, build_clock_hamiltonian
from history_check.tasks.history import build_history_state
from history_check.devTesting.conftest import five_sigma, hamiltonian_of

S2 = 1 / math.sqrt(2)
BELL = np.array([S2, 0, 0, S2])


def random_state(rng, m):
    amps = rng.normal(size=2 ** m) + 1j * rng.normal(size=2 ** m)
    return StateVector(amps / np.linalg.norm(amps))


def random_unitary(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_single_qubit_gates():
    np.testing.assert_allclose(apply_gate(StateVector.zeros(1), gate('X', 0)).amps, [0, 1])
    np.testing.assert_allclose(apply_gate(StateVector.zeros(1), gate('H', 0)).amps, [S2, S2])


def test_cnot_control_is_first_target():
    # control qubit 0 set, i.e. index 1
    assert np.argmax(np.abs(apply_gate(StateVector.basis(2, 1), gate('CNOT', 0, 1)).amps)) == 3
    assert np.argmax(np.abs(apply_gate(StateVector.basis(2, 2), gate('CNOT', 1, 0)).amps)) == 3
    assert np.argmax(np.abs(apply_gate(StateVector.basis(2, 2), gate('CNOT', 0, 1)).amps)) == 2


def test_apply_gate_matches_dense_embedding(rng):
    psi = random_state(rng, 3)
    u = random_unitary(rng, 4)
    # targets (2, 0): qubit 2 is the low factor of u, qubit 1 untouched
    out = apply_gate(psi, Gate('custom', [2, 0], u))
    perm = np.zeros((8, 8))
    for i in range(8):
        b0, b1, b2 = i & 1, (i >> 1) & 1, (i >> 2) & 1
        perm[b2 | (b0 << 1) | (b1 << 2), i] = 1
    dense = perm.T @ np.kron(np.eye(2), u) @ perm
    np.testing.assert_allclose(out.amps, dense @ psi.amps, atol=1e-12)
    assert out.norm() == pytest.approx(1.0, abs=1e-10)
    assert psi.amps.flags.writeable is False


def test_apply_gate_with_offset_and_range_check():
    out = apply_gate(StateVector.zeros(3), gate('X', 0), offset=2)
    assert np.argmax(np.abs(out.amps)) == 4
    with pytest.raises(ValueError, match='outside'):
        apply_gate(StateVector.zeros(2), gate('X', 0), offset=2)


def test_run_prefixes(bell_circuit):
    prefixes = run_prefixes(QuantumCircuit(1, [gate('X', 0)]))
    np.testing.assert_allclose([p.amps for p in prefixes], [[1, 0], [0, 1]])
    prefixes = run_prefixes(bell_circuit)
    assert len(prefixes) == 3
    np.testing.assert_allclose(prefixes[0].amps, [1, 0, 0, 0])
    np.testing.assert_allclose(prefixes[1].amps, [S2, S2, 0, 0], atol=1e-12)
    np.testing.assert_allclose(prefixes[2].amps, BELL, atol=1e-12)


def test_state_constructors():
    assert StateVector.product('1+').m == 2
    np.testing.assert_allclose(StateVector.product('1+').amps, [0, S2, 0, S2], atol=1e-12)
    with pytest.raises(ValueError, match='normalized'):
        StateVector([1, 1])
    with pytest.raises(ValueError, match='power of two'):
        StateVector([1, 0, 0])
    with pytest.raises(ResourceLimitError):
        StateVector.zeros(StateVector.MAX_QUBITS + 1)
    assert StateVector.product('0').to_json() == '[[1.0, 0.0], [0.0, 0.0]]'


def test_deterministic_measurements(rng):
    outcome, post = measure_qubit_pauli(StateVector.zeros(1), 0, 'Z', rng)
    assert outcome.value == 1
    np.testing.assert_allclose(post.amps, [1, 0])
    outcome, post = measure_qubit_pauli(StateVector.product('+'), 0, 'X', rng)
    assert outcome.value == 1
    np.testing.assert_allclose(post.amps, [S2, S2], atol=1e-12)
    outcome, _ = measure_qubit_pauli(StateVector([S2, 1j * S2]), 0, 'Y', rng)
    assert outcome.value == 1


def test_measurement_is_idempotent(rng):
    psi = random_state(rng, 3)
    for axis in 'XYZ':
        for _ in range(20):
            first, post = measure_qubit_pauli(psi, 1, axis, rng)
            second, _ = measure_qubit_pauli(post, 1, axis, rng)
            assert first.value == second.value


def test_x_measurement_of_zero_gives_plus_minus_states(rng):
    values = set()
    for _ in range(50):
        outcome, post = measure_qubit_pauli(StateVector.zeros(1), 0, 'X', rng)
        values.add(outcome.value)
        np.testing.assert_allclose(post.amps, [S2, outcome.value * S2], atol=1e-12)
    assert values == {1, -1}


def test_born_rule_frequencies(rng):
    psi = random_state(rng, 2)
    n = 10 ** 5
    for axis in 'XY':
        p = 0.5 + 0.5 * expectation(psi, hamiltonian_of(f'1.0 * I{axis}'))
        plus = sum(measure_qubit_pauli(psi, 1, axis, rng)[0].value == 1 for _ in range(n))
        assert abs(plus / n - p) <= five_sigma(p, n)


def test_vanished_state_raises_integrity_error(rng):
    with pytest.raises(IntegrityError):
        measure_qubit_pauli(StateVector([0, 0], check=False), 0, 'Z', rng)


def test_expectation_examples(const0):
    assert expectation(StateVector.zeros(1), hamiltonian_of('1.0 * Z')) == pytest.approx(1.0)
    assert expectation(StateVector(BELL), hamiltonian_of('1.0 * ZZ')) == pytest.approx(1.0)
    H0 = build_clock_hamiltonian(const0.circuit, 'H0')
    assert expectation(build_history_state(const0.circuit, 'psi0'), H0) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        expectation(StateVector.zeros(2), H0)


def test_expectation_matches_dense_oracle(rng, catalog):
    for inst in catalog.values():
        H = build_clock_hamiltonian(inst.circuit, 'H0')
        dense = sum(s.coeff * _dense_word(s) for s in H.terms)
        np.testing.assert_allclose(hamiltonian_matrix(H).toarray(), dense, atol=1e-12)
        psi = random_state(rng, H.m)
        assert expectation(psi, H) == pytest.approx(np.vdot(psi.amps, dense @ psi.amps).real, abs=1e-9)
        assert ground_energy(H) <= expectation(psi, H) + 1e-9


def _dense_word(s):
    out = np.eye(1)
    for a in s.axes:
        out = np.kron(PAULI_MATRICES[a], out)
    return out


def test_ground_energy_examples(const0, const1):
    assert ground_energy(hamiltonian_of('1.0 * Z')) == pytest.approx(-1.0)
    assert ground_energy(build_clock_hamiltonian(const0.circuit, 'H0')) == pytest.approx(0.0, abs=1e-8)
    b = ground_energy(build_clock_hamiltonian(const1.circuit, 'H0'))
    assert b == pytest.approx(1 - S2, abs=1e-8)


def test_ground_energy_sparse_path_agrees_with_dense(catalog):
    # ent0 has 5 qubits; a padded copy on 11 qubits goes through the Lanczos branch
    H = build_clock_hamiltonian(catalog['ent0'].circuit, 'H1')
    padded = LocalHamiltonian(11, {'output': [PauliString(s.axes + 'I' * 6, s.coeff) for s in H.terms]})
    assert ground_energy(padded) == pytest.approx(ground_energy(H), abs=1e-8)


def test_ground_energy_refuses_large_registers():
    H = LocalHamiltonian(15, {'output': [PauliString('Z' + 'I' * 14, 1.0)]})
    with pytest.raises(ResourceLimitError, match='analytic'):
        ground_energy(H)


def test_fidelity():
    assert fidelity(StateVector.product('+'), StateVector.zeros(1)) == pytest.approx(0.5)


def test_hamiltonian_matrix_is_sparse_and_cached(const1):
    H = build_clock_hamiltonian(const1.circuit, 'H0')
    matrix = hamiltonian_matrix(H)
    assert matrix.format == 'csr'
    assert matrix.shape == (4, 4)
    assert hamiltonian_matrix(H) is matrix
