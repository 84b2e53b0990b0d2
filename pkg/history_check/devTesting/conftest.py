import math

import numpy as np
import pytest

from history_check.environment.circuit import Gate, QuantumCircuit, gate, get_instance, instance_catalog
from history_check.environment.pauli import PauliString
from history_check.tasks.hamiltonian import LocalHamiltonian

IDENTITY_GATE = np.eye(2, dtype=complex)


def five_sigma(p: float, n: int) -> float:
    """ tolerance of an empirical frequency over n Bernoulli(p) samples """
    return 5 * math.sqrt(p * (1 - p) / n)


def hamiltonian_of(*terms: str, m: int = None) -> LocalHamiltonian:
    """ LocalHamiltonian from 'coeff * WORD' strings, e.g. hamiltonian_of('1.0 * Z') """
    strings = [PauliString.from_text(t) for t in terms]
    return LocalHamiltonian(m or strings[0].m, {'output': strings}, label='test')


def identity_circuit(n: int = 1, label: str = 'identity') -> QuantumCircuit:
    return QuantumCircuit(n, [Gate('custom', [0], IDENTITY_GATE)], label)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(20201017)))


@pytest.fixture
def catalog():
    return instance_catalog()


@pytest.fixture
def const0():
    return get_instance('const0')


@pytest.fixture
def const1():
    return get_instance('const1')


@pytest.fixture
def bell_circuit():
    return QuantumCircuit(2, [gate('H', 0), gate('CNOT', 0, 1)], 'bell')
