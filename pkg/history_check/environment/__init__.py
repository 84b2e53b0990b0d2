from history_check.environment.pauli import PauliString, decompose_operator, string_to_matrix
from history_check.environment.circuit import Gate, QuantumCircuit, Instance, gate, complement_circuit, acceptance_probability
from history_check.environment.statevector import StateVector, MeasurementOutcome, apply_gate, measure_qubit_pauli, expectation, ground_energy, hamiltonian_matrix
