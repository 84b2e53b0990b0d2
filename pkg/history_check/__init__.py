from history_check.environment.circuit import Instance, QuantumCircuit, builtin_instances, get_instance
from history_check.tasks.hamiltonian import build_clock_hamiltonian, compute_thresholds
from history_check.agents.protocol import run_protocol, prepare_protocol
from history_check.testbed.statistics import estimate_statistics
