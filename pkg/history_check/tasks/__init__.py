from history_check.tasks.history import ClockLayout, build_history_state, extract_output
from history_check.tasks.hamiltonian import LocalHamiltonian, Thresholds, build_clock_hamiltonian, compute_thresholds, alpha_beta
from history_check.tasks.energy_test import EnergyTestRecord, sample_term, run_energy_test, pass_probability
