"""
History states over a unary domain-wall clock and output extraction by clock measurement.

Global qubit order: work qubits 0..n-1, then clock qubits c_1..c_T at n..n+T-1.
Time t is the clock word with c_1..c_t set and the rest clear.
"""
import collections
import logging
import math

import numpy as np

from typing import Dict, Optional

from history_check.environment.circuit import QuantumCircuit, complement_circuit
from history_check.environment.pauli import terms_to_sparse
from history_check.environment.statevector import StateVector, ResourceLimitError, measure_qubit_pauli, run_prefixes

logger = logging.getLogger(__name__)

VARIANTS = ('psi0', 'psi1')


class ClockLayout(collections.namedtuple('ClockLayout', ['n', 'T'])):
    """ register layout of n work qubits followed by a T-qubit unary clock """
    @property
    def m(self) -> int:
        return self.n + self.T

    def clock_qubit(self, t: int) -> int:
        """ global index of clock qubit c_t, 1 <= t <= T """
        if not 1 <= t <= self.T:
            raise ValueError(f'clock qubit c_{t} does not exist for T={self.T}')
        return self.n + t - 1

    def codeword(self, t: int) -> int:
        """ the clock bits of time t as an integer over the clock qubits (c_1 lowest) """
        if not 0 <= t <= self.T:
            raise ValueError(f'time {t} out of range 0..{self.T}')
        return (1 << t) - 1

    def codeword_index(self, t: int) -> int:
        """ the clock word of time t placed at its position in the global amplitude index """
        return self.codeword(t) << self.n

    def decode(self, bits: int) -> Optional[int]:
        """
        :param bits: clock bits as an integer (c_1 lowest)
        :return: the time t, or None when the bits are not a domain-wall codeword
        """
        t = bin(bits).count('1')
        return t if bits == self.codeword(t) else None


def layout_of(c: QuantumCircuit) -> ClockLayout:
    return ClockLayout(c.n, c.T)


def build_history_state(c: QuantumCircuit, variant: str = 'psi0') -> StateVector:
    """
    (1/sqrt(T+1)) sum_t U_t...U_1|0^n> (x) |t>.

    psi1 is the history state of the complement circuit, i.e. X on the output qubit at t = T.
    """
    if variant not in VARIANTS:
        raise ValueError(f'variant must be one of {VARIANTS}, got {variant!r}')
    layout = layout_of(c)
    if layout.m > StateVector.MAX_QUBITS:
        raise ResourceLimitError(layout.m, StateVector.MAX_QUBITS, 'history state')
    if variant == 'psi1':
        c = complement_circuit(c)
    amps = np.zeros(2 ** layout.m, dtype=complex)
    work_dim = 2 ** c.n
    for t, prefix in enumerate(run_prefixes(c)):
        offset = layout.codeword_index(t)
        amps[offset:offset + work_dim] += prefix.amps
    return StateVector(amps / math.sqrt(c.T + 1))


ExtractionResult = collections.namedtuple('ExtractionResult', ['success', 'work_state', 'clock_time', 'status'])


def extract_output(psi: StateVector, layout: ClockLayout, rng: np.random.Generator) -> ExtractionResult:
    """
    Measures every clock qubit in Z; success when the clock reads time T.

    :return: ExtractionResult with status 'ok', 'wrong_time' or 'invalid_clock';
        work_state is the normalized work register on success, else None
    """
    if psi.m != layout.m:
        raise ValueError(f'state on {psi.m} qubits does not match layout with m={layout.m}')
    state = psi
    bits = 0
    for t in range(1, layout.T + 1):
        outcome, state = measure_qubit_pauli(state, layout.clock_qubit(t), 'Z', rng)
        if outcome.value == -1:
            bits |= 1 << (t - 1)
    clock_time = layout.decode(bits)
    if clock_time is None:
        return ExtractionResult(False, None, None, 'invalid_clock')
    if clock_time != layout.T:
        return ExtractionResult(False, None, clock_time, 'wrong_time')
    offset = layout.codeword_index(layout.T)
    work = state.amps[offset:offset + 2 ** layout.n]
    return ExtractionResult(True, StateVector(work / np.linalg.norm(work)), clock_time, 'ok')


def term_energies(psi: StateVector, H) -> Dict[str, float]:
    """ energy of psi in every structural part of H (input, clock, propagation, output) """
    if psi.m != H.m:
        raise ValueError(f'Hamiltonian on {H.m} qubits, state on {psi.m}')
    energies = collections.OrderedDict()
    for tag, terms in H.parts.items():
        value = np.vdot(psi.amps, terms_to_sparse(terms, H.m) @ psi.amps)
        energies[tag] = float(value.real)
    return energies
