"""
Clock Hamiltonians H0 = H(c) and H1 = H(c') as weighted Pauli sums, and the energy
thresholds a, b with the pass-probability thresholds alpha, beta derived from them.
"""
import collections
import functools
import logging
import math
import warnings

import numpy as np

from typing import Dict, List, Optional, Sequence, Tuple

from history_check.environment.circuit import Instance, QuantumCircuit, complement_circuit, get_instance
from history_check.environment.pauli import (COEFF_CUTOFF, PauliString, decompose_operator,
                                             hermitian_product_terms, local_kron, merge_terms, terms_to_sparse)
from history_check.environment.statevector import ground_energy
from history_check.tasks.history import ClockLayout, layout_of

logger = logging.getLogger(__name__)

PARTS = ('input', 'clock', 'propagation', 'output')
HAMILTONIAN_VARIANTS = ('H0', 'H1')
# ground energies are only this accurate, smaller promise gaps count as collapsed
GAP_TOLERANCE = 1e-8

P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)
RAISE = np.array([[0, 0], [1, 0]], dtype=complex)    # |1><0|


class GapCollapseError(Exception):
    """ the promise gap b - a is not positive, the instance cannot be verified """
    def __init__(self, name: str, a: Optional[float] = None, b: Optional[float] = None, reason: str = ''):
        self.name = name
        self.a = a
        self.b = b
        self.reason = reason
        super().__init__(str(self))

    def __str__(self):
        if self.reason:
            return f'gap collapse on {self.name}: {self.reason}'
        return f'gap collapse on {self.name}: b = {self.b:.6g} does not exceed a = {self.a:.6g}'


class LocalHamiltonian:
    """
    H = sum_S d_S S over distinct Pauli words.

    :param m: register size
    :param parts: per structural part the Pauli terms it contributes
    :param label: name used in logs and exports
    :param identity_shift: coefficient of the identity word removed from H, 0 if kept
    """
    def __init__(self, m: int, parts: Dict[str, Sequence[PauliString]], label: str = '', identity_shift: float = 0.0):
        self.m = int(m)
        self.label = label
        self.identity_shift = float(identity_shift)
        self.parts = collections.OrderedDict((tag, merge_terms(terms)) for tag, terms in parts.items())
        for tag, terms in self.parts.items():
            for s in terms:
                if s.m != self.m:
                    raise ValueError(f'{tag} term {s.to_text()} does not act on {self.m} qubits')

        self.terms = merge_terms([s for terms in self.parts.values() for s in terms])
        index_of = {s.axes: i for i, s in enumerate(self.terms)}
        self.term_tags = collections.OrderedDict(
            (tag, sorted({index_of[s.axes] for s in terms if s.axes in index_of})) for tag, terms in self.parts.items())

        weights = np.array([abs(s.coeff) for s in self.terms])
        self.sum_abs = float(weights.sum())
        if not self.sum_abs > 0:
            raise ValueError(f'Hamiltonian {label!r} has no terms')
        self.cdf = np.cumsum(weights) / self.sum_abs
        self._matrix = None

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f'LocalHamiltonian({self.label!r}, m={self.m}, terms={len(self.terms)}, sum_abs={self.sum_abs:.6g})'

    def sparse_matrix(self):
        if self._matrix is None:
            self._matrix = terms_to_sparse(self.terms, self.m)
        return self._matrix

    def dense_matrix(self) -> np.ndarray:
        return self.sparse_matrix().toarray()

    def identity_coeff(self) -> float:
        for s in self.terms:
            if s.is_identity():
                return s.coeff
        return 0.0

    def tag_of(self, index: int) -> List[str]:
        return [tag for tag, indices in self.term_tags.items() if index in indices]

    def without_identity(self) -> 'LocalHamiltonian':
        """
        The same Hamiltonian without its identity word; energies drop by identity_shift.
        """
        shift = self.identity_coeff()
        if shift == 0.0:
            return self
        warnings.warn(f'identity term {shift!r} dropped from {self.label}, thresholds are shifted to match')
        parts = {tag: [s for s in terms if not s.is_identity()] for tag, terms in self.parts.items()}
        return LocalHamiltonian(self.m, parts, self.label, self.identity_shift + shift)

    def to_records(self) -> List[Dict]:
        """ JSON export, one {word, coeff, tag} object per term """
        return [{'word': s.axes, 'coeff': s.coeff, 'text': s.to_text(), 'tag': ','.join(self.tag_of(i))}
                for i, s in enumerate(self.terms)]


def _clock_projector(layout: ClockLayout, t: int) -> Tuple[np.ndarray, List[int]]:
    """ local projector onto clock time t: c_1 clear, c_t set and c_{t+1} clear, or c_T set """
    T = layout.T
    if t == 0:
        return P0, [layout.clock_qubit(1)]
    if t == T:
        return P1, [layout.clock_qubit(T)]
    return local_kron([P1, P0]), [layout.clock_qubit(t), layout.clock_qubit(t + 1)]


def _clock_transition(layout: ClockLayout, t: int) -> Tuple[np.ndarray, List[int]]:
    """ local |t><t-1| on c_{t-1}, c_t, c_{t+1}, outer factors dropped at the boundaries """
    factors, support = [], []
    if t > 1:
        factors.append(P1)
        support.append(layout.clock_qubit(t - 1))
    factors.append(RAISE)
    support.append(layout.clock_qubit(t))
    if t < layout.T:
        factors.append(P0)
        support.append(layout.clock_qubit(t + 1))
    return local_kron(factors), support


def build_clock_hamiltonian(c: QuantumCircuit, variant: str = 'H0', keep_identity: bool = True) -> LocalHamiltonian:
    """
    H_in + H_clock + H_prop + H_out of the circuit (H0) or of its complement (H1).

    :param keep_identity: keep the identity word among the sampled terms
    """
    if variant not in HAMILTONIAN_VARIANTS:
        raise ValueError(f'variant must be one of {HAMILTONIAN_VARIANTS}, got {variant!r}')
    if variant == 'H1':
        c = complement_circuit(c)
    layout = layout_of(c)
    n, T, m = layout.n, layout.T, layout.m
    c1, cT = layout.clock_qubit(1), layout.clock_qubit(T)

    parts = collections.OrderedDict((tag, []) for tag in PARTS)
    for i in range(n):
        parts['input'] += decompose_operator(local_kron([P1, P0]), [i, c1], m)
    for t in range(1, T):
        parts['clock'] += decompose_operator(local_kron([P0, P1]), [layout.clock_qubit(t), layout.clock_qubit(t + 1)], m)
    for t, g in enumerate(c.gates, start=1):
        for time in (t - 1, t):
            projector, support = _clock_projector(layout, time)
            parts['propagation'] += decompose_operator(0.5 * projector, support, m)
        hop, hop_support = _clock_transition(layout, t)
        parts['propagation'] += hermitian_product_terms(g.matrix, g.targets, hop, hop_support, m, scale=-0.5)
    parts['output'] += decompose_operator(local_kron([P1, P1]), [0, cT], m)

    H = LocalHamiltonian(m, parts, label=f'{variant}({c.label})')
    logger.debug('built %r', H)
    return H if keep_identity else H.without_identity()


class Thresholds(collections.namedtuple('Thresholds', ['a', 'b', 'alpha', 'beta', 'gap', 'sum_abs'])):
    """ energy thresholds a < b of one Hamiltonian and the pass-probability thresholds alpha > beta """
    @property
    def midpoint(self) -> float:
        return (self.alpha + self.beta) / 2

    def to_dict(self) -> Dict[str, float]:
        return dict(self._asdict())


def alpha_beta(a: float, b: float, sum_abs: float) -> Tuple[float, float]:
    """ alpha = 1/2 - a/(2 sum_abs), beta = 1/2 - b/(2 sum_abs) """
    if not sum_abs > 0:
        raise ValueError(f'sum_abs must be positive, got {sum_abs}')
    return 0.5 - a / (2 * sum_abs), 0.5 - b / (2 * sum_abs)


def history_energy_bound(r_bound: float, T: int) -> float:
    """ worst history-state energy of a yes-instance, 2^-r/(T+1) """
    return 2.0 ** -r_bound / (T + 1)


@functools.lru_cache(maxsize=None)
def twin_energy_thresholds(twin_name: str) -> Tuple[float, float]:
    """ full-Hamiltonian (a, b) of a catalog instance, shared by every instance that borrows them """
    twin = get_instance(twin_name)
    no_side = build_clock_hamiltonian(twin.circuit, 'H1' if twin.membership == 'yes' else 'H0')
    return history_energy_bound(twin.r_bound, twin.circuit.T), ground_energy(no_side)


def compute_thresholds(H0: LocalHamiltonian, H1: LocalHamiltonian, inst: Instance) -> Tuple[Thresholds, Thresholds]:
    """
    a = a' is the history energy bound over the promise, b = b' the ground energy of the
    Hamiltonian belonging to the no side. Promise-violating instances borrow both from their twin.

    Energies are computed for the full Hamiltonian and then moved by each Hamiltonian's identity_shift.

    :raises GapCollapseError: when b - a is within GAP_TOLERANCE or when a promise-violating instance has no twin
    """
    if inst.promise_respecting:
        a_full = history_energy_bound(inst.r_bound, inst.circuit.T)
        no_side = H1 if inst.membership == 'yes' else H0
        b_full = ground_energy(no_side) + no_side.identity_shift
    else:
        if not inst.twin:
            raise GapCollapseError(inst.name, reason='promise-violating instance without a reference twin')
        warnings.warn(f'{inst.name} violates the promise, thresholds borrowed from {inst.twin}')
        a_full, b_full = twin_energy_thresholds(inst.twin)

    results = []
    for H in (H0, H1):
        a = a_full - H.identity_shift
        b = b_full - H.identity_shift
        if not b - a > GAP_TOLERANCE:
            raise GapCollapseError(inst.name, a, b)
        alpha, beta = alpha_beta(a, b, H.sum_abs)
        results.append(Thresholds(a, b, alpha, beta, alpha - beta, H.sum_abs))
        logger.debug('thresholds of %s: %s', H.label, results[-1])
    return results[0], results[1]


def completeness_bound(u: float) -> float:
    """ lower bound (1 - e^-u)^2 on the correct conclusion for an honest server """
    return (1 - math.exp(-u)) ** 2


def soundness_bound(u: float) -> float:
    """ upper bound e^-u on a wrong membership conclusion """
    return math.exp(-u)


def hoeffding_bound(k: int, gap: float) -> float:
    """ probability that one battery of k tests lands on the wrong side of the midpoint """
    return math.exp(-k * gap ** 2 / 2)
