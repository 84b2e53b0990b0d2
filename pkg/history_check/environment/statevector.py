"""
Exact statevector simulation on a little-endian register: gates, single-qubit Pauli
measurements, expectation values and ground energies of small Hamiltonians.
"""
import collections
import json
import logging
import math

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from typing import List, Tuple

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9
BRANCH_FLOOR = 1e-15
DENSE_LIMIT = 14
# below this size a dense eigensolve is faster than Lanczos
SPARSE_THRESHOLD = 10


class ResourceLimitError(Exception):
    """ raised when a register exceeds the simulator or the diagonalization limit """
    def __init__(self, m: int, limit: int, what: str):
        self.m = m
        self.limit = limit
        self.what = what
        super().__init__(str(self))

    def __str__(self):
        return f'{self.what}: register of {self.m} qubits exceeds the limit of {self.limit}'


class IntegrityError(Exception):
    """ raised when a state lost its norm, i.e. both measurement branches vanish """
    pass


class StateVector:
    """
    A normalized pure state of m qubits; qubit j is bit j of the amplitude index.

    Instances are immutable, every operation returns a new state.
    """
    MAX_QUBITS = 16

    __slots__ = ('_m', '_amps')

    def __init__(self, amps, check: bool = True):
        amps = np.array(amps, dtype=complex).reshape(-1)
        m = int(round(math.log2(len(amps)))) if len(amps) > 0 else -1
        if m < 0 or 2 ** m != len(amps):
            raise ValueError(f'amplitude vector of length {len(amps)} is not a power of two')
        if m > self.MAX_QUBITS:
            raise ResourceLimitError(m, self.MAX_QUBITS, 'statevector')
        if check:
            norm = float(np.linalg.norm(amps))
            if abs(norm - 1) > NORM_TOLERANCE:
                raise ValueError(f'state is not normalized (norm {norm:.12f})')
        amps.setflags(write=False)
        self._m = m
        self._amps = amps

    @property
    def m(self) -> int:
        return self._m

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @classmethod
    def zeros(cls, m: int) -> 'StateVector':
        return cls.basis(m, 0)

    @classmethod
    def basis(cls, m: int, index: int) -> 'StateVector':
        if m > cls.MAX_QUBITS:
            raise ResourceLimitError(m, cls.MAX_QUBITS, 'statevector')
        if not 0 <= index < 2 ** m:
            raise ValueError(f'basis index {index} out of range for {m} qubits')
        amps = np.zeros(2 ** m, dtype=complex)
        amps[index] = 1
        return cls(amps, check=False)

    @classmethod
    def product(cls, spec: str) -> 'StateVector':
        """
        Product state from one character per qubit out of '0', '1', '+', '-'; spec[j] is qubit j.
        """
        single = {
            '0': np.array([1, 0], dtype=complex),
            '1': np.array([0, 1], dtype=complex),
            '+': np.array([1, 1], dtype=complex) / math.sqrt(2),
            '-': np.array([1, -1], dtype=complex) / math.sqrt(2),
        }
        bad = set(spec) - set(single)
        if not spec or bad:
            raise ValueError(f'invalid product state spec {spec!r}, use characters from "01+-"')
        if len(spec) > cls.MAX_QUBITS:
            raise ResourceLimitError(len(spec), cls.MAX_QUBITS, 'statevector')
        amps = np.ones(1, dtype=complex)
        for ch in spec:
            amps = np.kron(single[ch], amps)
        return cls(amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self._amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def to_json(self) -> str:
        """ debug dump, a JSON array of [re, im] pairs """
        return json.dumps([[float(z.real), float(z.imag)] for z in self._amps])

    def __repr__(self):
        return f'StateVector(m={self._m})'


MeasurementOutcome = collections.namedtuple('MeasurementOutcome', ['qubit', 'axis', 'value'])

_EIGENBASIS = {
    'X': (np.array([1, 1], dtype=complex) / math.sqrt(2), np.array([1, -1], dtype=complex) / math.sqrt(2)),
    'Y': (np.array([1, 1j], dtype=complex) / math.sqrt(2), np.array([1, -1j], dtype=complex) / math.sqrt(2)),
    'Z': (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
}


def apply_gate(psi: StateVector, g, offset: int = 0) -> StateVector:
    """
    Applies a gate to qubits g.targets shifted by offset.

    :param g: any object with targets and a matching unitary matrix, targets[0] least significant
    :return: the new state
    """
    targets = [q + offset for q in g.targets]
    if any(q < 0 or q >= psi.m for q in targets):
        raise ValueError(f'{g!r} with offset {offset} acts outside of {psi.m} qubits')
    k = len(targets)
    m = psi.m
    tensor = psi.amps.reshape([2] * m)
    # tensor axis a holds qubit m-1-a; the gate's first row index is its most significant target
    axes = [m - 1 - q for q in reversed(targets)]
    gate_tensor = np.asarray(g.matrix).reshape([2] * (2 * k))
    out = np.tensordot(gate_tensor, tensor, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return StateVector(out.reshape(-1), check=False)


def run_prefixes(c) -> List[StateVector]:
    """
    :return: the T+1 states U_t ... U_1 |0^n>, entry 0 being |0^n>
    """
    state = StateVector.zeros(c.n)
    prefixes = [state]
    for g in c.gates:
        state = apply_gate(state, g)
        prefixes.append(state)
    return prefixes


def measure_qubit_pauli(psi: StateVector, j: int, axis: str, rng: np.random.Generator) -> Tuple[MeasurementOutcome, StateVector]:
    """
    Projective measurement of qubit j in the eigenbasis of the Pauli axis.

    :return: the outcome and the normalized post-measurement state
    """
    if not 0 <= j < psi.m:
        raise ValueError(f'qubit {j} out of range for {psi.m} qubits')
    if axis not in _EIGENBASIS:
        raise ValueError(f'cannot measure along {axis!r}, expected X, Y or Z')
    view = psi.amps.reshape(2 ** (psi.m - j - 1), 2, 2 ** j)
    plus, minus = _EIGENBASIS[axis]
    branch_plus = np.tensordot(plus.conj(), view, axes=([0], [1]))
    branch_minus = np.tensordot(minus.conj(), view, axes=([0], [1]))
    p_plus = float(np.vdot(branch_plus, branch_plus).real)
    p_minus = float(np.vdot(branch_minus, branch_minus).real)
    if p_plus < BRANCH_FLOOR and p_minus < BRANCH_FLOOR:
        raise IntegrityError(f'both branches of qubit {j} along {axis} vanish (p+={p_plus:.3e}, p-={p_minus:.3e})')
    if p_minus < BRANCH_FLOOR:
        value = 1
    elif p_plus < BRANCH_FLOOR:
        value = -1
    else:
        value = 1 if rng.random() < p_plus / (p_plus + p_minus) else -1
    vector, branch, p = (plus, branch_plus, p_plus) if value == 1 else (minus, branch_minus, p_minus)
    post = np.einsum('i,aj->aij', vector, branch) / math.sqrt(p)
    return MeasurementOutcome(j, axis, value), StateVector(post.reshape(-1), check=False)


def expectation(psi: StateVector, H) -> float:
    """ <psi|H|psi> for a LocalHamiltonian on the same register """
    if H.m != psi.m:
        raise ValueError(f'Hamiltonian on {H.m} qubits, state on {psi.m}')
    value = np.vdot(psi.amps, hamiltonian_matrix(H) @ psi.amps)
    if abs(value.imag) > 1e-10:
        logger.debug('imaginary residue %.3e in expectation value', value.imag)
    return float(value.real)


def hamiltonian_matrix(H):
    """ sparse CSR matrix of H, cached on the Hamiltonian """
    return H.sparse_matrix()


def ground_energy(H) -> float:
    """
    Smallest eigenvalue of H. Dense for small registers, Lanczos above.

    :raises ResourceLimitError: for more than DENSE_LIMIT qubits; supply analytic thresholds instead
    """
    if H.m > DENSE_LIMIT:
        raise ResourceLimitError(H.m, DENSE_LIMIT, 'ground energy (supply analytic thresholds instead)')
    matrix = hamiltonian_matrix(H)
    if H.m <= SPARSE_THRESHOLD:
        value = scipy.linalg.eigh(matrix.toarray(), eigvals_only=True, subset_by_index=[0, 0])[0]
    else:
        value = scipy.sparse.linalg.eigsh(matrix, k=1, which='SA', tol=1e-12, return_eigenvectors=False)[0]
    logger.debug('ground energy of %s on %d qubits: %.12f', getattr(H, 'label', 'H'), H.m, value)
    return float(value)


def fidelity(a: StateVector, b: StateVector) -> float:
    """ |<a|b>|^2 """
    if a.m != b.m:
        raise ValueError(f'states on {a.m} and {b.m} qubits')
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)
