"""
Pauli strings and the decomposition of small local operators into Pauli words.

Qubit order is little-endian throughout the package: character j of a word acts on
qubit j, and qubit j is bit j of an amplitude index. Local matrices on a support
[q_0, q_1, ...] follow the same rule, support[0] being the least significant factor,
so an operator A on support[0] and B on support[1] is ``np.kron(B, A)``.
"""
import collections
import itertools
import logging
import math

import numpy as np
import scipy.sparse

from functools import reduce
from typing import Dict, List, Sequence, Tuple

logger = logging.getLogger(__name__)

AXES = 'IXYZ'
COEFF_CUTOFF = 1e-12
HERMITIAN_TOLERANCE = 1e-10
DECOMPOSE_MAX_SUPPORT = 3
MATRIX_MAX_SUPPORT = 4

PAULI_MATRICES = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


def local_kron(factors: Sequence[np.ndarray]) -> np.ndarray:
    """
    Tensor product of single-qubit factors listed in support order.

    :param factors: factors[p] acts on support[p]
    :return: the 2^k x 2^k matrix in little-endian order
    """
    return reduce(np.kron, reversed(list(factors)), np.eye(1, dtype=complex))


class PauliString(collections.namedtuple('PauliString', ['axes', 'coeff'])):
    """
    A real-weighted tensor product of single-qubit Paulis on m qubits.

    :param axes: one of 'IXYZ' per qubit, position j is qubit j
    :param coeff: the real weight d_S
    """
    def __new__(cls, axes: str, coeff: float = 1.0):
        axes = str(axes).upper()
        if not axes:
            raise ValueError('a Pauli word needs at least one qubit')
        bad = set(axes) - set(AXES)
        if bad:
            raise ValueError(f'invalid Pauli axes {sorted(bad)} in word {axes!r}')
        coeff = float(coeff)
        if not math.isfinite(coeff):
            raise ValueError(f'Pauli coefficient must be finite, got {coeff}')
        return super().__new__(cls, axes, coeff)

    @property
    def m(self) -> int:
        return len(self.axes)

    def support(self) -> Tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.axes) if a != 'I')

    def weight(self) -> int:
        return len(self.support())

    def is_identity(self) -> bool:
        return self.weight() == 0

    def sign(self) -> int:
        return 1 if self.coeff >= 0 else -1

    def scaled(self, factor: float) -> 'PauliString':
        return PauliString(self.axes, self.coeff * factor)

    def masks(self) -> Tuple[int, int, int]:
        """
        :return: (xmask, zmask, number of Y factors); X and Y flip a bit, Z and Y carry a phase
        """
        xmask = zmask = 0
        n_y = 0
        for j, a in enumerate(self.axes):
            if a in 'XY':
                xmask |= 1 << j
            if a in 'ZY':
                zmask |= 1 << j
            if a == 'Y':
                n_y += 1
        return xmask, zmask, n_y

    def to_text(self) -> str:
        return f'{self.coeff!r} * {self.axes}'

    @classmethod
    def from_text(cls, text: str) -> 'PauliString':
        try:
            coeff, axes = text.split('*')
            return cls(axes.strip(), float(coeff))
        except ValueError as e:
            raise ValueError(f'cannot parse Pauli term {text!r}: expected "coeff * WORD"') from e

    def matrix(self, restrict_to: Sequence[int]) -> np.ndarray:
        return string_to_matrix(self, restrict_to)


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    bits = values & mask
    parity = np.zeros_like(values)
    while mask:
        low = mask & -mask
        parity ^= (bits & low) != 0
        mask ^= low
    return parity


def word_action(s: PauliString) -> Tuple[int, np.ndarray]:
    """
    S|i> = i^ny (-1)^popcount(i & zmask) |i ^ xmask>, coefficient excluded.

    :return: the flip mask and the phase picked up by every basis index
    """
    xmask, zmask, n_y = s.masks()
    idx = np.arange(2 ** s.m, dtype=np.int64)
    phases = (1j ** n_y) * (1 - 2 * _parity(idx, zmask)).astype(complex)
    return xmask, phases


def apply_word(amps: np.ndarray, s: PauliString) -> np.ndarray:
    """ applies the bare word (without its coefficient) to an amplitude vector """
    if len(amps) != 2 ** s.m:
        raise ValueError(f'word on {s.m} qubits applied to vector of length {len(amps)}')
    xmask, phases = word_action(s)
    out = np.empty_like(amps, dtype=complex)
    idx = np.arange(len(amps), dtype=np.int64)
    out[idx ^ xmask] = phases * amps
    return out


def terms_to_sparse(terms: Sequence[PauliString], m: int) -> scipy.sparse.csr_matrix:
    """ builds sum_S d_S S as a sparse matrix without forming any dense 2^m x 2^m block """
    dim = 2 ** m
    idx = np.arange(dim, dtype=np.int64)
    rows, cols, data = [], [], []
    for s in terms:
        if s.m != m:
            raise ValueError(f'term {s.to_text()} does not act on {m} qubits')
        xmask, phases = word_action(s)
        rows.append(idx ^ xmask)
        cols.append(idx)
        data.append(s.coeff * phases)
    if not terms:
        return scipy.sparse.csr_matrix((dim, dim), dtype=complex)
    return scipy.sparse.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim))


def _validate_support(support: Sequence[int], m: int, limit: int):
    support = tuple(int(q) for q in support)
    if len(support) == 0:
        raise ValueError('support must not be empty')
    if len(support) > limit:
        raise ValueError(f'support of size {len(support)} exceeds the limit of {limit} qubits')
    if len(set(support)) != len(support):
        raise ValueError(f'support {support} contains duplicates')
    if any(q < 0 or q >= m for q in support):
        raise ValueError(f'support {support} out of range for {m} qubits')
    return support


def pauli_coefficients(matrix: np.ndarray) -> Dict[str, complex]:
    """
    Tr(P^dagger M) / 2^k for every local word P; local position p is support[p].
    Coefficients below the cutoff are left out.
    """
    matrix = np.asarray(matrix, dtype=complex)
    k = int(round(math.log2(matrix.shape[0])))
    coeffs = {}
    for labels in itertools.product(AXES, repeat=k):
        p = local_kron([PAULI_MATRICES[a] for a in labels])
        c = np.vdot(p, matrix) / 2 ** k
        if abs(c) >= COEFF_CUTOFF:
            coeffs[''.join(labels)] = c
    return coeffs


def _embed(local_word: str, support: Sequence[int], m: int) -> str:
    axes = ['I'] * m
    for p, q in enumerate(support):
        axes[q] = local_word[p]
    return ''.join(axes)


def decompose_operator(op_matrix: np.ndarray, support: Sequence[int], m: int) -> List[PauliString]:
    """
    Expands a Hermitian operator on up to three qubits into weighted Pauli words on m qubits.

    :param op_matrix: the 2^k x 2^k local matrix, support[0] least significant
    :param support: the global qubit indices the matrix acts on
    :param m: total number of qubits of the embedding register
    :return: the non-negligible terms; exact reconstruction within 1e-10
    """
    support = _validate_support(support, m, DECOMPOSE_MAX_SUPPORT)
    matrix = np.asarray(op_matrix, dtype=complex)
    k = len(support)
    if matrix.shape != (2 ** k, 2 ** k):
        raise ValueError(f'matrix of shape {matrix.shape} does not match support of size {k}')
    deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
    if deviation > HERMITIAN_TOLERANCE:
        raise ValueError(f'operator on {support} is not Hermitian (max deviation {deviation:.3e})')

    terms = []
    for word, c in pauli_coefficients(matrix).items():
        if abs(c.imag) > COEFF_CUTOFF:
            logger.debug('dropping imaginary residue %.3e of %s', c.imag, word)
        if abs(c.real) < COEFF_CUTOFF:
            continue
        terms.append(PauliString(_embed(word, support, m), c.real))
    return terms


def hermitian_product_terms(a: np.ndarray, a_support: Sequence[int],
                            b: np.ndarray, b_support: Sequence[int],
                            m: int, scale: float = 1.0) -> List[PauliString]:
    """
    Pauli terms of scale * (A (x) B + A^dagger (x) B^dagger) for non-Hermitian A and B on
    disjoint supports. P (x) Q gets weight 2 Re(a_P b_Q).
    """
    a_support = _validate_support(a_support, m, DECOMPOSE_MAX_SUPPORT)
    b_support = _validate_support(b_support, m, DECOMPOSE_MAX_SUPPORT)
    if set(a_support) & set(b_support):
        raise ValueError(f'supports {a_support} and {b_support} overlap')
    a_coeffs = pauli_coefficients(a)
    b_coeffs = pauli_coefficients(b)
    terms = []
    for (wa, ca), (wb, cb) in itertools.product(a_coeffs.items(), b_coeffs.items()):
        w = 2.0 * scale * (ca * cb).real
        if abs(w) < COEFF_CUTOFF:
            continue
        axes = list(_embed(wa, a_support, m))
        for p, q in enumerate(b_support):
            axes[q] = wb[p]
        terms.append(PauliString(''.join(axes), w))
    return merge_terms(terms)


def merge_terms(terms: Sequence[PauliString]) -> List[PauliString]:
    """ sums coefficients of equal words, keeps first-seen order and drops cancelled words """
    merged = collections.OrderedDict()
    for s in terms:
        merged[s.axes] = merged.get(s.axes, 0.0) + s.coeff
    return [PauliString(w, c) for w, c in merged.items() if abs(c) >= COEFF_CUTOFF]


def string_to_matrix(s: PauliString, restrict_to: Sequence[int]) -> np.ndarray:
    """
    Local matrix of d_S S restricted to a small support; used for tests and diagnostics.

    :param restrict_to: qubits to keep, every non-identity position of s must be in it
    """
    restrict_to = _validate_support(restrict_to, s.m, MATRIX_MAX_SUPPORT)
    missing = set(s.support()) - set(restrict_to)
    if missing:
        raise ValueError(f'{s.to_text()} acts on {sorted(missing)} outside of {restrict_to}')
    return s.coeff * local_kron([PAULI_MATRICES[s.axes[q]] for q in restrict_to])
