"""
Circuits V = U_T ... U_1 on n work qubits, their complements and a catalog of desk-scale instances.

The output qubit is qubit 0; an input x is accepted when qubit 0 reads 0.
"""
import collections
import logging
import math

import numpy as np

from typing import Dict, List, Optional, Sequence

from history_check.environment.pauli import PAULI_MATRICES, local_kron
from history_check.environment.statevector import run_prefixes

logger = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-10
PROBABILITY_FLOOR = 1e-15
MEMBERSHIPS = ('yes', 'no', 'promise_violating')

_S2 = 1 / math.sqrt(2)
STANDARD_GATES = {
    'X': PAULI_MATRICES['X'],
    'Z': PAULI_MATRICES['Z'],
    'H': np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    'S': np.diag([1, 1j]).astype(complex),
    'T_phase': np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex),
    # targets (control, target); control is the low bit of the local index
    'CNOT': np.eye(4, dtype=complex)[[0, 3, 2, 1]],
    'CZ': np.diag([1, 1, 1, -1]).astype(complex),
}
GATE_KINDS = tuple(STANDARD_GATES.keys()) + ('custom',)

MNEMONICS = {'x': 'X', 'z': 'Z', 'h': 'H', 's': 'S', 't': 'T_phase', 'cnot': 'CNOT', 'cz': 'CZ', 'custom': 'custom'}
_KIND_TO_MNEMONIC = {kind: mnemonic for mnemonic, kind in MNEMONICS.items()}


class CircuitFormatError(Exception):
    """ raised for malformed circuit text """
    def __init__(self, line_number: int, line: str, reason: str):
        self.line_number = line_number
        self.line = line
        self.reason = reason
        super().__init__(str(self))

    def __str__(self):
        return f'line {self.line_number}: {self.reason} ({self.line.strip()!r})'


class Gate(collections.namedtuple('Gate', ['kind', 'targets', 'matrix'])):
    """
    A unitary on a few work qubits. targets[0] is the least significant factor of matrix.

    Standard kinds act on one or two qubits. Custom gates may carry a third target, which
    only happens when the complement folds X on qubit 0 into a last gate that misses qubit 0.
    """
    def __new__(cls, kind: str, targets: Sequence[int], matrix: Optional[np.ndarray] = None):
        if kind not in GATE_KINDS:
            raise ValueError(f'unknown gate kind {kind!r}, expected one of {GATE_KINDS}')
        targets = tuple(int(q) for q in targets)
        if len(set(targets)) != len(targets) or any(q < 0 for q in targets):
            raise ValueError(f'gate targets {targets} must be distinct non-negative indices')
        if matrix is None:
            if kind == 'custom':
                raise ValueError('custom gates need an explicit matrix')
            matrix = STANDARD_GATES[kind]
        matrix = np.array(matrix, dtype=complex)
        max_arity = 3 if kind == 'custom' else 2
        if not 1 <= len(targets) <= max_arity:
            raise ValueError(f'{kind} gate on {len(targets)} qubits is not supported')
        if matrix.shape != (2 ** len(targets),) * 2:
            raise ValueError(f'{kind} matrix of shape {matrix.shape} does not fit {len(targets)} targets')
        deviation = float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(len(matrix)))))
        if deviation > UNITARY_TOLERANCE:
            raise ValueError(f'{kind} matrix is not unitary (deviation {deviation:.3e})')
        matrix.setflags(write=False)
        return super().__new__(cls, kind, targets, matrix)

    @property
    def arity(self) -> int:
        return len(self.targets)

    def __repr__(self):
        return f'Gate({self.kind}, {self.targets})'


def gate(kind: str, *targets: int) -> Gate:
    """ shorthand for standard gates, e.g. gate('CNOT', 0, 1) """
    return Gate(kind, targets)


class QuantumCircuit:
    """
    V = U_T ... U_1 on n work qubits; U_0 is the implicit identity.
    """
    def __init__(self, n: int, gates: Sequence[Gate], label: str = ''):
        if n < 1:
            raise ValueError(f'a circuit needs at least one work qubit, got n={n}')
        gates = tuple(gates)
        if len(gates) < 1:
            raise ValueError('a circuit needs at least one gate (T >= 1)')
        for t, g in enumerate(gates, start=1):
            if not isinstance(g, Gate):
                raise ValueError(f'U_{t} is not a Gate: {g!r}')
            if max(g.targets) >= n:
                raise ValueError(f'U_{t} {g!r} acts outside of {n} work qubits')
        self._n = int(n)
        self._gates = gates
        self.label = label

    @property
    def n(self) -> int:
        return self._n

    @property
    def gates(self):
        return self._gates

    @property
    def T(self) -> int:
        return len(self._gates)

    def __len__(self):
        return self.T

    def __repr__(self):
        return f'QuantumCircuit({self.label!r}, n={self.n}, T={self.T})'

    def with_last_gate(self, last: Gate, label: Optional[str] = None) -> 'QuantumCircuit':
        return QuantumCircuit(self.n, self._gates[:-1] + (last,), self.label if label is None else label)


class Instance(collections.namedtuple('Instance', ['circuit', 'membership', 'r_bound', 'twin'])):
    """
    A circuit together with its promised answer.

    :param membership: 'yes', 'no' or 'promise_violating'
    :param r_bound: the error exponent r, None for promise-violating instances
    :param twin: name of a catalog instance whose thresholds a promise-violating instance borrows
    """
    def __new__(cls, circuit: QuantumCircuit, membership: str, r_bound: Optional[float] = math.inf,
                twin: Optional[str] = None):
        if membership not in MEMBERSHIPS:
            raise ValueError(f'membership must be one of {MEMBERSHIPS}, got {membership!r}')
        if membership == 'promise_violating':
            r_bound = None
        elif r_bound is None or not r_bound > 0:
            raise ValueError(f'a promise-respecting instance needs r_bound > 0, got {r_bound}')
        return super().__new__(cls, circuit, membership, r_bound, twin)

    @property
    def name(self) -> str:
        return self.circuit.label

    @property
    def promise_respecting(self) -> bool:
        return self.membership != 'promise_violating'

    def check(self, p_acc: Optional[float] = None, tolerance: float = 1e-10) -> bool:
        """ True if the acceptance probability is consistent with membership and r_bound """
        if p_acc is None:
            p_acc = acceptance_probability(self.circuit)
        if self.membership == 'yes':
            return p_acc >= 1 - 2.0 ** -self.r_bound - tolerance
        if self.membership == 'no':
            return p_acc <= 2.0 ** -self.r_bound + tolerance
        return True


def _x_on(position: int, k: int) -> np.ndarray:
    return local_kron([PAULI_MATRICES['X'] if p == position else PAULI_MATRICES['I'] for p in range(k)])


def complement_circuit(c: QuantumCircuit) -> QuantumCircuit:
    """
    (X on qubit 0) V, with the X folded into U_T so the complement keeps T time steps.
    """
    last = c.gates[-1]
    if 0 in last.targets:
        targets = last.targets
        matrix = _x_on(targets.index(0), len(targets)) @ last.matrix
    else:
        targets = last.targets + (0,)
        matrix = _x_on(len(targets) - 1, len(targets)) @ np.kron(PAULI_MATRICES['I'], last.matrix)
    label = c.label[:-1] if c.label.endswith("'") else f"{c.label}'"
    return c.with_last_gate(Gate('custom', targets, matrix), label=label)


def acceptance_probability(c: QuantumCircuit) -> float:
    """ probability that qubit 0 of V|0^n> reads 0 """
    final = run_prefixes(c)[-1]
    # qubit 0 is the lowest index bit, so even indices have it at 0
    return float(np.sum(np.abs(final.amps[0::2]) ** 2))


def classify_circuit(c: QuantumCircuit, label: Optional[str] = None) -> Instance:
    """
    Turns an arbitrary circuit into an Instance using its acceptance probability.

    r_bound is the largest exponent the circuit satisfies; exactly 1/2 is promise-violating.
    """
    if label is not None:
        c = QuantumCircuit(c.n, c.gates, label)
    p = acceptance_probability(c)
    if abs(p - 0.5) < 1e-12:
        return Instance(c, 'promise_violating')
    if p > 0.5:
        miss = 1 - p
        r = math.inf if miss < PROBABILITY_FLOOR else -math.log2(miss)
        return Instance(c, 'yes', r)
    r = math.inf if p < PROBABILITY_FLOOR else -math.log2(p)
    return Instance(c, 'no', r)


def builtin_instances() -> List[Instance]:
    """
    The desk-scale catalog.

    const0/const1 are the deterministic one-step cases, ent0/ent1 a two-qubit entangling pair,
    coin and bell violate the promise, double_x is a second yes-instance on three qubits.
    """
    const0 = QuantumCircuit(2, [gate('CZ', 0, 1)], 'const0')
    const1 = QuantumCircuit(1, [gate('X', 0)], 'const1')
    coin = QuantumCircuit(1, [gate('H', 0)], 'coin')
    ent0 = QuantumCircuit(2, [gate('H', 1), gate('CNOT', 1, 0), gate('CNOT', 1, 0)], 'ent0')
    ent1 = QuantumCircuit(ent0.n, complement_circuit(ent0).gates, 'ent1')
    bell = QuantumCircuit(2, [gate('H', 0), gate('CNOT', 0, 1)], 'bell')
    double_x = QuantumCircuit(1, [gate('X', 0), gate('X', 0)], 'double_x')
    return [
        Instance(const0, 'yes'),
        Instance(const1, 'no'),
        Instance(coin, 'promise_violating', twin='const1'),
        Instance(ent0, 'yes'),
        Instance(ent1, 'no'),
        Instance(bell, 'promise_violating', twin='ent0'),
        Instance(double_x, 'yes'),
    ]


def instance_catalog() -> Dict[str, Instance]:
    return collections.OrderedDict((inst.name, inst) for inst in builtin_instances())


def get_instance(name: str) -> Instance:
    catalog = instance_catalog()
    try:
        return catalog[name]
    except KeyError:
        raise ValueError(f'unknown instance {name!r}, available: {", ".join(catalog)}') from None


def parse_circuit(text: str, label: str = 'custom') -> QuantumCircuit:
    """
    Reads the circuit text format::

        qubits 2
        h 0          # comments are allowed
        cnot 0 1
        custom 0  1 0  0 0  0 0  1 0

    custom gates list the row-major matrix as (re, im) pairs: 8 numbers for one target,
    32 for two.
    """
    n = None
    gates = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if n is None:
            if head != 'qubits' or len(tokens) != 2:
                raise CircuitFormatError(line_number, raw, "first statement must be 'qubits <n>'")
            try:
                n = int(tokens[1])
            except ValueError:
                raise CircuitFormatError(line_number, raw, 'qubit count is not an integer') from None
            continue
        if head not in MNEMONICS:
            raise CircuitFormatError(line_number, raw, f'unknown gate {head!r}')
        kind = MNEMONICS[head]
        try:
            if kind == 'custom':
                gates.append(_parse_custom(tokens[1:]))
            else:
                gates.append(Gate(kind, [int(t) for t in tokens[1:]]))
        except ValueError as e:
            raise CircuitFormatError(line_number, raw, str(e)) from None
    if n is None:
        raise CircuitFormatError(0, '', "missing 'qubits <n>' header")
    try:
        return QuantumCircuit(n, gates, label)
    except ValueError as e:
        raise CircuitFormatError(0, '', str(e)) from None


def _parse_custom(tokens: List[str]) -> Gate:
    # targets are the integer-looking tokens in front of the 8 or 32 matrix numbers
    for arity, count in ((1, 8), (2, 32)):
        if len(tokens) == arity + count:
            targets = [int(t) for t in tokens[:arity]]
            values = np.array([float(t) for t in tokens[arity:]])
            dim = 2 ** arity
            matrix = (values[0::2] + 1j * values[1::2]).reshape(dim, dim)
            return Gate('custom', targets, matrix)
    raise ValueError(f'custom gate needs 1 target + 8 numbers or 2 targets + 32 numbers, got {len(tokens)} tokens')


def format_circuit(c: QuantumCircuit) -> str:
    lines = [f'qubits {c.n}']
    for g in c.gates:
        targets = ' '.join(str(q) for q in g.targets)
        if g.kind == 'custom':
            if g.arity > 2:
                raise ValueError(f'{g!r} has no text form (custom gates take at most 2 targets)')
            numbers = ' '.join(f'{float(z.real)!r} {float(z.imag)!r}' for z in g.matrix.reshape(-1))
            lines.append(f'custom {targets} {numbers}')
        else:
            lines.append(f'{_KIND_TO_MNEMONIC[g.kind]} {targets}')
    return '\n'.join(lines) + '\n'
