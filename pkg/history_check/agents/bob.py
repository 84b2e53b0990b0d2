"""
Bob, the server. A strategy decides which pure state sits in every copy slot Alice asked for.

Slots are laid out as k0 'psi0' slots followed by k1 'psi1' slots. Adversaries are limited to
per-copy product preparations, possibly classically randomized through the rng.
"""
import logging

import numpy as np

from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Tuple

from history_check.environment.circuit import QuantumCircuit, builtin_instances
from history_check.environment.statevector import StateVector
from history_check.tasks.history import build_history_state, layout_of

logger = logging.getLogger(__name__)

Copy = Tuple[str, StateVector]


def copy_slots(plan) -> List[str]:
    return ['psi0'] * plan.k0 + ['psi1'] * plan.k1


class BobStrategy(ABC):
    """
    Base class of all server strategies.

    :param params: strategy specific settings, kept for reports
    """
    kind = 'UNSPECIFIED'

    def __init__(self, **params):
        self.params = params

    @abstractmethod
    def prepare(self, c: QuantumCircuit, plan, rng: np.random.Generator) -> List[Copy]:
        raise NotImplementedError

    def describe(self) -> Dict:
        return {'kind': self.kind, **self.params}

    def __repr__(self):
        settings = ', '.join(f'{k}={v!r}' for k, v in self.params.items())
        return f'{self.__class__.__name__}({settings})'


class HonestBob(BobStrategy):
    """ prepares exactly k0 copies of psi0 followed by k1 copies of psi1 """
    kind = 'honest'

    def prepare(self, c, plan, rng):
        states = {'psi0': build_history_state(c, 'psi0'), 'psi1': build_history_state(c, 'psi1')}
        # StateVector is immutable, the copies may share one object
        return [(slot, states[slot]) for slot in copy_slots(plan)]


class FixedStateBob(BobStrategy):
    """
    Every copy is the same product state.

    :param state: one of '0', '1', '+', '-' per qubit, all zeros by default
    """
    kind = 'fixed_state'

    def __init__(self, state: Optional[str] = None):
        super().__init__(state=state)

    def prepare(self, c, plan, rng):
        m = layout_of(c).m
        spec = self.params['state'] or '0' * m
        if len(spec) != m:
            raise ValueError(f'fixed state {spec!r} does not cover the {m} qubit register')
        state = StateVector.product(spec)
        return [(slot, state) for slot in copy_slots(plan)]


class WrongInstanceBob(BobStrategy):
    """
    Honest work on a different circuit of the same register size.

    :param decoy: catalog name of the circuit to use; by default the first other catalog
        instance with a matching register, else the complement circuit
    """
    kind = 'wrong_instance'

    def __init__(self, decoy: Optional[str] = None):
        super().__init__(decoy=decoy)

    def choose_decoy(self, c: QuantumCircuit) -> Optional[QuantumCircuit]:
        m = layout_of(c).m
        for inst in builtin_instances():
            if self.params['decoy'] is not None:
                if inst.name == self.params['decoy']:
                    if layout_of(inst.circuit).m != m:
                        raise ValueError(f'decoy {inst.name} does not fit the {m} qubit register')
                    return inst.circuit
            elif inst.name != c.label and layout_of(inst.circuit).m == m:
                return inst.circuit
        if self.params['decoy'] is not None:
            raise ValueError(f'unknown decoy instance {self.params["decoy"]!r}')
        return None

    def prepare(self, c, plan, rng):
        decoy = self.choose_decoy(c)
        if decoy is None:
            logger.info('no catalog decoy for %s, using the complement history states', c.label)
            states = {'psi0': build_history_state(c, 'psi1'), 'psi1': build_history_state(c, 'psi0')}
        else:
            logger.debug('wrong_instance uses decoy %s for %s', decoy.label, c.label)
            states = {'psi0': build_history_state(decoy, 'psi0'), 'psi1': build_history_state(decoy, 'psi1')}
        return [(slot, states[slot]) for slot in copy_slots(plan)]


class MaximallyMixedBob(BobStrategy):
    """ each copy an independent uniformly random computational basis state """
    kind = 'maximally_mixed_sample'

    def prepare(self, c, plan, rng):
        m = layout_of(c).m
        slots = copy_slots(plan)
        indices = rng.integers(0, 2 ** m, size=len(slots))
        return [(slot, StateVector.basis(m, int(i))) for slot, i in zip(slots, indices)]


class SwapPsiBob(BobStrategy):
    """ psi1 where psi0 is expected and vice versa """
    kind = 'swap_psi'

    def prepare(self, c, plan, rng):
        states = {'psi0': build_history_state(c, 'psi1'), 'psi1': build_history_state(c, 'psi0')}
        return [(slot, states[slot]) for slot in copy_slots(plan)]


STRATEGY_CLASSES = {cls.kind: cls for cls in (HonestBob, FixedStateBob, WrongInstanceBob, MaximallyMixedBob, SwapPsiBob)}
STRATEGIES = tuple(STRATEGY_CLASSES.keys())


def make_strategy(kind: str, **params) -> BobStrategy:
    try:
        return STRATEGY_CLASSES[kind](**params)
    except KeyError:
        raise ValueError(f'unknown strategy {kind!r}, expected one of {STRATEGIES}') from None


def bob_prepare(strategy: BobStrategy, c: QuantumCircuit, plan, rng: np.random.Generator) -> List[Copy]:
    """
    :return: k0 + k1 (slot, state) pairs in slot order
    """
    copies = strategy.prepare(c, plan, rng)
    logger.debug('%r prepared %d copies for %s', strategy, len(copies), c.label)
    return copies
