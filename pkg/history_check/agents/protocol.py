"""
The five-step protocol: plan the batteries, let Bob prepare the copies, let Alice test them.
"""
import collections
import logging
import math

from typing import Optional

from history_check.agents.alice import ProtocolTranscript, alice_verify
from history_check.agents.bob import BobStrategy, bob_prepare, make_strategy
from history_check.environment.circuit import Instance
from history_check.helper.utils import protocol_stream
from history_check.tasks.hamiltonian import GAP_TOLERANCE, GapCollapseError, Thresholds, build_clock_hamiltonian, compute_thresholds

logger = logging.getLogger(__name__)

DEFAULT_U = 3.0
DEFAULT_TEST_BUDGET = 10 ** 6
BOB_STREAM, ALICE_STREAM = 0, 1


class BudgetExceededError(Exception):
    """ the plan needs more energy tests than the configured budget """
    def __init__(self, k0: int, k1: int, budget: int):
        self.k0 = k0
        self.k1 = k1
        self.budget = budget
        super().__init__(str(self))

    def __str__(self):
        return f'plan needs k0 + k1 = {self.k0} + {self.k1} = {self.k0 + self.k1} tests, budget is {self.budget}'


RepetitionPlan = collections.namedtuple('RepetitionPlan', ['u', 'k0', 'k1', 'thresholds0', 'thresholds1'])


def repetitions(u: float, gap: float) -> int:
    """ smallest k with k >= 2u / gap^2 """
    return max(1, math.ceil(2 * u / gap ** 2))


def plan_repetitions(th0: Thresholds, th1: Thresholds, u: float = DEFAULT_U, budget: Optional[int] = None) -> RepetitionPlan:
    """
    k0 = ceil(2u/gap0^2), k1 = ceil(2u/gap1^2).

    :param budget: upper limit on k0 + k1, unlimited if None
    """
    if not u > 0:
        raise ValueError(f'u must be positive, got {u}')
    for name, th in (('H0', th0), ('H1', th1)):
        if not (th.gap > 0 and th.b - th.a > GAP_TOLERANCE):
            raise GapCollapseError(name, th.a, th.b, reason=f'gap {th.gap!r} for {name} is not resolvable')
    k0 = repetitions(u, th0.gap)
    k1 = repetitions(u, th1.gap)
    if budget is not None and k0 + k1 > budget:
        raise BudgetExceededError(k0, k1, budget)
    return RepetitionPlan(float(u), k0, k1, th0, th1)


ProtocolSetup = collections.namedtuple('ProtocolSetup', ['instance', 'H0', 'H1', 'thresholds0', 'thresholds1', 'plan'])


def prepare_protocol(inst: Instance, u: float = DEFAULT_U, keep_identity: bool = True,
                     budget: Optional[int] = DEFAULT_TEST_BUDGET) -> ProtocolSetup:
    """ everything the trials of one campaign share: H0, H1, thresholds and the plan """
    H0 = build_clock_hamiltonian(inst.circuit, 'H0', keep_identity)
    H1 = build_clock_hamiltonian(inst.circuit, 'H1', keep_identity)
    th0, th1 = compute_thresholds(H0, H1, inst)
    plan = plan_repetitions(th0, th1, u, budget)
    logger.info('%s: k0=%d, k1=%d, gap0=%.4g, gap1=%.4g', inst.name, plan.k0, plan.k1, th0.gap, th1.gap)
    return ProtocolSetup(inst, H0, H1, th0, th1, plan)


def run_trial(setup: ProtocolSetup, strategy: BobStrategy, seed: int, trial: int = 0) -> ProtocolTranscript:
    """ one protocol execution on the substreams of trial `trial` """
    bob_rng = protocol_stream(seed, trial, BOB_STREAM)
    alice_rng = protocol_stream(seed, trial, ALICE_STREAM)
    copies = bob_prepare(strategy, setup.instance.circuit, setup.plan, bob_rng)
    meta = {
        'instance': setup.instance.name,
        'membership': setup.instance.membership,
        'strategy': strategy.kind,
        'seed': int(seed),
        'trial': int(trial),
    }
    return alice_verify(copies, setup.H0, setup.H1, setup.plan, alice_rng, meta)


def run_protocol(inst: Instance, u: float = DEFAULT_U, strategy='honest', seed: int = 0,
                 keep_identity: bool = True, budget: Optional[int] = DEFAULT_TEST_BUDGET) -> ProtocolTranscript:
    """
    Full protocol, deterministic given the seed; equals trial 0 of a campaign with the same seed.

    :param strategy: a BobStrategy or the name of one
    """
    if isinstance(strategy, str):
        strategy = make_strategy(strategy)
    setup = prepare_protocol(inst, u, keep_identity, budget)
    return run_trial(setup, strategy, seed, 0)
