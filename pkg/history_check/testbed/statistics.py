"""
Monte-Carlo campaigns over independent protocol trials with Wilson confidence intervals.
"""
import collections
import logging
import warnings

import numpy as np
import scipy.stats

from typing import Dict, Optional, Tuple

from history_check.agents.alice import CONCLUSIONS, IN_L, NOT_IN_L
from history_check.agents.bob import make_strategy
from history_check.agents.protocol import DEFAULT_TEST_BUDGET, DEFAULT_U, ProtocolSetup, prepare_protocol, run_trial
from history_check.environment.circuit import Instance
from history_check.tasks.hamiltonian import completeness_bound, soundness_bound

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95
PROGRESS_EVERY = 50

STATS_COLUMNS = [
    'instance', 'membership', 'strategy', 'u', 'trials', 'seed', 'k0', 'k1',
    'freq_in_L', 'freq_in_L_lo', 'freq_in_L_hi',
    'freq_not_in_L', 'freq_not_in_L_lo', 'freq_not_in_L_hi',
    'freq_dishonest', 'freq_dishonest_lo', 'freq_dishonest_hi',
    'correct_freq', 'correct_lo', 'correct_hi',
    'wrong_freq', 'wrong_lo', 'wrong_hi',
    'bound', 'judgment',
]


def wilson_interval(successes: int, total: int, confidence: float = CONFIDENCE) -> Tuple[float, float]:
    """ Wilson score interval of a binomial proportion """
    if total < 1:
        raise ValueError('a confidence interval needs at least one trial')
    ci = scipy.stats.binomtest(int(successes), int(total)).proportion_ci(confidence_level=confidence, method='wilson')
    return float(ci.low), float(ci.high)


def correct_conclusion(membership: str) -> Optional[str]:
    return {'yes': IN_L, 'no': NOT_IN_L}.get(membership)


def wrong_conclusion(membership: str) -> Optional[str]:
    return {'yes': NOT_IN_L, 'no': IN_L}.get(membership)


class CampaignSummary(collections.namedtuple('CampaignSummary', [
        'instance', 'membership', 'strategy', 'u', 'trials', 'seed', 'k0', 'k1',
        'counts', 'frequencies', 'intervals', 'bound', 'judgment'])):
    """
    Outcome of a campaign.

    counts, frequencies and intervals are keyed by conclusion. bound is the completeness bound
    for an honest server and the soundness bound otherwise; judgment is 'ok', 'violated' or 'n/a'.
    """
    @property
    def correct(self) -> Optional[str]:
        return correct_conclusion(self.membership)

    @property
    def wrong(self) -> Optional[str]:
        return wrong_conclusion(self.membership)

    def row(self) -> Dict:
        row = {
            'instance': self.instance, 'membership': self.membership, 'strategy': self.strategy,
            'u': self.u, 'trials': self.trials, 'seed': self.seed, 'k0': self.k0, 'k1': self.k1,
            'bound': self.bound, 'judgment': self.judgment,
        }
        for conclusion in CONCLUSIONS:
            lo, hi = self.intervals[conclusion]
            row[f'freq_{conclusion}'] = self.frequencies[conclusion]
            row[f'freq_{conclusion}_lo'] = lo
            row[f'freq_{conclusion}_hi'] = hi
        for prefix, conclusion in (('correct', self.correct), ('wrong', self.wrong)):
            if conclusion is None:
                row[f'{prefix}_freq'] = row[f'{prefix}_lo'] = row[f'{prefix}_hi'] = np.nan
            else:
                row[f'{prefix}_freq'] = self.frequencies[conclusion]
                row[f'{prefix}_lo'], row[f'{prefix}_hi'] = self.intervals[conclusion]
        return row


def judge(membership: str, strategy: str, u: float, frequencies: Dict, intervals: Dict) -> Tuple[Optional[float], str]:
    """
    Compares a campaign against its guarantee: the honest correct frequency may undershoot
    (1-e^-u)^2 only within the interval, the wrong frequency may overshoot e^-u likewise.
    """
    if membership == 'promise_violating':
        return None, 'n/a'
    if strategy == 'honest':
        bound = completeness_bound(u)
        _, hi = intervals[correct_conclusion(membership)]
        return bound, 'ok' if hi >= bound else 'violated'
    bound = soundness_bound(u)
    lo, _ = intervals[wrong_conclusion(membership)]
    return bound, 'ok' if lo <= bound else 'violated'


def estimate_statistics(inst: Instance, u: float = DEFAULT_U, strategy='honest', trials: int = 200, seed: int = 0,
                        keep_identity: bool = True, budget: Optional[int] = DEFAULT_TEST_BUDGET,
                        setup: Optional[ProtocolSetup] = None) -> CampaignSummary:
    """
    Runs `trials` independent protocol executions; trial i draws from the substreams of key i.

    :param strategy: a BobStrategy or the name of one
    :param setup: a prepared ProtocolSetup to reuse, built from inst otherwise
    """
    if trials < 1:
        raise ValueError(f'trials must be at least 1, got {trials}')
    if isinstance(strategy, str):
        strategy = make_strategy(strategy)
    if not inst.promise_respecting:
        warnings.warn(f'{inst.name} violates the promise, reporting frequencies without a judgment')
    if setup is None:
        setup = prepare_protocol(inst, u, keep_identity, budget)

    counts = collections.OrderedDict((c, 0) for c in CONCLUSIONS)
    for trial in range(trials):
        transcript = run_trial(setup, strategy, seed, trial)
        counts[transcript.conclusion] += 1
        if (trial + 1) % PROGRESS_EVERY == 0:
            logger.info('%s/%s: %d of %d trials done', inst.name, strategy.kind, trial + 1, trials)

    frequencies = collections.OrderedDict((c, counts[c] / trials) for c in CONCLUSIONS)
    intervals = collections.OrderedDict((c, wilson_interval(counts[c], trials)) for c in CONCLUSIONS)
    bound, judgment = judge(inst.membership, strategy.kind, u, frequencies, intervals)
    summary = CampaignSummary(inst.name, inst.membership, strategy.kind, float(u), trials, int(seed),
                              setup.plan.k0, setup.plan.k1, counts, frequencies, intervals, bound, judgment)
    if judgment == 'violated':
        logger.warning('%s/%s violates its bound %.4f: %s', inst.name, strategy.kind, bound, dict(frequencies))
    return summary


def lag1_autocorrelation(indicators: np.ndarray) -> float:
    """ lag-1 sample autocorrelation of a 0/1 sequence, 0 for constant sequences """
    x = np.asarray(indicators, dtype=float)
    x = x - x.mean()
    denominator = float(np.dot(x, x))
    if denominator == 0:
        return 0.0
    return float(np.dot(x[:-1], x[1:]) / denominator)
