"""
Alice, the verifier: one energy test per copy, two threshold bits and the final conclusion.
"""
import json
import logging

import numpy as np

from typing import Dict, List, Optional, Tuple

from history_check.tasks.energy_test import EnergyTestRecord, run_energy_test

logger = logging.getLogger(__name__)

IN_L = 'in_L'
NOT_IN_L = 'not_in_L'
DISHONEST = 'dishonest'
CONCLUSIONS = (IN_L, NOT_IN_L, DISHONEST)


def threshold_bit(eta: int, k: int, thresholds) -> int:
    """ 1 if eta/k >= (alpha + beta)/2 """
    return 1 if eta / k >= (thresholds.alpha + thresholds.beta) / 2 else 0


def conclude(xi0: int, xi1: int) -> str:
    if (xi0, xi1) == (1, 0):
        return IN_L
    if (xi0, xi1) == (0, 1):
        return NOT_IN_L
    return DISHONEST


class ProtocolTranscript:
    """
    Everything Alice saw and decided in one run.

    :param records0: tests against H0 on the psi0 slots
    :param records1: tests against H1 on the psi1 slots
    :param plan: the RepetitionPlan the run followed
    :param meta: run description written into the summary line (instance, strategy, seed, ...)
    """
    def __init__(self, records0: List[EnergyTestRecord], records1: List[EnergyTestRecord], plan, meta: Optional[Dict] = None):
        self.records0 = list(records0)
        self.records1 = list(records1)
        self.plan = plan
        self.meta = dict(meta or {})
        self.eta0 = sum(r.passed for r in self.records0)
        self.eta1 = sum(r.passed for r in self.records1)
        self.xi0 = threshold_bit(self.eta0, plan.k0, plan.thresholds0)
        self.xi1 = threshold_bit(self.eta1, plan.k1, plan.thresholds1)
        self.conclusion = conclude(self.xi0, self.xi1)

    def __repr__(self):
        return f'ProtocolTranscript(eta0={self.eta0}/{self.plan.k0}, eta1={self.eta1}/{self.plan.k1}, {self.conclusion})'

    def pass_indicators(self, battery: int) -> np.ndarray:
        records = self.records0 if battery == 0 else self.records1
        return np.array([r.passed for r in records], dtype=int)

    def summary(self) -> Dict:
        th0, th1 = self.plan.thresholds0, self.plan.thresholds1
        summary = {
            'type': 'summary',
            'u': self.plan.u,
            'k0': self.plan.k0,
            'k1': self.plan.k1,
            'eta0': self.eta0,
            'eta1': self.eta1,
            'xi0': self.xi0,
            'xi1': self.xi1,
            'midpoint0': th0.midpoint,
            'midpoint1': th1.midpoint,
            'thresholds0': th0.to_dict(),
            'thresholds1': th1.to_dict(),
            'conclusion': self.conclusion,
        }
        summary.update(self.meta)
        return summary

    def lines(self):
        """ JSON-lines: one row per energy test, then the summary object """
        for battery, records in ((0, self.records0), (1, self.records1)):
            for i, record in enumerate(records):
                row = {'type': 'test', 'battery': battery, 'copy': i}
                row.update(record.to_dict())
                yield json.dumps(row, sort_keys=True)
        yield json.dumps(self.summary(), sort_keys=True)

    def to_jsonl(self) -> str:
        return '\n'.join(self.lines()) + '\n'


def alice_verify(copies: List[Tuple[str, object]], H0, H1, plan, rng: np.random.Generator, meta: Optional[Dict] = None) -> ProtocolTranscript:
    """
    Tests every psi0 slot against H0 and every psi1 slot against H1, one fresh copy per test.

    :param copies: the (slot, state) list produced by bob_prepare
    """
    expected = ['psi0'] * plan.k0 + ['psi1'] * plan.k1
    if [slot for slot, _ in copies] != expected:
        raise ValueError(f'expected {plan.k0} psi0 slots followed by {plan.k1} psi1 slots, got {len(copies)} copies '
                         f'in a different layout')
    records0, records1 = [], []
    for slot, psi in copies:
        H, records = (H0, records0) if slot == 'psi0' else (H1, records1)
        if psi.m != H.m:
            raise ValueError(f'copy on {psi.m} qubits does not fit the {H.m} qubit Hamiltonian')
        records.append(run_energy_test(psi, H, rng))
    transcript = ProtocolTranscript(records0, records1, plan, meta)
    logger.debug('%r', transcript)
    return transcript
