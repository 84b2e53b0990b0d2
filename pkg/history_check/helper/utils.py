import functools
import operator
import numpy as np

from typing import Iterable, Optional


def protocol_stream(seed: int, *key: int) -> np.random.Generator:
    """
    Creates an independent, reproducible random stream.

    Each (trial, party) pair gets its own spawn key so that changing the number of
    trials never shifts the randomness of the trials that are already there.
    Trial i uses key (i,), Bob draws from (i, 0) and Alice from (i, 1).

    :param seed: the user supplied root seed
    :param key: the spawn key identifying the substream
    :return: a numpy Generator on a Philox bit generator
    """
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))


def product(iterable: Iterable):
    """
    Multiplies all elements of iterable and returns result

    ATTRIBUTION: code provided by Raymond Hettinger on SO
    https://stackoverflow.com/questions/595374/whats-the-function-like-sum-but-for-multiplication-product
    """
    return functools.reduce(operator.mul, iterable, 1)


def str2bool(value) -> bool:
    """ lenient conversion of flags coming from the environment or the command line """
    if isinstance(value, bool):
        return value
    if value is None:
        return False
    value = str(value).strip().lower()
    if value in ('1', 'true', 'yes', 'y', 'on'):
        return True
    if value in ('0', 'false', 'no', 'n', 'off', ''):
        return False
    raise ValueError(f'cannot interpret {value!r} as a boolean')


def format_float(value: Optional[float]) -> str:
    """ compact, round-trippable float formatting for reports; inf stays 'inf' """
    if value is None:
        return ''
    return repr(float(value))
