# services/sweep_service.py
"""
Success rate against exact error weight.
"""

import itertools
import logging
import math
from typing import Iterator, Sequence

import numpy as np
import pandas as pd

from constants import EXHAUSTIVE_PATTERN_LIMIT
from services.channel_service import ChannelService

logger = logging.getLogger(__name__)


class SweepService:
    """Decodes codewords hit by error patterns of fixed weight."""

    def __init__(self, channel: ChannelService, exhaustive_limit: int = EXHAUSTIVE_PATTERN_LIMIT):
        self.channel = channel
        self.exhaustive_limit = exhaustive_limit

    def _patterns(self, n: int, weight: int, samples: int, exhaustive: bool) -> Iterator[np.ndarray]:
        if exhaustive:
            for support in itertools.combinations(range(n), weight):
                pattern = np.zeros(n, dtype=np.int64)
                pattern[list(support)] = 1
                yield pattern
            return
        rng = self.channel.rng(weight, 'sweep-pattern')
        for _ in range(samples):
            yield self.channel.error_pattern(n, weight, rng)

    def radius_sweep(self, adapter, weights: Sequence[int], samples: int) -> pd.DataFrame:
        """
        One row per weight: patterns tried, successes, success rate.

        Every pattern of a weight is tried when there are at most
        `exhaustive_limit` of them; otherwise `samples` uniform patterns.
        Each pattern hits its own random codeword.
        """
        rows = []
        n = adapter.n_bits
        for weight in weights:
            if not 0 <= weight <= n:
                raise ValueError(f"[sweep] weight {weight} outside [0, {n}]")
            exhaustive = math.comb(n, weight) <= self.exhaustive_limit
            successes = tried = 0
            for index, pattern in enumerate(self._patterns(n, weight, samples, exhaustive)):
                message = adapter.random_message(self.channel.rng(index, f'sweep-{weight}'))
                y = np.bitwise_xor(adapter.encode(message), pattern)
                outcome = adapter.decode(y)
                ok = not any(outcome.stage_flags) and np.array_equal(outcome.message, message)
                successes += int(ok)
                tried += 1
            rate = successes / tried if tried else float('nan')
            rows.append({'weight': weight, 'patterns': tried, 'successes': successes,
                         'success_rate': rate, 'exhaustive': exhaustive})
            logger.info(f"weight {weight}: {successes}/{tried} decoded ({'exhaustive' if exhaustive else 'sampled'})")
        return pd.DataFrame(rows)
