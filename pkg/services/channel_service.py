# services/channel_service.py
"""
Binary symmetric channel and reproducible per-trial randomness.
"""

import hashlib
import logging
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


def derive_seed(master: int, index: int, stream: str = 'channel') -> int:
    """64-bit seed from (master, trial index, stream name); independent of trial order."""
    digest = hashlib.sha256(f"{master}|{index}|{stream}".encode()).hexdigest()
    return int(digest[:16], 16)


class ChannelService:
    """Handles BSC transmission and error-pattern sampling."""

    def __init__(self, master_seed: int):
        self.master_seed = master_seed

    def rng(self, index: int, stream: str = 'channel') -> np.random.Generator:
        return np.random.default_rng(derive_seed(self.master_seed, index, stream))

    @staticmethod
    def flips(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
        """
        Flip mask with P(flip) = p per bit.

        One uniform draw per bit, thresholded at p, so for a fixed generator
        the flip set at a smaller p is a subset of the flip set at a larger p.
        """
        if not 0.0 <= p <= 0.5:
            raise ValueError(f"[bsc] crossover probability {p} outside [0, 1/2]")
        return (rng.random(n) < p).astype(np.int64)

    def transmit(self, x, p: float, rng: np.random.Generator) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return np.bitwise_xor(x, self.flips(x.size, p, rng))

    @staticmethod
    def error_pattern(n: int, weight: int, rng: np.random.Generator) -> np.ndarray:
        """Uniformly random pattern of exact weight."""
        if not 0 <= weight <= n:
            raise ValueError(f"[error_pattern] weight {weight} outside [0, {n}]")
        pattern = np.zeros(n, dtype=np.int64)
        pattern[rng.choice(n, size=weight, replace=False)] = 1
        return pattern


def bsc_transmit(x, p: float, seed: Optional[int] = None) -> np.ndarray:
    """Transmit x over BSC(p); the flip pattern depends only on the seed."""
    return ChannelService(master_seed=seed or 0).transmit(x, p, np.random.default_rng(seed))
