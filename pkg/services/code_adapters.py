# services/code_adapters.py
"""
Uniform encode/decode surface over the three code families for the
simulation and sweep services.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from constructions.expander import ModifiedBGCode
from constructions.multilevel import MLExpanderCode
from constructions.serial import SerialCode


@dataclass
class DecodeOutcome:
    message: np.ndarray
    level_messages: List[np.ndarray]
    stage_flags: List[bool]
    stages_run: int


class SerialAdapter:
    kind = 'serial'

    def __init__(self, code: SerialCode):
        self.code = code
        self.levels = code.m
        self.n_bits = code.N
        self.k_bits = code.K

    def random_message(self, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, 2, size=self.code.K)

    def level_truth(self, message) -> List[np.ndarray]:
        return self.code.split_message(message)

    def encode(self, message) -> np.ndarray:
        return self.code.encode(message)

    def decode(self, y, strict: bool = False, max_rounds: Optional[int] = None) -> DecodeOutcome:
        result = self.code.decode(y, strict=strict)
        return DecodeOutcome(result.message, result.level_messages, result.stage_failed, result.stages_run)


class SingleAdapter:
    kind = 'single'

    def __init__(self, code: ModifiedBGCode):
        self.code = code
        self.levels = 1
        self.n_bits = code.n_bits
        self.k_bits = code.dimension * code.ctx.t

    def random_message(self, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.code.ctx.q, size=self.code.dimension)

    def level_truth(self, message) -> List[np.ndarray]:
        return [np.asarray(message, dtype=np.int64)]

    def encode(self, message) -> np.ndarray:
        return self.code.encode_bits(message)

    def decode(self, y, strict: bool = False, max_rounds: Optional[int] = None) -> DecodeOutcome:
        result = self.code.modified_decode(y, max_rounds)
        return DecodeOutcome(result.message, [result.message], [not result.converged], 1)


class MultilevelAdapter:
    kind = 'multilevel'

    def __init__(self, code: MLExpanderCode):
        self.code = code
        self.levels = code.m
        self.n_bits = code.n_bits
        self.k_bits = code.k_bits

    def random_message(self, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.code.ctx.q, size=self.code.dimension)

    def level_truth(self, message) -> List[np.ndarray]:
        return self.code.split_message(message)

    def encode(self, message) -> np.ndarray:
        return self.code.encode_bits(message)

    def decode(self, y, strict: bool = False, max_rounds: Optional[int] = None) -> DecodeOutcome:
        result = self.code.decode(y, max_rounds=max_rounds, strict=strict)
        return DecodeOutcome(result.message, result.level_messages, result.stage_failed, result.stages_run)


def adapter_for(code):
    """Adapter matching the code's family."""
    if isinstance(code, SerialCode):
        return SerialAdapter(code)
    if isinstance(code, ModifiedBGCode):
        return SingleAdapter(code)
    if isinstance(code, MLExpanderCode):
        return MultilevelAdapter(code)
    raise TypeError(f"[adapter] unsupported code {type(code).__name__}")
