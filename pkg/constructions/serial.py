# constructions/serial.py
"""
Serial multilevel concatenation: outer codes B_1..B_m over GF(2^{t_i})
feeding the binary tower A = A_1 > ... > A_m column by column.

Message layout: bits K_{i-1}..K_i - 1 of u belong to level i, in groups of
t_i bits per outer message symbol (little-endian). Column j of the codeword
encodes the concatenation of the level symbols b_i[j] with the stacked
tower generator. The transmitted word lists the n_1 columns one after the
other.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence

import numpy as np

from codes.linear import LinearCode
from codes.reed_solomon import GMDResult, gmd_decode
from codes.tower import NestedTower
from constants import BRUTE_FORCE_MAX_BITS
from errors import CodeConstructionError

logger = logging.getLogger(__name__)


@dataclass
class SerialDecodeResult:
    message: np.ndarray
    level_symbols: List[np.ndarray]
    level_messages: List[np.ndarray]
    stage_failed: List[bool]
    residual: np.ndarray
    stages_run: int
    gmd: List[GMDResult] = field(default_factory=list)

    @property
    def first_failed_stage(self) -> Optional[int]:
        for i, failed in enumerate(self.stage_failed, start=1):
            if failed:
                return i
        return None

    @property
    def success(self) -> bool:
        return not any(self.stage_failed) and self.stages_run == len(self.stage_failed)


class SerialCode:
    """Binary tower over n_0 with level degrees t_i, plus one outer code per level."""

    def __init__(self, tower: NestedTower, outer: Sequence[LinearCode], name: str = 'serial'):
        outer = list(outer)
        if tower.ctx.t != 1:
            raise CodeConstructionError(f"[{name}] the tower must be binary")
        if len(outer) != tower.m:
            raise CodeConstructionError(f"[{name}] {tower.m} tower levels but {len(outer)} outer codes")
        lengths = {code.n for code in outer}
        if len(lengths) != 1:
            raise CodeConstructionError(f"[{name}] outer codes have different lengths {sorted(lengths)}")
        for i, (code, t) in enumerate(zip(outer, tower.level_dims), start=1):
            if code.ctx.t != t:
                raise CodeConstructionError(
                    f"[{name}] outer code {i} is over GF({code.q}), level degree needs GF(2^{t})"
                )

        self.tower = tower
        self.outer = outer
        self.name = name
        self.m = tower.m
        self.n0 = tower.n
        self.n1 = outer[0].n
        self.degrees = list(tower.level_dims)
        self.level_bits = [code.k * t for code, t in zip(outer, self.degrees)]
        self.offsets = [0] + list(np.cumsum(self.level_bits))

    def __repr__(self):
        return f"<SerialCode n0={self.n0} n1={self.n1} t={self.degrees}>"

    @property
    def N(self) -> int:
        return self.n0 * self.n1

    @property
    def K(self) -> int:
        return int(self.offsets[-1])

    @property
    def rate(self) -> float:
        return self.K / self.N

    # -------------------------------------------------------------------------
    # Encoding
    # -------------------------------------------------------------------------

    def split_message(self, u) -> List[np.ndarray]:
        """Outer messages per level, as GF(2^{t_i}) symbols."""
        u = np.asarray(u, dtype=np.int64)
        if u.shape != (self.K,):
            raise ValueError(f"[{self.name}] message length {u.shape} != K={self.K}")
        return [code.ctx.bits_to_symbols(u[int(self.offsets[i]):int(self.offsets[i + 1])])
                for i, code in enumerate(self.outer)]

    def join_message(self, level_messages: Sequence) -> np.ndarray:
        return np.concatenate([code.ctx.symbols_to_bits(msg).astype(np.int64)
                               for code, msg in zip(self.outer, level_messages)])

    def columns(self, outer_words: Sequence) -> np.ndarray:
        """n_1 x n_0 columns from one outer codeword per level."""
        column_messages = np.concatenate(
            [code.ctx.symbols_to_bits(np.asarray(word)).reshape(self.n1, t)
             for code, word, t in zip(self.outer, outer_words, self.degrees)], axis=1)
        return self.tower.ctx.matmul(column_messages, self.tower.stacked(1))

    def encode(self, u) -> np.ndarray:
        outer_words = [code.encode(msg) for code, msg in zip(self.outer, self.split_message(u))]
        return self.columns(outer_words).ravel()

    def to_columns(self, word) -> np.ndarray:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.N,):
            raise ValueError(f"[{self.name}] word length {word.shape} != N={self.N}")
        return word.reshape(self.n1, self.n0)

    @cached_property
    def code(self) -> LinearCode:
        """Binary linear code spanned by the encodings of unit messages."""
        rows = np.array([self.encode(unit) for unit in np.eye(self.K, dtype=np.int64)])
        return LinearCode(self.tower.ctx, rows, name=self.name)

    # -------------------------------------------------------------------------
    # Decoding
    # -------------------------------------------------------------------------

    def strip_stage(self, columns, level: int, outer_word) -> np.ndarray:
        """y_{i+1,j} = y_{i,j} + <b_{i,j}> G_i for every column j."""
        code = self.outer[level - 1]
        bits = code.ctx.symbols_to_bits(np.asarray(outer_word)).reshape(self.n1, self.degrees[level - 1])
        contribution = self.tower.ctx.matmul(bits, self.tower.blocks[level - 1])
        return np.bitwise_xor(np.asarray(columns, dtype=np.int64), contribution)

    def inner_decisions(self, columns, level: int):
        """
        ML-decode each column with A_level.

        Returns the level-symbol decisions and the reliabilities, i.e. the
        runner-up distance minus the best distance per column.
        """
        inner = self.tower.code(level)
        idx, best, second = inner.ml_search(columns)
        messages = inner.messages(0, inner.size)[idx]
        t = self.degrees[level - 1]
        symbols = self.outer[level - 1].ctx.bits_to_symbols(messages[:, :t]).reshape(self.n1)
        return symbols, (second - best).astype(float)

    def decode(self, y, strict: bool = False) -> SerialDecodeResult:
        columns = self.to_columns(y)
        symbols_out, messages_out, flags, reports = [], [], [], []
        for level in range(1, self.m + 1):
            outer = self.outer[level - 1]
            received, reliabilities = self.inner_decisions(columns, level)
            result = gmd_decode(outer, received, reliabilities)
            if result.success:
                decided = result.codeword
            else:
                logger.warning(f"{self!r}: GMD failed at stage {level}")
                decided = received
            flags.append(not result.success)
            reports.append(result)
            symbols_out.append(decided)
            messages_out.append(outer.unencode(decided))
            columns = self.strip_stage(columns, level, decided)
            if strict and flags[-1]:
                break

        stages_run = len(flags)
        for code in self.outer[stages_run:]:
            symbols_out.append(np.zeros(self.n1, dtype=np.int64))
            messages_out.append(np.zeros(code.k, dtype=np.int64))
        flags += [False] * (self.m - stages_run)
        return SerialDecodeResult(
            message=self.join_message(messages_out),
            level_symbols=symbols_out,
            level_messages=messages_out,
            stage_failed=flags,
            residual=columns,
            stages_run=stages_run,
            gmd=reports,
        )

    # -------------------------------------------------------------------------
    # Parameters
    # -------------------------------------------------------------------------

    def params(self) -> Dict:
        inner = self.tower.distances()
        outer = [code.min_distance() for code in self.outer]
        rate_formula = sum((self.tower.rate(i) - self.tower.rate(i + 1)) * self.outer[i - 1].rate
                           for i in range(1, self.m + 1))
        report = {
            'kind': 'serial',
            'm': self.m,
            'N': self.N,
            'K': self.K,
            'rate': self.rate,
            'rate_formula': rate_formula,
            'inner_distances': inner,
            'outer_distances': outer,
            'design_distance': min(a * b for a, b in zip(inner, outer)),
            'true_distance': None,
        }
        if self.K <= BRUTE_FORCE_MAX_BITS:
            report['true_distance'] = self.code.min_distance()
        return report


def serial_encode(code: SerialCode, u) -> np.ndarray:
    return code.encode(u)


def serial_decode(code: SerialCode, y, strict: bool = False) -> SerialDecodeResult:
    return code.decode(y, strict)


def serial_params(code: SerialCode) -> Dict:
    return code.params()


def component_concatenation(code: SerialCode, level: int) -> np.ndarray:
    """All codewords of A^(level) concatenated with B_level, one N-bit word per row."""
    outer = code.outer[level - 1]
    inner = code.tower.blocks[level - 1]
    t = code.degrees[level - 1]
    words = []
    for word in outer.codewords():
        bits = outer.ctx.symbols_to_bits(word).reshape(code.n1, t)
        words.append(code.tower.ctx.matmul(bits, inner).ravel())
    return np.array(words, dtype=np.int64)
