# constructions/multilevel.py
"""
m-level bipartite-graph codes and their m-stage decoder.

Every left vertex v carries x_v in A = A_1 of the tower. Through the
tower's direct sum x_v = sum_i a_v^i G_i, and the level message a_v^i
sits on the Δ_i edges E_i(v). A word is in the code when
  (1) x_v lies in A for every v,
  (2) a_v^i lies in A_{i,aux} for every v and level i,
  (3) the level-i symbols around every w in V_i form a B_i codeword.
Conditions (2) and (3) say the level word a^i is a codeword of the
bipartite-graph code C_i = C(G_i; A_{i,aux}, B_i), so the code is the
image of C_1 x ... x C_m under the tower synthesis map.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence

import numpy as np

from codes.linear import LinearCode, binary_distances
from codes.tower import NestedTower
from constants import BRUTE_FORCE_MAX_BITS
from constructions.expander import BGCode, local_bits, min_sum, symbol_costs
from errors import CodeConstructionError
from graphs import MultilevelGraph

logger = logging.getLogger(__name__)


def uniform_degrees(degree: int, r0: float, m: int) -> List[int]:
    """Δ_i = R_0 Δ / m for i <= m, and the rest Δ - R_0 Δ on the socket level."""
    level = r0 * degree / m
    if abs(level - round(level)) > 1e-9 or round(level) < 1:
        raise ValueError(f"[uniform_degrees] R_0*Δ/m = {level:g} is not a positive integer")
    level = int(round(level))
    rest = degree - m * level
    if rest < 1:
        raise ValueError(f"[uniform_degrees] no edges left for the socket level (Δ={degree}, R_0={r0})")
    return [level] * m + [rest]


@dataclass
class StageState:
    """Decoder state between stages."""
    stage: int
    residual: np.ndarray
    level_words: List[np.ndarray] = field(default_factory=list)
    flags: List[bool] = field(default_factory=list)
    rounds: List[int] = field(default_factory=list)


@dataclass
class MultilevelDecodeResult:
    message: np.ndarray
    level_messages: List[np.ndarray]
    level_words: List[np.ndarray]
    symbols: np.ndarray
    bits: np.ndarray
    stage_failed: List[bool]
    residual: np.ndarray
    rounds: List[int]
    stages_run: int

    @property
    def first_failed_stage(self) -> Optional[int]:
        for i, failed in enumerate(self.stage_failed, start=1):
            if failed:
                return i
        return None

    @property
    def success(self) -> bool:
        return not any(self.stage_failed) and self.stages_run == len(self.stage_failed)


class MLExpanderCode:
    """Multilevel code on a MultilevelGraph with a q-ary nested tower."""

    def __init__(self, graph: MultilevelGraph, tower: NestedTower, aux: Sequence[LinearCode],
                 right: Sequence[LinearCode], name: str = 'multilevel'):
        aux, right = list(aux), list(right)
        m = graph.m
        if tower.m != m or len(aux) != m or len(right) != m:
            raise CodeConstructionError(
                f"[{name}] need {m} tower blocks, aux and right codes; "
                f"got {tower.m}, {len(aux)}, {len(right)}"
            )
        if tower.n != graph.degree:
            raise CodeConstructionError(f"[{name}] tower length {tower.n} != degree {graph.degree}")
        if tower.level_dims != graph.degrees[:m]:
            raise CodeConstructionError(
                f"[{name}] tower level dims {tower.level_dims} != level degrees {graph.degrees[:m]}"
            )
        for i, (a, b) in enumerate(zip(aux, right), start=1):
            if a.n != graph.degrees[i - 1] or b.n != graph.degrees[i - 1]:
                raise CodeConstructionError(f"[{name}] level {i} aux/right codes must have length {graph.degrees[i - 1]}")
            if a.q != tower.ctx.q or b.q != tower.ctx.q:
                raise CodeConstructionError(f"[{name}] level {i} codes must be over GF({tower.ctx.q})")

        self.graph = graph
        self.tower = tower
        self.aux = aux
        self.right = right
        self.ctx = tower.ctx
        self.name = name
        self.m = m
        self.level_codes = [BGCode(graph.level(i), aux[i - 1], right[i - 1], name=f"{name}.C{i}")
                            for i in range(1, m + 1)]
        self.level_dims = [c.dimension for c in self.level_codes]
        logger.info(f"Built {self!r}: level dimensions {self.level_dims}")

    def __repr__(self):
        return f"<MLExpanderCode n={self.graph.n} degrees={self.graph.degrees} q={self.ctx.q}>"

    @property
    def length(self) -> int:
        return self.graph.n_edges

    @property
    def n_bits(self) -> int:
        return self.length * self.ctx.t

    @property
    def dimension(self) -> int:
        return sum(self.level_dims)

    @property
    def k_bits(self) -> int:
        return self.dimension * self.ctx.t

    # -------------------------------------------------------------------------
    # Encoding and membership
    # -------------------------------------------------------------------------

    def split_message(self, message) -> List[np.ndarray]:
        message = np.asarray(message, dtype=np.int64)
        if message.shape != (self.dimension,):
            raise ValueError(f"[{self.name}] message length {message.shape} != {self.dimension}")
        return np.split(message, np.cumsum(self.level_dims)[:-1])

    def level_words(self, message) -> List[np.ndarray]:
        """Level words a^i in C_i for a message."""
        return [code.encode(part) for code, part in zip(self.level_codes, self.split_message(message))]

    def level_component(self, level: int, level_word) -> np.ndarray:
        """x_v^(level) = a_v^level G_level for every v, n x Δ symbols in local order."""
        local = np.asarray(level_word, dtype=np.int64)[self.graph.level(level).left_index]
        return self.ctx.matmul(local, self.tower.blocks[level - 1])

    def synthesize(self, level_words: Sequence) -> np.ndarray:
        """Word x from level words via x_v = sum_i a_v^i G_i."""
        local = np.concatenate(
            [np.asarray(w, dtype=np.int64)[self.graph.level(i).left_index]
             for i, w in enumerate(level_words, start=1)], axis=1)
        word = np.empty(self.length, dtype=np.int64)
        word[self.graph.local_index] = self.ctx.matmul(local, self.tower.stacked(1))
        return word

    def encode(self, message) -> np.ndarray:
        return self.synthesize(self.level_words(message))

    def encode_bits(self, message) -> np.ndarray:
        return self.ctx.symbols_to_bits(self.encode(message))

    def deduce(self, word) -> Optional[List[np.ndarray]]:
        """Level words read back from x through the tower, or None if some x_v is not in A."""
        local = self.graph.local_words(np.asarray(word, dtype=np.int64))
        outer = self.tower.code(1)
        if not np.all(outer.contains(local)):
            return None
        pieces = self.tower.partition(outer.unencode(local))
        words = []
        for i, piece in enumerate(pieces, start=1):
            level_word = np.empty(self.graph.level(i).n_edges, dtype=np.int64)
            level_word[self.graph.level(i).left_index] = piece
            words.append(level_word)
        return words

    def member(self, word) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.length,):
            raise ValueError(f"[{self.name}] word length {word.shape} != {self.length}")
        words = self.deduce(word)
        if words is None:
            return False
        return all(code.member(w) for code, w in zip(self.level_codes, words))

    def unencode(self, word) -> np.ndarray:
        words = self.deduce(word)
        if words is None:
            raise ValueError(f"[{self.name}] word is not in the left code at every vertex")
        return np.concatenate([code.unencode(w) for code, w in zip(self.level_codes, words)])

    @cached_property
    def code(self) -> LinearCode:
        """The code as a plain linear code over GF(q); rows encode unit messages."""
        rows = np.array([self.encode(unit) for unit in np.eye(self.dimension, dtype=np.int64)])
        return LinearCode(self.ctx, rows, name=self.name)

    def constraint_matrix(self) -> np.ndarray:
        """
        All three membership conditions as one linear system on x.

        a^i is linear in x: a_v^i = x_v @ L_i with L_i read off the tower's
        information set, so the C_i checks pull back through that map.
        """
        outer = self.tower.code(1)
        A_rows = outer.parity_check()
        blocks = []
        for v in range(self.graph.n):
            rows = np.zeros((A_rows.shape[0], self.length), dtype=np.int64)
            rows[:, self.graph.local_index[v]] = A_rows
            blocks.append(rows)

        coords, inverse = outer.information_set()
        cuts = np.cumsum([0] + self.tower.level_dims)
        for i, code in enumerate(self.level_codes, start=1):
            L = np.zeros((self.tower.n, self.tower.level_dims[i - 1]), dtype=np.int64)
            L[coords] = inverse[:, cuts[i - 1]:cuts[i]]
            level = self.graph.level(i)
            T = np.zeros((level.n_edges, self.length), dtype=np.int64)
            for v in range(self.graph.n):
                T[level.left_index[v][:, None], self.graph.local_index[v][None, :]] = L.T
            checks = code.constraint_matrix()
            if checks.shape[0]:
                blocks.append(self.ctx.matmul(checks, T))
        return np.concatenate(blocks, axis=0) if blocks else np.zeros((0, self.length), dtype=np.int64)

    def monolithic_dimension(self) -> int:
        return self.length - self.ctx.rank(self.constraint_matrix())

    # -------------------------------------------------------------------------
    # Decoding
    # -------------------------------------------------------------------------

    def initial_state(self, y_bits) -> StageState:
        y_bits = np.asarray(y_bits, dtype=np.int64)
        if y_bits.shape != (self.n_bits,):
            raise ValueError(f"[{self.name}] received length {y_bits.shape} != {self.n_bits}")
        return StageState(stage=1, residual=local_bits(y_bits, self.graph.local_index, self.ctx.t))

    def stage_costs(self, level: int, residual: np.ndarray) -> np.ndarray:
        """
        d^i_{v,w}(b) for every level edge: distance of y_{i,v} to A_i with symbol b in a_v^i.

        Words of A_i are labelled by their tower message symbols a_v^i, not by
        codeword symbols. With m = 1 this matches the single-level decoder only
        when the tower block is the systematic generator of A on E_1(v).
        """
        code = self.tower.code(level)
        book = code.codewords()
        labels = code.messages(0, code.size)[:, :self.tower.level_dims[level - 1]]
        distances = binary_distances(residual, self.ctx.symbols_to_bits(book))
        return symbol_costs(distances, labels, self.ctx.q)

    def strip_stage(self, residual: np.ndarray, level: int, level_word) -> np.ndarray:
        """y_{i+1,v} = y_{i,v} + a_v^i G_i on the local bit words."""
        contribution = self.ctx.symbols_to_bits(self.level_component(level, level_word))
        return np.bitwise_xor(np.asarray(residual, dtype=np.int64), contribution.astype(np.int64))

    def decode_stage(self, state: StageState, max_rounds: Optional[int] = None) -> StageState:
        level = state.stage
        code = self.level_codes[level - 1]
        costs = self.stage_costs(level, state.residual)
        n, L, q = costs.shape
        seed = min_sum(costs.reshape(n * L, q), self.graph.level(level).right_index,
                       self.right[level - 1].sorted_codewords())
        inner = code.basic_decode(seed, max_rounds)
        failed = not (inner.converged and code.member(inner.word))
        if failed:
            logger.warning(f"{self!r}: stage {level} did not reach a codeword of C_{level} "
                           f"after {inner.rounds} rounds")
        return StageState(
            stage=level + 1,
            residual=self.strip_stage(state.residual, level, inner.word),
            level_words=state.level_words + [inner.word],
            flags=state.flags + [failed],
            rounds=state.rounds + [inner.rounds],
        )

    def decode(self, y_bits, max_rounds: Optional[int] = None, strict: bool = False) -> MultilevelDecodeResult:
        """
        Stages 1..m in order. In strict mode decoding stops after the first
        failed stage and the remaining levels are left at zero.
        """
        state = self.initial_state(y_bits)
        while state.stage <= self.m:
            state = self.decode_stage(state, max_rounds)
            if strict and state.flags[-1]:
                break

        stages_run = len(state.level_words)
        words = list(state.level_words)
        for i in range(stages_run + 1, self.m + 1):
            words.append(np.zeros(self.graph.level(i).n_edges, dtype=np.int64))
        flags = state.flags + [False] * (self.m - stages_run)
        messages = [code.unencode(w) for code, w in zip(self.level_codes, words)]
        symbols = self.synthesize(words)
        logger.debug(f"{self!r}: stages run {stages_run}, flags {flags}, rounds {state.rounds}")
        return MultilevelDecodeResult(
            message=np.concatenate(messages),
            level_messages=messages,
            level_words=words,
            symbols=symbols,
            bits=self.ctx.symbols_to_bits(symbols),
            stage_failed=flags,
            residual=state.residual,
            rounds=state.rounds,
            stages_run=stages_run,
        )

    # -------------------------------------------------------------------------
    # Parameters
    # -------------------------------------------------------------------------

    def params(self, rank_check: bool = False) -> Dict:
        """
        Rate and distance report.

        rate_bound is the dimension-count lower bound
        sum_i (R_{0,i} - R_{0,i+1}) (R_{1,i} - (1 - R_{i,aux})); slack is the
        measured rate minus that bound.
        """
        t = self.ctx.t
        N = self.n_bits
        levels = []
        design_rate = 0.0
        rate_bound = 0.0
        for i in range(1, self.m + 1):
            share = self.tower.rate(i) - self.tower.rate(i + 1)
            right, aux = self.right[i - 1], self.aux[i - 1]
            design_rate += share * right.rate
            rate_bound += share * (right.rate - (1 - aux.rate))

            delta_0 = self.tower.code(i).binary_image().min_distance() / (t * self.tower.n)
            d_1 = right.min_distance()
            d_aux = aux.min_distance()
            lam = self.graph.level(i).lam
            bound = (delta_0 * (d_1 / right.n) * max(0.0, 1 - lam / d_aux)
                     * max(0.0, 1 - lam / (2 * d_1)) * N)
            levels.append({
                'level': i,
                'degree': self.graph.degrees[i - 1],
                'R_0': self.tower.rate(i),
                'R_1': right.rate,
                'R_aux': aux.rate,
                'lambda': lam,
                'delta_0': delta_0,
                'delta_1': d_1 / right.n,
                'd_aux': d_aux,
                'distance_bound': bound,
            })

        rate = self.k_bits / N
        report = {
            'kind': 'multilevel',
            'm': self.m,
            'N': N,
            'K': self.k_bits,
            'rate': rate,
            'design_rate': design_rate,
            'rate_bound': rate_bound,
            'slack': rate - rate_bound,
            'design_relative_distance': min(l['delta_0'] * l['delta_1'] for l in levels),
            'distance_bound': min(l['distance_bound'] for l in levels),
            'levels': levels,
            'monolithic_dimension': None,
            'true_distance': None,
        }
        if rank_check:
            report['monolithic_dimension'] = self.monolithic_dimension() * t
        if self.k_bits <= BRUTE_FORCE_MAX_BITS:
            report['true_distance'] = self.code.binary_image().min_distance()
        return report


def ml_encode(code: MLExpanderCode, message) -> np.ndarray:
    return code.encode(message)


def ml_member(code: MLExpanderCode, word) -> bool:
    return code.member(word)


def ml_decode(code: MLExpanderCode, y_bits, max_rounds: Optional[int] = None,
              strict: bool = False) -> MultilevelDecodeResult:
    return code.decode(y_bits, max_rounds, strict)


def ml_params(code: MLExpanderCode, rank_check: bool = False) -> Dict:
    return code.params(rank_check)
