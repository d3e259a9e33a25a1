# constructions/expander.py
"""
Bipartite-graph codes C(G; A, B) and the modified single-level construction.

Symbols sit on edges in the graph's global edge order. Binary words are
the symbol words expanded t bits per edge, little-endian.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional

import numpy as np

from codes.linear import LinearCode, binary_distances, hamming_distances
from constants import BRUTE_FORCE_MAX_BITS, ROUND_FACTOR
from errors import CodeConstructionError
from graphs import BipartiteGraph, MultilevelGraph

logger = logging.getLogger(__name__)

# cost of a symbol no codeword carries at that coordinate
UNREACHABLE = 10 ** 9


def default_rounds(n: int, factor: int = ROUND_FACTOR) -> int:
    """Round cap ceil(factor * log2 n), at least 1."""
    return max(1, math.ceil(factor * math.log2(max(n, 1))))


@dataclass
class DecodeResult:
    """Outcome of basic iterative decoding."""
    word: np.ndarray
    converged: bool
    rounds: int
    history: List[int] = field(default_factory=list)


@dataclass
class ReliabilityTable:
    """costs[v, j, b]: distance of y_v to the closest codeword with symbol b at local coordinate j."""
    costs: np.ndarray
    distances: np.ndarray

    @property
    def edge_costs(self) -> np.ndarray:
        """Costs per level edge (v * L + j) and symbol."""
        n, L, q = self.costs.shape
        return self.costs.reshape(n * L, q)


# =============================================================================
# Local decoding primitives (shared with the multilevel decoder)
# =============================================================================

def nearest_codewords(words: np.ndarray, book: np.ndarray) -> np.ndarray:
    """Row-wise nearest codeword in symbol Hamming distance, first in book order on ties."""
    return book[np.argmin(hamming_distances(words, book), axis=1)]


def symbol_costs(distances: np.ndarray, labels: np.ndarray, q: int) -> np.ndarray:
    """
    Group codeword distances by label symbol.

    Args:
        distances: n x M distances of each received local word to each codeword
        labels: M x L symbols that each codeword carries at L coordinates
        q: field size

    Returns:
        n x L x q table of minimum distances per (coordinate, symbol)
    """
    n = distances.shape[0]
    L = labels.shape[1]
    costs = np.full((n, L, q), UNREACHABLE, dtype=np.int64)
    for j in range(L):
        for b in range(q):
            selected = labels[:, j] == b
            if selected.any():
                costs[:, j, b] = distances[:, selected].min(axis=1)
    return costs


def min_sum(edge_costs: np.ndarray, right_index: np.ndarray, book: np.ndarray) -> np.ndarray:
    """
    Per right vertex, the codeword minimizing the summed edge costs.

    Args:
        edge_costs: E x q costs in level edge order
        right_index: n x Δ edge indices of each right vertex
        book: M x Δ right codebook, ties resolved to the earliest row

    Returns:
        E symbols, the chosen codeword written onto the edges
    """
    degree = right_index.shape[1]
    per_vertex = edge_costs[right_index]
    totals = per_vertex[:, np.arange(degree)[None, :], book].sum(axis=2)
    choice = np.argmin(totals, axis=1)
    symbols = np.empty(edge_costs.shape[0], dtype=np.int64)
    symbols[right_index] = book[choice]
    return symbols


def local_bits(y_bits: np.ndarray, index: np.ndarray, t: int) -> np.ndarray:
    """Bits of the local words selected by an n x Δ edge index, n x (Δ t)."""
    per_edge = np.asarray(y_bits, dtype=np.int64).reshape(-1, t)
    return per_edge[index].reshape(index.shape[0], -1)


# =============================================================================
# C(G; A, B)
# =============================================================================

class BGCode:
    """Left code A at every left vertex, right code B at every right vertex."""

    def __init__(self, graph: BipartiteGraph, left: LinearCode, right: LinearCode, name: str = 'bg'):
        if left.n != graph.degree or right.n != graph.degree:
            raise CodeConstructionError(
                f"[{name}] component lengths ({left.n}, {right.n}) must equal degree {graph.degree}"
            )
        if left.ctx is not right.ctx and left.ctx.q != right.ctx.q:
            raise CodeConstructionError(f"[{name}] component codes over different fields")
        self.graph = graph
        self.left = left
        self.right = right
        self.ctx = left.ctx
        self.name = name

    def __repr__(self):
        return f"<BGCode {self.name} n={self.graph.n} degree={self.graph.degree} q={self.ctx.q}>"

    @property
    def length(self) -> int:
        return self.graph.n_edges

    @property
    def n_bits(self) -> int:
        return self.length * self.ctx.t

    def unsatisfied(self, word) -> int:
        word = np.asarray(word, dtype=np.int64)
        bad_left = ~self.left.contains(word[self.graph.left_index])
        bad_right = ~self.right.contains(word[self.graph.right_index])
        return int(bad_left.sum() + bad_right.sum())

    def member(self, word) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.length,):
            raise ValueError(f"[{self.name}] word length {word.shape} != {self.length}")
        return self.unsatisfied(word) == 0

    def constraint_blocks(self):
        """(label, rows) for every local parity check, left vertices first."""
        N = self.length
        for side, code, index in (('left', self.left, self.graph.left_index),
                                  ('right', self.right, self.graph.right_index)):
            H = code.parity_check()
            if H.shape[0] == 0:
                continue
            for vertex, edges in enumerate(index):
                rows = np.zeros((H.shape[0], N), dtype=np.int64)
                rows[:, edges] = H
                yield f"{side} vertex {vertex}", rows

    def constraint_matrix(self) -> np.ndarray:
        blocks = [rows for _, rows in self.constraint_blocks()]
        if not blocks:
            return np.zeros((0, self.length), dtype=np.int64)
        return np.concatenate(blocks, axis=0)

    def _offending_block(self) -> str:
        stack = np.zeros((0, self.length), dtype=np.int64)
        for label, rows in self.constraint_blocks():
            stack = np.concatenate([stack, rows], axis=0)
            if self.ctx.rank(stack) == self.length:
                return label
        return 'none'

    @cached_property
    def code(self) -> LinearCode:
        """C as a plain linear code; generator from the null space of all local checks."""
        H = self.constraint_matrix()
        basis = self.ctx.null_space(H) if H.shape[0] else np.eye(self.length, dtype=np.int64)
        if basis.size == 0:
            raise CodeConstructionError(
                f"[{self.name}] constraint system only admits the zero word; "
                f"solution space collapses at {self._offending_block()}"
            )
        logger.debug(f"{self!r}: dimension {basis.shape[0]} of {self.length}")
        return LinearCode(self.ctx, basis, name=self.name)

    @property
    def dimension(self) -> int:
        return self.code.k

    def encode(self, message) -> np.ndarray:
        return self.code.encode(message)

    def unencode(self, word) -> np.ndarray:
        return self.code.unencode(word)

    def basic_decode(self, y, max_rounds: Optional[int] = None) -> DecodeResult:
        """
        Alternate full left and right ML rounds until a fixed point or the cap.

        The history lists unsatisfied local constraints before round 1 and
        after every round.
        """
        word = np.array(y, dtype=np.int64)
        if word.shape != (self.length,):
            raise ValueError(f"[{self.name}] received length {word.shape} != {self.length}")
        max_rounds = max_rounds or default_rounds(self.graph.n)
        left_book = self.left.codewords()
        right_book = self.right.codewords()
        left_index, right_index = self.graph.left_index, self.graph.right_index

        history = [self.unsatisfied(word)]
        for round_no in range(1, max_rounds + 1):
            before = word.copy()
            word[left_index] = nearest_codewords(word[left_index], left_book)
            word[right_index] = nearest_codewords(word[right_index], right_book)
            history.append(self.unsatisfied(word))
            if np.array_equal(word, before):
                return DecodeResult(word=word, converged=True, rounds=round_no, history=history)
        return DecodeResult(word=word, converged=history[-1] == 0, rounds=max_rounds, history=history)


def bg_encode(code: BGCode, message) -> np.ndarray:
    return code.encode(message)


def bg_member(code: BGCode, word) -> bool:
    return code.member(word)


def basic_decode(code: BGCode, y, max_rounds: Optional[int] = None) -> DecodeResult:
    return code.basic_decode(y, max_rounds)


def unsatisfied_constraints(code: BGCode, word) -> int:
    return code.unsatisfied(word)


# =============================================================================
# Modified construction
# =============================================================================

@dataclass
class ModifiedDecodeResult:
    """Rebuilt word plus the state of the auxiliary decoding."""
    word: np.ndarray
    bits: np.ndarray
    message: np.ndarray
    converged: bool
    rounds: int
    seed: np.ndarray


class ModifiedBGCode:
    """
    Single-level code on V_0 + V_1 + V_2.

    x_v must lie in A for every left vertex, the level-1 edges of every
    w in V_1 must form a B codeword, and the level-1 part x_v|E_1(v) must
    lie in A_aux. E_1(v) is the first Δ_1 local coordinates and must be an
    information set of A; A is kept in systematic form there, so the word
    is determined by its level-1 symbols.
    """

    def __init__(self, graph: MultilevelGraph, left: LinearCode, right: LinearCode,
                 aux: LinearCode, name: str = 'single'):
        if graph.m != 1:
            raise CodeConstructionError(f"[{name}] needs a one-level graph, got m={graph.m}")
        d1 = graph.degrees[0]
        if left.n != graph.degree or left.k != d1:
            raise CodeConstructionError(
                f"[{name}] left code must be [{graph.degree}, {d1}], got [{left.n}, {left.k}]"
            )
        if right.n != d1 or aux.n != d1:
            raise CodeConstructionError(f"[{name}] right and aux codes must have length {d1}")
        if not left.is_information_set(range(d1)):
            raise CodeConstructionError(f"[{name}] E_1(v) is not an information set of the left code")

        self.graph = graph
        self.left = left
        self.right = right
        self.aux = aux
        self.ctx = left.ctx
        self.name = name
        self.systematic = left.systematic(range(d1))
        self.aux_code = BGCode(graph.level(1), aux, right, name=f"{name}.aux")

    def __repr__(self):
        return f"<ModifiedBGCode n={self.graph.n} degrees={self.graph.degrees} q={self.ctx.q}>"

    @property
    def length(self) -> int:
        return self.graph.n_edges

    @property
    def n_bits(self) -> int:
        return self.length * self.ctx.t

    @property
    def dimension(self) -> int:
        return self.aux_code.dimension

    def expand(self, level_word) -> np.ndarray:
        """Full word from level-1 symbols through the systematic left map."""
        level_word = np.asarray(level_word, dtype=np.int64)
        local = level_word[self.graph.level(1).left_index]
        word = np.empty(self.length, dtype=np.int64)
        word[self.graph.local_index] = self.ctx.matmul(local, self.systematic.generator)
        return word

    def encode(self, message) -> np.ndarray:
        return self.expand(self.aux_code.encode(message))

    def encode_bits(self, message) -> np.ndarray:
        return self.ctx.symbols_to_bits(self.encode(message))

    def member(self, word) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.length,):
            raise ValueError(f"[{self.name}] word length {word.shape} != {self.length}")
        local = self.graph.local_words(word)
        level = word[self.graph.level_slice(1)]
        return bool(
            np.all(self.left.contains(local))
            and np.all(self.right.contains(level[self.graph.level(1).right_index]))
            and np.all(self.aux.contains(local[:, :self.graph.degrees[0]]))
        )

    @cached_property
    def code(self) -> LinearCode:
        rows = np.array([self.expand(row) for row in self.aux_code.code.generator])
        return LinearCode(self.ctx, rows, name=self.name)

    # -------------------------------------------------------------------------
    # Decoding
    # -------------------------------------------------------------------------

    def reliability_pass(self, y_bits) -> ReliabilityTable:
        """Exact d_{v,w}(b) by enumerating the left codebook once per vertex."""
        y_bits = np.asarray(y_bits, dtype=np.int64)
        if y_bits.shape != (self.n_bits,):
            raise ValueError(f"[{self.name}] received length {y_bits.shape} != {self.n_bits}")
        book = self.systematic.codewords()
        distances = binary_distances(local_bits(y_bits, self.graph.local_index, self.ctx.t),
                                     self.ctx.symbols_to_bits(book))
        labels = book[:, :self.graph.degrees[0]]
        return ReliabilityTable(costs=symbol_costs(distances, labels, self.ctx.q),
                                distances=distances.min(axis=1))

    def modified_decode(self, y_bits, max_rounds: Optional[int] = None) -> ModifiedDecodeResult:
        table = self.reliability_pass(y_bits)
        seed = min_sum(table.edge_costs, self.graph.level(1).right_index, self.right.sorted_codewords())
        inner = self.aux_code.basic_decode(seed, max_rounds)
        word = self.expand(inner.word)
        converged = inner.converged and self.member(word)
        if not converged:
            logger.debug(f"{self!r}: auxiliary decoding stopped after {inner.rounds} rounds without a codeword")
        return ModifiedDecodeResult(
            word=word,
            bits=self.ctx.symbols_to_bits(word),
            message=self.aux_code.unencode(inner.word),
            converged=converged,
            rounds=inner.rounds,
            seed=seed,
        )

    # -------------------------------------------------------------------------
    # Parameters
    # -------------------------------------------------------------------------

    def params(self) -> Dict:
        """Rate and distance report with the single-level lower bounds."""
        t = self.ctx.t
        delta_0 = self.left.binary_image().min_distance() / (t * self.graph.degree)
        d_1 = self.right.min_distance()
        d_aux = self.aux.min_distance()
        lam = self.graph.level(1).lam
        r0 = self.left.k / self.left.n
        r1 = self.right.rate
        r_aux = self.aux.rate
        bound = (delta_0 * (d_1 / self.right.n) * max(0.0, 1 - lam / d_aux)
                 * max(0.0, 1 - lam / (2 * d_1)) * self.n_bits)

        report = {
            'kind': 'single',
            'N': self.n_bits,
            'K': self.dimension * t,
            'rate': self.dimension * t / self.n_bits,
            'rate_bound': r0 * r1 - r0 * (1 - r_aux),
            'design_rate': r0 * r1,
            'lambda': lam,
            'delta_0': delta_0,
            'delta_1': d_1 / self.right.n,
            'd_aux': d_aux,
            'distance_bound': bound,
            'true_distance': None,
        }
        if self.dimension * t <= BRUTE_FORCE_MAX_BITS:
            report['true_distance'] = self.code.binary_image().min_distance()
        return report


def reliability_pass(code: ModifiedBGCode, y_bits) -> ReliabilityTable:
    return code.reliability_pass(y_bits)


def modified_decode(code: ModifiedBGCode, y_bits, max_rounds: Optional[int] = None) -> ModifiedDecodeResult:
    return code.modified_decode(y_bits, max_rounds)
