# codes/linear.py
"""
Generator-matrix linear codes over GF(2^t).

Brute-force routines walk the codebook in lexicographic message order
(base-q digits, most significant first), which fixes every tie-break:
among equidistant codewords the one with the smallest message wins.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from constants import CODEBOOK_CACHE_LIMIT, ENUMERATION_BLOCK
from errors import CodeConstructionError, EnumerationBudgetError
from fields import GFContext

logger = logging.getLogger(__name__)


@dataclass
class MLDecision:
    """Outcome of nearest-codeword search for one received word."""
    codeword: np.ndarray
    message: np.ndarray
    distance: int
    runner_up: int

    @property
    def gap(self) -> int:
        return self.runner_up - self.distance


class LinearCode:
    """Linear code given by a full-rank k x n generator matrix."""

    def __init__(self, ctx: GFContext, generator, name: str = '',
                 distance: Optional[int] = None):
        G = np.atleast_2d(np.asarray(generator, dtype=np.int64))
        if G.ndim != 2 or G.shape[0] == 0 or G.shape[1] == 0:
            raise CodeConstructionError(f"[{name or 'code'}] generator must be a non-empty matrix")
        if np.any((G < 0) | (G >= ctx.q)):
            raise ValueError(f"[{name or 'code'}] generator entries outside GF({ctx.q})")
        rank = ctx.rank(G)
        if rank != G.shape[0]:
            raise CodeConstructionError(
                f"[{name or 'code'}] generator has rank {rank}, expected {G.shape[0]}"
            )

        G.setflags(write=False)
        self.ctx = ctx
        self.generator = G
        self.k, self.n = G.shape
        self.name = name
        self._distance = distance
        self._codebook: Optional[np.ndarray] = None
        self._sorted_codebook: Optional[np.ndarray] = None
        self._parity: Optional[np.ndarray] = None
        self._info: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def __repr__(self):
        return f"<LinearCode {self.name or ''}[{self.n},{self.k}] over GF({self.ctx.q})>"

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def size(self) -> int:
        return self.q ** self.k

    # -------------------------------------------------------------------------
    # Encoding
    # -------------------------------------------------------------------------

    def _check_word(self, word, length: int, what: str) -> np.ndarray:
        word = np.asarray(word, dtype=np.int64)
        if word.shape[-1] != length:
            raise ValueError(f"[{self.name or 'code'}] {what} length {word.shape[-1]} != {length}")
        if np.any((word < 0) | (word >= self.q)):
            raise ValueError(f"[{self.name or 'code'}] {what} has symbols outside GF({self.q})")
        return word

    def encode(self, message) -> np.ndarray:
        message = self._check_word(message, self.k, 'message')
        return self.ctx.matmul(message, self.generator)

    def messages(self, start: int, stop: int) -> np.ndarray:
        """Messages with lexicographic indices start..stop-1, one per row."""
        index = np.arange(start, stop, dtype=np.int64)
        powers = self.q ** np.arange(self.k - 1, -1, -1, dtype=np.int64)
        return (index[:, None] // powers[None, :]) % self.q

    # -------------------------------------------------------------------------
    # Enumeration
    # -------------------------------------------------------------------------

    def _require_budget(self, budget: Optional[int]):
        """None falls back to the configured ENUMERATION_BUDGET."""
        budget = get_config().ENUMERATION_BUDGET if budget is None else budget
        if self.size > budget:
            raise EnumerationBudgetError(
                f"[{self.name or 'code'}] enumeration of {self.q}^{self.k} codewords exceeds budget {budget}",
                required=self.size, budget=budget,
            )

    def iter_blocks(self, budget: Optional[int] = None) -> Iterator[Tuple[int, np.ndarray]]:
        """Yield (first message index, codeword block) in lexicographic order."""
        self._require_budget(budget)
        if self._codebook is not None:
            yield 0, self._codebook
            return
        for start in range(0, self.size, ENUMERATION_BLOCK):
            stop = min(start + ENUMERATION_BLOCK, self.size)
            yield start, self.ctx.matmul(self.messages(start, stop), self.generator)

    def codewords(self, budget: Optional[int] = None) -> np.ndarray:
        """All codewords, row i encoding message i; cached when small."""
        if self._codebook is not None:
            return self._codebook
        self._require_budget(budget)
        book = self.ctx.matmul(self.messages(0, self.size), self.generator)
        if self.size <= CODEBOOK_CACHE_LIMIT:
            book.setflags(write=False)
            self._codebook = book
        return book

    def sorted_codewords(self) -> np.ndarray:
        """Codebook in lexicographic order of the codewords themselves."""
        if self._sorted_codebook is None:
            book = self.codewords()
            order = np.lexsort(book.T[::-1])
            self._sorted_codebook = book[order]
        return self._sorted_codebook

    def min_distance(self, budget: Optional[int] = None) -> int:
        if self._distance is None:
            best = self.n
            for start, block in self.iter_blocks(budget):
                weights = np.count_nonzero(block, axis=1)
                if start == 0:
                    weights = weights[1:]
                if weights.size:
                    best = min(best, int(weights.min()))
            self._distance = best
            logger.debug(f"{self!r}: minimum distance {best}")
        return self._distance

    def weight_distribution(self, budget: Optional[int] = None) -> np.ndarray:
        counts = np.zeros(self.n + 1, dtype=np.int64)
        for _, block in self.iter_blocks(budget):
            counts += np.bincount(np.count_nonzero(block, axis=1), minlength=self.n + 1)
        return counts

    # -------------------------------------------------------------------------
    # Decoding
    # -------------------------------------------------------------------------

    def ml_search(self, words, budget: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Nearest codewords for a batch of received words.

        Args:
            words: W x n array of received symbols
            budget: enumeration budget, the configured one when None

        Returns:
            (best message indices, best distances, runner-up distances), each of length W
        """
        words = np.atleast_2d(self._check_word(words, self.n, 'received word'))
        W = words.shape[0]
        best_idx = np.zeros(W, dtype=np.int64)
        best = np.full(W, self.n + 1, dtype=np.int64)
        second = np.full(W, self.n + 1, dtype=np.int64)

        for start, block in self.iter_blocks(budget):
            dist = np.count_nonzero(words[:, None, :] != block[None, :, :], axis=2)
            local = np.argmin(dist, axis=1)
            local_min = dist[np.arange(W), local]
            if dist.shape[1] > 1:
                local_second = np.partition(dist, 1, axis=1)[:, 1]
            else:
                local_second = np.full(W, self.n + 1, dtype=np.int64)

            improved = local_min < best
            second = np.where(improved, np.minimum(best, local_second), np.minimum(second, local_min))
            best_idx = np.where(improved, start + local, best_idx)
            best = np.where(improved, local_min, best)
        return best_idx, best, second

    def ml_decision(self, received) -> MLDecision:
        idx, best, second = self.ml_search(received)
        message = self.messages(int(idx[0]), int(idx[0]) + 1)[0]
        return MLDecision(
            codeword=self.ctx.matmul(message, self.generator),
            message=message,
            distance=int(best[0]),
            runner_up=int(second[0]),
        )

    def ml_decode(self, received) -> np.ndarray:
        return self.ml_decision(received).codeword

    def decode_erasures(self, received, erasures: Sequence[int]) -> Optional[np.ndarray]:
        """
        Bounded-distance errors-and-erasures decoding by enumeration.

        Returns the codeword c with 2*e + s < d, where e counts disagreements
        outside the s erased positions, or None when no codeword qualifies.
        """
        received = self._check_word(received, self.n, 'received word')
        erased = np.zeros(self.n, dtype=bool)
        erased[list(erasures)] = True
        s = int(erased.sum())
        d = self.min_distance()
        if s >= d:
            return None

        keep = ~erased
        best_dist, best_word = self.n + 1, None
        for _, block in self.iter_blocks():
            dist = np.count_nonzero(block[:, keep] != received[keep][None, :], axis=1)
            j = int(np.argmin(dist))
            if dist[j] < best_dist:
                best_dist, best_word = int(dist[j]), block[j].copy()
        if best_word is None or 2 * best_dist + s >= d:
            return None
        return best_word

    # -------------------------------------------------------------------------
    # Structure
    # -------------------------------------------------------------------------

    def parity_check(self) -> np.ndarray:
        """(n-k) x n matrix H with G @ H.T = 0."""
        if self._parity is None:
            if self.k == self.n:
                self._parity = np.zeros((0, self.n), dtype=np.int64)
            else:
                self._parity = self.ctx.null_space(self.generator)
        return self._parity

    def contains(self, words) -> np.ndarray:
        """Membership of each row (or of a single word)."""
        words = np.asarray(words, dtype=np.int64)
        single = words.ndim == 1
        words = np.atleast_2d(self._check_word(words, self.n, 'word'))
        H = self.parity_check()
        if H.shape[0] == 0:
            result = np.ones(words.shape[0], dtype=bool)
        else:
            result = ~np.any(self.ctx.matmul(words, H.T), axis=1)
        return bool(result[0]) if single else result

    def is_information_set(self, coords: Sequence[int]) -> bool:
        coords = list(coords)
        if len(coords) != self.k:
            raise ValueError(f"[{self.name or 'code'}] information set needs {self.k} coordinates, got {len(coords)}")
        return self.ctx.rank(self.generator[:, coords]) == self.k

    def information_set(self) -> Tuple[np.ndarray, np.ndarray]:
        """First pivot columns of G and the inverse of G restricted to them."""
        if self._info is None:
            _, pivots = self.ctx.row_reduce(self.generator)
            coords = np.array(pivots[:self.k], dtype=np.int64)
            self._info = (coords, self.ctx.inverse(self.generator[:, coords]))
        return self._info

    def unencode(self, words) -> np.ndarray:
        """Message read off the information set; exact on codewords."""
        coords, inverse = self.information_set()
        words = np.asarray(words, dtype=np.int64)
        return self.ctx.matmul(words[..., coords], inverse)

    def systematic(self, coords: Sequence[int]) -> 'LinearCode':
        """Same code with a generator that is the identity on coords."""
        coords = list(coords)
        if not self.is_information_set(coords):
            raise CodeConstructionError(f"[{self.name or 'code'}] {coords} is not an information set")
        inverse = self.ctx.inverse(self.generator[:, coords])
        return LinearCode(self.ctx, self.ctx.matmul(inverse, self.generator),
                          name=self.name, distance=self._distance)

    def binary_image(self) -> 'LinearCode':
        """The code over GF(2) obtained by expanding every symbol into t bits."""
        from fields import get_context

        binary = get_context(1)
        if self.ctx.t == 1:
            return LinearCode(binary, self.generator, name=self.name, distance=self._distance)
        rows = []
        for row in self.generator:
            for b in range(self.ctx.t):
                scale = self.ctx.exp(b)
                rows.append(self.ctx.symbols_to_bits([self.ctx.mul(scale, int(s)) for s in row]))
        return LinearCode(binary, np.array(rows), name=f"{self.name}_b" if self.name else '')


# =============================================================================
# Module-level operations
# =============================================================================

def encode(code: LinearCode, message) -> np.ndarray:
    return code.encode(message)


def min_distance(code: LinearCode, budget: Optional[int] = None) -> int:
    return code.min_distance(budget)


def ml_decode(code: LinearCode, received) -> np.ndarray:
    return code.ml_decode(received)


def is_information_set(code: LinearCode, coords: Sequence[int]) -> bool:
    return code.is_information_set(coords)


# =============================================================================
# Families
# =============================================================================

def repetition_code(ctx: GFContext, n: int) -> LinearCode:
    return LinearCode(ctx, np.ones((1, n), dtype=np.int64), name=f"rep{n}", distance=n)


def parity_code(ctx: GFContext, n: int) -> LinearCode:
    """[n, n-1, 2] code whose symbols sum to zero."""
    G = np.concatenate([np.eye(n - 1, dtype=np.int64), np.ones((n - 1, 1), dtype=np.int64)], axis=1)
    return LinearCode(ctx, G, name=f"parity{n}", distance=2 if n > 1 else 1)


def code_from_parity_check(ctx: GFContext, H, name: str = '') -> LinearCode:
    return LinearCode(ctx, ctx.null_space(H), name=name)


def hamming_code(r: int, length: Optional[int] = None) -> LinearCode:
    """Binary Hamming code, shortened to `length` by keeping the first columns 1..length."""
    from fields import get_context

    full = (1 << r) - 1
    length = full if length is None else length
    if not r < length <= full:
        raise ValueError(f"[hamming] length {length} outside ({r}, {full}]")
    columns = np.arange(1, length + 1)
    H = ((columns[None, :] >> np.arange(r)[:, None]) & 1).astype(np.int64)
    return code_from_parity_check(get_context(1), H, name=f"hamming{length}")


def shortened(code: LinearCode, positions: Sequence[int]) -> LinearCode:
    """Codewords that vanish on positions, with those positions deleted."""
    positions = sorted(set(int(i) for i in positions))
    if any(not 0 <= i < code.n for i in positions):
        raise ValueError(f"[{code.name or 'code'}] positions outside [0, {code.n})")
    keep = [i for i in range(code.n) if i not in positions]
    if not keep:
        raise CodeConstructionError(f"[{code.name or 'code'}] cannot shorten every position")
    basis = code.ctx.null_space(code.generator[:, positions].T) if positions else np.eye(code.k, dtype=np.int64)
    if basis.shape[0] == 0:
        raise CodeConstructionError(f"[{code.name or 'code'}] no codeword vanishes on {positions}")
    G = code.ctx.matmul(basis, code.generator)[:, keep]
    return LinearCode(code.ctx, G, name=f"{code.name}_s{len(positions)}" if code.name else '')


def random_code(ctx: GFContext, n: int, k: int, rng: np.random.Generator,
                name: str = '') -> LinearCode:
    """Uniform full-rank k x n generator."""
    while True:
        G = rng.integers(0, ctx.q, size=(k, n))
        if ctx.rank(G) == k:
            return LinearCode(ctx, G, name=name)


def hamming_distances(words: np.ndarray, book: np.ndarray) -> np.ndarray:
    """Pairwise symbol Hamming distances, W x M."""
    return np.count_nonzero(words[:, None, :] != book[None, :, :], axis=2)


def binary_distances(words: np.ndarray, book: np.ndarray) -> np.ndarray:
    """Pairwise Hamming distances between 0/1 rows, W x M."""
    words = words.astype(np.int64)
    book = book.astype(np.int64)
    return words.sum(axis=1)[:, None] + book.sum(axis=1)[None, :] - 2 * (words @ book.T)
