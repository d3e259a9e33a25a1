# fields.py
"""
GF(2^t) arithmetic and the binary representation of symbols.

Scalar arithmetic runs on log/antilog tables built at construction. Matrix
work (rank, row reduction, null spaces, inverses) is delegated to a galois
FieldArray class built over the same primitive polynomial, so integer
symbols mean the same field element on both paths.

Bit order is little-endian: bit 0 of a symbol is the constant coefficient.
"""

import logging
from functools import lru_cache
from typing import List, Optional, Tuple

import galois
import numpy as np

from constants import MAX_FIELD_DEGREE, PRIMITIVE_POLYNOMIALS
from errors import FieldError

logger = logging.getLogger(__name__)


class GFContext:
    """Immutable arithmetic context for GF(2^t)."""

    def __init__(self, t: int, primitive_poly: Optional[int] = None):
        if not 1 <= t <= MAX_FIELD_DEGREE:
            raise FieldError(f"[GF] extension degree {t} outside 1..{MAX_FIELD_DEGREE}")
        poly = PRIMITIVE_POLYNOMIALS[t] if primitive_poly is None else int(primitive_poly)
        if poly >> t != 1:
            raise FieldError(f"[GF] polynomial {poly:#x} does not have degree {t}")

        self.t = t
        self.q = 1 << t
        self.primitive_poly = poly
        self.antilog, self.log = self._build_tables(t, poly)

        if t == 1:
            self.field = galois.GF(2)
        else:
            self.field = galois.GF(self.q, irreducible_poly=poly)

    @staticmethod
    def _build_tables(t: int, poly: int) -> Tuple[np.ndarray, np.ndarray]:
        """Powers of x modulo poly; fails unless x has order exactly 2^t - 1."""
        q = 1 << t
        order = q - 1
        antilog = np.zeros(order, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)

        value = 1
        for i in range(order):
            if log[value] != -1:
                raise FieldError(f"[GF] {poly:#x} is not primitive: x has order {i}")
            antilog[i] = value
            log[value] = i
            value <<= 1
            if value & q:
                value ^= poly
        if value != 1:
            raise FieldError(f"[GF] {poly:#x} is not primitive over GF(2)")
        return antilog, log

    def __repr__(self):
        return f"<GFContext GF(2^{self.t}) poly={self.primitive_poly:#x}>"

    # -------------------------------------------------------------------------
    # Scalar arithmetic
    # -------------------------------------------------------------------------

    def _check(self, a: int):
        if not 0 <= a < self.q:
            raise ValueError(f"[GF] symbol {a} outside GF({self.q})")

    def add(self, a: int, b: int) -> int:
        return int(a) ^ int(b)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.antilog[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("[GF] inverse of zero")
        return int(self.antilog[(-self.log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def exp(self, i: int) -> int:
        """alpha^i for the primitive element alpha = x."""
        return int(self.antilog[i % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return int(self.antilog[(self.log[a] * e) % (self.q - 1)])

    # -------------------------------------------------------------------------
    # Binary representation
    # -------------------------------------------------------------------------

    def to_bits(self, a: int) -> np.ndarray:
        self._check(int(a))
        return ((int(a) >> np.arange(self.t)) & 1).astype(np.uint8)

    def from_bits(self, bits) -> int:
        bits = np.asarray(bits, dtype=np.int64).ravel()
        if bits.size != self.t:
            raise ValueError(f"[GF] expected {self.t} bits, got {bits.size}")
        if np.any((bits != 0) & (bits != 1)):
            raise ValueError("[GF] bit vector must be binary")
        return int(np.sum(bits << np.arange(self.t)))

    def symbols_to_bits(self, symbols) -> np.ndarray:
        """Expand the last axis: (..., L) symbols -> (..., L*t) bits."""
        symbols = np.asarray(symbols, dtype=np.int64)
        bits = (symbols[..., None] >> np.arange(self.t)) & 1
        return bits.reshape(symbols.shape[:-1] + (symbols.shape[-1] * self.t,)).astype(np.uint8)

    def bits_to_symbols(self, bits) -> np.ndarray:
        """Inverse of symbols_to_bits."""
        bits = np.asarray(bits, dtype=np.int64)
        if bits.shape[-1] % self.t:
            raise ValueError(f"[GF] bit length {bits.shape[-1]} not a multiple of t={self.t}")
        grouped = bits.reshape(bits.shape[:-1] + (bits.shape[-1] // self.t, self.t))
        return np.sum(grouped << np.arange(self.t), axis=-1)

    # -------------------------------------------------------------------------
    # Linear algebra (galois)
    # -------------------------------------------------------------------------

    def array(self, values) -> galois.FieldArray:
        return self.field(np.asarray(values, dtype=np.int64) % self.q)

    @staticmethod
    def plain(values) -> np.ndarray:
        return np.asarray(values.view(np.ndarray), dtype=np.int64)

    def matmul(self, a, b) -> np.ndarray:
        return self.plain(self.array(a) @ self.array(b))

    def rank(self, matrix) -> int:
        matrix = np.asarray(matrix)
        if matrix.size == 0:
            return 0
        return int(np.linalg.matrix_rank(self.array(matrix)))

    def row_reduce(self, matrix) -> Tuple[np.ndarray, List[int]]:
        """Reduced row echelon form and its pivot columns."""
        rref = self.plain(self.array(matrix).row_reduce())
        pivots = [int(np.argmax(row != 0)) for row in rref if np.any(row)]
        return rref, pivots

    def null_space(self, matrix) -> np.ndarray:
        """Rows spanning {x : matrix @ x = 0}."""
        matrix = np.asarray(matrix)
        if matrix.shape[0] == 0:
            return np.eye(matrix.shape[1], dtype=np.int64)
        return self.plain(self.array(matrix).null_space())

    def inverse(self, matrix) -> np.ndarray:
        return self.plain(np.linalg.inv(self.array(matrix)))

    def solve_left(self, matrix, target) -> Optional[np.ndarray]:
        """Solve a @ matrix = target for a full-row-rank matrix; None if inconsistent."""
        matrix = np.asarray(matrix, dtype=np.int64)
        target = np.asarray(target, dtype=np.int64).ravel()
        k = matrix.shape[0]
        augmented = np.concatenate([matrix.T, target[:, None]], axis=1)
        rref, pivots = self.row_reduce(augmented)
        if k in pivots:
            return None
        return rref[:k, k].copy()


def get_context(t: int, primitive_poly: Optional[int] = None) -> GFContext:
    """Shared context per (t, polynomial); None means the default polynomial."""
    if primitive_poly is None:
        primitive_poly = PRIMITIVE_POLYNOMIALS.get(t)
    return _context(t, None if primitive_poly is None else int(primitive_poly))


@lru_cache(maxsize=None)
def _context(t: int, primitive_poly: Optional[int]) -> GFContext:
    return GFContext(t, primitive_poly)


def gf_add(ctx: GFContext, a: int, b: int) -> int:
    return ctx.add(a, b)


def gf_mul(ctx: GFContext, a: int, b: int) -> int:
    return ctx.mul(a, b)


def to_bits(ctx: GFContext, a: int) -> np.ndarray:
    return ctx.to_bits(a)


def from_bits(ctx: GFContext, bits) -> int:
    return ctx.from_bits(bits)
