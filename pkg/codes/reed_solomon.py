# codes/reed_solomon.py
"""
Reed-Solomon outer codes and generalized minimum distance decoding.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from codes.linear import LinearCode
from errors import CodeConstructionError
from fields import GFContext

logger = logging.getLogger(__name__)


class ReedSolomonCode(LinearCode):
    """
    Evaluation code on the points x_i = alpha^i, i < n <= q - 1.

    Row j of the generator evaluates x^j, so message (1, 0, ..., 0) maps
    to the all-ones word. The dual is the generalized RS code with column
    multipliers v_i = 1 / prod_{l != i} (x_i - x_l); the decoder works with
    syndromes S_j = sum_i v_i x_i^j y_i, j < n - k.
    """

    def __init__(self, ctx: GFContext, n: int, k: int, name: str = ''):
        if not 1 <= k <= n <= ctx.q - 1:
            raise CodeConstructionError(f"[RS] need 1 <= k <= n <= {ctx.q - 1}, got n={n} k={k}")
        points = np.array([ctx.exp(i) for i in range(n)], dtype=np.int64)
        G = np.array([[ctx.pow(int(x), j) for x in points] for j in range(k)], dtype=np.int64)
        super().__init__(ctx, G, name=name or f"RS[{n},{k}]", distance=n - k + 1)
        self.points = points

        multipliers = []
        for i, xi in enumerate(points):
            prod = 1
            for l, xl in enumerate(points):
                if l != i:
                    prod = ctx.mul(prod, ctx.add(int(xi), int(xl)))
            multipliers.append(ctx.inv(prod))
        self.multipliers = np.array(multipliers, dtype=np.int64)

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    # -------------------------------------------------------------------------
    # Polynomial helpers (ascending coefficient lists)
    # -------------------------------------------------------------------------

    def _poly_eval(self, poly: List[int], x: int) -> int:
        acc = 0
        for c in reversed(poly):
            acc = self.ctx.mul(acc, x) ^ c
        return acc

    def _poly_mul(self, a: List[int], b: List[int]) -> List[int]:
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] ^= self.ctx.mul(ai, bj)
        return out

    def _poly_add_scaled(self, a: List[int], b: List[int], scale: int) -> List[int]:
        out = list(a) + [0] * max(0, len(b) - len(a))
        for i, bi in enumerate(b):
            out[i] ^= self.ctx.mul(scale, bi)
        return out

    @staticmethod
    def _trim(poly: List[int]) -> List[int]:
        while len(poly) > 1 and poly[-1] == 0:
            poly = poly[:-1]
        return poly

    def syndromes(self, word) -> List[int]:
        ctx = self.ctx
        out = []
        for j in range(self.redundancy):
            acc = 0
            for i in range(self.n):
                if word[i]:
                    term = ctx.mul(int(self.multipliers[i]), ctx.pow(int(self.points[i]), j))
                    acc ^= ctx.mul(term, int(word[i]))
            out.append(acc)
        return out

    # -------------------------------------------------------------------------
    # Errors and erasures
    # -------------------------------------------------------------------------

    def decode_erasures(self, received, erasures: Sequence[int]) -> Optional[np.ndarray]:
        """Berlekamp-Massey with an erasure-locator start, then Forney."""
        ctx = self.ctx
        received = self._check_word(received, self.n, 'received word')
        erased = sorted(set(int(e) for e in erasures))
        s = len(erased)
        r = self.redundancy
        if s > r:
            return None

        y = received.copy()
        y[erased] = 0
        S = self.syndromes(y)
        if not any(S):
            return self._accept(y, received, erased)

        gamma = [1]
        for i in erased:
            gamma = self._poly_mul(gamma, [1, int(self.points[i])])

        locator = list(gamma)
        previous = list(gamma)
        L = s
        for step in range(s, r):
            delta = 0
            for j in range(min(step, len(locator) - 1) + 1):
                delta ^= ctx.mul(locator[j], S[step - j])
            shifted = [0] + previous
            if delta == 0:
                previous = shifted
                continue
            updated = self._poly_add_scaled(locator, shifted, delta)
            if 2 * L <= step + s:
                previous = [ctx.mul(c, ctx.inv(delta)) for c in locator]
                L = step + 1 + s - L
            else:
                previous = shifted
            locator = updated

        locator = self._trim(locator)
        degree = len(locator) - 1
        if degree != L or 2 * L - s > r:
            return None

        roots = [i for i in range(self.n)
                 if self._poly_eval(locator, ctx.inv(int(self.points[i]))) == 0]
        if len(roots) != degree:
            return None

        omega = self._poly_mul(S, locator)[:r]
        derivative = [locator[j] if j % 2 == 1 else 0 for j in range(1, len(locator))] or [0]

        for i in roots:
            x = int(self.points[i])
            x_inv = ctx.inv(x)
            denominator = self._poly_eval(derivative, x_inv)
            if denominator == 0:
                return None
            magnitude = ctx.div(ctx.mul(x, self._poly_eval(omega, x_inv)), denominator)
            y[i] ^= ctx.div(magnitude, int(self.multipliers[i]))

        if any(self.syndromes(y)):
            return None
        return self._accept(y, received, erased)

    def _accept(self, candidate: np.ndarray, received: np.ndarray, erased: List[int]) -> Optional[np.ndarray]:
        keep = np.ones(self.n, dtype=bool)
        keep[erased] = False
        errors = int(np.count_nonzero(candidate[keep] != received[keep]))
        if 2 * errors + len(erased) >= self.n - self.k + 1:
            return None
        return candidate


def rs_decode_ee(code: ReedSolomonCode, received, erasures: Sequence[int]) -> Optional[np.ndarray]:
    return code.decode_erasures(received, erasures)


# =============================================================================
# GMD
# =============================================================================

@dataclass
class GMDResult:
    """Best candidate over the erasure schedule, or none."""
    codeword: Optional[np.ndarray]
    erasures: int = -1
    discrepancy: float = float('inf')
    trials: List[dict] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.codeword is not None


def gmd_decode(code: LinearCode, received, reliabilities) -> GMDResult:
    """
    Generalized minimum distance decoding.

    Trials erase the j least reliable positions for j = 0, 2, 4, ... <= d-1
    (stable order, ties broken by position). Each successful trial yields a
    candidate; the one with the smallest total reliability over positions
    where it disagrees with the received word wins, earlier trials on ties.

    Args:
        code: any LinearCode; ReedSolomonCode uses its algebraic decoder
        received: n received symbols
        reliabilities: nonnegative weights, larger = more trusted

    Returns:
        GMDResult with codeword None when every trial failed
    """
    received = np.asarray(received, dtype=np.int64)
    weights = np.asarray(reliabilities, dtype=float)
    if weights.shape != (code.n,):
        raise ValueError(f"[GMD] expected {code.n} reliabilities, got {weights.shape}")
    if np.any(weights < 0):
        raise ValueError("[GMD] reliabilities must be nonnegative")

    order = np.argsort(weights, kind='stable')
    d = code.min_distance()
    result = GMDResult(codeword=None)
    for s in range(0, d, 2):
        candidate = code.decode_erasures(received, order[:s])
        if candidate is None:
            result.trials.append({'erasures': s, 'success': False})
            continue
        discrepancy = float(weights[candidate != received].sum())
        result.trials.append({'erasures': s, 'success': True, 'discrepancy': discrepancy})
        if discrepancy < result.discrepancy:
            result.codeword = candidate
            result.erasures = s
            result.discrepancy = discrepancy
    if not result.success:
        logger.debug(f"GMD failed on {code!r}: all {len(result.trials)} trials failed")
    return result


def gmd_criterion(code: LinearCode, received, reliabilities, candidate) -> bool:
    """
    Classical sufficient condition for GMD to return `candidate`.

    With reliabilities scaled into [0, 1] by their maximum, the candidate
    qualifies when sum_j alpha_j * (+1 agree / -1 disagree) > n - d.
    """
    weights = np.asarray(reliabilities, dtype=float)
    top = weights.max()
    alpha = weights / top if top > 0 else weights
    agree = np.asarray(candidate) == np.asarray(received)
    correlation = float(np.sum(np.where(agree, alpha, -alpha)))
    return correlation > code.n - code.min_distance()
