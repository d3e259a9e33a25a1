# codes/tower.py
"""
Nested code towers A_1 > A_2 > ... > A_m built from stacked generator blocks.
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from codes.linear import LinearCode
from constants import TOWER_TRIALS
from errors import CodeConstructionError, TowerSearchError
from fields import GFContext

logger = logging.getLogger(__name__)


class NestedTower:
    """
    Blocks G_1..G_m of a common length.

    A_i is generated by stacking G_i..G_m, so a message of A_i is the
    concatenation (a^i, ..., a^m) with a^j of length rows(G_j). A^(i) is
    generated by G_i alone.
    """

    def __init__(self, ctx: GFContext, blocks: Sequence, name: str = 'tower'):
        blocks = [np.atleast_2d(np.asarray(b, dtype=np.int64)) for b in blocks]
        if not blocks:
            raise CodeConstructionError(f"[{name}] a tower needs at least one block")
        widths = {b.shape[1] for b in blocks}
        if len(widths) != 1:
            raise CodeConstructionError(f"[{name}] blocks have different lengths {sorted(widths)}")

        self.ctx = ctx
        self.name = name
        self.blocks = blocks
        self.m = len(blocks)
        self.n = blocks[0].shape[1]
        self.level_dims = [b.shape[0] for b in blocks]
        self._codes: Dict[int, LinearCode] = {}
        self._components: Dict[int, LinearCode] = {}

        # raises unless the full stack has full rank
        self.code(1)

    def __repr__(self):
        return f"<NestedTower {self.name} n={self.n} dims={self.level_dims}>"

    def _level(self, i: int) -> int:
        if not 1 <= i <= self.m:
            raise ValueError(f"[{self.name}] level {i} outside 1..{self.m}")
        return i

    def stacked(self, i: int = 1) -> np.ndarray:
        """Generator of A_i: blocks G_i..G_m stacked top to bottom."""
        return np.concatenate(self.blocks[self._level(i) - 1:], axis=0)

    def dimension(self, i: int = 1) -> int:
        return sum(self.level_dims[self._level(i) - 1:])

    def rate(self, i: int = 1) -> float:
        """R_{0,i}; rate(m + 1) is 0 by convention."""
        if i == self.m + 1:
            return 0.0
        return self.dimension(i) / self.n

    def code(self, i: int = 1) -> LinearCode:
        if i not in self._codes:
            self._codes[i] = LinearCode(self.ctx, self.stacked(i), name=f"{self.name}.A{i}")
        return self._codes[i]

    def component(self, i: int) -> LinearCode:
        """A^(i), generated by G_i alone."""
        if i not in self._components:
            self._components[i] = LinearCode(self.ctx, self.blocks[self._level(i) - 1],
                                             name=f"{self.name}.C{i}")
        return self._components[i]

    def distances(self) -> List[int]:
        return [self.code(i).min_distance() for i in range(1, self.m + 1)]

    def compose(self, messages: Sequence, level: int = 1) -> np.ndarray:
        """Codeword sum_j a^j G_j of A_level from per-level messages a^level..a^m."""
        self._level(level)
        parts = [np.asarray(a, dtype=np.int64) for a in messages]
        if [p.shape[-1] for p in parts] != self.level_dims[level - 1:]:
            raise ValueError(f"[{self.name}] message lengths {[p.shape[-1] for p in parts]} "
                             f"do not match level dims {self.level_dims[level - 1:]}")
        return self.ctx.matmul(np.concatenate(parts, axis=-1), self.stacked(level))

    def split(self, codeword, level: int = 1) -> List[np.ndarray]:
        """Unique a^level..a^m with sum_j a^j G_j = codeword."""
        message = self.ctx.solve_left(self.stacked(level), codeword)
        if message is None:
            raise ValueError(f"[{self.name}] word is not a codeword of A_{level}")
        return self.partition(message, level)

    def partition(self, message, level: int = 1) -> List[np.ndarray]:
        """Cut a message of A_level into its per-level pieces."""
        message = np.asarray(message, dtype=np.int64)
        cuts = np.cumsum(self.level_dims[level - 1:])[:-1]
        return np.split(message, cuts, axis=-1)


def direct_sum_split(tower: NestedTower, codeword, level: int = 1) -> List[np.ndarray]:
    return tower.split(codeword, level)


def build_tower(ctx: GFContext, n0: int, degrees: Sequence[int], targets: Sequence[int],
                trials: int = TOWER_TRIALS, seed: Optional[int] = None,
                rng: Optional[np.random.Generator] = None) -> NestedTower:
    """
    Random search for a tower whose codes A_i reach the target distances.

    The innermost block G_m is sampled first; each outer block is then
    sampled on top of the accepted inner stack. Per level the best of
    `trials` samples is kept and the search stops early once the target
    is met.

    Raises:
        TowerSearchError: a level missed its target after all trials
    """
    degrees, targets = list(degrees), list(targets)
    if len(degrees) != len(targets) or not degrees:
        raise ValueError("[build_tower] need one target distance per level")
    if sum(degrees) > n0:
        raise ValueError(f"[build_tower] total dimension {sum(degrees)} exceeds length {n0}")
    rng = rng if rng is not None else np.random.default_rng(seed)

    m = len(degrees)
    inner = np.zeros((0, n0), dtype=np.int64)
    blocks: List[np.ndarray] = [None] * m
    achieved: List[int] = [0] * m

    for level in range(m, 0, -1):
        rows = degrees[level - 1]
        target = targets[level - 1]
        best_block, best_d = None, -1
        for _ in range(trials):
            block = rng.integers(0, ctx.q, size=(rows, n0))
            stack = np.concatenate([block, inner], axis=0)
            if ctx.rank(stack) != stack.shape[0]:
                continue
            d = LinearCode(ctx, stack).min_distance()
            if d > best_d:
                best_block, best_d = block, d
            if d >= target:
                break
        achieved[level - 1] = max(best_d, 0)
        if best_d < target:
            logger.warning(f"Tower search stalled at level {level}: best distance {best_d} < {target}")
            raise TowerSearchError(
                f"[build_tower] level {level} reached distance {best_d} < target {target} after {trials} trials",
                best_distances=achieved,
            )
        blocks[level - 1] = best_block
        inner = np.concatenate([best_block, inner], axis=0)
        logger.debug(f"Tower level {level}: distance {best_d}")

    tower = NestedTower(ctx, blocks)
    logger.info(f"Built tower n={n0} dims={degrees} distances={achieved}")
    return tower
