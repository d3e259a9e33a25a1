# graphs.py
"""
Edge-ordered biregular bipartite graphs and the multilevel graph.

Edges carry a fixed global order. In a BipartiteGraph the edge of left
vertex v to its j-th neighbour has index v * degree + j. In a
MultilevelGraph the levels are concatenated, so the global index of
(level i, v, j) is offset_i + v * degree_i + j.
"""

import logging
import math
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from constants import (
    GRAPH_RETRIES, LAMBDA_FACTOR, MATCHING_RETRIES, POWER_ITERATION_MAX, POWER_ITERATION_TOL,
)
from errors import ConvergenceError, GraphConstructionError

logger = logging.getLogger(__name__)


class BipartiteGraph:
    """Δ-biregular bipartite graph on n + n vertices, edges ordered left-major."""

    def __init__(self, n: int, degree: int, edges, seed: Optional[int] = None):
        edges = np.asarray(edges, dtype=np.int64)
        if edges.shape != (n * degree, 2):
            raise GraphConstructionError(f"[graph] expected {n * degree} edges, got shape {edges.shape}")
        if np.any(edges < 0) or np.any(edges >= n):
            raise GraphConstructionError("[graph] vertex index out of range")
        if np.any(edges[:, 0] != np.repeat(np.arange(n), degree)):
            raise GraphConstructionError("[graph] edges must be ordered by left vertex")
        right_degrees = np.bincount(edges[:, 1], minlength=n)
        if np.any(right_degrees != degree):
            raise GraphConstructionError(f"[graph] right degrees {sorted(set(right_degrees.tolist()))} != {degree}")

        edges.setflags(write=False)
        self.n = n
        self.degree = degree
        self.edges = edges
        self.seed = seed
        self.left_index = np.arange(n * degree, dtype=np.int64).reshape(n, degree)
        self.right_index = np.argsort(edges[:, 1], kind='stable').reshape(n, degree)

    def __repr__(self):
        return f"<BipartiteGraph n={self.n} degree={self.degree}>"

    @property
    def n_edges(self) -> int:
        return self.n * self.degree

    def left_edges(self, v: int) -> np.ndarray:
        return self.left_index[v]

    def right_edges(self, w: int) -> np.ndarray:
        return self.right_index[w]

    def biadjacency(self) -> np.ndarray:
        """n x n matrix of edge multiplicities, rows = left vertices."""
        M = np.zeros((self.n, self.n), dtype=np.int64)
        np.add.at(M, (self.edges[:, 0], self.edges[:, 1]), 1)
        return M

    def to_networkx(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from((('L', v) for v in range(self.n)), bipartite=0)
        G.add_nodes_from((('R', w) for w in range(self.n)), bipartite=1)
        G.add_edges_from((('L', int(v)), ('R', int(w))) for v, w in self.edges)
        return G

    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx())

    @cached_property
    def lam(self) -> float:
        """Second singular value of the biadjacency matrix; the degree when disconnected."""
        if not self.is_connected():
            return float(self.degree)
        return second_eigenvalue(self)


def second_eigenvalue(g: BipartiteGraph, tol: float = POWER_ITERATION_TOL,
                      max_iter: int = POWER_ITERATION_MAX) -> float:
    """
    Second-largest singular value by power iteration on M^T M.

    The top singular pair of a biregular graph is the all-ones direction,
    so iterates are kept orthogonal to it.

    Raises:
        GraphConstructionError: the graph is disconnected
        ConvergenceError: no convergence within max_iter
    """
    if not g.is_connected():
        raise GraphConstructionError(f"[lambda] {g!r} is disconnected")
    M = g.biadjacency().astype(float)
    if g.n == 1:
        return 0.0

    x = np.random.default_rng(0).standard_normal(g.n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    estimate = np.linalg.norm(M @ x)
    for iteration in range(1, max_iter + 1):
        z = M.T @ (M @ x)
        z -= z.mean()
        norm = np.linalg.norm(z)
        if norm < 1e-300:
            return 0.0
        x = z / norm
        updated = float(np.linalg.norm(M @ x))
        if abs(updated - estimate) < tol:
            return updated
        estimate = updated
    raise ConvergenceError(f"[lambda] power iteration did not converge on {g!r}", iterations=max_iter)


# =============================================================================
# Builders
# =============================================================================

def _complement_matching(taken: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Perfect matching avoiding existing edges, by Hopcroft-Karp on the complement."""
    n = taken.shape[0]
    left = [('L', int(v)) for v in rng.permutation(n)]
    G = nx.Graph()
    G.add_nodes_from(left, bipartite=0)
    G.add_nodes_from((('R', int(w)) for w in rng.permutation(n)), bipartite=1)
    for node in left:
        v = node[1]
        for w in rng.permutation(n):
            if not taken[v, w]:
                G.add_edge(node, ('R', int(w)))
    matching = nx.bipartite.hopcroft_karp_matching(G, top_nodes=left)
    perm = np.full(n, -1, dtype=np.int64)
    for node in left:
        if node in matching:
            perm[node[1]] = matching[node][1]
    if np.any(perm < 0):
        raise GraphConstructionError("[graph] complement has no perfect matching")
    return perm


def random_biregular(n: int, degree: int, seed: Optional[int] = None,
                     rng: Optional[np.random.Generator] = None) -> BipartiteGraph:
    """Union of `degree` random perfect matchings without parallel edges."""
    if degree < 1 or n < degree:
        raise GraphConstructionError(f"[graph] need n >= degree >= 1, got n={n} degree={degree}")
    rng = rng if rng is not None else np.random.default_rng(seed)
    taken = np.zeros((n, n), dtype=bool)
    rows = np.arange(n)
    matchings = []
    for _ in range(degree):
        for _ in range(MATCHING_RETRIES):
            perm = rng.permutation(n)
            if not taken[rows, perm].any():
                break
        else:
            perm = _complement_matching(taken, rng)
        taken[rows, perm] = True
        matchings.append(perm)
    edges = np.stack([np.repeat(rows, degree), np.stack(matchings, axis=1).ravel()], axis=1)
    return BipartiteGraph(n, degree, edges, seed=seed)


def complete_bipartite(n: int) -> BipartiteGraph:
    edges = np.stack([np.repeat(np.arange(n), n), np.tile(np.arange(n), n)], axis=1)
    return BipartiteGraph(n, n, edges)


def cycle_graph(n: int) -> BipartiteGraph:
    """The 2n-cycle: left v joined to right v and right v+1 mod n."""
    rows = np.arange(n)
    right = np.stack([rows, (rows + 1) % n], axis=1).ravel()
    return BipartiteGraph(n, 2, np.stack([np.repeat(rows, 2), right], axis=1))


def sample_expander(n: int, degree: int, rng: np.random.Generator,
                    lambda_factor: float = LAMBDA_FACTOR, retries: int = GRAPH_RETRIES) -> BipartiteGraph:
    """Resample random_biregular until lambda <= lambda_factor * sqrt(degree)."""
    limit = lambda_factor * math.sqrt(degree)
    for attempt in range(1, retries + 1):
        graph = random_biregular(n, degree, rng=rng)
        if graph.lam <= limit:
            logger.debug(f"Accepted n={n} degree={degree} lambda={graph.lam:.4f} after {attempt} draws")
            return graph
        logger.warning(f"Rejected graph n={n} degree={degree}: lambda={graph.lam:.4f} > {limit:.4f}")
    raise GraphConstructionError(
        f"[graph] no graph with lambda <= {limit:.4f} in {retries} draws (n={n}, degree={degree})"
    )


class MultilevelGraph:
    """
    Left part V_0 joined to parts V_1..V_{m+1} by level graphs G_1..G_{m+1}.

    Level m+1 has no right code; its right vertices are plain sockets for
    the remaining coordinates of the left code.
    """

    def __init__(self, n: int, levels: Sequence[BipartiteGraph], seed: Optional[int] = None):
        levels = list(levels)
        if len(levels) < 2:
            raise GraphConstructionError("[multilevel graph] need at least one level plus the socket level")
        if any(g.n != n for g in levels):
            raise GraphConstructionError("[multilevel graph] all levels must have n left vertices")

        self.n = n
        self.levels = levels
        self.m = len(levels) - 1
        self.degrees = [g.degree for g in levels]
        self.degree = sum(self.degrees)
        self.seed = seed
        self.offsets = [0] + list(np.cumsum([n * d for d in self.degrees]))
        self.local_offsets = [0] + list(np.cumsum(self.degrees))

        self.local_index = np.concatenate(
            [self.offsets[i] + g.left_index for i, g in enumerate(levels)], axis=1
        )

    def __repr__(self):
        return f"<MultilevelGraph n={self.n} m={self.m} degrees={self.degrees}>"

    @property
    def n_edges(self) -> int:
        return self.n * self.degree

    def level(self, i: int) -> BipartiteGraph:
        """G_i, 1-based; level m+1 is the socket level."""
        return self.levels[i - 1]

    def level_slice(self, i: int) -> slice:
        """Global edge indices of E_i."""
        return slice(int(self.offsets[i - 1]), int(self.offsets[i]))

    def local_slice(self, i: int) -> slice:
        """Positions of E_i(v) inside the local word x_v."""
        return slice(int(self.local_offsets[i - 1]), int(self.local_offsets[i]))

    def edge_index(self, level: int, v: int, j: int) -> int:
        return int(self.offsets[level - 1]) + v * self.degrees[level - 1] + j

    def locate(self, index: int) -> Tuple[int, int, int]:
        """(level, left vertex, local index) of a global edge index."""
        if not 0 <= index < self.n_edges:
            raise IndexError(f"[multilevel graph] edge {index} out of range")
        level = int(np.searchsorted(self.offsets, index, side='right'))
        inner = index - int(self.offsets[level - 1])
        v, j = divmod(inner, self.degrees[level - 1])
        return level, v, j

    def local_words(self, word: np.ndarray) -> np.ndarray:
        """x_v for every left vertex, n x Δ."""
        return np.asarray(word)[self.local_index]

    def lambdas(self) -> List[float]:
        return [g.lam for g in self.levels]


def build_multilevel_graph(n: int, degrees: Sequence[int], lambda_factor: float = LAMBDA_FACTOR,
                           seed: Optional[int] = None, retries: int = GRAPH_RETRIES) -> MultilevelGraph:
    """
    Independent random level graphs; levels 1..m must pass the lambda check.

    Raises:
        GraphConstructionError: n < max degree or the retry cap was exhausted
    """
    degrees = list(degrees)
    if len(degrees) < 2:
        raise GraphConstructionError("[multilevel graph] degrees must list levels 1..m+1")
    if n < max(degrees):
        raise GraphConstructionError(f"[multilevel graph] n={n} below max degree {max(degrees)}")
    rng = np.random.default_rng(seed)
    levels = [sample_expander(n, d, rng, lambda_factor, retries) for d in degrees[:-1]]
    levels.append(random_biregular(n, degrees[-1], rng=rng))
    graph = MultilevelGraph(n, levels, seed=seed)
    logger.info(f"Built {graph!r} with lambdas {[round(l, 4) for l in graph.lambdas()[:-1]]}")
    return graph
