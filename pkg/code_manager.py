# code_manager.py
"""
Facade over constructions and experiment services.
Builds codes from presets or bundles, verifies them and dispatches
simulations, sweeps and bound grids to the services.
"""

import logging
import os
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

import formats
from codes.linear import LinearCode, parity_code, repetition_code
from codes.reed_solomon import ReedSolomonCode
from codes.tower import NestedTower, build_tower
from config import SimulationConfig, get_config
from constructions.expander import ModifiedBGCode, default_rounds
from constructions.multilevel import MLExpanderCode
from constructions.serial import SerialCode, component_concatenation
from errors import ConfigError, FormatError
from fields import get_context
from graphs import build_multilevel_graph
from services import (
    BoundsService, ChannelService, SimulationService, SweepService, adapter_for,
)

logger = logging.getLogger(__name__)

PRESETS = {
    'serial': ('tiny', 'small'),
    'single': ('tiny',),
    'multilevel': ('tiny',),
}

# checks enumerating more codewords than this many are skipped
DIRECT_SUM_MAX_BITS = 16


class CodeManager:
    """
    Builds and runs code constructions.

    This is a facade that delegates to specialized services:
    - SimulationService: Monte Carlo BSC experiments
    - SweepService: success rate against error weight
    - BoundsService: bound and exponent grids
    """

    def __init__(self, config=None):
        self.config = config or get_config()
        self._bounds_service = BoundsService()

    # -------------------------------------------------------------------------
    # Presets
    # -------------------------------------------------------------------------

    def build_preset(self, kind: str, preset: str = 'tiny', seed: Optional[int] = None):
        """
        Build a named construction.

        Args:
            kind: 'serial', 'single' or 'multilevel'
            preset: preset name listed in PRESETS
            seed: graph and tower seed, defaults to the configured seed

        Returns:
            SerialCode, ModifiedBGCode or MLExpanderCode
        """
        if preset not in PRESETS.get(kind, ()):
            raise ValueError(f"[preset] unknown preset {kind}:{preset}; available {PRESETS}")
        seed = self.config.DEFAULT_SEED if seed is None else seed
        logger.info(f"Building preset {kind}:{preset} with seed {seed}")
        builder = getattr(self, f"_preset_{kind}_{preset}")
        return builder(seed)

    def _preset_serial_tiny(self, seed: int) -> SerialCode:
        binary = get_context(1)
        tower = NestedTower(binary, [[[1, 0, 1]], [[0, 1, 1]]])
        return SerialCode(tower, [repetition_code(binary, 3), repetition_code(binary, 3)], name='serial-tiny')

    def _preset_serial_small(self, seed: int) -> SerialCode:
        binary = get_context(1)
        gf8 = get_context(3)
        tower = build_tower(binary, 10, [3, 3], [3, 4], trials=self.config.TOWER_TRIALS, seed=seed)
        outer = [ReedSolomonCode(gf8, 7, 3), ReedSolomonCode(gf8, 7, 5)]
        return SerialCode(tower, outer, name='serial-small')

    def _preset_single_tiny(self, seed: int) -> ModifiedBGCode:
        binary = get_context(1)
        graph = build_multilevel_graph(8, [3, 3], self.config.LAMBDA_FACTOR, seed, self.config.GRAPH_RETRIES)
        left = LinearCode(binary, [[1, 0, 0, 0, 1, 1], [0, 1, 0, 1, 0, 1], [0, 0, 1, 1, 1, 0]], name='A')
        return ModifiedBGCode(graph, left, parity_code(binary, 3), parity_code(binary, 3), name='single-tiny')

    def _preset_multilevel_tiny(self, seed: int) -> MLExpanderCode:
        binary = get_context(1)
        graph = build_multilevel_graph(8, [4, 4, 2], self.config.LAMBDA_FACTOR, seed, self.config.GRAPH_RETRIES)
        tower = build_tower(binary, 10, [4, 4], [2, 4], trials=self.config.TOWER_TRIALS, seed=seed)
        right = LinearCode(binary, [[1, 1, 0, 0], [0, 0, 1, 1]], name='B')
        aux = parity_code(binary, 4)
        return MLExpanderCode(graph, tower, [aux, aux], [right, right], name='multilevel-tiny')

    # -------------------------------------------------------------------------
    # Bundles
    # -------------------------------------------------------------------------

    def to_bundle(self, code, seed: Optional[int] = None) -> formats.Bundle:
        if isinstance(code, SerialCode):
            codes = {f"block.{i}": LinearCode(code.tower.ctx, block, name=f"block.{i}")
                     for i, block in enumerate(code.tower.blocks, start=1)}
            codes.update({f"outer.{i}": outer for i, outer in enumerate(code.outer, start=1)})
            return formats.Bundle(kind='serial', seed=seed, codes=codes)
        if isinstance(code, ModifiedBGCode):
            return formats.Bundle(kind='single', seed=seed, graph=code.graph,
                                  codes={'left': code.left, 'right': code.right, 'aux': code.aux})
        if isinstance(code, MLExpanderCode):
            codes = {f"block.{i}": LinearCode(code.ctx, block, name=f"block.{i}")
                     for i, block in enumerate(code.tower.blocks, start=1)}
            for i in range(1, code.m + 1):
                codes[f"aux.{i}"] = code.aux[i - 1]
                codes[f"right.{i}"] = code.right[i - 1]
            return formats.Bundle(kind='multilevel', seed=seed, graph=code.graph, codes=codes)
        raise TypeError(f"[bundle] unsupported code {type(code).__name__}")

    @staticmethod
    def _require(bundle: formats.Bundle, roles: Sequence[str]):
        missing = [role for role in roles if role not in bundle.codes]
        if missing:
            raise FormatError(f"{bundle.kind} bundle lacks code sections {missing}")
        if bundle.kind != 'serial' and bundle.graph is None:
            raise FormatError(f"{bundle.kind} bundle lacks a [graph] section")

    def from_bundle(self, bundle: formats.Bundle):
        if bundle.kind == 'serial':
            blocks = bundle.indexed('block')
            outer = bundle.indexed('outer')
            self._require(bundle, ['block.1', 'outer.1'])
            tower = NestedTower(blocks[0].ctx, [b.generator for b in blocks])
            return SerialCode(tower, outer)
        if bundle.kind == 'single':
            self._require(bundle, ['left', 'right', 'aux'])
            return ModifiedBGCode(bundle.graph, bundle.codes['left'], bundle.codes['right'], bundle.codes['aux'])
        self._require(bundle, ['block.1', 'aux.1', 'right.1'])
        blocks = bundle.indexed('block')
        tower = NestedTower(blocks[0].ctx, [b.generator for b in blocks])
        return MLExpanderCode(bundle.graph, tower, bundle.indexed('aux'), bundle.indexed('right'))

    def save(self, code, path: str, seed: Optional[int] = None):
        formats.save(self.to_bundle(code, seed), path)

    def load(self, path: str):
        return self.from_bundle(formats.load(path))

    def resolve_code(self, reference: str, seed: Optional[int] = None):
        """A bundle path, or 'kind' / 'kind:preset' for a preset."""
        if os.path.exists(reference):
            return self.load(reference)
        kind, _, preset = reference.partition(':')
        if kind not in PRESETS:
            raise ConfigError(f"[code] {reference!r} is neither a bundle file nor a preset {sorted(PRESETS)}")
        return self.build_preset(kind, preset or 'tiny', seed)

    # -------------------------------------------------------------------------
    # Parameters and verification
    # -------------------------------------------------------------------------

    def describe(self, code) -> Dict:
        return code.params()

    def _check(self, checks: List[Dict], name: str, passed: Optional[bool], detail: str = ''):
        status = 'skipped' if passed is None else ('passed' if passed else 'failed')
        checks.append({'name': name, 'status': status, 'detail': detail})
        if passed is False:
            logger.warning(f"Check {name} failed: {detail}")

    def verify(self, code, seed: Optional[int] = None) -> Dict:
        """
        Brute-force and structural checks of a construction.

        Returns:
            Dict with success flag, the list of checks and the parameter report
        """
        rng = np.random.default_rng(self.config.DEFAULT_SEED if seed is None else seed)
        budget = self.config.ENUMERATION_BUDGET
        checks: List[Dict] = []

        if isinstance(code, SerialCode):
            params = code.params()
            self._verify_tower(code.tower, checks, budget)
            self._verify_direct_sum(code, checks)
            u = rng.integers(0, 2, size=code.K)
            result = code.decode(code.encode(u))
            self._check(checks, 'noiseless round trip',
                        bool(np.array_equal(result.message, u) and not result.residual.any()))
        elif isinstance(code, ModifiedBGCode):
            params = code.params()
            message = rng.integers(0, code.ctx.q, size=code.dimension)
            self._check(checks, 'membership of an encoded message', code.member(code.encode(message)))
            result = code.modified_decode(code.encode_bits(message))
            self._check(checks, 'noiseless round trip',
                        bool(result.converged and np.array_equal(result.message, message)))
        elif isinstance(code, MLExpanderCode):
            params = code.params(rank_check=True)
            self._verify_tower(code.tower, checks, budget)
            message = rng.integers(0, code.ctx.q, size=code.dimension)
            self._check(checks, 'membership of an encoded message', code.member(code.encode(message)))
            self._check(checks, 'monolithic rank matches staged dimension',
                        params['monolithic_dimension'] == params['K'],
                        f"{params['monolithic_dimension']} vs {params['K']}")
            result = code.decode(code.encode_bits(message))
            self._check(checks, 'noiseless round trip',
                        bool(result.success and np.array_equal(result.message, message) and not result.residual.any()))
        else:
            raise TypeError(f"[verify] unsupported code {type(code).__name__}")

        true_distance = params.get('true_distance')
        bound = params.get('design_distance', params.get('distance_bound'))
        if true_distance is None:
            self._check(checks, 'distance bound', None, 'code too large to enumerate')
        else:
            self._check(checks, 'distance bound', true_distance >= bound, f"d={true_distance}, bound={bound:g}")

        success = all(c['status'] != 'failed' for c in checks)
        logger.info(f"Verification {'passed' if success else 'FAILED'}: "
                    f"{sum(c['status'] == 'passed' for c in checks)}/{len(checks)} checks passed")
        return {'success': success, 'checks': checks, 'params': params}

    def _verify_tower(self, tower: NestedTower, checks: List[Dict], budget: int):
        distances = tower.distances()
        self._check(checks, 'tower distances nondecreasing by level',
                    all(a <= b for a, b in zip(distances, distances[1:])), f"distances {distances}")
        outer = tower.code(1)
        if outer.size > min(budget, 2 ** DIRECT_SUM_MAX_BITS):
            self._check(checks, 'direct-sum split round trip', None, 'tower too large')
            return
        book = outer.codewords(budget)
        ok = all(np.array_equal(tower.compose(tower.split(c)), c) for c in book)
        self._check(checks, 'direct-sum split round trip', ok, f"{len(book)} codewords")

    def _verify_direct_sum(self, code: SerialCode, checks: List[Dict]):
        if code.K > DIRECT_SUM_MAX_BITS:
            self._check(checks, 'direct sum of component concatenations', None, f"K={code.K} too large")
            return
        sums = np.zeros((1, code.N), dtype=np.int64)
        for level in range(1, code.m + 1):
            component = component_concatenation(code, level)
            sums = np.bitwise_xor(sums[:, None, :], component[None, :, :]).reshape(-1, code.N)
        expected = np.unique(sums, axis=0)
        actual = np.unique(code.code.codewords(), axis=0)
        self._check(checks, 'direct sum of component concatenations',
                    expected.shape == actual.shape and bool(np.array_equal(expected, actual)),
                    f"{actual.shape[0]} codewords")

    # -------------------------------------------------------------------------
    # Experiments - delegated to services
    # -------------------------------------------------------------------------

    def _default_rounds(self, code) -> Optional[int]:
        graph = getattr(code, 'graph', None)
        return None if graph is None else default_rounds(graph.n, self.config.ROUND_FACTOR)

    def _output_path(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.config.OUTPUT_DIR, path)

    def simulate(self, sim: SimulationConfig, code=None) -> Dict:
        """Run a simulation config and write its CSV and JSON reports."""
        code = code if code is not None else self.resolve_code(sim.code)
        service = SimulationService(ChannelService(sim.seed))
        result = service.run_trials(adapter_for(code), sim.p_grid, sim.trials, sim.mode,
                                    sim.max_rounds or self._default_rounds(code))
        paths = service.write_reports(result, self._output_path(sim.out))
        return {'success': True, 'paths': paths, 'rows': result.rows}

    def sweep(self, code, weights: Sequence[int], samples: int, seed: Optional[int] = None) -> pd.DataFrame:
        seed = self.config.DEFAULT_SEED if seed is None else seed
        return SweepService(ChannelService(seed)).radius_sweep(adapter_for(code), weights, samples)

    def bounds_grid(self, quantities: Sequence[str], rates: Sequence[float],
                    p_values: Sequence[float] = (), m_values: Sequence[int] = ()) -> pd.DataFrame:
        return self._bounds_service.grid(quantities, rates, p_values, m_values)
