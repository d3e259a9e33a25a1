# services/simulation_service.py
"""
Monte Carlo BSC experiments with per-stage failure accounting.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import norm

from constants import SIMULATION_MODES, WILSON_CONFIDENCE
from services.channel_service import ChannelService

logger = logging.getLogger(__name__)


def wilson_interval(failures: int, trials: int, confidence: float = WILSON_CONFIDENCE) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("[wilson] trials must be positive")
    z = float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))
    p_hat = failures / trials
    denominator = 1.0 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denominator
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z * z / (4 * trials * trials)) / denominator
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class SimulationResult:
    """One row per crossover probability plus per-trial diagnostics."""
    kind: str
    mode: str
    seed: int
    n_bits: int
    k_bits: int
    levels: int
    rows: List[Dict] = field(default_factory=list)
    first_failed: Dict[float, List[Optional[int]]] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)


class SimulationService:
    """Runs trials, tallies failures per stage and writes the reports."""

    def __init__(self, channel: ChannelService, confidence: float = WILSON_CONFIDENCE):
        self.channel = channel
        self.confidence = confidence

    def run_trial(self, adapter, index: int, p: float, strict: bool,
                  max_rounds: Optional[int] = None) -> List[bool]:
        """
        Per-stage failure flags of one trial.

        A stage fails when the decoder flags it or its level decision is
        wrong. The message and the channel draws depend only on the master
        seed and the trial index.
        """
        message = adapter.random_message(self.channel.rng(index, 'message'))
        y = self.channel.transmit(adapter.encode(message), p, self.channel.rng(index, 'channel'))
        outcome = adapter.decode(y, strict=strict, max_rounds=max_rounds)
        failed = []
        for truth, decided, flag in zip(adapter.level_truth(message), outcome.level_messages, outcome.stage_flags):
            failed.append(bool(flag) or not np.array_equal(truth, decided))
        return failed

    def run_point(self, adapter, p: float, trials: int, mode: str = 'diagnostic',
                  max_rounds: Optional[int] = None) -> Tuple[Dict, List[Optional[int]]]:
        strict = mode == 'strict'
        stage_counts = [0] * adapter.levels
        failures = 0
        first_failed: List[Optional[int]] = []

        for index in range(trials):
            failed = self.run_trial(adapter, index, p, strict, max_rounds)
            first = next((i for i, f in enumerate(failed, start=1) if f), None)
            first_failed.append(first)
            if first is None:
                continue
            failures += 1
            if strict:
                stage_counts[first - 1] += 1
            else:
                for i, f in enumerate(failed):
                    stage_counts[i] += int(f)

        p_hat = failures / trials
        low, high = wilson_interval(failures, trials, self.confidence)
        row = {
            'p': p,
            'trials': trials,
            'failures': failures,
            'p_hat': p_hat,
            'ci_low': low,
            'ci_high': high,
            'exponent': -math.log2(p_hat) / adapter.n_bits if p_hat > 0 else float('nan'),
            'union_bound': sum(stage_counts) / trials,
        }
        for i, count in enumerate(stage_counts, start=1):
            row[f'stage_{i}'] = count
        logger.info(f"p={p:g}: {failures}/{trials} failures, stages {stage_counts}")
        return row, first_failed

    def run_trials(self, adapter, p_grid: Sequence[float], trials: int, mode: str = 'diagnostic',
                   max_rounds: Optional[int] = None) -> SimulationResult:
        """
        Run the same trial set at every p of the grid.

        Args:
            adapter: code adapter from services.code_adapters
            p_grid: crossover probabilities in [0, 1/2]
            trials: trials per point
            mode: 'strict' counts only the first failed stage, 'diagnostic' counts every failed stage

        Returns:
            SimulationResult
        """
        if trials < 1:
            raise ValueError(f"[simulate] trials must be >= 1, got {trials}")
        if mode not in SIMULATION_MODES:
            raise ValueError(f"[simulate] mode must be one of {SIMULATION_MODES}, got {mode!r}")

        result = SimulationResult(kind=adapter.kind, mode=mode, seed=self.channel.master_seed,
                                  n_bits=adapter.n_bits, k_bits=adapter.k_bits, levels=adapter.levels)
        for p in p_grid:
            row, first_failed = self.run_point(adapter, float(p), trials, mode, max_rounds)
            result.rows.append(row)
            result.first_failed[float(p)] = first_failed
        return result

    def write_reports(self, result: SimulationResult, out_path: str) -> Dict[str, str]:
        """CSV curve at out_path, JSON diagnostics next to it."""
        csv_path = Path(out_path)
        json_path = csv_path.with_suffix('.json')
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        result.to_frame().to_csv(csv_path, index=False)

        diagnostics = {
            'kind': result.kind,
            'mode': result.mode,
            'seed': result.seed,
            'N': result.n_bits,
            'K': result.k_bits,
            'levels': result.levels,
            'rows': [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()}
                     for row in result.rows],
            'first_failed_stage': {str(p): stages for p, stages in result.first_failed.items()},
        }
        with open(json_path, 'w') as f:
            json.dump(diagnostics, f, indent=2, sort_keys=True)
        logger.info(f"Wrote {csv_path} and {json_path}")
        return {'csv': str(csv_path), 'json': str(json_path)}
