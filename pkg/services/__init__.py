# services/__init__.py
"""
Service layer for experiments on the code constructions.
Separates concerns into distinct service classes.
"""

from services.channel_service import ChannelService, derive_seed, bsc_transmit
from services.code_adapters import SerialAdapter, SingleAdapter, MultilevelAdapter, DecodeOutcome, adapter_for
from services.simulation_service import SimulationService, SimulationResult, wilson_interval
from services.sweep_service import SweepService
from services.bounds_service import BoundsService

__all__ = [
    'ChannelService', 'derive_seed', 'bsc_transmit',
    'SerialAdapter', 'SingleAdapter', 'MultilevelAdapter', 'DecodeOutcome', 'adapter_for',
    'SimulationService', 'SimulationResult', 'wilson_interval',
    'SweepService', 'BoundsService',
]
