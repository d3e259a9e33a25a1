"""
Pytest fixtures for the expander-code tests.
"""

import os
import pytest

import numpy as np

# Set testing environment before importing project modules
os.environ['TESTING'] = 'true'

from click.testing import CliRunner

from codes.linear import LinearCode, hamming_code, repetition_code
from codes.tower import NestedTower
from config import TestingConfig
from fields import get_context
from graphs import MultilevelGraph, random_biregular


@pytest.fixture(scope='function')
def binary():
    """GF(2) context."""
    return get_context(1)


@pytest.fixture(scope='function')
def gf8():
    """GF(8) context."""
    return get_context(3)


@pytest.fixture(scope='function')
def rng():
    """Seeded generator."""
    return np.random.default_rng(1234)


@pytest.fixture(scope='function')
def manager():
    """CodeManager on the testing configuration."""
    from code_manager import CodeManager
    return CodeManager(TestingConfig)


@pytest.fixture(scope='function')
def runner():
    """Create CLI test runner."""
    return CliRunner(mix_stderr=False)


@pytest.fixture(scope='function')
def serial_tiny(manager):
    """Tower [3,2] > [3,1] with binary repetition outer codes of length 3."""
    return manager.build_preset('serial', 'tiny')


@pytest.fixture(scope='function')
def single_code(manager):
    """Single-level code: A = [6,3,3], B = A_aux = [3,2] parity, n = 8."""
    return manager.build_preset('single', 'tiny', seed=11)


@pytest.fixture(scope='function')
def multilevel_code(manager):
    """Two-level code: random tower over n_0 = 10, degrees (4, 4, 2), n = 8."""
    return manager.build_preset('multilevel', 'tiny', seed=5)


@pytest.fixture(scope='function')
def hamming_multilevel(binary):
    """
    Two-level code whose every component distance is at least 3.

    Tower: the [10,6,3] shortened Hamming code split into two 3-row blocks.
    Right codes: [3,1,3] repetition. Aux codes: the full [3,3] space.
    """
    from constructions.multilevel import MLExpanderCode

    hamming = hamming_code(4, 10)
    G = hamming.generator
    tower = NestedTower(binary, [G[:3], G[3:]])
    levels = [random_biregular(6, d, seed=100 + i) for i, d in enumerate((3, 3, 4))]
    graph = MultilevelGraph(6, levels, seed=100)
    full = LinearCode(binary, np.eye(3, dtype=np.int64), name='full3')
    rep = repetition_code(binary, 3)
    return MLExpanderCode(graph, tower, [full, full], [rep, rep], name='hamming-split')
