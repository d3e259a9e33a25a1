"""
Tests for the CodeManager facade.
"""

import os

import pytest

import numpy as np
from unittest.mock import patch

from code_manager import CodeManager
from config import SimulationConfig
from constructions.expander import ModifiedBGCode
from constructions.multilevel import MLExpanderCode
from constructions.serial import SerialCode
from errors import ConfigError


class TestPresets:
    """Test preset construction and lookup."""

    def test_preset_families(self, serial_tiny, single_code, multilevel_code):
        """Test each preset builds its family."""
        assert isinstance(serial_tiny, SerialCode)
        assert isinstance(single_code, ModifiedBGCode)
        assert isinstance(multilevel_code, MLExpanderCode)

    def test_unknown_preset(self, manager):
        """Test unknown kind or name raises."""
        with pytest.raises(ValueError, match="unknown preset"):
            manager.build_preset('serial', 'huge')
        with pytest.raises(ValueError, match="unknown preset"):
            manager.build_preset('turbo')

    def test_same_seed_same_code(self, manager):
        """Test presets are reproducible from their seed."""
        first = manager.build_preset('multilevel', 'tiny', seed=5)
        second = manager.build_preset('multilevel', 'tiny', seed=5)
        np.testing.assert_array_equal(first.code.generator, second.code.generator)


class TestResolveCode:
    """Test code references."""

    def test_preset_reference(self, manager):
        """Test 'kind' and 'kind:preset' forms."""
        assert manager.resolve_code('serial:small').N == 70
        assert manager.resolve_code('serial').N == 9

    def test_bundle_path(self, manager, serial_tiny, tmp_path):
        """Test an existing file is loaded as a bundle."""
        path = str(tmp_path / 'tiny.bundle')
        manager.save(serial_tiny, path)
        assert manager.resolve_code(path).K == 2

    def test_invalid_reference(self, manager):
        """Test neither a file nor a preset."""
        with pytest.raises(ConfigError, match="neither a bundle file nor a preset"):
            manager.resolve_code('no/such/file.bundle')

    def test_unsupported_bundle_code(self, manager):
        """Test to_bundle rejects other objects."""
        with pytest.raises(TypeError):
            manager.to_bundle(object())


class TestVerify:
    """Test the verification report."""

    def _statuses(self, report):
        return {check['name']: check['status'] for check in report['checks']}

    def test_serial_tiny(self, manager, serial_tiny):
        """Test every serial check passes, including brute-force distance."""
        report = manager.verify(serial_tiny)
        assert report['success']
        statuses = self._statuses(report)
        assert statuses['tower distances nondecreasing by level'] == 'passed'
        assert statuses['direct-sum split round trip'] == 'passed'
        assert statuses['direct sum of component concatenations'] == 'passed'
        assert statuses['noiseless round trip'] == 'passed'
        assert statuses['distance bound'] == 'passed'
        assert report['params']['true_distance'] == 6

    def test_serial_small_skips_enumeration(self, manager):
        """Test large codes skip brute-force checks instead of failing."""
        report = manager.verify(manager.build_preset('serial', 'small'))
        assert report['success']
        statuses = self._statuses(report)
        assert statuses['direct sum of component concatenations'] == 'skipped'
        assert statuses['distance bound'] == 'skipped'

    def test_single(self, manager, single_code):
        """Test membership, round trip and distance bound."""
        report = manager.verify(single_code)
        assert report['success']
        assert self._statuses(report)['membership of an encoded message'] == 'passed'

    def test_multilevel(self, manager, multilevel_code):
        """Test the monolithic rank check is part of the report."""
        report = manager.verify(multilevel_code)
        assert report['success']
        assert self._statuses(report)['monolithic rank matches staged dimension'] == 'passed'
        assert report['params']['monolithic_dimension'] == report['params']['K']

    def test_failed_check_fails_report(self, manager, single_code):
        """Test a failing check turns success off."""
        with patch.object(ModifiedBGCode, 'member', return_value=False):
            report = manager.verify(single_code)
        assert not report['success']
        assert self._statuses(report)['membership of an encoded message'] == 'failed'

    def test_unsupported(self, manager):
        """Test other objects raise TypeError."""
        with pytest.raises(TypeError):
            manager.verify(object())


class TestExperiments:
    """Test delegation to the services."""

    def test_simulate_writes_reports(self, manager, tmp_path):
        """Test a simulation config produces CSV and JSON files."""
        sim = SimulationConfig(code='serial:tiny', p_grid=[0.0, 0.1], trials=5, seed=3,
                               mode='strict', out=str(tmp_path / 'curve.csv'))
        result = manager.simulate(sim)
        assert result['success']
        assert os.path.exists(result['paths']['csv'])
        assert os.path.exists(result['paths']['json'])
        assert [row['p'] for row in result['rows']] == [0.0, 0.1]
        assert result['rows'][0]['failures'] == 0

    def test_relative_output_under_output_dir(self, tmp_path, serial_tiny):
        """Test relative output paths are joined to OUTPUT_DIR."""
        from config import TestingConfig

        class OutputConfig(TestingConfig):
            OUTPUT_DIR = str(tmp_path)

        sim = SimulationConfig(code='serial:tiny', p_grid=[0.0], trials=2, seed=1,
                               mode='diagnostic', out='runs/a.csv')
        result = CodeManager(OutputConfig).simulate(sim, code=serial_tiny)
        assert result['paths']['csv'] == os.path.join(str(tmp_path), 'runs/a.csv')

    def test_default_round_cap_for_graph_codes(self, manager, single_code, serial_tiny):
        """Test graph codes get ceil(ROUND_FACTOR log2 n) and serial codes none."""
        assert manager._default_rounds(single_code) == 12
        assert manager._default_rounds(serial_tiny) is None

    def test_sweep(self, manager, serial_tiny):
        """Test a zero-weight sweep always succeeds."""
        frame = manager.sweep(serial_tiny, [0], samples=3, seed=1)
        assert frame.loc[0, 'success_rate'] == 1.0

    def test_bounds_grid(self, manager):
        """Test bound grids go through the bounds service."""
        frame = manager.bounds_grid(['zyablov'], [0.25, 0.5])
        assert len(frame) == 2
        assert (frame['value'] > 0).all()
