"""
Tests for the command line interface.
"""

import io
import json
import os

import pandas as pd
from unittest.mock import patch

from cli import cli


def _error(result):
    """Last stderr line parsed as the JSON error record."""
    return json.loads(result.stderr.strip().splitlines()[-1])


class TestBuild:
    """Test the build command."""

    def test_build_prints_parameters(self, runner):
        """Test parameters of the tiny serial code."""
        result = runner.invoke(cli, ['build', 'serial'])
        assert result.exit_code == 0
        params = json.loads(result.stdout)
        assert params['kind'] == 'serial'
        assert params['N'] == 9
        assert params['true_distance'] == 6

    def test_build_writes_bundle(self, runner, tmp_path):
        """Test --out saves a loadable bundle."""
        path = str(tmp_path / 'single.bundle')
        result = runner.invoke(cli, ['build', 'single', '--seed', '11', '--out', path])
        assert result.exit_code == 0
        with open(path) as f:
            assert f.readline().strip() == 'kind single'

    def test_unknown_preset(self, runner):
        """Test a bad preset name is a JSON error."""
        result = runner.invoke(cli, ['build', 'serial', '--preset', 'huge'])
        assert result.exit_code == 1
        error = _error(result)
        assert error['type'] == 'ValueError'
        assert 'unknown preset' in error['error']

    def test_unknown_kind(self, runner):
        """Test kinds are restricted by click."""
        result = runner.invoke(cli, ['build', 'turbo'])
        assert result.exit_code == 2


class TestVerify:
    """Test the verify command."""

    def test_verify_preset(self, runner):
        """Test a preset reference verifies."""
        result = runner.invoke(cli, ['verify', 'serial:tiny'])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report['success']
        assert all(check['status'] != 'failed' for check in report['checks'])

    def test_verify_bundle(self, runner, tmp_path):
        """Test building then verifying a saved multilevel bundle."""
        path = str(tmp_path / 'ml.bundle')
        assert runner.invoke(cli, ['build', 'multilevel', '--seed', '5', '--out', path]).exit_code == 0
        result = runner.invoke(cli, ['verify', path])
        assert result.exit_code == 0
        assert json.loads(result.stdout)['params']['kind'] == 'multilevel'

    def test_failed_verification_exits_nonzero(self, runner):
        """Test exit code 1 when a check fails."""
        report = {'success': False, 'checks': [{'name': 'noiseless round trip', 'status': 'failed', 'detail': ''}],
                  'params': {}}
        with patch('code_manager.CodeManager.verify', return_value=report):
            result = runner.invoke(cli, ['verify', 'serial:tiny'])
        assert result.exit_code == 1
        assert json.loads(result.stdout)['success'] is False

    def test_invalid_reference(self, runner):
        """Test an unknown code reference."""
        result = runner.invoke(cli, ['verify', 'missing.bundle'])
        assert result.exit_code == 1
        assert _error(result)['type'] == 'ConfigError'

    def test_malformed_bundle(self, runner, tmp_path):
        """Test bundle errors carry the line number."""
        path = tmp_path / 'bad.bundle'
        path.write_text("kind serial\nnonsense\n")
        result = runner.invoke(cli, ['verify', str(path)])
        assert result.exit_code == 1
        error = _error(result)
        assert error['type'] == 'FormatError'
        assert error['error'].startswith('line 2:')


class TestBounds:
    """Test the bounds command."""

    def test_bounds_to_stdout(self, runner):
        """Test CSV on stdout."""
        result = runner.invoke(cli, ['bounds', '-q', 'gv', '-q', 'zyablov', '--rates', '0.1,0.5'])
        assert result.exit_code == 0
        frame = pd.read_csv(io.StringIO(result.stdout))
        assert list(frame['quantity']) == ['gv', 'gv', 'zyablov', 'zyablov']
        assert (frame['value'] > 0).all()

    def test_bounds_to_file(self, runner, tmp_path):
        """Test --out writes the grid."""
        path = str(tmp_path / 'exp.csv')
        result = runner.invoke(cli, ['bounds', '-q', 'multilevel', '--rates', '0.1',
                                     '--p', '0.02', '--m', '1,2', '--out', path])
        assert result.exit_code == 0
        assert len(pd.read_csv(path)) == 2

    def test_missing_axis(self, runner):
        """Test exponents need --p."""
        result = runner.invoke(cli, ['bounds', '-q', 'e0'])
        assert result.exit_code == 1
        assert 'needs at least one p' in _error(result)['error']

    def test_bad_number(self, runner):
        """Test malformed lists are usage errors."""
        result = runner.invoke(cli, ['bounds', '-q', 'gv', '--rates', 'half'])
        assert result.exit_code == 2


class TestSimulate:
    """Test the simulate command."""

    def test_simulate(self, runner, tmp_path):
        """Test a config file run writes both reports."""
        out = tmp_path / 'curve.csv'
        config = tmp_path / 'sim.env'
        config.write_text(f"code=serial:tiny\np_grid=0,0.1\ntrials=4\nseed=2\nmode=diagnostic\nout={out}\n")
        result = runner.invoke(cli, ['simulate', str(config)])
        assert result.exit_code == 0
        paths = json.loads(result.stdout)
        assert os.path.exists(paths['csv'])
        assert os.path.exists(paths['json'])
        assert len(pd.read_csv(paths['csv'])) == 2

    def test_invalid_config(self, runner, tmp_path):
        """Test config errors are JSON errors."""
        config = tmp_path / 'sim.env'
        config.write_text("code=serial:tiny\n")
        result = runner.invoke(cli, ['simulate', str(config)])
        assert result.exit_code == 1
        error = _error(result)
        assert error['type'] == 'ConfigError'
        assert 'missing keys' in error['error']


class TestSweep:
    """Test the sweep command."""

    def test_sweep(self, runner):
        """Test weights 0 and 1 on the tiny serial code."""
        result = runner.invoke(cli, ['sweep', 'serial:tiny', '--weights', '0,1'])
        assert result.exit_code == 0
        frame = pd.read_csv(io.StringIO(result.stdout))
        assert list(frame['success_rate']) == [1.0, 1.0]

    def test_weight_out_of_range(self, runner):
        """Test a weight above N."""
        result = runner.invoke(cli, ['sweep', 'serial:tiny', '--weights', '12'])
        assert result.exit_code == 1
        assert '[sweep]' in _error(result)['error']
