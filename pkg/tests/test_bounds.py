"""
Tests for the exponent and distance-bound engine.
"""

import math

import pytest

import numpy as np
from scipy import integrate

from bounds import (
    ChannelParams, NumericSettings, bz_distance, bz_exponent, bz_exponent_parametric, bz_rate,
    design_radius, e0, entropy, forney_exponent, gv_distance, inv_entropy, kl,
    m_level_distance, multilevel_exponent, zyablov_distance,
)
from errors import BoundsDomainError

P = 0.05
ORACLE_POINTS = 10 ** 6


def _grid_max(objective, lo, hi):
    """Maximum of a vectorized objective over an evenly spaced oracle grid."""
    grid = np.linspace(lo, hi, ORACLE_POINTS)
    with np.errstate(divide='ignore', invalid='ignore'):
        values = np.nan_to_num(objective(grid), nan=-np.inf)
    return float(values.max())


class TestEntropy:
    """Test entropy, its inverse and divergence."""

    def test_endpoints(self):
        """Test h(0) = h(1) = 0 and h(1/2) = 1."""
        assert entropy(0.0) == 0.0
        assert entropy(1.0) == 0.0
        assert entropy(0.5) == pytest.approx(1.0)

    def test_inverse_round_trip(self):
        """Test h^-1(h(x)) = x on [0, 1/2]."""
        for x in (0.001, 0.05, 0.11, 0.3, 0.49):
            assert inv_entropy(entropy(x)) == pytest.approx(x, abs=1e-9)

    def test_vectorized_inverse_matches_scalar(self):
        """Test the array bisection agrees with the scalar path."""
        ys = np.array([0.0, 0.2, 0.5, 0.9, 1.0])
        expected = [inv_entropy(float(y)) for y in ys]
        np.testing.assert_allclose(inv_entropy(ys), expected, atol=1e-9)

    def test_gv_endpoints(self):
        """Test delta_GV(0) = 1/2 and delta_GV(1) = 0."""
        assert gv_distance(0.0) == 0.5
        assert gv_distance(1.0) == 0.0

    def test_kl(self):
        """Test D(x || x) = 0 and positivity elsewhere."""
        assert kl(0.2, 0.2) == pytest.approx(0.0, abs=1e-12)
        assert kl(0.0, 0.5) == pytest.approx(1.0)
        assert kl(0.3, 0.1) > 0

    def test_domain_errors(self):
        """Test out-of-range arguments raise BoundsDomainError."""
        with pytest.raises(BoundsDomainError):
            entropy(1.5)
        with pytest.raises(BoundsDomainError):
            kl(0.2, 0.0)
        with pytest.raises(ValueError):
            gv_distance(-0.1)

    def test_design_radius(self):
        """Test half the relative distance."""
        assert design_radius(0.2) == pytest.approx(0.1)


class TestRandomCodingExponent:
    """Test E_0 of the BSC."""

    def test_channel_thresholds_ordered(self):
        """Test 0 < R_x < R_crit < C."""
        ch = ChannelParams.from_p(P)
        assert 0 < ch.r_x < ch.r_crit < ch.capacity
        assert ch.capacity == pytest.approx(1 - entropy(P))

    @pytest.mark.parametrize('p', [0.0, 0.5, 0.7])
    def test_channel_domain(self, p):
        """Test p outside (0, 1/2) raises."""
        with pytest.raises(BoundsDomainError):
            ChannelParams.from_p(p)

    def test_value_at_zero_rate(self):
        """Test E_0(0) = -log2(2 sqrt(p(1-p)))/2."""
        expected = -0.5 * math.log2(2 * math.sqrt(P * (1 - P)))
        assert e0(0.0, P) == pytest.approx(expected, rel=1e-9)

    def test_vanishes_at_capacity(self):
        """Test E_0(C) = 0."""
        ch = ChannelParams.from_p(P)
        assert e0(ch.capacity, P) == pytest.approx(0.0, abs=1e-9)

    def test_continuous_at_regime_changes(self):
        """Test no jump at R_x and R_crit."""
        ch = ChannelParams.from_p(P)
        for r in (ch.r_x, ch.r_crit):
            assert e0(r - 1e-9, P) == pytest.approx(e0(r + 1e-9, P), abs=1e-6)

    def test_nonincreasing(self):
        """Test E_0 decreases along a rate grid."""
        ch = ChannelParams.from_p(P)
        values = e0(np.linspace(0, ch.capacity, 200), P)
        assert np.all(np.diff(values) <= 1e-12)

    def test_rate_above_capacity(self):
        """Test R > C raises."""
        with pytest.raises(BoundsDomainError):
            e0(0.9, P)


class TestConcatenatedExponents:
    """Test Forney, multilevel and infinite-level exponents."""

    def test_one_level_is_forney(self):
        """Test the m = 1 multilevel exponent equals the Forney exponent."""
        value, arg = forney_exponent(0.2, P)
        ml_value, ml_arg = multilevel_exponent(1, 0.2, P)
        assert ml_value == pytest.approx(value, abs=1e-9)
        assert ml_arg == pytest.approx(arg, rel=1e-6)

    def test_ordering(self):
        """Test Forney <= m-level <= infinite-level."""
        forney, _ = forney_exponent(0.2, P)
        four, _ = multilevel_exponent(4, 0.2, P)
        infinite, _ = bz_exponent(0.2, P)
        assert 0 < forney <= four + 1e-9
        assert four <= infinite + 1e-6

    def test_argmax_in_range(self):
        """Test R <= R_0 <= C."""
        ch = ChannelParams.from_p(P)
        _, arg = forney_exponent(0.3, P)
        assert 0.3 <= arg <= ch.capacity

    def test_zero_at_capacity(self):
        """Test every exponent vanishes at R = C."""
        ch = ChannelParams.from_p(P)
        assert forney_exponent(ch.capacity, P)[0] == 0.0
        assert multilevel_exponent(3, ch.capacity, P)[0] == 0.0
        assert bz_exponent(ch.capacity, P)[0] == 0.0

    def test_parametric_curve_matches_maximization(self):
        """Test (R(alpha), E_0(alpha)) lies on the maximized curve."""
        rate, value = bz_exponent_parametric(0.5, P)
        assert 0 < rate < 0.5
        assert bz_exponent(rate, P)[0] == pytest.approx(value, abs=1e-7)

    @pytest.mark.parametrize('R,p', [(0.1, 0.02), (0.3, 0.05), (0.2, 0.01)])
    def test_forney_maximizer_matches_grid_oracle(self, R, p):
        """Test the refined Forney maximum agrees with a 10^6-point grid."""
        ch = ChannelParams.from_p(p)
        oracle = _grid_max(lambda r0: np.asarray(e0(r0, p)) * (1.0 - R / r0), R, ch.capacity)
        assert forney_exponent(R, p)[0] == pytest.approx(oracle, abs=1e-6)

    @pytest.mark.parametrize('m', [2, 3])
    def test_multilevel_maximizer_matches_grid_oracle(self, m):
        """Test the m-level exponent maximum agrees with a 10^6-point grid."""
        R, p = 0.2, 0.02
        ch = ChannelParams.from_p(p)
        fractions = np.arange(1, m + 1) / m

        def objective(r0):
            points = np.minimum(r0[:, None] * fractions[None, :], ch.capacity)
            values = np.asarray(e0(points.ravel(), p)).reshape(points.shape)
            return (r0 - R) / (r0 * np.mean(1.0 / values, axis=1))

        oracle = _grid_max(objective, R, ch.capacity)
        assert multilevel_exponent(m, R, p)[0] == pytest.approx(oracle, abs=1e-6)

    @pytest.mark.parametrize('R', [0.1, 0.3])
    def test_infinite_level_maximizer_matches_grid_oracle(self, R):
        """Test the infinite-level maximum against a trapezoid integral on a 10^6-point grid."""
        ch = ChannelParams.from_p(P)
        grid = np.linspace(0.0, ch.capacity - NumericSettings().singularity_eps, ORACLE_POINTS)
        with np.errstate(divide='ignore'):
            integral = integrate.cumulative_trapezoid(1.0 / np.asarray(e0(grid, P)), grid, initial=0.0)
        usable = grid > R
        oracle = float(np.max((grid[usable] - R) / integral[usable]))
        assert bz_exponent(R, P)[0] == pytest.approx(oracle, abs=1e-6)

    @pytest.mark.parametrize('p', [0.01, 0.02, 0.05])
    @pytest.mark.parametrize('R', [0.1, 0.2, 0.3])
    def test_strictly_increasing_in_levels(self, R, p):
        """Test E^(m) < E^(m+1) for m = 1..6."""
        values = [multilevel_exponent(m, R, p)[0] for m in range(1, 8)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_invalid_level_count(self):
        """Test m < 1 raises."""
        with pytest.raises(BoundsDomainError):
            multilevel_exponent(0, 0.2, P)

    def test_settings_validation(self):
        """Test nonpositive tolerances and tiny grids raise."""
        with pytest.raises(BoundsDomainError):
            NumericSettings(grid_size=2)
        with pytest.raises(BoundsDomainError):
            NumericSettings(quad_tol=0.0)


class TestDistanceBounds:
    """Test Zyablov, m-level and Blokh-Zyablov distances."""

    def test_one_level_is_zyablov(self):
        """Test m = 1 reproduces the Zyablov bound."""
        assert m_level_distance(1, 0.3)[0] == pytest.approx(zyablov_distance(0.3)[0], rel=1e-9)

    @pytest.mark.parametrize('R', [0.1, 0.3, 0.6])
    def test_ordering(self, R):
        """Test Zyablov <= m-level <= Blokh-Zyablov <= GV."""
        zyablov, _ = zyablov_distance(R)
        four, _ = m_level_distance(4, R)
        bz = bz_distance(R)
        assert zyablov <= four + 1e-9
        assert four <= bz + 1e-6
        assert bz <= gv_distance(R) + 1e-9

    def test_endpoints(self):
        """Test rate 0 gives 1/2 and rate 1 gives 0."""
        assert zyablov_distance(0.0)[0] == pytest.approx(0.5, abs=1e-5)
        assert zyablov_distance(1.0)[0] == 0.0
        assert bz_distance(0.0) == 0.5
        assert bz_distance(1.0) == 0.0
        assert bz_rate(0.0) == 1.0

    def test_bz_round_trip(self):
        """Test bz_distance inverts bz_rate."""
        for delta in (0.02, 0.1, 0.2):
            assert bz_distance(bz_rate(delta)) == pytest.approx(delta, abs=1e-8)

    @pytest.mark.parametrize('R', [0.1, 0.5])
    def test_zyablov_maximizer_matches_grid_oracle(self, R):
        """Test the refined Zyablov maximum agrees with a 10^6-point grid."""
        oracle = _grid_max(lambda r0: np.asarray(gv_distance(r0)) * (1.0 - R / r0), R, 1.0)
        assert zyablov_distance(R)[0] == pytest.approx(oracle, abs=1e-6)

    def test_m_level_maximizer_matches_grid_oracle(self):
        """Test the 3-level distance maximum agrees with a 10^6-point grid."""
        R, m = 0.3, 3
        fractions = np.arange(1, m + 1) / m

        def objective(r0):
            points = r0[:, None] * fractions[None, :]
            deltas = np.asarray(gv_distance(points.ravel())).reshape(points.shape)
            return m * (r0 - R) / (r0 * np.sum(1.0 / deltas, axis=1))

        assert m_level_distance(m, R)[0] == pytest.approx(_grid_max(objective, R, 1.0), abs=1e-6)

    @pytest.mark.parametrize('R', [round(0.05 * i, 2) for i in range(1, 20)])
    def test_full_ordering_and_growth_in_levels(self, R):
        """Test Zyablov <= m-level <= Blokh-Zyablov <= GV for m in 2, 4, 8, 16, nondecreasing in m."""
        zyablov, _ = zyablov_distance(R)
        bz = bz_distance(R)
        levels = [m_level_distance(m, R)[0] for m in (2, 4, 8, 16)]
        assert zyablov <= levels[0] + 1e-9
        assert all(a <= b + 1e-9 for a, b in zip(levels, levels[1:]))
        assert levels[-1] <= bz + 1e-8
        assert bz <= gv_distance(R) + 1e-9

    def test_bz_rate_round_trip(self):
        """Test bz_rate inverts bz_distance."""
        for R in (0.05, 0.3, 0.7):
            assert bz_rate(bz_distance(R)) == pytest.approx(R, abs=1e-8)

    def test_bz_rate_decreasing(self):
        """Test the Blokh-Zyablov rate falls with distance."""
        rates = [bz_rate(d) for d in (0.0, 0.05, 0.1, 0.2, 0.3)]
        assert all(a > b for a, b in zip(rates, rates[1:]))

    def test_rate_domain(self):
        """Test rates outside [0, 1] raise."""
        with pytest.raises(BoundsDomainError):
            zyablov_distance(1.5)
        with pytest.raises(BoundsDomainError):
            bz_rate(0.6)
