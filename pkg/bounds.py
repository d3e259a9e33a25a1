# bounds.py
"""
Numerical evaluation of BSC error exponents and distance bounds.

All logarithms are base 2. Maximizations over the outer rate R_0 use a
coarse grid followed by bounded Brent refinement (golden section with
parabolic steps). Maximized quantities return (value, argmax).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy import integrate, optimize, special

from constants import (
    BISECTION_TOL, MAXIMIZER_GRID, QUAD_TOL, REFINE_TOL, SINGULARITY_EPS,
)
from errors import BoundsDomainError

logger = logging.getLogger(__name__)

_TINY = 1e-12


@dataclass(frozen=True)
class NumericSettings:
    """Tolerances for bisection, maximization and quadrature."""
    bisection_tol: float = BISECTION_TOL
    grid_size: int = MAXIMIZER_GRID
    refine_tol: float = REFINE_TOL
    quad_tol: float = QUAD_TOL
    singularity_eps: float = SINGULARITY_EPS

    def __post_init__(self):
        for name in ('bisection_tol', 'refine_tol', 'quad_tol', 'singularity_eps'):
            if getattr(self, name) <= 0:
                raise BoundsDomainError(f"[settings] {name} must be positive")
        if self.grid_size < 3:
            raise BoundsDomainError("[settings] grid_size must be at least 3")


DEFAULT_SETTINGS = NumericSettings()


# =============================================================================
# Entropy and divergence
# =============================================================================

def _check_unit(x, name: str, lo: float = 0.0, hi: float = 1.0):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < lo - _TINY) or np.any(arr > hi + _TINY):
        raise BoundsDomainError(f"[{name}] argument outside [{lo}, {hi}]")
    return np.clip(arr, lo, hi)


def _scalar_or_array(value: np.ndarray):
    return float(value) if np.ndim(value) == 0 else value


def _h(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def entropy(x):
    """Binary entropy with 0 log 0 = 0."""
    x = _check_unit(x, 'entropy')
    with np.errstate(divide='ignore', invalid='ignore'):
        h = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    return _scalar_or_array(np.where((x <= 0.0) | (x >= 1.0), 0.0, h))


def inv_entropy(y, tol: float = BISECTION_TOL):
    """Preimage of h on [0, 1/2], by bisection."""
    y = _check_unit(y, 'inv_entropy')
    if y.ndim == 0:
        target = float(y)
        if target <= 0.0:
            return 0.0
        if target >= 1.0:
            return 0.5
        return float(optimize.bisect(lambda x: _h(x) - target, 0.0, 0.5, xtol=tol))

    lo = np.zeros_like(y)
    hi = np.full_like(y, 0.5)
    for _ in range(int(math.ceil(math.log2(0.5 / tol))) + 1):
        mid = 0.5 * (lo + hi)
        below = entropy(mid) < y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    out = np.where(y <= 0.0, 0.0, out)
    return np.where(y >= 1.0, 0.5, out)


def gv_distance(R, tol: float = BISECTION_TOL):
    """delta_GV(R) = h^{-1}(1 - R)."""
    R = _check_unit(R, 'gv_distance')
    return inv_entropy(1.0 - R, tol)


def kl(x, y):
    """Binary divergence D(x || y) with 0 log 0 = 0."""
    x = _check_unit(x, 'kl')
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0) or np.any(y >= 1.0):
        raise BoundsDomainError("[kl] second argument must lie in (0, 1)")
    with np.errstate(divide='ignore', invalid='ignore'):
        first = np.where(x > 0.0, x * np.log2(x / y), 0.0)
        second = np.where(x < 1.0, (1.0 - x) * np.log2((1.0 - x) / (1.0 - y)), 0.0)
    return _scalar_or_array(first + second)


def design_radius(delta: float) -> float:
    """Guaranteed correction fraction for relative distance delta."""
    return delta / 2.0


# =============================================================================
# Channel
# =============================================================================

@dataclass(frozen=True)
class ChannelParams:
    """BSC(p) with its capacity and the rates where E_0 changes form."""
    p: float
    capacity: float
    rho0: float
    r_crit: float
    r_x: float

    @classmethod
    def from_p(cls, p: float) -> 'ChannelParams':
        if not 0.0 < p < 0.5:
            raise BoundsDomainError(f"[channel] crossover probability {p} outside (0, 1/2)")
        rho0 = math.sqrt(p) / (math.sqrt(p) + math.sqrt(1.0 - p))
        return cls(
            p=p,
            capacity=1.0 - _h(p),
            rho0=rho0,
            r_crit=1.0 - _h(rho0),
            r_x=1.0 - _h(2.0 * rho0 * (1.0 - rho0)),
        )


def e0(R, p: float, tol: float = BISECTION_TOL):
    """
    Random-coding exponent of the BSC in its three regimes:
    expurgated below R_x, straight line up to R_crit, sphere packing above.
    """
    ch = ChannelParams.from_p(p)
    R = np.asarray(R, dtype=float)
    if np.any(R < -_TINY) or np.any(R > ch.capacity + _TINY):
        raise BoundsDomainError(f"[e0] rate outside [0, C={ch.capacity:.6f}]")
    R = np.clip(R, 0.0, ch.capacity)

    delta = np.asarray(gv_distance(R, tol))
    low = -delta * math.log2(2.0 * math.sqrt(p * (1.0 - p)))
    mid = kl(ch.rho0, p) + ch.r_crit - R
    high = np.asarray(kl(np.minimum(delta, 0.5), p))
    value = np.where(R <= ch.r_x, low, np.where(R <= ch.r_crit, mid, high))
    return _scalar_or_array(np.maximum(value, 0.0))


# =============================================================================
# Maximization
# =============================================================================

def _maximize(objective: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
              settings: NumericSettings) -> Tuple[float, float]:
    """Grid search on [lo, hi] then bounded refinement around the best node."""
    if hi <= lo:
        return float(objective(np.array([lo]))[0]), lo
    grid = np.linspace(lo, hi, settings.grid_size)
    values = np.nan_to_num(objective(grid), nan=-np.inf)
    i = int(np.argmax(values))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]

    result = optimize.minimize_scalar(
        lambda x: -float(objective(np.array([x]))[0]),
        bounds=(a, b), method='bounded', options={'xatol': settings.refine_tol},
    )
    if result.success and -result.fun >= values[i]:
        return float(-result.fun), float(result.x)
    return float(values[i]), float(grid[i])


def _check_p(p: float):
    if not 0.0 < p < 0.5:
        raise BoundsDomainError(f"[exponent] crossover probability {p} outside (0, 1/2)")


def forney_exponent(R: float, p: float, settings: NumericSettings = DEFAULT_SETTINGS) -> Tuple[float, float]:
    """max over R <= R_0 <= C of E_0(R_0)(1 - R/R_0)."""
    _check_p(p)
    ch = ChannelParams.from_p(p)
    if R < 0:
        raise BoundsDomainError(f"[forney] rate {R} < 0")
    if R >= ch.capacity:
        return 0.0, ch.capacity

    def objective(r0):
        return np.asarray(e0(r0, p, settings.bisection_tol)) * (1.0 - R / r0)

    return _maximize(objective, max(R, _TINY), ch.capacity, settings)


def multilevel_exponent(m: int, R: float, p: float,
                        settings: NumericSettings = DEFAULT_SETTINGS) -> Tuple[float, float]:
    """m-level exponent: (R_0 - R) over the mean of 1/E_0 at i R_0 / m."""
    _check_p(p)
    if m < 1:
        raise BoundsDomainError(f"[multilevel] level count {m} < 1")
    ch = ChannelParams.from_p(p)
    if R < 0:
        raise BoundsDomainError(f"[multilevel] rate {R} < 0")
    if R >= ch.capacity:
        return 0.0, ch.capacity
    fractions = np.arange(1, m + 1) / m

    def objective(r0):
        r0 = np.asarray(r0, dtype=float)
        points = np.minimum(r0[:, None] * fractions[None, :], ch.capacity)
        values = np.asarray(e0(points.ravel(), p, settings.bisection_tol)).reshape(points.shape)
        with np.errstate(divide='ignore'):
            mean_inverse = np.mean(1.0 / values, axis=1)
        return np.where(np.isfinite(mean_inverse), (r0 - R) / (r0 * mean_inverse), 0.0)

    return _maximize(objective, max(R, _TINY), ch.capacity, settings)


def _inverse_e0_integral(r0: float, p: float, ch: ChannelParams, settings: NumericSettings) -> float:
    """Adaptive quadrature of 1/E_0 on [0, r0]."""
    if r0 <= 0:
        return 0.0
    breaks = [b for b in (ch.r_x, ch.r_crit) if 0 < b < r0]
    value, _ = integrate.quad(lambda x: 1.0 / e0(x, p, settings.bisection_tol), 0.0, r0,
                              points=breaks or None, epsabs=settings.quad_tol, limit=200)
    return value


def _cumulative_inverse_e0(grid: np.ndarray, p: float, ch: ChannelParams,
                           settings: NumericSettings) -> np.ndarray:
    """Integral of 1/E_0 from 0 to every grid node, Gauss-Legendre per cell."""
    nodes, weights = special.roots_legendre(8)
    left, right = grid[:-1], grid[1:]
    half = 0.5 * (right - left)
    x = (left + right)[:, None] * 0.5 + half[:, None] * nodes[None, :]
    values = np.asarray(e0(x.ravel(), p, settings.bisection_tol)).reshape(x.shape)
    cells = half * np.sum(weights[None, :] / values, axis=1)
    start = _inverse_e0_integral(float(grid[0]), p, ch, settings)
    return start + np.concatenate([[0.0], np.cumsum(cells)])


def bz_exponent(R: float, p: float, settings: NumericSettings = DEFAULT_SETTINGS) -> Tuple[float, float]:
    """
    Infinite-level exponent: max of (R_0 - R) / int_0^{R_0} dx/E_0(x).

    R_0 is restricted to [R, C - singularity_eps]. The grid pass uses
    fixed Gauss-Legendre cells; the maximizer is then pinned by the
    stationarity condition R_0 - E_0(R_0) I(R_0) = R, which is monotone
    in R_0, with adaptive quadrature for I.
    """
    _check_p(p)
    ch = ChannelParams.from_p(p)
    if R < 0:
        raise BoundsDomainError(f"[bz_exponent] rate {R} < 0")
    hi = ch.capacity - settings.singularity_eps
    if R >= hi:
        return 0.0, ch.capacity

    lo = max(R, _TINY)
    grid = np.linspace(lo, hi, settings.grid_size)
    integral = _cumulative_inverse_e0(grid, p, ch, settings)
    values = (grid - R) / integral
    i = int(np.argmax(values))
    a, b = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, grid.size - 1)])

    def stationarity(r0: float) -> float:
        return r0 - e0(r0, p, settings.bisection_tol) * _inverse_e0_integral(r0, p, ch, settings) - R

    if stationarity(a) <= 0.0 <= stationarity(b):
        alpha = float(optimize.brentq(stationarity, a, b, xtol=settings.bisection_tol))
    else:
        result = optimize.minimize_scalar(
            lambda x: -(x - R) / _inverse_e0_integral(x, p, ch, settings),
            bounds=(a, b), method='bounded', options={'xatol': settings.refine_tol},
        )
        alpha = float(result.x)
    value = (alpha - R) / _inverse_e0_integral(alpha, p, ch, settings)
    return float(value), alpha


def bz_exponent_parametric(alpha: float, p: float,
                           settings: NumericSettings = DEFAULT_SETTINGS) -> Tuple[float, float]:
    """Point (R, E) of the infinite-level exponent curve at parameter alpha."""
    ch = ChannelParams.from_p(p)
    if not 0.0 < alpha < ch.capacity:
        raise BoundsDomainError(f"[bz_parametric] alpha {alpha} outside (0, C)")
    value = e0(alpha, p, settings.bisection_tol)
    rate = alpha - value * _inverse_e0_integral(alpha, p, ch, settings)
    return float(rate), float(value)


# =============================================================================
# Distance bounds
# =============================================================================

def _check_rate(R: float, name: str):
    if not 0.0 <= R <= 1.0:
        raise BoundsDomainError(f"[{name}] rate {R} outside [0, 1]")


def zyablov_distance(R: float, settings: NumericSettings = DEFAULT_SETTINGS) -> Tuple[float, float]:
    """max over R <= R_0 <= 1 of delta_GV(R_0)(1 - R/R_0)."""
    _check_rate(R, 'zyablov')
    if R >= 1.0:
        return 0.0, 1.0

    def objective(r0):
        return np.asarray(gv_distance(r0, settings.bisection_tol)) * (1.0 - R / r0)

    return _maximize(objective, max(R, _TINY), 1.0, settings)


def m_level_distance(m: int, R: float, settings: NumericSettings = DEFAULT_SETTINGS) -> Tuple[float, float]:
    """Relative distance of an m-level concatenated code."""
    _check_rate(R, 'm_level')
    if m < 1:
        raise BoundsDomainError(f"[m_level] level count {m} < 1")
    if R >= 1.0:
        return 0.0, 1.0
    fractions = np.arange(1, m + 1) / m

    def objective(r0):
        r0 = np.asarray(r0, dtype=float)
        points = r0[:, None] * fractions[None, :]
        deltas = np.asarray(gv_distance(points.ravel(), settings.bisection_tol)).reshape(points.shape)
        with np.errstate(divide='ignore'):
            total = np.sum(1.0 / deltas, axis=1)
        return np.where(np.isfinite(total), m * (r0 - R) / (r0 * total), 0.0)

    return _maximize(objective, max(R, _TINY), 1.0, settings)


def bz_rate(delta: float, settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    """Rate of the Blokh-Zyablov curve at relative distance delta."""
    if not 0.0 <= delta <= 0.5:
        raise BoundsDomainError(f"[bz_rate] distance {delta} outside [0, 1/2]")
    if delta == 0.0:
        return 1.0
    upper = 1.0 - _h(delta)
    if upper <= 0.0:
        return 0.0
    integral, _ = integrate.quad(lambda x: 1.0 / gv_distance(x, settings.bisection_tol), 0.0, upper,
                                 epsabs=settings.quad_tol, limit=200)
    return float(upper - delta * integral)


def bz_distance(R: float, settings: NumericSettings = DEFAULT_SETTINGS) -> float:
    """Inverse of bz_rate, by bisection (bz_rate is strictly decreasing)."""
    _check_rate(R, 'bz_distance')
    if R <= 0.0:
        return 0.5
    if R >= 1.0:
        return 0.0
    return float(optimize.bisect(lambda d: bz_rate(d, settings) - R, 1e-9, 0.5,
                                 xtol=settings.bisection_tol))
