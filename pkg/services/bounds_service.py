# services/bounds_service.py
"""
Tabulates distance bounds and error exponents over parameter grids.
"""

import logging
from typing import Dict, List, Optional, Sequence

import pandas as pd

import bounds
from bounds import NumericSettings, DEFAULT_SETTINGS
from errors import BoundsDomainError

logger = logging.getLogger(__name__)

# quantity -> (needs p, needs m)
QUANTITIES = {
    'gv': (False, False),
    'zyablov': (False, False),
    'm_level': (False, True),
    'bz_distance': (False, False),
    'e0': (True, False),
    'forney': (True, False),
    'multilevel': (True, True),
    'bz_exponent': (True, False),
}

COLUMNS = ['quantity', 'p', 'R', 'm', 'value', 'argmax']


class BoundsService:
    """Evaluates bounds.py quantities point by point into a DataFrame."""

    def __init__(self, settings: NumericSettings = DEFAULT_SETTINGS):
        self.settings = settings

    def evaluate(self, quantity: str, R: float, p: Optional[float] = None, m: Optional[int] = None) -> Dict:
        s = self.settings
        argmax = None
        if quantity == 'gv':
            value = bounds.gv_distance(R, s.bisection_tol)
        elif quantity == 'zyablov':
            value, argmax = bounds.zyablov_distance(R, s)
        elif quantity == 'm_level':
            value, argmax = bounds.m_level_distance(m, R, s)
        elif quantity == 'bz_distance':
            value = bounds.bz_distance(R, s)
        elif quantity == 'e0':
            value = bounds.e0(R, p, s.bisection_tol)
        elif quantity == 'forney':
            value, argmax = bounds.forney_exponent(R, p, s)
        elif quantity == 'multilevel':
            value, argmax = bounds.multilevel_exponent(m, R, p, s)
        elif quantity == 'bz_exponent':
            value, argmax = bounds.bz_exponent(R, p, s)
        else:
            raise ValueError(f"[bounds] unknown quantity {quantity!r}; choose from {sorted(QUANTITIES)}")
        return {'quantity': quantity, 'p': p, 'R': R, 'm': m, 'value': float(value),
                'argmax': None if argmax is None else float(argmax)}

    def grid(self, quantities: Sequence[str], rates: Sequence[float],
             p_values: Sequence[float] = (), m_values: Sequence[int] = ()) -> pd.DataFrame:
        """
        Cartesian grid per quantity over the axes it depends on.

        Points outside a quantity's domain (for example E_0 above capacity)
        are skipped with a warning.
        """
        rows: List[Dict] = []
        for quantity in quantities:
            if quantity not in QUANTITIES:
                raise ValueError(f"[bounds] unknown quantity {quantity!r}; choose from {sorted(QUANTITIES)}")
            needs_p, needs_m = QUANTITIES[quantity]
            if needs_p and not p_values:
                raise ValueError(f"[bounds] {quantity} needs at least one p")
            if needs_m and not m_values:
                raise ValueError(f"[bounds] {quantity} needs at least one m")
            for p in (p_values if needs_p else [None]):
                for m in (m_values if needs_m else [None]):
                    for R in rates:
                        try:
                            rows.append(self.evaluate(quantity, float(R), p, m))
                        except BoundsDomainError as e:
                            logger.warning(f"Skipping {quantity} at R={R}, p={p}, m={m}: {e}")
        logger.info(f"Evaluated {len(rows)} bound points")
        return pd.DataFrame(rows, columns=COLUMNS)
