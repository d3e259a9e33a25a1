# codes/__init__.py
"""
Linear block codes: generator-matrix codes, nested towers, Reed-Solomon.
"""

from codes.linear import (
    LinearCode, MLDecision, encode, min_distance, ml_decode, is_information_set,
    repetition_code, parity_code, hamming_code, shortened, random_code, code_from_parity_check,
)
from codes.tower import NestedTower, build_tower, direct_sum_split
from codes.reed_solomon import ReedSolomonCode, GMDResult, rs_decode_ee, gmd_decode, gmd_criterion

__all__ = [
    'LinearCode', 'MLDecision', 'encode', 'min_distance', 'ml_decode', 'is_information_set',
    'repetition_code', 'parity_code', 'hamming_code', 'shortened', 'random_code', 'code_from_parity_check',
    'NestedTower', 'build_tower', 'direct_sum_split',
    'ReedSolomonCode', 'GMDResult', 'rs_decode_ee', 'gmd_decode', 'gmd_criterion',
]
