# constants.py
"""
Library constants and limits.
These are the hardcoded defaults behind fields, codes, graphs, decoders and
the bounds engine. Runtime overrides go through config.Config.
"""

# =============================================================================
# FINITE FIELDS
# =============================================================================

# Primitive polynomials over GF(2), bit i = coefficient of x^i
PRIMITIVE_POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}

MAX_FIELD_DEGREE = 16

# =============================================================================
# ENUMERATION BUDGETS
# =============================================================================

# Largest codebook (q^k) any brute-force routine may walk
ENUMERATION_BUDGET = 2 ** 24

# Codebooks up to this size are materialized once and cached on the code
CODEBOOK_CACHE_LIMIT = 2 ** 16

# Messages per block when a codebook is walked without caching
ENUMERATION_BLOCK = 2 ** 14

# Brute-force true distance of a full construction only below this dimension (bits)
BRUTE_FORCE_MAX_BITS = 20

# =============================================================================
# NUMERIC TOLERANCES (bounds engine)
# =============================================================================

BISECTION_TOL = 1e-12
MAXIMIZER_GRID = 4096
REFINE_TOL = 1e-9
QUAD_TOL = 1e-9
SINGULARITY_EPS = 1e-6  # R_0 <= C - eps for the infinite-level exponent

# =============================================================================
# GRAPHS
# =============================================================================

# Accept a level graph only if lambda <= LAMBDA_FACTOR * sqrt(degree)
LAMBDA_FACTOR = 3.0

GRAPH_RETRIES = 50
MATCHING_RETRIES = 200

POWER_ITERATION_TOL = 1e-10
POWER_ITERATION_MAX = 20000

# =============================================================================
# DECODERS
# =============================================================================

# Basic decoding round cap: ceil(ROUND_FACTOR * log2(n))
ROUND_FACTOR = 4

# Tower search samples per level
TOWER_TRIALS = 2000

# =============================================================================
# SIMULATION
# =============================================================================

DEFAULT_SEED = 2024
DEFAULT_TRIALS = 200
WILSON_CONFIDENCE = 0.95
EXHAUSTIVE_PATTERN_LIMIT = 10 ** 6
SIMULATION_MODES = ('strict', 'diagnostic')
