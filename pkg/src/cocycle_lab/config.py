"""Configuration constants for cocycle-lab.

Numerical tolerances, search caps and optimizer settings shared by the
analysis modules, plus the environment variables the CLI honours.
"""

import os

# ---------------------------------------------------------------------------
# Tolerances
# ---------------------------------------------------------------------------

TOLERANCES = {
    "isometry": 1e-12,          # relative, ||apply(pi, v)||_p vs ||v||_p
    "cheeger_bounds": 1e-9,     # h^2/2k <= lambda_1 <= 2h
    "p2_consistency": 1e-6,     # |c_2 - lambda_1| <= tol * max(1, lambda_1)
    "cocycle_identity": 1e-10,
    "coboundary_residual": 1e-8,
    "lstsq": 1e-10,
    "chain": 1e-8,              # relative, displacement chains
    "power_map": 1e-12,         # relative, power-map norm identities
    "fixed_point": 1e-12,
    "zero_coordinate": 1e-300,  # below this a coordinate is 0 before fractional powers
}

# ---------------------------------------------------------------------------
# Search caps and sizes
# ---------------------------------------------------------------------------

EXHAUSTIVE_CAP = 24           # max vertices for brute-force Cheeger
EXHAUSTIVE_CHUNK = 1 << 20    # subset masks evaluated per numpy batch
DENSE_LIMIT = 4096            # above this, sparse eigensolver / lsqr
MAX_LABEL_SIZE = 8            # bounded-components case: D <= 8
COVERING_SET_CAP = 250_000    # max subgroup order closed by covering_set

# ---------------------------------------------------------------------------
# p-Rayleigh descent
# ---------------------------------------------------------------------------

DESCENT = {
    "starts": 4,          # random starts in addition to the Fiedler warm start
    "max_iter": 10_000,
    "rel_tol": 1e-10,
    "armijo": 1e-4,
    "shrink": 0.5,
    "max_backtracks": 60,
    "initial_step": 1.0,
}

# ---------------------------------------------------------------------------
# Word sampling for identity checks and word bounds
# ---------------------------------------------------------------------------

WORD_SAMPLING = {
    "exhaustive_length": 3,
    "random_words": 100,
}

# ---------------------------------------------------------------------------
# Randomness and report formats
# ---------------------------------------------------------------------------

RNG_ALGORITHM = "numpy.random.PCG64"
DEFAULT_SEED = 20240601
CSV_SCHEMA_VERSION = 1
FLOAT_DIGITS = 12

THREADS_ENV = "COCYCLE_LAB_THREADS"
LOG_DIR_ENV = "COCYCLE_LAB_LOG_DIR"
LOG_FILE_NAME = "cocycle-lab.log"


def thread_cap() -> int:
    """Return the worker cap from COCYCLE_LAB_THREADS (default 1, invalid values -> 1)."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def log_dir() -> str | None:
    """Return the configured log directory, or None when file logging is off."""
    return os.environ.get(LOG_DIR_ENV) or None
