#!/usr/bin/env python3
"""
Configuration for currentlab
Environment overrides and numeric tolerances shared by all models
"""

import os
import logging

logger = logging.getLogger(__name__)


def _env_int(name, default):
    """Read an integer environment variable, falling back to the default"""
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
        if value < 0:
            raise ValueError("negative")
        return value
    except ValueError as e:
        logger.warning(f"Ignoring {name}={raw!r}: {str(e)}")
        return default


def enumeration_budget():
    """Maximum support size for exhaustive dual-complex enumeration"""
    return _env_int("CURRENTLAB_BUDGET", DEFAULT_BUDGET)


def log_level():
    return os.environ.get("CURRENTLAB_LOG_LEVEL", "WARNING").upper()


DEFAULT_BUDGET = 24
SVG_SEED = _env_int("CURRENTLAB_SVG_SEED", 0)
WORKERS = _env_int("CURRENTLAB_WORKERS", 1)

# Exact kernels
EXHAUSTIVE_DET_LIMIT = 7
MAX_WORD_LENGTH = 8
ROUNDING_DENOMINATOR = 2 ** 32

# Floating-point models
ABC_RTOL = 1e-9
ROOT_ATOL = 1e-12
VERONESE_RTOL = 1e-8
MAX_VERONESE_N = 8
CROSS_RATIO_RTOL = 1e-9
MAX_DOUBLINGS = 60
START_RADIUS = 8.0
