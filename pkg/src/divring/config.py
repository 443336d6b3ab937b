"""Runtime defaults, overridable from the environment.

``DIVRING_PRECISION``
    default working precision (an exponent in Z[1/p], written as ``8`` or ``17/2``)
``DIVRING_ENUM_BOUND``
    largest number of points a brute-force enumeration may visit
"""

import os
from fractions import Fraction

DEFAULT_PRECISION = Fraction(8)
DEFAULT_ENUM_BOUND = 5**6


def default_precision() -> Fraction:
    raw = os.environ.get("DIVRING_PRECISION")
    if not raw:
        return DEFAULT_PRECISION
    value = Fraction(raw)
    if value <= 0:
        raise ValueError(f"DIVRING_PRECISION must be positive, got {raw!r}")
    return value


def enum_bound() -> int:
    raw = os.environ.get("DIVRING_ENUM_BOUND")
    if not raw:
        return DEFAULT_ENUM_BOUND
    value = int(raw)
    if value <= 0:
        raise ValueError(f"DIVRING_ENUM_BOUND must be positive, got {raw!r}")
    return value
