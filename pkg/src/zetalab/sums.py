"""Deterministic reduction helpers.

Every scalar reduction that feeds a reported value goes through these, so
results are reproducible bit for bit regardless of how the term lists were
produced. math.fsum is a correctly rounded sum, which also makes serial and
(block-ordered) parallel accumulation agree exactly.
"""

import math
from typing import Iterable

import numpy as np


def csum(values: Iterable[float]) -> float:
    """Correctly rounded sum of real terms."""
    return math.fsum(values)


def csum_complex(values) -> complex:
    """Correctly rounded sum of complex terms (real and imaginary parts
    summed independently)."""
    arr = np.asarray(list(values), dtype=complex)
    if arr.size == 0:
        return 0.0 + 0.0j
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))


def csum_array(arr) -> float:
    """Correctly rounded sum of a real numpy array."""
    a = np.asarray(arr, dtype=float)
    return math.fsum(a.tolist())
