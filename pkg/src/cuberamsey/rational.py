"""Exact rational parameters.

Thresholds like (1+g)*2^(n-d) are compared exactly, so every tunable
ratio is carried as a Fraction.  Floats are accepted at the API surface
and converted through their decimal string, which keeps 0.1 meaning one
tenth rather than its binary neighbour.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def as_fraction(x) -> Fraction:
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    raise TypeError(f"expected a rational or float, got {type(x).__name__}")
