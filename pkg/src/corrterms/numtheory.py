"""Exact arithmetic and parity helpers shared by every other module.

Correction terms are rational numbers whose denominators divide 4pq, so
everything downstream works with exact fractions.  ``Rational`` is Python's
arbitrary-precision ``fractions.Fraction``: always in lowest terms, positive
denominator, and arithmetic can never overflow.
"""

from __future__ import annotations

from fractions import Fraction as Rational
from math import gcd, isqrt, lcm

__all__ = ["Rational", "gcd", "isqrt", "lcm", "mod_reduce", "theta", "theta_bar"]


def mod_reduce(i, m):
    """The representative of i (mod m) in [0, m).

    Always nonnegative, also for negative i.  Every Spin^c index that
    crosses a module boundary goes through here, so index juggling never
    produces a negative residue.
    """
    if m <= 0:
        raise ValueError("modulus must be positive, got m=%d" % m)
    return i % m


def theta(n):
    """The reduction of n modulo 2, as an element of {0, 1}."""
    return n & 1


def theta_bar(n):
    """1 - theta(n), so theta(n) + theta_bar(n) = 1 for every integer n."""
    return 1 - (n & 1)
