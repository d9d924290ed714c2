"""Exact constants for the extended-precision substrate.

pi is carried as a 100-decimal literal.  Everything else here is derived
from it (or from exact rationals / correctly rounded ``decimal`` values) at
import time, so the double-double constants are the correctly rounded
two-term expansions of the true values.

Range-reduction chunks
----------------------
``PI_CHUNKS`` and ``HALF_PI_CHUNKS`` hold nine floats each.  Every chunk has
at most 23 significant bits, so ``k * chunk`` is exact for any integer
``k < 2**30``; together the chunks reproduce the constant to more than 200
bits (over 60 decimal digits).  Reduction subtracts ``k * chunk`` one chunk at
a time; the first subtraction is exact by Sterbenz' lemma and the second is
captured exactly by ``two_sum``, so the only rounding happens after the
cancellation has already occurred.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction

PI_DIGITS = (
    "3.14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
)

PI_FRACTION = Fraction(PI_DIGITS)

CHUNK_BITS = 23
N_CHUNKS = 9


def dd_from_fraction(x: Fraction) -> tuple[float, float]:
    hi = float(x)
    lo = float(x - Fraction(hi))
    return hi, lo


def _chunks(value: Fraction, bits: int = CHUNK_BITS, count: int = N_CHUNKS) -> tuple[float, ...]:
    out = []
    rem = value
    for _ in range(count):
        e = math.floor(math.log2(rem.numerator) - math.log2(rem.denominator))
        # guard the float estimate of the exponent
        while Fraction(2) ** e > rem:
            e -= 1
        while Fraction(2) ** (e + 1) <= rem:
            e += 1
        scale = Fraction(2) ** (bits - 1 - e)
        c = Fraction(math.floor(rem * scale)) / scale
        out.append(float(c))
        rem -= c
    return tuple(out)


def _decimal_dd(fn) -> tuple[float, float]:
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        return dd_from_fraction(Fraction(fn()))


PI_CHUNKS = _chunks(PI_FRACTION)
HALF_PI_CHUNKS = _chunks(PI_FRACTION / 2)

PI = dd_from_fraction(PI_FRACTION)
HALF_PI = dd_from_fraction(PI_FRACTION / 2)
INV_PI = 1.0 / PI[0]
TWO_OVER_PI = 2.0 / PI[0]

LN2 = _decimal_dd(lambda: decimal.Decimal(2).ln())
SQRT3 = _decimal_dd(lambda: decimal.Decimal(3).sqrt())
SQRT2 = _decimal_dd(lambda: decimal.Decimal(2).sqrt())


def bernoulli_numbers(count: int) -> list[Fraction]:
    """B_0 .. B_{count-1} as exact fractions (B_1 = -1/2 convention)."""
    b = [Fraction(0)] * count
    b[0] = Fraction(1)
    for m in range(1, count):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b[m] = -acc / (m + 1)
    return b


BERNOULLI = bernoulli_numbers(48)
