"""Vectorised double-double elementary functions.

All functions here take and return component arrays ``(hi, lo)``; scalar
wrappers returning :class:`HiPrecValue` live in :mod:`dds.precision.trig`
and the package namespace.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..errors import RangeError
from . import _dd
from .constants import HALF_PI_CHUNKS, LN2, PI_CHUNKS, TWO_OVER_PI, INV_PI, dd_from_fraction

# |x| beyond this would need a multiple >= 2**30 of pi/2, breaking exact k*chunk products
MAX_REDUCIBLE = 1.6e9

_TAYLOR_TERMS = 15
_SIN_COEF = [dd_from_fraction(Fraction((-1) ** k, math.factorial(2 * k + 1))) for k in range(_TAYLOR_TERMS)]
_COS_COEF = [dd_from_fraction(Fraction((-1) ** k, math.factorial(2 * k))) for k in range(_TAYLOR_TERMS)]
_EXPM1_COEF = [dd_from_fraction(Fraction(1, math.factorial(k))) for k in range(1, 12)]
_SINH_COEF = [dd_from_fraction(Fraction(1, math.factorial(2 * k + 1))) for k in range(_TAYLOR_TERMS)]


def as_pair(hi, lo=None):
    hi = np.asarray(hi, dtype=float)
    lo = np.zeros_like(hi) if lo is None else np.asarray(lo, dtype=float)
    return hi, lo


def _horner(yh, yl, coefs):
    ah = np.full_like(yh, coefs[-1][0])
    al = np.full_like(yh, coefs[-1][1])
    for ch, cl in reversed(coefs[:-1]):
        ah, al = _dd.mul(ah, al, yh, yl)
        ah, al = _dd.add(ah, al, ch, cl)
    return ah, al


def reduce(xh, xl, period: str = "half_pi"):
    """Return ``(j, rh, rl)`` with ``x = j * P + r`` and ``j = rint(x / P)``.

    ``P`` is pi/2 or pi.  ``j`` comes back as a float array of integers.
    """
    xh, xl = as_pair(xh, xl)
    if np.any(np.abs(xh) > MAX_REDUCIBLE):
        raise RangeError(
            f"argument magnitude exceeds the supported maximum {MAX_REDUCIBLE:.6g}",
            maximum=MAX_REDUCIBLE,
        )
    chunks, inv = (HALF_PI_CHUNKS, TWO_OVER_PI) if period == "half_pi" else (PI_CHUNKS, INV_PI)
    j = np.rint(xh * inv)
    rh = xh - j * chunks[0]  # exact (Sterbenz)
    rh, rl = _dd.two_sum(rh, xl)
    for c in chunks[1:]:
        rh, rl = _dd.add_d(rh, rl, -(j * c))
    return j, rh, rl


def sin_cos_small(rh, rl):
    """Taylor sin and cos for |r| <= ~0.8."""
    yh, yl = _dd.sqr(rh, rl)
    sh, sl = _horner(yh, yl, _SIN_COEF)
    sh, sl = _dd.mul(sh, sl, rh, rl)
    ch, cl = _horner(yh, yl, _COS_COEF)
    return sh, sl, ch, cl


def sin_cos(xh, xl=None):
    """sin(x) and cos(x) for double-double arrays ``x``."""
    xh, xl = as_pair(xh, xl)
    j, rh, rl = reduce(xh, xl, "half_pi")
    sh, sl, ch, cl = sin_cos_small(rh, rl)
    q = np.mod(j, 4.0)
    sin_h = np.select([q == 0, q == 1, q == 2], [sh, ch, -sh], -ch)
    sin_l = np.select([q == 0, q == 1, q == 2], [sl, cl, -sl], -cl)
    cos_h = np.select([q == 0, q == 1, q == 2], [ch, -sh, -ch], sh)
    cos_l = np.select([q == 0, q == 1, q == 2], [cl, -sl, -cl], sl)
    return sin_h, sin_l, cos_h, cos_l


def exp(xh, xl=None):
    xh, xl = as_pair(xh, xl)
    k = np.rint(xh / LN2[0])
    th, tl = _dd.mul_d(LN2[0], LN2[1], k)
    rh, rl = _dd.sub(xh, xl, th, tl)
    rh, rl = np.ldexp(rh, -10), np.ldexp(rl, -10)
    # expm1 on the scaled argument, then expm1(2s) = 2 p + p**2 ten times
    ph, pl = _horner(rh, rl, _EXPM1_COEF)
    ph, pl = _dd.mul(ph, pl, rh, rl)
    for _ in range(10):
        qh, ql = _dd.sqr(ph, pl)
        ph, pl = _dd.add(2.0 * ph, 2.0 * pl, qh, ql)
    eh, el = _dd.add_d(ph, pl, 1.0)
    ki = k.astype(np.int64)
    return np.ldexp(eh, ki), np.ldexp(el, ki)


def log(xh, xl=None):
    """Natural log for positive arrays: one Newton step on exp from the float seed."""
    xh, xl = as_pair(xh, xl)
    if np.any(xh <= 0.0):
        raise ValueError("log of a non-positive value")
    y = np.log(xh)
    eh, el = exp(-y, np.zeros_like(y))
    th, tl = _dd.mul(xh, xl, eh, el)
    th, tl = _dd.add_d(th, tl, -1.0)
    return _dd.add_d(th, tl, y)


def pow_real(xh, xl, s: float):
    """x**s for positive x and real s via exp(s log x)."""
    lh, ll = log(xh, xl)
    lh, ll = _dd.mul_d(lh, ll, float(s))
    return exp(lh, ll)


def sinh_cosh(xh, xl=None):
    xh, xl = as_pair(xh, xl)
    small = np.abs(xh) < 0.5
    # Taylor for small |x| keeps sinh's relative accuracy near zero
    yh, yl = _dd.sqr(xh, xl)
    sh_s, sl_s = _horner(yh, yl, _SINH_COEF)
    sh_s, sl_s = _dd.mul(sh_s, sl_s, xh, xl)
    big_x = np.where(small, 0.0, xh)
    big_l = np.where(small, 0.0, xl)
    eh, el = exp(big_x, big_l)
    ih, il = _dd.recip(eh, el)
    dh, dl = _dd.sub(eh, el, ih, il)
    ch, cl = _dd.add(eh, el, ih, il)
    sh = np.where(small, sh_s, 0.5 * dh)
    sl = np.where(small, sl_s, 0.5 * dl)
    # cosh = sqrt(1 + sinh^2) for the small branch
    qh, ql = _dd.sqr(sh_s, sl_s)
    qh, ql = _dd.add_d(qh, ql, 1.0)
    qh, ql = _dd.sqrt_array(qh, ql)
    ch = np.where(small, qh, 0.5 * ch)
    cl = np.where(small, ql, 0.5 * cl)
    return sh, sl, ch, cl


def powi(xh, xl, k: int):
    """x**k for a non-negative integer ``k`` by binary powering."""
    xh, xl = as_pair(xh, xl)
    rh, rl = np.ones_like(xh), np.zeros_like(xh)
    bh, bl = xh, xl
    while k:
        if k & 1:
            rh, rl = _dd.mul(rh, rl, bh, bl)
        k >>= 1
        if k:
            bh, bl = _dd.sqr(bh, bl)
    return rh, rl


def inv_pow(xh, xl, s: float):
    """x**(-s) for positive x; exact powering when ``s`` is integral."""
    xh, xl = as_pair(xh, xl)
    s = float(s)
    if s.is_integer() and 0 <= s <= 64:
        ph, pl = powi(xh, xl, int(s))
        return _dd.recip(ph, pl)
    return pow_real(xh, xl, -s)
