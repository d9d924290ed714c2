"""Error-free transformations and double-double kernels.

Every kernel takes and returns (hi, lo) component pairs and uses only the
arithmetic operators, so the same code runs on Python floats (scalar path)
and on float64 ndarrays (vectorised series path).  Algorithms follow the
classic Dekker / Knuth / Bailey QD formulations.
"""

from __future__ import annotations

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    e = b - (s - a)
    return s, e


def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def add_d(ah, al, b):
    s, e = two_sum(ah, b)
    e = e + al
    return quick_two_sum(s, e)


def sub(ah, al, bh, bl):
    return add(ah, al, -bh, -bl)


def mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


def sqr(ah, al):
    p, e = two_prod(ah, ah)
    e = e + 2.0 * ah * al
    return quick_two_sum(p, e)


def div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = mul_d(bh, bl, q1)
    rh, rl = sub(ah, al, ph, pl)
    q2 = rh / bh
    ph, pl = mul_d(bh, bl, q2)
    rh, rl = sub(rh, rl, ph, pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return add_d(q1, q2, q3)


def recip(ah, al):
    return div(1.0, 0.0, ah, al)


def sqrt_scalar(ah: float, al: float) -> tuple[float, float]:
    if ah == 0.0:
        return 0.0, 0.0
    if ah < 0.0:
        raise ValueError("square root of a negative value")
    x = 1.0 / math.sqrt(ah)
    ax = ah * x
    dh, _ = sub(ah, al, *sqr(ax, 0.0))
    return two_sum(ax, dh * (x * 0.5))


def sqrt_array(ah, al):
    ah = np.asarray(ah, dtype=float)
    al = np.asarray(al, dtype=float)
    safe = np.where(ah > 0.0, ah, 1.0)
    x = 1.0 / np.sqrt(safe)
    ax = safe * x
    dh, _ = sub(safe, np.where(ah > 0.0, al, 0.0), *sqr(ax, 0.0))
    rh, rl = two_sum(ax, dh * (x * 0.5))
    zero = ah == 0.0
    return np.where(zero, 0.0, rh), np.where(zero, 0.0, rl)


def ldexp(ah, al, k):
    """Scale by 2**k (exact barring under/overflow)."""
    if isinstance(ah, np.ndarray) or isinstance(k, np.ndarray):
        return np.ldexp(ah, k), np.ldexp(al, k)
    return math.ldexp(ah, k), math.ldexp(al, k)
