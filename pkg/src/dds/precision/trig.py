"""Correctly reduced trigonometry for large integer arguments."""

from __future__ import annotations

import operator
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, RangeError
from . import _dd, elementary
from .constants import HALF_PI, PI
from .hiprec import HiPrecValue

MAX_N = 10**9


@dataclass(frozen=True)
class ReducedAngle:
    """``source_n = k * pi + r`` with ``r`` in (-pi/2, pi/2]."""

    k: int
    r: HiPrecValue
    source_n: int


def _check_n(n) -> int:
    n = operator.index(n)
    if n < 0:
        raise DomainError(f"expected a non-negative integer, got {n}")
    if n > MAX_N:
        raise RangeError(f"argument {n} exceeds the supported maximum {MAX_N}", maximum=MAX_N)
    return n


def reduce_mod_pi(n: int) -> ReducedAngle:
    n = _check_n(n)
    j, rh, rl = elementary.reduce(np.array([float(n)]), np.zeros(1), "pi")
    k = int(j[0])
    r = HiPrecValue(float(rh[0]), float(rl[0]))
    pi = HiPrecValue(*PI)
    half = HiPrecValue(*HALF_PI)
    # tie convention r in (-pi/2, pi/2]
    if r > half:
        k, r = k + 1, r - pi
    elif r <= -half:
        k, r = k - 1, r + pi
    return ReducedAngle(k=k, r=r, source_n=n)


def sin_int(n: int) -> HiPrecValue:
    n = _check_n(n)
    if n < 1:
        raise DomainError("sin_int expects n >= 1")
    sh, sl, _, _ = elementary.sin_cos(np.array([float(n)]))
    return HiPrecValue(float(sh[0]), float(sl[0]))


def sin_cos_int_array(n: np.ndarray):
    """Component arrays of sin(n), cos(n) for an integer array ``n``."""
    n = np.asarray(n)
    if n.size and (n.min() < 0 or n.max() > MAX_N):
        raise RangeError(f"integer arguments must lie in [0, {MAX_N}]", maximum=MAX_N)
    return elementary.sin_cos(n.astype(float))


def _scalar(fn, x: HiPrecValue):
    x = HiPrecValue.of(x)
    out = fn(np.array([x.hi]), np.array([x.lo]))
    return out


def sin(x) -> HiPrecValue:
    sh, sl, _, _ = _scalar(elementary.sin_cos, x)
    return HiPrecValue(float(sh[0]), float(sl[0]))


def cos(x) -> HiPrecValue:
    _, _, ch, cl = _scalar(elementary.sin_cos, x)
    return HiPrecValue(float(ch[0]), float(cl[0]))


def exp(x) -> HiPrecValue:
    h, l = _scalar(elementary.exp, x)
    return HiPrecValue(float(h[0]), float(l[0]))


def log(x) -> HiPrecValue:
    x = HiPrecValue.of(x)
    if x.hi <= 0.0:
        raise DomainError("log of a non-positive value")
    h, l = _scalar(elementary.log, x)
    return HiPrecValue(float(h[0]), float(l[0]))


def power(x, s: float) -> HiPrecValue:
    """x**s for x > 0; integral ``s`` uses exact repeated multiplication."""
    x = HiPrecValue.of(x)
    if float(s).is_integer():
        return x ** int(s)
    return exp(log(x) * s)


def sinh_cosh(x) -> tuple[HiPrecValue, HiPrecValue]:
    sh, sl, ch, cl = _scalar(elementary.sinh_cosh, x)
    return HiPrecValue(float(sh[0]), float(sl[0])), HiPrecValue(float(ch[0]), float(cl[0]))


def pi() -> HiPrecValue:
    return HiPrecValue(*PI)


def dd_sqrt(x) -> HiPrecValue:
    x = HiPrecValue.of(x)
    return HiPrecValue(*_dd.sqrt_scalar(x.hi, x.lo))
