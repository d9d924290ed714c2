"""Double-double arithmetic, range reduction and compensated summation."""

from .constants import BERNOULLI, PI_DIGITS, bernoulli_numbers
from .hiprec import ONE, ZERO, HiPrecValue
from .summation import compensated_sum, sum_arrays
from .trig import (
    MAX_N,
    ReducedAngle,
    cos,
    dd_sqrt,
    exp,
    log,
    pi,
    power,
    reduce_mod_pi,
    sin,
    sin_int,
    sinh_cosh,
)

__all__ = [
    "BERNOULLI",
    "MAX_N",
    "ONE",
    "PI_DIGITS",
    "ZERO",
    "HiPrecValue",
    "ReducedAngle",
    "bernoulli_numbers",
    "compensated_sum",
    "cos",
    "dd_sqrt",
    "exp",
    "log",
    "pi",
    "power",
    "reduce_mod_pi",
    "sin",
    "sin_int",
    "sinh_cosh",
    "sum_arrays",
]
