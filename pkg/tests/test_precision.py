from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np
import pytest
from conftest import mp, rel
from hypothesis import given, settings
from hypothesis import strategies as st

from dds.errors import DomainError, RangeError
from dds.precision import (
    BERNOULLI,
    MAX_N,
    HiPrecValue,
    bernoulli_numbers,
    compensated_sum,
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
    sum_arrays,
)
from dds.precision.constants import PI_DIGITS


def test_pi_constant_matches_mpmath():
    assert abs(mp(pi()) - mpmath.pi) < mpmath.mpf(10) ** -31
    assert mpmath.mpf(PI_DIGITS) - mpmath.pi < mpmath.mpf(10) ** -98


@pytest.mark.parametrize("n", [1, 2, 3, 22, 333, 355, 52163, 103993, 104348, 10**6 + 3, 999_999_937, MAX_N])
def test_sin_int_large_arguments(n):
    assert abs(mp(sin_int(n)) - mpmath.sin(n)) < mpmath.mpf(10) ** -30


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=MAX_N))
def test_sin_int_property(n):
    assert abs(mp(sin_int(n)) - mpmath.sin(n)) < mpmath.mpf(10) ** -30


def test_reduction_of_355_is_near_pi_multiple():
    r = reduce_mod_pi(355)
    assert r.k == 113
    assert abs(float(r.r) - 3.0144353e-5) < 1e-12
    assert abs(mp(r.r) - (355 - 113 * mpmath.pi)) < mpmath.mpf(10) ** -30


def test_reduction_domain():
    with pytest.raises(DomainError):
        reduce_mod_pi(-1)
    with pytest.raises(RangeError) as info:
        reduce_mod_pi(MAX_N + 1)
    assert info.value.maximum == MAX_N


@pytest.mark.parametrize("x", [0.5, 1.0, 2.5, 7.0, 100.25, -3.0])
def test_sin_cos_real(x):
    assert abs(mp(sin(x)) - mpmath.sin(x)) < mpmath.mpf(10) ** -30
    assert abs(mp(cos(x)) - mpmath.cos(x)) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("x", [-50.0, -1.0, 1e-8, 0.5, 1.0, 10.0, 300.0])
def test_exp_log(x):
    assert rel(exp(x), mpmath.exp(x)) < 1e-30
    if x > 0:
        assert abs(mp(log(x)) - mpmath.log(x)) < mpmath.mpf(10) ** -31 * max(1, abs(mpmath.log(x)))


def test_log_domain():
    with pytest.raises(DomainError):
        log(0.0)


@pytest.mark.parametrize("x", [0.1, 1.0, 3.0, 20.0])
def test_sinh_cosh(x):
    s, c = sinh_cosh(x)
    assert rel(s, mpmath.sinh(x)) < 1e-30
    assert rel(c, mpmath.cosh(x)) < 1e-30


def test_power_and_sqrt():
    assert rel(power(2.0, 0.5), mpmath.sqrt(2)) < 1e-30
    assert rel(power(10.0, -3.5), mpmath.mpf(10) ** -3.5) < 1e-30
    assert rel(dd_sqrt(3.0), mpmath.sqrt(3)) < 1e-31


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e12, 1e12), st.floats(-1e12, 1e12))
def test_two_double_sum_is_exact(a, b):
    s = HiPrecValue(a) + HiPrecValue(b)
    assert s.to_fraction() == Fraction(a) + Fraction(b)


_normal = st.floats(-1e6, 1e6).filter(lambda v: v == 0.0 or abs(v) > 1e-100)


@settings(max_examples=200, deadline=None)
@given(_normal, _normal)
def test_two_double_product_is_exact(a, b):
    # exact only while the low part of the product stays out of the subnormal range
    assert (HiPrecValue(a) * HiPrecValue(b)).to_fraction() == Fraction(a) * Fraction(b)


def test_division_matches_fraction():
    q = HiPrecValue(1.0) / 3
    assert abs(q.to_fraction() - Fraction(1, 3)) < Fraction(1, 10**31)


def test_compensated_sum_recovers_cancellation():
    assert float(compensated_sum([1e16, 1.0, -1e16])) == 1.0
    assert float(sum_arrays(np.array([1e16, 1.0, -1e16]))) == 1.0


def test_chunked_sum_reproduces_sequential():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(200_000) * 10.0 ** rng.integers(-8, 8, 200_000)
    seq = compensated_sum(x)
    par = compensated_sum(x, chunks=8)
    exact = sum((Fraction(v) for v in x[:2000]), Fraction(0))
    assert abs(float(par - seq)) <= 1e-20 * abs(float(seq))
    assert abs(compensated_sum(x[:2000]).to_fraction() - exact) <= abs(exact) * Fraction(1, 10**29)


def test_bernoulli_numbers():
    b = bernoulli_numbers(30)
    for k in range(30):
        assert abs(mpmath.mpf(b[k].numerator) / b[k].denominator - mpmath.bernoulli(k)) < mpmath.mpf(10) ** -40 * max(1, abs(mpmath.bernoulli(k)))
    assert BERNOULLI[1] == Fraction(-1, 2)
    assert BERNOULLI[2] == Fraction(1, 6)
    assert BERNOULLI[12] == Fraction(-691, 2730)
