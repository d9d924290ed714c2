from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from conftest import mp, rel
from hypothesis import given, settings
from hypothesis import strategies as st

from dds import series
from dds.errors import CommonDiscontinuityError, DomainError, PoleError
from dds.precision import HiPrecValue
from dds.series import FLINT_HILLS, SeriesSpec, partial_sum


def _mp_flint(n_lo, n_hi):
    return mpmath.fsum(1 / (mpmath.sin(n) ** 2 * mpmath.mpf(n) ** 3) for n in range(n_lo, n_hi + 1))


@pytest.fixture(scope="module")
def flint_1000():
    with mpmath.workdps(40):
        return _mp_flint(1, 1000)


def test_terms_match_mpmath():
    n = np.array([1, 2, 3, 22, 355, 103993])
    th, tl, _ = series.terms(FLINT_HILLS, n)
    for k, h, l in zip(n, th, tl):
        assert rel(HiPrecValue(h, l), 1 / (mpmath.sin(int(k)) ** 2 * mpmath.mpf(int(k)) ** 3)) < 1e-29


def test_partial_sum_extended(flint_1000):
    rep = partial_sum(FLINT_HILLS, 1, 1000)
    assert rel(rep.value, flint_1000) < 1e-28
    assert rep.n_terms == 1000
    assert rep.error_bound < 1e-25


def test_partial_sum_fast_close_to_extended(flint_1000):
    rep = partial_sum(FLINT_HILLS, 1, 1000, precision="fast")
    assert rel(rep.value, flint_1000) < 1e-11


def test_parallel_blocks_reproduce_sequential():
    seq = partial_sum(FLINT_HILLS, 1, 400_000).value
    par = partial_sum(FLINT_HILLS, 1, 400_000, workers=4).value
    assert abs(float(par - seq)) <= 1e-20 * float(seq)


def test_spikes_are_running_records():
    rep = partial_sum(SeriesSpec("csc", 1.0, 0.0), 1, 400)
    assert [n for n, _ in rep.spikes] == [1, 3, 22, 333, 355]
    assert rep.max_term_index == 355


def test_cot_and_cookson_hills():
    cot = partial_sum(SeriesSpec("cot", 2.0, 3.0), 1, 1).value
    assert rel(cot, mpmath.cot(1) ** 2) < 1e-30
    ch = partial_sum(series.COOKSON_HILLS, 1, 1000).value
    with mpmath.workdps(40):
        ref = mpmath.fsum(1 / (mpmath.cos(n) ** 2 * mpmath.mpf(n) ** 3) for n in range(1, 1001))
    assert rel(ch, ref) < 1e-28


def test_rational_phase_pole():
    with pytest.raises(PoleError) as info:
        partial_sum(SeriesSpec("csc", 2.0, 3.0, phase_pi=Fraction(1, 3)), 1, 10)
    assert info.value.index == 3
    with pytest.raises(PoleError):
        partial_sum(SeriesSpec("sec", 2.0, 3.0, phase_pi=Fraction(1, 2)), 1, 5)


def test_rational_phase_values():
    spec = SeriesSpec("csc", 2.0, 2.0, phase_pi=Fraction(1, 3))
    v = partial_sum(spec, 1, 2).value
    ref = 1 / mpmath.sin(mpmath.pi / 3) ** 2 + 1 / (mpmath.sin(2 * mpmath.pi / 3) ** 2 * 4)
    assert rel(v, ref) < 1e-30


def test_odd_power_keeps_sign():
    spec = SeriesSpec("csc", 1.0, 2.0)
    v = partial_sum(spec, 1, 50).value
    with mpmath.workdps(40):
        ref = mpmath.fsum(1 / (mpmath.sin(n) * n**2) for n in range(1, 51))
    assert rel(v, ref) < 1e-28


def test_series_spec_validation():
    with pytest.raises(DomainError):
        SeriesSpec("tan")
    with pytest.raises(DomainError):
        SeriesSpec("one", 0.0, 1.0)
    with pytest.raises(DomainError):
        SeriesSpec("csc", 2.0, 3.0, phase=-1.0)
    with pytest.raises(DomainError):
        partial_sum(FLINT_HILLS, 5, 4)


def test_weights():
    w = series.PeriodicWeight((1, 0, -1, 0))
    vals, _ = w.values(np.arange(1, 9))
    assert list(vals) == [1, 0, -1, 0, 1, 0, -1, 0]
    v = partial_sum(SeriesSpec("one", 0.0, 2.0, weight=series.ExpWeight(-0.5)), 1, 60).value
    with mpmath.workdps(40):
        ref = mpmath.fsum(mpmath.exp(-0.5 * n) / n**2 for n in range(1, 61))
    assert rel(v, ref) < 1e-29


def test_character_series():
    v = series.character_series((1, 0, -1, 0), 1.5, 2000)
    with mpmath.workdps(40):
        ref = mpmath.fsum((-1) ** k / mpmath.mpf(2 * k + 1) ** 1.5 for k in range(1000))
    assert rel(v, ref) < 1e-28


def test_lambda_paths_agree():
    lam_b, resid = series.lambda_bessel(10001, with_residue=True)
    lam_e = series.lambda_elementary(10001)
    assert rel(lam_b, lam_e) < 1e-12
    assert resid < 1e-12
    assert abs(float(lam_b) - 78.1160806386) < 1e-4


def test_lambda_against_mpmath():
    with mpmath.workdps(40):
        c = mpmath.pi / (2 * mpmath.sqrt(3))
        ref = c * mpmath.fsum((3 / mpmath.sin(n) ** 2 - 4) / mpmath.mpf(n) ** 3 for n in range(1, 2001))
    assert rel(series.lambda_bessel(2001), ref) < 1e-28


def test_lambda_small_sigma():
    assert float(series.lambda_bessel(1)) == 0.0
    with pytest.raises(DomainError):
        series.lambda_elementary(0)


@pytest.mark.parametrize("sigma", [2, 10, 100, 1000, 10001])
def test_psi_reconstruction(sigma):
    direct = partial_sum(FLINT_HILLS, 1, sigma - 1).value
    assert rel(series.psi_reconstruction(sigma), direct) < 1e-9


def test_lambda_slope():
    for t in np.linspace(1, 10, 10):
        s = series.lambda_slope(float(t))
        assert float(s) < 0
        assert rel(s, -mpmath.pi / mpmath.sqrt(3) * mpmath.psi(3, t)) < 1e-29
    assert abs(float(series.lambda_slope(10001))) <= 1e-10


def test_theta_tail_domain():
    with pytest.raises(DomainError):
        series.theta_tail(1, 10)
    with pytest.raises(DomainError):
        series.theta_tail(10, 5)


@pytest.mark.parametrize("x", [1.0, 2.5, 7.0])
def test_recursion_decompose(x):
    target = 1 / mpmath.sin(x) ** 2
    for m in range(1, 21):
        d = series.recursion_decompose(x, m)
        assert rel(d.total, target) < 1e-13
        assert rel(d.cos_sum + d.remainder, d.total) < 1e-30


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 50.0), st.integers(1, 30))
def test_recursion_property(x, m):
    if abs(math.sin(x)) < 1e-6:
        return
    d = series.recursion_decompose(x, m)
    assert rel(d.total, 1 / mpmath.sin(x) ** 2) < 1e-13


def test_recursion_pole():
    with pytest.raises(PoleError):
        series.recursion_decompose(HiPrecValue(*series.PI) * 2, 1)
    with pytest.raises(DomainError):
        series.recursion_decompose(1.0, 0)


def test_split_sums():
    n, m, L = 355, 20, 8
    s = series.split_S1_S2(n, m, L)
    d = series.recursion_decompose(n, m)
    assert rel((s.s1 + s.s2) * n**3, d.cos_sum * 4) < 1e-28
    # S2 lies between its cos^2 = 1 value and that value over the smallest cos^2
    assert s.s2_geometric <= float(s.s2) <= s.s2_geometric / math.cos(n / 2.0 ** (L + 2)) ** 2
    with pytest.raises(DomainError):
        series.split_S1_S2(355, 5, 4)


def test_abel_summation():
    lhs, rhs = series.abel_check(FLINT_HILLS, 1)
    assert lhs == partial_sum(FLINT_HILLS, 1, 1).value
    assert rel(rhs, lhs) < 1e-30
    lhs, rhs = series.abel_check(FLINT_HILLS, 1000)
    assert rel(rhs, lhs) < 1e-18
    assert float(series.partial_sum_function(FLINT_HILLS, 0.0)) == 0.0
    assert float(series.partial_sum_function(FLINT_HILLS, 0.99)) == 0.0


def test_stieltjes_floor_sum():
    v = series.stieltjes_floor_sum(FLINT_HILLS, 1.0, 10.5)
    assert v == partial_sum(FLINT_HILLS, 2, 10).value
    assert float(series.stieltjes_floor_sum(FLINT_HILLS, 1.0, 1.0)) == 0.0
    assert series.stieltjes_floor_sum(FLINT_HILLS, 0.5 + 0.5, 1000) == partial_sum(FLINT_HILLS, 2, 1000).value


def test_stieltjes_common_discontinuity():
    spec = SeriesSpec("sec", 2.0, 3.0, phase_pi=Fraction(1, 2))
    with pytest.raises(CommonDiscontinuityError):
        series.stieltjes_floor_sum(spec, 1.0, 4.0)


def test_cot_sec_identity():
    csc, cot, cube = series.cot_sec_identity_check(10_000)
    assert rel(csc - cot, cube) < 1e-18
    assert rel(cube, mpmath.zeta(3) + mpmath.psi(2, 10001) / 2) < 1e-29
