from __future__ import annotations

import mpmath
import numpy as np
import pytest
from conftest import mp, rel

from dds import bounds, series, special
from dds.errors import DomainError, UnsupportedParameterError
from dds.precision.summation import sum_arrays

GRID_P = (1.5, 2.0, 4.0, 8.0, 64.0)
GRID_N = (1, 10, 1000)


@pytest.mark.parametrize("p", GRID_P)
@pytest.mark.parametrize("N", GRID_N)
def test_holder_grid(p, N):
    rep = bounds.holder_truncated(p, N)
    assert rep.satisfied
    assert np.isfinite(float(rep.rhs))


def test_holder_single_term():
    rep = bounds.holder_truncated(2.0, 1)
    csc2 = 1 / mpmath.sin(1) ** 2
    assert rel(rep.lhs, csc2) < 1e-30
    assert rel(rep.rhs, mpmath.sqrt(mpmath.zeta(2)) * csc2) < 1e-28


def test_holder_against_mpmath():
    p, N = 4.0, 200
    q = p / (p - 1)
    with mpmath.workdps(40):
        s = mpmath.fsum((1 / (mpmath.sin(k) ** 2 * k**2)) ** q for k in range(1, N + 1))
        ref = mpmath.zeta(p) ** (1 / mpmath.mpf(p)) * s ** (1 / mpmath.mpf(q))
    assert rel(bounds.holder_truncated(p, N).rhs, ref) < 1e-27


def test_holder_large_p_tends_to_l1_norm():
    rep = bounds.holder_truncated(64.0, 1000)
    s = sum_arrays(*series.terms(series.SeriesSpec("csc", 2.0, 2.0), np.arange(1, 1001))[:2])
    assert abs(float(rep.rhs) / float(s) - 1) < 0.01


def test_holder_spike_power_stays_finite():
    # p near 1 makes q about 1e4, so (csc^2(355)/355^2)^q only exists in log space
    rep = bounds.holder_truncated(1.0001, 1000)
    assert np.isfinite(float(rep.rhs)) and rep.satisfied


def test_holder_domain():
    with pytest.raises(DomainError):
        bounds.holder_truncated(1.0, 10)
    with pytest.raises(DomainError):
        bounds.holder_truncated(2.0, 0)


@pytest.mark.parametrize("p", [2.0, 4.0, 8.0])
def test_fermi_weighted_at_zero_matches_holder(p):
    h = bounds.holder_truncated(p, 1000)
    f = bounds.fermi_weighted_holder(p, 0.0, 1000)
    scale = (mp(special.fermi_dirac_F(p, 0.0)) / mpmath.zeta(p)) ** (1 / mpmath.mpf(p))
    assert rel(f.rhs, mp(h.rhs) * scale) < 1e-27
    assert f.lhs == h.lhs
    assert f.satisfied


def test_fermi_weighted_negative_x():
    rep = bounds.fermi_weighted_holder(2.0, -1.0, 500)
    assert rep.satisfied
    with mpmath.workdps(40):
        lhs = mpmath.fsum(mpmath.exp(-k / 2) / (mpmath.sin(k) ** 2 * k**3) for k in range(1, 501))
    assert rel(rep.lhs, lhs) < 1e-28


def test_fermi_weighted_single_term_prefactor_below_one():
    # F_2(0) = (3/4) zeta(3) < 1, so one term cannot satisfy the weighted bound
    rep = bounds.fermi_weighted_holder(2.0, 0.0, 1)
    assert float(special.fermi_dirac_F(2.0, 0.0)) < 1
    assert rel(rep.rhs, mpmath.sqrt(0.75 * mpmath.zeta(3)) / mpmath.sin(1) ** 2) < 1e-28
    assert not rep.satisfied


def test_delta_from_c1():
    d = bounds.delta_from_c1(78.1160806386)
    with mpmath.workdps(40):
        ref = mpmath.sqrt((mpmath.pi**2 / 6) / (4 * mpmath.zeta(3) / 3 + 2 * mpmath.sqrt(3) / (3 * mpmath.pi) * mpmath.mpf(78.1160806386)))
    assert rel(d, ref) < 1e-29
    assert abs(float(d) - 0.23294263) < 1e-6
    assert abs(float(d * d) - 0.054262268) < 1e-7
    with pytest.raises(DomainError):
        bounds.delta_from_c1(-100.0)


def test_double_sided_components():
    rep = bounds.double_sided_bounds(10001)
    c = rep.components
    s = mpmath.mpf(10001)
    assert rel(c["zeta_term"], 4 * mpmath.zeta(3) / 3) < 1e-30
    assert rel(c["middle_upper"], (s + 12) / (18 * s**4 * (s + 1))) < 1e-30
    assert rel(c["middle_lower"], (s**2 + 12) / (18 * s**4 * (s + 1) ** 2)) < 1e-30
    assert rel(c["psi1_squared_term"], -2 * mpmath.psi(1, s) ** 2 / 3) < 1e-29
    assert rel(c["lambda_term"], 2 * mpmath.sqrt(3) / (3 * mpmath.pi) * mp(c["lambda"])) < 1e-30
    assert rep.lower < rep.upper
    assert rep.inside


def test_double_sided_domain():
    with pytest.raises(DomainError):
        bounds.double_sided_bounds(1)


@pytest.mark.parametrize("x", [0.25, 0.5, 1.0, 2.0, 100.0, 10001.0])
def test_monotonic_pq(x):
    rep = bounds.monotonic_PQ_check(x)
    assert rep.satisfied
    ref = mpmath.psi(1, x) ** 2 + mpmath.psi(2, x)
    assert rel(rep.value, ref) < 1e-20


def test_monotonic_pq_at_one():
    rep = bounds.monotonic_PQ_check(1.0)
    assert float(rep.lower) == pytest.approx(13 / 48) and float(rep.upper) == pytest.approx(13 / 24)
    assert rel(rep.value, (mpmath.pi**2 / 6) ** 2 - 2 * mpmath.zeta(3)) < 1e-29


def test_monotonic_pq_unsupported_k():
    with pytest.raises(UnsupportedParameterError):
        bounds.monotonic_PQ_check(1.0, k=2.0)
    with pytest.raises(DomainError):
        bounds.monotonic_PQ_check(0.0)
