"""Inequality chains around the Flint-Hills partial sums.

Every check returns a report rather than raising when an inequality fails;
callers decide what a failure means.  Power sums with large exponents are
evaluated in log space so spike terms such as csc^2(355)**q never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import special
from .errors import DomainError, UnsupportedParameterError
from .precision import _dd, elementary
from .precision.hiprec import HiPrecValue
from .precision.summation import sum_arrays
from .series import FLINT_HILLS, PSI_LAMBDA_COEF, SeriesSpec, lambda_bessel, psi_reconstruction, terms

REL_SLACK = 1e-12


@dataclass(frozen=True)
class HolderConjugates:
    p: float
    q: float

    @classmethod
    def from_p(cls, p: float) -> HolderConjugates:
        p = float(p)
        if not p > 1.0:
            raise DomainError(f"Hoelder exponent must exceed 1, got {p!r}")
        return cls(p, p / (p - 1.0))


@dataclass
class BoundReport:
    lhs: HiPrecValue
    rhs: HiPrecValue
    satisfied: bool
    margin: HiPrecValue
    params: dict = field(default_factory=dict)

    @classmethod
    def build(cls, lhs: HiPrecValue, rhs: HiPrecValue, **params) -> BoundReport:
        ok = float(lhs) <= float(rhs) + REL_SLACK * abs(float(rhs))
        return cls(lhs, rhs, ok, rhs - lhs, params)


def _log_power_sum(n_max: int, q: float) -> HiPrecValue:
    """log of sum_{k<=n_max} (csc^2(k)/k^2)**q, shifted by the largest term."""
    n = np.arange(1, n_max + 1)
    bh, bl, _ = terms(SeriesSpec("csc", 2.0, 2.0), n)
    lh, ll = elementary.log(bh, bl)
    lh, ll = _dd.mul_d(lh, ll, q)
    top = int(np.argmax(lh))
    mh, ml = lh[top], ll[top]
    eh, el = elementary.exp(*_dd.sub(lh, ll, np.full_like(lh, mh), np.full_like(ll, ml)))
    total = sum_arrays(eh, el)
    lt = elementary.log(np.array([total.hi]), np.array([total.lo]))
    return HiPrecValue(mh, ml) + HiPrecValue(float(lt[0][0]), float(lt[1][0]))


def _exp(x: HiPrecValue) -> HiPrecValue:
    h, l = elementary.exp(np.array([x.hi]), np.array([x.lo]))
    return HiPrecValue(float(h[0]), float(l[0]))


def _log(x: HiPrecValue) -> HiPrecValue:
    h, l = elementary.log(np.array([x.hi]), np.array([x.lo]))
    return HiPrecValue(float(h[0]), float(l[0]))


def _holder_rhs(prefactor: HiPrecValue, hc: HolderConjugates, N: int) -> HiPrecValue:
    log_rhs = _log(prefactor) / hc.p + _log_power_sum(N, hc.q) / hc.q
    return _exp(log_rhs)


def holder_truncated(p: float, N: int) -> BoundReport:
    """sum csc^2(k)/k^3 <= zeta(p)**(1/p) (sum (csc^2(k)/k^2)**q)**(1/q), k <= N."""
    if N < 1:
        raise DomainError("N must be >= 1")
    hc = HolderConjugates.from_p(p)
    n = np.arange(1, N + 1)
    lhs = sum_arrays(*terms(FLINT_HILLS, n)[:2])
    rhs = _holder_rhs(special.zeta(hc.p), hc, N)
    return BoundReport.build(lhs, rhs, p=hc.p, q=hc.q, N=N)


def fermi_weighted_holder(p: float, x: float, N: int) -> BoundReport:
    """sum e^(x k/p) csc^2(k)/k^3 against |F_p(x)|**(1/p) (sum (csc^2(k)/k^2)**q)**(1/q).

    This is not an instance of Hoelder's inequality (the exact prefactor
    would be Li_p(e^x)**(1/p)), so ``satisfied`` is an observation.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    hc = HolderConjugates.from_p(p)
    fp = abs(special.fermi_dirac_F(hc.p, x))
    n = np.arange(1, N + 1)
    th, tl, _ = terms(FLINT_HILLS, n)
    if x != 0.0:
        wh, wl = elementary.exp(*_dd.two_prod(n.astype(float), np.full(N, float(x) / hc.p)))
        th, tl = _dd.mul(th, tl, wh, wl)
    lhs = sum_arrays(th, tl)
    rhs = _holder_rhs(fp, hc, N)
    return BoundReport.build(lhs, rhs, p=hc.p, q=hc.q, x=float(x), N=N, F_p=fp)


def delta_from_c1(c1) -> HiPrecValue:
    """sqrt((pi^2/6) / ((4/3) zeta(3) + (2 sqrt 3/(3 pi)) c1))."""
    den = special.zeta(3) * 4 / 3 + PSI_LAMBDA_COEF * HiPrecValue.of(c1)
    if den.hi <= 0.0:
        raise DomainError("the denominator (4/3) zeta(3) + (2 sqrt 3/(3 pi)) c1 must be positive")
    return (special.zeta(2) / den).sqrt()


@dataclass
class DoubleSidedReport:
    sigma: int
    lower: HiPrecValue
    upper: HiPrecValue
    psi_value: HiPrecValue
    inside: bool
    components: dict


def double_sided_bounds(sigma: int) -> DoubleSidedReport:
    if sigma < 2:
        raise DomainError("sigma must be >= 2")
    s = HiPrecValue.from_int(sigma)
    s4 = s**4
    mid_upper = (s + 12) / (18 * s4 * (s + 1))
    mid_lower = (s * s + 12) / (18 * s4 * (s + 1) ** 2)
    zeta_term = special.zeta(3) * 4 / 3
    lam = lambda_bessel(sigma)
    lam_term = PSI_LAMBDA_COEF * lam
    psi1 = special.polygamma(1, sigma)
    psi1_term = -(psi1 * psi1) * 2 / 3
    base = zeta_term + lam_term + psi1_term
    lower, upper = base + mid_lower, base + mid_upper
    psi_value = psi_reconstruction(sigma)
    components = {
        "zeta_term": zeta_term,
        "middle_upper": mid_upper,
        "middle_lower": mid_lower,
        "lambda": lam,
        "lambda_term": lam_term,
        "psi1_squared_term": psi1_term,
    }
    return DoubleSidedReport(sigma, lower, upper, psi_value, lower <= psi_value <= upper, components)


@dataclass
class TwoSidedReport:
    x: float
    lower: HiPrecValue
    value: HiPrecValue
    upper: HiPrecValue
    satisfied: bool


def monotonic_PQ_check(x, k: float = 1.0) -> TwoSidedReport:
    """(x^2+12)/(12x^4(x+1)^2) < psi'(x)^2 + psi''(x) < (x+12)/(12x^4(x+1))."""
    if k != 1:
        raise UnsupportedParameterError("only k = 1 (ordinary polygamma) is implemented")
    xv = HiPrecValue.of(x)
    if xv.hi <= 0.0:
        raise DomainError("x must be positive")
    p1 = special.polygamma(1, xv)
    value = p1 * p1 + special.polygamma(2, xv)
    x4 = xv**4
    lower = (xv * xv + 12) / (12 * x4 * (xv + 1) ** 2)
    upper = (xv + 12) / (12 * x4 * (xv + 1))
    return TwoSidedReport(float(xv), lower, value, upper, lower < value < upper)
