"""Special functions in double-double precision.

Scalar entry points return :class:`HiPrecValue`; the ``*_array`` variants
work on ``(hi, lo)`` component arrays and are what the series code uses.

Polygamma
    Shift by the recurrence ``psi_m(x) = psi_m(x+1) - (-1)**m m!/x**(m+1)``
    until ``x >= 32``, then sum 20 terms of the Bernoulli asymptotic
    expansion.  The truncation error there is below 1e-40 relative.
Zeta
    Euler-Maclaurin with 32 explicit terms and 20 Bernoulli corrections.
Alternating series
    Cohen-Rodriguez Villegas-Zagier acceleration (their algorithm 1), which
    gains a factor 3 + sqrt(8) per term on totally monotone sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .precision import _dd, elementary
from .precision.constants import BERNOULLI, PI, PI_FRACTION, dd_from_fraction
from .precision.hiprec import HiPrecValue
from .precision.summation import sum_arrays

MAX_ORDER = 6
_SHIFT_TO = 32.0
_ASYM_TERMS = 20
_EM_N = 32
_CVZ_TERMS = 46


# ---------------------------------------------------------------- polygamma


@dataclass(frozen=True)
class PolygammaOrder:
    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)):
            raise DomainError(f"polygamma order must be an integer, got {self.m!r}")
        if not 1 <= self.m <= MAX_ORDER:
            raise DomainError(f"polygamma order must lie in [1, {MAX_ORDER}], got {self.m}")


def _order(m) -> int:
    return (m if isinstance(m, PolygammaOrder) else PolygammaOrder(m)).m


def _asym_coefs(m: int):
    out = []
    for k in range(1, _ASYM_TERMS + 1):
        c = BERNOULLI[2 * k] * Fraction(math.factorial(2 * k + m - 1), math.factorial(2 * k))
        out.append(dd_from_fraction(c))
    return out

_ASYM = {m: _asym_coefs(m) for m in range(1, MAX_ORDER + 1)}


def polygamma_array(m, xh, xl=None):
    """psi^(m)(x) on component arrays; every x must be positive."""
    m = _order(m)
    xh, xl = elementary.as_pair(xh, xl)
    if np.any(xh <= 0.0):
        raise DomainError("polygamma needs x > 0")
    sign = -1.0 if m % 2 == 0 else 1.0  # (-1)**(m+1)
    fact = float(math.factorial(m))
    # recurrence shift: accumulate sum_j 1/(x+j)**(m+1) while x+j < threshold
    ah, al = np.zeros_like(xh), np.zeros_like(xh)
    ch, cl = xh.copy(), xl.copy()
    steps = int(max(0.0, math.ceil(_SHIFT_TO - float(xh.min())))) if xh.size else 0
    for _ in range(steps):
        need = ch < _SHIFT_TO
        if not need.any():
            break
        ph, pl = elementary.powi(ch, cl, m + 1)
        ph, pl = _dd.recip(ph, pl)
        ah, al = _dd.add(ah, al, np.where(need, ph, 0.0), np.where(need, pl, 0.0))
        ch, cl = _dd.add_d(ch, cl, np.where(need, 1.0, 0.0))
    # asymptotic expansion at the shifted point
    th, tl = _dd.recip(ch, cl)
    t2h, t2l = _dd.sqr(th, tl)
    sh, sl = elementary._horner(t2h, t2l, _ASYM[m])
    sh, sl = _dd.mul(sh, sl, t2h, t2l)
    # (m-1)! + m!/2 * t + series
    ph, pl = _dd.mul_d(th, tl, fact / 2.0)
    sh, sl = _dd.add(sh, sl, ph, pl)
    sh, sl = _dd.add_d(sh, sl, float(math.factorial(m - 1)))
    tmh, tml = elementary.powi(th, tl, m)
    sh, sl = _dd.mul(sh, sl, tmh, tml)
    # psi(x) = psi(x+N) + (-1)**(m+1) m! sum 1/(x+j)**(m+1)
    ah, al = _dd.mul_d(ah, al, fact)
    sh, sl = _dd.add(sh, sl, ah, al)
    return sign * sh, sign * sl


def polygamma(m, x) -> HiPrecValue:
    x = HiPrecValue.of(x)
    if x.hi <= 0.0:
        raise DomainError(f"polygamma needs x > 0, got {float(x)!r}")
    h, l = polygamma_array(m, np.array([x.hi]), np.array([x.lo]))
    return HiPrecValue(float(h[0]), float(l[0]))


def zeta3_tail(sigma: int) -> HiPrecValue:
    """sum_{n >= sigma} n**-3, via -psi''(sigma)/2."""
    if sigma < 1:
        raise DomainError("zeta3_tail needs sigma >= 1")
    return -polygamma(2, sigma).ldexp(-1)


# ---------------------------------------------------------------- zeta


def _zeta_dd(s: float) -> HiPrecValue:
    n = np.arange(1, _EM_N, dtype=float)
    th, tl = elementary.inv_pow(n, None, s)
    head = sum_arrays(th, tl)
    big_n = HiPrecValue(float(_EM_N))
    nms = HiPrecValue(*(a[0] for a in elementary.inv_pow(np.array([float(_EM_N)]), None, s)))
    tail = nms * big_n / (HiPrecValue(s) - 1) + nms.ldexp(-1)
    # Bernoulli corrections: B_2k/(2k)! (s)_{2k-1} N**(-s-2k+1)
    inv_n = 1 / big_n
    inv_n2 = inv_n * inv_n
    poch = HiPrecValue(s)
    power = nms * inv_n
    fact = 2
    for k in range(1, _ASYM_TERMS + 1):
        coef = HiPrecValue(*dd_from_fraction(BERNOULLI[2 * k] / fact))
        tail = tail + coef * poch * power
        poch = poch * (HiPrecValue(s) + (2 * k - 1)) * (HiPrecValue(s) + 2 * k)
        power = power * inv_n2
        fact *= (2 * k + 1) * (2 * k + 2)
    return head + tail


def zeta(s) -> HiPrecValue:
    s = float(s)
    if not s > 1.0:
        raise DomainError(f"zeta needs s > 1, got {s!r}")
    return _zeta_dd(s)


# ---------------------------------------------------------------- alternating sums


def _cvz_weights(n: int):
    """Weights w_k with sum_k (-1)**k a_k ~= sum_k w_k a_k (k < n)."""
    d = (HiPrecValue(3.0) + HiPrecValue(8.0).sqrt()) ** n
    d = (d + 1 / d).ldexp(-1)
    b = HiPrecValue(-1.0)
    c = -d
    w = []
    for k in range(n):
        c = b - c
        w.append(c / d)
        b = b * HiPrecValue((k + n) * (k - n)) / HiPrecValue((2 * k + 1) * (k + 1)) * 2
    return np.array([x.hi for x in w]), np.array([x.lo for x in w])

_CVZ = _cvz_weights(_CVZ_TERMS)


def alternating_sum(ah, al) -> HiPrecValue:
    """sum_{k>=0} (-1)**k a_k from the first terms of a totally monotone a_k."""
    wh, wl = _CVZ
    n = min(len(ah), len(wh))
    ph, pl = _dd.mul(wh[:n], wl[:n], np.asarray(ah)[:n], np.asarray(al)[:n])
    return sum_arrays(ph, pl)


def _eta(s: float) -> HiPrecValue:
    k = np.arange(1, _CVZ_TERMS + 1, dtype=float)
    ah, al = elementary.inv_pow(k, None, s)
    return alternating_sum(ah, al)


# ---------------------------------------------------------------- polylog and friends


def polylog_series(s, z, terms: int | None = None, tol: float = 1e-32):
    """Direct Li_s(z) for |z| < 1; returns ``(value, tail_bound, terms)``.

    The bound is |z|**(K+1)/((K+1)**s (1-|z|)), which dominates the tail for s > 0.
    """
    s, z = float(s), float(z)
    az = abs(z)
    if not az < 1.0:
        raise DomainError("polylog_series needs |z| < 1")
    if az == 0.0:
        return HiPrecValue(0.0), 0.0, 0

    def bound(k):
        return math.exp((k + 1) * math.log(az) - s * math.log(k + 1)) / (1.0 - az)

    if terms is None:
        terms = 1
        while bound(terms) > tol and terms < 2_000_000:
            terms *= 2
        lo, hi = terms // 2, terms
        while hi - lo > 1:
            mid = (lo + hi) // 2
            lo, hi = (lo, mid) if bound(mid) <= tol else (mid, hi)
        terms = hi
    k = np.arange(1, terms + 1, dtype=float)
    lz = elementary.log(np.array([az]))
    lk_h, lk_l = elementary.log(k)
    eh, el = _dd.mul(k, np.zeros_like(k), np.full_like(k, lz[0][0]), np.full_like(k, lz[1][0]))
    lk_h, lk_l = _dd.mul_d(lk_h, lk_l, s)
    eh, el = _dd.sub(eh, el, lk_h, lk_l)
    th, tl = elementary.exp(eh, el)
    if z < 0:
        sgn = np.where(k % 2 == 1, -1.0, 1.0)
        th, tl = th * sgn, tl * sgn
    return sum_arrays(th, tl), bound(terms), terms


def polylog(s, z) -> HiPrecValue:
    s, z = float(s), float(z)
    if not s > 1.0:
        raise DomainError(f"polylog needs s > 1, got {s!r}")
    if abs(z) > 1.0:
        raise DomainError(f"polylog needs |z| <= 1, got {z!r}")
    if z == 1.0:
        return zeta(s)
    if z == -1.0:
        return -_eta(s)
    return polylog_series(s, z)[0]


def fermi_dirac_F(p, x) -> HiPrecValue:
    """sum_{r>=1} (-1)**(r+1) e**(r x) / r**(p+1) for x <= 0 (no 1/Gamma prefactor)."""
    p, x = float(p), float(x)
    if not p > 0.0:
        raise DomainError(f"fermi_dirac_F needs p > 0, got {p!r}")
    if x > 0.0:
        raise DomainError(f"fermi_dirac_F is only defined here for x <= 0, got {x!r}")
    r = np.arange(1, _CVZ_TERMS + 1, dtype=float)
    ah, al = elementary.inv_pow(r, None, p + 1.0)
    if x != 0.0:
        eh, el = elementary.exp(*_dd.two_prod(r, np.full_like(r, x)))
        ah, al = _dd.mul(ah, al, eh, el)
    return alternating_sum(ah, al)


def bose_einstein_G(s) -> HiPrecValue:
    """G_s(0) = Li_{s+1}(1) = zeta(s+1)."""
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"bose_einstein_G needs s > 0, got {s!r}")
    return zeta(s + 1.0)


# ---------------------------------------------------------------- complex DD and Bessel


@dataclass(frozen=True)
class ComplexValue:
    re: HiPrecValue
    im: HiPrecValue = HiPrecValue(0.0)

    @classmethod
    def of(cls, z) -> ComplexValue:
        if isinstance(z, ComplexValue):
            return z
        if isinstance(z, complex):
            return cls(HiPrecValue(z.real), HiPrecValue(z.imag))
        return cls(HiPrecValue.of(z))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> HiPrecValue:
        return (self.re * self.re + self.im * self.im).sqrt()


def cmul(a, b):
    """Complex DD product; ``a`` and ``b`` are 4-tuples (re_h, re_l, im_h, im_l)."""
    rh1, rl1 = _dd.mul(a[0], a[1], b[0], b[1])
    rh2, rl2 = _dd.mul(a[2], a[3], b[2], b[3])
    ih1, il1 = _dd.mul(a[0], a[1], b[2], b[3])
    ih2, il2 = _dd.mul(a[2], a[3], b[0], b[1])
    return (*_dd.sub(rh1, rl1, rh2, rl2), *_dd.add(ih1, il1, ih2, il2))


def cdiv(a, b):
    nh, nl = _dd.add(*_dd.sqr(b[0], b[1]), *_dd.sqr(b[2], b[3]))
    num = cmul(a, (b[0], b[1], -b[2], -b[3]))
    return (*_dd.div(num[0], num[1], nh, nl), *_dd.div(num[2], num[3], nh, nl))


def csqrt(a):
    """Principal square root; the cut lies on the negative real axis."""
    uh, ul, vh, vl = (np.asarray(t, dtype=float) for t in a)
    rh, rl = _dd.sqrt_array(*_dd.add(*_dd.sqr(uh, ul), *_dd.sqr(vh, vl)))
    au_h, au_l = np.abs(uh), np.where(uh < 0, -ul, ul)
    th, tl = _dd.sqrt_array(*_dd.mul_d(*_dd.add(rh, rl, au_h, au_l), 0.5))
    safe_h = np.where(th == 0.0, 1.0, th)
    qh, ql = _dd.div(vh, vl, 2.0 * safe_h, 2.0 * tl)
    qh, ql = np.where(th == 0.0, 0.0, qh), np.where(th == 0.0, 0.0, ql)
    pos = uh >= 0.0
    sgn = np.copysign(1.0, vh)
    re_h = np.where(pos, th, np.abs(qh))
    re_l = np.where(pos, tl, np.where(qh < 0, -ql, ql))
    im_h = np.where(pos, qh, sgn * th)
    im_l = np.where(pos, ql, sgn * tl)
    return re_h, re_l, im_h, im_l


def csinh(a):
    """sinh(u + iv) = sinh u cos v + i cosh u sin v."""
    sh, sl, ch, cl = elementary.sinh_cosh(a[0], a[1])
    snh, snl, csh, csl = elementary.sin_cos(a[2], a[3])
    return (*_dd.mul(sh, sl, csh, csl), *_dd.mul(ch, cl, snh, snl))


def bessel_I_half_array(z):
    """sqrt(2 z/pi) sinh(z) / z on component arrays.

    Written with sqrt(z) rather than sqrt(1/z) so the principal branch of
    (z/2)**(1/2) is kept on the negative real axis too.
    """
    z = tuple(np.asarray(t, dtype=float) for t in z)
    if np.any((z[0] == 0.0) & (z[2] == 0.0)):
        raise DomainError("I_{1/2} is singular at z = 0")
    ih, il = _dd.div(2.0, 0.0, PI[0], PI[1])
    scaled = (*_dd.mul(z[0], z[1], ih, il), *_dd.mul(z[2], z[3], ih, il))
    return cdiv(cmul(csqrt(scaled), csinh(z)), z)


def bessel_I_half(z) -> ComplexValue:
    z = ComplexValue.of(z)
    arr = tuple(np.array([v]) for v in (z.re.hi, z.re.lo, z.im.hi, z.im.lo))
    out = bessel_I_half_array(arr)
    return ComplexValue(HiPrecValue(float(out[0][0]), float(out[1][0])),
                        HiPrecValue(float(out[2][0]), float(out[3][0])))


def bessel_J_half(x) -> HiPrecValue:
    """sqrt(2/(pi x)) sin(x) for x > 0."""
    x = HiPrecValue.of(x)
    if x.hi <= 0.0:
        raise DomainError(f"J_{{1/2}} is evaluated here only for x > 0, got {float(x)!r}")
    sh, sl, _, _ = elementary.sin_cos(np.array([x.hi]), np.array([x.lo]))
    pre = (HiPrecValue(2.0) / (HiPrecValue(*PI) * x)).sqrt()
    return pre * HiPrecValue(float(sh[0]), float(sl[0]))


def struve_H_minus_half(x) -> HiPrecValue:
    """H_{-1/2}(x), which coincides with J_{1/2}(x)."""
    return bessel_J_half(x)

