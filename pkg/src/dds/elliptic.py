"""Weierstrass pair classes and the polygamma expansion of csc^2 partial sums.

An integer lambda belongs to the class (a, b) when
csc^2(lambda) = lambda^3 + a lambda + b, equivalently
csc^2(lambda)/lambda^3 = 1 + a/lambda^2 + b/lambda^3.  Over a class
covering lo..hi the Flint-Hills terms then sum to

    kappa + a [psi'(lo) - psi'(hi+1)] + (b/2) [psi''(hi+1) - psi''(lo)],

with kappa = hi - lo + 1.  Two members pin (a, b) down exactly, so chunking
a range into consecutive pairs turns the expansion into an identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import special
from .errors import DegenerateCurveError, DomainError, FitError
from .precision import _dd, elementary
from .precision.hiprec import HiPrecValue
from .precision.summation import sum_arrays
from .series import FLINT_HILLS, SeriesSpec, partial_sum, terms

MEMBER_TOL = 1e-12
_CSC2 = SeriesSpec("csc", 2.0, 0.0)


def discriminant(a, b) -> HiPrecValue:
    a, b = HiPrecValue.of(a), HiPrecValue.of(b)
    return -16 * (4 * a**3 + 27 * b * b)


def _disc_array(ah, al, bh, bl):
    a3h, a3l = elementary.powi(ah, al, 3)
    b2h, b2l = _dd.sqr(bh, bl)
    sh, sl = _dd.add(*_dd.mul_d(a3h, a3l, 4.0), *_dd.mul_d(b2h, b2l, 27.0))
    return _dd.mul_d(sh, sl, -16.0)


@dataclass
class EllipticClass:
    a: HiPrecValue
    b: HiPrecValue
    members: tuple
    residuals: list = field(default_factory=list)
    discriminant: HiPrecValue = HiPrecValue(0.0)

    @property
    def exact(self) -> bool:
        return all(abs(r) <= MEMBER_TOL for r in self.residuals)


def _csc2_minus_cube(lam: np.ndarray):
    ch, cl, _ = terms(_CSC2, lam.astype(np.int64))
    l3h, l3l = elementary.powi(lam.astype(float), None, 3)
    return _dd.sub(ch, cl, l3h, l3l)


def _certificate_residuals(lam: np.ndarray, ah, al, bh, bl):
    """csc^2/lam^3 - (1 + a/lam^2 + b/lam^3) on arrays."""
    lam_f = lam.astype(float)
    yh, yl = _csc2_minus_cube(lam)
    rh, rl = _dd.sub(yh, yl, *_dd.mul(ah, al, lam_f, np.zeros_like(lam_f)))
    rh, rl = _dd.sub(rh, rl, bh, bl)
    l3h, l3l = elementary.powi(lam_f, None, 3)
    return _dd.div(rh, rl, l3h, l3l)


def fit_pairs(lam1: np.ndarray, lam2: np.ndarray):
    """Exact (a, b) component arrays through the pairs (lam1, lam2)."""
    l1, l2 = lam1.astype(float), lam2.astype(float)
    y1h, y1l = _csc2_minus_cube(lam1)
    y2h, y2l = _csc2_minus_cube(lam2)
    ah, al = _dd.div(*_dd.sub(y2h, y2l, y1h, y1l), l2 - l1, np.zeros_like(l1))
    bh, bl = _dd.sub(y1h, y1l, *_dd.mul(ah, al, l1, np.zeros_like(l1)))
    return ah, al, bh, bl


def fit_class(members) -> EllipticClass:
    """Exact fit for two members, least squares on the certificate residuals otherwise."""
    lam = [int(m) for m in members]
    if len(lam) < 2:
        raise FitError("a class fit needs at least two members")
    if any(m < 1 for m in lam):
        raise FitError("members must be positive integers")
    if len(set(lam)) != len(lam):
        raise FitError(f"duplicate members make the system singular: {sorted(lam)}")
    arr = np.array(lam, dtype=np.int64)
    if len(lam) == 2:
        ah, al, bh, bl = fit_pairs(arr[:1], arr[1:])
        a, b = HiPrecValue(ah[0], al[0]), HiPrecValue(bh[0], bl[0])
    else:
        # rows (1/l^2, 1/l^3), target csc^2/l^3 - 1
        lf = arr.astype(float)
        u = [HiPrecValue(*x) for x in zip(*_dd.recip(*elementary.powi(lf, None, 2)))]
        w = [HiPrecValue(*x) for x in zip(*_dd.recip(*elementary.powi(lf, None, 3)))]
        ch, cl, _ = terms(SeriesSpec("csc", 2.0, 3.0), arr)
        t = [HiPrecValue(h, l) - 1 for h, l in zip(ch, cl)]
        suu = sum((x * x for x in u), HiPrecValue(0.0))
        suw = sum((x * y for x, y in zip(u, w)), HiPrecValue(0.0))
        sww = sum((y * y for y in w), HiPrecValue(0.0))
        sut = sum((x * z for x, z in zip(u, t)), HiPrecValue(0.0))
        swt = sum((y * z for y, z in zip(w, t)), HiPrecValue(0.0))
        det = suu * sww - suw * suw
        if det.hi == 0.0:
            raise FitError("normal equations are singular")
        a = (sut * sww - swt * suw) / det
        b = (suu * swt - suw * sut) / det
    res_h, res_l = _certificate_residuals(arr, np.full(len(lam), a.hi), np.full(len(lam), a.lo),
                                          np.full(len(lam), b.hi), np.full(len(lam), b.lo))
    disc = discriminant(a, b)
    if disc.hi == 0.0:
        raise DegenerateCurveError(f"zero discriminant for members {lam}")
    return EllipticClass(a, b, tuple(lam), [float(h + l) for h, l in zip(res_h, res_l)], disc)


def membership_residual(cls: EllipticClass, lam: int) -> HiPrecValue:
    if lam < 1:
        raise DomainError("lambda must be >= 1")
    h, l = _certificate_residuals(np.array([lam]), np.array([cls.a.hi]), np.array([cls.a.lo]),
                                  np.array([cls.b.hi]), np.array([cls.b.lo]))
    return HiPrecValue(h[0], l[0])


@dataclass(frozen=True)
class ExpansionTerm:
    kappa: int
    a: HiPrecValue
    b: HiPrecValue
    lambda_lo: int
    I_hi: int

    def __post_init__(self):
        if self.lambda_lo > self.I_hi:
            raise DomainError("lambda_lo must not exceed I_hi")
        if self.kappa != self.I_hi - self.lambda_lo + 1:
            raise DomainError("kappa must equal I_hi - lambda_lo + 1")

    @classmethod
    def covering(cls, a, b, lo: int, hi: int) -> ExpansionTerm:
        return cls(hi - lo + 1, HiPrecValue.of(a), HiPrecValue.of(b), lo, hi)


def _corrections(ah, al, bh, bl, lo: np.ndarray, hi: np.ndarray):
    lo_f, top_f = lo.astype(float), hi.astype(float) + 1.0
    p1h, p1l = _dd.sub(*special.polygamma_array(1, lo_f), *special.polygamma_array(1, top_f))
    p2h, p2l = _dd.sub(*special.polygamma_array(2, top_f), *special.polygamma_array(2, lo_f))
    xh, xl = _dd.mul(ah, al, p1h, p1l)
    yh, yl = _dd.mul(bh, bl, p2h, p2l)
    return _dd.add(xh, xl, 0.5 * yh, 0.5 * yl)


def class_partial_sum(term: ExpansionTerm) -> HiPrecValue:
    """kappa + a [psi'(lo) - psi'(hi+1)] + (b/2) [psi''(hi+1) - psi''(lo)]."""
    one = np.ones(1)
    ch, cl = _corrections(term.a.hi * one, term.a.lo * one, term.b.hi * one, term.b.lo * one,
                          np.array([term.lambda_lo]), np.array([term.I_hi]))
    return HiPrecValue(ch[0], cl[0]) + term.kappa


def blocks_for(n_lo: int, n_hi: int, chunk: int, offset: int = 0) -> list[tuple[int, int]]:
    """Consecutive blocks of ``chunk`` integers.

    ``offset`` (0 <= offset < chunk) makes the first block that short.  A
    trailing singleton joins the block before it.
    """
    if chunk < 2:
        raise DomainError("chunk must be >= 2")
    if not 0 <= offset < chunk:
        raise DomainError("offset must lie in [0, chunk)")
    if n_lo < 1 or n_hi < n_lo:
        raise DomainError("need 1 <= n_lo <= n_hi")
    out = []
    start = n_lo
    if offset:
        out.append((start, min(n_lo + offset - 1, n_hi)))
        start = out[-1][1] + 1
    while start <= n_hi:
        end = min(start + chunk - 1, n_hi)
        out.append((start, end))
        start = end + 1
    if len(out) > 1 and out[-1][0] == out[-1][1]:
        last = out.pop()
        out[-1] = (out[-1][0], last[1])
    return out


@dataclass
class ExpansionResult:
    kappa_total: int
    correction_sum: HiPrecValue
    value: HiPrecValue
    direct: HiPrecValue
    gap: HiPrecValue
    n_blocks: int
    max_residual: float
    min_abs_discriminant: float
    approximate_blocks: list = field(default_factory=list)


def full_expansion(n_lo: int, n_hi: int, chunk: int = 2, offset: int = 0) -> ExpansionResult:
    """Sum csc^2(n)/n^3 over n_lo..n_hi class by class.

    Two-member blocks are fitted exactly; a single-member block borrows its
    right neighbour for the fit but only covers itself, which is still exact.
    Larger blocks use the least-squares fit and contribute a residual gap.
    """
    blocks = blocks_for(n_lo, n_hi, chunk, offset)
    lo = np.array([b[0] for b in blocks], dtype=np.int64)
    hi = np.array([b[1] for b in blocks], dtype=np.int64)
    size = hi - lo + 1
    ah, al, bh, bl = (np.zeros(len(blocks)) for _ in range(4))
    small = size <= 2
    if small.any():
        partner = np.where(size[small] == 2, hi[small], lo[small] + 1)
        fa = fit_pairs(lo[small], partner)
        ah[small], al[small], bh[small], bl[small] = fa
    approx = []
    max_res = 0.0
    for j in np.nonzero(~small)[0]:
        cls = fit_class(range(int(lo[j]), int(hi[j]) + 1))
        ah[j], al[j], bh[j], bl[j] = cls.a.hi, cls.a.lo, cls.b.hi, cls.b.lo
        approx.append((int(lo[j]), int(hi[j]), max(abs(r) for r in cls.residuals)))
    if small.any():
        members_lo = lo[small]
        rh, rl = _certificate_residuals(members_lo, ah[small], al[small], bh[small], bl[small])
        max_res = float(np.max(np.abs(rh)))
    dh, dl = _disc_array(ah, al, bh, bl)
    if np.any(dh == 0.0):
        j = int(np.argmax(dh == 0.0))
        raise DegenerateCurveError(f"zero discriminant in block {blocks[j]}")
    ch, cl = _corrections(ah, al, bh, bl, lo, hi)
    correction = sum_arrays(ch, cl)
    kappa = int(size.sum())
    value = correction + kappa
    direct = partial_sum(FLINT_HILLS, n_lo, n_hi).value
    return ExpansionResult(kappa, correction, value, direct, value - direct, len(blocks), max_res,
                           float(np.min(np.abs(dh))), approx)
