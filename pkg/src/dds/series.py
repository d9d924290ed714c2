"""Partial sums of Diophantine Dirichlet series and their decompositions.

A series is described by a :class:`SeriesSpec`: term ``n`` is
``f(phi n)**v * w(n) / n**s`` with ``f`` one of csc, cot, sec or the
constant 1.  All sums are double-double, evaluated in vectorised blocks and
accumulated by :func:`dds.precision.sum_arrays`.

Periodic weights index their table as ``table[(n - 1) % k]``, so the first
entry belongs to ``n = 1``.  The floor integrator jumps at each integer
``n`` in ``(x_lo, x_hi]`` and the jump contributes the term at ``n``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import special
from .errors import (
    CommonDiscontinuityError,
    DomainError,
    InternalConsistencyError,
    PoleError,
)
from .precision import _dd, elementary
from .precision.constants import PI, SQRT3
from .precision.hiprec import ZERO, HiPrecValue
from .precision.summation import sum_arrays
from .precision.trig import MAX_N

KERNELS = ("csc", "cot", "sec", "one")
POLE_TOL = 1e-15
IMAG_TOL = 1e-12
_BLOCK = 1 << 17
_EPS = 2.0**-104

_PI = HiPrecValue(*PI)
_SQRT3 = HiPrecValue(*SQRT3)
LAMBDA_COEF = _PI / (2 * _SQRT3)  # pi / (2 sqrt 3)
PSI_LAMBDA_COEF = 2 * _SQRT3 / (3 * _PI)  # 2 sqrt 3 / (3 pi)


@dataclass(frozen=True)
class PeriodicWeight:
    table: tuple

    def __post_init__(self):
        if len(self.table) < 1:
            raise DomainError("a periodic weight needs period >= 1")
        object.__setattr__(self, "table", tuple(float(c) for c in self.table))

    @property
    def period(self) -> int:
        return len(self.table)

    def values(self, n: np.ndarray):
        t = np.asarray(self.table)
        return t[(n.astype(np.int64) - 1) % self.period], np.zeros(n.shape)


@dataclass(frozen=True)
class ExpWeight:
    """Multiplies term n by exp(rate * n)."""

    rate: float

    def values(self, n: np.ndarray):
        return elementary.exp(*_dd.two_prod(n.astype(float), np.full(n.shape, float(self.rate))))


@dataclass(frozen=True)
class SeriesSpec:
    kernel: str = "csc"
    v: float = 2.0
    s: float = 3.0
    phase: float = 1.0
    phase_pi: Fraction | None = None
    weight: PeriodicWeight | ExpWeight | None = None

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise DomainError(f"unknown kernel {self.kernel!r}; expected one of {KERNELS}")
        if not self.v >= 0:
            raise DomainError("the kernel power v must be >= 0")
        if self.phase_pi is not None:
            object.__setattr__(self, "phase_pi", Fraction(self.phase_pi))
            if self.phase_pi <= 0:
                raise DomainError("phase must be positive")
        elif not self.phase > 0:
            raise DomainError("phase must be positive")
        if (self.kernel == "one" or self.v == 0) and self.weight is None and not self.s > 1:
            raise DomainError("a pure p-series needs s > 1")

    @property
    def active_kernel(self) -> str:
        return "one" if self.v == 0 else self.kernel

    def describe(self) -> dict:
        out = {"kernel": self.kernel, "v": self.v, "s": self.s}
        if self.phase_pi is not None:
            out["phase"] = f"pi*{self.phase_pi}"
        else:
            out["phase"] = self.phase
        if isinstance(self.weight, PeriodicWeight):
            out["weight"] = {"periodic": list(self.weight.table)}
        elif isinstance(self.weight, ExpWeight):
            out["weight"] = {"exp_rate": self.weight.rate}
        return out


FLINT_HILLS = SeriesSpec("csc", 2.0, 3.0)
COOKSON_HILLS = SeriesSpec("sec", 2.0, 3.0)


@dataclass
class PartialSumReport:
    spec: SeriesSpec
    n_lo: int
    n_hi: int
    value: HiPrecValue
    n_terms: int
    max_term: float
    max_term_index: int
    spikes: list = field(default_factory=list)
    error_bound: float = 0.0


# ------------------------------------------------------------------ term evaluation


def _sin_cos(spec: SeriesSpec, n: np.ndarray):
    if spec.phase_pi is not None:
        p, q = spec.phase_pi.numerator, spec.phase_pi.denominator
        r = (n.astype(object) * p) % (2 * q)
        r = np.asarray(r, dtype=float)
        # pi * r / q with r reduced mod 2q, so the argument stays small
        ah, al = _dd.mul_d(np.full(n.shape, PI[0]), np.full(n.shape, PI[1]), r)
        ah, al = _dd.div(ah, al, np.full(n.shape, float(q)), np.zeros(n.shape))
        return elementary.sin_cos(ah, al)
    if spec.phase == 1.0:
        return elementary.sin_cos(n.astype(float))
    return elementary.sin_cos(*_dd.two_prod(n.astype(float), np.full(n.shape, float(spec.phase))))


def _exact_poles(spec: SeriesSpec, n: np.ndarray) -> np.ndarray:
    p, q = spec.phase_pi.numerator, spec.phase_pi.denominator
    pn = n.astype(object) * p
    if spec.kernel == "sec":
        return np.asarray((2 * pn - q) % (2 * q) == 0, dtype=bool)
    return np.asarray(pn % q == 0, dtype=bool)


def kernel_values(spec: SeriesSpec, n: np.ndarray):
    """``(h, l, absnum)``: f(phi n)**v as DD components and |f|**v as floats.

    Integral ``v`` keeps the sign of f; other powers act on |f|.
    """
    kernel = spec.active_kernel
    if kernel == "one":
        one = np.ones(n.shape)
        return one, np.zeros(n.shape), one
    sh, sl, ch, cl = _sin_cos(spec, n)
    if kernel == "sec":
        guard = np.abs(ch) < POLE_TOL
    else:
        guard = np.abs(sh) < POLE_TOL
    if spec.phase_pi is not None:
        guard = guard | _exact_poles(spec, n)
    if guard.any():
        bad = int(n[np.argmax(guard)])
        raise PoleError(f"{spec.kernel} kernel hits a pole at n={bad}", index=bad)
    if kernel == "csc":
        fh, fl = _dd.recip(sh, sl)
    elif kernel == "sec":
        fh, fl = _dd.recip(ch, cl)
    else:
        fh, fl = _dd.div(ch, cl, sh, sl)
    v = float(spec.v)
    if v.is_integer():
        fh, fl = elementary.powi(fh, fl, int(v))
    else:
        neg = fh < 0
        fh, fl = np.where(neg, -fh, fh), np.where(neg, -fl, fl)
        fh, fl = elementary.pow_real(fh, fl, v)
    return fh, fl, np.abs(fh)


def terms(spec: SeriesSpec, n: np.ndarray):
    """DD components of the series terms at integer indices ``n``."""
    n = np.asarray(n)
    fh, fl, absnum = kernel_values(spec, n)
    if spec.weight is not None:
        wh, wl = spec.weight.values(n)
        fh, fl = _dd.mul(fh, fl, wh, wl)
    if spec.s != 0:
        ph, pl = elementary.inv_pow(n.astype(float), None, spec.s)
        fh, fl = _dd.mul(fh, fl, ph, pl)
    return fh, fl, absnum


def _fast_terms(spec: SeriesSpec, n: np.ndarray):
    x = n.astype(float) * (float(spec.phase) if spec.phase_pi is None else math.pi * float(spec.phase_pi))
    kernel = spec.active_kernel
    if kernel == "one":
        f = np.ones(n.shape)
    else:
        s, c = np.sin(x), np.cos(x)
        base = c if kernel == "sec" else s
        if np.any(np.abs(base) < POLE_TOL):
            bad = int(n[np.argmax(np.abs(base) < POLE_TOL)])
            raise PoleError(f"{spec.kernel} kernel hits a pole at n={bad}", index=bad)
        f = {"csc": 1 / s, "sec": 1 / c, "cot": c / s}[kernel]
        f = f ** spec.v if float(spec.v).is_integer() else np.abs(f) ** spec.v
    absnum = np.abs(f)
    if spec.weight is not None:
        wh, wl = spec.weight.values(n)
        f = f * (wh + wl)
    return f / n.astype(float) ** spec.s, absnum


# ------------------------------------------------------------------ partial sums


def _check_range(n_lo: int, n_hi: int):
    if n_lo < 1:
        raise DomainError("n_lo must be >= 1")
    if n_hi < n_lo:
        raise DomainError("n_hi must be >= n_lo")
    if n_hi > MAX_N:
        from .errors import RangeError

        raise RangeError(f"n_hi exceeds the supported maximum {MAX_N}", maximum=MAX_N)


def _block_sum(spec: SeriesSpec, a: int, b: int, fast: bool):
    n = np.arange(a, b + 1, dtype=np.int64)
    if fast:
        t, absnum = _fast_terms(spec, n)
        return HiPrecValue(math.fsum(t)), t, absnum, n
    th, tl, absnum = terms(spec, n)
    return sum_arrays(th, tl), th, absnum, n


def partial_sum(
    spec: SeriesSpec,
    n_lo: int,
    n_hi: int,
    precision: str = "extended",
    workers: int | None = None,
) -> PartialSumReport:
    """Sum terms ``n_lo..n_hi`` inclusive.

    ``precision="fast"`` uses plain float64 sines with ``math.fsum``.  With
    ``workers`` the blocks are evaluated concurrently; block partials are
    still combined in index order.
    """
    _check_range(n_lo, n_hi)
    fast = precision == "fast"
    edges = list(range(n_lo, n_hi + 1, _BLOCK)) + [n_hi + 1]
    blocks = [(a, b - 1) for a, b in zip(edges[:-1], edges[1:])]
    if workers and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: _block_sum(spec, ab[0], ab[1], fast), blocks))
    else:
        parts = [_block_sum(spec, a, b, fast) for a, b in blocks]

    total = ZERO
    record = -np.inf
    spikes = []
    max_term, max_idx, abs_total = -1.0, n_lo, 0.0
    for value, th, absnum, n in parts:
        total = total + value
        at = np.abs(th)
        abs_total += float(at.sum())
        i = int(np.argmax(at))
        if at[i] > max_term:
            max_term, max_idx = float(at[i]), int(n[i])
        # strict running records of |f|**v
        prev = np.concatenate(([record], np.maximum.accumulate(absnum)[:-1]))
        hits = np.nonzero(absnum > prev)[0]
        spikes.extend((int(n[j]), float(absnum[j])) for j in hits)
        record = max(record, float(absnum.max()))

    n_terms = n_hi - n_lo + 1
    if fast:
        err = abs_total * 2.0**-52 * (4 + n_hi)
    else:
        err = abs_total * _EPS * (8 + 2 * float(spec.v) + math.log2(n_terms + 1))
    return PartialSumReport(spec, n_lo, n_hi, total, n_terms, max_term, max_idx, spikes, err)


def spike_records(n_max: int, v: float = 1.0) -> list:
    """Running records of |csc(n)|**v over 1..n_max."""
    return partial_sum(SeriesSpec("csc", v, 0.0), 1, n_max).spikes


# ------------------------------------------------------------------ Lambda / Psi


def lambda_terms(n_lo: int, n_hi: int):
    """DD components of (pi/(2 sqrt 3)) (3 csc^2 n - 4) / n^3 for n_lo..n_hi."""
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    ch, cl, _ = terms(SeriesSpec("csc", 2.0, 0.0), n.astype(np.int64))
    ch, cl = _dd.mul_d(ch, cl, 3.0)
    ch, cl = _dd.add_d(ch, cl, -4.0)
    ph, pl = elementary.inv_pow(n, None, 3)
    ch, cl = _dd.mul(ch, cl, ph, pl)
    return _dd.mul(ch, cl, LAMBDA_COEF.hi, LAMBDA_COEF.lo)


def lambda_elementary(sigma: int) -> HiPrecValue:
    """Lambda(sigma) through the triple-angle reduction."""
    if sigma < 1:
        raise DomainError("sigma must be >= 1")
    if sigma == 1:
        return ZERO
    return sum_arrays(*lambda_terms(1, sigma - 1))


def lambda_bessel_terms(n_lo: int, n_hi: int):
    """Real parts and imaginary residues of -i I(-3in) / (n^4 I(-in)^3)."""
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    zero = np.zeros_like(n)
    i1 = special.bessel_I_half_array((zero, zero, -n, zero))
    i3 = special.bessel_I_half_array((zero, zero, -3.0 * n, zero))
    num = (i3[2], i3[3], -i3[0], -i3[1])  # -i (a + ib) = b - ia
    cube = special.cmul(special.cmul(i1, i1), i1)
    n4h, n4l = elementary.powi(n, zero, 4)
    den = (*_dd.mul(cube[0], cube[1], n4h, n4l), *_dd.mul(cube[2], cube[3], n4h, n4l))
    return special.cdiv(num, den)


def lambda_bessel(sigma: int, with_residue: bool = False):
    """Lambda(sigma) summed from the half-order Bessel ratio.

    Each term must come out real: an imaginary part above ``IMAG_TOL``
    relative to the real part raises :class:`InternalConsistencyError`.
    """
    if sigma < 1:
        raise DomainError("sigma must be >= 1")
    if sigma == 1:
        return (ZERO, 0.0) if with_residue else ZERO
    rh, rl, ih, il = lambda_bessel_terms(1, sigma - 1)
    rel = np.abs(ih) / np.abs(rh)
    worst = float(rel.max())
    if worst > IMAG_TOL:
        k = int(np.argmax(rel)) + 1
        raise InternalConsistencyError(f"Bessel term n={k} has imaginary residue {worst:.3e}")
    value = sum_arrays(rh, rl)
    return (value, worst) if with_residue else value


def zeta3_term() -> HiPrecValue:
    return special.zeta(3) * 4 / 3


def psi_reconstruction(sigma: int) -> HiPrecValue:
    """(4/3) zeta(3) + (2 sqrt 3/(3 pi)) Lambda(sigma) + (2/3) psi''(sigma)."""
    if sigma < 2:
        raise DomainError("sigma must be >= 2")
    lam = lambda_bessel(sigma)
    return zeta3_term() + PSI_LAMBDA_COEF * lam + special.polygamma(2, sigma) * 2 / 3


def theta_tail(sigma: int, n_max: int) -> HiPrecValue:
    """Truncated Theta: (pi sqrt3/3) psi''(sigma) + (pi sqrt3/2) sum_{sigma}^{n_max} csc^2/n^3."""
    if sigma < 2:
        raise DomainError("sigma must be >= 2")
    if n_max < sigma:
        raise DomainError("n_max must be >= sigma")
    tail = partial_sum(FLINT_HILLS, sigma, n_max).value
    c = _PI * _SQRT3
    return c / 3 * special.polygamma(2, sigma) + c / 2 * tail


def lambda_slope(t) -> HiPrecValue:
    """Lambda'(t) = -(pi/sqrt 3) psi'''(t)."""
    return -(_PI / _SQRT3) * special.polygamma(3, t)


# ------------------------------------------------------------------ recursive substitution


@dataclass(frozen=True)
class RecursionDecomposition:
    x: HiPrecValue
    m: int
    cos_sum: HiPrecValue
    remainder: HiPrecValue
    total: HiPrecValue


def recursion_decompose(x, m: int) -> RecursionDecomposition:
    """csc^2(x) = sum_{k<m} 4**-(k+1) sec^2(x/2**(k+1)) + 4**-m csc^2(x/2**m)."""
    if m < 1:
        raise DomainError("m must be >= 1")
    x = HiPrecValue.of(x)
    k = np.arange(m + 1)
    # halvings x/2**j for j = 1..m are exact
    ah = np.ldexp(np.full(m, x.hi), -(k[1:]))
    al = np.ldexp(np.full(m, x.lo), -(k[1:]))
    sh, sl, ch, cl = elementary.sin_cos(ah, al)
    if abs(sh[-1]) < POLE_TOL:
        raise PoleError(f"sin(x/2**{m}) vanishes", index=m)
    small = np.abs(ch) < POLE_TOL
    if small.any():
        bad = int(np.argmax(small))
        raise PoleError(f"cos(x/2**{bad + 1}) vanishes (k={bad})", index=bad)
    c2h, c2l = _dd.sqr(ch, cl)
    th, tl = _dd.recip(c2h, c2l)
    th, tl = np.ldexp(th, -2 * (k[:-1] + 1)), np.ldexp(tl, -2 * (k[:-1] + 1))
    cos_sum = sum_arrays(th, tl)
    s2 = HiPrecValue(float(sh[-1]), float(sl[-1]))
    remainder = (1 / (s2 * s2)).ldexp(-2 * m)
    return RecursionDecomposition(x, m, cos_sum, remainder, cos_sum + remainder)


class SplitSums(NamedTuple):
    s1: HiPrecValue
    s2: HiPrecValue
    s1_ratio: float
    s2_geometric: float


def split_S1_S2(n: int, m: int, L: int) -> SplitSums:
    """S1 = sum_{k<=L}, S2 = sum_{L<k<m} of 4**-k / (n^3 cos^2(n / 2**(k+1))).

    ``s1_ratio`` is S1 * 3 * 4**L * n^3 / (4**(L+1) - 1), the reciprocal of the
    empirical constant in the S1 approximation; ``s2_geometric`` is the
    cos^2 = 1 value n^-3 (4**(-L-1) - 4**-m) / (3/4).
    """
    if n < 1 or m < 2 or not 0 <= L <= m - 2:
        raise DomainError("need n >= 1, m >= 2 and 0 <= L <= m - 2")
    k = np.arange(m)
    ah = np.ldexp(np.full(m, float(n)), -(k + 1))
    _, _, ch, cl = elementary.sin_cos(ah, np.zeros(m))
    small = np.abs(ch) < POLE_TOL
    if small.any():
        bad = int(np.argmax(small))
        raise PoleError(f"cos(n/2**{bad + 1}) vanishes (k={bad})", index=bad)
    th, tl = _dd.recip(*_dd.sqr(ch, cl))
    th, tl = np.ldexp(th, -2 * k), np.ldexp(tl, -2 * k)
    n3 = HiPrecValue.from_int(n**3)
    s1 = sum_arrays(th[: L + 1], tl[: L + 1]) / n3
    s2 = sum_arrays(th[L + 1 :], tl[L + 1 :]) / n3
    ratio = float(s1 * 3 * (4**L) * n**3 / (4 ** (L + 1) - 1))
    geo = float(Fraction(4 ** (m - L - 1) - 1, 4**m) / Fraction(3, 4) / n**3)
    return SplitSums(s1, s2, ratio, geo)


# ------------------------------------------------------------------ Abel / Stieltjes


def numerators(spec: SeriesSpec, n: np.ndarray):
    """a_n = f(phi n)**v w(n): the term without its 1/n**s factor."""
    fh, fl, _ = kernel_values(spec, n)
    if spec.weight is not None:
        fh, fl = _dd.mul(fh, fl, *spec.weight.values(n))
    return fh, fl


def partial_sum_function(spec: SeriesSpec, x: float) -> HiPrecValue:
    """A(x) = sum_{1 <= n <= floor(x)} a_n, with A(x) = 0 for x < 1."""
    top = math.floor(x)
    if top < 1:
        return ZERO
    return sum_arrays(*numerators(spec, np.arange(1, top + 1)))


def abel_check(spec: SeriesSpec, N: int) -> tuple[HiPrecValue, HiPrecValue]:
    """Direct sum to N against A(N) g(N) - sum_{n<N} A(n) (g(n+1) - g(n)), g = n**-s."""
    if N < 1:
        raise DomainError("N must be >= 1")
    n = np.arange(1, N + 1)
    ah, al = numerators(spec, n)
    gh, gl = elementary.inv_pow(n.astype(float), None, spec.s)
    lhs = sum_arrays(*_dd.mul(ah, al, gh, gl))
    # prefix sums A(n) in DD, sequential
    Ah, Al = np.empty(N), np.empty(N)
    ch, cl = 0.0, 0.0
    for i, (h, l) in enumerate(zip(ah.tolist(), al.tolist())):
        ch, cl = _dd.add(ch, cl, h, l)
        Ah[i], Al[i] = ch, cl
    dh, dl = _dd.sub(gh[1:], gl[1:], gh[:-1], gl[:-1])
    ph, pl = _dd.mul(Ah[:-1], Al[:-1], dh, dl)
    last = HiPrecValue(*_dd.mul(Ah[-1], Al[-1], gh[-1], gl[-1]))
    rhs = last - sum_arrays(ph, pl)
    return lhs, rhs


def stieltjes_floor_sum(spec: SeriesSpec, x_lo: float, x_hi: float) -> HiPrecValue:
    """Integral of the series integrand against d floor(x) over (x_lo, x_hi]."""
    if x_lo < 1:
        raise DomainError("x_lo must be >= 1")
    if x_hi < x_lo:
        raise DomainError("x_lo must not exceed x_hi")
    a, b = math.floor(x_lo) + 1, math.floor(x_hi)
    if b < a:
        return ZERO
    try:
        return partial_sum(spec, a, b).value
    except PoleError as exc:
        raise CommonDiscontinuityError(
            f"integrand pole coincides with the floor jump at n={exc.index}", index=exc.index
        ) from exc


# ------------------------------------------------------------------ other series


def character_series(chi, s: float, N: int) -> HiPrecValue:
    """sum_{n<=N} chi[(n-1) % k] / n**s."""
    if not s > 1:
        raise DomainError("character_series needs s > 1")
    weight = chi if isinstance(chi, PeriodicWeight) else PeriodicWeight(tuple(chi))
    return partial_sum(SeriesSpec("one", 0.0, s, weight=weight), 1, N).value


def cot_sec_identity_check(N: int, tol: float = 1e-18):
    """Returns (sum csc^2/n^3, sum cot^2/n^3, sum 1/n^3) over 1..N.

    The first minus the second must equal the third to ``tol`` relative.
    """
    csc = partial_sum(FLINT_HILLS, 1, N).value
    cot = partial_sum(SeriesSpec("cot", 2.0, 3.0), 1, N).value
    cube = partial_sum(SeriesSpec("one", 0.0, 3.0), 1, N).value
    gap = abs(float(csc - cot - cube))
    if gap > tol * float(cube):
        raise InternalConsistencyError(f"csc^2 - cot^2 relation off by {gap:.3e}")
    return csc, cot, cube
