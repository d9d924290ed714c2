"""Continued fractions, spike records and irrationality-exponent diagnostics.

Targets are given as decimal digit strings and converted to exact
fractions, so the Euclidean algorithm runs on integers.  A digit string
with ``d`` decimals only pins the target down to within ``10**-d``; a
convergent is trusted only when both ends of that interval share its
partial quotients.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .errors import DepthError, DomainError, ParseError
from .precision.constants import PI_DIGITS

MIN_DIGITS = 60
WORK_DIGITS = 50

# (upper bound, author, year) as commonly cited
HISTORICAL_MU_PI = (
    (42.0, "Mahler", 1953),
    (20.6, "Mignotte", 1974),
    (14.65, "Chudnovsky", 1982),
    (13.398, "Hata", 1993),
    (7.6063, "Salikhov", 2008),
)

_NUMBER = re.compile(r"^[+-]?(\d+)(?:\.(\d*))?$")


@dataclass(frozen=True)
class DigitString:
    value: Fraction
    decimals: int
    significant: int


def parse_digits(text: str, min_digits: int = MIN_DIGITS) -> DigitString:
    """Parse ``[sign]digits[.digits]``; surrounding whitespace is ignored."""
    s = text.strip()
    m = _NUMBER.match(s)
    if not m:
        raise ParseError(f"not a plain decimal digit string: {s[:40]!r}")
    whole, frac = m.group(1), m.group(2) or ""
    sig = len((whole + frac).lstrip("0"))
    if sig < min_digits:
        raise ParseError(f"need at least {min_digits} significant digits, got {sig}")
    value = Fraction(s)
    if value <= 0:
        raise ParseError("the target must be positive")
    return DigitString(value, len(frac), sig)


def load_digit_file(path) -> str:
    """Read a digit file: one number, optional sign, one period, ``#`` comments."""
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) != 1:
        raise ParseError(f"{path}: expected exactly one number line, found {len(lines)}")
    return lines[0]


def _cf(x: Fraction, limit: int) -> list[int]:
    out = []
    p, q = x.numerator, x.denominator
    while q and len(out) < limit:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    return out


def _dec(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _eff_exponent(err: Fraction, q: int) -> float:
    if q < 2 or err == 0:
        return math.nan
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS
        return float(-_dec(abs(err)).ln() / Decimal(q).ln())


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    error: Fraction  # alpha - p/q, exact for the digit-string value

    @property
    def abs_error(self) -> float:
        return float(abs(self.error))

    @property
    def eff_exponent(self) -> float:
        return _eff_exponent(self.error, self.q)


def safe_depth(digits: DigitString, limit: int = 10_000) -> int:
    """Number of convergents shared by every value within 10**-decimals of the digits."""
    width = Fraction(1, 10**digits.decimals)
    a = _cf(digits.value, limit)
    lo = _cf(digits.value - width, limit)
    hi = _cf(digits.value + width, limit)
    n = 0
    for x, y, z in zip(a, lo, hi):
        if not x == y == z:
            break
        n += 1
    # the last shared quotient can still differ by one unit inside the interval
    return max(n - 1, 0)


def convergents_of(alpha_digits: str = PI_DIGITS, count: int = 6, min_digits: int = MIN_DIGITS) -> list[Convergent]:
    """The first ``count`` convergents of the number written in ``alpha_digits``.

    A digit string whose exact value terminates after exactly ``count``
    quotients is accepted as an exact rational; otherwise the convergents
    must be determined by the digits (see :func:`safe_depth`).
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    digits = parse_digits(alpha_digits, min_digits)
    exact = digits.value
    quotients = _cf(exact, count + 1)
    if len(quotients) < count:
        raise DepthError(f"the target is rational with only {len(quotients)} convergents", max_count=len(quotients))
    terminates = len(quotients) == count
    quotients = quotients[:count]
    depth = safe_depth(digits)
    if count > depth and not terminates:
        raise DepthError(f"only {depth} convergents are determined by these digits", max_count=depth)
    out = []
    p0, q0, p1, q1 = 1, 0, quotients[0], 1
    out.append(Convergent(p1, q1, exact - p1))
    for a in quotients[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Convergent(p1, q1, exact - Fraction(p1, q1)))
    return out


def pi_convergents_upto(p_max: int, digits: str = PI_DIGITS) -> list[Convergent]:
    """Convergents of the target with numerator <= p_max."""
    conv = convergents_of(digits, safe_depth(parse_digits(digits)))
    return [c for c in conv if c.p <= p_max]


def spike_correlate(n_max: int, digits: str = PI_DIGITS) -> list[tuple[int, bool]]:
    """Running records of |csc(n)| for n <= n_max, flagged by convergent-numerator membership.

    n = 1 always opens the record list but is not a convergent numerator of pi.
    """
    from .series import spike_records

    nums = {c.p for c in pi_convergents_upto(n_max, digits)}
    return [(n, n in nums) for n, _ in spike_records(n_max)]


def effective_mu(conv: list[Convergent]) -> float:
    """Largest -ln|alpha - p/q| / ln q over convergents with q >= 2."""
    if not conv:
        raise DomainError("effective_mu needs at least one convergent")
    vals = [c.eff_exponent for c in conv if c.q >= 2 and c.error != 0]
    if not vals:
        raise DomainError("exponent undefined: no convergent with q >= 2 and nonzero error")
    return max(vals)


def epsilon_good(alpha_digits: str, p: int, q: int, mu: float, eps: float) -> bool:
    """|alpha - p/q| < q**-(mu - eps), evaluated with 50-digit decimals."""
    if q < 2:
        raise DomainError("q must be >= 2")
    if not eps > 0:
        raise DomainError("eps must be positive")
    alpha = parse_digits(alpha_digits, min_digits=1).value
    err = abs(alpha - Fraction(p, q))
    if err == 0:
        return True
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS
        rhs = (Decimal(q).ln() * Decimal(-(mu - eps))).exp()
        return _dec(err) < rhs


@dataclass(frozen=True)
class MuCondition:
    u: float
    v: float
    mu: float

    def __post_init__(self):
        if not self.u > 0 or not self.v >= 1 or not self.mu >= 1:
            raise DomainError("need u > 0, v >= 1 and mu >= 1")


@dataclass(frozen=True)
class ConvergenceVerdict:
    meiburg_converges: bool
    alekseyev_upper: float


def convergence_predicates(c: MuCondition) -> ConvergenceVerdict:
    """Convergence of sum csc^v(n) / n^u holds when mu < 1 + u/v; convergence forces mu <= 1 + u/v."""
    threshold = 1.0 + c.u / c.v
    return ConvergenceVerdict(c.mu < threshold, threshold)


@dataclass(frozen=True)
class FloorConstant:
    value: float
    p: int
    q: int


def floor_constant_C(conv: list[Convergent], exponent: float) -> FloorConstant:
    """min over convergents of q**exponent |alpha - p/q| and the convergent attaining it."""
    if not conv:
        raise DomainError("floor_constant_C needs at least one convergent")
    if not exponent > 0:
        raise DomainError("exponent must be positive")
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS
        e = Decimal(repr(float(exponent)))
        best = min(conv, key=lambda c: (Decimal(c.q).ln() * e).exp() * _dec(abs(c.error)))
        val = (Decimal(best.q).ln() * e).exp() * _dec(abs(best.error))
    return FloorConstant(float(val), best.p, best.q)
