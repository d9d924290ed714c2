from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from . import _dd
from .constants import dd_from_fraction


@dataclass(frozen=True, slots=True)
class HiPrecValue:
    """A double-double real: the unevaluated sum ``hi + lo``.

    Normalised so that ``|lo| <= ulp(hi) / 2``; roughly 31 significant
    decimal digits.  Arithmetic is exact-rounding free of the usual
    cancellation problems for operands in the normal double range.
    """

    hi: float
    lo: float = 0.0

    def __post_init__(self):
        # numpy scalars sneak in from the array kernels
        if type(self.hi) is not float:
            object.__setattr__(self, "hi", float(self.hi))
        if type(self.lo) is not float:
            object.__setattr__(self, "lo", float(self.lo))

    # construction

    @classmethod
    def of(cls, x) -> HiPrecValue:
        if isinstance(x, HiPrecValue):
            return x
        if isinstance(x, int):
            return cls.from_int(x)
        if isinstance(x, Fraction):
            return cls(*dd_from_fraction(x))
        if isinstance(x, str):
            return cls(*dd_from_fraction(Fraction(x)))
        return cls(float(x), 0.0)

    @classmethod
    def from_int(cls, n: int) -> HiPrecValue:
        hi = float(n)
        lo = float(n - int(hi)) if abs(n) >= 2**53 else 0.0
        return cls(hi, lo)

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    # arithmetic

    def __add__(self, other) -> HiPrecValue:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return HiPrecValue(*_dd.add(self.hi, self.lo, o.hi, o.lo))

    __radd__ = __add__

    def __sub__(self, other) -> HiPrecValue:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return HiPrecValue(*_dd.sub(self.hi, self.lo, o.hi, o.lo))

    def __rsub__(self, other) -> HiPrecValue:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> HiPrecValue:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return HiPrecValue(*_dd.mul(self.hi, self.lo, o.hi, o.lo))

    __rmul__ = __mul__

    def __truediv__(self, other) -> HiPrecValue:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if o.hi == 0.0:
            raise ZeroDivisionError("HiPrecValue division by zero")
        return HiPrecValue(*_dd.div(self.hi, self.lo, o.hi, o.lo))

    def __rtruediv__(self, other) -> HiPrecValue:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> HiPrecValue:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        result = HiPrecValue(1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self) -> HiPrecValue:
        return HiPrecValue(-self.hi, -self.lo)

    def __pos__(self) -> HiPrecValue:
        return self

    def __abs__(self) -> HiPrecValue:
        return -self if self.hi < 0.0 or (self.hi == 0.0 and self.lo < 0.0) else self

    def sqrt(self) -> HiPrecValue:
        if self.hi < 0.0:
            raise ValueError("square root of a negative HiPrecValue")
        return HiPrecValue(*_dd.sqrt_scalar(self.hi, self.lo))

    def ldexp(self, k: int) -> HiPrecValue:
        return HiPrecValue(*_dd.ldexp(self.hi, self.lo, k))

    # comparison / conversion

    def _key(self):
        return (self.hi, self.lo)

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._key() == o._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._key() < o._key()

    def __le__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._key() <= o._key()

    def __gt__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._key() > o._key()

    def __ge__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._key() >= o._key()

    def __float__(self) -> float:
        return self.hi + self.lo

    def __bool__(self) -> bool:
        return self.hi != 0.0

    def __repr__(self) -> str:
        return f"HiPrecValue({self.hi!r}, {self.lo!r})"

    def __str__(self) -> str:
        return format(self, ".31g")

    def __format__(self, spec: str) -> str:
        if not spec:
            return str(self)
        # decimal rendering of the exact two-term value
        from decimal import Context, Decimal

        exact = Decimal(self.hi) + Decimal(self.lo)
        if spec.endswith("g") and spec.startswith("."):
            digits = int(spec[1:-1])
            return format(Context(prec=digits).plus(exact), "g")
        return format(float(self), spec)


ZERO = HiPrecValue(0.0, 0.0)
ONE = HiPrecValue(1.0, 0.0)


def _coerce(x) -> HiPrecValue | None:
    if isinstance(x, HiPrecValue):
        return x
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return HiPrecValue.from_int(x)
    if isinstance(x, Fraction):
        return HiPrecValue(*dd_from_fraction(x))
    if isinstance(x, Real):
        return HiPrecValue(float(x), 0.0)
    return None
