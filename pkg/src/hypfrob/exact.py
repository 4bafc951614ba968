"""Exact value types for report arithmetic: rationals with a sqrt(q) part.

Trace statistics with odd powers carry a half-integer power of q, so
ensemble averages live in Q + Q*sqrt(q).  Keeping them exact makes
dual-path identities integer assertions and report output bit-stable.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt


def _fmt_fraction(x):
    x = Fraction(x)
    return f"{x.numerator}" if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class QSqrt:
    """Exact element a + b*sqrt(q) of Q(sqrt(q)), q a non-square positive int."""
    q: int
    a: Fraction
    b: Fraction

    @classmethod
    def of(cls, q, a, b=0):
        return cls(q, Fraction(a), Fraction(b))

    def __add__(self, other):
        other = self._coerce(other)
        return QSqrt(self.q, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self._coerce(other)
        return QSqrt(self.q, self.a - other.a, self.b - other.b)

    def __mul__(self, other):
        other = self._coerce(other)
        return QSqrt(self.q,
                     self.a * other.a + self.q * self.b * other.b,
                     self.a * other.b + self.b * other.a)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def _coerce(self, other):
        if isinstance(other, QSqrt):
            if other.q != self.q:
                raise ValueError("mixed sqrt fields")
            return other
        return QSqrt(self.q, Fraction(other), Fraction(0))

    def __float__(self):
        return float(self.a) + float(self.b) * sqrt(self.q)

    def exact_str(self):
        if self.b == 0:
            return _fmt_fraction(self.a)
        tail = f"{_fmt_fraction(self.b)}*sqrt({self.q})"
        if self.a == 0:
            return tail
        return f"{_fmt_fraction(self.a)} + {tail}" if self.b > 0 else \
            f"{_fmt_fraction(self.a)} - {_fmt_fraction(-self.b)}*sqrt({self.q})"


@dataclass(frozen=True)
class HalfPowerRational:
    """Exact value frac * q^(1/2) when `half` is set, else just frac.

    The natural form of trace-product averages: an integer total over the
    denominator (q-1) q^{2g} q^{ceil(S/2)}, times sqrt(q) when S is odd.
    """
    q: int
    frac: Fraction
    half: bool

    @classmethod
    def from_scaled_integer(cls, q, numerator, curves, half_power_sum):
        """Build sum/(curves * q^(S/2)) from the integer numerator and S."""
        if numerator == 0:
            return cls(q, Fraction(0), False)
        if half_power_sum % 2 == 0:
            return cls(q, Fraction(numerator, curves * q ** (half_power_sum // 2)), False)
        return cls(q, Fraction(numerator, curves * q ** ((half_power_sum + 1) // 2)), True)

    def __float__(self):
        v = float(self.frac)
        return v * sqrt(self.q) if self.half else v

    def exact_str(self):
        base = _fmt_fraction(self.frac)
        return f"{base} * q^(1/2)" if self.half else base


def fraction_str(x):
    return _fmt_fraction(x)
