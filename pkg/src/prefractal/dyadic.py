"""Exact dyadic rational arithmetic for prefractal coordinates.

Values are numerator / 2**exponent, kept in lowest terms (odd numerator
unless the value is zero). Python integers are unbounded, so the level cap
enforced by the geometry layer is about keeping subdivision depths sane,
not about overflow.
"""

from __future__ import annotations

from fractions import Fraction

# Subdivision depth cap shared by the geometry constructors. Edge counts
# grow as 3**(n+1), so anything past ~12 is impractical long before the
# arithmetic is.
LEVEL_CAP = 24


class DyadicRational:
    """Immutable rational with a power-of-two denominator."""

    __slots__ = ("num", "exp")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            raise ValueError("exponent must be nonnegative, got %d" % exponent)
        # normalize: strip shared factors of two, zero is stored as 0/2^0
        if numerator == 0:
            exponent = 0
        else:
            while numerator % 2 == 0 and exponent > 0:
                numerator //= 2
                exponent -= 1
        object.__setattr__(self, "num", numerator)
        object.__setattr__(self, "exp", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    def __reduce__(self):
        return (DyadicRational, (self.num, self.exp))

    # -- arithmetic ---------------------------------------------------
    # dyadic op dyadic/int stays dyadic; mixing with a general Fraction
    # falls through to exact Fraction arithmetic

    def __add__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() + other
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        e = max(self.exp, other.exp)
        num = (self.num << (e - self.exp)) + (other.num << (e - other.exp))
        return DyadicRational(num, e)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() - other
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, Fraction):
            return other - self.as_fraction()
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return DyadicRational(-self.num, self.exp)

    def __abs__(self):
        return DyadicRational(abs(self.num), self.exp)

    def __mul__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() * other
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DyadicRational(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def halve(self, cap: int | None = LEVEL_CAP):
        """Divide by two, the only division the geometry ever needs."""
        if cap is not None and self.exp + 1 > cap:
            raise ValueError(
                "dyadic level cap exceeded: exponent %d would pass cap %d"
                % (self.exp + 1, cap)
            )
        return DyadicRational(self.num, self.exp + 1)

    # -- comparisons (exact, via cross-shifting) ----------------------

    def _cmp_key(self, other):
        e = max(self.exp, other.exp)
        return self.num << (e - self.exp), other.num << (e - other.exp)

    def __eq__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() == other
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.exp == other.exp

    def __lt__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() < other
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() <= other
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() > other
        return NotImplemented if _coerce(other) is NotImplemented else not self <= other

    def __ge__(self, other):
        if isinstance(other, Fraction):
            return self.as_fraction() >= other
        return NotImplemented if _coerce(other) is NotImplemented else not self < other

    def __hash__(self):
        # matches Fraction hashing so equal values hash equal across types
        return hash(self.as_fraction())

    # -- conversions ---------------------------------------------------

    # numerator/denominator make this a virtual numbers.Rational, so the
    # stdlib Fraction can mix with DyadicRational in arithmetic and
    # comparisons (exactly, never through floats)
    @property
    def numerator(self) -> int:
        return self.num

    @property
    def denominator(self) -> int:
        return 1 << self.exp

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self):
        return self.num / (1 << self.exp)

    def to_pair(self) -> tuple[int, int]:
        return (self.num, self.exp)

    @classmethod
    def from_pair(cls, pair) -> "DyadicRational":
        num, exp = pair
        return cls(int(num), int(exp))

    def __repr__(self):
        if self.exp == 0:
            return "DyadicRational(%d)" % self.num
        return "DyadicRational(%d, %d)" % (self.num, self.exp)

    def __str__(self):
        if self.exp == 0:
            return str(self.num)
        return "%d/2^%d" % (self.num, self.exp)


def _coerce(value):
    if isinstance(value, DyadicRational):
        return value
    if isinstance(value, int):
        return DyadicRational(value, 0)
    if isinstance(value, Fraction):
        num, den = value.numerator, value.denominator
        exp = den.bit_length() - 1
        if den == 1 << exp:
            return DyadicRational(num, exp)
        # non-dyadic rationals interoperate through Fraction arithmetic
        return NotImplemented
    return NotImplemented


import numbers

numbers.Rational.register(DyadicRational)

ZERO = DyadicRational(0)
ONE = DyadicRational(1)
