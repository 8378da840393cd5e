"""Extended-range scalars: mantissa * 2**exponent with an unbounded exponent.

Doubles cannot hold the quantities that appear here: curve lengths as small
as exp(-2**40) and traces as large as exp(|t|/2 + |log eps|).  Only logs and
ratios of such values are ever needed, so a (float mantissa, int exponent)
pair gives enough precision with no external dependency.

The mantissa is kept normalized with |m| in [1, 2), or m == 0.0 for zero.
Values in double range round-trip exactly through ``from_float``/``float()``;
ordering and log extraction are exact to one ulp of the log.
"""

from __future__ import annotations

import math
from fractions import Fraction

_LN2 = math.log(2.0)
# 1/ln(2) to 40 decimal digits; exact enough that exp() of arguments around
# 2**40 still yields a mantissa correct to ~1e-24 relative.
_INV_LN2 = Fraction(14426950408889634073599246810018921374266, 10**40)
_ALIGN_LIMIT = 1100  # beyond this exponent gap the smaller addend is invisible


class ExtScalar:
    """A real number m * 2**e, |m| in [1,2) or m == 0."""

    __slots__ = ("m", "e")

    def __init__(self, mantissa: float = 0.0, exponent: int = 0):
        if mantissa == 0.0:
            self.m = 0.0
            self.e = 0
            return
        if not math.isfinite(mantissa):
            raise ValueError(f"non-finite mantissa {mantissa!r}")
        fm, fe = math.frexp(mantissa)  # |fm| in [0.5, 1)
        self.m = fm * 2.0
        self.e = exponent + fe - 1

    # -- constructors -------------------------------------------------

    @classmethod
    def from_float(cls, x: float) -> "ExtScalar":
        return cls(x, 0)

    @classmethod
    def exp(cls, x: float) -> "ExtScalar":
        """e**x for a float x, valid far beyond double exp range.

        The split x/ln2 = e + frac is done in exact rational arithmetic so
        the fractional part keeps full precision even for |x| ~ 2**40.
        """
        if x == 0.0:
            return cls(1.0, 0)
        if not math.isfinite(x):
            raise ValueError(f"non-finite exponent {x!r}")
        y = Fraction(x) * _INV_LN2
        e = math.floor(y)
        frac = float(y - e)  # in [0, 1)
        return cls(2.0 ** frac, e)

    # -- conversions ---------------------------------------------------

    def to_float(self) -> float:
        if self.m == 0.0:
            return 0.0
        try:
            return math.ldexp(self.m, self.e)
        except OverflowError:
            return math.copysign(math.inf, self.m)

    __float__ = to_float

    def log(self) -> float:
        """Natural log; exact to ~1 ulp of the result."""
        if self.m <= 0.0:
            raise ValueError("log of a non-positive ExtScalar")
        return math.log(self.m) + self.e * _LN2

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return self.m == 0.0

    def sign(self) -> int:
        return 0 if self.m == 0.0 else (1 if self.m > 0.0 else -1)

    # -- arithmetic ----------------------------------------------------

    def __mul__(self, other):
        o = _coerce(other)
        return ExtScalar(self.m * o.m, self.e + o.e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o.m == 0.0:
            raise ZeroDivisionError("ExtScalar division by zero")
        return ExtScalar(self.m / o.m, self.e - o.e)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __add__(self, other):
        o = _coerce(other)
        if self.m == 0.0:
            return o
        if o.m == 0.0:
            return self
        diff = self.e - o.e
        if diff >= 0:
            if diff > _ALIGN_LIMIT:
                return self
            return ExtScalar(self.m + math.ldexp(o.m, -diff), self.e)
        if -diff > _ALIGN_LIMIT:
            return o
        return ExtScalar(math.ldexp(self.m, diff) + o.m, o.e)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __neg__(self):
        if self.m == 0.0:
            return ExtScalar()
        r = ExtScalar.__new__(ExtScalar)
        r.m = -self.m
        r.e = self.e
        return r

    def __abs__(self):
        if self.m >= 0.0:
            return self
        return -self

    def sqrt(self) -> "ExtScalar":
        if self.m < 0.0:
            raise ValueError("sqrt of a negative ExtScalar")
        if self.m == 0.0:
            return ExtScalar()
        if self.e % 2 == 0:
            return ExtScalar(math.sqrt(self.m), self.e // 2)
        return ExtScalar(math.sqrt(2.0 * self.m), (self.e - 1) // 2)

    # -- ordering --------------------------------------------------------

    def _cmp(self, other) -> int:
        o = _coerce(other)
        sa, sb = self.sign(), o.sign()
        if sa != sb:
            return -1 if sa < sb else 1
        if sa == 0:
            return 0
        if self.e != o.e:
            less = self.e < o.e
            if sa < 0:
                less = not less
            return -1 if less else 1
        if self.m == o.m:
            return 0
        return -1 if self.m < o.m else 1

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (ExtScalar, int, float)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        return hash((self.m, self.e))

    def __repr__(self):
        return f"ExtScalar({self.m!r}, 2**{self.e})"


def _coerce(x) -> ExtScalar:
    if isinstance(x, ExtScalar):
        return x
    if isinstance(x, (int, float)):
        return ExtScalar(float(x), 0)
    raise TypeError(f"cannot mix ExtScalar with {type(x).__name__}")


ZERO = ExtScalar()
ONE = ExtScalar(1.0)
TWO = ExtScalar(2.0)

_SERIES_CUT = 1e-8
_EXP_CUT = 700.0


def ext_cosh(x: ExtScalar) -> ExtScalar:
    """cosh on ExtScalar, accurate from exp(-2**40) up to arguments ~1e12."""
    xa = abs(x)
    xf = xa.to_float()
    if xf < _SERIES_CUT:
        return ONE + xa * xa * 0.5
    if xf <= _EXP_CUT:
        return ExtScalar.from_float(math.cosh(xf))
    return (ExtScalar.exp(xf) + ExtScalar.exp(-xf)) * 0.5


def ext_sinh(x: ExtScalar) -> ExtScalar:
    xa = abs(x)
    xf = xa.to_float()
    if xf < _SERIES_CUT:
        y = xa + xa * xa * xa * (1.0 / 6.0)
    elif xf <= _EXP_CUT:
        y = ExtScalar.from_float(math.sinh(xf))
    else:
        y = (ExtScalar.exp(xf) - ExtScalar.exp(-xf)) * 0.5
    return y if x.sign() >= 0 else -y
