"""Exact scalars: rationals and real quadratic extensions Q(sqrt(d)).

A :class:`Scalar` is either a rational number or ``a + b*sqrt(d)`` with
``a, b`` rational and ``d`` a fixed square-free positive integer.  All
arithmetic is exact; the rational part is backed by ``gmpy2.mpq``.

A value with ``b == 0`` is stored with ``d == 0`` so that plain rationals
compare and hash uniformly regardless of which field they were created in.
Mixing two values with different nonzero ``d`` is an error.
"""

from __future__ import annotations

from gmpy2 import mpq


class ScalarError(ArithmeticError):
    pass


def _as_mpq(x) -> mpq:
    if type(x) is mpq:
        return x
    return mpq(x)


class Scalar:
    """Exact element of Q or Q(sqrt(d))."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = _as_mpq(a)
        b = _as_mpq(b)
        if b == 0:
            d = 0
        elif d <= 1:
            raise ScalarError("irrational part requires a square-free d > 1")
        self.a = a
        self.b = b
        self.d = d

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, p, q=1) -> "Scalar":
        return cls(mpq(p, q))

    @classmethod
    def sqrt_of(cls, d: int) -> "Scalar":
        """The element sqrt(d)."""
        return cls(0, 1, d)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        """Sign of the real number a + b*sqrt(d)."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        # compare a^2 against d*b^2 on the side where signs disagree
        if self.a > 0 and self.b > 0:
            return 1
        if self.a < 0 and self.b < 0:
            return -1
        big_rational = self.a * self.a > self.d * self.b * self.b
        if self.a > 0:
            return 1 if big_rational else -1
        return -1 if big_rational else 1

    # -- field coercion ----------------------------------------------

    def _join_d(self, other: "Scalar") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise ScalarError(f"incompatible quadratic fields sqrt({self.d}) vs sqrt({other.d})")

    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int) or type(x) is mpq:
            return Scalar(x)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.a + other.a, self.b + other.b, self._join_d(other))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.a - other.a, self.b - other.b, self._join_d(other))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._join_d(other)
        if self.b == 0 and other.b == 0:
            return Scalar(self.a * other.a)
        return Scalar(
            self.a * other.a + d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        if self.b == 0:
            return Scalar(1 / self.a)
        norm = self.a * self.a - self.d * self.b * self.b
        # norm == 0 would force sqrt(d) rational, impossible for square-free d > 1
        return Scalar(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Scalar(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        other = Scalar._coerce(other)
        return (self - other).sign() < 0

    def __le__(self, other):
        other = Scalar._coerce(other)
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = Scalar._coerce(other)
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = Scalar._coerce(other)
        return (self - other).sign() >= 0

    # -- rendering ----------------------------------------------------

    def __repr__(self):
        return f"Scalar({self.render()})"

    def render(self) -> str:
        """Canonical text: ``p/q`` or ``p/q+r/s*sqrt(d)``."""
        if self.b == 0:
            return _render_mpq(self.a)
        if self.a == 0:
            rational = ""
        else:
            rational = _render_mpq(self.a)
        irr = _render_mpq(self.b)
        if irr == "1":
            irr_part = f"sqrt({self.d})"
        elif irr == "-1":
            irr_part = f"-sqrt({self.d})"
        else:
            irr_part = f"{irr}*sqrt({self.d})"
        if not rational:
            return irr_part
        if irr_part.startswith("-"):
            return rational + irr_part
        return rational + "+" + irr_part

    def is_composite_text(self) -> bool:
        """True if :meth:`render` yields a sum (needs parentheses in a product)."""
        return self.a != 0 and self.b != 0


def _render_mpq(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


ZERO = Scalar(0)
ONE = Scalar(1)
