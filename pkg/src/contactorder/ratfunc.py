"""Normalized quotients of multivariate polynomials.

A :class:`RatFunc` always keeps numerator and denominator coprime and
the denominator monic with respect to the graded-lex leading term, so
equality is plain structural equality.
"""

from __future__ import annotations

from contactorder.multipoly import MultiPoly, PolynomialError
from contactorder.scalars import Scalar


class RatFunc:
    """Reduced rational function num/den over the scalar field."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None, reduce: bool = True):
        if den is None:
            den = MultiPoly.one(num.nvars)
        if num.nvars != den.nvars:
            raise PolynomialError("variable count mismatch")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = MultiPoly.one(num.nvars)
        elif reduce:
            num, den = _reduce(num, den)
        if not den.is_constant() or not (den.constant_value() == Scalar(1)):
            lc = den.leading_coeff().inverse()
            num = num * lc
            den = den * lc
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p, MultiPoly.one(p.nvars), reduce=False)

    @classmethod
    def zero(cls, nvars: int) -> "RatFunc":
        return cls.from_poly(MultiPoly.zero(nvars))

    @classmethod
    def one(cls, nvars: int) -> "RatFunc":
        return cls.from_poly(MultiPoly.one(nvars))

    @classmethod
    def constant(cls, nvars: int, c) -> "RatFunc":
        return cls.from_poly(MultiPoly.constant(nvars, c))

    @classmethod
    def parse(cls, text: str, nvars: int) -> "RatFunc":
        from contactorder.textform import parse_ratfunc

        return parse_ratfunc(text, nvars)

    # -- queries ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise PolynomialError(f"not a polynomial: denominator {self.den.render()}")
        return self.num

    # -- field operations ---------------------------------------------

    @staticmethod
    def _coerce(x, nvars: int):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, MultiPoly):
            return RatFunc.from_poly(x)
        if isinstance(x, (int, Scalar)):
            return RatFunc.constant(nvars, x)
        return NotImplemented

    def __add__(self, other):
        other = RatFunc._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = RatFunc._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = RatFunc._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        # cross-reduce before multiplying to keep intermediates small
        a, d2 = _reduce(self.num, other.den)
        b, d1 = _reduce(other.num, self.den)
        return RatFunc(a * b, d1 * d2, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.den, self.num, reduce=False)

    def __truediv__(self, other):
        other = RatFunc._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc._coerce(other, self.nvars) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = RatFunc.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = RatFunc._coerce(other, self.nvars)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus -----------------------------------------------------

    def partial(self, i: int) -> "RatFunc":
        """Formal partial derivative (quotient rule)."""
        if self.is_polynomial():
            return RatFunc.from_poly(self.num.partial(i))
        n = self.num.partial(i) * self.den - self.num * self.den.partial(i)
        return RatFunc(n, self.den * self.den)

    # -- rendering ----------------------------------------------------

    def render(self) -> str:
        from contactorder.textform import render_ratfunc

        return render_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self.render()})"


def _reduce(num: MultiPoly, den: MultiPoly):
    if den.is_constant():
        c = den.constant_value().inverse()
        return num * c, MultiPoly.one(num.nvars)
    if num.is_zero():
        return num, MultiPoly.one(num.nvars)
    g = num.gcd(den)
    if not g.is_constant():
        num = num.divide_exact(g)
        den = den.divide_exact(g)
    return num, den
