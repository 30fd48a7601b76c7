"""Exact matrices of rational functions and scalar linear solving.

Determinants of polynomial matrices use fraction-free Bareiss
elimination, so no rational-function normalization (and in particular no
gcd) happens along the way; matrices with genuine rational entries are
cleared to a polynomial matrix first and the tracked divisor is applied
once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from contactorder.multipoly import MultiPoly, PolynomialError
from contactorder.ratfunc import RatFunc
from contactorder.scalars import Scalar


class SingularMatrixError(ArithmeticError):
    """Raised when inverting a matrix whose determinant vanishes."""

    def __init__(self, determinant: RatFunc):
        self.determinant = determinant
        super().__init__("matrix is singular: det = " + determinant.render())


def _coerce_entry(x, nvars: int) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc.from_poly(x)
    if isinstance(x, (int, Scalar)):
        return RatFunc.constant(nvars, x)
    raise PolynomialError(f"cannot use {type(x).__name__} as a matrix entry")


class PolyMatrix:
    """Rectangular matrix with RatFunc entries (polynomials coerce)."""

    __slots__ = ("nvars", "rows", "cols", "entries")

    def __init__(self, nvars: int, entries):
        self.nvars = nvars
        self.entries = [[_coerce_entry(x, nvars) for x in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise PolynomialError("ragged matrix")

    @classmethod
    def identity(cls, nvars: int, n: int) -> "PolyMatrix":
        return cls(nvars, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_scalar_rows(cls, nvars: int, rows) -> "PolyMatrix":
        return cls(nvars, rows)

    def __getitem__(self, ij) -> RatFunc:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(x.render() for x in row) for row in self.entries
        )
        return f"PolyMatrix[{body}]"

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.nvars,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.nvars, [[fn(x) for x in row] for row in self.entries])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise PolynomialError("matrix shape mismatch in addition")
        return PolyMatrix(
            self.nvars,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + other.map(lambda x: -x)

    def __neg__(self) -> "PolyMatrix":
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar, MultiPoly, RatFunc)):
            c = _coerce_entry(other, self.nvars)
            return self.map(lambda x: x * c)
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise PolynomialError("matrix shape mismatch in product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = RatFunc.zero(self.nvars)
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.nvars, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar, MultiPoly, RatFunc)):
            return self * other
        return NotImplemented

    def is_square(self) -> bool:
        return self.rows == self.cols

    def all_polynomial(self) -> bool:
        return all(x.is_polynomial() for row in self.entries for x in row)

    def poly_entries(self) -> List[List[MultiPoly]]:
        return [[x.as_poly() for x in row] for row in self.entries]

    # -- determinant and inverse --------------------------------------

    def det(self) -> RatFunc:
        if not self.is_square():
            raise PolynomialError("determinant of a non-square matrix")
        if self.rows == 0:
            return RatFunc.one(self.nvars)
        if self.all_polynomial():
            return RatFunc.from_poly(_bareiss_det(self.poly_entries(), self.nvars))
        # clear denominators row by row, divide back out at the end
        cleared = []
        divisor = MultiPoly.one(self.nvars)
        for row in self.entries:
            mult = MultiPoly.one(self.nvars)
            for x in row:
                if not x.is_polynomial():
                    mult = mult * x.den
            cleared.append([(x * mult).as_poly() for x in row])
            divisor = divisor * mult
        return RatFunc(_bareiss_det(cleared, self.nvars), divisor)

    def minor(self, i: int, j: int) -> "PolyMatrix":
        return PolyMatrix(
            self.nvars,
            [
                [self.entries[r][c] for c in range(self.cols) if c != j]
                for r in range(self.rows)
                if r != i
            ],
        )

    def adjugate(self) -> "PolyMatrix":
        n = self.rows
        if n == 1:
            return PolyMatrix.identity(self.nvars, 1)
        cof = []
        for i in range(n):
            row = []
            for j in range(n):
                m = self.minor(i, j).det()
                if (i + j) % 2:
                    m = -m
                row.append(m)
            cof.append(row)
        return PolyMatrix(self.nvars, cof).transpose()

    def inverse(self) -> "PolyMatrix":
        if not self.is_square():
            raise PolynomialError("inverse of a non-square matrix")
        d = self.det()
        if d.is_zero():
            raise SingularMatrixError(d)
        inv_d = d.inverse()
        return self.adjugate().map(lambda x: x * inv_d)


def _bareiss_det(entries: List[List[MultiPoly]], nvars: int) -> MultiPoly:
    """Fraction-free Bareiss determinant of a polynomial matrix."""
    n = len(entries)
    m = [list(row) for row in entries]
    sign = 1
    prev = MultiPoly.one(nvars)
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if pivot is None:
                return MultiPoly.zero(nvars)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                q = num.divide_exact(prev)
                if q is None:
                    raise PolynomialError("Bareiss division failed (non-exact)")
                m[i][j] = q
            m[i][k] = MultiPoly.zero(nvars)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d


# ---------------------------------------------------------------------
# scalar linear algebra
# ---------------------------------------------------------------------


@dataclass
class LinearSolution:
    """Verdict of exact Gaussian elimination.

    status is one of ``unique``, ``no_solution``, ``underdetermined``;
    values holds the solution vector only in the unique case.
    """

    status: str
    values: Optional[List[Scalar]] = None

    def is_unique(self) -> bool:
        return self.status == "unique"


def solve_linear_scalar(a_rows, b) -> LinearSolution:
    """Solve A x = b exactly over the scalar field.

    All three verdicts are ordinary results; nothing raises.
    """
    rows = [[x if isinstance(x, Scalar) else Scalar(x) for x in row] for row in a_rows]
    rhs = [x if isinstance(x, Scalar) else Scalar(x) for x in b]
    if len(rows) != len(rhs):
        raise PolynomialError("right-hand side length mismatch")
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [rows[i] + [rhs[i]] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if not aug[i][c].is_zero()), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not aug[i][ncols].is_zero():
            return LinearSolution("no_solution")
    if len(pivots) < ncols:
        return LinearSolution("underdetermined")
    values = [Scalar(0)] * ncols
    for i, c in enumerate(pivots):
        values[c] = aug[i][ncols]
    return LinearSolution("unique", values)
