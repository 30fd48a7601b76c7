import pytest
from hypothesis import given, settings, strategies as st

from contactorder.matrices import (
    PolyMatrix,
    SingularMatrixError,
    solve_linear_scalar,
)
from contactorder.multipoly import MultiPoly
from contactorder.ratfunc import RatFunc
from contactorder.scalars import Scalar
from contactorder.textform import parse_poly


def mat(rows, nvars=2):
    return PolyMatrix(nvars, [[parse_poly(x, nvars) for x in row] for row in rows])


# -- hypothesis ---------------------------------------------------------

entries = st.dictionaries(
    st.tuples(st.integers(0, 1), st.integers(0, 1)),
    st.integers(-5, 5).filter(bool),
    max_size=2,
).map(lambda d: MultiPoly(2, {e: Scalar(c) for e, c in d.items()}))

matrices3 = st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3).map(
    lambda rows: PolyMatrix(2, rows)
)


def _cofactor_det(m):
    n = m.rows
    if n == 1:
        return m[0, 0]
    total = RatFunc.zero(m.nvars)
    for j in range(n):
        term = m[0, j] * _cofactor_det(m.minor(0, j))
        total = total + term if j % 2 == 0 else total - term
    return total


@given(matrices3)
@settings(max_examples=40, deadline=None)
def test_bareiss_matches_cofactor_expansion(m):
    assert m.det() == _cofactor_det(m)


@given(matrices3, matrices3)
@settings(max_examples=25, deadline=None)
def test_det_multiplicative(a, b):
    assert (a * b).det() == a.det() * b.det()


@given(matrices3)
@settings(max_examples=25, deadline=None)
def test_adjugate_identity(a):
    d = a.det()
    prod = a * a.adjugate()
    for i in range(3):
        for j in range(3):
            assert prod[i, j] == (d if i == j else RatFunc.zero(2))


# -- directed -----------------------------------------------------------


def test_inverse_roundtrip():
    a = mat([["X+1", "Y"], ["1", "X"]])
    assert a * a.inverse() == PolyMatrix.identity(2, 2)


def test_singular_inverse_raises():
    a = mat([["X", "X"], ["Y", "Y"]])
    with pytest.raises(SingularMatrixError):
        a.inverse()


def test_det_with_rational_entries():
    a = PolyMatrix(2, [[RatFunc.parse("X/Y", 2), 1], [1, RatFunc.parse("Y/X", 2)]])
    assert a.det().is_zero()


def test_solve_unique():
    sol = solve_linear_scalar([[1, 1], [1, -1]], [3, 1])
    assert sol.is_unique()
    assert sol.values == [Scalar(2), Scalar(1)]


def test_solve_no_solution():
    sol = solve_linear_scalar([[1, 1], [2, 2]], [1, 3])
    assert sol.status == "no_solution"


def test_solve_underdetermined():
    sol = solve_linear_scalar([[1, 1], [2, 2]], [1, 2])
    assert sol.status == "underdetermined"


def test_solve_overdetermined_consistent():
    sol = solve_linear_scalar([[1, 0], [0, 1], [1, 1]], [2, 3, 5])
    assert sol.is_unique()
    assert sol.values == [Scalar(2), Scalar(3)]
