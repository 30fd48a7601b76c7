import pytest
from hypothesis import given, settings, strategies as st

from contactorder.multipoly import MultiPoly
from contactorder.scalars import Scalar
from contactorder.textform import parse_poly


def p(text, nvars=2):
    return parse_poly(text, nvars)


# -- hypothesis strategies ---------------------------------------------

exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
coeffs = st.fractions(min_value=-9, max_value=9).filter(lambda f: f != 0)
polys = st.dictionaries(exponents, coeffs, max_size=4).map(
    lambda d: MultiPoly(2, {e: Scalar(str(c)) for e, c in d.items()})
)
nonzero_polys = polys.filter(lambda q: not q.is_zero())


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + MultiPoly.zero(2) == a
    assert a * MultiPoly.one(2) == a
    assert (a - a).is_zero()


@given(polys)
@settings(max_examples=40, deadline=None)
def test_partials_commute(a):
    assert a.partial(0).partial(1) == a.partial(1).partial(0)


@given(polys, polys)
@settings(max_examples=40, deadline=None)
def test_product_rule(a, b):
    lhs = (a * b).partial(0)
    assert lhs == a.partial(0) * b + a * b.partial(0)


@given(polys, nonzero_polys)
@settings(max_examples=60, deadline=None)
def test_exact_division_inverts_multiplication(a, q):
    assert (a * q).divide_exact(q) == a


@given(polys, nonzero_polys, nonzero_polys)
@settings(max_examples=30, deadline=None)
def test_gcd_divides_common_factor(a, b, r):
    g = (a * r).gcd(b * r)
    assert g.divide_exact(r.monic()) is not None
    if not (a * r).is_zero():
        assert (a * r).divide_exact(g) is not None
    if not (b * r).is_zero():
        assert (b * r).divide_exact(g) is not None


@given(polys)
@settings(max_examples=40, deadline=None)
def test_render_parse_roundtrip(a):
    assert parse_poly(a.render(), 2) == a


@given(polys)
@settings(max_examples=40, deadline=None)
def test_homogeneous_components_sum(a):
    total = MultiPoly.zero(2)
    for d, comp in a.homogeneous_components().items():
        assert comp.is_homogeneous() and comp.degree() == d
        total = total + comp
    assert total == a


# -- directed cases -----------------------------------------------------


def test_degree_conventions():
    assert MultiPoly.zero(2).degree() == -1
    assert MultiPoly.one(2).degree() == 0
    assert p("X^2*Y+1").degree() == 3
    assert p("X^2*Y+1").degree_in(1) == 1


def test_divide_exact_failure_is_none():
    assert p("X^2+Y").divide_exact(p("X+Y")) is None
    with pytest.raises(ZeroDivisionError):
        p("X").divide_exact(MultiPoly.zero(2))


def test_gcd_known_factor():
    a = p("X^2-Y^2") * p("X+2*Y")
    b = p("X^2+2*X*Y+Y^2")
    assert a.gcd(b) == p("X+Y")


def test_gcd_coprime():
    assert p("X^2+Y^2+1").gcd(p("X*Y+3")).is_constant()


def test_gcd_with_irrational_coefficients():
    r5 = Scalar.sqrt_of(5)
    f = MultiPoly.linear_form([Scalar(1), r5])
    a = f * p("X+1")
    b = f * p("Y+2")
    assert a.gcd(b) == f.monic()


def test_evaluate_and_substitute():
    f = p("X^2+3*X*Y")
    assert f.evaluate([Scalar(2), Scalar(-1)]) == Scalar(-2)
    g = f.substitute([p("Y"), p("X")])
    assert g == p("Y^2+3*X*Y")


def test_substitute_mismatch_raises():
    from contactorder.multipoly import PolynomialError

    with pytest.raises(PolynomialError):
        p("X").substitute([p("X")] * 3)
