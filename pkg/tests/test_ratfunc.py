import pytest

from contactorder.multipoly import MultiPoly, PolynomialError
from contactorder.ratfunc import RatFunc
from contactorder.textform import parse_poly


def rf(text, nvars=2):
    return RatFunc.parse(text, nvars)


def test_constructor_reduces_and_normalizes():
    f = RatFunc(parse_poly("2*X^2-2*Y^2", 2), parse_poly("4*X+4*Y", 2))
    assert f.is_polynomial()
    assert f.as_poly() == parse_poly("1/2*X-1/2*Y", 2)


def test_denominator_kept_monic():
    f = RatFunc(parse_poly("Y", 2), parse_poly("3*X+3", 2))
    assert f.den == parse_poly("X+1", 2)
    assert f.num == parse_poly("1/3*Y", 2)


def test_zero_denominator_raises():
    with pytest.raises(ZeroDivisionError):
        RatFunc(parse_poly("X", 2), MultiPoly.zero(2))


def test_field_operations():
    f = rf("X/(X+Y)")
    g = rf("Y/(X+Y)")
    assert f + g == RatFunc.one(2)
    assert (f * g).render() == "(X1*X2)/(X1^2+2*X1*X2+X2^2)"
    assert f / f == RatFunc.one(2)
    assert (f - f).is_zero()
    with pytest.raises(ZeroDivisionError):
        f / RatFunc.zero(2)


def test_cross_cancellation_in_products():
    f = rf("(X^2-Y^2)/(X+1)")
    g = rf("(X+1)/(X+Y)")
    assert (f * g).as_poly() == parse_poly("X-Y", 2)


def test_partial_quotient_rule():
    f = rf("X/Y")
    assert f.partial(0) == rf("1/Y")
    assert f.partial(1) == rf("-X/Y^2")


def test_as_poly_guard():
    with pytest.raises(PolynomialError):
        rf("X/Y").as_poly()


def test_render_parse_roundtrip():
    for text in ("(X1^2-X2^2)/(X1^2+X1*X2)", "0", "3/2*X1", "(X1)/(X2^3)"):
        f = rf(text)
        assert RatFunc.parse(f.render(), 2) == f
