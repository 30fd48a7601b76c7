import pytest

from contactorder.derivations import (
    Derivation,
    DerivationError,
    bracket,
    euler_derivation,
    from_P_frame,
    jacobian,
    nabla,
    parse_derivation,
    primitive_derivation,
    to_P_frame,
)
from contactorder.ratfunc import RatFunc
from contactorder.textform import parse_poly


def test_euler_scales_homogeneous():
    e = euler_derivation(2)
    f = parse_poly("X^3*Y+2*X*Y^3", 2)
    assert e.apply(f).as_poly() == f * 4


def test_apply_linearity_and_leibniz():
    theta = Derivation([parse_poly("Y", 2), parse_poly("X^2", 2)])
    f, g = parse_poly("X+Y", 2), parse_poly("X*Y", 2)
    assert theta.apply(f * g) == theta.apply(f) * g + f * theta.apply(g)
    assert theta.apply(f + g) == theta.apply(f) + theta.apply(g)


def test_bracket_antisymmetric_and_jacobi():
    a = Derivation([parse_poly("Y", 2), parse_poly("X", 2)])
    b = Derivation([parse_poly("X^2", 2), parse_poly("0", 2)])
    c = euler_derivation(2)
    assert bracket(a, b) == -bracket(b, a)
    jac = (
        bracket(a, bracket(b, c))
        + bracket(b, bracket(c, a))
        + bracket(c, bracket(a, b))
    )
    assert jac.is_zero()


def test_nabla_is_connection():
    # nabla_xi(f * eta) = xi(f) * eta + f * nabla_xi(eta)
    xi = Derivation([parse_poly("Y", 2), parse_poly("X", 2)])
    eta = Derivation([parse_poly("X*Y", 2), parse_poly("Y^2", 2)])
    f = parse_poly("X^2+Y", 2)
    lhs = nabla(xi, f * eta)
    rhs = xi.apply(f) * eta + f * nabla(xi, eta)
    assert lhs == rhs


def test_nabla_of_euler_is_identity():
    e = euler_derivation(2)
    eta = Derivation([RatFunc.parse("X^2/Y", 2), RatFunc.parse("X*Y", 2)])
    assert nabla(eta, e) == eta


def test_jacobian_entries():
    j = jacobian([parse_poly("X^2+Y^2", 2), parse_poly("X^2*Y^2", 2)])
    assert j[0, 0].as_poly() == parse_poly("2*X", 2)
    assert j[1, 1].as_poly() == parse_poly("2*X^2*Y", 2)
    with pytest.raises(DerivationError):
        jacobian([parse_poly("X", 2)])


def test_primitive_derivation_b2(b2_ctx):
    d = primitive_derivation(b2_ctx.datum, b2_ctx.inv)
    delta = b2_ctx.delta
    assert d.coeffs[0] == RatFunc(parse_poly("-2*Y", 2), delta)
    assert d.coeffs[1] == RatFunc(parse_poly("2*X", 2), delta)
    p1, p2 = b2_ctx.inv.polys
    assert d.apply(p1).is_zero()
    assert d.apply(p2) == RatFunc.one(2)


def test_p_frame_roundtrip(b2_ctx):
    inv = b2_ctx.inv
    e = euler_derivation(2)
    frame = to_P_frame(e, inv)
    assert frame[0].as_poly() == inv.polys[0] * 2
    assert frame[1].as_poly() == inv.polys[1] * 4
    assert from_P_frame(frame, inv) == e


def test_serialization_roundtrip(b2_ctx):
    theta = Derivation([RatFunc.parse("X^2/Y", 2), RatFunc.parse("3*X*Y", 2)])
    assert parse_derivation(theta.to_text(), 2) == theta
    # invariant-frame input
    d = parse_derivation("dP 0\ndP 1", 2, b2_ctx.inv)
    assert d == primitive_derivation(b2_ctx.datum, b2_ctx.inv)
    with pytest.raises(DerivationError):
        parse_derivation("dQ 1\ndQ 0", 2)
    with pytest.raises(DerivationError):
        parse_derivation("dP 0\ndP 1", 2)
