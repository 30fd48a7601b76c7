import pytest

from contactorder.derivations import Derivation, nabla
from contactorder.filtration import (
    FiltrationError,
    _DQ,
    nabla_D_inverse_E,
    perturbed_membership_report,
    run_verification,
    verify_basis_certification,
    verify_basis_equality,
    verify_bracket_identity,
    verify_commutator_rule,
    verify_covariant_columns,
    verify_frame_change,
    verify_inverse_flow,
    verify_b_identities,
)
from contactorder.matrices import PolyMatrix
from contactorder.multipoly import MultiPoly
from contactorder.scalars import Scalar
from contactorder.textform import parse_poly


def pp(text):
    return parse_poly(text, 2)


def test_low_order_bases_b2(b2_ctx):
    # m = 0: columns of the Gram matrix
    basis0 = b2_ctx.filtration_basis(0)
    gram = b2_ctx.datum.gram
    for j, theta in enumerate(basis0):
        assert theta.poly_coeffs() == [
            MultiPoly.constant(2, gram[i][j]) for i in range(2)
        ]
    # m = 1: twice the Euler derivation and the classical degree-3 member
    basis1 = b2_ctx.filtration_basis(1)
    assert basis1[0].poly_coeffs() == [pp("2*X"), pp("2*Y")]
    assert basis1[1].poly_coeffs() == [pp("2*X*Y^2"), pp("2*X^2*Y")]
    # the degree-3 member maps X - Y to -2XY(X - Y)
    assert basis1[1].apply(pp("X-Y")).as_poly() == pp("-2*X^2*Y+2*X*Y^2")


def test_membership_and_witness(b2_ctx):
    basis = b2_ctx.filtration_basis(3)
    for theta in basis:
        assert b2_ctx.membership_check(theta, 3)
    bad = Derivation([pp("X^2"), pp("0")])
    assert not b2_ctx.membership_check(bad, 2)
    witness = b2_ctx.membership_witness(bad, 2)
    assert witness is not None and "divisible" in witness


def test_determinant_criterion(b2_ctx):
    basis = b2_ctx.filtration_basis(2)
    assert b2_ctx.basis_determinant_check(basis, 2)
    # swapping in a duplicate column must fail
    assert not b2_ctx.basis_determinant_check([basis[0], basis[0]], 2)
    # a basis of the wrong order must fail the exponent
    assert not b2_ctx.basis_determinant_check(basis, 4)


def test_to_invariant_coords(b2_ctx):
    g = b2_ctx.gram_induced()
    g_inv = b2_ctx.invariant_matrix(g)
    assert g_inv[0, 0].as_poly() == pp("4*X")      # 4 P1, written in P-variables
    assert g_inv[0, 1].as_poly() == pp("8*Y")      # 8 P2
    assert g_inv[1, 1].as_poly() == pp("4*X*Y")    # 4 P1 P2
    assert b2_ctx.to_invariant_coords(pp("X^3*Y")) is None


def test_dq_matches_generic_connection(b2_ctx):
    # dual route: the delta-quotient connection against the generic
    # rational-function connection on the derivation algebra
    d = b2_ctx.primitive()
    e = b2_ctx.euler()
    dq = b2_ctx.dq_nabla(b2_ctx.dq_from_derivation(d), b2_ctx.dq_from_derivation(e))
    assert b2_ctx.dq_to_derivation(dq) == nabla(d, e)
    dq2 = b2_ctx.dq_nabla(b2_ctx.dq_from_derivation(d), dq)
    assert b2_ctx.dq_to_derivation(dq2) == nabla(d, nabla(d, e))


def test_dq_bracket_and_alignment(b2_ctx):
    d_dq = _DQ(b2_ctx.D_vec, 1)
    e_dq = b2_ctx.dq_from_derivation(b2_ctx.euler())
    # [E, D] = -h D for the Euler derivation and degree -h primitive flow
    br = b2_ctx.dq_bracket(e_dq, d_dq)
    h = b2_ctx.datum.coxeter_number
    assert b2_ctx.dq_equal(br, b2_ctx.dq_scale(d_dq, Scalar(-h)))


def test_b_matrix_oracles(b2_ctx):
    b1 = b2_ctx.invariant_matrix(b2_ctx.b_matrix(1))
    assert b1[0, 0].is_zero() and b1[0, 1].as_poly() == pp("6")
    assert b1[1, 0].as_poly() == pp("2") and b1[1, 1].as_poly() == pp("2*X")
    assert b2_ctx.b_matrix(1).det().as_poly() == MultiPoly.constant(2, -12)
    b2m = b2_ctx.invariant_matrix(b2_ctx.b_matrix(2))
    assert b2m[0, 1].as_poly() == pp("14") and b2m[1, 0].as_poly() == pp("10")
    assert b2m[1, 1].as_poly() == pp("6*X")
    assert b2_ctx.b_matrix(2).det().as_poly() == MultiPoly.constant(2, -140)


def test_inverse_flow_independent_forward_check(b2_ctx):
    # dual route: check nabla_D^k zeta = E with the generic connection,
    # not the delta-quotient engine that produced zeta
    d = b2_ctx.primitive()
    for k in (1, 2):
        zeta = nabla_D_inverse_E(b2_ctx, k)
        out = zeta
        for _ in range(k):
            out = nabla(d, out)
        assert out == b2_ctx.euler()
        assert b2_ctx.membership_check(zeta, 2 * k - 1)


def test_inverse_flow_degree(b2_ctx):
    h = b2_ctx.datum.coxeter_number
    for k in (1, 2):
        zeta = nabla_D_inverse_E(b2_ctx, k)
        for c in zeta.poly_coeffs():
            assert c.is_homogeneous() and c.degree() == k * h + 1


def test_all_identity_checks_pass_a2(a2_ctx):
    reports = []
    reports.append(verify_basis_certification(a2_ctx, 4))
    reports.extend(verify_b_identities(a2_ctx, 2))
    reports.append(verify_covariant_columns(a2_ctx, 1))
    reports.extend(verify_commutator_rule(a2_ctx, 2))
    reports.append(verify_bracket_identity(a2_ctx))
    reports.append(verify_frame_change(a2_ctx))
    reports.append(verify_inverse_flow(a2_ctx, 1))
    reports.extend(verify_basis_equality(a2_ctx, 1))
    for r in reports:
        assert r.passed, r.render_line()


def test_run_verification_shape(a2_ctx):
    reports = run_verification(a2_ctx, m_max=2, k_max=1)
    identities = {r.identity for r in reports}
    assert "invariant_set" in identities
    assert "basis_certification" in identities
    assert "basis_equality_even" in identities
    assert all(r.passed for r in reports)
    record = reports[0].to_record()
    assert set(record) == {"label", "identity", "params", "status", "witness"}


def test_perturbed_membership_fails_with_witness(b2_ctx):
    report = perturbed_membership_report(b2_ctx)
    assert not report.passed
    assert report.witness


def test_negative_inputs(b2_ctx):
    with pytest.raises(FiltrationError):
        b2_ctx.filtration_basis(-1)
    with pytest.raises(FiltrationError):
        b2_ctx.b_matrix(0)
    with pytest.raises(FiltrationError):
        nabla_D_inverse_E(b2_ctx, -1)


def test_corrupted_identity_is_detected(b2_ctx):
    # sabotage: a wrong connection matrix must fail the recursion check
    fake = b2_ctx.b_matrix(1) + PolyMatrix.identity(2, 2)
    b2_ctx._b_mats[5] = fake
    try:
        reports = verify_b_identities(b2_ctx, 4)
        rec = [r for r in reports if r.identity == "b_recursion" and r.params["k"] == 4]
        assert rec and not rec[0].passed
    finally:
        b2_ctx._b_mats.pop(5, None)
