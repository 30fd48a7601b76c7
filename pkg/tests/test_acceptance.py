"""Acceptance gate: one test (and one printed pass/fail line) per criterion.

All comparisons are exact symbolic equalities -- there are no numeric
tolerances anywhere.  Criterion 9 is a non-blocking stretch target and
only runs when RUN_STRETCH=1 is set in the environment.
"""

import json
import os
import time

import pytest

from contactorder.cli import EXIT_FAIL, main
from contactorder.coxeter import basic_invariants, make_invariant_set, realize
from contactorder.derivations import nabla
from contactorder.filtration import (
    FiltrationContext,
    nabla_D_inverse_E,
    verify_b_identities,
    verify_basis_certification,
    verify_basis_equality,
    verify_bracket_identity,
    verify_commutator_rule,
    verify_covariant_columns,
    verify_frame_change,
)
from contactorder.multipoly import MultiPoly
from contactorder.ratfunc import RatFunc
from contactorder.textform import parse_poly

LABELS = ("A2", "A3", "B2", "B3", "G2")

_CONTEXTS = {}


def ctx_for(label):
    if label not in _CONTEXTS:
        datum = realize(label)
        _CONTEXTS[label] = FiltrationContext(datum, basic_invariants(datum))
    return _CONTEXTS[label]


def report(number, description, failures):
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] acceptance criterion {number}: {description}"
    if failures:
        line += " :: " + "; ".join(str(f) for f in failures)
    print(line)
    assert not failures, line


def test_criterion_1_b2_golden_fixtures():
    t0 = time.monotonic()
    failures = []
    datum = realize("B2")
    inv = make_invariant_set(
        datum, [parse_poly("X^2+Y^2", 2), parse_poly("X^2*Y^2", 2)]
    )
    ctx = FiltrationContext(datum, inv)
    pp = lambda s: parse_poly(s, 2)

    if ctx.delta != pp("4*X^3*Y-4*X*Y^3"):
        failures.append("delta")
    if ctx.delta != ctx.q_poly * inv.c or ctx.delta != ctx.q_poly * 4:
        failures.append("delta = 4*Q")
    d = ctx.primitive()
    if d.coeffs[0] != RatFunc(pp("-2*Y"), ctx.delta) or d.coeffs[1] != RatFunc(
        pp("2*X"), ctx.delta
    ):
        failures.append("primitive derivation")
    if not d.apply(inv.polys[0]).is_zero() or d.apply(inv.polys[1]) != RatFunc.one(2):
        failures.append("D P_i values")
    want = {
        "G": ([["4*X", "8*Y"], ["8*Y", "4*X*Y"]], ctx.gram_induced()),
        "D[G]": ([["0", "8"], ["8", "4*X"]], ctx.d_gram()),
        "B1": ([["0", "6"], ["2", "2*X"]], ctx.b_matrix(1)),
        "B2": ([["0", "14"], ["10", "6*X"]], ctx.b_matrix(2)),
    }
    for name, (oracle, mat) in want.items():
        got = ctx.invariant_matrix(mat)
        for i in range(2):
            for j in range(2):
                if got[i, j].as_poly() != pp(oracle[i][j]):
                    failures.append(f"{name}[{i + 1},{j + 1}]")
    if ctx.b_matrix(1).det().as_poly() != MultiPoly.constant(2, -12):
        failures.append("det B1 = -12")
    elapsed = time.monotonic() - t0
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f}s >= 1s")
    report(1, "B2 golden fixtures, exact, < 1 s", failures)


def test_criterion_2_basis_certification():
    failures = []
    for label in LABELS:
        t0 = time.monotonic()
        ctx = ctx_for(label)
        for m in range(6):
            r = verify_basis_certification(ctx, m)
            if not r.passed:
                failures.append(f"{label} m={m}: {r.witness}")
        elapsed = time.monotonic() - t0
        if elapsed >= 300:
            failures.append(f"{label} runtime {elapsed:.0f}s >= 5 min")
    report(2, "basis certification m <= 5 on A2 A3 B2 B3 G2, < 5 min each", failures)


def test_criterion_3_connection_matrix_identities():
    failures = []
    for label in LABELS:
        for r in verify_b_identities(ctx_for(label), 3):
            if not r.passed:
                failures.append(f"{label} {r.identity} {r.params}: {r.witness}")
    report(3, "connection-matrix identities (1)-(4) for k <= 3", failures)


def test_criterion_4_covariant_columns():
    failures = []
    for label in LABELS:
        for k in (1, 2):
            r = verify_covariant_columns(ctx_for(label), k)
            if not r.passed:
                failures.append(f"{label} k={k}: {r.witness}")
    report(4, "k-fold covariant derivative columns with (-1)^(k-1) sign, k in {1,2}", failures)


def test_criterion_5_inverse_flow():
    failures = []
    for label in LABELS:
        ctx = ctx_for(label)
        for k in (1, 2):
            try:
                zeta = nabla_D_inverse_E(ctx, k)
            except Exception as exc:
                failures.append(f"{label} k={k}: {exc}")
                continue
            # independent forward check through the generic connection
            out = zeta
            for _ in range(k):
                out = nabla(ctx.primitive(), out)
            if out != ctx.euler():
                failures.append(f"{label} k={k}: forward check")
            if not ctx.membership_check(zeta, 2 * k - 1):
                failures.append(f"{label} k={k}: membership")
    report(5, "inverse covariant flow of E: unique, forward-checked, member", failures)


def test_criterion_6_basis_equality():
    failures = []
    for label in LABELS:
        for r in verify_basis_equality(ctx_for(label), 2):
            if not r.passed:
                failures.append(f"{label} {r.identity} {r.params}: {r.witness}")
    report(6, "basis-equality formulas with signs and A-twist, k in {0,1,2}", failures)


def test_criterion_7_remaining_identities():
    failures = []
    for label in LABELS:
        ctx = ctx_for(label)
        for r in verify_commutator_rule(ctx, 3):
            if not r.passed:
                failures.append(f"{label} {r.identity} {r.params}: {r.witness}")
        for r in (verify_bracket_identity(ctx), verify_frame_change(ctx)):
            if not r.passed:
                failures.append(f"{label} {r.identity}: {r.witness}")
    report(7, "commutator rule (k <= 3), bracket frame, frame change", failures)


def test_criterion_8_perturb_negative_path(capsys):
    failures = []
    code = main(["verify", "--type", "B2", "--m-max", "1", "--k-max", "0",
                 "--perturb", "--format", "records"])
    out = capsys.readouterr().out
    with capsys.disabled():
        if code != EXIT_FAIL:
            failures.append(f"exit code {code}, expected {EXIT_FAIL}")
        bad = [json.loads(l) for l in out.strip().splitlines()
               if json.loads(l)["status"] == "fail"]
        if not bad or not bad[0].get("witness"):
            failures.append("no failure witness emitted")
        report(8, "--perturb fails with a concrete witness and nonzero exit", failures)


@pytest.mark.skipif(os.environ.get("RUN_STRETCH") != "1",
                    reason="stretch criterion; set RUN_STRETCH=1 to run")
def test_criterion_9_stretch_h3():
    t0 = time.monotonic()
    failures = []
    datum = realize("H3")
    ctx = FiltrationContext(datum, basic_invariants(datum))
    for m in range(4):
        r = verify_basis_certification(ctx, m)
        if not r.passed:
            failures.append(f"m={m}: {r.witness}")
    for r in verify_b_identities(ctx, 1):
        if not r.passed:
            failures.append(f"{r.identity}: {r.witness}")
    r = verify_covariant_columns(ctx, 1)
    if not r.passed:
        failures.append(f"covariant columns: {r.witness}")
    elapsed = time.monotonic() - t0
    if elapsed >= 1800:
        failures.append(f"runtime {elapsed:.0f}s >= 30 min")
    report(9, "stretch: H3 over Q(sqrt(5)), m <= 3, k = 1, < 30 min", failures)
