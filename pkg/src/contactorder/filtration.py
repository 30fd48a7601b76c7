"""Construction and exact verification of the contact-order filtration.

Everything here works over one :class:`FiltrationContext` per group: the
Jacobian of the basic invariants, the induced Gram matrix on invariant
differentials, the iterated primitive-derivation images of the
coordinates, the filtration bases, and the connection-matrix identities
relating them.

Internally, derivations produced by repeated covariant differentiation
along the primitive derivation are kept as a polynomial coefficient
vector over a power of the Jacobian determinant (the only denominator
that can occur).  That keeps the whole pipeline free of general
rational-function normalization: reductions are trial divisions by the
determinant, and equalities are checked cross-multiplied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from contactorder.coxeter import CoxeterDatum, InvariantSet
from contactorder.derivations import Derivation, euler_derivation, jacobian
from contactorder.matrices import PolyMatrix, solve_linear_scalar
from contactorder.multipoly import MultiPoly
from contactorder.ratfunc import RatFunc
from contactorder.scalars import Scalar


class FiltrationError(ArithmeticError):
    pass


@dataclass
class VerificationReport:
    """Outcome of one identity check; failures carry a witness."""

    label: str
    identity: str
    params: Dict[str, int] = field(default_factory=dict)
    status: str = "pass"
    witness: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_record(self) -> dict:
        return {
            "label": self.label,
            "identity": self.identity,
            "params": dict(self.params),
            "status": self.status,
            "witness": self.witness,
        }

    def render_line(self) -> str:
        params = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        head = f"[{self.status.upper():4s}] {self.label} {self.identity}"
        if params:
            head += f" ({params})"
        if self.witness:
            head += f" :: {self.witness}"
        return head


class _DQ:
    """Derivation with coefficients vec[i] / delta^e."""

    __slots__ = ("vec", "e")

    def __init__(self, vec: Sequence[MultiPoly], e: int):
        self.vec = list(vec)
        self.e = e


def _weighted_monomials(degrees: Sequence[int], total: int):
    """Exponent tuples a with sum(a_i * degrees[i]) == total."""
    if not degrees:
        if total == 0:
            yield ()
        return
    d0 = degrees[0]
    for k in range(total // d0 + 1):
        for rest in _weighted_monomials(degrees[1:], total - k * d0):
            yield (k,) + rest


class FiltrationContext:
    """All cached per-group data for the filtration computations."""

    def __init__(self, datum: CoxeterDatum, inv: InvariantSet):
        self.datum = datum
        self.inv = inv
        self.nvars = datum.rank
        self.delta = inv.delta
        self.q_poly = inv.q_poly
        self.d_delta = [self.delta.partial(i) for i in range(self.nvars)]
        self.J = jacobian(inv.polys)
        self.A_mat = PolyMatrix.from_scalar_rows(self.nvars, datum.gram)
        # primitive derivation numerator: D = D_vec / delta
        adj_t = self.J.transpose().adjugate()
        self.D_vec = [adj_t[i, self.nvars - 1].as_poly() for i in range(self.nvars)]
        self._check_primitive()
        self._dkx: Dict[int, _DQ] = {}
        self._jac_num: Dict[int, Tuple[List[List[MultiPoly]], int]] = {}
        self._jac_det: Dict[int, MultiPoly] = {}
        self._bases: Dict[int, List[Derivation]] = {}
        self._b_mats: Dict[int, PolyMatrix] = {}
        self._ppow: Dict[Tuple[int, int], MultiPoly] = {}
        self._inverse_flow: Dict[int, Derivation] = {}
        self._gram_induced: Optional[PolyMatrix] = None
        self._d_gram: Optional[PolyMatrix] = None

    # -- foundations --------------------------------------------------

    def _check_primitive(self):
        for i, p in enumerate(self.inv.polys):
            total = MultiPoly.zero(self.nvars)
            for s in range(self.nvars):
                total = total + self.D_vec[s] * p.partial(s)
            expected = self.delta if i == self.nvars - 1 else MultiPoly.zero(self.nvars)
            if total != expected:
                raise FiltrationError("primitive derivation numerators are inconsistent")

    def primitive(self) -> Derivation:
        return Derivation([RatFunc(v, self.delta) for v in self.D_vec])

    def euler(self) -> Derivation:
        return euler_derivation(self.nvars)

    def p_power(self, i: int, k: int) -> MultiPoly:
        key = (i, k)
        if key not in self._ppow:
            if k == 0:
                self._ppow[key] = MultiPoly.one(self.nvars)
            else:
                self._ppow[key] = self.p_power(i, k - 1) * self.inv.polys[i]
        return self._ppow[key]

    def expand_invariant_monomial(self, exponents) -> MultiPoly:
        out = MultiPoly.one(self.nvars)
        for i, k in enumerate(exponents):
            if k:
                out = out * self.p_power(i, k)
        return out

    # -- delta-quotient calculus --------------------------------------

    def dq_reduce(self, dq: _DQ) -> _DQ:
        while dq.e > 0:
            reduced = []
            for v in dq.vec:
                q = v.divide_exact(self.delta) if not v.is_zero() else MultiPoly.zero(self.nvars)
                if q is None:
                    return dq
                reduced.append(q)
            dq = _DQ(reduced, dq.e - 1)
        return dq

    def dq_from_derivation(self, theta: Derivation, bound: int = 16) -> _DQ:
        vec = []
        exps = []
        mults = []
        for c in theta.coeffs:
            if c.is_polynomial():
                exps.append(0)
                mults.append(MultiPoly.one(self.nvars))
                vec.append(c.as_poly())
                continue
            power = MultiPoly.one(self.nvars)
            for e in range(1, bound + 1):
                power = power * self.delta
                mult = power.divide_exact(c.den)
                if mult is not None:
                    exps.append(e)
                    mults.append(mult)
                    vec.append(c.num)
                    break
            else:
                raise FiltrationError(
                    "derivation denominator is not a factor of a small power of the "
                    "Jacobian determinant"
                )
        e_max = max(exps)
        out = []
        for v, m, e in zip(vec, mults, exps):
            scaled = v * m
            if e < e_max:
                scaled = scaled * self.delta ** (e_max - e)
            out.append(scaled)
        return _DQ(out, e_max)

    def dq_to_derivation(self, dq: _DQ) -> Derivation:
        den = self.delta ** dq.e if dq.e else MultiPoly.one(self.nvars)
        return Derivation([RatFunc(v, den) for v in dq.vec])

    def dq_nabla(self, z: _DQ, h: _DQ) -> _DQ:
        """Covariant derivative along z applied to h, in the flat frame."""
        n = self.nvars
        out = []
        if h.e == 0:
            for i in range(n):
                acc = MultiPoly.zero(n)
                for s in range(n):
                    if not z.vec[s].is_zero():
                        acc = acc + z.vec[s] * h.vec[i].partial(s)
                out.append(acc)
            return self.dq_reduce(_DQ(out, z.e))
        e_scalar = Scalar(h.e)
        for i in range(n):
            acc = MultiPoly.zero(n)
            for s in range(n):
                if z.vec[s].is_zero():
                    continue
                term = h.vec[i].partial(s) * self.delta - h.vec[i] * self.d_delta[s] * e_scalar
                acc = acc + z.vec[s] * term
            out.append(acc)
        return self.dq_reduce(_DQ(out, z.e + h.e + 1))

    def dq_nabla_D(self, h: _DQ) -> _DQ:
        return self.dq_nabla(_DQ(self.D_vec, 1), h)

    def _dq_align(self, a: _DQ, b: _DQ) -> Tuple[_DQ, _DQ]:
        if a.e == b.e:
            return a, b
        if a.e < b.e:
            f = self.delta ** (b.e - a.e)
            return _DQ([v * f for v in a.vec], b.e), b
        f = self.delta ** (a.e - b.e)
        return a, _DQ([v * f for v in b.vec], a.e)

    def dq_sub(self, a: _DQ, b: _DQ) -> _DQ:
        a, b = self._dq_align(a, b)
        return self.dq_reduce(_DQ([x - y for x, y in zip(a.vec, b.vec)], a.e))

    def dq_scale(self, a: _DQ, c) -> _DQ:
        return _DQ([v * c for v in a.vec], a.e)

    def dq_equal(self, a: _DQ, b: _DQ) -> bool:
        a, b = self._dq_align(a, b)
        return all(x == y for x, y in zip(a.vec, b.vec))

    def dq_is_zero(self, a: _DQ) -> bool:
        return all(v.is_zero() for v in a.vec)

    def dq_bracket(self, a: _DQ, b: _DQ) -> _DQ:
        return self.dq_sub(self.dq_nabla(a, b), self.dq_nabla(b, a))

    def dq_apply(self, a: _DQ, f: MultiPoly) -> Tuple[MultiPoly, int]:
        """a(f) as (numerator, delta-exponent)."""
        acc = MultiPoly.zero(self.nvars)
        for s in range(self.nvars):
            if not a.vec[s].is_zero():
                acc = acc + a.vec[s] * f.partial(s)
        return acc, a.e

    # -- iterated primitive images of the coordinates -----------------

    def coordinate_flow(self, k: int) -> _DQ:
        """D^k applied to the coordinate functions, as a delta quotient."""
        if k not in self._dkx:
            if k == 0:
                self._dkx[0] = _DQ(
                    [MultiPoly.variable(self.nvars, i) for i in range(self.nvars)], 0
                )
            else:
                self._dkx[k] = self.dq_nabla_D(self.coordinate_flow(k - 1))
        return self._dkx[k]

    def flow_jacobian_numerator(self, k: int) -> Tuple[List[List[MultiPoly]], int]:
        """J(D^k[X]) as (polynomial matrix, delta-exponent)."""
        if k not in self._jac_num:
            if k == 0:
                ident = [
                    [
                        MultiPoly.one(self.nvars) if i == j else MultiPoly.zero(self.nvars)
                        for j in range(self.nvars)
                    ]
                    for i in range(self.nvars)
                ]
                self._jac_num[0] = (ident, 0)
            else:
                dq = self.coordinate_flow(k)
                e_scalar = Scalar(dq.e)
                rows = []
                for i in range(self.nvars):
                    row = []
                    for j in range(self.nvars):
                        if dq.e == 0:
                            row.append(dq.vec[j].partial(i))
                        else:
                            row.append(
                                dq.vec[j].partial(i) * self.delta
                                - dq.vec[j] * self.d_delta[i] * e_scalar
                            )
                    rows.append(row)
                self._jac_num[k] = (rows, dq.e + 1 if dq.e else 0)
        return self._jac_num[k]

    def flow_jacobian_det(self, k: int) -> MultiPoly:
        if k not in self._jac_det:
            from contactorder.matrices import _bareiss_det

            rows, _ = self.flow_jacobian_numerator(k)
            d = _bareiss_det(rows, self.nvars)
            if d.is_zero():
                raise FiltrationError(
                    f"coordinate-flow Jacobian is singular at k={k}: kernel or invariant bug"
                )
            self._jac_det[k] = d
        return self._jac_det[k]

    # -- filtration bases ---------------------------------------------

    def filtration_basis(self, m: int) -> List[Derivation]:
        """The m-th contact-order basis; coefficients are certified polynomial."""
        if m < 0:
            raise FiltrationError("filtration order must be nonnegative")
        if m not in self._bases:
            k = m // 2
            rows, e_jac = self.flow_jacobian_numerator(k)
            det = self.flow_jacobian_det(k)
            m_mat = PolyMatrix(self.nvars, rows)
            n_mat = self.A_mat * m_mat.adjugate()
            scale = self.delta ** e_jac if e_jac else MultiPoly.one(self.nvars)
            entries = []
            for i in range(self.nvars):
                row = []
                for j in range(self.nvars):
                    num = n_mat[i, j].as_poly() * scale
                    q = num.divide_exact(det)
                    if q is None:
                        raise FiltrationError(
                            f"basis coefficient is not polynomial at m={m}"
                        )
                    row.append(q)
                entries.append(row)
            coeff = PolyMatrix(self.nvars, entries)
            if m % 2 == 1:
                coeff = coeff * self.J
            basis = [
                Derivation([coeff[i, j] for i in range(self.nvars)])
                for j in range(self.nvars)
            ]
            for theta in basis:
                if not theta.is_polynomial():
                    raise FiltrationError(f"basis derivation carries a denominator at m={m}")
            self._bases[m] = basis
        return self._bases[m]

    # -- membership and determinant criteria --------------------------

    def membership_witness(self, theta: Derivation, m: int) -> Optional[str]:
        """None if theta lies in the m-th contact-order module, else a witness."""
        if not theta.is_polynomial():
            raise FiltrationError("membership test requires polynomial coefficients")
        coeffs = theta.poly_coeffs()
        for form in self.datum.forms:
            value = MultiPoly.zero(self.nvars)
            for i in range(self.nvars):
                c = form.coeff(tuple(1 if s == i else 0 for s in range(self.nvars)))
                if not c.is_zero():
                    value = value + coeffs[i] * c
            for _ in range(m):
                value = value.divide_exact(form)
                if value is None:
                    return (
                        f"theta(alpha) not divisible by alpha^{m} for "
                        f"alpha = {form.render()}"
                    )
        return None

    def membership_check(self, theta: Derivation, m: int) -> bool:
        return self.membership_witness(theta, m) is None

    def basis_determinant_witness(self, thetas: Sequence[Derivation], m: int) -> Optional[str]:
        """Saito-type criterion: det[theta_j(X_i)] must be c * Q^m, c != 0."""
        from contactorder.matrices import _bareiss_det

        entries = [
            [thetas[j].coeffs[i].as_poly() for j in range(len(thetas))]
            for i in range(self.nvars)
        ]
        det = _bareiss_det(entries, self.nvars)
        if det.is_zero():
            return "coefficient determinant vanishes (dependent family)"
        ratio = det.divide_exact(self.q_poly ** m)
        if ratio is None:
            return f"determinant {det.render()} is not a multiple of Q^{m}"
        if not ratio.is_constant():
            return f"determinant / Q^{m} = {ratio.render()} is not constant"
        return None

    def basis_determinant_check(self, thetas: Sequence[Derivation], m: int) -> bool:
        return self.basis_determinant_witness(thetas, m) is None

    def coefficient_matrix(self, thetas: Sequence[Derivation]) -> PolyMatrix:
        return PolyMatrix(
            self.nvars,
            [[thetas[j].coeffs[i] for j in range(len(thetas))] for i in range(self.nvars)],
        )

    # -- induced Gram matrix and its primitive flow -------------------

    def gram_induced(self) -> PolyMatrix:
        """G = J^T A J, the inner products of the invariant differentials."""
        if self._gram_induced is None:
            self._gram_induced = self.J.transpose() * self.A_mat * self.J
        return self._gram_induced

    def apply_D_to_poly(self, f: MultiPoly) -> MultiPoly:
        """D(f) for f in the invariant ring (result certified polynomial)."""
        acc = MultiPoly.zero(self.nvars)
        for s in range(self.nvars):
            acc = acc + self.D_vec[s] * f.partial(s)
        q = acc.divide_exact(self.delta)
        if q is None:
            raise FiltrationError("primitive derivative left the polynomial ring")
        return q

    def d_gram(self) -> PolyMatrix:
        """Entrywise primitive derivative of the induced Gram matrix."""
        if self._d_gram is None:
            g = self.gram_induced()
            self._d_gram = PolyMatrix(
                self.nvars,
                [
                    [self.apply_D_to_poly(g[i, j].as_poly()) for j in range(self.nvars)]
                    for i in range(self.nvars)
                ],
            )
        return self._d_gram

    # -- connection matrices ------------------------------------------

    def b_matrix(self, k: int) -> PolyMatrix:
        """The connection matrix -J^T A J(D^k[X]) J(D^(k-1)[X])^-1 J(P),
        in coordinate form (entries are polynomials in the coordinates)."""
        if k < 1:
            raise FiltrationError("connection matrix index must be >= 1")
        if k not in self._b_mats:
            rows_k, e_k = self.flow_jacobian_numerator(k)
            rows_p, e_p = self.flow_jacobian_numerator(k - 1)
            det_p = self.flow_jacobian_det(k - 1)
            mk = PolyMatrix(self.nvars, rows_k)
            adj_p = PolyMatrix(self.nvars, rows_p).adjugate()
            product = self.J.transpose() * self.A_mat * mk * adj_p * self.J
            # J_k J_{k-1}^{-1} = (M_k / d^e_k) (d^e_p adj / det) -> shift by d^(e_k - e_p)
            shift = e_k - e_p
            if shift >= 0:
                divisor = (self.delta ** shift) * det_p
                numer_scale = MultiPoly.one(self.nvars)
            else:
                divisor = det_p
                numer_scale = self.delta ** (-shift)
            entries = []
            for i in range(self.nvars):
                row = []
                for j in range(self.nvars):
                    num = product[i, j].as_poly() * numer_scale
                    q = num.divide_exact(divisor)
                    if q is None:
                        raise FiltrationError(
                            f"connection matrix entry is not polynomial at k={k}"
                        )
                    row.append(-q)
                entries.append(row)
            self._b_mats[k] = PolyMatrix(self.nvars, entries)
        return self._b_mats[k]

    # -- invariant coordinates ----------------------------------------

    def to_invariant_coords(self, f: MultiPoly) -> Optional[MultiPoly]:
        """Rewrite f as a polynomial in the basic invariants, or None if
        f does not lie in the invariant ring."""
        ell = self.nvars
        degrees = self.datum.degrees
        result = MultiPoly.zero(ell)
        for n, component in f.homogeneous_components().items():
            if n == 0:
                result = result + MultiPoly.constant(ell, component.constant_value())
                continue
            candidates = list(_weighted_monomials(degrees, n))
            if not candidates:
                return None
            expansions = [self.expand_invariant_monomial(a) for a in candidates]
            monos = set(component.terms)
            for exp in expansions:
                monos.update(exp.terms)
            monos = sorted(monos)
            a_rows = [[exp.coeff(mo) for exp in expansions] for mo in monos]
            rhs = [component.coeff(mo) for mo in monos]
            sol = solve_linear_scalar(a_rows, rhs)
            if sol.status == "no_solution":
                return None
            if sol.status == "underdetermined":
                raise FiltrationError(
                    "invariant monomials are linearly dependent: invariants not independent"
                )
            result = result + MultiPoly(
                ell, {a: c for a, c in zip(candidates, sol.values)}
            )
        return result

    def invariant_matrix(self, mat: PolyMatrix) -> Optional[PolyMatrix]:
        rows = []
        for i in range(mat.rows):
            row = []
            for j in range(mat.cols):
                p = self.to_invariant_coords(mat[i, j].as_poly())
                if p is None:
                    return None
                row.append(p)
            rows.append(row)
        return PolyMatrix(self.nvars, rows)


# ---------------------------------------------------------------------
# inverse covariant flow of the Euler derivation
# ---------------------------------------------------------------------


def nabla_D_inverse_E(ctx: FiltrationContext, k: int) -> Derivation:
    """The unique derivation in the (2k-1)-st filtration layer that the
    k-fold covariant derivative along the primitive derivation maps to
    the Euler derivation.

    Found by finite linear algebra: an ansatz in the certified
    (2k-1)-basis with invariant coefficients of the homogeneity-forced
    weighted degree, matched coefficientwise.
    """
    if k < 0:
        raise FiltrationError("negative flow order")
    if k == 0:
        return ctx.euler()
    if k in ctx._inverse_flow:
        return ctx._inverse_flow[k]

    m = 2 * k - 1
    basis = ctx.filtration_basis(m)
    for theta in basis:
        witness = ctx.membership_witness(theta, m)
        if witness is not None:
            raise FiltrationError(f"uncertified basis at m={m}: {witness}")
    witness = ctx.basis_determinant_witness(basis, m)
    if witness is not None:
        raise FiltrationError(f"uncertified basis at m={m}: {witness}")

    degrees = ctx.datum.degrees
    h = ctx.datum.coxeter_number
    ansatz = []  # (expanded invariant monomial, basis index)
    for j in range(ctx.nvars):
        target = h - degrees[j] + 2
        for a in _weighted_monomials(degrees, target):
            ansatz.append((ctx.expand_invariant_monomial(a), j))
    if not ansatz:
        raise FiltrationError("empty ansatz space")

    images = []
    for mono, j in ansatz:
        vec = [mono * c for c in basis[j].poly_coeffs()]
        dq = _DQ(vec, 0)
        for _ in range(k):
            dq = ctx.dq_nabla_D(dq)
        images.append(dq)
    e_max = max(dq.e for dq in images)
    aligned = []
    for dq in images:
        if dq.e < e_max:
            f = ctx.delta ** (e_max - dq.e)
            aligned.append([v * f for v in dq.vec])
        else:
            aligned.append(list(dq.vec))
    scale = ctx.delta ** e_max if e_max else MultiPoly.one(ctx.nvars)
    targets = [MultiPoly.variable(ctx.nvars, i) * scale for i in range(ctx.nvars)]

    monos = set()
    for vecs in aligned:
        for v in vecs:
            monos.update(v.terms)
    for t in targets:
        monos.update(t.terms)
    rows = []
    rhs = []
    for i in range(ctx.nvars):
        for mo in sorted(monos):
            row = [vecs[i].coeff(mo) for vecs in aligned]
            if all(x.is_zero() for x in row) and targets[i].coeff(mo).is_zero():
                continue
            rows.append(row)
            rhs.append(targets[i].coeff(mo))
    sol = solve_linear_scalar(rows, rhs)
    if sol.status == "no_solution":
        raise FiltrationError(
            "no ansatz combination flows to the Euler derivation: contradicts the "
            "bijectivity of the k-fold covariant flow on the filtration layer"
        )
    if sol.status == "underdetermined":
        raise FiltrationError(
            "inverse-flow ansatz is not unique: the ansatz degrees need an audit"
        )

    zeta_vec = [MultiPoly.zero(ctx.nvars) for _ in range(ctx.nvars)]
    for coeff, (mono, j) in zip(sol.values, ansatz):
        if coeff.is_zero():
            continue
        for i, c in enumerate(basis[j].poly_coeffs()):
            zeta_vec[i] = zeta_vec[i] + mono * c * coeff
    zeta = Derivation(zeta_vec)

    # forward check and membership, both exact
    dq = _DQ(zeta_vec, 0)
    for _ in range(k):
        dq = ctx.dq_nabla_D(dq)
    euler_dq = _DQ([MultiPoly.variable(ctx.nvars, i) for i in range(ctx.nvars)], 0)
    if not ctx.dq_equal(dq, euler_dq):
        raise FiltrationError("inverse-flow forward check failed")
    witness = ctx.membership_witness(zeta, m)
    if witness is not None:
        raise FiltrationError(f"inverse flow left the filtration layer: {witness}")
    ctx._inverse_flow[k] = zeta
    return zeta


# ---------------------------------------------------------------------
# verification of the individual identities
# ---------------------------------------------------------------------


def verify_basis_certification(ctx: FiltrationContext, m: int) -> VerificationReport:
    """Membership, determinant criterion and the degree law for the m-basis."""
    label = ctx.datum.label
    params = {"m": m}
    try:
        basis = ctx.filtration_basis(m)
    except FiltrationError as exc:
        return VerificationReport(label, "basis_certification", params, "fail", str(exc))
    for j, theta in enumerate(basis):
        witness = ctx.membership_witness(theta, m)
        if witness is not None:
            return VerificationReport(
                label, "basis_certification", params, "fail", f"member {j + 1}: {witness}"
            )
    witness = ctx.basis_determinant_witness(basis, m)
    if witness is not None:
        return VerificationReport(label, "basis_certification", params, "fail", witness)
    # degree law
    k = m // 2
    h = ctx.datum.coxeter_number
    exps = ctx.datum.exponents
    for j, theta in enumerate(basis):
        want = k * h if m % 2 == 0 else k * h + exps[j]
        for c in theta.poly_coeffs():
            if c.is_zero():
                continue
            if not c.is_homogeneous() or c.degree() != want:
                return VerificationReport(
                    label,
                    "basis_certification",
                    params,
                    "fail",
                    f"member {j + 1} has coefficient degree {c.degree()}, expected {want}",
                )
    return VerificationReport(label, "basis_certification", params)


def verify_b_identities(ctx: FiltrationContext, k_max: int) -> List[VerificationReport]:
    """Connection-matrix identities: entries in the kernel subring, constant
    determinant, the symmetrization identity, and the recursion in k."""
    label = ctx.datum.label
    reports = []
    dg = ctx.d_gram()
    dg_inv = ctx.invariant_matrix(dg)
    for k in range(1, k_max + 1):
        params = {"k": k}
        b = ctx.b_matrix(k)
        # (1) entries lie in the subring killed by the primitive derivation
        status, witness = "pass", None
        b_inv = ctx.invariant_matrix(b)
        if b_inv is None:
            status, witness = "fail", "entry is not a polynomial in the invariants"
        else:
            for i in range(ctx.nvars):
                for j in range(ctx.nvars):
                    entry = b_inv[i, j].as_poly()
                    if entry.degree_in(ctx.nvars - 1) > 0:
                        status = "fail"
                        witness = (
                            f"entry ({i + 1},{j + 1}) = {entry.render()} depends on the "
                            "top invariant"
                        )
        reports.append(VerificationReport(label, "b_entries_in_kernel_subring", params, status, witness))
        # (2) constant nonzero determinant
        det = b.det()
        if det.is_polynomial() and det.as_poly().is_constant() and not det.is_zero():
            reports.append(VerificationReport(label, "b_det_constant", params))
        else:
            reports.append(
                VerificationReport(
                    label, "b_det_constant", params, "fail", f"det = {det.render()}"
                )
            )
        # (3) D[G] = B + B^T
        sym = ctx.b_matrix(1) + ctx.b_matrix(1).transpose()
        if sym == dg:
            reports.append(VerificationReport(label, "gram_flow_symmetrization", params))
        else:
            diff = sym - dg
            reports.append(
                VerificationReport(
                    label,
                    "gram_flow_symmetrization",
                    params,
                    "fail",
                    f"difference {diff.entries[0][0].render()}...",
                )
            )
        # (4) B^(k+1) = B^(1) + k D[G]
        lhs = ctx.b_matrix(k + 1)
        rhs = ctx.b_matrix(1) + dg * Scalar(k)
        if lhs == rhs:
            reports.append(VerificationReport(label, "b_recursion", params))
        else:
            reports.append(
                VerificationReport(label, "b_recursion", params, "fail", "matrices differ")
            )
    return reports


def verify_covariant_columns(ctx: FiltrationContext, k: int) -> VerificationReport:
    """k-fold covariant derivative of the (2k-1)-basis equals, up to the
    sign (-1)^(k-1), the invariant-frame columns of the connection matrix."""
    label = ctx.datum.label
    params = {"k": k}
    basis = ctx.filtration_basis(2 * k - 1)
    b = ctx.b_matrix(k)
    sign = Scalar(1) if (k - 1) % 2 == 0 else Scalar(-1)
    for j, theta in enumerate(basis):
        dq = _DQ(theta.poly_coeffs(), 0)
        for _ in range(k):
            dq = ctx.dq_nabla_D(dq)
        for i, p in enumerate(ctx.inv.polys):
            lhs, e = ctx.dq_apply(dq, p)
            rhs = b[i, j].as_poly() * sign
            if e:
                rhs = rhs * (ctx.delta ** e)
            if lhs != rhs:
                return VerificationReport(
                    label,
                    "covariant_columns",
                    params,
                    "fail",
                    f"column {j + 1}, invariant {i + 1}",
                )
    return VerificationReport(label, "covariant_columns", params)


def verify_commutator_rule(ctx: FiltrationContext, k_max: int) -> List[VerificationReport]:
    """Iterated-commutator rule for the covariant flow against the
    degree-one basis, plus vanishing of the double bracket."""
    label = ctx.datum.label
    reports = []
    xi_dqs = [_DQ(theta.poly_coeffs(), 0) for theta in ctx.filtration_basis(1)]
    d_dq = _DQ(ctx.D_vec, 1)
    # [D, [D, xi]] = 0
    for j, xi in enumerate(xi_dqs):
        double = ctx.dq_bracket(d_dq, ctx.dq_bracket(d_dq, xi))
        if not ctx.dq_is_zero(double):
            reports.append(
                VerificationReport(
                    label, "double_bracket_vanishes", {"xi": j + 1}, "fail",
                    "nonzero double bracket",
                )
            )
            break
    else:
        reports.append(VerificationReport(label, "double_bracket_vanishes", {}))

    for k in range(1, k_max + 1):
        params = {"k": k}
        etas = [_DQ([MultiPoly.variable(ctx.nvars, i) for i in range(ctx.nvars)], 0)]
        try:
            zeta = nabla_D_inverse_E(ctx, k)
            etas.append(_DQ(zeta.poly_coeffs(), 0))
        except FiltrationError:
            pass
        status, witness = "pass", None
        for j, xi in enumerate(xi_dqs):
            commutator = ctx.dq_bracket(d_dq, xi)
            for t, eta in enumerate(etas):
                lhs = ctx.dq_nabla(xi, eta)
                for _ in range(k):
                    lhs = ctx.dq_nabla_D(lhs)
                inner = eta
                for _ in range(k):
                    inner = ctx.dq_nabla_D(inner)
                lhs = ctx.dq_sub(lhs, ctx.dq_nabla(xi, inner))
                rhs = ctx.dq_nabla(commutator, eta)
                for _ in range(k - 1):
                    rhs = ctx.dq_nabla_D(rhs)
                rhs = ctx.dq_scale(rhs, Scalar(k))
                if not ctx.dq_equal(lhs, rhs):
                    status = "fail"
                    witness = f"xi {j + 1}, test derivation {t + 1}"
                    break
            if status == "fail":
                break
        reports.append(VerificationReport(label, "commutator_rule", params, status, witness))
    return reports


def verify_bracket_identity(ctx: FiltrationContext) -> VerificationReport:
    """Brackets of the primitive derivation with the degree-one basis,
    expressed in the invariant frame two independent ways."""
    label = ctx.datum.label
    basis = ctx.filtration_basis(1)
    d_dq = _DQ(ctx.D_vec, 1)
    dg = ctx.d_gram()
    b1 = ctx.b_matrix(1)
    n = ctx.nvars

    def p_frame(dqs) -> PolyMatrix:
        rows = []
        for i in range(n):
            row = []
            for dq in dqs:
                num, e = ctx.dq_apply(dq, ctx.inv.polys[i])
                row.append(RatFunc(num, ctx.delta ** e if e else MultiPoly.one(n)))
            rows.append(row)
        return PolyMatrix(n, rows)

    brackets = [ctx.dq_bracket(d_dq, _DQ(t.poly_coeffs(), 0)) for t in basis]
    nabla_d = [ctx.dq_nabla_D(_DQ(t.poly_coeffs(), 0)) for t in basis]
    lhs = p_frame(brackets)
    if lhs != dg:
        return VerificationReport(
            label, "bracket_frame_identity", {}, "fail",
            "bracket family does not match the Gram-flow columns",
        )
    rhs = p_frame(nabla_d) * b1.inverse() * dg
    if lhs != rhs:
        return VerificationReport(
            label, "bracket_frame_identity", {}, "fail",
            "connection form of the bracket family does not match",
        )
    return VerificationReport(label, "bracket_frame_identity", {})


def verify_frame_change(
    ctx: FiltrationContext, etas: Optional[Sequence[Derivation]] = None
) -> VerificationReport:
    """Covariant derivatives along the degree-one basis equal the
    coordinate-frame covariant derivatives times A J(P), for sample
    derivations.

    Both sides are compared as numerators over the shared denominator
    delta^(f+1), so no rational-function reduction is needed even for
    samples with denominators (like the primitive derivation)."""
    label = ctx.datum.label
    if etas is None:
        etas = [ctx.euler(), ctx.primitive(), nabla_D_inverse_E(ctx, 1)]
    basis = ctx.filtration_basis(1)
    n = ctx.nvars
    aj_cols = (ctx.A_mat * ctx.J).poly_entries()
    xi_cols = [theta.poly_coeffs() for theta in basis]
    for t, eta in enumerate(etas):
        dq = ctx.dq_from_derivation(eta)
        f_scalar = Scalar(dq.e)
        for i in range(n):
            # numerator of d(eta_i)/dX_s over delta^(e+1)
            if dq.e == 0:
                grads = [dq.vec[i].partial(s) for s in range(n)]
            else:
                grads = [
                    dq.vec[i].partial(s) * ctx.delta
                    - dq.vec[i] * ctx.d_delta[s] * f_scalar
                    for s in range(n)
                ]
            for j in range(n):
                lhs = MultiPoly.zero(n)
                rhs = MultiPoly.zero(n)
                for s in range(n):
                    lhs = lhs + xi_cols[j][s] * grads[s]
                    rhs = rhs + grads[s] * aj_cols[s][j]
                if lhs != rhs:
                    return VerificationReport(
                        label, "frame_change_rule", {}, "fail",
                        f"sample derivation {t + 1}, entry ({i + 1},{j + 1})",
                    )
    return VerificationReport(label, "frame_change_rule", {})


def verify_basis_equality(ctx: FiltrationContext, k_max: int) -> List[VerificationReport]:
    """The two filtration bases agree up to the explicit constant matrix:
    odd layers against the covariant derivatives along the degree-one
    basis, even layers against the coordinate frame twisted by A."""
    label = ctx.datum.label
    reports = []
    c1 = ctx.coefficient_matrix(ctx.filtration_basis(1))
    for k in range(0, k_max + 1):
        params = {"k": k}
        try:
            zeta = nabla_D_inverse_E(ctx, k)
        except FiltrationError as exc:
            for name in ("basis_equality_odd", "basis_equality_even",
                         "rhs_basis_odd", "rhs_basis_even"):
                reports.append(VerificationReport(label, name, params, "fail", str(exc)))
            continue
        sign = Scalar(1) if k % 2 == 0 else Scalar(-1)
        z = PolyMatrix(
            ctx.nvars,
            [
                [zeta.coeffs[i].partial(j) for j in range(ctx.nvars)]
                for i in range(ctx.nvars)
            ],
        )
        odd_rhs = (z * c1) * sign
        even_rhs = (z * ctx.A_mat) * sign
        odd_target = ctx.coefficient_matrix(ctx.filtration_basis(2 * k + 1))
        even_target = ctx.coefficient_matrix(ctx.filtration_basis(2 * k))
        reports.append(
            VerificationReport(label, "basis_equality_odd", params)
            if odd_rhs == odd_target
            else VerificationReport(label, "basis_equality_odd", params, "fail", "matrices differ")
        )
        reports.append(
            VerificationReport(label, "basis_equality_even", params)
            if even_rhs == even_target
            else VerificationReport(label, "basis_equality_even", params, "fail", "matrices differ")
        )
        # certify the right-hand-side families independently as bases
        for name, mat, m in (
            ("rhs_basis_odd", odd_rhs, 2 * k + 1),
            ("rhs_basis_even", even_rhs, 2 * k),
        ):
            family = [
                Derivation([mat[i, j] for i in range(ctx.nvars)])
                for j in range(ctx.nvars)
            ]
            witness = None
            for theta in family:
                witness = ctx.membership_witness(theta, m)
                if witness is not None:
                    break
            if witness is None:
                witness = ctx.basis_determinant_witness(family, m)
            reports.append(
                VerificationReport(label, name, params)
                if witness is None
                else VerificationReport(label, name, params, "fail", witness)
            )
    return reports


def verify_inverse_flow(ctx: FiltrationContext, k: int) -> VerificationReport:
    """Unique-solution verdict plus forward and membership checks for the
    inverse covariant flow of the Euler derivation."""
    label = ctx.datum.label
    params = {"k": k}
    try:
        nabla_D_inverse_E(ctx, k)
    except FiltrationError as exc:
        return VerificationReport(label, "inverse_flow", params, "fail", str(exc))
    return VerificationReport(label, "inverse_flow", params)


def perturbed_membership_report(ctx: FiltrationContext) -> VerificationReport:
    """Sabotage check: flip one coefficient term of a degree-one basis
    member and require the membership test to fail with a witness."""
    label = ctx.datum.label
    basis = ctx.filtration_basis(1)
    theta = basis[min(1, len(basis) - 1)]
    coeffs = theta.poly_coeffs()
    for i, c in enumerate(coeffs):
        if not c.is_zero():
            e = c.leading_exponent()
            flipped = dict(c.terms)
            flipped[e] = -flipped[e]
            coeffs[i] = MultiPoly(ctx.nvars, flipped)
            break
    perturbed = Derivation(coeffs)
    witness = ctx.membership_witness(perturbed, 1)
    if witness is None:
        return VerificationReport(
            label, "perturbed_membership", {}, "fail",
            "perturbed derivation unexpectedly passed the membership test",
        )
    return VerificationReport(label, "perturbed_membership", {}, "fail", witness)


# ---------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------


def run_verification(
    ctx: FiltrationContext,
    m_max: int = 5,
    k_max: int = 2,
    perturb: bool = False,
) -> List[VerificationReport]:
    """Run the whole pipeline; failures are recorded, never raised."""
    label = ctx.datum.label
    reports: List[VerificationReport] = [
        VerificationReport(label, "invariant_set", {})
    ]

    def guarded(fn, identity, params):
        try:
            out = fn()
            if isinstance(out, VerificationReport):
                reports.append(out)
            else:
                reports.extend(out)
        except Exception as exc:  # failures must not abort remaining checks
            reports.append(VerificationReport(label, identity, params, "fail", str(exc)))

    for m in range(0, m_max + 1):
        guarded(lambda m=m: verify_basis_certification(ctx, m), "basis_certification", {"m": m})
    guarded(lambda: verify_b_identities(ctx, k_max + 1), "b_identities", {})
    for k in range(1, k_max + 1):
        guarded(lambda k=k: verify_covariant_columns(ctx, k), "covariant_columns", {"k": k})
    guarded(lambda: verify_commutator_rule(ctx, k_max + 1), "commutator_rule", {})
    guarded(lambda: verify_bracket_identity(ctx), "bracket_frame_identity", {})
    guarded(lambda: verify_frame_change(ctx), "frame_change_rule", {})
    for k in range(1, k_max + 1):
        guarded(lambda k=k: verify_inverse_flow(ctx, k), "inverse_flow", {"k": k})
    guarded(lambda: verify_basis_equality(ctx, k_max), "basis_equality", {})
    if perturb:
        guarded(lambda: perturbed_membership_report(ctx), "perturbed_membership", {})
    return reports
