"""The derivation algebra: application, the flat connection, brackets,
the Euler and primitive derivations, and coordinate/invariant frames.

A derivation is stored by its coefficients on the partial derivatives of
the chosen coordinates.  The connection uses the flat-frame formula
(coefficientwise application) which is valid because the Gram matrix of
the coordinates is constant.
"""

from __future__ import annotations

from typing import List, Sequence

from contactorder.coxeter import CoxeterDatum, InvariantSet
from contactorder.matrices import PolyMatrix, SingularMatrixError
from contactorder.multipoly import MultiPoly, PolynomialError
from contactorder.ratfunc import RatFunc
from contactorder.scalars import Scalar


class DerivationError(ArithmeticError):
    pass


def _coerce_rf(x, nvars: int) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc.from_poly(x)
    if isinstance(x, (int, Scalar)):
        return RatFunc.constant(nvars, x)
    raise DerivationError(f"cannot use {type(x).__name__} as a derivation coefficient")


class Derivation:
    """Element of Der_K: theta = sum_i theta(X_i) d/dX_i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise DerivationError("empty coefficient vector")
        nvars = None
        for c in coeffs:
            if isinstance(c, (RatFunc, MultiPoly)):
                nvars = c.nvars
                break
        if nvars is None:
            raise DerivationError("at least one coefficient must carry the arity")
        self.coeffs = tuple(_coerce_rf(c, nvars) for c in coeffs)
        if any(c.nvars != nvars for c in self.coeffs):
            raise DerivationError("mixed variable counts")

    @property
    def nvars(self) -> int:
        return self.coeffs[0].nvars

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Derivation":
        return cls([RatFunc.zero(nvars)] * nvars)

    @classmethod
    def coordinate(cls, nvars: int, i: int) -> "Derivation":
        """The partial derivation with respect to X(i+1)."""
        return cls(
            [RatFunc.one(nvars) if j == i else RatFunc.zero(nvars) for j in range(nvars)]
        )

    # -- algebra ------------------------------------------------------

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Derivation":
        return Derivation([-a for a in self.coeffs])

    def __rmul__(self, f) -> "Derivation":
        f = _coerce_rf(f, self.nvars)
        return Derivation([f * a for a in self.coeffs])

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)

    def poly_coeffs(self) -> List[MultiPoly]:
        return [c.as_poly() for c in self.coeffs]

    # -- action -------------------------------------------------------

    def apply(self, f) -> RatFunc:
        """theta(f) = sum_i theta(X_i) * df/dX_i."""
        f = _coerce_rf(f, self.nvars)
        total = RatFunc.zero(self.nvars)
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            df = f.partial(i)
            if not df.is_zero():
                total = total + c * df
        return total

    def __repr__(self):
        return "Derivation(" + ", ".join(c.render() for c in self.coeffs) + ")"

    # -- serialization ------------------------------------------------

    def to_text(self) -> str:
        """One coefficient per line, tagged with the coordinate frame."""
        return "\n".join("dX " + c.render() for c in self.coeffs)


def parse_derivation(text: str, nvars: int, inv: InvariantSet = None) -> Derivation:
    """Read the line-per-coefficient format; dP-tagged lines need inv."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    tags = {ln.split(None, 1)[0] for ln in lines}
    if tags - {"dX", "dP"}:
        raise DerivationError(f"unknown frame tags {sorted(tags - {'dX', 'dP'})}")
    if len(tags) != 1:
        raise DerivationError("mixed or missing frame tags")
    coeffs = [RatFunc.parse(ln.split(None, 1)[1], nvars) for ln in lines]
    if tags == {"dX"}:
        return Derivation(coeffs)
    if inv is None:
        raise DerivationError("dP frame requires an invariant set")
    return from_P_frame(coeffs, inv)


# ---------------------------------------------------------------------
# named derivations
# ---------------------------------------------------------------------


def euler_derivation(nvars: int) -> Derivation:
    """E = sum_i X_i d/dX_i."""
    return Derivation([MultiPoly.variable(nvars, i) for i in range(nvars)])


def jacobian(fs: Sequence) -> PolyMatrix:
    """Jacobian matrix [df_j/dX_i]."""
    fs = list(fs)
    nvars = fs[0].nvars
    if len(fs) != nvars:
        raise DerivationError(f"need {nvars} functions for a square Jacobian")
    cols = [_coerce_rf(f, nvars) for f in fs]
    return PolyMatrix(nvars, [[cols[j].partial(i) for j in range(nvars)] for i in range(nvars)])


def primitive_derivation(datum: CoxeterDatum, inv: InvariantSet) -> Derivation:
    """The derivation with D(P_i) = 0 for i < rank and D(P_rank) = 1."""
    ell = datum.rank
    jt = jacobian(inv.polys).transpose()
    try:
        jt_inv = jt.inverse()
    except SingularMatrixError as exc:
        raise DerivationError("invariants have singular Jacobian") from exc
    d = Derivation([jt_inv[i, ell - 1] for i in range(ell)])
    for i, p in enumerate(inv.polys):
        expected = RatFunc.one(ell) if i == ell - 1 else RatFunc.zero(ell)
        if d.apply(p) != expected:
            raise DerivationError("primitive derivation postcondition failed")
    return d


# ---------------------------------------------------------------------
# connection and bracket
# ---------------------------------------------------------------------


def nabla(xi: Derivation, eta: Derivation) -> Derivation:
    """Levi-Civita connection in the constant-Gram frame:
    the i-th coefficient is xi(eta(X_i))."""
    if xi.nvars != eta.nvars:
        raise DerivationError("variable count mismatch")
    return Derivation([xi.apply(c) for c in eta.coeffs])


def bracket(xi: Derivation, eta: Derivation) -> Derivation:
    """Lie bracket [xi, eta] = nabla_xi(eta) - nabla_eta(xi)."""
    if xi.nvars != eta.nvars:
        raise DerivationError("variable count mismatch")
    return Derivation(
        [xi.apply(ec) - eta.apply(xc) for xc, ec in zip(xi.coeffs, eta.coeffs)]
    )


# ---------------------------------------------------------------------
# invariant frame
# ---------------------------------------------------------------------


def to_P_frame(theta: Derivation, inv: InvariantSet) -> List[RatFunc]:
    """(theta(P_1), ..., theta(P_l)): coefficients on d/dP_i."""
    return [theta.apply(p) for p in inv.polys]


def from_P_frame(coeffs: Sequence, inv: InvariantSet) -> Derivation:
    """Rebuild theta = sum_i c_i d/dP_i in coordinate coefficients."""
    ell = len(inv.polys)
    nvars = inv.polys[0].nvars
    coeffs = [_coerce_rf(c, nvars) for c in coeffs]
    if len(coeffs) != ell:
        raise DerivationError("wrong number of invariant-frame coefficients")
    jt_inv = jacobian(inv.polys).transpose().inverse()
    out = []
    for i in range(nvars):
        acc = RatFunc.zero(nvars)
        for j in range(ell):
            if not coeffs[j].is_zero():
                acc = acc + jt_inv[i, j] * coeffs[j]
        out.append(acc)
    return Derivation(out)
