"""Concrete realizations of the supported reflection groups.

Each supported label gets explicit coordinates: a Gram matrix for the
induced inner product on covectors and the simple hyperplane forms.
Crystallographic types use simple-root coordinates over Q; the
pentagonal types I2(5) and H3 live over Q(sqrt(5)), and I2(3)/I2(6) use
orthonormal coordinates over Q(sqrt(3)).  All downstream formulas carry
the Gram matrix explicitly, so nothing assumes orthonormality.

Group elements are substitution matrices S acting on coordinate
functions, X_i -> sum_j S[i][j] X_j.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from contactorder.multipoly import MultiPoly, _grlex
from contactorder.matrices import PolyMatrix, solve_linear_scalar
from contactorder.scalars import Scalar

GROUP_CLOSURE_BOUND = 10_000

_KERNEL_VERSION = "0.1.0"


class CoxeterError(ValueError):
    pass


# ---------------------------------------------------------------------
# scalar matrix helpers
# ---------------------------------------------------------------------


def _scalar_det(rows: Sequence[Sequence[Scalar]]) -> Scalar:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Scalar(0)
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [[rows[i][c] for c in range(n) if c != j] for i in range(1, n)]
        term = rows[0][j] * _scalar_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def _mat_mul(a, b):
    n = len(a)
    m = len(b[0])
    k = len(b)
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), Scalar(0)) for j in range(m))
        for i in range(n)
    )


def _mat_transpose(a):
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def _identity_rows(n):
    return tuple(
        tuple(Scalar(1) if i == j else Scalar(0) for j in range(n)) for i in range(n)
    )


# ---------------------------------------------------------------------
# label tables
# ---------------------------------------------------------------------

_DEGREES: Dict[str, Tuple[int, ...]] = {
    "A2": (2, 3),
    "A3": (2, 3, 4),
    "B2": (2, 4),
    "B3": (2, 4, 6),
    "G2": (2, 6),
    "H3": (2, 6, 10),
    "I2_3": (2, 3),
    "I2_4": (2, 4),
    "I2_5": (2, 5),
    "I2_6": (2, 6),
}

SUPPORTED_LABELS = tuple(sorted(_DEGREES))


def normalize_label(label: str) -> str:
    text = label.strip().upper().replace("(", "_").replace(")", "")
    text = text.rstrip("_")
    if text in _DEGREES:
        return text
    if text.startswith("I2"):
        raise CoxeterError(
            f"unsupported dihedral type {label!r}: cos(pi/m) for this m does not lie "
            "in any quadratic field Q(sqrt(d)), which is all the scalar kernel supports"
        )
    raise CoxeterError(f"unsupported group label {label!r}; supported: {', '.join(SUPPORTED_LABELS)}")


# ---------------------------------------------------------------------
# datum
# ---------------------------------------------------------------------


@dataclass
class CoxeterDatum:
    """A realized reflection group.

    gram is A = [I*(X_i, X_j)]; generators are substitution matrices of
    the simple reflections; forms are the hyperplane forms normalized to
    leading coefficient 1.
    """

    label: str
    rank: int
    field_d: int
    gram: Tuple[Tuple[Scalar, ...], ...]
    generators: Tuple[Tuple[Tuple[Scalar, ...], ...], ...]
    forms: Tuple[MultiPoly, ...]
    degrees: Tuple[int, ...]
    group: Tuple[Tuple[Tuple[Scalar, ...], ...], ...]
    _subs_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def coxeter_number(self) -> int:
        return self.degrees[-1]

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(d - 1 for d in self.degrees)

    @property
    def group_order(self) -> int:
        return prod(self.degrees)

    def gram_matrix(self) -> PolyMatrix:
        return PolyMatrix.from_scalar_rows(self.rank, self.gram)

    def gram_inverse(self) -> Tuple[Tuple[Scalar, ...], ...]:
        """A' = [I(e_i, e_j)], the inverse Gram matrix."""
        inv = self.gram_matrix().inverse()
        return tuple(
            tuple(inv[i, j].as_poly().constant_value() for j in range(self.rank))
            for i in range(self.rank)
        )

    def act(self, g, p: MultiPoly) -> MultiPoly:
        """p composed with the substitution matrix g."""
        key = id(g)
        rows = self._subs_cache.get(key)
        if rows is None:
            rows = [MultiPoly.linear_form(row) for row in g]
            self._subs_cache[key] = rows
        return p.substitute(rows)

    def act_on_form(self, g, coeffs: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        """Coefficient vector of the image linear form (transpose action)."""
        n = self.rank
        return tuple(
            sum((coeffs[i] * g[i][j] for i in range(n)), Scalar(0)) for j in range(n)
        )

    def element_det(self, g) -> Scalar:
        return _scalar_det([list(row) for row in g])


# ---------------------------------------------------------------------
# realization data per label
# ---------------------------------------------------------------------


def _sqrt5_cos() -> Scalar:
    # cos(pi/5) = (1 + sqrt(5))/4
    return Scalar(mpq(1, 4), mpq(1, 4), 5)


def _realization(label: str):
    """(field_d, gram rows, simple form coefficient vectors)."""
    one = Scalar(1)
    zero = Scalar(0)

    def rows(*data):
        return tuple(tuple(Scalar(x) if not isinstance(x, Scalar) else x for x in r) for r in data)

    if label == "A2":
        return 0, rows((2, -1), (-1, 2)), [(one, zero), (zero, one)]
    if label == "A3":
        return (
            0,
            rows((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
            [(one, zero, zero), (zero, one, zero), (zero, zero, one)],
        )
    if label == "B2":
        return 0, _identity_rows(2), [(one, zero), (one, -one)]
    if label == "B3":
        return (
            0,
            rows((2, -1, 0), (-1, 2, -1), (0, -1, 1)),
            [(one, zero, zero), (zero, one, zero), (zero, zero, one)],
        )
    if label == "G2":
        return 0, rows((2, -3), (-3, 6)), [(one, zero), (zero, one)]
    if label == "H3":
        tau = Scalar(mpq(1, 2), mpq(1, 2), 5)
        return (
            5,
            rows((2, -tau, zero), (-tau, 2, -one), (zero, -one, 2)),
            [(one, zero, zero), (zero, one, zero), (zero, zero, one)],
        )
    if label == "I2_3":
        r3 = Scalar.sqrt_of(3)
        half = Scalar(mpq(1, 2))
        return 3, _identity_rows(2), [(one, zero), (half, half * r3)]
    if label == "I2_4":
        return 0, _identity_rows(2), [(one, zero), (one, one)]
    if label == "I2_6":
        r3 = Scalar.sqrt_of(3)
        return 3, _identity_rows(2), [(one, zero), (r3, one)]
    if label == "I2_5":
        c = _sqrt5_cos()
        s2 = Scalar(1) - c * c  # sin^2(pi/5) = (5 - sqrt(5))/8
        gram = (
            (one, zero),
            (zero, s2),
        )
        # second simple form: angle pi/5, with U_0(c) = 1 on the scaled axis
        return 5, gram, [(one, zero), (c, one)]
    raise CoxeterError(f"no realization for {label}")


def _reflection_matrix(gram, coeffs) -> Tuple[Tuple[Scalar, ...], ...]:
    """Substitution matrix of the reflection fixing ker(alpha)."""
    n = len(coeffs)
    a_gram = [
        sum((gram[i][j] * coeffs[j] for j in range(n)), Scalar(0)) for i in range(n)
    ]
    norm = sum((coeffs[i] * a_gram[i] for i in range(n)), Scalar(0))
    if norm.is_zero():
        raise CoxeterError("isotropic hyperplane form")
    factor = Scalar(2) / norm
    return tuple(
        tuple(
            (Scalar(1) if i == j else Scalar(0)) - factor * a_gram[i] * coeffs[j]
            for j in range(n)
        )
        for i in range(n)
    )


# ---------------------------------------------------------------------
# realize / generate_group
# ---------------------------------------------------------------------


def _close_group(generators, bound: int = GROUP_CLOSURE_BOUND):
    n = len(generators[0])
    identity = _identity_rows(n)
    seen = {identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        next_frontier = []
        for g in frontier:
            for s in generators:
                h = _mat_mul(g, s)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    next_frontier.append(h)
                    if len(seen) > bound:
                        raise CoxeterError(
                            f"group closure exceeded safety bound {bound}"
                        )
        frontier = next_frontier
    return tuple(order)


def _normalize_form(coeffs, nvars: int) -> MultiPoly:
    p = MultiPoly.linear_form(coeffs)
    return p.monic()


def realize(label: str) -> CoxeterDatum:
    """Build the realized datum for a supported label."""
    label = normalize_label(label)
    field_d, gram, simple_forms = _realization(label)
    rank = len(gram)
    degrees = _DEGREES[label]

    # positive definiteness: leading principal minors
    for k in range(1, rank + 1):
        minor = [[gram[i][j] for j in range(k)] for i in range(k)]
        if _scalar_det(minor).sign() <= 0:
            raise CoxeterError(f"{label}: Gram matrix is not positive definite")

    generators = tuple(_reflection_matrix(gram, f) for f in simple_forms)
    for g in generators:
        if _mat_mul(g, g) != _identity_rows(rank):
            raise CoxeterError(f"{label}: generator is not an involution")
        # S A S^T = A (the substitution preserves I* on coefficient vectors)
        if _mat_mul(_mat_mul(g, gram), _mat_transpose(g)) != gram:
            raise CoxeterError(f"{label}: generator does not preserve the inner product")

    group = _close_group(generators)
    expected_order = prod(degrees)
    if len(group) != expected_order:
        raise CoxeterError(
            f"{label}: group closure has {len(group)} elements, expected {expected_order}"
        )

    datum = CoxeterDatum(
        label=label,
        rank=rank,
        field_d=field_d,
        gram=gram,
        generators=generators,
        forms=(),
        degrees=degrees,
        group=group,
    )

    # hyperplane forms: orbit of the simple forms, up to scalar
    seen = {}
    for f in simple_forms:
        for g in group:
            image = datum.act_on_form(g, f)
            p = _normalize_form(image, rank)
            seen[tuple(sorted(p.terms.items(), key=lambda kv: kv[0]))] = p
    forms = tuple(sorted(seen.values(), key=lambda p: max(p.terms, key=_grlex), reverse=True))
    expected_count = sum(d - 1 for d in degrees)
    if len(forms) != expected_count:
        raise CoxeterError(
            f"{label}: found {len(forms)} hyperplanes, expected {expected_count}"
        )
    datum.forms = forms
    return datum


def generate_group(datum: CoxeterDatum):
    """The full group as substitution matrices (closure of the generators)."""
    return datum.group


# ---------------------------------------------------------------------
# Reynolds operator and basic invariants
# ---------------------------------------------------------------------


def reynolds(datum: CoxeterDatum, p: MultiPoly) -> MultiPoly:
    """Average of p over the group: the projection onto invariants."""
    total = MultiPoly.zero(p.nvars)
    for g in datum.group:
        total = total + datum.act(g, p)
    return total * Scalar(mpq(1, len(datum.group)))


@dataclass
class InvariantSet:
    """Algebraically independent homogeneous basic invariants plus the
    derived anti-invariant Jacobian determinant."""

    polys: Tuple[MultiPoly, ...]
    delta: MultiPoly
    q_poly: MultiPoly
    c: Scalar  # delta = c * Q
    degrees: Tuple[int, ...]

    def validate(self, datum: CoxeterDatum):
        """Exact checks of every defining invariant; raises on failure."""
        ell = datum.rank
        if len(self.polys) != ell:
            raise CoxeterError("wrong number of basic invariants")
        for p, d in zip(self.polys, datum.degrees):
            if p.is_zero() or not p.is_homogeneous() or p.degree() != d:
                raise CoxeterError(f"invariant of degree {p.degree()}, expected {d}")
        for p in self.polys:
            for g in datum.group:
                if datum.act(g, p) != p:
                    raise CoxeterError("candidate invariant is not group-invariant")
        delta = _jacobian_det(self.polys)
        if delta != self.delta:
            raise CoxeterError("stored Jacobian determinant is inconsistent")
        if delta.is_zero():
            raise CoxeterError("invariants are algebraically dependent (zero Jacobian)")
        q = _product_of_forms(datum)
        ratio = delta.divide_exact(q)
        if ratio is None or not ratio.is_constant():
            raise CoxeterError("Jacobian determinant is not a scalar multiple of Q")
        if not (ratio.constant_value() == self.c) or self.c.is_zero():
            raise CoxeterError("stored Q-multiplier is inconsistent")
        for g in datum.group:
            if datum.act(g, delta) != delta * datum.element_det(g):
                raise CoxeterError("Jacobian determinant is not anti-invariant")


def _jacobian_det(polys) -> MultiPoly:
    from contactorder.matrices import _bareiss_det

    n = len(polys)
    entries = [[polys[j].partial(i) for j in range(n)] for i in range(n)]
    return _bareiss_det(entries, polys[0].nvars)


def _product_of_forms(datum: CoxeterDatum) -> MultiPoly:
    q = MultiPoly.one(datum.rank)
    for f in datum.forms:
        q = q * f
    return q


def _monomials_of_degree(nvars: int, d: int):
    if nvars == 1:
        yield (d,)
        return
    for k in range(d, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, d - k):
            yield (k,) + rest


def _invariant_seeds(datum: CoxeterDatum, d: int):
    n = datum.rank
    for e in _monomials_of_degree(n, d):
        yield MultiPoly(n, {e: Scalar(1)})
    # generic linear form powers as a fallback
    for spread in (1, 2, 3):
        coeffs = [Scalar(1 + spread * i) for i in range(n)]
        yield MultiPoly.linear_form(coeffs) ** d


def _jacobian_rank_at_point(polys, point) -> int:
    n = polys[0].nvars
    rows = [[p.partial(i).evaluate(point) for p in polys] for i in range(n)]
    # Gaussian elimination rank
    rank = 0
    cols = len(polys)
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, n) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    return rank


_RANK_POINTS = [
    (2, 3, 5),
    (1, 4, 9),
    (-3, 7, 2),
    (5, -2, 11),
    (7, 13, -4),
]


def _independent_with(chosen, candidate) -> bool:
    polys = list(chosen) + [candidate]
    n = candidate.nvars
    for raw in _RANK_POINTS:
        point = [Scalar(x) for x in raw[:n]]
        if _jacobian_rank_at_point(polys, point) == len(polys):
            return True
    return False


def basic_invariants(datum: CoxeterDatum, cache_dir: Optional[str] = None) -> InvariantSet:
    """Find basic invariants by Reynolds averaging over seed polynomials.

    The greedy search keeps a candidate only if it stays functionally
    independent of the ones already chosen (Jacobian rank certified at a
    rational point); the final set is validated exactly.  Results are
    cached per label when cache_dir is given.
    """
    if cache_dir:
        cached = _load_cached(datum, cache_dir)
        if cached is not None:
            return cached

    chosen: List[MultiPoly] = []
    for d in datum.degrees:
        found = None
        for seed in _invariant_seeds(datum, d):
            inv = reynolds(datum, seed)
            if inv.is_zero():
                continue
            inv = inv.normalized()
            if _independent_with(chosen, inv):
                found = inv
                break
        if found is None:
            raise CoxeterError(
                f"{datum.label}: invariant search exhausted for degree {d}"
            )
        chosen.append(found)

    inv_set = make_invariant_set(datum, chosen)
    if cache_dir:
        save_invariants(inv_set, datum, os.path.join(cache_dir, f"{datum.label}.json"))
    return inv_set


def make_invariant_set(datum: CoxeterDatum, polys) -> InvariantSet:
    """Assemble and fully validate an InvariantSet from candidate polynomials."""
    delta = _jacobian_det(list(polys))
    if delta.is_zero():
        raise CoxeterError("invariants are algebraically dependent (zero Jacobian)")
    q = _product_of_forms(datum)
    ratio = delta.divide_exact(q)
    if ratio is None or not ratio.is_constant():
        raise CoxeterError("Jacobian determinant is not a scalar multiple of Q")
    inv_set = InvariantSet(
        polys=tuple(polys),
        delta=delta,
        q_poly=q,
        c=ratio.constant_value(),
        degrees=datum.degrees,
    )
    inv_set.validate(datum)
    return inv_set


# ---------------------------------------------------------------------
# cache and user-supplied invariant files
# ---------------------------------------------------------------------


def save_invariants(inv: InvariantSet, datum: CoxeterDatum, path: str):
    payload = {
        "label": datum.label,
        "kernel_version": _KERNEL_VERSION,
        "field_d": datum.field_d,
        "degrees": list(datum.degrees),
        "polys": [p.render() for p in inv.polys],
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_invariants(datum: CoxeterDatum, path: str) -> InvariantSet:
    """Load and fully validate an invariant file (cache or user-supplied)."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("label") != datum.label:
        raise CoxeterError(
            f"invariant file {path} is for {payload.get('label')}, not {datum.label}"
        )
    polys = [MultiPoly.parse(text, datum.rank) for text in payload["polys"]]
    return make_invariant_set(datum, polys)


def _load_cached(datum: CoxeterDatum, cache_dir: str) -> Optional[InvariantSet]:
    path = os.path.join(cache_dir, f"{datum.label}.json")
    if not os.path.exists(path):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("kernel_version") != _KERNEL_VERSION:
            return None
        return load_invariants(datum, path)
    except (ValueError, KeyError, CoxeterError):
        return None
