"""Sparse multivariate polynomials over exact scalars.

Terms are stored as a dict mapping exponent tuples to nonzero
:class:`~contactorder.scalars.Scalar` coefficients.  The canonical term
order is graded lexicographic (total degree first, then lex on the
exponent tuple), descending for serialization.

Exact division returns ``None`` when the divisor does not divide -- the
contact-order membership test probes divisibility in a loop, so this is
an ordinary result, not an error.

The gcd uses a three-stage strategy:

1. trivial cases (zero, constants, exact divisibility either way);
2. a coprimality certificate from restriction to a generic affine line
   (degree-preserving by construction, so a trivial univariate gcd
   proves the multivariate gcd trivial);
3. primitive pseudo-remainder sequences, recursing on contents, for the
   residual non-coprime cases.
"""

from __future__ import annotations

import random

from contactorder.scalars import Scalar, ONE, ZERO


class PolynomialError(ArithmeticError):
    pass


def _grlex(e):
    return (sum(e), e)


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables X1..Xn over Scalar."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(c, Scalar):
                    c = Scalar(c)
                if not c.is_zero():
                    clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        """The variable X(i+1), zero-based index i."""
        if not 0 <= i < nvars:
            raise PolynomialError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): ONE})

    @classmethod
    def linear_form(cls, coeffs) -> "MultiPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c if isinstance(c, Scalar) else Scalar(c)
        return cls(n, terms)

    @classmethod
    def parse(cls, text: str, nvars: int) -> "MultiPoly":
        from contactorder.textform import parse_poly

        return parse_poly(text, nvars)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Scalar:
        if self.is_zero():
            return ZERO
        if not self.is_constant():
            raise PolynomialError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self) -> dict:
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: MultiPoly(self.nvars, t) for d, t in sorted(parts.items())}

    def leading_exponent(self):
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        return max(self.terms, key=_grlex)

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_exponent()]

    def coeff(self, e) -> Scalar:
        return self.terms.get(tuple(e), ZERO)

    def variables_used(self):
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    # -- ring operations ----------------------------------------------

    def _check_nvars(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise PolynomialError("variable count mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Scalar)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_nvars(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del terms[e]
                else:
                    terms[e] = s
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            c = other if isinstance(other, Scalar) else Scalar(other)
            if c.is_zero():
                return MultiPoly.zero(self.nvars)
            out = MultiPoly.__new__(MultiPoly)
            out.nvars = self.nvars
            out.terms = {e: v * c for e, v in self.terms.items()}
            return out
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_nvars(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.nvars)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        acc = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = acc.get(e)
                if s is None:
                    acc[e] = ca * cb
                else:
                    acc[e] = s + ca * cb
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = {e: c for e, c in acc.items() if not c.is_zero()}
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolynomialError("negative power of a polynomial")
        result = MultiPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus -----------------------------------------------------

    def partial(self, i: int) -> "MultiPoly":
        """Formal partial derivative with respect to X(i+1)."""
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = list(e)
            e2[i] = k - 1
            terms[tuple(e2)] = c * k
        return MultiPoly(self.nvars, terms)

    # -- evaluation and substitution ----------------------------------

    def evaluate(self, point) -> Scalar:
        """Value at a point of Scalars."""
        pows = [{0: ONE} for _ in range(self.nvars)]

        def power(i, k):
            cache = pows[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * point[i]
            return cache[k]

        total = ZERO
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v = v * power(i, k)
            total = total + v
        return total

    def substitute(self, values) -> "MultiPoly":
        """Substitute X(i+1) := values[i] (MultiPoly of the same arity)."""
        if len(values) != self.nvars:
            raise PolynomialError("substitution arity mismatch")
        nvars = values[0].nvars if values else self.nvars
        pows = [{0: MultiPoly.one(nvars)} for _ in range(self.nvars)]

        def power(i, k):
            cache = pows[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * values[i]
            return cache[k]

        total = MultiPoly.zero(nvars)
        for e, c in self.terms.items():
            v = MultiPoly.constant(nvars, c)
            for i, k in enumerate(e):
                if k:
                    v = v * power(i, k)
            total = total + v
        return total

    # -- exact division and gcd ---------------------------------------

    def divide_exact(self, q: "MultiPoly"):
        """Quotient self/q when q divides exactly, else None.

        A zero divisor is an error; a failed division is a result.
        """
        self._check_nvars(q)
        if q.is_zero():
            raise ZeroDivisionError("exact division by the zero polynomial")
        if self.is_zero():
            return MultiPoly.zero(self.nvars)
        if q.is_constant():
            return self * q.constant_value().inverse()
        eq = q.leading_exponent()
        cq = q.terms[eq]
        rem = self
        quot = {}
        while not rem.is_zero():
            er = rem.leading_exponent()
            diff = tuple(a - b for a, b in zip(er, eq))
            if any(d < 0 for d in diff):
                return None
            c = rem.terms[er] / cq
            quot[diff] = c
            rem = rem - MultiPoly(self.nvars, {diff: c}) * q
        return MultiPoly(self.nvars, quot)

    def scalar_content(self) -> Scalar:
        """Positive rational content (gcd of all rational components)."""
        if self.is_zero():
            return ONE
        nums, dens = [], []
        for c in self.terms.values():
            for part in (c.a, c.b):
                if part != 0:
                    nums.append(abs(part.numerator))
                    dens.append(part.denominator)
        from math import gcd, lcm

        g = 0
        for n in nums:
            g = gcd(g, n)
        l = 1
        for dd in dens:
            l = lcm(l, dd)
        return Scalar.from_rational(g, l)

    def normalized(self) -> "MultiPoly":
        """Divide by scalar content and make the leading sign positive."""
        if self.is_zero():
            return self
        c = self.scalar_content()
        if self.leading_coeff().sign() < 0:
            c = -c
        return self * c.inverse()

    def monic(self) -> "MultiPoly":
        if self.is_zero():
            return self
        return self * self.leading_coeff().inverse()

    def gcd(self, other: "MultiPoly") -> "MultiPoly":
        """Monic gcd in the polynomial ring over the scalar field."""
        if self.is_zero() and other.is_zero():
            return MultiPoly.zero(self.nvars)
        return _gcd(self, other).monic()

    # -- rendering ----------------------------------------------------

    def render(self) -> str:
        from contactorder.textform import render_poly

        return render_poly(self)

    def __repr__(self):
        return f"MultiPoly({self.render()})"


# ---------------------------------------------------------------------
# gcd machinery
# ---------------------------------------------------------------------

_PROBE_RNG = random.Random(0x5EED)


def _gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check_nvars(q)
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    if p.is_constant() or q.is_constant():
        return MultiPoly.one(p.nvars)
    # exact divisibility fast paths
    if p.degree() >= q.degree() and p.divide_exact(q) is not None:
        return q
    if q.degree() > p.degree() and q.divide_exact(p) is not None:
        return p
    used = p.variables_used() | q.variables_used()
    if len(used) == 1:
        return _univariate_gcd_inline(p, q, used.pop())
    if _certified_coprime(p, q):
        return MultiPoly.one(p.nvars)
    return _prs_gcd(p, q)


def _to_univariate(p: MultiPoly, v: int) -> dict:
    """Split off variable v: degree-in-v -> coefficient MultiPoly."""
    out = {}
    for e, c in p.terms.items():
        k = e[v]
        e2 = list(e)
        e2[v] = 0
        out.setdefault(k, {})[tuple(e2)] = c
    return {k: MultiPoly(p.nvars, t) for k, t in out.items()}


def _from_univariate(coeffs: dict, v: int, nvars: int) -> MultiPoly:
    terms = {}
    for k, poly in coeffs.items():
        for e, c in poly.terms.items():
            e2 = list(e)
            e2[v] += k
            terms[tuple(e2)] = c
    return MultiPoly(nvars, terms)


def _univariate_gcd_inline(p: MultiPoly, q: MultiPoly, v: int) -> MultiPoly:
    """Euclid for polynomials effectively in the single variable v."""

    def as_list(f):
        d = f.degree_in(v)
        out = [ZERO] * (d + 1)
        for e, c in f.terms.items():
            out[e[v]] = c
        return out

    g = _univariate_gcd(as_list(p), as_list(q))
    terms = {}
    for k, c in enumerate(g):
        if not c.is_zero():
            e = [0] * p.nvars
            e[v] = k
            terms[tuple(e)] = c
    return MultiPoly(p.nvars, terms)


def _univariate_gcd(a, b):
    """Monic gcd of univariate coefficient lists over the scalar field."""

    def strip(x):
        while x and x[-1].is_zero():
            x.pop()
        return x

    a, b = strip(list(a)), strip(list(b))
    while b:
        # a mod b
        inv = b[-1].inverse()
        a = list(a)
        while len(a) >= len(b):
            c = a[-1] * inv
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = a[shift + i] - c * bc
            strip(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return []
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _restrict_to_line(p: MultiPoly, direction, offset):
    """Coefficient list of t -> p(a*t + b)."""
    deg = p.degree()
    # per-variable powers of (a_i t + b_i) as univariate lists
    lin = [[offset[i], direction[i]] for i in range(p.nvars)]

    def mul1(x, y):
        out = [ZERO] * (len(x) + len(y) - 1)
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, yj in enumerate(y):
                out[i + j] = out[i + j] + xi * yj
        return out

    pows = [{0: [ONE]} for _ in range(p.nvars)]

    def power(i, k):
        cache = pows[i]
        if k not in cache:
            cache[k] = mul1(power(i, k - 1), lin[i])
        return cache[k]

    acc = [ZERO] * (deg + 1)
    for e, c in p.terms.items():
        v = [c]
        for i, k in enumerate(e):
            if k:
                v = mul1(v, power(i, k))
        for i, ci in enumerate(v):
            acc[i] = acc[i] + ci
    while acc and acc[-1].is_zero():
        acc.pop()
    return acc


def _certified_coprime(p: MultiPoly, q: MultiPoly) -> bool:
    """True only with proof: restrict to an affine line whose direction keeps
    both leading forms nonzero; a constant univariate gcd then certifies
    coprimality (every common factor would survive the restriction)."""
    lead_p = max(p.homogeneous_components().items())[1]
    lead_q = max(q.homogeneous_components().items())[1]
    for size in (7, 23, 101):
        found = False
        for _ in range(8):
            a = [Scalar(_PROBE_RNG.randint(1, size)) for _ in range(p.nvars)]
            if lead_p.evaluate(a).is_zero() or lead_q.evaluate(a).is_zero():
                continue
            found = True
            b = [Scalar(_PROBE_RNG.randint(-size, size)) for _ in range(p.nvars)]
            g = _univariate_gcd(_restrict_to_line(p, a, b), _restrict_to_line(q, a, b))
            if len(g) == 1:
                return True
            break
        if found:
            continue
    return False


def _poly_content(coeffs) -> MultiPoly:
    it = iter(coeffs)
    g = next(it)
    for c in it:
        g = _gcd(g, c)
        if g.is_constant():
            break
    return g.monic()


def _prem(a: dict, b: dict) -> dict:
    """Pseudo-remainder of univariate-in-v representations."""
    da, db = max(a), max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r.pop(dr)
        # r := lb*r - lr * b * X^(dr-db)
        new = {}
        for k, c in r.items():
            new[k] = c * lb
        for k, c in b.items():
            if k == db:
                continue
            kk = k + dr - db
            t = lr * c
            if kk in new:
                new[kk] = new[kk] - t
            else:
                new[kk] = -t
        r = {k: c for k, c in new.items() if not c.is_zero()}
    return r


def _prs_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Primitive pseudo-remainder sequence gcd."""
    used = p.variables_used() | q.variables_used()
    v = min(used, key=lambda i: min(p.degree_in(i), q.degree_in(i)))
    up, uq = _to_univariate(p, v), _to_univariate(q, v)
    cont_p = _poly_content(up.values())
    cont_q = _poly_content(uq.values())
    cont_g = _gcd(cont_p, cont_q).monic()

    def primitive(u):
        cont = _poly_content(u.values())
        if cont.is_constant():
            c = cont.constant_value().inverse()
            return {k: f * c for k, f in u.items()}
        return {k: f.divide_exact(cont) for k, f in u.items()}

    a, b = primitive(up), primitive(uq)
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            break
        if max(r) == 0:
            # nontrivial remainder of v-degree 0: gcd has no v-part
            b = {0: MultiPoly.one(p.nvars)}
            break
        a, b = b, primitive(r)
    g = _from_univariate(b, v, p.nvars)
    return (g * cont_g).monic()
