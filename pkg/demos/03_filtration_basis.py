"""Build contact-order bases and certify them.

For each order m, the basis members theta must satisfy theta(alpha)
divisible by alpha^m for every hyperplane form alpha, and the
determinant of their coefficient matrix must be a nonzero constant times
Q^m (the determinant criterion).  Coefficient degrees follow the degree
law: k*h for even m = 2k, k*h + m_i for odd m.

Run:  python demos/03_filtration_basis.py [label] [m_max]
"""

import sys

from contactorder.coxeter import basic_invariants, realize
from contactorder.filtration import FiltrationContext

label = sys.argv[1] if len(sys.argv) > 1 else "B2"
m_max = int(sys.argv[2]) if len(sys.argv) > 2 else 4

datum = realize(label)
ctx = FiltrationContext(datum, basic_invariants(datum))

for m in range(m_max + 1):
    basis = ctx.filtration_basis(m)
    ok_member = all(ctx.membership_check(t, m) for t in basis)
    ok_det = ctx.basis_determinant_check(basis, m)
    print(f"m = {m}: membership {ok_member}, determinant criterion {ok_det}")
    for j, theta in enumerate(basis):
        coeffs = ", ".join(c.render() for c in theta.coeffs)
        print(f"    xi_{j + 1} = ({coeffs})")
