"""The inverse covariant flow of the Euler derivation and the equality
of the two basis constructions.

zeta_k is the unique member of the (2k-1)-layer with k-fold covariant
derivative equal to the Euler derivation; its coefficient Jacobian,
twisted by the degree-one basis (odd case) or the Gram matrix A (even
case) and the sign (-1)^k, reproduces the contact-order bases.

Run:  python demos/05_inverse_flow_and_basis_equality.py [label] [k_max]
"""

import sys

from contactorder.coxeter import basic_invariants, realize
from contactorder.filtration import (
    FiltrationContext,
    nabla_D_inverse_E,
    verify_basis_equality,
)

label = sys.argv[1] if len(sys.argv) > 1 else "B2"
k_max = int(sys.argv[2]) if len(sys.argv) > 2 else 2

datum = realize(label)
ctx = FiltrationContext(datum, basic_invariants(datum))

for k in range(1, k_max + 1):
    zeta = nabla_D_inverse_E(ctx, k)
    print(f"zeta_{k} (unique in layer {2 * k - 1}, flows to E in {k} steps):")
    for c in zeta.coeffs:
        print("   ", c.render())

print()
for report in verify_basis_equality(ctx, k_max):
    print(report.render_line())
