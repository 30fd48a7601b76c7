"""The covariant flow along the primitive derivation and its connection
matrices.

B^(k) relates the k-fold covariant derivative of the (2k-1)-basis to the
invariant frame.  Checked here: entries lie in the subring killed by the
primitive derivation, the determinant is a nonzero constant, D[G] equals
B^(1) + B^(1)^T, and B^(k+1) = B^(1) + k D[G].

Run:  python demos/04_connection_matrices.py [label] [k_max]
"""

import sys

from contactorder.coxeter import basic_invariants, realize
from contactorder.filtration import FiltrationContext, verify_b_identities

label = sys.argv[1] if len(sys.argv) > 1 else "B2"
k_max = int(sys.argv[2]) if len(sys.argv) > 2 else 2

datum = realize(label)
ctx = FiltrationContext(datum, basic_invariants(datum))


def show(name, mat):
    print(name)
    shown = ctx.invariant_matrix(mat)
    for i in range(mat.rows):
        print("   ", [shown[i, j].as_poly().render() for j in range(mat.cols)])


show("G = J^T A J (in the invariants; X_i stands for P_i):", ctx.gram_induced())
show("D[G]:", ctx.d_gram())
for k in range(1, k_max + 1):
    show(f"B^({k}):", ctx.b_matrix(k))
    print("    det =", ctx.b_matrix(k).det().render())

print()
for report in verify_b_identities(ctx, k_max):
    print(report.render_line())
