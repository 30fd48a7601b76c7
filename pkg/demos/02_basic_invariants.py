"""Find basic invariants by Reynolds averaging and validate them.

Run:  python demos/02_basic_invariants.py [label]
"""

import sys

from contactorder.coxeter import basic_invariants, realize

label = sys.argv[1] if len(sys.argv) > 1 else "G2"
datum = realize(label)
inv = basic_invariants(datum)

for i, p in enumerate(inv.polys):
    print(f"P{i + 1} (degree {datum.degrees[i]}) = {p.render()}")
print()
print("Jacobian determinant delta =", inv.delta.render())
print("product of hyperplane forms Q =", inv.q_poly.render())
print("delta / Q =", inv.c.render(), "(a nonzero constant: the invariants are basic)")
