"""Realize a reflection group and inspect its data.

Run:  python demos/01_realize_group.py [label]
"""

import sys

from contactorder.coxeter import realize

label = sys.argv[1] if len(sys.argv) > 1 else "B2"
datum = realize(label)

print(f"group {datum.label}: rank {datum.rank}, order {datum.group_order}")
print(f"degrees {datum.degrees}, exponents {datum.exponents}, "
      f"coxeter number {datum.coxeter_number}")
print("Gram matrix of the chosen coordinates:")
for row in datum.gram:
    print("   ", [c.render() for c in row])
print(f"{len(datum.forms)} hyperplane forms:")
for form in datum.forms:
    print("   ", form.render())
