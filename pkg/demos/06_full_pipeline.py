"""Run every identity check for one group and print the scoreboard.

Run:  python demos/06_full_pipeline.py [label] [m_max] [k_max]
"""

import sys

from contactorder.coxeter import basic_invariants, realize
from contactorder.filtration import FiltrationContext, run_verification

label = sys.argv[1] if len(sys.argv) > 1 else "A2"
m_max = int(sys.argv[2]) if len(sys.argv) > 2 else 5
k_max = int(sys.argv[3]) if len(sys.argv) > 3 else 2

datum = realize(label)
ctx = FiltrationContext(datum, basic_invariants(datum))
reports = run_verification(ctx, m_max=m_max, k_max=k_max)
for r in reports:
    print(r.render_line())
bad = sum(not r.passed for r in reports)
print(f"\n{len(reports)} checks, {bad} failures")
sys.exit(1 if bad else 0)
