"""Exact construction and verification of contact-order filtration bases
for Coxeter arrangements of small rank.

The package is organized as a stack:

* :mod:`contactorder.scalars` -- exact rationals and quadratic extensions.
* :mod:`contactorder.multipoly` -- sparse multivariate polynomials.
* :mod:`contactorder.ratfunc` -- normalized rational functions.
* :mod:`contactorder.matrices` -- fraction-free polynomial linear algebra.
* :mod:`contactorder.coxeter` -- realized reflection groups and basic invariants.
* :mod:`contactorder.derivations` -- the derivation algebra and the flat connection.
* :mod:`contactorder.filtration` -- the filtration bases and identity checks.
* :mod:`contactorder.cli` -- batch front-end.
"""

from contactorder.scalars import Scalar
from contactorder.multipoly import MultiPoly
from contactorder.ratfunc import RatFunc
from contactorder.matrices import PolyMatrix, solve_linear_scalar
from contactorder.coxeter import CoxeterDatum, InvariantSet, realize, basic_invariants
from contactorder.derivations import Derivation, euler_derivation, primitive_derivation
from contactorder.filtration import (
    FiltrationContext,
    VerificationReport,
    nabla_D_inverse_E,
    run_verification,
)

__all__ = [
    "Scalar",
    "MultiPoly",
    "RatFunc",
    "PolyMatrix",
    "solve_linear_scalar",
    "CoxeterDatum",
    "InvariantSet",
    "realize",
    "basic_invariants",
    "Derivation",
    "euler_derivation",
    "primitive_derivation",
    "FiltrationContext",
    "VerificationReport",
    "nabla_D_inverse_E",
    "run_verification",
]

__version__ = "0.1.0"
