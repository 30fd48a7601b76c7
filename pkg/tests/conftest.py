import pytest

from contactorder.coxeter import basic_invariants, make_invariant_set, realize
from contactorder.filtration import FiltrationContext
from contactorder.textform import parse_poly


@pytest.fixture(scope="session")
def b2_ctx():
    """B2 with the classical invariant choice P = (X^2+Y^2, X^2*Y^2)."""
    datum = realize("B2")
    inv = make_invariant_set(
        datum, [parse_poly("X^2+Y^2", 2), parse_poly("X^2*Y^2", 2)]
    )
    return FiltrationContext(datum, inv)


@pytest.fixture(scope="session")
def a2_ctx():
    datum = realize("A2")
    return FiltrationContext(datum, basic_invariants(datum))
