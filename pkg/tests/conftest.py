from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from nordgeom.families import abelian_setup, build_paper_family
from nordgeom.invariants import compute_invariants
from nordgeom.scalars import Scalar

settings.register_profile(
    "nordgeom", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=60
)
settings.load_profile("nordgeom")

PARAMS = ("lambda", "mu")


@pytest.fixture(scope="session")
def family():
    return build_paper_family().setup


@pytest.fixture(scope="session")
def family_inv(family):
    return compute_invariants(family)


@pytest.fixture(scope="session")
def abelian():
    return abelian_setup(4)


@pytest.fixture(scope="session")
def abelian_inv(abelian):
    return compute_invariants(abelian)


@pytest.fixture(scope="session")
def lam_mu():
    return Scalar.var("lambda", PARAMS), Scalar.var("mu", PARAMS)


def member(lam, mu):
    return build_paper_family({"lambda": lam, "mu": mu}).setup


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)
nonzero_rationals = rationals.filter(lambda q: q != 0)

monomials = st.tuples(st.integers(0, 2), st.integers(0, 2))
scalars = st.dictionaries(monomials, rationals, max_size=5).map(lambda t: Scalar(PARAMS, t))
assignments = st.fixed_dictionaries({"lambda": rationals, "mu": rationals})


def expand(poly, **values):
    """Evaluate a Scalar with Fraction arguments."""
    return poly.eval({k: Fraction(v) for k, v in values.items()})
