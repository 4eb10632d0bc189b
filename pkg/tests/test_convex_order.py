import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import exhaustive_hinge_violation
from rasacx.convex_order import (
    HOLDS,
    MEANS_DIFFER,
    STOP_LOSS_VIOLATION,
    CxVerdict,
    cx_falsify_random,
    is_cx_dominated,
)
from rasacx.distributions import DiscreteDistribution, affine_pushforward, expect, mixture
from rasacx.golden import FIRST_MU, FIRST_NU, SECOND_MU, SECOND_NU

D = DiscreteDistribution.from_dict
MU1, NU1, MU2, NU2 = D(FIRST_MU), D(FIRST_NU), D(SECOND_MU), D(SECOND_NU)


@st.composite
def distributions(draw, max_atoms=5):
    k = draw(st.integers(1, max_atoms))
    points = draw(st.lists(st.integers(0, 6), min_size=k, max_size=k))
    weights = draw(st.lists(st.integers(1, 9), min_size=k, max_size=k))
    total = sum(weights)
    return DiscreteDistribution(tuple((F(p), F(w, total)) for p, w in zip(points, weights)))


def spread(d, rng):
    """Replace one atom by a mean-preserving two-point split, so the result dominates d."""
    atoms = list(d.atoms)
    x, w = atoms.pop(rng.randrange(len(atoms)))
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    # x - a with prob b/(a+b), x + b with prob a/(a+b)
    atoms += [(x - a, w * F(b, a + b)), (x + b, w * F(a, a + b))]
    return DiscreteDistribution(tuple(atoms))


def test_examples():
    assert is_cx_dominated(MU1, NU1) == CxVerdict(True, HOLDS)
    second = is_cx_dominated(MU2, NU2)
    assert second.reason == STOP_LOSS_VIOLATION
    t, lhs, rhs = second.witness
    assert (t, lhs, rhs) == (F(2), F(1, 4), F(155, 648))
    assert is_cx_dominated(D({0: 1}), D({1: 1})).reason == MEANS_DIFFER


def test_point_mass_below_everything_with_its_mean():
    assert is_cx_dominated(D({F(3, 2): 1}), MU1)
    assert not is_cx_dominated(MU1, D({F(3, 2): 1}))


def test_verdict_invariants():
    with pytest.raises(ValueError):
        CxVerdict(True, STOP_LOSS_VIOLATION, None)
    with pytest.raises(ValueError):
        CxVerdict(False, STOP_LOSS_VIOLATION, (F(0), F(0), F(1)))
    assert CxVerdict(False, STOP_LOSS_VIOLATION, (F(2), F(1, 4), F(1, 8))).to_json_obj()["witness"]["t"] == "2/1"


@given(distributions())
def test_reflexive(d):
    assert is_cx_dominated(d, d)


@given(distributions(), st.integers(0, 10**6))
def test_transitive_along_spreads(d, seed):
    rng = random.Random(seed)
    e = spread(d, rng)
    g = spread(e, rng)
    assert is_cx_dominated(d, e)
    assert is_cx_dominated(e, g)
    assert is_cx_dominated(d, g)


@given(distributions(), st.integers(0, 10**6), st.fractions(max_denominator=5).filter(lambda a: a != 0), st.fractions(max_denominator=5))
def test_affine_invariance(d, seed, a, b):
    e = spread(d, random.Random(seed))
    assert is_cx_dominated(affine_pushforward(d, a, b), affine_pushforward(e, a, b))
    assert is_cx_dominated(affine_pushforward(e, a, b), affine_pushforward(d, a, b)).dominated == (d == e)


@given(distributions(), distributions(), st.integers(0, 10**6), st.fractions(min_value=0, max_value=1, max_denominator=7))
def test_mixture_monotone(d1, d2, seed, w):
    rng = random.Random(seed)
    e1, e2 = spread(d1, rng), spread(d2, rng)
    assert is_cx_dominated(mixture([(w, d1), (1 - w, d2)]), mixture([(w, e1), (1 - w, e2)]))


@given(distributions(), distributions())
def test_decision_matches_exhaustive_hinges(mu, nu):
    expected = exhaustive_hinge_violation(dict(mu.atoms), dict(nu.atoms)) is None
    assert is_cx_dominated(mu, nu).dominated == expected


def test_falsifier_on_examples():
    assert cx_falsify_random(MU1, NU1, 2000, 0) is None
    f = cx_falsify_random(MU2, NU2, 2000, 0)
    assert f is not None
    assert expect(MU2, f) > expect(NU2, f)
    assert cx_falsify_random(MU2, NU2, 2000, 0) == f
    with pytest.raises(ValueError):
        cx_falsify_random(MU1, NU1, 0, 0)
