import json
import random
from fractions import Fraction as F

import pytest

from rasacx.errors import DomainError, ParseError
from rasacx.functions import ConvexTestFunction, random_convex_piecewise_linear

CTF = ConvexTestFunction


def test_evaluation():
    assert CTF.hinge(F(1, 2))(F(3, 4)) == F(1, 4)
    assert CTF.hinge(F(1, 2))(F(1, 4)) == 0
    assert CTF.absolute(2, domain=(0, 4))(0) == 2
    assert CTF.square()(F(2, 3)) == F(4, 9)
    pl = CTF.piecewise_linear([0, F(1, 2), 1], [1, 0, 2])
    assert pl(F(1, 4)) == F(1, 2)
    assert pl(F(3, 4)) == 1


def test_domain_is_enforced():
    with pytest.raises(DomainError):
        CTF.square()(F(3, 2))
    with pytest.raises(DomainError):
        CTF.hinge(0, domain=(1, 0))


@pytest.mark.parametrize(
    "build",
    [
        lambda: CTF.piecewise_linear([0, F(1, 2), 1], [0, 1, 0]),
        lambda: CTF.piecewise_linear([0, 0, 1], [0, 1, 2]),
        lambda: CTF.piecewise_linear([0], [0]),
        lambda: CTF.polynomial([0, 0, -1]),
        lambda: CTF.polynomial([0, 0, 0, -1]),
        lambda: CTF.polynomial([0, 0, 0, 1], domain=(-1, 1)),
        lambda: CTF("wavy"),
        lambda: CTF("hinge"),
    ],
)
def test_non_convex_or_malformed_is_rejected(build):
    with pytest.raises(DomainError):
        build()


def test_cubic_on_nonnegative_domain_is_accepted():
    f = CTF.polynomial([1, -2, 0, 1])
    assert f(1) == 0


def test_lattice_values_are_exact():
    f = CTF.piecewise_linear([0, F(1, 3), 1], [F(1, 2), 0, F(5, 7)])
    nums, den = f.lattice_values(6)
    assert [F(a, den) for a in nums] == [f(F(j, 6)) for j in range(7)]
    assert f.lattice_values(6) is f.lattice_values(6)


def test_f_id():
    assert CTF.hinge(F(1, 2)).f_id == "hinge:1/2"
    assert CTF.absolute(0).f_id == "abs:0/1"
    assert CTF.square().f_id == "square"
    assert CTF.polynomial([1, 0, 2]).f_id == "poly:1/1,0/1,2/1"
    assert CTF.piecewise_linear([0, 1], [0, 1], name="id").f_id == "id"


@pytest.mark.parametrize(
    "f",
    [
        CTF.hinge(F(1, 3)),
        CTF.absolute(2, domain=(0, 4)),
        CTF.square(),
        CTF.polynomial([1, F(-1, 2), 3]),
        CTF.piecewise_linear([0, F(1, 2), 1], [1, 0, 2], name="vee"),
    ],
)
def test_json_round_trip(f):
    again = CTF.from_json_obj(json.loads(json.dumps(f.to_json_obj())))
    assert again == f
    assert again.f_id == f.f_id


@pytest.mark.parametrize("obj", [[], {"t": "1/2"}, {"kind": "hinge"}, {"kind": "spline"}, {"kind": "abs", "t": "0", "domain": ["0"]}])
def test_json_rejects(obj):
    with pytest.raises(ParseError):
        CTF.from_json_obj(obj)


def test_random_piecewise_linear_is_convex_and_seeded():
    bps = [F(k, 5) for k in range(6)]
    a = [random_convex_piecewise_linear(random.Random(3), bps) for _ in range(2)]
    assert a[0] == a[1]
    rng = random.Random(11)
    for _ in range(200):
        f = random_convex_piecewise_linear(rng, bps)
        for x, y in zip(bps, bps[2:]):
            assert f((x + y) / 2) <= (f(x) + f(y)) / 2
