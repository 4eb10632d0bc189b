"""Replays of the two worked Bernoulli-convolution examples with their published values."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List

from rasacx.convex_order import STOP_LOSS_VIOLATION, is_cx_dominated
from rasacx.distributions import DiscreteDistribution, expect
from rasacx.functions import ConvexTestFunction
from rasacx.majorization import ProbVector, bernoulli_convolution, majorizes, sigma_criterion
from rasacx.numerics import format_rational

F = Fraction

# majorization fails, convex order holds
FIRST_P = ProbVector((F(3, 4), F(3, 4), F(0)))
FIRST_P_PRIME = ProbVector((F(5, 6), F(1, 2), F(1, 6)))
FIRST_MU = {0: F(1, 16), 1: F(3, 8), 2: F(9, 16)}
FIRST_NU = {0: F(5, 72), 1: F(31, 72), 2: F(31, 72), 3: F(5, 72)}

# equal means and smaller spread, yet convex order fails
SECOND_P = ProbVector((F(1), F(1, 2), F(1, 2), F(0)))
SECOND_P_PRIME = ProbVector((F(5, 6), F(5, 6), F(1, 6), F(1, 6)))
SECOND_MU = {1: F(1, 4), 2: F(1, 2), 3: F(1, 4)}
SECOND_NU = {0: F(25, 1296), 1: F(260, 1296), 2: F(726, 1296), 3: F(260, 1296), 4: F(25, 1296)}
SECOND_ABS_MU = F(1, 2)
SECOND_ABS_NU = F(155, 324)
SECOND_DISPERSION = (F(1, 2), F(4, 9))


@dataclass(frozen=True)
class Check:
    label: str
    expected: Any
    actual: Any

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_json_obj(self) -> Dict[str, Any]:
        return {"label": self.label, "expected": _show(self.expected), "actual": _show(self.actual), "ok": self.ok}


def _show(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, DiscreteDistribution):
        return str(value)
    if isinstance(value, tuple):
        return [_show(v) for v in value]
    return value


def first_example() -> List[Check]:
    mu = bernoulli_convolution(FIRST_P)
    nu = bernoulli_convolution(FIRST_P_PRIME)
    return [
        Check("mu = B(1,3/4)*B(1,3/4)*B(1,0)", DiscreteDistribution.from_dict(FIRST_MU), mu),
        Check("nu = B(1,5/6)*B(1,1/2)*B(1,1/6)", DiscreteDistribution.from_dict(FIRST_NU), nu),
        Check("mu <=cx nu", "holds", is_cx_dominated(mu, nu).reason),
        Check("p majorizes p'", False, majorizes(FIRST_P, FIRST_P_PRIME)),
        Check("sigma criterion", True, sigma_criterion(FIRST_P, FIRST_P_PRIME)),
    ]


def second_example() -> List[Check]:
    mu = bernoulli_convolution(SECOND_P)
    nu = bernoulli_convolution(SECOND_P_PRIME)
    f = ConvexTestFunction.absolute(2, domain=(0, 4))
    return [
        Check("mu = B(1,1)*B(1,1/2)*B(1,1/2)*B(1,0)", DiscreteDistribution.from_dict(SECOND_MU), mu),
        Check("nu = B(1,5/6)*B(1,5/6)*B(1,1/6)*B(1,1/6)", DiscreteDistribution.from_dict(SECOND_NU), nu),
        Check("average of p equals average of p'", SECOND_P.average(), SECOND_P_PRIME.average()),
        Check("spread of (p, p')", SECOND_DISPERSION, (SECOND_P.dispersion(), SECOND_P_PRIME.dispersion())),
        Check("E_mu |x-2|", SECOND_ABS_MU, expect(mu, f)),
        Check("E_nu |x-2|", SECOND_ABS_NU, expect(nu, f)),
        Check("mu <=cx nu", STOP_LOSS_VIOLATION, is_cx_dominated(mu, nu).reason),
        Check("p majorizes p'", False, majorizes(SECOND_P, SECOND_P_PRIME)),
        Check("sigma criterion", False, sigma_criterion(SECOND_P, SECOND_P_PRIME)),
    ]
