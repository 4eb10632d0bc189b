"""Deciding the convex order between finitely-supported distributions.

For distributions with equal means, ``mu <=cx nu`` holds iff the stop-loss
transform of ``mu`` never exceeds that of ``nu``.  Both transforms are
piecewise linear with kinks only at their own support points, so comparing
them on the union of the two supports decides the inequality everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from rasacx.distributions import DiscreteDistribution, expect, mean, stop_loss
from rasacx.functions import ConvexTestFunction, random_convex_values
from rasacx.numerics import format_rational

HOLDS = "holds"
MEANS_DIFFER = "means-differ"
STOP_LOSS_VIOLATION = "stop-loss-violation"


@dataclass(frozen=True)
class CxVerdict:
    dominated: bool
    reason: str
    witness: Optional[Tuple[Fraction, Fraction, Fraction]] = None

    def __post_init__(self) -> None:
        if self.dominated != (self.reason == HOLDS and self.witness is None):
            raise ValueError(f"inconsistent verdict: dominated={self.dominated}, reason={self.reason}")
        if self.reason == STOP_LOSS_VIOLATION and (self.witness is None or self.witness[1] <= self.witness[2]):
            raise ValueError("stop-loss violation needs a witness with lhs > rhs")

    def __bool__(self) -> bool:
        return self.dominated

    def to_json_obj(self) -> Dict[str, Any]:
        obj: Dict[str, Any] = {"dominated": self.dominated, "reason": self.reason}
        if self.witness is not None:
            t, lhs, rhs = self.witness
            obj["witness"] = {
                "t": format_rational(t),
                "lhs": format_rational(lhs),
                "rhs": format_rational(rhs),
            }
        return obj


def is_cx_dominated(mu: DiscreteDistribution, nu: DiscreteDistribution) -> CxVerdict:
    """Decide ``mu <=cx nu``.

    Unequal means give ``means-differ``; otherwise the smallest support point
    ``t`` with ``stop_loss(mu, t) > stop_loss(nu, t)`` is returned as the
    witness ``(t, stop_loss(mu, t), stop_loss(nu, t))``.
    """
    m_mu, m_nu = mean(mu), mean(nu)
    if m_mu != m_nu:
        return CxVerdict(False, MEANS_DIFFER, None)
    for t in sorted(set(mu.points) | set(nu.points)):
        lhs, rhs = stop_loss(mu, t), stop_loss(nu, t)
        if lhs > rhs:
            return CxVerdict(False, STOP_LOSS_VIOLATION, (t, lhs, rhs))
    return CxVerdict(True, HOLDS, None)


def cx_falsify_random(
    mu: DiscreteDistribution, nu: DiscreteDistribution, trials: int, seed: int
) -> Optional[ConvexTestFunction]:
    """Search for a convex ``f`` with ``E_mu f > E_nu f`` by random sampling.

    Candidates are convex piecewise-linear functions with breakpoints on the
    union of both supports.  Only ever refutes: ``None`` is not a proof of
    dominance.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    breakpoints = sorted(set(mu.points) | set(nu.points))
    bps = breakpoints if len(breakpoints) > 1 else [breakpoints[0], breakpoints[0] + 1]
    # every atom sits on a breakpoint, so E f is a dot product with the breakpoint values
    gap = {b: Fraction(0) for b in bps}
    for x, w in mu:
        gap[x] += w
    for x, w in nu:
        gap[x] -= w
    weights = [gap[b] for b in bps]
    for i in range(trials):
        values = random_convex_values(rng, bps)
        if sum(w * v for w, v in zip(weights, values)) > 0:
            f = ConvexTestFunction.piecewise_linear(bps, values, name=f"random-pl#{i}@{seed}")
            return f.with_domain((breakpoints[0], breakpoints[-1]))
    return None
