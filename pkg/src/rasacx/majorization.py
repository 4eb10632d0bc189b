"""Majorization of probability vectors, pinch chains and the sigma criterion."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Any, Dict, List, Sequence, Tuple

from rasacx.distributions import DiscreteDistribution, bernoulli, convolve_all
from rasacx.errors import DomainError, OrderError, ParseError
from rasacx.numerics import (
    RationalLike,
    binomial_coefficient,
    elementary_symmetric_all,
    format_rational,
    parse_rational,
)


@dataclass(frozen=True)
class ProbVector:
    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        entries = tuple(parse_rational(e) for e in self.entries)
        if not entries:
            raise DomainError("probability vector must have at least one entry")
        for e in entries:
            if e < 0 or e > 1:
                raise DomainError(f"entry {format_rational(e)} outside [0, 1]")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, values: Sequence[RationalLike]) -> "ProbVector":
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def sorted_desc(self) -> Tuple[Fraction, ...]:
        return tuple(sorted(self.entries, reverse=True))

    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def average(self) -> Fraction:
        return self.total() / len(self.entries)

    def dispersion(self) -> Fraction:
        """Sum of squared deviations from the average."""
        avg = self.average()
        return sum(((e - avg) ** 2 for e in self.entries), Fraction(0))

    def __str__(self) -> str:
        return "(" + ", ".join(format_rational(e) for e in self.entries) + ")"

    def to_json_obj(self) -> Dict[str, Any]:
        return {"entries": [format_rational(e) for e in self.entries]}

    @classmethod
    def from_json_obj(cls, obj: Any) -> "ProbVector":
        if not isinstance(obj, dict) or not isinstance(obj.get("entries"), list):
            raise ParseError('probability vector JSON must be {"entries": [...]}')
        return cls(tuple(parse_rational(e) for e in obj["entries"]))


def _as_vector(p: Any) -> ProbVector:
    return p if isinstance(p, ProbVector) else ProbVector(tuple(p))


@dataclass(frozen=True)
class PinchStep:
    """Move two coordinates ``s`` and ``t`` toward each other, keeping their sum."""

    s: int
    t: int
    before: Tuple[Fraction, Fraction]
    after: Tuple[Fraction, Fraction]

    def __post_init__(self) -> None:
        if self.s == self.t:
            raise ValueError("pinch needs two distinct positions")
        (b_s, b_t), (a_s, a_t) = self.before, self.after
        if a_s + a_t != b_s + b_t:
            raise ValueError("pinch must preserve the pair sum")
        lo, hi = min(b_s, b_t), max(b_s, b_t)
        if not (lo <= a_s <= hi and lo <= a_t <= hi):
            raise ValueError("pinched values must lie between the original values")

    def apply(self, v: Sequence[Fraction]) -> List[Fraction]:
        out = list(v)
        if (out[self.s], out[self.t]) != tuple(self.before):
            raise ValueError(f"pinch step does not match vector at positions {self.s}, {self.t}")
        out[self.s], out[self.t] = self.after
        return out

    def to_json_obj(self) -> Dict[str, Any]:
        return {
            "s": self.s,
            "t": self.t,
            "before": [format_rational(v) for v in self.before],
            "after": [format_rational(v) for v in self.after],
        }


def majorizes(q: Any, p: Any) -> bool:
    """True iff ``q`` majorizes ``p``: equal totals and dominating sorted prefix sums."""
    q, p = _as_vector(q), _as_vector(p)
    if len(q) != len(p):
        raise DomainError(f"length mismatch: {len(q)} vs {len(p)}")
    sq = list(accumulate(q.sorted_desc()))
    sp = list(accumulate(p.sorted_desc()))
    return sq[-1] == sp[-1] and all(a >= b for a, b in zip(sq, sp))


def pinch_chain(p: Any, p_prime: Any) -> List[PinchStep]:
    """Pinch steps leading from ``sorted(p, reverse=True)`` to ``sorted(p_prime, reverse=True)``.

    Requires ``p`` to majorize ``p_prime``.  Each step takes the first
    position ``k`` where the working vector falls short of the target, the
    last position ``j < k`` where it exceeds the target, and moves
    ``min(v[j] - w[j], w[k] - v[k])`` from ``j`` to ``k``.  The working vector
    stays sorted and keeps majorizing the target; every step fixes at least
    one more coordinate, so there are at most ``m - 1`` steps.
    """
    p, p_prime = _as_vector(p), _as_vector(p_prime)
    if len(p) != len(p_prime):
        raise DomainError(f"length mismatch: {len(p)} vs {len(p_prime)}")
    if not majorizes(p, p_prime):
        raise OrderError(f"{p} does not majorize {p_prime}")
    v = list(p.sorted_desc())
    w = list(p_prime.sorted_desc())
    steps: List[PinchStep] = []
    while v != w:
        k = next(i for i in range(len(v)) if v[i] < w[i])
        j = max(i for i in range(k) if v[i] > w[i])
        delta = min(v[j] - w[j], w[k] - v[k])
        step = PinchStep(j, k, (v[j], v[k]), (v[j] - delta, v[k] + delta))
        v = step.apply(v)
        steps.append(step)
    return steps


def replay_chain(start: Sequence[RationalLike], steps: Sequence[PinchStep]) -> List[List[Fraction]]:
    """All intermediate vectors, starting with ``start`` itself."""
    vectors = [[parse_rational(x) for x in start]]
    for step in steps:
        vectors.append(step.apply(vectors[-1]))
    return vectors


def sigma_criterion(p: Any, p_prime: Any) -> bool:
    """Symmetric-polynomial test for ``*B(1, p_i) <=cx *B(1, p'_i)``.

    Checks ``sigma_1(p) == sigma_1(p')`` and, for ``k = 2..m``,
    ``sum_{j=k}^{m} (-1)^(j-k) C(j-2, k-2) (sigma_j(p') - sigma_j(p)) >= 0``.
    """
    p, p_prime = _as_vector(p), _as_vector(p_prime)
    m = len(p)
    if m != len(p_prime):
        raise DomainError(f"length mismatch: {m} vs {len(p_prime)}")
    if m < 2:
        raise DomainError("sigma criterion needs vectors of length >= 2")
    sp = elementary_symmetric_all(p.entries)
    sq = elementary_symmetric_all(p_prime.entries)
    if sp[1] != sq[1]:
        return False
    for k in range(2, m + 1):
        total = sum(
            (-1) ** (j - k) * binomial_coefficient(j - 2, k - 2) * (sq[j] - sp[j]) for j in range(k, m + 1)
        )
        if total < 0:
            return False
    return True


def bernoulli_convolution(p: Any) -> DiscreteDistribution:
    """Law of the number of successes among independent trials with probabilities ``p``."""
    return convolve_all([bernoulli(x) for x in _as_vector(p)])


# -- seeded generators for property suites ---------------------------------


def random_vector(rng: random.Random, m: int, max_den: int = 12) -> ProbVector:
    """Entries ``a/d`` with a common random ``d`` in ``2..max_den``."""
    d = rng.randint(2, max_den)
    return ProbVector(tuple(Fraction(rng.randint(0, d), d) for _ in range(m)))


def random_pinch(rng: random.Random, v: Sequence[Fraction]) -> List[Fraction]:
    """Replace two entries by a random convex combination pulling them together."""
    v = list(v)
    if len(v) < 2:
        return v
    s, t = rng.sample(range(len(v)), 2)
    den = rng.randint(1, 6)
    lam = Fraction(rng.randint(0, den), den)
    a, b = v[s], v[t]
    v[s], v[t] = (1 - lam) * a + lam * b, lam * a + (1 - lam) * b
    return v


def random_majorized_pair(
    rng: random.Random, m: int, max_den: int = 12, pinches: int = 3
) -> Tuple[ProbVector, ProbVector]:
    """A pair ``(p, p')`` with ``p`` majorizing ``p'``, built by random pinches of ``p``."""
    p = random_vector(rng, m, max_den)
    v = list(p.entries)
    for _ in range(rng.randint(0, pinches)):
        v = random_pinch(rng, v)
    rng.shuffle(v)
    return p, ProbVector(tuple(v))


def random_equal_sum_pair(rng: random.Random, m: int, max_den: int = 12) -> Tuple[ProbVector, ProbVector]:
    """A pair with equal totals, not necessarily comparable under majorization."""
    p = random_vector(rng, m, max_den)
    v = list(p.entries)
    d = rng.randint(2, max_den)
    for _ in range(rng.randint(1, 2 * m)):
        s, t = rng.sample(range(m), 2) if m >= 2 else (0, 0)
        if s == t:
            break
        room = min(v[s], 1 - v[t])
        # any transfer in [0, room] keeps both entries in [0, 1]
        amount = room * Fraction(rng.randint(0, d), d)
        v[s] -= amount
        v[t] += amount
    return p, ProbVector(tuple(v))
