"""Finitely-supported probability distributions on rational points.

A :class:`DiscreteDistribution` is kept in canonical form (points strictly
increasing, every mass positive, masses summing to exactly one), so two
distributions are equal iff their atom tuples are equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, Iterator, Sequence, Tuple

from rasacx.errors import DomainError, ParseError
from rasacx.numerics import RationalLike, binomial_coefficient, format_rational, parse_rational

Atom = Tuple[Fraction, Fraction]


def _canonical_atoms(pairs: Iterable[Tuple[RationalLike, RationalLike]]) -> Tuple[Atom, ...]:
    merged: Dict[Fraction, Fraction] = {}
    for point, mass in pairs:
        point = parse_rational(point)
        mass = parse_rational(mass)
        if mass < 0:
            raise DomainError(f"negative mass {format_rational(mass)} at {format_rational(point)}")
        merged[point] = merged.get(point, Fraction(0)) + mass
    return tuple(sorted((p, m) for p, m in merged.items() if m != 0))


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability measure with finitely many atoms.

    ``atoms`` may be given in any order with repeated points and zero masses;
    they are merged, pruned and sorted on construction.
    """

    atoms: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        atoms = _canonical_atoms(self.atoms)
        total = sum((m for _, m in atoms), Fraction(0))
        if total != 1:
            raise DomainError(f"masses sum to {format_rational(total)}, expected 1/1")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_dict(cls, masses: Dict[RationalLike, RationalLike]) -> "DiscreteDistribution":
        return cls(tuple(masses.items()))

    @classmethod
    def point_mass(cls, point: RationalLike) -> "DiscreteDistribution":
        return cls(((parse_rational(point), Fraction(1)),))

    @property
    def points(self) -> Tuple[Fraction, ...]:
        return tuple(p for p, _ in self.atoms)

    @property
    def masses(self) -> Tuple[Fraction, ...]:
        return tuple(m for _, m in self.atoms)

    def mass_at(self, point: RationalLike) -> Fraction:
        point = parse_rational(point)
        for p, m in self.atoms:
            if p == point:
                return m
        return Fraction(0)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        inner = ", ".join(f"{format_rational(p)}: {format_rational(m)}" for p, m in self.atoms)
        return "{" + inner + "}"

    def to_json_obj(self) -> Dict[str, Any]:
        return {"atoms": [[format_rational(p), format_rational(m)] for p, m in self.atoms]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Any) -> "DiscreteDistribution":
        if not isinstance(obj, dict) or "atoms" not in obj:
            raise ParseError('distribution JSON must be an object with an "atoms" list')
        raw = obj["atoms"]
        if not isinstance(raw, list):
            raise ParseError('"atoms" must be a list of [point, mass] pairs')
        pairs = []
        for idx, item in enumerate(raw):
            if not isinstance(item, list) or len(item) != 2:
                raise ParseError(f"atoms[{idx}] must be a [point, mass] pair, got {item!r}")
            pairs.append((parse_rational(item[0]), parse_rational(item[1])))
        try:
            return cls(tuple(pairs))
        except DomainError as exc:
            raise ParseError(f"distribution is not normalized: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "DiscreteDistribution":
        return cls.from_json_obj(json.loads(text))


def _check_probability(p: Fraction) -> Fraction:
    p = parse_rational(p)
    if p < 0 or p > 1:
        raise DomainError(f"probability {format_rational(p)} outside [0, 1]")
    return p


def bernoulli(p: RationalLike) -> DiscreteDistribution:
    """B(1, p): mass ``1 - p`` at 0 and ``p`` at 1."""
    p = _check_probability(p)
    return DiscreteDistribution(((Fraction(0), 1 - p), (Fraction(1), p)))


@lru_cache(maxsize=4096)
def _binomial_cached(n: int, p: Fraction) -> DiscreteDistribution:
    q = 1 - p
    return DiscreteDistribution(
        tuple((Fraction(k), binomial_coefficient(n, k) * p**k * q ** (n - k)) for k in range(n + 1))
    )


def binomial(n: int, p: RationalLike) -> DiscreteDistribution:
    """B(n, p) on the integers ``0..n``."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"binomial needs a positive integer n, got {n!r}")
    return _binomial_cached(n, _check_probability(p))


def convolve(a: DiscreteDistribution, b: DiscreteDistribution) -> DiscreteDistribution:
    """Law of the sum of independent draws from ``a`` and ``b``."""
    acc: Dict[Fraction, Fraction] = {}
    for pa, ma in a.atoms:
        for pb, mb in b.atoms:
            s = pa + pb
            acc[s] = acc.get(s, Fraction(0)) + ma * mb
    return DiscreteDistribution(tuple(acc.items()))


def convolve_all(dists: Sequence[DiscreteDistribution]) -> DiscreteDistribution:
    if not dists:
        return DiscreteDistribution.point_mass(0)
    out = dists[0]
    for d in dists[1:]:
        out = convolve(out, d)
    return out


def mixture(components: Iterable[Tuple[RationalLike, DiscreteDistribution]]) -> DiscreteDistribution:
    """Convex combination ``sum w_i * d_i``; weights must be nonnegative and sum to one."""
    components = [(parse_rational(w), d) for w, d in components]
    total = sum((w for w, _ in components), Fraction(0))
    if any(w < 0 for w, _ in components):
        raise DomainError("mixture weights must be nonnegative")
    if total != 1:
        raise DomainError(f"mixture weights sum to {format_rational(total)}, expected 1/1")
    return DiscreteDistribution(tuple((p, w * m) for w, d in components for p, m in d.atoms))


def affine_pushforward(
    d: DiscreteDistribution, scale: RationalLike, shift: RationalLike
) -> DiscreteDistribution:
    """Image of ``d`` under ``t -> scale * t + shift``."""
    scale = parse_rational(scale)
    shift = parse_rational(shift)
    return DiscreteDistribution(tuple((scale * p + shift, m) for p, m in d.atoms))


def mean(d: DiscreteDistribution) -> Fraction:
    return sum((p * m for p, m in d.atoms), Fraction(0))


def variance(d: DiscreteDistribution) -> Fraction:
    mu = mean(d)
    return sum(((p - mu) ** 2 * m for p, m in d.atoms), Fraction(0))


def stop_loss(d: DiscreteDistribution, t: RationalLike) -> Fraction:
    """E max(X - t, 0) for X ~ d."""
    t = parse_rational(t)
    return sum(((p - t) * m for p, m in d.atoms if p > t), Fraction(0))


def expect(d: DiscreteDistribution, f: Any) -> Fraction:
    """E f(X) for X ~ d, where ``f`` is a :class:`~rasacx.functions.ConvexTestFunction`.

    Raises DomainError if a support point falls outside ``f.domain``.
    """
    lo, hi = f.domain
    if d.atoms[0][0] < lo or d.atoms[-1][0] > hi:
        raise DomainError(
            f"support [{format_rational(d.atoms[0][0])}, {format_rational(d.atoms[-1][0])}] "
            f"not inside domain [{format_rational(lo)}, {format_rational(hi)}] of {f.f_id}"
        )
    return sum((f(p) * m for p, m in d.atoms), Fraction(0))

