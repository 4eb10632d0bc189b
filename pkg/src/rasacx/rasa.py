"""Verifiers for the Rasa family of Bernstein inequalities.

Every verifier returns exact rationals.  Margins are oriented so that a
nonnegative margin means the inequality holds; a negative margin is a
counterexample and is reported, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

from rasacx.bernstein import bernstein_basis
from rasacx.convex_order import CxVerdict, is_cx_dominated
from rasacx.distributions import (
    DiscreteDistribution,
    affine_pushforward,
    binomial,
    convolve,
    mixture,
)
from rasacx.errors import DomainError, OrderError
from rasacx.functions import ConvexTestFunction
from rasacx.majorization import ProbVector, majorizes
from rasacx.numerics import RationalLike, format_rational, parse_rational

RASA = "rasa"
SPLIT_COMBINED = "split.combined"
SPLIT_JENSEN = "split.jensen"
SPLIT_CONJECTURE = "split.conjecture"
GENERAL_CONVOLUTION = "general.convolution"
GENERAL_JENSEN = "general.jensen"
GENERAL_COMBINED = "general.combined"
GENERAL_EXPANDED = "general.expanded"
HLP = "hlp"
CHAIN_CONVOLUTION = "chain.convolution"
CHAIN_JENSEN = "chain.jensen"

Params = Tuple[Tuple[str, Any], ...]


def _encode_param(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return [_encode_param(v) for v in value]
    return value


def _param_sort_key(value: Any) -> Tuple:
    if isinstance(value, (list, tuple)):
        return (len(value), tuple(Fraction(v) for v in value))
    return (0, (Fraction(value),))


@dataclass(frozen=True)
class InequalityMargin:
    """Both sides of one inequality instance ``lhs <= rhs``."""

    inequality_id: str
    params: Params
    f_id: str
    lhs: Fraction
    rhs: Fraction

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.margin >= 0

    @property
    def point(self) -> List[Any]:
        return [v for _, v in self.params]

    def sort_key(self) -> Tuple:
        return (self.inequality_id, tuple(_param_sort_key(v) for _, v in self.params), self.f_id)

    def to_record(self) -> Dict[str, Any]:
        return {
            "inequality_id": self.inequality_id,
            "params": {k: _encode_param(v) for k, v in self.params},
            "f": self.f_id,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "margin": format_rational(self.margin),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class ChainValues:
    """Successive expressions of a chain ``v_0 <= v_1 <= ... <= v_r``."""

    chain_id: str
    values: Tuple[Fraction, ...]

    @property
    def holds(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    def first_violation(self) -> Optional[int]:
        for i, (a, b) in enumerate(zip(self.values, self.values[1:])):
            if a > b:
                return i
        return None

    def margins(self, params: Params, f_id: str) -> List[InequalityMargin]:
        """One margin per adjacent pair, tagged with its ``stage``."""
        return [
            InequalityMargin(self.chain_id, params + (("stage", i),), f_id, a, b)
            for i, (a, b) in enumerate(zip(self.values, self.values[1:]))
        ]


Weights = Tuple[Tuple[int, ...], int]


@lru_cache(maxsize=65536)
def _basis_weights(n: int, x: Fraction) -> Weights:
    """Bernstein basis row ``p_{n,0}(x), ..., p_{n,n}(x)`` as integers over a common denominator."""
    row = [bernstein_basis(n, i, x) for i in range(n + 1)]
    den = math.lcm(*(v.denominator for v in row))
    return tuple(v.numerator * (den // v.denominator) for v in row), den


def _lattice_weights(d: DiscreteDistribution, m: int) -> Weights:
    """Masses of a law supported on ``{j/m}``, indexed by ``j``, over a common denominator."""
    den = math.lcm(*(w.denominator for _, w in d.atoms))
    nums = [0] * (m + 1)
    for point, w in d.atoms:
        j = point * m
        if j.denominator != 1 or not 0 <= j <= m:
            raise DomainError(f"support point {format_rational(point)} is not on the lattice j/{m}")
        nums[int(j)] = w.numerator * (den // w.denominator)
    return tuple(nums), den


def _pair(w: Weights, f: ConvexTestFunction, m: int) -> Fraction:
    """sum_j w_j f(j/m), exactly, using integer arithmetic."""
    nums, den = w
    fnums, fden = f.lattice_values(m)
    return Fraction(sum(a * b for a, b in zip(nums, fnums)), den * fden)


def _combine(terms: Sequence[Tuple[Fraction, Weights]]) -> Weights:
    """Integer weights of ``sum c * w`` over a common denominator."""
    dens = [c.denominator * w[1] for c, w in terms]
    den = math.lcm(*dens)
    size = max(len(w[0]) for _, w in terms)
    nums = [0] * size
    for (c, (wn, _)), d in zip(terms, dens):
        k = c.numerator * (den // d)
        for j, v in enumerate(wn):
            nums[j] += k * v
    return tuple(nums), den


def _bernstein(n: int, f: ConvexTestFunction, x: Fraction) -> Fraction:
    """(B_n f)(x) by basis summation."""
    return _pair(_basis_weights(n, x), f, n)


@lru_cache(maxsize=65536)
def _scaled_law(ns: Tuple[int, ...], xs: Tuple[Fraction, ...]) -> DiscreteDistribution:
    """Law of (S_1 + ... + S_k) / m for independent S_l ~ B(n_l, x_l)."""
    law = binomial(ns[0], xs[0])
    for n, x in zip(ns[1:], xs[1:]):
        law = convolve(law, binomial(n, x))
    return affine_pushforward(law, Fraction(1, sum(ns)), 0)


@lru_cache(maxsize=65536)
def _law_weights(ns: Tuple[int, ...], xs: Tuple[Fraction, ...]) -> Weights:
    return _lattice_weights(_scaled_law(ns, xs), sum(ns))


def _unit(x: RationalLike) -> Fraction:
    x = parse_rational(x)
    if x < 0 or x > 1:
        raise DomainError(f"argument {format_rational(x)} outside [0, 1]")
    return x


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"degree must be a positive integer, got {n!r}")


def _blocks(ns: Sequence[int], xs: Sequence[RationalLike]) -> Tuple[Tuple[int, ...], Tuple[Fraction, ...]]:
    if len(ns) != len(xs):
        raise DomainError(f"length mismatch: {len(ns)} block sizes vs {len(xs)} arguments")
    if not ns:
        raise DomainError("need at least one block")
    for n in ns:
        _check_n(n)
    return tuple(ns), tuple(_unit(x) for x in xs)


def _weighted_point(ns: Sequence[int], xs: Sequence[Fraction]) -> Fraction:
    return sum((n * x for n, x in zip(ns, xs)), Fraction(0)) / sum(ns)


def merged_prefix(
    ns: Sequence[int], xs: Sequence[Fraction], j: int
) -> Tuple[Tuple[int, ...], Tuple[Fraction, ...]]:
    """Replace the first ``j`` blocks by one block of size ``n_1+..+n_j`` at their weighted mean."""
    head_n = sum(ns[:j])
    head_x = _weighted_point(ns[:j], xs[:j])
    return (head_n,) + tuple(ns[j:]), (head_x,) + tuple(xs[j:])


# -- two-point inequalities --------------------------------------------------


def rasa_original_many(
    n: int, x: RationalLike, y: RationalLike, fs: Sequence[ConvexTestFunction]
) -> List[InequalityMargin]:
    _check_n(n)
    x, y = _unit(x), _unit(y)
    m = 2 * n
    bx, by = binomial(n, x), binomial(n, y)
    scale = Fraction(1, m)
    mixed = _lattice_weights(affine_pushforward(convolve(bx, by), scale, 0), m)
    spread = _lattice_weights(
        affine_pushforward(
            mixture([(Fraction(1, 2), convolve(bx, bx)), (Fraction(1, 2), convolve(by, by))]), scale, 0
        ),
        m,
    )
    gap = _combine([(Fraction(2), spread), (Fraction(-2), mixed)])
    params = (("n", n), ("x", x), ("y", y))
    return [InequalityMargin(RASA, params, f.f_id, Fraction(0), _pair(gap, f, m)) for f in fs]


def rasa_original(n: int, x: RationalLike, y: RationalLike, f: ConvexTestFunction) -> InequalityMargin:
    """The double sum of ``p_{n,i}(x)p_{n,j}(x) + p_{n,i}(y)p_{n,j}(y) - 2p_{n,i}(x)p_{n,j}(y)``
    against ``f((i+j)/2n)``, compared with zero.

    The sum equals ``2 (E_spread f - E_mixed f)`` where ``mixed`` is
    ``B(n,x)*B(n,y)`` and ``spread`` the half-half mixture of the two
    self-convolutions, both rescaled by ``1/2n``.
    """
    return rasa_original_many(n, x, y, [f])[0]


def prop_concentration(n: int, x: RationalLike, y: RationalLike) -> CxVerdict:
    """Is ``B(n,x) * B(n,y) <=cx B(2n, (x+y)/2)``?"""
    _check_n(n)
    x, y = _unit(x), _unit(y)
    return is_cx_dominated(convolve(binomial(n, x), binomial(n, y)), binomial(2 * n, (x + y) / 2))


def prop_mixture(n: int, x: RationalLike, y: RationalLike) -> CxVerdict:
    """Is ``B(2n, (x+y)/2) <=cx (B(n,x)*B(n,x) + B(n,y)*B(n,y)) / 2``?"""
    _check_n(n)
    x, y = _unit(x), _unit(y)
    bx, by = binomial(n, x), binomial(n, y)
    spread = mixture([(Fraction(1, 2), convolve(bx, bx)), (Fraction(1, 2), convolve(by, by))])
    return is_cx_dominated(binomial(2 * n, (x + y) / 2), spread)


def split_inequalities_many(
    n: int, x: RationalLike, y: RationalLike, fs: Sequence[ConvexTestFunction]
) -> List[InequalityMargin]:
    _check_n(n)
    x, y = _unit(x), _unit(y)
    m = 2 * n
    params = (("n", n), ("x", x), ("y", y))
    ends_w = _combine([(Fraction(1), _basis_weights(m, x)), (Fraction(1), _basis_weights(m, y))])
    mid_w = _basis_weights(m, (x + y) / 2)
    cross_w = _law_weights((n, n), (x, y))
    out = []
    for f in fs:
        ends, mid, cross = _pair(ends_w, f, m), _pair(mid_w, f, m), _pair(cross_w, f, m)
        out += [
            InequalityMargin(SPLIT_JENSEN, params, f.f_id, 2 * mid, ends),
            InequalityMargin(SPLIT_CONJECTURE, params, f.f_id, cross, mid),
            InequalityMargin(SPLIT_COMBINED, params, f.f_id, 2 * cross, ends),
        ]
    return out


def split_inequalities(
    n: int, x: RationalLike, y: RationalLike, f: ConvexTestFunction
) -> List[InequalityMargin]:
    """Margins of the two halves of the Rasa inequality and of their sum.

    * ``split.jensen``:      2 (B_2n f)((x+y)/2)          <= (B_2n f)(x) + (B_2n f)(y)
    * ``split.conjecture``:  sum p_{n,i}(x) p_{n,j}(y) f((i+j)/2n) <= (B_2n f)((x+y)/2)
    * ``split.combined``:    2 sum p_{n,i}(x) p_{n,j}(y) f((i+j)/2n) <= (B_2n f)(x) + (B_2n f)(y)

    The combined margin is the jensen margin plus twice the conjecture margin.
    """
    return split_inequalities_many(n, x, y, [f])


# -- k blocks ------------------------------------------------------------------


def generalized_inequalities_many(
    ns: Sequence[int], xs: Sequence[RationalLike], fs: Sequence[ConvexTestFunction]
) -> List[InequalityMargin]:
    ns, xs = _blocks(ns, xs)
    m = sum(ns)
    params = (("ns", ns), ("xs", xs))
    weights = [Fraction(n, m) for n in ns]
    tensor_w = _law_weights(ns, xs)
    mean_w = _basis_weights(m, _weighted_point(ns, xs))
    spread_dist_w = _lattice_weights(
        affine_pushforward(mixture([(w, binomial(m, x)) for w, x in zip(weights, xs)]), Fraction(1, m), 0),
        m,
    )
    spread_sum_w = _combine([(w, _basis_weights(m, x)) for w, x in zip(weights, xs)])
    out = []
    for f in fs:
        tensor = _pair(tensor_w, f, m)
        at_mean = _pair(mean_w, f, m)
        spread_dist = _pair(spread_dist_w, f, m)
        spread_sum = _pair(spread_sum_w, f, m)
        out += [
            InequalityMargin(GENERAL_CONVOLUTION, params, f.f_id, tensor, at_mean),
            InequalityMargin(GENERAL_JENSEN, params, f.f_id, at_mean, spread_sum),
            InequalityMargin(GENERAL_COMBINED, params, f.f_id, tensor, spread_dist),
            InequalityMargin(GENERAL_EXPANDED, params, f.f_id, tensor, spread_sum),
        ]
    return out


def generalized_inequalities(
    ns: Sequence[int], xs: Sequence[RationalLike], f: ConvexTestFunction
) -> List[InequalityMargin]:
    """Margins of the k-block inequalities, with ``m = sum(ns)`` and ``xbar = sum(n_i x_i) / m``.

    * ``general.convolution``: tensor sum            <= (B_m f)(xbar)
    * ``general.jensen``:      (B_m f)(xbar)         <= sum (n_i/m) (B_m f)(x_i)
    * ``general.combined``:    tensor sum            <= sum (n_i/m) (B_m f)(x_i)
    * ``general.expanded``:    the combined inequality with the right side
      written as ``sum (n_i/m) sum_j p_{m,j}(x_i) f(j/m)``.

    The combined right side is an expectation over the mixture of the laws
    ``B(m, x_i)/m``; the expanded one is a Bernstein basis sum.  The two are
    computed independently and must agree exactly.
    """
    return generalized_inequalities_many(ns, xs, [f])


def hlp_sum_many(n: int, p: Any, p_prime: Any, fs: Sequence[ConvexTestFunction]) -> List[InequalityMargin]:
    _check_n(n)
    p = p if isinstance(p, ProbVector) else ProbVector(tuple(p))
    p_prime = p_prime if isinstance(p_prime, ProbVector) else ProbVector(tuple(p_prime))
    if not majorizes(p, p_prime):
        raise OrderError(f"{p} does not majorize {p_prime}")
    one = Fraction(1)
    lhs_w = _combine([(one, _basis_weights(n, v)) for v in p_prime])
    rhs_w = _combine([(one, _basis_weights(n, v)) for v in p])
    params = (("n", n), ("p", p.entries), ("p_prime", p_prime.entries))
    return [InequalityMargin(HLP, params, f.f_id, _pair(lhs_w, f, n), _pair(rhs_w, f, n)) for f in fs]


def hlp_sum(n: int, p: Any, p_prime: Any, f: ConvexTestFunction) -> InequalityMargin:
    """``sum (B_n f)(p'_i) <= sum (B_n f)(p_i)`` for ``p`` majorizing ``p'``."""
    return hlp_sum_many(n, p, p_prime, [f])[0]


def _chain_blocks(ns: Sequence[int], xs: Sequence[RationalLike]) -> Tuple[Tuple[int, ...], Tuple[Fraction, ...]]:
    ns, xs = _blocks(ns, xs)
    if len(ns) < 2:
        raise DomainError("a chain needs at least two blocks")
    return ns, xs


def _convolution_stage_weights(ns: Tuple[int, ...], xs: Tuple[Fraction, ...]) -> List[Weights]:
    return [_law_weights(*merged_prefix(ns, xs, j)) for j in range(1, len(ns) + 1)]


def _jensen_stage_weights(ns: Tuple[int, ...], xs: Tuple[Fraction, ...]) -> List[Weights]:
    m = sum(ns)
    stages = []
    for j in range(len(ns), 0, -1):
        stage_ns, stage_xs = merged_prefix(ns, xs, j)
        stages.append(_combine([(Fraction(n, m), _basis_weights(m, x)) for n, x in zip(stage_ns, stage_xs)]))
    return stages


def convolution_chain(ns: Sequence[int], xs: Sequence[RationalLike], f: ConvexTestFunction) -> ChainValues:
    """Tensor sums with the first ``j`` blocks merged, for ``j = 1..k``.

    Stage ``j = 1`` is the plain tensor sum and stage ``j = k`` equals
    ``(B_m f)(xbar)``; the values are nondecreasing for convex ``f``.
    """
    ns, xs = _chain_blocks(ns, xs)
    m = sum(ns)
    return ChainValues(CHAIN_CONVOLUTION, tuple(_pair(w, f, m) for w in _convolution_stage_weights(ns, xs)))


def jensen_chain(ns: Sequence[int], xs: Sequence[RationalLike], f: ConvexTestFunction) -> ChainValues:
    """Weighted Bernstein values with progressively fewer blocks merged.

    The stage with the first ``j`` blocks merged is
    ``(n~_j/m) (B_m f)(x~_j) + sum_{i>j} (n_i/m) (B_m f)(x_i)``; stages run
    from ``j = k`` (value ``(B_m f)(xbar)``) down to ``j = 1`` (value
    ``sum (n_i/m) (B_m f)(x_i)``).
    """
    ns, xs = _chain_blocks(ns, xs)
    m = sum(ns)
    return ChainValues(CHAIN_JENSEN, tuple(_pair(w, f, m) for w in _jensen_stage_weights(ns, xs)))


def chain_margins_many(
    ns: Sequence[int], xs: Sequence[RationalLike], fs: Sequence[ConvexTestFunction]
) -> List[InequalityMargin]:
    """Adjacent-stage margins of both chains for every ``f``."""
    ns, xs = _chain_blocks(ns, xs)
    m = sum(ns)
    conv_w = _convolution_stage_weights(ns, xs)
    jens_w = _jensen_stage_weights(ns, xs)
    params = (("ns", ns), ("xs", xs))
    out = []
    for f in fs:
        conv = ChainValues(CHAIN_CONVOLUTION, tuple(_pair(w, f, m) for w in conv_w))
        jens = ChainValues(CHAIN_JENSEN, tuple(_pair(w, f, m) for w in jens_w))
        out += conv.margins(params, f.f_id) + jens.margins(params, f.f_id)
    return out
