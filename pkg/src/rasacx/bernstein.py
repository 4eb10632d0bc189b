"""Bernstein basis, Bernstein operators and multi-block Bernstein sums."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Sequence

from rasacx.distributions import affine_pushforward, binomial, convolve_all, expect
from rasacx.errors import DomainError, RangeError
from rasacx.functions import ConvexTestFunction, random_convex_piecewise_linear
from rasacx.numerics import RationalLike, binomial_coefficient, format_rational, parse_rational

BATTERY_RANDOM_COUNT = 20


def _unit(x: RationalLike) -> Fraction:
    x = parse_rational(x)
    if x < 0 or x > 1:
        raise DomainError(f"argument {format_rational(x)} outside [0, 1]")
    return x


def _covers_unit(f: ConvexTestFunction) -> None:
    lo, hi = f.domain
    if lo > 0 or hi < 1:
        raise DomainError(f"domain of {f.f_id} does not contain [0, 1]")


def bernstein_basis(n: int, i: int, x: RationalLike) -> Fraction:
    """p_{n,i}(x) = C(n, i) x^i (1 - x)^(n - i)."""
    if n < 0 or i < 0 or i > n:
        raise RangeError(f"bernstein_basis: i={i} outside 0..{n}")
    x = _unit(x)
    return binomial_coefficient(n, i) * x**i * (1 - x) ** (n - i)


def bernstein_apply(n: int, f: ConvexTestFunction, x: RationalLike) -> Fraction:
    """(B_n f)(x) by direct summation over the basis."""
    if n < 1:
        raise DomainError(f"Bernstein operator needs n >= 1, got {n}")
    _covers_unit(f)
    x = _unit(x)
    return sum((bernstein_basis(n, i, x) * f(Fraction(i, n)) for i in range(n + 1)), Fraction(0))


def tensor_sum(ns: Sequence[int], xs: Sequence[RationalLike], f: ConvexTestFunction) -> Fraction:
    """sum over i_1..i_k of prod p_{n_l, i_l}(x_l) * f((i_1 + ... + i_k) / m), m = sum(ns).

    Evaluated as E f(S / m) with S the sum of independent B(n_l, x_l) draws.
    """
    if not ns or len(ns) != len(xs):
        raise DomainError("tensor_sum needs equally long, nonempty ns and xs")
    if any(n < 1 for n in ns):
        raise DomainError(f"block sizes must be positive, got {list(ns)}")
    m = sum(ns)
    law = convolve_all([binomial(n, _unit(x)) for n, x in zip(ns, xs)])
    return expect(affine_pushforward(law, Fraction(1, m), 0), f)


def standard_battery(m: int, seed: int = 0, random_count: int = BATTERY_RANDOM_COUNT) -> List[ConvexTestFunction]:
    """Convex test functions on [0, 1] for sweeps whose arguments live on the lattice ``j/m``.

    Hinges and absolute values kinked at every ``j/m``, the square, and
    ``random_count`` seeded random convex piecewise-linear functions.  The
    random part depends on ``seed`` only.
    """
    lattice = [Fraction(j, m) for j in range(m + 1)]
    battery = [ConvexTestFunction.hinge(t) for t in lattice]
    battery += [ConvexTestFunction.absolute(t) for t in lattice]
    battery.append(ConvexTestFunction.square())
    rng = random.Random(seed)
    for i in range(random_count):
        d = rng.randint(2, 12)
        inner = rng.sample(range(1, d), rng.randint(0, d - 1)) if d > 1 else []
        bps = [Fraction(0), Fraction(1)] + [Fraction(a, d) for a in inner]
        battery.append(random_convex_piecewise_linear(rng, bps, name=f"pl{i}@{seed}"))
    return battery
