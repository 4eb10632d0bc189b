"""Exact rational scalars and the combinatorial primitives built on them.

``Rational`` is :class:`fractions.Fraction`: arbitrary-precision numerator and
a positive denominator kept in lowest terms.  Nothing in this package ever
converts to ``float``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, List, Union

from rasacx.errors import DomainError, ParseError, RangeError

Rational = Fraction

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: RationalLike) -> Fraction:
    """Convert ``value`` to a :class:`Fraction` without any float path.

    Accepts ``Fraction``, ``int`` and strings of the form ``"a/b"`` or ``"a"``.
    Floats and decimal strings are rejected.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if not match:
            raise ParseError(f"not a rational of the form 'a/b': {value!r}")
        num, den = match.groups()
        if den is not None and int(den) == 0:
            raise ParseError(f"zero denominator: {value!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise ParseError(f"not a rational: {value!r} (type {type(value).__name__})")


def format_rational(value: Fraction) -> str:
    """Canonical ``"a/b"`` encoding; integers keep the ``/1`` suffix."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def binomial_coefficient(n: int, k: int) -> int:
    """C(n, k), zero outside ``0 <= k <= n``."""
    if n < 0:
        raise DomainError(f"binomial_coefficient needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def elementary_symmetric_all(xs: Iterable[RationalLike]) -> List[Fraction]:
    """Return ``[sigma_0, ..., sigma_m]`` of ``xs`` in a single pass.

    Uses the product expansion of ``prod(1 + x_i z)``: after absorbing ``x``,
    ``e_j <- e_j + x * e_{j-1}`` for ``j`` descending.
    """
    values = [parse_rational(x) for x in xs]
    e = [Fraction(1)] + [Fraction(0)] * len(values)
    for i, x in enumerate(values, start=1):
        for j in range(i, 0, -1):
            e[j] += x * e[j - 1]
    return e


def elementary_symmetric(xs: Iterable[RationalLike], j: int) -> Fraction:
    """sigma_j(xs): the sum of all products of ``j`` distinct entries."""
    values = list(xs)
    if j < 0 or j > len(values):
        raise RangeError(f"elementary_symmetric: j={j} outside 0..{len(values)}")
    return elementary_symmetric_all(values)[j]
