"""Convex test functions with machine-checked convexity and exact evaluation."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from rasacx.errors import DomainError, ParseError
from rasacx.numerics import RationalLike, format_rational, parse_rational

KINDS = ("hinge", "abs", "piecewise-linear", "polynomial")

UNIT = (Fraction(0), Fraction(1))


def _domain(domain: Sequence[RationalLike]) -> Tuple[Fraction, Fraction]:
    lo, hi = (parse_rational(v) for v in domain)
    if lo > hi:
        raise DomainError(f"empty domain [{format_rational(lo)}, {format_rational(hi)}]")
    return lo, hi


@dataclass(frozen=True)
class ConvexTestFunction:
    """A convex function on a closed rational interval.

    Build instances through :meth:`hinge`, :meth:`absolute`,
    :meth:`piecewise_linear`, :meth:`polynomial` or :meth:`square`; the
    constructors refuse anything whose convexity cannot be certified.
    Polynomial coefficients are in ascending powers.
    """

    kind: str
    domain: Tuple[Fraction, Fraction] = UNIT
    t: Optional[Fraction] = None
    breakpoints: Tuple[Fraction, ...] = ()
    values: Tuple[Fraction, ...] = ()
    coefficients: Tuple[Fraction, ...] = ()
    name: Optional[str] = field(default=None, compare=False)
    _lattice: Dict[int, Tuple[Tuple[int, ...], int]] = field(
        default_factory=dict, init=False, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"unknown function kind {self.kind!r}")
        object.__setattr__(self, "domain", _domain(self.domain))
        if self.kind in ("hinge", "abs"):
            if self.t is None:
                raise DomainError(f"{self.kind} needs a kink location t")
            object.__setattr__(self, "t", parse_rational(self.t))
        elif self.kind == "piecewise-linear":
            self._check_piecewise_linear()
        else:
            self._check_polynomial()

    def _check_piecewise_linear(self) -> None:
        xs = tuple(parse_rational(b) for b in self.breakpoints)
        ys = tuple(parse_rational(v) for v in self.values)
        if len(xs) < 2 or len(xs) != len(ys):
            raise DomainError("piecewise-linear needs >= 2 breakpoints and one value per breakpoint")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("piecewise-linear breakpoints must be strictly increasing")
        slopes = [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]
        for i, (s0, s1) in enumerate(zip(slopes, slopes[1:])):
            if s1 < s0:
                raise DomainError(
                    f"piecewise-linear function is not convex at breakpoint {format_rational(xs[i + 1])}"
                )
        object.__setattr__(self, "breakpoints", xs)
        object.__setattr__(self, "values", ys)
        lo, hi = self.domain
        if lo < xs[0] or hi > xs[-1]:
            raise DomainError("piecewise-linear domain must lie within its breakpoint range")

    def _check_polynomial(self) -> None:
        cs = [parse_rational(c) for c in self.coefficients]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        object.__setattr__(self, "coefficients", tuple(cs))
        second = [k * (k - 1) * c for k, c in enumerate(cs)][2:]
        if len(cs) <= 3:
            if second and second[0] < 0:
                raise DomainError("quadratic with negative leading coefficient is not convex")
            return
        # conservative: f'' has nonnegative coefficients and the domain is in [0, inf)
        if any(c < 0 for c in second) or self.domain[0] < 0:
            raise DomainError("cannot certify convexity of polynomial on its domain")

    # -- constructors -----------------------------------------------------

    @classmethod
    def hinge(cls, t: RationalLike, domain: Sequence[RationalLike] = UNIT) -> "ConvexTestFunction":
        """x -> max(x - t, 0)."""
        return cls("hinge", domain=tuple(domain), t=parse_rational(t))

    @classmethod
    def absolute(cls, t: RationalLike, domain: Sequence[RationalLike] = UNIT) -> "ConvexTestFunction":
        """x -> |x - t|."""
        return cls("abs", domain=tuple(domain), t=parse_rational(t))

    @classmethod
    def piecewise_linear(
        cls,
        breakpoints: Sequence[RationalLike],
        values: Sequence[RationalLike],
        name: Optional[str] = None,
    ) -> "ConvexTestFunction":
        bps = tuple(parse_rational(b) for b in breakpoints)
        if not bps:
            raise DomainError("piecewise-linear needs breakpoints")
        return cls(
            "piecewise-linear",
            domain=(bps[0], bps[-1]),
            breakpoints=bps,
            values=tuple(values),
            name=name,
        )

    @classmethod
    def polynomial(
        cls, coefficients: Sequence[RationalLike], domain: Sequence[RationalLike] = UNIT
    ) -> "ConvexTestFunction":
        return cls("polynomial", domain=tuple(domain), coefficients=tuple(coefficients))

    @classmethod
    def square(cls, domain: Sequence[RationalLike] = UNIT) -> "ConvexTestFunction":
        return cls.polynomial((0, 0, 1), domain=domain)

    # -- evaluation -------------------------------------------------------

    def __call__(self, x: RationalLike) -> Fraction:
        x = parse_rational(x)
        lo, hi = self.domain
        if x < lo or x > hi:
            raise DomainError(
                f"{format_rational(x)} outside domain [{format_rational(lo)}, {format_rational(hi)}]"
                f" of {self.f_id}"
            )
        if self.kind == "hinge":
            return x - self.t if x > self.t else Fraction(0)
        if self.kind == "abs":
            return abs(x - self.t)
        if self.kind == "polynomial":
            acc = Fraction(0)
            for c in reversed(self.coefficients):
                acc = acc * x + c
            return acc
        xs, ys = self.breakpoints, self.values
        for i in range(len(xs) - 1):
            if x <= xs[i + 1]:
                return ys[i] + (ys[i + 1] - ys[i]) * (x - xs[i]) / (xs[i + 1] - xs[i])
        return ys[-1]

    def lattice_values(self, m: int) -> Tuple[Tuple[int, ...], int]:
        """``f(j/m)`` for ``j = 0..m`` as integer numerators over one common denominator."""
        cached = self._lattice.get(m)
        if cached is None:
            vals = [self(Fraction(j, m)) for j in range(m + 1)]
            den = math.lcm(*(v.denominator for v in vals))
            cached = (tuple(v.numerator * (den // v.denominator) for v in vals), den)
            self._lattice[m] = cached
        return cached

    def with_domain(self, domain: Sequence[RationalLike]) -> "ConvexTestFunction":
        """Same function on another interval (not allowed to exceed piecewise-linear breakpoints)."""
        return ConvexTestFunction(
            self.kind,
            domain=tuple(domain),
            t=self.t,
            breakpoints=self.breakpoints,
            values=self.values,
            coefficients=self.coefficients,
            name=self.name,
        )

    @property
    def f_id(self) -> str:
        if self.name:
            return self.name
        if self.kind in ("hinge", "abs"):
            return f"{self.kind}:{format_rational(self.t)}"
        if self.kind == "polynomial":
            if self.coefficients == (0, 0, 1):
                return "square"
            return "poly:" + ",".join(format_rational(c) for c in self.coefficients)
        pairs = ";".join(
            f"{format_rational(b)}={format_rational(v)}" for b, v in zip(self.breakpoints, self.values)
        )
        return f"pl:{pairs}"

    def __str__(self) -> str:
        return self.f_id

    # -- JSON -------------------------------------------------------------

    def to_json_obj(self) -> Dict[str, Any]:
        obj: Dict[str, Any] = {"kind": self.kind}
        if self.kind in ("hinge", "abs"):
            obj["t"] = format_rational(self.t)
        elif self.kind == "polynomial":
            obj["coefficients"] = [format_rational(c) for c in self.coefficients]
        else:
            obj["breakpoints"] = [format_rational(b) for b in self.breakpoints]
            obj["values"] = [format_rational(v) for v in self.values]
        obj["domain"] = [format_rational(v) for v in self.domain]
        if self.name:
            obj["name"] = self.name
        return obj

    @classmethod
    def from_json_obj(cls, obj: Any) -> "ConvexTestFunction":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ParseError('test function JSON must be an object with a "kind" field')
        kind = obj["kind"]
        domain = tuple(obj.get("domain", ("0", "1")))
        if len(domain) != 2:
            raise ParseError('"domain" must be a [lo, hi] pair')
        try:
            if kind == "hinge":
                return cls.hinge(obj["t"], domain)
            if kind == "abs":
                return cls.absolute(obj["t"], domain)
            if kind == "polynomial":
                return cls.polynomial(obj["coefficients"], domain)
            if kind == "piecewise-linear":
                return cls.piecewise_linear(obj["breakpoints"], obj["values"], name=obj.get("name"))
        except KeyError as exc:
            raise ParseError(f"{kind} function JSON is missing field {exc}") from exc
        raise ParseError(f"unknown function kind {kind!r}")


def random_convex_piecewise_linear(
    rng: random.Random,
    breakpoints: Sequence[RationalLike],
    name: Optional[str] = None,
    max_slope: int = 10,
) -> ConvexTestFunction:
    """Draw a convex piecewise-linear function with the given breakpoints.

    The starting slope is a random integer in ``[-max_slope, max_slope]`` and
    each later slope adds a nonnegative increment that is zero half of the
    time.  Sparse increments keep single hinges likely.
    """
    bps = sorted({parse_rational(b) for b in breakpoints})
    if len(bps) == 1:
        bps = [bps[0], bps[0] + 1]
    values = random_convex_values(rng, bps, max_slope)
    return ConvexTestFunction.piecewise_linear(bps, values, name=name)


def random_convex_values(rng: random.Random, bps: Sequence[Fraction], max_slope: int = 10) -> List[Fraction]:
    """Values at the sorted breakpoints ``bps`` drawn as in :func:`random_convex_piecewise_linear`."""
    slope = Fraction(rng.randint(-max_slope, max_slope))
    values = [Fraction(rng.randint(-max_slope, max_slope))]
    for i in range(len(bps) - 1):
        if i > 0 and rng.randrange(2):
            slope += Fraction(rng.randint(1, max_slope), rng.randint(1, 4))
        values.append(values[-1] + slope * (bps[i + 1] - bps[i]))
    return values
