"""Exact verification of Bernstein-polynomial convexity inequalities via the convex order."""

from rasacx.errors import DomainError, OrderError, ParseError, RangeError
from rasacx.numerics import (
    Rational,
    binomial_coefficient,
    elementary_symmetric,
    format_rational,
    parse_rational,
)
from rasacx.distributions import (
    DiscreteDistribution,
    affine_pushforward,
    bernoulli,
    binomial,
    convolve,
    expect,
    mean,
    mixture,
    stop_loss,
    variance,
)
from rasacx.functions import ConvexTestFunction
from rasacx.convex_order import CxVerdict, cx_falsify_random, is_cx_dominated
from rasacx.majorization import (
    PinchStep,
    ProbVector,
    bernoulli_convolution,
    majorizes,
    pinch_chain,
    sigma_criterion,
)
from rasacx.bernstein import bernstein_apply, bernstein_basis, standard_battery, tensor_sum
from rasacx.rasa import (
    ChainValues,
    InequalityMargin,
    convolution_chain,
    generalized_inequalities,
    hlp_sum,
    jensen_chain,
    prop_concentration,
    prop_mixture,
    rasa_original,
    split_inequalities,
)

__version__ = "0.1.0"
