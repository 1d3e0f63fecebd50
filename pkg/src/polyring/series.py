"""
Rational series: a MultiPoly numerator over a multiset of binomial factors
(1 - h_i^m). Every denominator the engine meets has this shape, so
simplification never needs a multivariate gcd, only exact division by
univariate binomials.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from math import lcm
from typing import Iterable, List, Optional, Tuple

from sympy import totient
from sympy.polys.ring_series import rs_mul, rs_series_inversion

from ..utils.limits import CapacityError, max_binomial_order
from .multipoly import MultiPoly, VariableCountError, try_divide, try_divide_univariate

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class BinomialFactor:
    """The factor (1 - h_{var+1}^exponent); var is 0-based."""

    var: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError(f"binomial exponent must be at least 1, got {self.exponent}")
        if self.var < 0:
            raise ValueError(f"variable index must be non-negative, got {self.var}")

    def as_poly(self, nvars: int) -> MultiPoly:
        return MultiPoly.one(nvars).times_binomial(self.var, self.exponent)

    def __str__(self) -> str:
        power = "" if self.exponent == 1 else f"^{self.exponent}"
        return f"(1 - h{self.var + 1}{power})"


def _sorted_factors(factors: Iterable[BinomialFactor]) -> Tuple[BinomialFactor, ...]:
    return tuple(sorted(factors))


@dataclass(frozen=True)
class RationalSeries:
    numerator: MultiPoly
    denominator: Tuple[BinomialFactor, ...] = ()

    def __post_init__(self):
        for f in self.denominator:
            if f.var >= self.numerator.nvars:
                raise VariableCountError(f"factor {f} refers to a variable outside h1..h{self.numerator.nvars}")
        object.__setattr__(self, "denominator", _sorted_factors(self.denominator))

    @classmethod
    def polynomial(cls, p: MultiPoly) -> "RationalSeries":
        return cls(p, ())

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    @property
    def is_polynomial(self) -> bool:
        return not self.denominator

    def factor_counts(self) -> Counter:
        return Counter(self.denominator)

    def denominator_poly(self) -> MultiPoly:
        out = MultiPoly.one(self.nvars)
        for f in self.denominator:
            out = out.times_binomial(f.var, f.exponent)
        return out

    def format(self) -> str:
        if self.is_polynomial:
            return self.numerator.format()
        den = "*".join(str(f) for f in self.denominator)
        return f"({self.numerator.format()}) / ({den})"

    def __str__(self) -> str:
        return self.format()


def _check(r: RationalSeries, s: RationalSeries) -> None:
    if r.nvars != s.nvars:
        raise VariableCountError(f"cannot combine series in {r.nvars} and {s.nvars} variables")


def _times_factors(p: MultiPoly, factors: Counter) -> MultiPoly:
    for f, mult in sorted(factors.items()):
        for _ in range(mult):
            p = p.times_binomial(f.var, f.exponent)
    return p


def series_add(r: RationalSeries, s: RationalSeries) -> RationalSeries:
    """Sum over the least common multiset of binomial factors (not normalized)."""
    _check(r, s)
    rc, sc = r.factor_counts(), s.factor_counts()
    common = rc | sc
    num = _times_factors(r.numerator, common - rc) + _times_factors(s.numerator, common - sc)
    return RationalSeries(num, tuple(common.elements()))


def series_mul(r: RationalSeries, s: RationalSeries) -> RationalSeries:
    _check(r, s)
    return RationalSeries(r.numerator * s.numerator, r.denominator + s.denominator)


def series_scale(r: RationalSeries, factor) -> RationalSeries:
    return RationalSeries(r.numerator.scale(factor), r.denominator)


class NonCyclotomicError(ValueError):
    """Raised when a numerator has roots off the unit circle, so no binomial power absorbs it."""


def try_divide_binomial(p: MultiPoly, factor: BinomialFactor) -> Optional[MultiPoly]:
    """Exact quotient p / (1 - h_i^m), or None when the factor does not divide p."""
    if factor.var >= p.nvars:
        raise VariableCountError(f"factor {factor} refers to a variable outside h1..h{p.nvars}")
    return try_divide(p, factor.as_poly(p.nvars))


def _shrink(num: MultiPoly, factor: BinomialFactor) -> Tuple[MultiPoly, BinomialFactor]:
    """Replace (1 - h^m) by (1 - h^d) while the numerator absorbs the cofactor."""
    while True:
        m = factor.exponent
        for d in range(1, m):
            if m % d:
                continue
            # (1 - h^m) / (1 - h^d) = 1 + h^d + ... + h^(m-d)
            cofactor = MultiPoly.univariate({t: 1 for t in range(0, m, d)})
            q = try_divide_univariate(num, factor.var, cofactor)
            if q is not None:
                num, factor = q, BinomialFactor(factor.var, d)
                break
        else:
            return num, factor


def normalize(r: RationalSeries) -> RationalSeries:
    """
    Cancel every denominator factor that divides the numerator exactly, then
    shrink each survivor (1 - h^m) to (1 - h^d), d | m, where the numerator
    carries the cofactor. The result is a polynomial iff r represents one.
    """
    num = r.numerator
    if num.is_zero():
        return RationalSeries(num, ())
    # one pass suffices: dividing the numerator never creates new divisibility
    pending: List[BinomialFactor] = []
    for f in r.denominator:
        q = try_divide_binomial(num, f)
        if q is None:
            pending.append(f)
        else:
            num = q
    remaining: List[BinomialFactor] = []
    for f in pending:
        num, shrunk = _shrink(num, f)
        remaining.append(shrunk)
    if len(remaining) < len(r.denominator):
        logger.debug("normalize: %d of %d factors cancelled", len(r.denominator) - len(remaining), len(r.denominator))
    return RationalSeries(num, tuple(remaining))


def truncate(r: RationalSeries, bound: int) -> MultiPoly:
    """Power-series expansion of r, keeping terms of degree <= bound in every variable."""
    if bound < 0:
        raise ValueError(f"degree bound must be non-negative, got {bound}")
    poly = r.numerator.truncated(bound).element
    R = poly.ring
    inverses = {}
    for f in r.denominator:
        x = R.gens[f.var]
        if f not in inverses:
            inverses[f] = rs_series_inversion(R.one - x ** f.exponent, x, bound + 1)
        poly = rs_mul(poly, inverses[f], x, bound + 1)
    return MultiPoly.from_element(poly)


def _cyclotomic_index(factor, limit: int) -> int:
    """d with factor = Phi_d, for a monic cyclotomic factor of degree phi(d)."""
    x = factor.ring.gens[0]
    degree = factor.degree()
    for d in range(1, limit + 1):
        if totient(d) == degree and not (factor.ring.one - x ** d).rem(factor):
            return d
    raise CapacityError(f"cyclotomic factor {factor} has order above {limit}")


def binomial_reciprocal(q: MultiPoly, max_order: Optional[int] = None) -> Tuple[MultiPoly, int, int]:
    """
    Write 1/q with a binomial denominator: find the smallest m (then the
    smallest r) with q * c = (1 - h^m)^r and return (c, m, r). q must be
    univariate with q(0) = 1.

    q divides some (1 - h^m)^r iff every irreducible factor is a cyclotomic
    Phi_d; then m is the lcm of the orders d and r the largest multiplicity.
    """
    if q.nvars != 1:
        raise VariableCountError("binomial_reciprocal expects a univariate polynomial")
    if q.constant_term() != 1:
        raise ValueError(f"expected constant term 1, got {q.constant_term()}")
    if q.is_constant():
        return MultiPoly.one(1), 0, 0
    limit = max_order if max_order is not None else max_binomial_order()
    _, factors = q.element.factor_list()
    for factor, _ in factors:
        if not factor.is_cyclotomic:
            raise NonCyclotomicError(f"{q.format(['h'])} has the non-cyclotomic factor {factor}")
    m = lcm(*(_cyclotomic_index(factor, limit) for factor, _ in factors))
    if m > limit:
        raise CapacityError(f"(1 - h^{m}) is needed to absorb {q.format(['h'])}, above the limit {limit}")
    r = max(mult for _, mult in factors)
    cofactor = try_divide(MultiPoly.one(1).times_binomial(0, m) ** r, q)
    return cofactor, m, r
