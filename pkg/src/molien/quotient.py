"""
Q_k = R_k^G / (R_1^G(h_1) ... R_1^G(h_k)), its polynomiality and rank.

Polynomiality is decided by exact division: cancel den_1(h_i) against the
denominator of R_k^G, normalize, then divide by every num_1(h_i). Only a
non-polynomial Q is rewritten over binomials, through binomial_reciprocal
(num_1 * c = (1 - h^m)^r); when num_1 has a non-cyclotomic factor Q is kept
over prod_i num_1(h_i) instead.
"""

import logging
import time
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

import sympy as sp

from ..lattice.families import GroupSpec
from ..polyring.multipoly import MultiPoly, try_divide_univariate
from ..polyring.series import BinomialFactor, NonCyclotomicError, RationalSeries, binomial_reciprocal, normalize
from ..utils.limits import CapacityError
from .engine import compute_R_k, invariant_degrees, limit_rank, scaled_limit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QResult:
    group: GroupSpec
    k: int
    R_k: RationalSeries
    R_1: RationalSeries
    Q: RationalSeries
    is_polynomial: bool
    rank: Optional[int]
    expected_rank: int
    is_separable: Optional[bool]
    scaled_limit: sp.Rational
    limit_rank: sp.Rational
    degrees: Optional[Tuple[int, ...]]
    # Q is Q / prod_i residual(h_i) when residual is set
    residual: Optional[MultiPoly] = None

    @property
    def polynomial(self) -> Optional[MultiPoly]:
        return self.Q.numerator if self.is_polynomial else None

    @property
    def rank_matches(self) -> bool:
        return self.is_polynomial and self.rank == self.expected_rank


def _cancel_denominators(rk: RationalSeries, r1: RationalSeries) -> RationalSeries:
    """rk * prod_i den_1(h_i), cancelling against rk's own factors where it can."""
    numerator = rk.numerator
    remaining = Counter(rk.denominator)
    for i in range(rk.nvars):
        for f in r1.denominator:
            lifted = BinomialFactor(i, f.exponent)
            if remaining[lifted]:
                remaining[lifted] -= 1
            else:
                numerator = numerator.times_binomial(i, f.exponent)
    return RationalSeries(numerator, tuple(remaining.elements()))


def _divide_by_numerators(p: MultiPoly, num1: MultiPoly) -> Optional[MultiPoly]:
    """p / prod_i num_1(h_i) when every division is exact, else None."""
    for i in range(p.nvars):
        p = try_divide_univariate(p, i, num1)
        if p is None:
            return None
    return p


def _binomial_form(cancelled: RationalSeries, r1: RationalSeries) -> RationalSeries:
    """Q over binomials only: 1/num_1(h_i) becomes c(h_i) / (1 - h_i^m)^r."""
    cof, m, r = binomial_reciprocal(r1.numerator)
    logger.debug("1/num_1 = (%s) / (1 - h^%d)^%d", cof.format(["h"]), m, r)
    k = cancelled.nvars
    numerator = cancelled.numerator
    factors = list(cancelled.denominator)
    for i in range(k):
        numerator = numerator * cof.embed(k, i)
        factors.extend([BinomialFactor(i, m)] * r)
    return normalize(RationalSeries(numerator, tuple(factors)))


def compute_Q(spec: GroupSpec, k: int, cap: Optional[int] = None) -> QResult:
    """Assemble and normalize Q_k; rank and separability only when it is a polynomial."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    start = time.perf_counter()

    r1 = compute_R_k(spec, 1, cap=cap)
    rk = r1 if k == 1 else compute_R_k(spec, k, cap=cap)
    logger.debug("R_1 = %s", r1.format())

    cancelled = _cancel_denominators(rk, r1)
    partial = normalize(cancelled)
    quotient = _divide_by_numerators(partial.numerator, r1.numerator) if partial.is_polynomial else None

    residual = None
    if quotient is not None:
        q = RationalSeries.polynomial(quotient)
    else:
        try:
            q = _binomial_form(cancelled, r1)
        except (NonCyclotomicError, CapacityError) as exc:
            logger.info("Q_%d for %s left over prod num_1(h_i): %s", k, spec.label, exc)
            q, residual = partial, r1.numerator

    polynomial = quotient is not None
    expected = spec.order ** (k - 1)
    rank = separable = None
    if polynomial:
        value = q.numerator.eval_at_ones()
        rank = int(value) if value.q == 1 else None
        separable = separability_test(q.numerator)
    logger.debug("Q_%d for %s: %s", k, spec.label, q.format())

    result = QResult(
        group=spec,
        k=k,
        R_k=rk,
        R_1=r1,
        Q=q,
        is_polynomial=polynomial,
        rank=rank,
        expected_rank=expected,
        is_separable=separable,
        scaled_limit=scaled_limit(spec, k, cap=cap),
        limit_rank=limit_rank(spec, k, cap=cap),
        degrees=invariant_degrees(spec, cap=cap, r1=r1),
        residual=residual,
    )
    logger.info("Q_%d for %s computed in %.2fs (polynomial: %s)",
                k, spec.label, time.perf_counter() - start, polynomial)
    return result


def separability_test(Q: MultiPoly) -> bool:
    """True iff Q = q(h_1) ... q(h_k) with q = Q restricted to h_1."""
    if Q.constant_term() != 1:
        raise ValueError(f"expected constant term 1, got {Q.constant_term()}")
    q = Q.restrict_to_variable(0)
    product = MultiPoly.one(Q.nvars)
    for i in range(Q.nvars):
        product = product * q.embed(Q.nvars, i)
    return product == Q


def is_symmetric(p: MultiPoly) -> bool:
    """Invariance under every permutation of the variables (adjacent swaps suffice)."""
    for i in range(p.nvars - 1):
        perm = list(range(p.nvars))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if p.permute_variables(perm) != p:
            return False
    return True
