"""
Graded Molien series of diagonal invariants for G = H x| S_n.

For a cycle type alpha the sigma-fixed H-invariant monomials have series
P_alpha / prod_{i,j} (1 - h_i^(N alpha_j)); averaging over S_n by cycle type
gives R_k^G. P_alpha is built by a residue-tracking dynamic program, so no
roots of unity are ever needed.
"""

import logging
from math import factorial, prod
from typing import Dict, Optional, Tuple

import sympy as sp

from ..lattice.families import GroupSpec
from ..lattice.zmod import orthogonal_alpha
from ..polyring.multipoly import MultiPoly
from ..polyring.series import BinomialFactor, RationalSeries, normalize, series_add, series_scale, truncate
from ..utils.limits import SUBGROUP_CAP, ensure_within, resolve_cap
from ..utils.partitions import Partition, class_divisor, class_size, partitions_of

logger = logging.getLogger(__name__)


def _column_table(N: int, k: int, part: int) -> Dict[int, MultiPoly]:
    """
    Residue r -> sum over columns (a_1..a_k) in [0, N-1]^k with sum = r mod N
    of prod_i h_i^(part * a_i).
    """
    table: Dict[int, Dict[Tuple[int, ...], int]] = {0: {(0,) * k: 1}}
    for i in range(k):
        nxt: Dict[int, Dict[Tuple[int, ...], int]] = {}
        for r, poly in table.items():
            for a in range(N):
                target = nxt.setdefault((r + a) % N, {})
                for e, c in poly.items():
                    moved = e[:i] + (e[i] + part * a,) + e[i + 1:]
                    target[moved] = target.get(moved, 0) + c
        table = nxt
    return {r: MultiPoly(k, poly) for r, poly in table.items()}


def compute_P_alpha(spec: GroupSpec, alpha: Partition, k: int, cap: Optional[int] = None) -> MultiPoly:
    """Numerator of the character series of a permutation of cycle type alpha."""
    if alpha.n != spec.n:
        raise ValueError(f"{alpha} is not a partition of n={spec.n}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    limit = resolve_cap(cap, SUBGROUP_CAP)
    ensure_within(spec.N ** k, limit, f"P_{alpha} column table")

    allowed = orthogonal_alpha(spec.perp, alpha, cap=cap).elements
    prefixes = [{v[: j + 1] for v in allowed} for j in range(alpha.length)]
    columns = {part: _column_table(spec.N, k, part) for part in set(alpha.parts)}

    states: Dict[Tuple[int, ...], MultiPoly] = {(): MultiPoly.one(k)}
    for j, part in enumerate(alpha.parts):
        nxt: Dict[Tuple[int, ...], MultiPoly] = {}
        for prefix, poly in states.items():
            for r, column in columns[part].items():
                key = prefix + (r,)
                if key in prefixes[j]:
                    nxt[key] = poly * column
        states = nxt
        ensure_within(len(states), limit, f"P_{alpha} residue states")
        ensure_within(sum(len(p) for p in states.values()), limit, f"P_{alpha} terms")

    total = MultiPoly.zero(k)
    for poly in states.values():
        total = total + poly
    logger.debug("P_%s for %s, k=%d: %d terms, %d allowed residue tuples",
                 alpha, spec.label, k, len(total), len(allowed))
    return total


def chi_series(spec: GroupSpec, alpha: Partition, k: int, cap: Optional[int] = None) -> RationalSeries:
    """Series of monomials fixed by a permutation of cycle type alpha."""
    numerator = compute_P_alpha(spec, alpha, k, cap=cap)
    factors = [BinomialFactor(i, spec.N * part) for i in range(k) for part in alpha.parts]
    return RationalSeries(numerator, tuple(factors))


def compute_R_k(spec: GroupSpec, k: int, cap: Optional[int] = None, normalized: bool = True) -> RationalSeries:
    """Hilbert series R_k^G of the diagonal invariants, as a sum over cycle types."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    total: Optional[RationalSeries] = None
    for alpha in partitions_of(spec.n):
        weight = class_size(alpha)
        term = series_scale(chi_series(spec, alpha, k, cap=cap), weight)
        logger.debug("R_%d term %s: weight %d/%d, %d denominator factors",
                     k, alpha, weight, factorial(spec.n), len(term.denominator))
        total = term if total is None else series_add(total, term)
    total = series_scale(total, sp.Rational(1, factorial(spec.n)))
    return normalize(total) if normalized else total


def scaled_limit(spec: GroupSpec, k: int, cap: Optional[int] = None) -> sp.Rational:
    """
    lim (1-h_1)^n ... (1-h_k)^n R_k^G at (1, ..., 1), taken term by term:
    (1 - h^m) = (1 - h)[m]_h, so only the identity class survives.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    total = sp.Rational(0)
    for alpha in partitions_of(spec.n):
        if not alpha.is_all_ones():
            logger.debug("limit term %s: %d < %d parts, contributes 0", alpha, alpha.length, spec.n)
            continue
        p_at_ones = compute_P_alpha(spec, alpha, k, cap=cap).eval_at_ones()
        q_integers = prod(spec.N * part for part in alpha.parts) ** k
        total += p_at_ones / (class_divisor(alpha) * q_integers)
    return total


def limit_rank(spec: GroupSpec, k: int, cap: Optional[int] = None) -> sp.Rational:
    """lim R_k^G / (R_1^G(h_1) ... R_1^G(h_k)) at (1, ..., 1); |G|^(k-1) for every spec."""
    return scaled_limit(spec, k, cap=cap) / scaled_limit(spec, 1, cap=cap) ** k


def ambient_series(n: int, k: int) -> RationalSeries:
    """R_k of the whole algebra: prod_i 1/(1 - h_i)^n."""
    factors = [BinomialFactor(i, 1) for i in range(k) for _ in range(n)]
    return RationalSeries(MultiPoly.one(k), tuple(factors))


def invariant_degrees(
    spec: GroupSpec, cap: Optional[int] = None, r1: Optional[RationalSeries] = None
) -> Optional[Tuple[int, ...]]:
    """
    Degrees d_1 <= ... <= d_n when R_1^G = 1/prod(1 - h^d_i), i.e. when A_1^G
    is a polynomial algebra; None otherwise. Candidates are peeled off the
    expansion one lowest degree at a time, then checked exactly.
    """
    if r1 is None:
        r1 = compute_R_k(spec, 1, cap=cap)
    if r1.nvars != 1:
        raise ValueError(f"expected R_1 in one variable, got {r1.nvars}")
    # each degree is at most their product |G|
    bound = spec.order
    expansion = truncate(r1, bound)
    degrees = []
    while len(degrees) < spec.n:
        positive = [e[0] for e in expansion.terms if e[0] > 0]
        if not positive:
            break
        d = min(positive)
        degrees.append(d)
        expansion = expansion.times_binomial(0, d).truncated(bound)
    if len(degrees) != spec.n:
        return None
    candidate = RationalSeries(MultiPoly.one(1), tuple(BinomialFactor(0, d) for d in degrees))
    if r1.numerator * candidate.denominator_poly() != r1.denominator_poly():
        logger.debug("R_1 of %s is not 1/prod(1 - h^d) for degrees %s", spec.label, degrees)
        return None
    return tuple(degrees)
