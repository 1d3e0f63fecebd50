"""
Invariant dimensions by direct enumeration, independent of the Molien engine.

A monomial prod x_{i,j}^{a_{i,j}} is H-invariant iff its column sums mod N lie
in H^perp; A_k^G = (A_k^H)^{S_n}, and S_n permutes such monomials by permuting
columns, so dim A_k^G in a multidegree is the number of column-sorted forms.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, product
from math import comb, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..lattice.families import GroupSpec
from ..polyring.multipoly import Coefficient, Exponents, MultiPoly, VariableCountError, grlex_key
from ..utils.limits import ORACLE_CAP, ensure_within, resolve_cap

logger = logging.getLogger(__name__)

Row = Tuple[int, ...]


@dataclass(frozen=True)
class ExponentMatrix:
    """k rows (copies of V) by n columns (coordinates) of exponents."""

    rows: Tuple[Row, ...]

    def __post_init__(self):
        if len({len(r) for r in self.rows}) > 1:
            raise ValueError("rows of an exponent matrix must have equal length")

    @property
    def row_sums(self) -> Tuple[int, ...]:
        return tuple(sum(r) for r in self.rows)

    def column_sums(self, modulus: Optional[int] = None) -> Tuple[int, ...]:
        sums = tuple(sum(col) for col in zip(*self.rows))
        return sums if modulus is None else tuple(s % modulus for s in sums)

    def canonical(self) -> Tuple[Tuple[int, ...], ...]:
        """Columns in sorted order: one representative per S_n orbit."""
        return tuple(sorted(zip(*self.rows)))


def compositions(total: int, parts: int) -> Iterator[Row]:
    """Weak compositions of total into parts non-negative summands, by stars and bars."""
    if parts < 1:
        raise ValueError(f"need at least one part, got {parts}")
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def matrix_count(n: int, multidegree: Sequence[int]) -> int:
    return prod(comb(d + n - 1, n - 1) for d in multidegree)


def invariant_monomials(spec: GroupSpec, multidegree: Sequence[int], cap: Optional[int] = None) -> Iterator[ExponentMatrix]:
    """H-invariant exponent matrices with the given row sums."""
    if any(d < 0 for d in multidegree):
        raise ValueError(f"multidegree components must be non-negative: {tuple(multidegree)}")
    ensure_within(matrix_count(spec.n, multidegree), resolve_cap(cap, ORACLE_CAP),
                  f"exponent matrices of multidegree {tuple(multidegree)}")
    allowed = spec.perp.elements
    for rows in product(*(compositions(d, spec.n) for d in multidegree)):
        m = ExponentMatrix(rows)
        if m.column_sums(spec.N) in allowed:
            yield m


def invariant_dimension(spec: GroupSpec, k: int, multidegree: Sequence[int], cap: Optional[int] = None) -> int:
    if len(multidegree) != k:
        raise VariableCountError(f"multidegree {tuple(multidegree)} has length {len(multidegree)}, expected {k}")
    return len({m.canonical() for m in invariant_monomials(spec, multidegree, cap=cap)})


def oracle_series(spec: GroupSpec, k: int, depth: int, cap: Optional[int] = None) -> MultiPoly:
    """Sum of invariant_dimension * h^d over multidegrees with every component <= depth."""
    if depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    # copies of V are interchangeable, so sorted multidegrees share a dimension
    seen: Dict[Exponents, int] = {}
    terms: Dict[Exponents, int] = {}
    for md in product(range(depth + 1), repeat=k):
        key = tuple(sorted(md))
        if key not in seen:
            seen[key] = invariant_dimension(spec, k, key, cap=cap)
        if seen[key]:
            terms[md] = seen[key]
    logger.debug("oracle for %s, k=%d, depth %d: %d distinct multidegrees", spec.label, k, depth, len(seen))
    return MultiPoly(k, terms)


@dataclass(frozen=True)
class OracleComparison:
    agrees: bool
    mismatches: Tuple[Tuple[Exponents, Coefficient, Coefficient], ...] = ()


def compare_series(engine: MultiPoly, oracle: MultiPoly, limit: int = 10) -> OracleComparison:
    """Termwise comparison; keeps the first `limit` mismatches in grlex order."""
    if engine.nvars != oracle.nvars:
        raise VariableCountError(f"cannot compare series in {engine.nvars} and {oracle.nvars} variables")
    keys = sorted(set(engine.terms) | set(oracle.terms), key=grlex_key)
    mismatches: List[Tuple[Exponents, Coefficient, Coefficient]] = []
    total = 0
    for e in keys:
        a, b = engine.coefficient(e), oracle.coefficient(e)
        if a != b:
            total += 1
            if len(mismatches) < limit:
                mismatches.append((e, a, b))
    if total:
        logger.warning("engine and oracle disagree on %d monomial(s)", total)
    return OracleComparison(agrees=not total, mismatches=tuple(mismatches))
