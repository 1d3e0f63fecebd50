"""Vectors and subgroups of (Z/NZ)^m, held as explicit element sets."""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..utils.limits import SUBGROUP_CAP, ensure_within, resolve_cap
from ..utils.partitions import Partition

logger = logging.getLogger(__name__)

Residues = Tuple[int, ...]


@dataclass(frozen=True)
class ZModVec:
    modulus: int
    components: Residues

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be at least 2, got {self.modulus}")
        if not self.components:
            raise ValueError("a vector needs at least one component")
        reduced = tuple(int(c) % self.modulus for c in self.components)
        object.__setattr__(self, "components", reduced)

    @property
    def dim(self) -> int:
        return len(self.components)

    def __add__(self, other: "ZModVec") -> "ZModVec":
        _check_compatible(self, other)
        return ZModVec(self.modulus, _add(self.components, other.components, self.modulus))

    def dot(self, other: "ZModVec") -> int:
        _check_compatible(self, other)
        return _dot(self.components, other.components, self.modulus)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.components) + ")"


def _check_compatible(a: ZModVec, b: ZModVec) -> None:
    if a.modulus != b.modulus or a.dim != b.dim:
        raise ValueError(f"incompatible vectors {a} mod {a.modulus} and {b} mod {b.modulus}")


def _add(a: Residues, b: Residues, modulus: int) -> Residues:
    return tuple((x + y) % modulus for x, y in zip(a, b))


def _dot(a: Residues, b: Residues, modulus: int) -> int:
    return sum(x * y for x, y in zip(a, b)) % modulus


def _cyclic(v: Residues, modulus: int) -> List[Residues]:
    multiples = [tuple([0] * len(v))]
    current = v
    while any(current):
        multiples.append(current)
        current = _add(current, v, modulus)
    return multiples


def _span_with(span: FrozenSet[Residues], v: Residues, modulus: int) -> FrozenSet[Residues]:
    if v in span:
        return span
    return frozenset(_add(s, c, modulus) for s in span for c in _cyclic(v, modulus))


@dataclass(frozen=True)
class ZModSubgroup:
    modulus: int
    dim: int
    generators: Tuple[ZModVec, ...]
    elements: FrozenSet[Residues] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, item) -> bool:
        if isinstance(item, ZModVec):
            return item.modulus == self.modulus and item.components in self.elements
        return tuple(item) in self.elements

    def __iter__(self) -> Iterator[Residues]:
        return iter(self.sorted_elements())

    def sorted_elements(self) -> List[Residues]:
        return sorted(self.elements)

    def __str__(self) -> str:
        shown = ", ".join("(" + ",".join(map(str, e)) + ")" for e in self.sorted_elements()[:8])
        more = ", ..." if self.order > 8 else ""
        return f"{{{shown}{more}}} in (Z/{self.modulus}Z)^{self.dim}"


def _whole_space(modulus: int, dim: int, cap: Optional[int]) -> Iterable[Residues]:
    ensure_within(modulus ** dim, resolve_cap(cap, SUBGROUP_CAP), f"(Z/{modulus}Z)^{dim}")
    return product(range(modulus), repeat=dim)


def enumerate_subgroup(
    modulus: int, dim: int, generators: Sequence[ZModVec], cap: Optional[int] = None
) -> ZModSubgroup:
    """Smallest subgroup of (Z/NZ)^m containing the generators."""
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    if dim < 1:
        raise ValueError(f"dimension must be at least 1, got {dim}")
    ensure_within(modulus ** dim, resolve_cap(cap, SUBGROUP_CAP), f"(Z/{modulus}Z)^{dim}")
    for g in generators:
        if g.modulus != modulus or g.dim != dim:
            raise ValueError(f"generator {g} does not live in (Z/{modulus}Z)^{dim}")

    span: FrozenSet[Residues] = frozenset([tuple([0] * dim)])
    for g in generators:
        span = _span_with(span, g.components, modulus)
    return ZModSubgroup(modulus, dim, tuple(generators), span)


def generating_set(modulus: int, elements: Iterable[Residues]) -> List[ZModVec]:
    """Greedy generator list: keep an element only if the span so far misses it."""
    gens: List[ZModVec] = []
    span: Optional[FrozenSet[Residues]] = None
    for e in sorted(elements):
        if span is None:
            span = frozenset([tuple([0] * len(e))])
        if e not in span:
            gens.append(ZModVec(modulus, e))
            span = _span_with(span, e, modulus)
    return gens


def _from_elements(modulus: int, dim: int, elements: Iterable[Residues]) -> ZModSubgroup:
    found = frozenset(elements)
    return ZModSubgroup(modulus, dim, tuple(generating_set(modulus, found)), found)


def is_sn_stable(subgroup: ZModSubgroup) -> bool:
    """True iff swapping any two adjacent coordinates maps the subgroup to itself."""
    for e in subgroup.elements:
        for i in range(subgroup.dim - 1):
            swapped = e[:i] + (e[i + 1], e[i]) + e[i + 2:]
            if swapped not in subgroup.elements:
                return False
    return True


def orthogonal(subgroup: ZModSubgroup, cap: Optional[int] = None) -> ZModSubgroup:
    """H^perp: vectors pairing to zero mod N with every generator of H."""
    modulus, gens = subgroup.modulus, [g.components for g in subgroup.generators]
    survivors = (
        v
        for v in _whole_space(modulus, subgroup.dim, cap)
        if all(_dot(v, g, modulus) == 0 for g in gens)
    )
    perp = _from_elements(modulus, subgroup.dim, survivors)
    logger.debug("orthogonal of order-%d subgroup has order %d", subgroup.order, perp.order)
    return perp


def expand_by_parts(residues: Residues, alpha: Partition) -> Residues:
    """Repeat the j-th residue alpha_j times, in part order."""
    out: List[int] = []
    for r, size in zip(residues, alpha.parts):
        out.extend([r] * size)
    return tuple(out)


def orthogonal_alpha(hperp: ZModSubgroup, alpha: Partition, cap: Optional[int] = None) -> ZModSubgroup:
    """H_alpha^perp in (Z/NZ)^l: residue tuples whose part-wise repetition lies in H^perp."""
    if alpha.n != hperp.dim:
        raise ValueError(f"partition {alpha} is not a partition of {hperp.dim}")
    survivors = (
        v
        for v in _whole_space(hperp.modulus, alpha.length, cap)
        if expand_by_parts(v, alpha) in hperp.elements
    )
    return _from_elements(hperp.modulus, alpha.length, survivors)
