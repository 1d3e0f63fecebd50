from dataclasses import dataclass
from functools import cached_property
from math import factorial, prod
from typing import Dict, List, Tuple

from sympy.utilities.iterables import partitions as _sympy_partitions


@dataclass(frozen=True)
class Partition:
    """A partition of n with weakly increasing parts, e.g. (1, 2) for the transposition class of S_3."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("a partition needs at least one part")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive: {self.parts}")
        if list(self.parts) != sorted(self.parts):
            raise ValueError(f"parts must be weakly increasing: {self.parts}")

    @classmethod
    def from_multiplicities(cls, multiplicities: Dict[int, int]) -> "Partition":
        parts: List[int] = []
        for size in sorted(multiplicities):
            parts.extend([size] * multiplicities[size])
        return cls(tuple(parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @cached_property
    def multiplicities(self) -> Dict[int, int]:
        """theta_i: how many parts equal i, for every i that occurs."""
        theta: Dict[int, int] = {}
        for p in self.parts:
            theta[p] = theta.get(p, 0) + 1
        return theta

    def is_all_ones(self) -> bool:
        return self.length == self.n

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def partitions_of(n: int) -> List[Partition]:
    """All partitions of n, lexicographic on their part sequences."""
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    # sympy reuses the yielded dict, so copy before building
    found = [Partition.from_multiplicities(dict(m)) for m in _sympy_partitions(n)]
    return sorted(found, key=lambda a: a.parts)


def class_divisor(alpha: Partition) -> int:
    """1^theta_1 ... n^theta_n theta_1! ... theta_n!, the centralizer order of the cycle type."""
    return prod(size ** mult * factorial(mult) for size, mult in alpha.multiplicities.items())


def class_size(alpha: Partition) -> int:
    """Number of permutations of S_n with cycle type alpha."""
    return factorial(alpha.n) // class_divisor(alpha)
