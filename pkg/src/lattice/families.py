import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .zmod import ZModSubgroup, ZModVec, enumerate_subgroup, is_sn_stable, orthogonal

logger = logging.getLogger(__name__)


class SpecError(ValueError):
    """Raised when a group specification is invalid."""


class Family(str, Enum):
    SYMMETRIC = "symmetric"
    HYPEROCTAHEDRAL = "hyperoctahedral"
    DEMIHYPEROCTAHEDRAL = "demihyperoctahedral"
    DIHEDRAL = "dihedral"
    G_DE_E_N = "g-de-e-n"
    G2_EXAMPLE = "g2-example"
    CUSTOM = "custom"


FAMILY_ALIASES: Dict[str, Family] = {
    "a": Family.SYMMETRIC,
    "b": Family.HYPEROCTAHEDRAL,
    "d": Family.DEMIHYPEROCTAHEDRAL,
    "i": Family.DIHEDRAL,
    "g": Family.G_DE_E_N,
    "g2": Family.G2_EXAMPLE,
}


def parse_family(name: str) -> Family:
    key = name.strip().lower()
    if key in FAMILY_ALIASES:
        return FAMILY_ALIASES[key]
    try:
        return Family(key)
    except ValueError:
        known = ", ".join(f.value for f in Family)
        raise SpecError(f"unknown family {name!r} (known: {known})") from None


@dataclass(frozen=True)
class GroupSpec:
    """G = H x| S_n acting on n coordinates, H an S_n-stable subgroup of (Z/NZ)^n."""

    N: int
    n: int
    H: ZModSubgroup
    family: Family
    label: str
    params: Tuple[Tuple[str, int], ...] = field(default=())
    cap: Optional[int] = field(default=None, compare=False)

    @property
    def order_H(self) -> int:
        return self.H.order

    @property
    def order(self) -> int:
        return self.H.order * factorial(self.n)

    @cached_property
    def perp(self) -> ZModSubgroup:
        return orthogonal(self.H, cap=self.cap)

    def describe(self) -> str:
        return f"{self.label} ({self.family.value}): N={self.N} n={self.n} |H|={self.order_H} |G|={self.order}"


def _unit(N: int, n: int, i: int, value: int = 1) -> ZModVec:
    comps = [0] * n
    comps[i] = value
    return ZModVec(N, tuple(comps))


def _differences(N: int, n: int) -> List[ZModVec]:
    """e_i - e_{i+1}: they generate the vectors with coordinate sum 0 mod N."""
    gens = []
    for i in range(n - 1):
        comps = [0] * n
        comps[i], comps[i + 1] = 1, N - 1
        gens.append(ZModVec(N, tuple(comps)))
    return gens


def _check_sizes(N: int, n: int) -> None:
    if N < 2:
        raise SpecError(f"N must be at least 2, got {N}")
    if n < 1:
        raise SpecError(f"n must be at least 1, got {n}")


def _build(N: int, n: int, gens: Sequence[ZModVec], family: Family, label: str,
           params: Dict[str, int], cap: Optional[int]) -> GroupSpec:
    try:
        H = enumerate_subgroup(N, n, gens, cap=cap)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    if not is_sn_stable(H):
        raise SpecError(f"H = {H} is not stable under coordinate permutation")
    spec = GroupSpec(N, n, H, family, label, tuple(sorted(params.items())), cap=cap)
    logger.debug("built %s", spec.describe())
    return spec


def _require(params: Dict[str, object], *names: str) -> List[int]:
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise SpecError(f"missing parameter(s): {', '.join(missing)}")
    values = []
    for name in names:
        try:
            values.append(int(params[name]))
        except (TypeError, ValueError):
            raise SpecError(f"parameter {name} must be an integer, got {params[name]!r}") from None
    return values


def family_subgroup(family, cap: Optional[int] = None, **params) -> GroupSpec:
    """
    Build a validated GroupSpec for one of the built-in families.

    Params per family: symmetric(n), hyperoctahedral(n), demihyperoctahedral(n),
    dihedral(N), g-de-e-n(d, e, n), g2-example(), custom(N, n, generators).
    """
    fam = family if isinstance(family, Family) else parse_family(str(family))

    if fam is Family.SYMMETRIC:
        (n,) = _require(params, "n")
        _check_sizes(2, n)
        return _build(2, n, [], fam, f"S_{n}", {"n": n}, cap)

    if fam is Family.HYPEROCTAHEDRAL:
        (n,) = _require(params, "n")
        _check_sizes(2, n)
        gens = [_unit(2, n, i) for i in range(n)]
        return _build(2, n, gens, fam, f"B_{n}", {"n": n}, cap)

    if fam is Family.DEMIHYPEROCTAHEDRAL:
        (n,) = _require(params, "n")
        _check_sizes(2, n)
        return _build(2, n, _differences(2, n), fam, f"D_{n}", {"n": n}, cap)

    if fam is Family.DIHEDRAL:
        (N,) = _require(params, "N")
        _check_sizes(N, 2)
        return _build(N, 2, _differences(N, 2), fam, f"I_2({N})", {"N": N}, cap)

    if fam is Family.G_DE_E_N:
        d, e, n = _require(params, "d", "e", "n")
        if d < 1 or e < 1:
            raise SpecError(f"d and e must be positive, got d={d}, e={e}")
        N = d * e
        _check_sizes(N, n)
        # sum of coordinates = 0 mod e: the differences plus e*e_1
        gens = _differences(N, n) + [_unit(N, n, 0, e)]
        return _build(N, n, gens, fam, f"G({N},{e},{n})", {"d": d, "e": e, "n": n}, cap)

    if fam is Family.G2_EXAMPLE:
        return _build(2, 3, [ZModVec(2, (1, 1, 1))], fam, "G_2-example", {}, cap)

    N, n = _require(params, "N", "n")
    _check_sizes(N, n)
    raw = params.get("generators") or []
    gens = []
    for g in raw:
        comps = tuple(g.components) if isinstance(g, ZModVec) else tuple(g)
        if len(comps) != n:
            raise SpecError(f"generator {comps} has length {len(comps)}, expected {n}")
        if any(c < 0 or c >= N for c in comps):
            raise SpecError(f"generator {comps} has residues outside [0, {N - 1}]")
        gens.append(ZModVec(N, comps))
    return _build(N, n, gens, Family.CUSTOM, "custom", {"N": N, "n": n}, cap)
