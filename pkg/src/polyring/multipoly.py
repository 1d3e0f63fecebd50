"""
Multivariate polynomials in h1..hk over QQ.

MultiPoly is a thin value wrapper around an element of sympy's sparse ring
``QQ[h1, ..., hk]``: arithmetic and exact division are sympy's, this module
adds the variable bookkeeping the engine needs and a graded display. Exposed
coefficients are sympy ``Rational``.
"""

from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import sympy as sp
from sympy.polys.domains import QQ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.ring_series import rs_trunc
from sympy.polys.rings import PolyElement, PolyRing, ring

Coefficient = sp.Rational
Exponents = Tuple[int, ...]


class VariableCountError(ValueError):
    """Raised when polynomials over different variable counts are combined."""


@lru_cache(maxsize=None)
def poly_ring(nvars: int) -> PolyRing:
    """QQ[h1, ..., h_nvars], shared by every polynomial with that many variables."""
    if nvars < 1:
        raise ValueError(f"variable count must be at least 1, got {nvars}")
    return ring(",".join(f"h{i + 1}" for i in range(nvars)), QQ)[0]


def to_ground(value):
    """Exact QQ element for an int, sympy Rational, Fraction or "p/q" string."""
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    if QQ.of_type(value):
        return value
    if isinstance(value, int):
        return QQ(int(value))
    return QQ.from_sympy(sp.Rational(value))


def format_coefficient(c) -> str:
    """Exact "p/q" string; integral values keep a denominator of 1."""
    c = sp.Rational(c)
    return f"{c.p}/{c.q}"


def grlex_key(exponents: Exponents) -> Tuple:
    """Ascending total degree; within a degree, h1 before h2 before ..."""
    return (sum(exponents),) + tuple(-e for e in exponents)


class MultiPoly:
    __slots__ = ("nvars", "_poly")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponents, object]] = None):
        R = poly_ring(nvars)
        merged: Dict[Exponents, object] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise VariableCountError(f"exponent vector {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            merged[exps] = merged.get(exps, QQ.zero) + to_ground(coeff)
        self.nvars = nvars
        self._poly = R.from_dict(merged)

    @classmethod
    def from_element(cls, element: PolyElement) -> "MultiPoly":
        poly = cls.__new__(cls)
        poly.nvars = element.ring.ngens
        poly._poly = element
        return poly

    @property
    def element(self) -> PolyElement:
        return self._poly

    @property
    def ring(self) -> PolyRing:
        return self._poly.ring

    def gen(self, index: int) -> PolyElement:
        return self._poly.ring.gens[index]

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls.from_element(poly_ring(nvars).zero)

    @classmethod
    def constant(cls, nvars: int, value=1) -> "MultiPoly":
        return cls.from_element(poly_ring(nvars).ground_new(to_ground(value)))

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.from_element(poly_ring(nvars).one)

    @classmethod
    def monomial(cls, nvars: int, exponents: Sequence[int], coeff=1) -> "MultiPoly":
        return cls(nvars, {tuple(exponents): coeff})

    @classmethod
    def variable(cls, nvars: int, index: int, power: int = 1) -> "MultiPoly":
        """h_{index+1}^power (variables are 0-based internally)."""
        return cls.from_element(poly_ring(nvars).gens[index] ** power)

    @classmethod
    def univariate(cls, coeffs: Mapping[int, object], nvars: int = 1, index: int = 0) -> "MultiPoly":
        """Polynomial in the single variable h_{index+1}, given as degree -> coefficient."""
        terms = {}
        for deg, c in coeffs.items():
            exps = [0] * nvars
            exps[index] = deg
            terms[tuple(exps)] = c
        return cls(nvars, terms)

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponents, Coefficient]:
        return MappingProxyType({e: QQ.to_sympy(c) for e, c in self._poly.items()})

    def __len__(self) -> int:
        return len(self._poly)

    def __iter__(self) -> Iterator[Tuple[Exponents, Coefficient]]:
        return iter(self.sorted_terms())

    def __bool__(self) -> bool:
        return bool(self._poly)

    def is_zero(self) -> bool:
        return not self._poly

    def coefficient(self, exponents: Sequence[int]) -> Coefficient:
        return QQ.to_sympy(self._poly.get(tuple(exponents), QQ.zero))

    def constant_term(self) -> Coefficient:
        return self.coefficient((0,) * self.nvars)

    def is_constant(self) -> bool:
        return self._poly.is_ground

    def degree_in(self, index: int) -> int:
        """Degree in h_{index+1}; -1 for the zero polynomial."""
        return max((e[index] for e in self._poly), default=-1)

    def sorted_terms(self) -> List[Tuple[Exponents, Coefficient]]:
        return sorted(self.terms.items(), key=lambda item: grlex_key(item[0]))

    def eval_at_ones(self) -> Coefficient:
        return QQ.to_sympy(sum(self._poly.values(), QQ.zero))

    # -- ring operations ------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise VariableCountError(f"cannot combine polynomials in {self.nvars} and {other.nvars} variables")

    def _lift(self, other) -> PolyElement:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other._poly
        return self._poly.ring.ground_new(to_ground(other))

    def __add__(self, other) -> "MultiPoly":
        return MultiPoly.from_element(self._poly + self._lift(other))

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly.from_element(-self._poly)

    def __sub__(self, other) -> "MultiPoly":
        return MultiPoly.from_element(self._poly - self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return MultiPoly.from_element(self._lift(other) - self._poly)

    def scale(self, factor) -> "MultiPoly":
        return MultiPoly.from_element(self._poly.mul_ground(to_ground(factor)))

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        return MultiPoly.from_element(self._poly * other._poly)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "MultiPoly":
        if power < 0:
            raise ValueError("negative powers are not polynomials")
        return MultiPoly.from_element(self._poly ** power)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._poly == other._poly
        try:
            return self._poly == self._lift(other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._poly.items())))

    # -- structural helpers -----------------------------------------------------

    def shift(self, index: int, power: int) -> "MultiPoly":
        """Multiply by h_{index+1}^power."""
        if power == 0:
            return self
        monom = [0] * self.nvars
        monom[index] = power
        return MultiPoly.from_element(self._poly.mul_monom(tuple(monom)))

    def times_binomial(self, index: int, power: int) -> "MultiPoly":
        """Multiply by (1 - h_{index+1}^power)."""
        return self - self.shift(index, power)

    def _remapped(self, nvars: int, move) -> "MultiPoly":
        R = poly_ring(nvars)
        out = {}
        for e, c in self._poly.items():
            target = move(e)
            if target is not None:
                out[target] = c
        return MultiPoly.from_element(R.from_dict(out))

    def embed(self, nvars: int, index: int) -> "MultiPoly":
        """Move a univariate polynomial into variable h_{index+1} of an nvars-variable ring."""
        if self.nvars != 1:
            raise VariableCountError(f"embed expects a univariate polynomial, got {self.nvars} variables")

        def move(e):
            exps = [0] * nvars
            exps[index] = e[0]
            return tuple(exps)

        return self._remapped(nvars, move)

    def restrict_to_variable(self, index: int) -> "MultiPoly":
        """Set every variable except h_{index+1} to zero; result is univariate."""
        def move(e):
            if any(x for i, x in enumerate(e) if i != index):
                return None
            return (e[index],)

        return self._remapped(1, move)

    def permute_variables(self, perm: Sequence[int]) -> "MultiPoly":
        """New variable i carries old variable perm[i]."""
        if sorted(perm) != list(range(self.nvars)):
            raise ValueError(f"{perm} is not a permutation of {self.nvars} variables")
        return self._remapped(self.nvars, lambda e: tuple(e[p] for p in perm))

    def truncated(self, bound: int) -> "MultiPoly":
        """Drop every term with some variable degree above bound."""
        poly = self._poly
        for x in poly.ring.gens:
            poly = rs_trunc(poly, x, bound + 1)
        return MultiPoly.from_element(poly)

    # -- display and interop ----------------------------------------------------

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._poly:
            return "0"
        names = names or [f"h{i + 1}" for i in range(self.nvars)]
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_fmt_magnitude(mag)}*{mono}"
            else:
                body = _fmt_magnitude(mag)
            pieces.append(("-" if c < 0 else "+", body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self.format()!r})"

    def to_payload(self) -> List[Dict[str, object]]:
        return [{"exponents": list(e), "coeff": format_coefficient(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_payload(cls, nvars: int, payload: Iterable[Mapping[str, object]]) -> "MultiPoly":
        return cls(nvars, {tuple(t["exponents"]): str(t["coeff"]) for t in payload})

    def to_sympy(self, symbols):
        return self._poly.as_expr(*symbols)

    @classmethod
    def from_sympy(cls, expr, symbols) -> "MultiPoly":
        poly = sp.Poly(sp.expand(expr), *symbols, domain=QQ)
        return cls(len(symbols), dict(poly.terms()))


def _fmt_magnitude(mag: sp.Rational) -> str:
    return str(mag.p) if mag.q == 1 else f"({mag.p}/{mag.q})"


# -- module level API ---------------------------------------------------------


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p * q


def poly_scale(p: MultiPoly, factor) -> MultiPoly:
    return p.scale(factor)


def eval_at_ones(p: MultiPoly) -> Coefficient:
    return p.eval_at_ones()


def try_divide(p: MultiPoly, divisor: MultiPoly) -> Optional[MultiPoly]:
    """Exact quotient p / divisor, or None when a remainder is left."""
    p._check(divisor)
    if divisor.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    try:
        return MultiPoly.from_element(p.element.exquo(divisor.element))
    except ExactQuotientFailed:
        return None


def try_divide_univariate(p: MultiPoly, index: int, divisor: MultiPoly) -> Optional[MultiPoly]:
    """Exact quotient of p by a univariate divisor placed in h_{index+1}."""
    if divisor.nvars != 1:
        raise VariableCountError("divisor must be univariate")
    return try_divide(p, divisor.embed(p.nvars, index))
