from functools import lru_cache

import pytest
import sympy as sp

from src.lattice.families import family_subgroup
from src.lattice.zmod import orthogonal_alpha
from src.molien.engine import (
    ambient_series,
    chi_series,
    compute_P_alpha,
    compute_R_k,
    invariant_degrees,
    limit_rank,
    scaled_limit,
)
from src.molien.quotient import compute_Q, is_symmetric, separability_test
from src.oracle.brute_force import oracle_series
from src.polyring.multipoly import MultiPoly, try_divide_univariate
from src.polyring.series import BinomialFactor, RationalSeries, series_mul, truncate
from src.utils.limits import CapacityError
from src.utils.partitions import Partition, partitions_of
from tests.grid import GRID, GRID_IDS, build


@lru_cache(maxsize=None)
def grid_result(index, k):
    _, family, params = GRID[index]
    return compute_Q(build(family, params), k)


def _poly(nvars, terms):
    return MultiPoly(nvars, terms)


def _sympy_poly(expr, nvars):
    symbols = sp.symbols(f"h1:{nvars + 1}")
    return MultiPoly.from_sympy(expr(*symbols), list(symbols))


# --- golden Q_k ---


def test_symmetric_2_k2():
    result = compute_Q(family_subgroup("symmetric", n=2), 2)
    assert result.is_polynomial
    assert result.Q.numerator == _poly(2, {(0, 0): 1, (1, 1): 1})
    assert result.Q.numerator.format() == "1 + h1*h2"
    assert result.rank == 2


def test_symmetric_2_k3():
    result = compute_Q(family_subgroup("symmetric", n=2), 3)
    expected = _poly(3, {(0, 0, 0): 1, (1, 1, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1})
    assert result.polynomial == expected
    assert result.rank == 4


def test_symmetric_3_k2():
    result = compute_Q(family_subgroup("symmetric", n=3), 2)
    expected = _poly(2, {(3, 3): 1, (2, 2): 1, (2, 1): 1, (1, 2): 1, (1, 1): 1, (0, 0): 1})
    assert result.polynomial == expected
    assert result.rank == 6


def test_hyperoctahedral_2_k2():
    result = compute_Q(family_subgroup("hyperoctahedral", n=2), 2)
    expected = _poly(2, {(4, 4): 1, (3, 3): 1, (3, 1): 1, (2, 2): 2, (1, 3): 1, (1, 1): 1, (0, 0): 1})
    assert result.polynomial == expected
    assert result.rank == 8
    assert result.is_separable is False


def test_dihedral_4_k2_matches_oracle():
    spec = family_subgroup("dihedral", N=4)
    result = compute_Q(spec, 2)
    assert result.is_polynomial
    assert is_symmetric(result.Q.numerator)
    assert result.Q.numerator.eval_at_ones() == 8

    r1 = result.R_1
    lifted = [
        RationalSeries(r1.numerator.embed(2, i), tuple(BinomialFactor(i, f.exponent) for f in r1.denominator))
        for i in range(2)
    ]
    rebuilt = series_mul(series_mul(result.Q, lifted[0]), lifted[1])
    assert truncate(rebuilt, 6) == oracle_series(spec, 2, 6)


def test_g2_example_is_not_polynomial():
    result = compute_Q(family_subgroup("g2-example"), 2)
    assert not result.is_polynomial
    assert result.rank is None
    assert result.polynomial is None
    assert {f.var for f in result.Q.denominator} == {0, 1}
    assert result.limit_rank == 12
    assert result.degrees is None


def test_compute_Q_rejects_k_zero():
    with pytest.raises(ValueError):
        compute_Q(family_subgroup("symmetric", n=2), 0)


@pytest.mark.parametrize("N", [5, 6])
def test_scalar_subgroup_is_decided_without_binomials(N):
    spec = family_subgroup("custom", N=N, n=2, generators=[[1, 1]])
    result = compute_Q(spec, 2)
    assert not result.is_polynomial
    assert result.rank is None
    assert result.residual == result.R_1.numerator
    assert result.residual.coefficient((N,)) == 2
    assert result.limit_rank == spec.order

    r1 = result.R_1
    lifted = [
        RationalSeries(r1.numerator.embed(2, i), tuple(BinomialFactor(i, f.exponent) for f in r1.denominator))
        for i in range(2)
    ]
    rebuilt = series_mul(series_mul(result.Q, lifted[0]), lifted[1])
    product = result.residual.embed(2, 0) * result.residual.embed(2, 1)
    assert truncate(rebuilt, 4) == (truncate(compute_R_k(spec, 2), 4) * product).truncated(4)


def test_k1_runs_the_division(monkeypatch):
    calls = []

    def spy(p, index, divisor):
        calls.append(index)
        return try_divide_univariate(p, index, divisor)

    monkeypatch.setattr("src.molien.quotient.try_divide_univariate", spy)
    result = compute_Q(family_subgroup("g2-example"), 1)
    assert calls == [0]
    assert result.is_polynomial
    assert result.Q.numerator == MultiPoly.one(1)
    assert result.rank == 1


# --- identities over the grid ---


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("index", range(len(GRID)), ids=GRID_IDS)
def test_rank_identity(index, k):
    result = grid_result(index, k)
    order = result.group.order
    assert result.is_polynomial
    assert result.rank == order ** (k - 1)
    assert result.rank_matches
    assert result.Q.numerator.constant_term() == 1
    assert is_symmetric(result.Q.numerator)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("index", range(len(GRID)), ids=GRID_IDS)
def test_scaled_limit_is_inverse_group_order(index, k):
    result = grid_result(index, k)
    assert result.scaled_limit == sp.Rational(1, result.group.order)
    assert result.limit_rank == result.group.order ** (k - 1)


@pytest.mark.parametrize("index", range(len(GRID)), ids=GRID_IDS)
def test_separability_witness(index):
    assert grid_result(index, 1).Q.numerator == MultiPoly.one(1)
    assert grid_result(index, 1).rank == 1
    q2 = grid_result(index, 2).Q.numerator
    assert not q2.is_constant()
    assert separability_test(q2) is False


@pytest.mark.parametrize("index", range(len(GRID)), ids=GRID_IDS)
def test_degrees_multiply_to_group_order(index):
    result = grid_result(index, 1)
    assert result.degrees is not None
    assert len(result.degrees) == result.group.n
    product = 1
    for d in result.degrees:
        product *= d
    assert product == result.group.order


@pytest.mark.parametrize(
    "family,params,degrees",
    [
        ("symmetric", {"n": 3}, (1, 2, 3)),
        ("hyperoctahedral", {"n": 2}, (2, 4)),
        ("demihyperoctahedral", {"n": 2}, (2, 2)),
        ("demihyperoctahedral", {"n": 3}, (2, 3, 4)),
        ("dihedral", {"N": 5}, (2, 5)),
        ("g-de-e-n", {"d": 2, "e": 2, "n": 2}, (4, 4)),
    ],
)
def test_invariant_degrees(family, params, degrees):
    assert invariant_degrees(family_subgroup(family, **params)) == degrees


def test_separability_examples():
    assert separability_test(_poly(2, {(0, 0): 1, (1, 1): 1})) is False
    assert separability_test(_poly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})) is True
    with pytest.raises(ValueError):
        separability_test(_poly(2, {(0, 0): 2, (1, 1): 1}))


def test_is_symmetric():
    assert is_symmetric(_poly(3, {(1, 1, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1}))
    assert not is_symmetric(_poly(2, {(2, 1): 1, (1, 1): 1}))


# --- P_alpha and chi ---


@pytest.mark.parametrize(
    "n,parts,k",
    [(2, (2,), 1), (3, (1, 2), 2), (3, (3,), 2)],
)
def test_P_alpha_trivial_H(n, parts, k):
    spec = family_subgroup("symmetric", n=n)

    def closed_form(*hs):
        out = sp.Integer(1)
        for hi in hs:
            for a in parts:
                out *= 1 + hi ** a
        return out

    assert compute_P_alpha(spec, Partition(parts), k) == _sympy_poly(closed_form, k)


def test_P_alpha_hyperoctahedral():
    spec = family_subgroup("hyperoctahedral", n=2)
    assert compute_P_alpha(spec, Partition((1, 1)), 2) == _sympy_poly(lambda a, b: (1 + a * b) ** 2, 2)
    assert compute_P_alpha(spec, Partition((1, 1)), 1) == MultiPoly.one(1)


def test_P_alpha_single_coordinate_hyperoctahedral():
    spec = family_subgroup("hyperoctahedral", n=1)
    assert compute_P_alpha(spec, Partition((1,)), 1) == MultiPoly.one(1)


def test_P_alpha_dihedral():
    spec = family_subgroup("dihedral", N=3)
    expected = _sympy_poly(lambda a, b: (1 + a**2 + a**4) * (1 + b**2 + b**4), 2)
    assert compute_P_alpha(spec, Partition((2,)), 2) == expected


def test_P_alpha_g2_example():
    spec = family_subgroup("g2-example")
    assert compute_P_alpha(spec, Partition((1, 1, 1)), 1) == MultiPoly(1, {(0,): 1, (2,): 3})
    assert compute_P_alpha(spec, Partition((1, 2)), 1) == MultiPoly(1, {(0,): 1, (2,): 1})
    assert compute_P_alpha(spec, Partition((3,)), 2) == MultiPoly(2, {(0, 0): 1, (3, 3): 1})
    expected = _sympy_poly(lambda a, b: (1 + a * b) * (1 + a**2) * (1 + b**2), 2)
    assert compute_P_alpha(spec, Partition((1, 2)), 2) == expected



def test_P_alpha_demihyperoctahedral_parity_form():
    spec = family_subgroup("demihyperoctahedral", n=3)
    parts = (1, 2)

    def parity_form(*hs):
        even = odd = sp.Integer(1)
        for a in parts:
            plus = sp.Mul(*[1 + x ** a for x in hs])
            minus = sp.Mul(*[1 - x ** a for x in hs])
            even *= (plus + minus) / 2
            odd *= (plus - minus) / 2
        return even + odd

    assert compute_P_alpha(spec, Partition(parts), 2) == _sympy_poly(parity_form, 2)


@pytest.mark.parametrize("k", [1, 2])
def test_P_alpha_g_de_e_n_root_of_unity_filter(k):
    # G(4,2,2): N = 4, H^perp = <(2,2)>, columns must share a residue in {0, 2}
    d, e, N = 2, 2, 4
    spec = family_subgroup("g-de-e-n", d=d, e=e, n=2)
    parts = (1, 1)
    zeta = sp.I

    def filtered(*hs):
        total = sp.Integer(0)
        for lam in range(e):
            term = sp.Integer(1)
            for a in parts:
                column = sp.Integer(0)
                for b in range(N):
                    rows = sp.Mul(*[sum(zeta ** (b * c) * x ** (a * c) for c in range(N)) for x in hs])
                    column += zeta ** (-b * lam * d) * rows
                term *= column / N
            total += term
        return total

    assert compute_P_alpha(spec, Partition(parts), k) == _sympy_poly(filtered, k)
    if k == 1:
        assert compute_P_alpha(spec, Partition(parts), k) == MultiPoly(1, {(0,): 1, (4,): 1})

@pytest.mark.parametrize("index", range(len(GRID)), ids=GRID_IDS)
def test_P_alpha_coefficient_sum(index):
    _, family, params = GRID[index]
    spec = build(family, params)
    k = 2
    for alpha in partitions_of(spec.n):
        allowed = orthogonal_alpha(spec.perp, alpha)
        expected = allowed.order * spec.N ** ((k - 1) * alpha.length)
        assert compute_P_alpha(spec, alpha, k).eval_at_ones() == expected


def test_P_alpha_respects_cap():
    spec = family_subgroup("symmetric", n=2)
    with pytest.raises(CapacityError):
        compute_P_alpha(spec, Partition((1, 1)), 2, cap=5)


def test_P_alpha_cap_counts_actual_states():
    # 8 columns and at most 8 stored terms, well under a cap of 10
    spec = family_subgroup("symmetric", n=2)
    assert compute_P_alpha(spec, Partition((2,)), 3, cap=10) == compute_P_alpha(spec, Partition((2,)), 3)


def test_P_alpha_rejects_wrong_partition():
    with pytest.raises(ValueError):
        compute_P_alpha(family_subgroup("symmetric", n=3), Partition((1, 1)), 1)


def test_chi_series_examples():
    spec = family_subgroup("symmetric", n=2)
    ones = chi_series(spec, Partition((1, 1)), 1)
    assert ones.numerator == MultiPoly(1, {(0,): 1, (1,): 2, (2,): 1})
    assert ones.denominator == (BinomialFactor(0, 2), BinomialFactor(0, 2))

    cycle = chi_series(spec, Partition((2,)), 1)
    assert cycle.numerator == MultiPoly(1, {(0,): 1, (2,): 1})
    assert cycle.denominator == (BinomialFactor(0, 4),)

    g2 = family_subgroup("g2-example")
    assert len(chi_series(g2, Partition((1, 2)), 3).denominator) == 3 * 2


# --- R_k ---


def test_R_1_of_symmetric_2():
    r1 = compute_R_k(family_subgroup("symmetric", n=2), 1)
    assert r1.numerator == MultiPoly.one(1)
    assert r1.denominator == (BinomialFactor(0, 1), BinomialFactor(0, 2))


def test_R_1_of_hyperoctahedral_has_no_linear_invariant():
    r1 = compute_R_k(family_subgroup("hyperoctahedral", n=2), 1)
    expansion = truncate(r1, 4)
    assert expansion.coefficient((0,)) == 1
    assert expansion.coefficient((1,)) == 0
    assert expansion.coefficient((2,)) == 1


def test_unnormalized_R_k_expands_the_same():
    spec = family_subgroup("dihedral", N=3)
    raw = compute_R_k(spec, 2, normalized=False)
    assert truncate(raw, 4) == truncate(compute_R_k(spec, 2), 4)


@pytest.mark.parametrize("index", range(len(GRID)), ids=GRID_IDS)
def test_R_k_constant_term(index):
    assert truncate(grid_result(index, 2).R_k, 0) == MultiPoly.one(2)


def test_trivial_group_gives_ambient_series():
    spec = family_subgroup("symmetric", n=1)
    assert spec.order == 1
    for k in (1, 2):
        assert truncate(compute_R_k(spec, k), 4) == truncate(ambient_series(1, k), 4)


def test_invariants_are_bounded_by_ambient_series():
    spec = family_subgroup("hyperoctahedral", n=2)
    invariant = truncate(compute_R_k(spec, 2), 4)
    ambient = truncate(ambient_series(2, 2), 4)
    for exps, coeff in invariant.terms.items():
        assert 0 <= coeff <= ambient.coefficient(exps)


# --- limits ---


def test_scaled_limit_examples():
    assert scaled_limit(family_subgroup("symmetric", n=2), 2) == sp.Rational(1, 2)
    b2 = family_subgroup("hyperoctahedral", n=2)
    for k in (1, 2, 3):
        assert scaled_limit(b2, k) == sp.Rational(1, 8)
    g = family_subgroup("g-de-e-n", d=2, e=2, n=2)
    assert scaled_limit(g, 1) == sp.Rational(1, 4 * 2 * 2)


def test_limit_rank_of_non_free_example():
    assert limit_rank(family_subgroup("g2-example"), 3) == 144
