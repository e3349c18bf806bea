import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genwishart.symfunc import (
    GammaSpec,
    as_partition,
    dominance_leq,
    legendre_p,
    make_sympoly,
    monomial_at_ones,
    monomial_eval,
    operator_apply,
    operator_eigenvalue,
    partitions_of,
    rank_one_genfun_deviation,
    schur_ratio,
    zonal,
    zonal_at_ones,
    zonal_eval,
    zonal_ratio_n2,
)

F = Fraction


def test_as_partition():
    assert as_partition([3, 1, 0]) == (3, 1)
    assert as_partition(()) == ()
    with pytest.raises(ValueError):
        as_partition((1, 2))
    with pytest.raises(ValueError):
        as_partition((2, -1))


def test_partitions_of_order_and_content():
    assert partitions_of(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert partitions_of(4, max_len=2) == [(4,), (3, 1), (2, 2)]
    assert partitions_of(0) == [()]


def test_dominance():
    assert dominance_leq((2, 2), (3, 1))
    assert dominance_leq((3, 1), (3, 1))
    assert not dominance_leq((3, 1), (2, 2))
    assert dominance_leq((2, 1, 1), (2, 2))
    assert not dominance_leq((2, 2), (2, 1, 1))
    with pytest.raises(ValueError):
        dominance_leq((2,), (3,))


def test_monomial_eval_and_ones():
    x = np.array([2.0, 3.0])
    # m_(2,1) = x^2 y + x y^2
    assert monomial_eval((2, 1), x) == pytest.approx(2**2 * 3 + 2 * 3**2)
    assert monomial_at_ones((2, 1), 2) == 2
    assert monomial_at_ones((1, 1), 4) == 6
    assert monomial_at_ones((), 3) == 1
    batch = np.stack([x, 2 * x])
    vals = monomial_eval((2, 1), batch)
    assert vals.shape == (2,)
    assert vals[1] == pytest.approx(8 * vals[0])


def test_make_sympoly_validation():
    with pytest.raises(ValueError, match="non-homogeneous"):
        make_sympoly(3, 2, {(2,): 1})
    with pytest.raises(ValueError, match="more parts"):
        make_sympoly(3, 2, {(1, 1, 1): 1})


def test_operator_on_monomials_n2():
    # D m_(2) = 2 m_(2) (diagonal) + pair terms: known image 4 m_(2) + 2 m_(1,1)
    m2 = make_sympoly(2, 2, {(2,): 1})
    img = operator_apply(m2)
    assert img.coeffs == {(2,): F(4), (1, 1): F(2)}
    # m_(1,1) is an eigenvector at N=2 with eigenvalue 1
    m11 = make_sympoly(2, 2, {(1, 1): 1})
    assert operator_apply(m11).coeffs == {(1, 1): F(1)}


def test_operator_eigenvalue_closed_form():
    assert operator_eigenvalue((2,), 2) == 2 * (2 - 1) + 2 * 1
    assert operator_eigenvalue((1, 1), 3) == (1 * 0 + 1 * (-1)) + 2 * 2
    assert operator_eigenvalue((), 3) == 0
    with pytest.raises(ValueError):
        operator_eigenvalue((1, 1, 1), 2)


def test_zonal_degree2_table():
    z2 = zonal((2,), 2)
    assert z2.coeffs == {(2,): F(1), (1, 1): F(2, 3)}
    z11 = zonal((1, 1), 2)
    assert z11.coeffs == {(1, 1): F(4, 3)}
    # fresh variable count keeps the same coefficients at degree 2
    assert zonal((2,), 5).coeffs == {(2,): F(1), (1, 1): F(2, 3)}


def test_zonal_eigen_relation_exact_spot():
    poly = zonal((3, 1), 3)
    image = operator_apply(poly)
    e = operator_eigenvalue((3, 1), 3)
    assert image.coeffs == poly.scaled(e).coeffs


def test_zonal_sum_is_power_of_p1():
    # sum over |kappa| = 3 of Y_kappa = (x1 + x2 + x3)^3: monomial coeffs
    # are multinomials
    total = {}
    for kap in partitions_of(3, max_len=3):
        for mu, c in zonal(kap, 3).coeffs.items():
            total[mu] = total.get(mu, F(0)) + c
    expected = {
        (3,): F(1),
        (2, 1): F(3),
        (1, 1, 1): F(6),
    }
    assert total == expected


def test_zonal_at_ones_consistency():
    for kap in [(2,), (1, 1), (3,), (2, 1)]:
        poly = zonal(kap, 3)
        ones = np.ones(3)
        assert float(poly.at_ones()) == pytest.approx(poly.eval(ones), rel=1e-12)
        assert zonal_at_ones(kap, 3) == poly.at_ones()


def test_zonal_degree_cap():
    with pytest.raises(ValueError, match="max_degree"):
        zonal((13,), 2)
    with pytest.raises(ValueError, match="cap"):
        zonal((7,), 2, max_degree=6)


def test_zonal_too_many_parts():
    with pytest.raises(ValueError, match="more parts"):
        zonal((1, 1, 1), 2)


def test_legendre_values():
    assert legendre_p(0, 0.3) == 1.0
    assert legendre_p(1, 0.3) == pytest.approx(0.3)
    assert legendre_p(2, 0.5) == pytest.approx(-0.125)
    u = 0.7
    assert legendre_p(3, u) == pytest.approx(0.5 * (5 * u**3 - 3 * u))
    with pytest.raises(ValueError):
        legendre_p(-1, 0.0)


def test_zonal_ratio_n2_against_operator_route():
    gen = np.random.default_rng(12)
    for kap in [(1,), (2,), (1, 1), (3, 1), (2, 2), (4, 2)]:
        poly = zonal(kap, 2)
        ones = float(poly.at_ones())
        for _ in range(5):
            x1, x2 = gen.uniform(0.1, 3.0, size=2)
            direct = poly.eval(np.array([x1, x2])) / ones
            closed = zonal_ratio_n2(kap, x1, x2)
            assert closed == pytest.approx(direct, rel=1e-10)


def test_rank_one_generating_function():
    x = np.array([0.3, 0.5, 0.2])
    # truncation error shrinks with the cap and is tiny once t max|x| is small
    assert rank_one_genfun_deviation(3, 12, 0.4, x) < 1e-7
    assert rank_one_genfun_deviation(3, 12, 0.1, x) < 1e-12
    with pytest.raises(ValueError, match="diverges"):
        rank_one_genfun_deviation(3, 5, 3.0, x)


def test_schur_ratio_values():
    x = np.array([2.0, 3.0])
    assert schur_ratio((1,), x) == pytest.approx((2 + 3) / 2)
    # s_(2,1)(x, y) = xy(x + y); at ones: 2
    assert schur_ratio((2, 1), x) == pytest.approx(2 * 3 * 5 / 2)
    batch = np.stack([x, x / 2])
    out = schur_ratio((1,), batch)
    assert out.shape == (2,)
    assert out[1] == pytest.approx(out[0] / 2)


def test_schur_ratio_at_ones_is_one():
    # well-conditioned limit handling is not required; use near-ones spectrum
    x = np.array([1.0, 1.5, 2.0])
    val = schur_ratio((2, 1), x)
    assert val > 0
    assert schur_ratio((0,), x) == pytest.approx(1.0)


@settings(deadline=None, max_examples=25)
@given(
    st.lists(st.integers(min_value=0, max_value=4), min_size=1, max_size=3),
    st.integers(min_value=0, max_value=2**31 - 1),
)
def test_zonal_eval_symmetric_under_permutation(parts, seed):
    kap = as_partition(sorted(parts, reverse=True))
    if sum(kap) > 6:
        return
    nvars = 3
    gen = np.random.default_rng(seed)
    x = gen.uniform(0.2, 2.0, size=nvars)
    v1 = zonal_eval(kap, x)
    v2 = zonal_eval(kap, x[::-1].copy())
    assert v1 == pytest.approx(v2, rel=1e-12)


def test_gamma_spec_basics():
    g = GammaSpec((3, 1), 2)
    assert g.s == 0 and g.kappa() == (1,) and g.alphas() == (1, 4)
    g2 = GammaSpec((2,), 2)
    assert g2.s == 1 and g2.kappa() == (1, 1) and g2.alphas() == (0, 3)
    g3 = GammaSpec((), 2)
    assert g3.s == 1 and g3.kappa() == () and g3.alphas() == (0, 1)
    g4 = GammaSpec((1, 1), 2)
    assert g4.s == 0 and g4.kappa() == () and g4.alphas() == (1, 2)


def test_gamma_spec_validation():
    with pytest.raises(ValueError, match="parity"):
        GammaSpec((2, 1), 2)
    with pytest.raises(ValueError, match="parity"):
        GammaSpec((3,), 2)  # odd part padded with an even zero
    with pytest.raises(ValueError, match="more parts"):
        GammaSpec((1, 1, 1), 2)
    with pytest.raises(ValueError):
        GammaSpec((2, 2), 0)


def test_gamma_spec_alpha_shift_identity():
    # alphas are gamma reversed plus the staircase 0, 1, ..., N-1
    g = GammaSpec((5, 3, 1), 3)
    assert g.alphas() == (1 + 0, 3 + 1, 5 + 2)
