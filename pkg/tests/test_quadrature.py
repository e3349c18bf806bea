import math

import numpy as np
import pytest

from genwishart.quadrature import glpanels, halfline, ordered_cell_integrals


def test_halfline_exponential():
    val, err = halfline(lambda x: math.exp(-x))
    assert val == pytest.approx(1.0, abs=1e-9)
    assert err < 1e-6


def test_halfline_gamma_density():
    # shape-2 rate-1/2 density: x e^(-x/2) / 4
    val, _ = halfline(lambda x: x * math.exp(-x / 2.0) / 4.0)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_halfline_heavy_tail_extends_cut():
    # slow decay forces the doubling loop past the initial cut
    val, _ = halfline(lambda x: math.exp(-x / 40.0) / 40.0, cut0=10.0)
    assert val == pytest.approx(1.0, abs=1e-7)


def test_glpanels_polynomial_exactness():
    x, w = glpanels(0.0, 1.0, panels=4, order=6)
    assert x.size == 24 and w.size == 24
    assert np.sum(w * x**3) == pytest.approx(0.25, rel=1e-13)
    assert np.sum(w) == pytest.approx(1.0, rel=1e-13)
    x2, w2 = glpanels(-1.0, 3.0, panels=3, order=8)
    assert np.sum(w2 * x2**2) == pytest.approx((27.0 + 1.0) / 3.0, rel=1e-12)


def test_ordered_cells_constant_density():
    # integral of 2 over the ordered triangle of the unit square is 1
    edges = np.linspace(0.0, 1.0, 6)
    cells = ordered_cell_integrals(lambda u, v: 2.0 * np.ones_like(u * v), edges)
    assert cells.shape == (5, 5)
    # strictly-lower cells are empty
    assert np.all(cells[np.tril_indices(5, k=-1)] == 0)
    assert np.sum(cells) == pytest.approx(1.0, rel=1e-12)


def test_ordered_cells_product_density():
    # 2 e^(-u-v) over u < v in [0, T]^2 equals (1 - e^(-T))^2
    t = 8.0
    edges = np.linspace(0.0, t, 12)
    cells = ordered_cell_integrals(lambda u, v: 2.0 * np.exp(-u - v), edges, order=30)
    assert np.sum(cells) == pytest.approx((1 - math.exp(-t)) ** 2, rel=1e-10)


def test_ordered_cells_diagonal_cells_respect_order():
    # linear-in-v density over a single cell: only the v > u half counts
    edges = np.array([0.0, 1.0])
    cells = ordered_cell_integrals(lambda u, v: v - u, edges, order=20)
    # integral of (v - u) over the triangle 0 < u < v < 1 is 1/6
    assert cells[0, 0] == pytest.approx(1.0 / 6.0, rel=1e-12)
