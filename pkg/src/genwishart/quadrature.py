"""Numerical integration helpers.

One-dimensional half-line integrals go through the adaptive Gauss-Kronrod
integrator from scipy with an automatically doubled tail cutoff; small
multi-dimensional integrals over ordered simplices use tensor
Gauss-Legendre panels.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate

__all__ = ["halfline", "glpanels", "ordered_cell_integrals"]


def halfline(f, tol: float = 1e-10, cut0: float = 30.0, max_doublings: int = 12):
    """Integrate f over [0, inf) by truncating to [0, T] and doubling T
    until the last doubling changes the value by less than tol (absolute)
    and the integrand at T is negligible.  Returns (value, abserr)."""
    cut = float(cut0)
    val, err = integrate.quad(f, 0.0, cut, limit=200, epsabs=tol, epsrel=tol)
    for _ in range(max_doublings):
        extra, eerr = integrate.quad(f, cut, 2.0 * cut, limit=200, epsabs=tol, epsrel=tol)
        val += extra
        err += eerr
        cut *= 2.0
        if abs(extra) < tol and abs(f(cut)) < tol:
            break
    return val, err


def glpanels(a: float, b: float, panels: int, order: int):
    """Composite Gauss-Legendre nodes and weights on [a, b].

    Returns (x, w) as flat arrays of length panels * order."""
    if not b > a:
        raise ValueError("need b > a")
    xs, ws = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * xs[None, :]).ravel()
    w = (half[:, None] * ws[None, :]).ravel()
    return x, w


def ordered_cell_integrals(f, edges, order: int = 40):
    """Cell integrals of f(u, v) over the ordered region u < v.

    ``edges`` is an increasing 1-D grid; for every pair of cells i <= j the
    integral of f over {u in cell_i, v in cell_j, u < v} is computed with a
    tensor Gauss-Legendre rule (the diagonal cells map the inner variable to
    (u, right edge) per node).  Returns a (cells, cells) array, zero below
    the diagonal, where cells = len(edges) - 1.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be a strictly increasing 1-D grid")
    m = edges.size - 1
    xs, ws = np.polynomial.legendre.leggauss(order)
    out = np.zeros((m, m))
    for i in range(m):
        a, b = edges[i], edges[i + 1]
        u = 0.5 * (a + b) + 0.5 * (b - a) * xs
        wu = 0.5 * (b - a) * ws
        for j in range(i, m):
            c, d = edges[j], edges[j + 1]
            if j > i:
                v = 0.5 * (c + d) + 0.5 * (d - c) * xs
                wv = 0.5 * (d - c) * ws
                vals = f(u[:, None], v[None, :])
                out[i, j] = float(np.einsum("i,j,ij->", wu, wv, vals))
            else:
                # inner bounds depend on the outer node: v in (u_k, b)
                lo = u
                v = lo[:, None] + 0.5 * (b - lo)[:, None] * (xs[None, :] + 1.0)
                wv = 0.5 * (b - lo)[:, None] * ws[None, :]
                vals = f(u[:, None], v)
                out[i, j] = float(np.sum(wu[:, None] * wv * vals))
    return out
