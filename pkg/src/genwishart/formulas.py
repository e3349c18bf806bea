"""Closed-form constants and densities for the triangular Gram ensembles.

Every density is returned on log scale together with an explicit support
flag.  Exact zeros of a density (boundary or coincidence sets) are reported
as out of support so that the pair (log_density, in_support) stays
consistent: in_support is false exactly when log_density is -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .ensembles import AlphaSpec, MBParams
from .errors import DegeneracyError
from .linalg import Field, leading_minor_dets, leading_minors_stacked
from .symfunc import GammaSpec, zonal

__all__ = [
    "DensityValue",
    "norm_const_real",
    "norm_const_complex",
    "q_factor",
    "q_factor_many",
    "tilde_q_factor",
    "tilde_q_factor_many",
    "element_pdf",
    "correlation_pdf",
    "correlation_log_prefactor",
    "transformed_pdf",
    "eig_pdf_complex",
    "eig_pdf_complex_many",
    "mb_eig_pdf",
    "mb_eig_pdf_many",
    "eig_pdf_real_zonal",
    "eig_pdf_real_zonal_many",
    "avg_charpoly",
    "fuss_catalan_moment",
    "c_n_constant",
    "bordered_charpoly_identity",
]

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class DensityValue:
    """A density evaluation on log scale with a support indicator."""

    log_density: float
    in_support: bool

    def __post_init__(self):
        if self.in_support and not math.isfinite(self.log_density):
            raise ValueError("in-support density must have finite log value")
        if not self.in_support and self.log_density != _NEG_INF:
            raise ValueError("out-of-support density must carry -inf")

    @classmethod
    def supported(cls, log_density: float) -> "DensityValue":
        log_density = float(log_density)
        if not math.isfinite(log_density):
            return cls.zero()
        return cls(log_density, True)

    @classmethod
    def zero(cls) -> "DensityValue":
        return cls(_NEG_INF, False)

    @property
    def density(self) -> float:
        return math.exp(self.log_density) if self.in_support else 0.0


def _alpha_values(alpha) -> np.ndarray:
    if isinstance(alpha, AlphaSpec):
        vals = np.asarray(alpha.alphas, dtype=float)
    else:
        vals = np.asarray(tuple(alpha), dtype=float)
    if vals.ndim != 1 or vals.size < 1:
        raise ValueError("alpha must be a non-empty vector")
    if np.any(vals <= -1.0):
        raise ValueError("every shape parameter must exceed -1")
    return vals


def norm_const_real(alpha) -> float:
    """Log of the real-case normalization: the product of 2^((a_j+1)/2),
    (2pi)^(N(N-1)/4) and Gamma((a_j+1)/2)."""
    a = _alpha_values(alpha)
    n = a.size
    return float(
        math.log(2.0) * np.sum((a + 1.0) / 2.0)
        + (n * (n - 1) / 4.0) * math.log(2.0 * math.pi)
        + np.sum(gammaln((a + 1.0) / 2.0))
    )


def norm_const_complex(alpha) -> float:
    """Log of the complex-case normalization pi^(N(N-1)/2) * prod Gamma(a_j+1)."""
    a = _alpha_values(alpha)
    n = a.size
    return float((n * (n - 1) / 2.0) * math.log(math.pi) + np.sum(gammaln(a + 1.0)))


def _minor_exponents(alpha, field: Field) -> np.ndarray:
    """Exponent attached to the i-th leading principal minor, i = 1..N.

    Real case: (a_i - a_{i+1} - 1)/2 for i < N and (a_N - 1)/2 for the full
    determinant; the complex case carries the unhalved differences and a_N.
    """
    a = _alpha_values(alpha)
    expo = np.empty(a.size)
    expo[:-1] = a[:-1] - a[1:] - 1.0
    expo[-1] = a[-1] - 1.0 if field is Field.REAL else a[-1]
    if field is Field.REAL:
        expo *= 0.5
    return expo


def _minor_power_logs(w, exponents: np.ndarray):
    """log prod_i (det W_i)^(e_i) over a stack of matrices.

    Returns (log values, in_support booleans); any minor <= 0 puts the
    matrix out of support."""
    minors = np.real(leading_minors_stacked(np.asarray(w)))
    ok = np.all(minors > 0.0, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(minors > 0.0, np.log(np.where(minors > 0.0, minors, 1.0)), 0.0)
    vals = logs @ exponents
    vals = np.where(ok & np.isfinite(vals), vals, _NEG_INF)
    ok = ok & np.isfinite(vals)
    return vals, ok


def q_factor(w, alpha, field: Field) -> DensityValue:
    """Product of powers of leading principal minors, log scale."""
    w = np.asarray(w)
    a = _alpha_values(alpha)
    if w.shape != (a.size, a.size):
        raise ValueError(
            f"matrix shape {w.shape} does not match {a.size} shape parameters"
        )
    minors = np.real(leading_minor_dets(w))
    if np.any(minors <= 0.0):
        return DensityValue.zero()
    return DensityValue.supported(float(np.log(minors) @ _minor_exponents(a, field)))


def q_factor_many(w, alpha, field: Field):
    """Stacked q_factor: returns (log values, in_support) arrays."""
    a = _alpha_values(alpha)
    w = np.asarray(w)
    if w.shape[-2:] != (a.size, a.size):
        raise ValueError("trailing matrix shape does not match alpha length")
    return _minor_power_logs(w, _minor_exponents(a, field))


def _tilde_exponents(kappa) -> np.ndarray:
    k = np.asarray(tuple(kappa), dtype=float)
    if k.ndim != 1 or k.size < 1:
        raise ValueError("kappa must be a non-empty vector")
    expo = np.empty(k.size)
    expo[:-1] = k[:-1] - k[1:]
    expo[-1] = k[-1]
    return expo


def tilde_q_factor(w, kappa) -> DensityValue:
    """Minor product with consecutive-difference exponents kappa_i - kappa_{i+1}
    and kappa_N on the full determinant, log scale."""
    vals, ok = _minor_power_logs(np.asarray(w)[None], _tilde_exponents(kappa))
    return DensityValue.supported(float(vals[0])) if ok[0] else DensityValue.zero()


def tilde_q_factor_many(w, kappa):
    return _minor_power_logs(w, _tilde_exponents(kappa))


def element_pdf(w, alpha, field: Field) -> DensityValue:
    """Joint element density of the Gram matrix on its independent entries
    (real: upper triangle including the diagonal; complex: real diagonal
    plus real and imaginary parts above it)."""
    q = q_factor(w, alpha, field)
    if not q.in_support:
        return q
    a = _alpha_values(alpha)
    rate = 0.5 if field is Field.REAL else 1.0
    log_norm = norm_const_real(a) if field is Field.REAL else norm_const_complex(a)
    trace = float(np.trace(np.asarray(w)).real)
    return DensityValue.supported(q.log_density - rate * trace - log_norm)


def correlation_log_prefactor(alpha, field: Field, constant_mode: str = "audited") -> float:
    """Log of the constant in front of q(C) for the correlation-matrix
    density.  The as-printed real constant is prod Gamma((a_l+l)/2) over the
    element normalization; the audited mode multiplies in the powers of two,
    2^((a_l+l)/2) per index, that the defining integrals produce.  The
    complex constant prod Gamma(a_l+l) needs no correction."""
    if constant_mode not in ("audited", "as_printed"):
        raise ValueError(f"unknown constant_mode {constant_mode!r}")
    a = _alpha_values(alpha)
    ell = np.arange(1, a.size + 1, dtype=float)
    if field is Field.COMPLEX:
        return float(np.sum(gammaln(a + ell)) - norm_const_complex(a))
    base = float(np.sum(gammaln((a + ell) / 2.0)) - norm_const_real(a))
    if constant_mode == "audited":
        base += math.log(2.0) * float(np.sum((a + ell) / 2.0))
    return base


def correlation_pdf(c, alpha, field: Field, constant_mode: str = "audited") -> DensityValue:
    """Density of the correlation matrix on its strictly-upper entries
    (real scalars, or real and imaginary parts in the complex case)."""
    c = np.asarray(c)
    a = _alpha_values(alpha)
    if c.shape != (a.size, a.size):
        raise ValueError("matrix shape does not match alpha length")
    if np.any(np.abs(np.diagonal(c) - 1.0) > 1e-12):
        raise ValueError("correlation matrix must have unit diagonal")
    q = q_factor(c, a, field)
    if not q.in_support:
        return q
    return DensityValue.supported(
        q.log_density + correlation_log_prefactor(a, field, constant_mode)
    )


def transformed_pdf(x, alpha, ell, field: Field) -> DensityValue:
    """Joint element density of L W L^dag for an invertible lower triangular
    L, where W carries element_pdf.

    The closed form multiplies q(X) e^{-tr(X (LL^dag)^{-1}) / r} by powers of
    the bottom-justified minors of the reversed product L^dag L together with
    det(L L^dag)^{-(a_1+1)/r}, r = 2 (real) or 1 (complex); it agrees exactly
    with the change-of-variables route through element_pdf.
    """
    x = np.asarray(x)
    a = _alpha_values(alpha)
    n = a.size
    ell = np.asarray(ell)
    if ell.shape != (n, n) or x.shape != (n, n):
        raise ValueError("x and ell must both be N x N with N = len(alpha)")
    if np.any(np.triu(ell, 1) != 0):
        raise ValueError("ell must be lower triangular")
    diag = np.diagonal(ell)
    if np.any(diag == 0):
        raise ValueError("ell must be invertible (nonzero diagonal)")

    q = q_factor(x, a, field)
    if not q.in_support:
        return q

    rate = 0.5 if field is Field.REAL else 1.0
    log_norm = norm_const_real(a) if field is Field.REAL else norm_const_complex(a)
    expo = _minor_exponents(a, field)

    gram_rev = ell.conj().T @ ell
    log_det_full = float(2.0 * np.sum(np.log(np.abs(diag))))
    log_minor_term = -(a[0] + 1.0) * rate * log_det_full
    for i in range(1, n):
        sub = gram_rev[i:, i:]
        sign, logdet = np.linalg.slogdet(sub)
        log_minor_term += expo[i - 1] * float(logdet)

    inner = np.linalg.solve(ell, x)
    inner = np.linalg.solve(ell, inner.conj().T).conj().T
    trace = float(np.trace(inner).real)
    return DensityValue.supported(
        q.log_density + log_minor_term - rate * trace - log_norm
    )


def _sorted_desc(v) -> np.ndarray:
    return np.sort(np.asarray(v, dtype=float))[::-1]


def _log_alternant_rows(x, alpha):
    """Log determinant of [x_j^(a_k)] for stacks of spectra, with per-row
    scaling for overflow control.  Returns (sign, log|det|) arrays."""
    x = np.asarray(x, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    with np.errstate(divide="ignore"):
        logx = np.log(x)
    scale = logx[..., :, None] * alpha[None, :]
    row_max = np.max(scale, axis=-1)
    mat = np.exp(scale - row_max[..., None])
    sign, logdet = np.linalg.slogdet(mat)
    return sign, logdet + np.sum(row_max, axis=-1)


def eig_pdf_complex_many(xs, alpha):
    """Vectorized unordered-eigenvalue log density for the complex ensemble
    with distinct shape parameters.  xs has shape (..., N)."""
    a = _alpha_values(alpha)
    n = a.size
    a_sorted = _sorted_desc(a)
    gaps = a_sorted[:-1] - a_sorted[1:]
    if n > 1 and np.min(gaps) < 1e-10:
        raise DegeneracyError(
            "coincident shape parameters: the alternant density degenerates; "
            "use the theta-profile density (mb_eig_pdf) for repeated values"
        )
    xs = np.asarray(xs, dtype=float)
    if xs.shape[-1] != n:
        raise ValueError("spectrum length does not match alpha length")
    xs_sorted = np.sort(xs, axis=-1)[..., ::-1]
    ok = np.all(xs_sorted > 0.0, axis=-1)

    log_const = -float(gammaln(n + 1)) - float(np.sum(gammaln(a_sorted + 1.0)))
    if n > 1:
        log_const -= float(np.sum(np.log(_pair_diffs(a_sorted))))

    safe = np.where(ok[..., None], xs_sorted, 1.0)
    sign, log_alt = _log_alternant_rows(safe, a_sorted)
    pair_log = _log_pair_diffs(safe)
    vals = log_const + pair_log + log_alt - np.sum(safe, axis=-1)
    ok = ok & (sign > 0) & np.isfinite(vals)
    return np.where(ok, vals, _NEG_INF), ok


def _pair_diffs(v: np.ndarray) -> np.ndarray:
    """All pairwise differences v_j - v_k for j < k of a descending vector."""
    idx_j, idx_k = np.triu_indices(v.size, k=1)
    return v[idx_j] - v[idx_k]


def _log_pair_diffs(xs: np.ndarray):
    """Sum of log(x_j - x_k) over j < k along the last axis (descending
    order assumed); -inf where any pair coincides."""
    n = xs.shape[-1]
    if n < 2:
        return np.zeros(xs.shape[:-1])
    idx_j, idx_k = np.triu_indices(n, k=1)
    diffs = xs[..., idx_j] - xs[..., idx_k]
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(diffs > 0.0, np.log(np.where(diffs > 0.0, diffs, 1.0)), _NEG_INF)
    return np.sum(logs, axis=-1)


def eig_pdf_complex(x, alpha) -> DensityValue:
    """Unordered eigenvalue density of the complex ensemble at one spectrum."""
    vals, ok = eig_pdf_complex_many(np.asarray(x, dtype=float)[None, :], alpha)
    return DensityValue.supported(float(vals[0])) if ok[0] else DensityValue.zero()


def mb_eig_pdf_many(xs, params: MBParams):
    """Vectorized log density of the theta-profile (Muttalib-Borodin)
    eigenvalue ensemble."""
    if not isinstance(params, MBParams):
        raise TypeError("params must be MBParams")
    theta, c, n = params.theta, params.c, params.dim
    if theta <= 0:
        raise ValueError("the theta-profile density requires theta > 0")
    xs = np.asarray(xs, dtype=float)
    if xs.shape[-1] != n:
        raise ValueError("spectrum length does not match params.dim")
    xs_sorted = np.sort(xs, axis=-1)[..., ::-1]
    ok = np.all(xs_sorted > 0.0, axis=-1)
    safe = np.where(ok[..., None], xs_sorted, 1.0)

    ells = np.arange(1, n + 1, dtype=float)
    log_const = -float(
        np.sum(gammaln(ells + 1.0)) + np.sum(gammaln(theta * (ells - 1.0) + c + 1.0))
    )
    vals = (
        log_const
        + c * np.sum(np.log(safe), axis=-1)
        - np.sum(safe, axis=-1)
        + _log_pair_diffs(safe)
        + _log_pair_diffs(safe**theta)
    )
    ok = ok & np.isfinite(vals)
    return np.where(ok, vals, _NEG_INF), ok


def mb_eig_pdf(x, params: MBParams) -> DensityValue:
    vals, ok = mb_eig_pdf_many(np.asarray(x, dtype=float)[None, :], params)
    return DensityValue.supported(float(vals[0])) if ok[0] else DensityValue.zero()


def _real_zonal_log_const(g: GammaSpec) -> float:
    gam = np.asarray(g.padded, dtype=float)
    alphas = np.asarray(g.alphas(), dtype=float)
    return float(
        math.log(c_n_constant(g.nvars))
        - math.log(2.0) * np.sum((gam - 1.0) / 2.0)
        - np.sum(gammaln((alphas + 1.0) / 2.0))
    )


def eig_pdf_real_zonal_many(xs, g: GammaSpec):
    """Vectorized log density of the real-case eigenvalue ensemble in its
    zonal-ratio form."""
    if not isinstance(g, GammaSpec):
        raise TypeError("g must be a GammaSpec")
    xs = np.asarray(xs, dtype=float)
    n = g.nvars
    if xs.shape[-1] != n:
        raise ValueError("spectrum length does not match g.nvars")
    ok = np.all(xs > 0.0, axis=-1)
    safe = np.where(ok[..., None], xs, 1.0)

    kappa = g.kappa()
    poly = zonal(kappa, n, max_degree=max(sum(kappa), 12))
    ratio = poly.eval(safe) / float(poly.at_ones())
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.where(ratio > 0.0, np.log(np.where(ratio > 0.0, ratio, 1.0)), _NEG_INF)
    vals = (
        _real_zonal_log_const(g)
        + log_ratio
        - (g.s / 2.0) * np.sum(np.log(safe), axis=-1)
        - 0.5 * np.sum(safe, axis=-1)
        + _log_abs_pair_diffs(safe)
    )
    ok = ok & np.isfinite(vals)
    return np.where(ok, vals, _NEG_INF), ok


def _log_abs_pair_diffs(xs: np.ndarray):
    n = xs.shape[-1]
    if n < 2:
        return np.zeros(xs.shape[:-1])
    idx_j, idx_k = np.triu_indices(n, k=1)
    diffs = np.abs(xs[..., idx_j] - xs[..., idx_k])
    with np.errstate(divide="ignore"):
        logs = np.where(diffs > 0.0, np.log(np.where(diffs > 0.0, diffs, 1.0)), _NEG_INF)
    return np.sum(logs, axis=-1)


def eig_pdf_real_zonal(x, g: GammaSpec) -> DensityValue:
    vals, ok = eig_pdf_real_zonal_many(np.asarray(x, dtype=float)[None, :], g)
    return DensityValue.supported(float(vals[0])) if ok[0] else DensityValue.zero()


def avg_charpoly(alpha) -> list[Fraction]:
    """Coefficients c_0..c_N (ascending powers) of the averaged
    characteristic polynomial E det(xI - W), exact rationals, monic.

    The value is a double sum over the power index and an inner shift k,
    with the product prod_l (a_l + k + 1); it does not depend on the field.
    """
    a = [Fraction(v) for v in _alpha_values(alpha).tolist()]
    n = len(a)
    prods = []
    for k in range(n + 1):
        p = Fraction(1)
        for al in a:
            p *= al + k + 1
        prods.append(p)
    coeffs = []
    for nu in range(n + 1):
        s = Fraction(0)
        for k in range(nu + 1):
            term = prods[k] / (math.factorial(nu - k) * math.factorial(k))
            s += -term if (n - k) % 2 else term
        coeffs.append(s)
    if coeffs[-1] != 1:
        raise AssertionError("averaged characteristic polynomial must be monic")
    return coeffs


def fuss_catalan_moment(theta: float, k: int) -> float:
    """C_theta(k) = Gamma(theta k + k + 1) / (Gamma(theta k + 2) Gamma(k + 1))."""
    if theta < 0:
        raise ValueError("theta must be non-negative")
    k = int(k)
    if k < 0:
        raise ValueError("k must be non-negative")
    return float(
        math.exp(
            gammaln(theta * k + k + 1.0) - gammaln(theta * k + 2.0) - gammaln(k + 1.0)
        )
    )


def c_n_constant(n: int) -> float:
    """Normalization constant of the real eigenvalue density: a power of two
    times the product of Gamma(3/2)/Gamma(1 + j/2)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    js = np.arange(1, n + 1, dtype=float)
    log_val = -(n * (n + 1) / 2.0) * math.log(2.0) + float(
        np.sum(gammaln(1.5) - gammaln(1.0 + js / 2.0))
    )
    return math.exp(log_val)


def bordered_charpoly_identity(y, x: float) -> float:
    """Relative residual of the bordered characteristic-polynomial identity:
    det(xI_{n+N} - [[0, Y], [Y^dag, 0]]) against x^{n-N} prod_l (x^2 -
    lambda_l^2) with lambda the singular values of Y."""
    y = np.asarray(y)
    if y.ndim != 2:
        raise ValueError("y must be a matrix")
    n, m = y.shape
    if n < m:
        raise ValueError("y must have at least as many rows as columns")
    dtype = complex if np.iscomplexobj(y) else float
    b = np.zeros((n + m, n + m), dtype=dtype)
    b[:n, n:] = y
    b[n:, :n] = y.conj().T
    lhs = float(np.linalg.det(float(x) * np.eye(n + m) - b).real)
    svals = np.linalg.svd(y, compute_uv=False)
    rhs = float(x) ** (n - m) * float(np.prod(float(x) ** 2 - svals**2))
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
