"""Group averages over Haar-random conjugations and their closed forms.

The central object is the average of a minor-power weight q over G Lambda
G^dag with G Haar distributed on the orthogonal or unitary group.  The
complex case has an exact alternant evaluation (with two constant
conventions to adjudicate); the real case, for half-integer-compatible
parameters, reduces to a normalized zonal polynomial ratio.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DegeneracyError
from .formulas import _alpha_values, _minor_exponents, _minor_power_logs, _tilde_exponents
from .linalg import Field, RngStream, _haar, eigvals_self_adjoint
from .report import CheckReport
from .symfunc import GammaSpec, schur_ratio, zonal

__all__ = [
    "MCEstimate",
    "haar_q_integral",
    "haar_tilde_integral",
    "gn_prediction",
    "real_spherical_prediction",
    "spherical_ratio",
    "splitting_identity_check",
]

_MAX_CHUNK = 200_000
_SUPPORT_WARN_FRACTION = 1e-3


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo mean with its standard error."""

    mean: float
    stderr: float
    reps: int
    support_failures: int = 0

    def __post_init__(self):
        if self.reps < 2:
            raise ValueError("need at least 2 repetitions for a standard error")

    @classmethod
    def from_samples(cls, values, support_failures: int = 0) -> "MCEstimate":
        values = np.asarray(values, dtype=float).ravel()
        n = values.size
        if n < 2:
            raise ValueError("need at least 2 samples")
        return cls(
            mean=float(np.mean(values)),
            stderr=float(np.std(values, ddof=1) / math.sqrt(n)),
            reps=n,
            support_failures=int(support_failures),
        )


def _haar_conjugations(stream: RngStream, x, field: Field, reps: int):
    """Yield chunks of G diag(x) G^dag for Haar G."""
    x = np.asarray(x, dtype=float)
    n = x.size
    gen = stream.generator()
    done = 0
    while done < reps:
        m = min(_MAX_CHUNK, reps - done)
        g = _haar(gen, n, field, m)
        conj = (g * x[None, None, :]) @ g.conj().transpose(0, 2, 1)
        done += m
        yield conj


def _haar_minor_power_integral(exponents, x, field: Field, reps: int, stream: RngStream) -> MCEstimate:
    vals = np.empty(reps)
    failures = 0
    pos = 0
    for conj in _haar_conjugations(stream, x, field, reps):
        logq, ok = _minor_power_logs(conj, np.asarray(exponents, dtype=float))
        chunk = np.where(ok, np.exp(np.where(ok, logq, 0.0)), 0.0)
        failures += int(np.sum(~ok))
        vals[pos : pos + chunk.size] = chunk
        pos += chunk.size
    if failures > _SUPPORT_WARN_FRACTION * reps:
        warnings.warn(
            f"{failures}/{reps} Haar draws produced a non-positive leading minor; "
            "the average may be numerically degenerate",
            RuntimeWarning,
        )
    return MCEstimate.from_samples(vals, support_failures=failures)


def haar_q_integral(alpha, x, field: Field, reps: int, stream: RngStream) -> MCEstimate:
    """Monte Carlo value of the group average of the minor-power weight with
    shape parameters alpha, evaluated at spectrum x."""
    a = _alpha_values(alpha)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != a.size:
        raise ValueError("x must be a spectrum of the same length as alpha")
    if np.any(x <= 0):
        raise ValueError("spectrum entries must be positive")
    return _haar_minor_power_integral(_minor_exponents(a, field), x, field, reps, stream)


def haar_tilde_integral(kappa, x, field: Field, reps: int, stream: RngStream) -> MCEstimate:
    """Group average of the integer-exponent minor product indexed by the
    weakly decreasing vector kappa."""
    x = np.asarray(x, dtype=float)
    return _haar_minor_power_integral(_tilde_exponents(kappa), x, field, reps, stream)


def gn_prediction(alpha, x, mode: str = "gamma_corrected") -> float:
    """Alternant evaluation of the complex group average.

    mode "as_printed" carries an extra 1/prod Gamma(a_l+1); "gamma_corrected"
    drops it (the N=1 reduction forces the integral to equal x^a exactly,
    which only the corrected form satisfies).
    """
    if mode not in ("gamma_corrected", "as_printed"):
        raise ValueError(f"unknown mode {mode!r}")
    a = np.sort(_alpha_values(alpha))[::-1]
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    n = a.size
    if x.size != n:
        raise ValueError("x must have the same length as alpha")
    if np.any(x <= 0):
        raise ValueError("spectrum entries must be positive")
    if n > 1:
        if np.min(a[:-1] - a[1:]) < 1e-10:
            raise DegeneracyError("coincident shape parameters in the alternant")
        if np.min(x[:-1] - x[1:]) < 1e-10:
            raise DegeneracyError("coincident spectrum entries in the alternant")

    log_c = float(np.sum(gammaln(np.arange(1, n + 1))))
    if mode == "as_printed":
        log_c -= float(np.sum(gammaln(a + 1.0)))
    det = float(np.linalg.det(x[:, None] ** a[None, :]))
    denom = 1.0
    for j in range(n):
        for k in range(j + 1, n):
            denom *= (a[j] - a[k]) * (x[j] - x[k])
    return math.exp(log_c) * det / denom


def real_spherical_prediction(x, g: GammaSpec) -> float:
    """Closed-form real group average: the normalized zonal ratio for the
    partition (gamma - 1 + s)/2, times prod x^(-1/2) when s = 1."""
    if not isinstance(g, GammaSpec):
        raise TypeError("g must be a GammaSpec")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != g.nvars:
        raise ValueError("x must be a spectrum of length g.nvars")
    if np.any(x <= 0):
        raise ValueError("spectrum entries must be positive")
    kappa = g.kappa()
    poly = zonal(kappa, g.nvars, max_degree=max(sum(kappa), 12))
    value = float(poly.eval(x)) / float(poly.at_ones())
    if g.s == 1:
        value *= float(np.prod(x**-0.5))
    return value


def spherical_ratio(kappa, x, field: Field):
    """Normalized spherical function of partition kappa on spectra x: the
    zonal ratio in the real case, the Schur ratio in the complex case.
    Batch axes on x are allowed."""
    x = np.asarray(x, dtype=float)
    if field is Field.COMPLEX:
        return schur_ratio(kappa, x)
    kappa = tuple(kappa)
    poly = zonal(kappa, x.shape[-1], max_degree=max(sum(kappa), 12))
    return poly.eval(x) / float(poly.at_ones())


def splitting_identity_check(
    kappa,
    lam,
    sigma,
    field: Field,
    reps: int,
    stream: RngStream,
    tol_sigma: float = 4.0,
) -> CheckReport:
    """Multiplicativity of the normalized spherical function: the average of
    phi over spectra of S^(1/2) G Lambda G^dag S^(1/2) equals
    phi(Lambda) phi(Sigma)."""
    lam = np.asarray(lam, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if lam.shape != sigma.shape or lam.ndim != 1:
        raise ValueError("lam and sigma must be spectra of equal length")
    if np.any(lam <= 0) or np.any(sigma <= 0):
        raise ValueError("spectra must be positive")
    kappa = tuple(int(k) for k in kappa)
    root = np.sqrt(sigma)

    vals = np.empty(reps)
    pos = 0
    for conj in _haar_conjugations(stream, lam, field, reps):
        m = root[None, :, None] * conj * root[None, None, :]
        eigs = eigvals_self_adjoint(m, nonneg=True)
        chunk = spherical_ratio(kappa, eigs, field)
        vals[pos : pos + len(chunk)] = chunk
        pos += len(chunk)
    est = MCEstimate.from_samples(vals)

    rhs = float(spherical_ratio(kappa, lam, field)) * float(
        spherical_ratio(kappa, sigma, field)
    )
    denom = max(est.stderr, 1e-15)
    statistic = abs(est.mean - rhs) / denom
    return CheckReport.from_statistic(
        name="splitting_identity",
        statistic=statistic,
        threshold=tol_sigma,
        reps=reps,
        seed=stream.master_seed,
        params={
            "kappa": list(kappa),
            "lam": lam.tolist(),
            "sigma": sigma.tolist(),
            "field": field.value,
            "tol_sigma": tol_sigma,
        },
        details={"mc_mean": est.mean, "mc_stderr": est.stderr, "exact": rhs},
    )
