"""Exact symmetric-function engine.

Integer partitions and the dominance order, the monomial basis, a quadratic
differential operator whose polynomial eigenfunctions are the zonal
polynomials of real matrix argument (in the statistics normalization where
the degree-k family sums to the k-th power of the first power sum), plus
Legendre polynomials and closed-form two-variable ratios used as
cross-checks.  All polynomial algebra is done over exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DegeneracyError

__all__ = [
    "Partition",
    "as_partition",
    "partitions_of",
    "dominance_leq",
    "monomial_eval",
    "monomial_at_ones",
    "RationalSymPoly",
    "make_sympoly",
    "operator_apply",
    "operator_eigenvalue",
    "zonal",
    "zonal_eval",
    "zonal_at_ones",
    "legendre_p",
    "zonal_ratio_n2",
    "rank_one_genfun_deviation",
    "schur_ratio",
    "GammaSpec",
    "DEFAULT_MAX_DEGREE",
]

Partition = tuple[int, ...]

# Zonal construction cost grows quickly with the degree; requests above the
# cap must opt in explicitly.
DEFAULT_MAX_DEGREE = 12

_F0 = Fraction(0)


def as_partition(parts) -> Partition:
    """Validate and normalize a partition: weakly decreasing non-negative
    integers, trailing zeros stripped."""
    out = []
    prev = None
    for p in parts:
        q = int(p)
        if q != p:
            raise ValueError(f"partition parts must be integers, got {p!r}")
        if q < 0:
            raise ValueError(f"partition parts must be non-negative, got {q}")
        if prev is not None and q > prev:
            raise ValueError(f"partition parts must be weakly decreasing: {tuple(parts)}")
        out.append(q)
        prev = q
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def partitions_of(degree: int, max_len: int | None = None) -> list[Partition]:
    """All partitions of ``degree`` with at most ``max_len`` parts, in
    descending lexicographic order (a linear extension of dominance)."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    cap = degree if max_len is None else int(max_len)

    def rec(d, max_part, slots):
        if d == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(d, max_part), 0, -1):
            for rest in rec(d - first, first, slots - 1):
                yield (first,) + rest

    return list(rec(degree, degree, cap))


def dominance_leq(mu, kappa) -> bool:
    """True iff mu <= kappa in dominance order (prefix sums of mu never
    exceed those of kappa).  Both partitions must have the same size."""
    mu = as_partition(mu)
    kappa = as_partition(kappa)
    if sum(mu) != sum(kappa):
        raise ValueError(
            f"dominance comparison needs equal sizes: |{mu}| != |{kappa}|"
        )
    acc_m = 0
    acc_k = 0
    for i in range(max(len(mu), len(kappa))):
        acc_m += mu[i] if i < len(mu) else 0
        acc_k += kappa[i] if i < len(kappa) else 0
        if acc_m > acc_k:
            return False
    return True


def _distinct_permutations(values: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All distinct permutations of a multiset of integers."""
    values = sorted(values, reverse=True)
    out: list[tuple[int, ...]] = []

    def rec(remaining, prefix):
        if not remaining:
            out.append(tuple(prefix))
            return
        prev = None
        for idx, v in enumerate(remaining):
            if v == prev:
                continue
            prev = v
            rec(remaining[:idx] + remaining[idx + 1 :], prefix + [v])

    rec(values, [])
    return out


@lru_cache(maxsize=None)
def _orbit(mu: Partition, nvars: int) -> tuple[tuple[int, ...], ...]:
    padded = mu + (0,) * (nvars - len(mu))
    return tuple(_distinct_permutations(padded))


def monomial_eval(mu, x):
    """Monomial symmetric polynomial m_mu at x.

    ``x`` may carry leading batch axes; the last axis indexes the variables.
    A partition with more parts than variables evaluates to zero.
    """
    mu = as_partition(mu)
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise ValueError("x must have at least one axis of variables")
    n = x.shape[-1]
    if len(mu) > n:
        out = np.zeros(x.shape[:-1])
        return float(out) if out.ndim == 0 else out
    total = np.zeros(x.shape[:-1])
    for expo in _orbit(mu, n):
        total = total + np.prod(x ** np.asarray(expo), axis=-1)
    return float(total) if total.ndim == 0 else total


def monomial_at_ones(mu, nvars: int):
    """m_mu(1, ..., 1): the number of distinct arrangements of the padded
    exponent vector, as an exact integer."""
    mu = as_partition(mu)
    if len(mu) > nvars:
        return 0
    counts: dict[int, int] = {}
    for p in mu:
        counts[p] = counts.get(p, 0) + 1
    denom = math.factorial(nvars - len(mu))
    for c in counts.values():
        denom *= math.factorial(c)
    return math.factorial(nvars) // denom


@dataclass
class RationalSymPoly:
    """Homogeneous symmetric polynomial over the monomial basis with exact
    rational coefficients.  ``coeffs`` maps partitions to nonzero Fractions."""

    degree: int
    nvars: int
    coeffs: dict[Partition, Fraction]

    def eval(self, x):
        """Float evaluation; ``x`` may carry leading batch axes."""
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape[:-1])
        for mu, c in self.coeffs.items():
            total = total + float(c) * monomial_eval(mu, x)
        return float(total) if total.ndim == 0 else total

    def at_ones(self) -> Fraction:
        """Exact value at x = (1, ..., 1)."""
        return sum(
            (c * monomial_at_ones(mu, self.nvars) for mu, c in self.coeffs.items()),
            _F0,
        )

    def scaled(self, factor) -> "RationalSymPoly":
        factor = Fraction(factor)
        if factor == 0:
            return RationalSymPoly(self.degree, self.nvars, {})
        return RationalSymPoly(
            self.degree, self.nvars, {mu: c * factor for mu, c in self.coeffs.items()}
        )

    def __add__(self, other: "RationalSymPoly") -> "RationalSymPoly":
        if self.degree != other.degree or self.nvars != other.nvars:
            raise ValueError("can only add polynomials of equal degree and arity")
        out = dict(self.coeffs)
        for mu, c in other.coeffs.items():
            s = out.get(mu, _F0) + c
            if s:
                out[mu] = s
            else:
                out.pop(mu, None)
        return RationalSymPoly(self.degree, self.nvars, out)


def make_sympoly(degree: int, nvars: int, coeffs) -> RationalSymPoly:
    """Build a validated homogeneous polynomial from a partition->number map."""
    clean: dict[Partition, Fraction] = {}
    for mu, c in coeffs.items():
        mu = as_partition(mu)
        c = Fraction(c)
        if not c:
            continue
        if sum(mu) != degree:
            raise ValueError(
                f"non-homogeneous term {mu} in a degree-{degree} polynomial"
            )
        if len(mu) > nvars:
            raise ValueError(f"partition {mu} has more parts than {nvars} variables")
        clean[mu] = c
    return RationalSymPoly(degree, nvars, clean)


@lru_cache(maxsize=None)
def _operator_on_monomial(lam: Partition, nvars: int) -> tuple[tuple[Partition, Fraction], ...]:
    """Image of m_lam under the quadratic operator

        sum_j x_j^2 d^2/dx_j^2  +  sum_{i != j} x_i^2 / (x_i - x_j) d/dx_i,

    expanded exactly.  The pair terms are combined over the orbit so the
    divided differences reduce to finite geometric sums; the image only
    involves partitions below lam in dominance.
    """
    n = nvars
    diag = sum(a * (a - 1) for a in lam)
    acc: dict[tuple[int, ...], int] = {}

    def bump(key, val):
        acc[key] = acc.get(key, 0) + val

    for a in _orbit(lam, n):
        if diag:
            bump(a, diag)
        la = list(a)
        for i in range(n):
            for j in range(i + 1, n):
                u, v = a[i], a[j]
                if u == v:
                    if u:
                        bump(a, u)
                    continue
                if u < v:
                    continue  # the swapped orbit element handles this pair
                for p in range(u - v + 1):
                    la[i], la[j] = v + p, u - p
                    bump(tuple(la), u)
                if v:
                    for p in range(u - v - 1):
                        la[i], la[j] = v + 1 + p, u - 1 - p
                        bump(tuple(la), -v)
                la[i], la[j] = a[i], a[j]

    grouped: dict[Partition, set[int]] = {}
    for expo, coef in acc.items():
        mu = as_partition(sorted(expo, reverse=True))
        grouped.setdefault(mu, set()).add(coef)
    out: dict[Partition, Fraction] = {}
    for mu, vals in grouped.items():
        if len(vals) != 1:
            raise AssertionError(f"operator image of {lam} is not symmetric")
        (coef,) = vals
        if coef == 0:
            continue
        if not dominance_leq(mu, lam):
            raise AssertionError(
                f"operator image of {lam} leaves the dominance cone at {mu}"
            )
        out[mu] = Fraction(coef)
    return tuple(sorted(out.items()))


def operator_apply(p: RationalSymPoly) -> RationalSymPoly:
    """Apply the quadratic operator to a homogeneous symmetric polynomial."""
    out: dict[Partition, Fraction] = {}
    for lam, c in p.coeffs.items():
        for mu, k in _operator_on_monomial(lam, p.nvars):
            s = out.get(mu, _F0) + c * k
            if s:
                out[mu] = s
            else:
                out.pop(mu, None)
    return RationalSymPoly(p.degree, p.nvars, out)


def operator_eigenvalue(kappa, nvars: int) -> Fraction:
    """Eigenvalue attached to kappa, read off the leading operator
    coefficient and cross-checked against the closed form
    sum_i kappa_i (kappa_i - i) + |kappa| (nvars - 1)."""
    kappa = as_partition(kappa)
    if len(kappa) > nvars:
        raise ValueError(f"partition {kappa} has more parts than {nvars} variables")
    image = dict(_operator_on_monomial(kappa, nvars))
    e = image.get(kappa, _F0)
    closed = sum(k * (k - (i + 1)) for i, k in enumerate(kappa)) + sum(kappa) * (
        nvars - 1
    )
    if e != closed:
        raise AssertionError(
            f"leading operator coefficient {e} disagrees with the closed form {closed}"
        )
    return e


@lru_cache(maxsize=None)
def _zonal_table(degree: int, nvars: int) -> dict[Partition, RationalSymPoly]:
    """All zonal polynomials of the given degree in nvars variables.

    The operator is upper triangular on the monomial basis ordered by
    descending lexicographic order, so each eigenvector is found by back
    substitution with unit leading coefficient; scales are then fixed by the
    triangular system sum_kappa a_kappa Y_kappa = (x_1 + ... + x_n)^degree.
    """
    parts = partitions_of(degree, max_len=nvars)
    images = {lam: dict(_operator_on_monomial(lam, nvars)) for lam in parts}
    eig = {lam: images[lam].get(lam, _F0) for lam in parts}

    for i, kap in enumerate(parts):
        for lam in parts[i + 1 :]:
            if dominance_leq(lam, kap) and eig[lam] == eig[kap]:
                raise DegeneracyError(
                    f"operator eigenvalue collision between comparable partitions "
                    f"{kap} and {lam}"
                )

    vecs: dict[Partition, dict[Partition, Fraction]] = {}
    for ik, kap in enumerate(parts):
        c = {kap: Fraction(1)}
        for mu in parts[ik + 1 :]:
            num = _F0
            for lam, cl in c.items():
                num += images[lam].get(mu, _F0) * cl
            if num:
                # nonzero coupling forces mu < kap, so the gap is nonzero
                c[mu] = num / (eig[kap] - eig[mu])
        vecs[kap] = c

    target = {
        mu: Fraction(math.factorial(degree), math.prod(map(math.factorial, mu)))
        for mu in parts
    }
    scale: dict[Partition, Fraction] = {}
    for ik, mu in enumerate(parts):
        s = target[mu]
        for kap in parts[:ik]:
            s -= scale[kap] * vecs[kap].get(mu, _F0)
        scale[mu] = s

    table: dict[Partition, RationalSymPoly] = {}
    for kap in parts:
        coeffs = {
            mu: scale[kap] * v for mu, v in vecs[kap].items() if scale[kap] * v != 0
        }
        table[kap] = RationalSymPoly(degree, nvars, coeffs)
    return table


def zonal(kappa, nvars: int, max_degree: int | None = None) -> RationalSymPoly:
    """Zonal polynomial Y_kappa in nvars variables, exact coefficients.

    Degrees above DEFAULT_MAX_DEGREE require an explicit ``max_degree``
    override.  Results are cached per (degree, nvars); treat them as
    read-only.
    """
    kappa = as_partition(kappa)
    if len(kappa) > nvars:
        raise ValueError(f"partition {kappa} has more parts than {nvars} variables")
    degree = sum(kappa)
    cap = DEFAULT_MAX_DEGREE if max_degree is None else int(max_degree)
    if degree > cap:
        raise ValueError(
            f"degree {degree} exceeds the cap {cap}; pass max_degree to override"
        )
    return _zonal_table(degree, nvars)[kappa]


def zonal_eval(kappa, x, max_degree: int | None = None):
    """Float evaluation of Y_kappa at x (batch axes allowed)."""
    x = np.asarray(x, dtype=float)
    return zonal(kappa, x.shape[-1], max_degree=max_degree).eval(x)


def zonal_at_ones(kappa, nvars: int, max_degree: int | None = None) -> Fraction:
    """Exact Y_kappa(1, ..., 1)."""
    return zonal(kappa, nvars, max_degree=max_degree).at_ones()


def legendre_p(rho: int, u):
    """Legendre polynomial P_rho(u) via the terminating hypergeometric sum
    with argument (1-u)/2.  ``u`` may be an array."""
    rho = int(rho)
    if rho < 0:
        raise ValueError("degree must be non-negative")
    u = np.asarray(u, dtype=float)
    z = 0.5 * (1.0 - u)
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(rho):
        term = term * ((rho + 1 + k) * (k - rho)) / ((k + 1) ** 2) * z
        total = total + term
    return float(total) if total.ndim == 0 else total


def zonal_ratio_n2(kappa, x1: float, x2: float) -> float:
    """Two-variable normalized zonal ratio in closed form: a power of the
    product of the variables times a Legendre polynomial in the ratio of the
    arithmetic to the geometric mean."""
    kappa = as_partition(kappa)
    if len(kappa) > 2:
        raise ValueError("closed form is for two variables only")
    k1 = kappa[0] if kappa else 0
    k2 = kappa[1] if len(kappa) > 1 else 0
    if not (x1 > 0 and x2 > 0):
        raise ValueError("arguments must be positive")
    geo = math.sqrt(x1 * x2)
    return (x1 * x2) ** ((k1 + k2) / 2.0) * float(
        legendre_p(k1 - k2, 0.5 * (x1 + x2) / geo)
    )


def rank_one_genfun_deviation(nvars: int, kmax: int, t: float, x) -> float:
    """Absolute gap between prod_l (1 - t x_l)^(-1/2) and its single-row
    zonal expansion truncated at degree kmax."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != nvars:
        raise ValueError("x must have nvars entries")
    if abs(t) * float(np.max(np.abs(x), initial=0.0)) >= 1.0:
        raise ValueError("series diverges: need |t| * max|x| < 1")
    closed = float(np.prod((1.0 - t * x) ** (-0.5)))
    total = 0.0
    poch = 1.0  # (1/2)_k / k!
    for k in range(kmax + 1):
        if k:
            poch *= (k - 0.5) / k
        kap = (k,) if k else ()
        total += poch * float(zonal_eval(kap, x, max_degree=kmax)) * t**k
    return abs(total - closed)


def schur_ratio(kappa, x):
    """Normalized Schur polynomial s_kappa(x) / s_kappa(1, ..., 1) via the
    bialternant formula and the hook-content product at ones.  ``x`` may
    carry leading batch axes."""
    kappa = as_partition(kappa)
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if len(kappa) > n:
        raise ValueError(f"partition {kappa} has more parts than {n} variables")
    kap = np.asarray(kappa + (0,) * (n - len(kappa)))
    delta = np.arange(n - 1, -1, -1)
    num = np.linalg.det(x[..., :, None] ** (kap + delta)[None, :])
    den = np.linalg.det(x[..., :, None] ** delta[None, :])
    dim = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            dim *= (kap[i] - kap[j] + j - i) / (j - i)
    out = num / den / dim
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class GammaSpec:
    """Weakly decreasing non-negative integers with a common parity, padded
    to the variable count with zeros (zeros count as even).

    Drives the real eigenvalue density: s = 0 when all parts are odd
    (requires a full-length vector), s = 1 when all parts are even; the
    attached partition is kappa = (gamma - 1 + s) / 2 and the shape vector
    is alpha_k = gamma_(N+1-k) + k - 1, strictly increasing by construction.
    """

    gamma: Partition
    nvars: int

    def __post_init__(self):
        g = as_partition(self.gamma)
        object.__setattr__(self, "gamma", g)
        if self.nvars < 1:
            raise ValueError("nvars must be at least 1")
        if len(g) > self.nvars:
            raise ValueError(f"gamma {g} has more parts than {self.nvars} variables")
        padded = g + (0,) * (self.nvars - len(g))
        parities = {p % 2 for p in padded}
        if len(parities) > 1:
            raise ValueError(
                f"gamma parts must share a parity once padded with zeros: {padded}"
            )

    @property
    def padded(self) -> tuple[int, ...]:
        return self.gamma + (0,) * (self.nvars - len(self.gamma))

    @property
    def s(self) -> int:
        """1 when all (padded) parts are even, 0 when all are odd."""
        return 1 - self.padded[0] % 2

    def kappa(self) -> Partition:
        return as_partition(tuple((g - 1 + self.s) // 2 for g in self.padded))

    def alphas(self) -> tuple[int, ...]:
        padded = self.padded
        n = self.nvars
        return tuple(padded[n - k] + k - 1 for k in range(1, n + 1))
