"""Samplers for Gaussian matrices with parameter-dependent structure.

Two constructions share one shape-parameter vector ``alpha``: a square upper
triangular matrix whose diagonal carries Gamma-distributed squares, and a
rectangular Gaussian matrix with a staircase zero pattern (the latter needs
non-negative integer parameters satisfying an ordering constraint).  Both
lead to the same distribution for the Gram matrix W = Y* Y.  Derived maps:
Gram matrix, correlation rescaling, and two-sided congruence by a lower
triangular factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import Field, RngStream, _gamma_unit_rate, _gaussian

__all__ = [
    "AlphaMode",
    "AlphaSpec",
    "MBParams",
    "mb_alpha",
    "zero_pattern",
    "sample_triangular",
    "sample_patterned",
    "gram",
    "correlation",
    "l_transform",
]


class AlphaMode(Enum):
    """Validity regime of a shape-parameter vector."""

    GENERAL = "general"          # real entries, each > -1
    ORDERED = "ordered"          # non-negative integers, staircase-compatible


@dataclass(frozen=True)
class AlphaSpec:
    """Shape parameters for the samplers, validated on construction.

    GENERAL mode only requires every entry to exceed -1.  ORDERED mode
    additionally requires non-negative integers with k + alpha_k
    non-decreasing in k (1-based) and N + alpha_N <= n, where n is the row
    count of the rectangular construction.
    """

    alphas: tuple[float, ...]
    mode: AlphaMode = AlphaMode.GENERAL
    n: int | None = None

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if len(alphas) == 0:
            raise ValueError("alpha vector must be non-empty")
        for i, a in enumerate(alphas):
            if not a > -1.0:
                raise ValueError(
                    f"alpha[{i + 1}] = {a} is not > -1 (1-based index {i + 1})"
                )
        if self.mode is AlphaMode.ORDERED:
            if self.n is None:
                raise ValueError("ordered mode requires the row count n")
            for i, a in enumerate(alphas):
                if a < 0 or not float(a).is_integer():
                    raise ValueError(
                        f"ordered mode needs non-negative integers; "
                        f"alpha[{i + 1}] = {a}"
                    )
            k_plus = [k + 1 + alphas[k] for k in range(len(alphas))]
            for k in range(1, len(alphas)):
                if k_plus[k] < k_plus[k - 1]:
                    raise ValueError(
                        f"ordering violated at index {k + 1}: "
                        f"{k + 1}+alpha[{k + 1}]={k_plus[k]:g} < "
                        f"{k}+alpha[{k}]={k_plus[k - 1]:g}"
                    )
            if k_plus[-1] > self.n:
                raise ValueError(
                    f"row count too small: N+alpha[N]={k_plus[-1]:g} > n={self.n}"
                )
        elif self.n is not None:
            if self.n < len(alphas):
                raise ValueError("row count n must be at least the column count")

    @classmethod
    def general(cls, alphas) -> "AlphaSpec":
        return cls(tuple(alphas), AlphaMode.GENERAL, None)

    @classmethod
    def ordered(cls, alphas, n: int) -> "AlphaSpec":
        return cls(tuple(alphas), AlphaMode.ORDERED, int(n))

    @property
    def dim(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class MBParams:
    """Linear shape-parameter profile alpha_k = theta*(k-1) + c."""

    theta: float
    c: float
    dim: int

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("theta must be non-negative")
        if not self.c > -1:
            raise ValueError("c must be > -1")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")


def mb_alpha(params: MBParams) -> AlphaSpec:
    """Shape vector of the linear profile.

    When theta and c are non-negative integers the ordering constraint holds
    automatically and the result is an ORDERED spec with the minimal row
    count n = N + alpha_N; otherwise a GENERAL spec.
    """
    alphas = tuple(params.theta * k + params.c for k in range(params.dim))
    integral = (
        float(params.theta).is_integer()
        and float(params.c).is_integer()
        and params.c >= 0
    )
    if integral:
        ints = tuple(int(round(a)) for a in alphas)
        return AlphaSpec.ordered(ints, n=params.dim + ints[-1])
    return AlphaSpec.general(alphas)


def zero_pattern(alpha: AlphaSpec) -> np.ndarray:
    """Boolean (n, N) mask of structurally zero entries, True = forced zero.

    Entry (j, k) is forced to zero iff j > k + alpha_k with 1-based indices.
    """
    if alpha.mode is not AlphaMode.ORDERED:
        raise ValueError("zero_pattern requires an ordered integer AlphaSpec")
    n, nn = alpha.n, alpha.dim
    rows = np.arange(1, n + 1)[:, None]
    cols = np.arange(1, nn + 1)[None, :]
    a = np.asarray(alpha.alphas)[None, :]
    return rows > cols + a


def sample_triangular(
    stream: RngStream, alpha: AlphaSpec, field: Field, reps: int | None = None
) -> np.ndarray:
    """Upper triangular N x N samples.

    Strictly upper entries are standard Gaussians of the field.  Diagonal
    entry k is the positive square root of a Gamma variate: shape
    (alpha_k+1)/2 and rate 1/2 in the real case, shape alpha_k+1 and rate 1
    in the complex case.  Draw order is fixed (strict upper block first,
    then the diagonal by column), so output is reproducible per stream.
    """
    field = Field.parse(field)
    gen = stream.generator()
    nn = alpha.dim
    r = 1 if reps is None else int(reps)
    y = np.zeros((r, nn, nn), dtype=field.dtype)
    iu = np.triu_indices(nn, k=1)
    if iu[0].size:
        y[:, iu[0], iu[1]] = _gaussian(gen, field, (r, iu[0].size))
    for k, a in enumerate(alpha.alphas):
        if field is Field.REAL:
            sq = _gamma_unit_rate(gen, (a + 1.0) / 2.0, r) * 2.0
        else:
            sq = _gamma_unit_rate(gen, a + 1.0, r)
        y[:, k, k] = np.sqrt(sq)
    return y[0] if reps is None else y


def sample_patterned(
    stream: RngStream, alpha: AlphaSpec, field: Field, reps: int | None = None
) -> np.ndarray:
    """Rectangular n x N Gaussian samples with the staircase zero pattern.

    Requires an ORDERED spec.  Free entries are standard Gaussians of the
    field, filled in a fixed row-major order over the free positions.
    """
    field = Field.parse(field)
    if alpha.mode is not AlphaMode.ORDERED:
        raise ValueError(
            "patterned sampling requires ordered integer parameters with a row count"
        )
    gen = stream.generator()
    mask = zero_pattern(alpha)
    n, nn = mask.shape
    r = 1 if reps is None else int(reps)
    y = np.zeros((r, n, nn), dtype=field.dtype)
    free = np.nonzero(~mask)
    y[:, free[0], free[1]] = _gaussian(gen, field, (r, free[0].size))
    return y[0] if reps is None else y


def gram(y: np.ndarray) -> np.ndarray:
    """Gram matrix W = Y* Y, exactly self-adjoint (stacks allowed)."""
    y = np.asarray(y)
    yh = np.conj(np.swapaxes(y, -1, -2))
    w = yh @ y
    return (w + np.conj(np.swapaxes(w, -1, -2))) * 0.5


def correlation(w: np.ndarray) -> np.ndarray:
    """Rescale a positive definite matrix to unit diagonal (stacks allowed).

    C = D^(-1/2) W D^(-1/2) with D the diagonal part; the diagonal of the
    result is set to exactly one.
    """
    w = np.asarray(w)
    d = np.real(np.diagonal(w, axis1=-2, axis2=-1))
    if np.any(d <= 0):
        idx = int(np.argwhere(d <= 0)[0][-1])
        raise ValueError(
            f"correlation undefined: non-positive diagonal entry at index {idx + 1}"
        )
    s = 1.0 / np.sqrt(d)
    c = w * s[..., :, None] * s[..., None, :]
    n = w.shape[-1]
    c[..., np.arange(n), np.arange(n)] = 1.0
    return c


def l_transform(w: np.ndarray, ell: np.ndarray) -> np.ndarray:
    """Two-sided congruence X = L W L* by a lower triangular invertible L."""
    w = np.asarray(w)
    ell = np.asarray(ell)
    if ell.ndim != 2 or ell.shape[0] != ell.shape[1]:
        raise ValueError("L must be a square matrix")
    if ell.shape[0] != w.shape[-1]:
        raise ValueError("L must match the size of W")
    if np.any(np.triu(ell, k=1) != 0):
        raise ValueError("L must be lower triangular")
    if np.any(np.diagonal(ell) == 0):
        raise ValueError("L must be invertible (zero diagonal entry found)")
    x = ell @ w @ np.conj(ell.T)
    return (x + np.conj(np.swapaxes(x, -1, -2))) * 0.5
