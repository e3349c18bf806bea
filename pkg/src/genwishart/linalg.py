"""Field-generic dense matrix kernels.

Seeded Gaussian and Gamma sampling, Haar-distributed orthogonal/unitary
matrices, self-adjoint spectra, and leading principal minors.  Every sampler
is a pure function of an explicit :class:`RngStream`, so runs reproduce
bit-for-bit and per-sample fan-out across workers is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Field",
    "RngStream",
    "gaussian",
    "gamma_draw",
    "haar_matrix",
    "eigvals_self_adjoint",
    "leading_minor_dets",
    "leading_minors_stacked",
]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Gram spectra may pick up tiny negative rounding; anything above this
# relative level is treated as a genuine negative eigenvalue.
GRAM_CLAMP_REL = 1e-10


class Field(Enum):
    """Scalar field of an ensemble; fixes dtype and Gaussian convention."""

    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.float64) if self is Field.REAL else np.dtype(np.complex128)

    @classmethod
    def parse(cls, value) -> "Field":
        if isinstance(value, Field):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown field {value!r}; expected 'real' or 'complex'"
            ) from None


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream addressed by (master_seed, stream_index).

    The same pair always reproduces the same draw sequence; distinct pairs
    give statistically independent sequences.  ``substream`` derives further
    independent streams for per-sample or per-check fan-out, and the result
    does not depend on how work is chunked across workers as long as draws
    are consumed in index order.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < 2**64):
            raise ValueError("master_seed must fit in 64 bits")
        if not (0 <= int(self.stream_index) < 2**64):
            raise ValueError("stream_index must fit in 64 bits")

    def _seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.Generator(np.random.PCG64(self._seed_sequence()))

    def substream(self, index: int) -> "RngStream":
        """Derive an independent child stream for sub-task ``index``."""
        ss = np.random.SeedSequence(
            self.master_seed, spawn_key=(self.stream_index, int(index))
        )
        derived = int(ss.generate_state(1, np.uint64)[0])
        return RngStream(self.master_seed, derived)


def _gaussian(gen: np.random.Generator, field: Field, size=None):
    """Standard Gaussians from an existing generator.

    Real: mean 0, variance 1.  Complex: independent real and imaginary parts
    of variance 1/2 each, so E|z|^2 = 1.
    """
    if field is Field.REAL:
        return gen.standard_normal(size)
    re = gen.standard_normal(size)
    im = gen.standard_normal(size)
    return (re + 1j * im) * _INV_SQRT2


def gaussian(stream: RngStream, field: Field, size=None):
    """Standard Gaussian scalars or arrays drawn from ``stream``."""
    return _gaussian(stream.generator(), Field.parse(field), size)


def _gamma_unit_rate(gen: np.random.Generator, shape: float, n: int) -> np.ndarray:
    """n Gamma(shape, rate=1) variates via the Marsaglia-Tsang method.

    Shapes below one use the boost identity G(a) = G(a+1) * U^(1/a).
    """
    boost = None
    a = float(shape)
    if a < 1.0:
        boost = gen.random(n) ** (1.0 / a)
        a = a + 1.0
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = n - filled
        x = gen.standard_normal(m)
        v = (1.0 + c * x) ** 3
        u = gen.random(m)
        ok = v > 0
        # exact acceptance test; the squeeze shortcut is subsumed by it
        with np.errstate(divide="ignore", invalid="ignore"):
            ok &= np.log(u) < 0.5 * x * x + d * (1.0 - v + np.log(np.where(v > 0, v, 1.0)))
        accepted = d * v[ok]
        out[filled : filled + accepted.size] = accepted
        filled += accepted.size
    if boost is not None:
        out = out * boost
    return out


def gamma_draw(stream: RngStream, shape: float, rate: float, size=None):
    """Gamma(shape, rate) variates, density x^(shape-1) e^(-rate x)."""
    if not (shape > 0):
        raise ValueError(f"gamma shape must be positive, got {shape}")
    if not (rate > 0):
        raise ValueError(f"gamma rate must be positive, got {rate}")
    gen = stream.generator()
    scalar = size is None
    n = 1 if scalar else int(np.prod(size))
    out = _gamma_unit_rate(gen, shape, n) / rate
    return float(out[0]) if scalar else out.reshape(size)


def _haar(gen: np.random.Generator, n: int, field: Field, reps=None) -> np.ndarray:
    shape = (n, n) if reps is None else (int(reps), n, n)
    z = _gaussian(gen, field, shape)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    # fix the QR phase ambiguity so the factor is Haar distributed
    q = q * (d / np.abs(d))[..., None, :]
    return q


def haar_matrix(stream: RngStream, n: int, field: Field, reps=None) -> np.ndarray:
    """Haar orthogonal (real) or unitary (complex) matrices.

    QR of a Gaussian matrix with the R diagonal normalized to be positive.
    With ``reps`` set, returns a stacked (reps, n, n) array.
    """
    if n < 1:
        raise ValueError("matrix size must be at least 1")
    return _haar(stream.generator(), n, Field.parse(field), reps)


def eigvals_self_adjoint(m: np.ndarray, nonneg: bool = False) -> np.ndarray:
    """Ascending real spectrum of a self-adjoint matrix (stacks allowed).

    The input is symmetrized first, so tiny rounding asymmetry is harmless.
    With ``nonneg`` (for Gram-matrix spectra) eigenvalues above -1e-10 times
    the spectral scale are clamped to zero.
    """
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    h = (m + np.conj(np.swapaxes(m, -1, -2))) * 0.5
    w = np.linalg.eigvalsh(h)
    if nonneg:
        scale = np.max(np.abs(w), axis=-1, keepdims=True)
        tiny = (w < 0) & (w >= -GRAM_CLAMP_REL * scale)
        w = np.where(tiny, 0.0, w)
    return w


def leading_minor_dets(m: np.ndarray) -> np.ndarray:
    """Determinants of all leading principal blocks of a square matrix.

    One Gaussian elimination sweep without pivoting: det of the leading
    i x i block is the product of the first i pivots, so the cost is a
    single O(n^3) pass.  A zero pivot (degenerate input) falls back to
    direct determinants per block, which still returns finite answers.
    """
    a = np.array(m, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.inexact):
        a = a.astype(np.float64)
    n = a.shape[0]
    dets = np.empty(n, dtype=a.dtype)
    running = a.dtype.type(1)
    for k in range(n):
        piv = a[k, k]
        if piv == 0:
            src = np.asarray(m)
            return np.array(
                [np.linalg.det(src[: i + 1, : i + 1]) for i in range(n)]
            )
        running = running * piv
        dets[k] = running
        if k + 1 < n:
            f = a[k + 1 :, k] / piv
            a[k + 1 :, k:] -= np.outer(f, a[k, k:])
    return dets


def leading_minors_stacked(w: np.ndarray) -> np.ndarray:
    """Leading principal minors for a stack of square matrices.

    Returns an array shaped like the stack with a trailing axis of length n,
    entry i holding det of the leading (i+1) x (i+1) block.  Used by the
    Monte Carlo paths where per-sample elimination would be slow.
    """
    w = np.asarray(w)
    n = w.shape[-1]
    return np.stack(
        [np.linalg.det(w[..., : i + 1, : i + 1]) for i in range(n)], axis=-1
    )
