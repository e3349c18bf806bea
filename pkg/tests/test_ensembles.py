import numpy as np
import pytest

from genwishart.ensembles import (
    AlphaMode,
    AlphaSpec,
    MBParams,
    correlation,
    gram,
    l_transform,
    mb_alpha,
    sample_patterned,
    sample_triangular,
    zero_pattern,
)
from genwishart.linalg import Field, RngStream


def test_alpha_spec_general_validation():
    spec = AlphaSpec.general((-0.5, 2.0))
    assert spec.mode is AlphaMode.GENERAL
    with pytest.raises(ValueError, match=r"alpha\[1\]"):
        AlphaSpec.general((-1.0, 2.0))
    with pytest.raises(ValueError):
        AlphaSpec.general(())


def test_alpha_spec_ordered_validation():
    spec = AlphaSpec.ordered((0, 2), n=4)
    assert spec.n == 4 and spec.dim == 2
    with pytest.raises(ValueError, match="index 2"):
        AlphaSpec.ordered((3, 0), n=5)
    with pytest.raises(ValueError, match="row count"):
        AlphaSpec.ordered((0, 2), n=3)
    with pytest.raises(ValueError, match="integers"):
        AlphaSpec.ordered((0.5, 2), n=4)


def test_mb_alpha_profiles():
    spec = mb_alpha(MBParams(theta=1.0, c=0.0, dim=3))
    assert spec.alphas == (0.0, 1.0, 2.0)
    assert spec.mode is AlphaMode.ORDERED and spec.n == 5
    frac = mb_alpha(MBParams(theta=0.5, c=0.25, dim=3))
    assert frac.mode is AlphaMode.GENERAL
    assert frac.alphas == (0.25, 0.75, 1.25)
    with pytest.raises(ValueError):
        MBParams(theta=-1.0, c=0.0, dim=2)
    with pytest.raises(ValueError):
        MBParams(theta=1.0, c=-1.0, dim=2)


def test_zero_pattern_staircase():
    mask = zero_pattern(AlphaSpec.ordered((0, 2), n=4))
    # column 1: zero below row 1; column 2: no forced zeros (2 + 2 = 4)
    expected = np.array(
        [
            [False, False],
            [True, False],
            [True, False],
            [True, False],
        ]
    )
    np.testing.assert_array_equal(mask, expected)
    with pytest.raises(ValueError):
        zero_pattern(AlphaSpec.general((0.5, 2.0)))


@pytest.mark.parametrize("field", [Field.REAL, Field.COMPLEX])
def test_sample_triangular_structure(field):
    spec = AlphaSpec.general((0.5, 2.0, 4.0))
    y = sample_triangular(RngStream(1), spec, field, reps=8)
    assert y.shape == (8, 3, 3)
    assert y.dtype == field.dtype
    tril = np.tril_indices(3, k=-1)
    assert np.all(y[:, tril[0], tril[1]] == 0)
    assert np.all(np.real(y[:, np.arange(3), np.arange(3)]) > 0)
    single = sample_triangular(RngStream(1), spec, field)
    np.testing.assert_array_equal(single, y[0])


def test_sample_triangular_diag_law():
    # diagonal squares are Gamma((a+1)/2, 1/2) in the real case: mean a+1
    spec = AlphaSpec.general((3.0,))
    y = sample_triangular(RngStream(2), spec, Field.REAL, reps=200_000)
    d2 = y[:, 0, 0] ** 2
    assert abs(np.mean(d2) - 4.0) < 0.05
    assert abs(np.var(d2) - 8.0) < 0.3


def test_sample_patterned_zeros_and_mode():
    spec = AlphaSpec.ordered((0, 2), n=4)
    y = sample_patterned(RngStream(3), spec, Field.COMPLEX, reps=5)
    assert y.shape == (5, 4, 2)
    mask = zero_pattern(spec)
    assert np.all(y[:, mask] == 0)
    assert np.all(y[:, ~mask] != 0)
    with pytest.raises(ValueError, match="ordered"):
        sample_patterned(RngStream(3), AlphaSpec.general((0.5,)), Field.REAL)


def test_gram_self_adjoint_exact():
    y = sample_patterned(RngStream(4), AlphaSpec.ordered((1, 2), n=4), Field.COMPLEX, reps=6)
    w = gram(y)
    np.testing.assert_array_equal(w, np.conj(np.swapaxes(w, -1, -2)))
    np.testing.assert_allclose(
        w, np.conj(np.swapaxes(y, -1, -2)) @ y, atol=1e-12
    )


def test_triangular_trace_mean():
    # E tr W = sum(alpha + 1) + (strict upper count), either field
    spec = AlphaSpec.general((1.0, 2.5, 0.0))
    for field in (Field.REAL, Field.COMPLEX):
        w = gram(sample_triangular(RngStream(5), spec, field, reps=100_000))
        tr = np.real(np.trace(w, axis1=-2, axis2=-1))
        expected = (1.0 + 1 + 2.5 + 1 + 0.0 + 1) + 3.0
        assert abs(np.mean(tr) - expected) < 4 * np.std(tr) / np.sqrt(tr.size)


def test_patterned_full_trace_mean():
    # no forced zeros at alpha = (N-1, ..., 0), n = N: E tr W = n*N
    spec = AlphaSpec.ordered((2, 1, 0), n=3)
    w = gram(sample_patterned(RngStream(6), spec, Field.COMPLEX, reps=100_000))
    tr = np.real(np.trace(w, axis1=-2, axis2=-1))
    assert abs(np.mean(tr) - 9.0) < 4 * np.std(tr) / np.sqrt(tr.size)


def test_correlation_unit_diagonal_exact():
    w = gram(sample_triangular(RngStream(7), AlphaSpec.general((1.0, 3.0)), Field.REAL, reps=50))
    c = correlation(w)
    assert np.all(np.diagonal(c, axis1=-2, axis2=-1) == 1.0)
    np.testing.assert_array_equal(c, np.swapaxes(c, -1, -2))


def test_correlation_rejects_nonpositive_diagonal():
    with pytest.raises(ValueError, match="index 2"):
        correlation(np.diag([1.0, 0.0]))


def test_l_transform_matches_direct_product():
    gen = np.random.default_rng(8)
    w = gram(sample_triangular(RngStream(9), AlphaSpec.general((1.0, 0.0, 2.0)), Field.COMPLEX, reps=4))
    ell = np.tril(gen.standard_normal((3, 3))) + np.diag([1.0, 2.0, 0.5])
    x = l_transform(w, ell)
    np.testing.assert_allclose(x, ell @ w @ np.conj(ell.T), atol=1e-12)
    np.testing.assert_array_equal(x, np.conj(np.swapaxes(x, -1, -2)))


def test_l_transform_validation():
    w = np.eye(2)
    with pytest.raises(ValueError, match="lower triangular"):
        l_transform(w, np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError, match="invertible"):
        l_transform(w, np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="square"):
        l_transform(w, np.ones((2, 3)))
    with pytest.raises(ValueError, match="size"):
        l_transform(w, np.eye(3))


def test_triangular_vs_patterned_same_alpha_close_means():
    # quick smoke agreement on E tr W; the full check lives in verify
    spec = AlphaSpec.ordered((0, 2), n=4)
    wt = gram(sample_triangular(RngStream(10), spec, Field.REAL, reps=50_000))
    wp = gram(sample_patterned(RngStream(11), spec, Field.REAL, reps=50_000))
    tt = np.trace(wt, axis1=-2, axis2=-1)
    tp = np.trace(wp, axis1=-2, axis2=-1)
    se = np.hypot(np.std(tt) / np.sqrt(tt.size), np.std(tp) / np.sqrt(tp.size))
    assert abs(np.mean(tt) - np.mean(tp)) < 5 * se
