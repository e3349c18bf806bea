import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genwishart.linalg import (
    Field,
    RngStream,
    eigvals_self_adjoint,
    gamma_draw,
    gaussian,
    haar_matrix,
    leading_minor_dets,
    leading_minors_stacked,
)


def test_field_parse():
    assert Field.parse("real") is Field.REAL
    assert Field.parse("complex") is Field.COMPLEX
    assert Field.parse(Field.REAL) is Field.REAL
    with pytest.raises(ValueError):
        Field.parse("quaternion")


def test_stream_reproducible():
    a = gaussian(RngStream(123), Field.REAL, 16)
    b = gaussian(RngStream(123), Field.REAL, 16)
    np.testing.assert_array_equal(a, b)


def test_substreams_differ():
    s = RngStream(123)
    a = gaussian(s.substream(0), Field.REAL, 16)
    b = gaussian(s.substream(1), Field.REAL, 16)
    assert not np.allclose(a, b)


def test_substream_nesting_is_path_dependent():
    s = RngStream(5)
    x = gaussian(s.substream(0).substream(1), Field.REAL, 8)
    y = gaussian(s.substream(1).substream(0), Field.REAL, 8)
    assert not np.allclose(x, y)


def test_seed_bounds():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(2**64)


def test_complex_gaussian_unit_second_moment():
    z = gaussian(RngStream(7), Field.COMPLEX, 200_000)
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 0.01
    assert abs(np.mean(z)) < 0.01


def test_gamma_draw_moments():
    for shape in (0.3, 1.0, 4.5):
        x = gamma_draw(RngStream(11), shape, 2.0, 200_000)
        assert np.all(x > 0)
        assert abs(np.mean(x) - shape / 2.0) < 0.02 * max(shape, 1.0)
        assert abs(np.var(x) - shape / 4.0) < 0.05 * max(shape, 1.0)


def test_gamma_draw_validation():
    with pytest.raises(ValueError):
        gamma_draw(RngStream(0), 0.0, 1.0)
    with pytest.raises(ValueError):
        gamma_draw(RngStream(0), 1.0, -1.0)


def test_gamma_draw_scalar():
    x = gamma_draw(RngStream(3), 2.0, 1.0)
    assert isinstance(x, float) and x > 0


@pytest.mark.parametrize("field", [Field.REAL, Field.COMPLEX])
def test_haar_is_unitary(field):
    u = haar_matrix(RngStream(17), 5, field)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)
    stack = haar_matrix(RngStream(18), 3, field, reps=4)
    assert stack.shape == (4, 3, 3)
    prods = stack @ stack.conj().transpose(0, 2, 1)
    np.testing.assert_allclose(prods, np.broadcast_to(np.eye(3), (4, 3, 3)), atol=1e-12)


@pytest.mark.parametrize("field", [Field.REAL, Field.COMPLEX])
def test_haar_first_entry_moments(field):
    # E|U_11|^2 = 1/n under Haar; E U_11 = 0
    n, reps = 3, 40_000
    u = haar_matrix(RngStream(19), n, field, reps=reps)
    top = u[:, 0, 0]
    assert abs(np.mean(np.abs(top) ** 2) - 1.0 / n) < 0.01
    assert abs(np.mean(top)) < 0.01


def test_eigvals_ascending_and_match_numpy():
    gen = np.random.default_rng(0)
    b = gen.standard_normal((6, 6))
    m = b + b.T
    ours = eigvals_self_adjoint(m)
    np.testing.assert_allclose(ours, np.linalg.eigvalsh(m), atol=1e-12)
    assert np.all(np.diff(ours) >= 0)


def test_eigvals_nonneg_clamps_roundoff():
    # rank-1 Gram matrix has exact zero eigenvalues that roundoff may push
    # slightly negative
    v = np.array([1.0, 1e-8, 2.0])
    m = np.outer(v, v)
    e = eigvals_self_adjoint(m, nonneg=True)
    assert np.all(e >= 0)
    assert abs(e[-1] - np.dot(v, v)) < 1e-12


def test_eigvals_nonneg_keeps_true_negatives():
    with pytest.raises(ValueError):
        eigvals_self_adjoint(np.diag([-1.0, 2.0]), nonneg=True)


def test_leading_minors_match_dets():
    gen = np.random.default_rng(1)
    b = gen.standard_normal((5, 5))
    w = b @ b.T + np.eye(5)
    minors = leading_minor_dets(w)
    expected = [np.linalg.det(w[:k, :k]) for k in range(1, 6)]
    np.testing.assert_allclose(minors, expected, rtol=1e-10)


def test_leading_minors_stacked_matches_loop():
    gen = np.random.default_rng(2)
    b = gen.standard_normal((7, 4, 4))
    w = b @ b.transpose(0, 2, 1) + np.eye(4)
    stacked = leading_minors_stacked(w)
    assert stacked.shape == (7, 4)
    for r in range(7):
        np.testing.assert_allclose(stacked[r], leading_minor_dets(w[r]), rtol=1e-10)


def test_leading_minors_indefinite_matrix():
    # elimination sweep must still be correct when a leading minor vanishes
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    minors = leading_minor_dets(w)
    np.testing.assert_allclose(minors, [0.0, -1.0], atol=1e-14)


@settings(deadline=None, max_examples=30)
@given(
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=0, max_value=10_000),
)
def test_leading_minors_property(n, seed):
    gen = np.random.default_rng(seed)
    b = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    w = b @ b.conj().T + 0.5 * np.eye(n)
    minors = leading_minor_dets(w)
    expected = np.array([np.linalg.det(w[:k, :k]) for k in range(1, n + 1)])
    np.testing.assert_allclose(minors, expected, rtol=1e-8, atol=1e-10)
    # Gram leading minors are strictly positive
    assert np.all(np.real(minors) > 0)


def test_haar_determinism_per_stream():
    u1 = haar_matrix(RngStream(99), 4, Field.COMPLEX, reps=2)
    u2 = haar_matrix(RngStream(99), 4, Field.COMPLEX, reps=2)
    np.testing.assert_array_equal(u1, u2)
