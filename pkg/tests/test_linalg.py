import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quality_option.errors import NotPositiveDefiniteError
from quality_option.linalg import cholesky, equicorrelation, nearest_psd_clip


@pytest.mark.parametrize("n", [1, 2, 5, 50])
def test_identity(n):
    L = cholesky(np.eye(n))
    assert np.array_equal(L, np.eye(n))


def test_two_by_two():
    L = cholesky([[1, 0.95], [0.95, 1]])
    np.testing.assert_allclose(L, [[1, 0], [0.95, np.sqrt(1 - 0.95**2)]], atol=1e-15)
    assert L[1, 1] == pytest.approx(0.312250, abs=5e-7)
    np.testing.assert_allclose(L @ L.T, [[1, 0.95], [0.95, 1]], atol=1e-15)


def test_not_psd_reports_minor():
    with pytest.raises(NotPositiveDefiniteError) as exc:
        cholesky([[1, 1.5], [1.5, 1]])
    assert exc.value.minor == 2


def test_equicorrelated_negative_fails_at_third_minor():
    with pytest.raises(NotPositiveDefiniteError) as exc:
        cholesky(equicorrelation(3, -0.9))
    assert exc.value.minor == 3


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        cholesky([[1, 0.5], [0.4, 1]])


def test_boyle_sizes_reconstruct():
    for n in (2, 10, 50):
        for rho in (0.95, 0.995):
            c = equicorrelation(n, rho)
            L = cholesky(c)
            assert np.abs(L @ L.T - c).max() <= 1e-10
            assert np.all(np.triu(L, 1) == 0) and np.all(np.diag(L) > 0)


def _random_corr(rng, n):
    a = rng.standard_normal((n, n + 2))
    cov = a @ a.T
    d = 1 / np.sqrt(np.diag(cov))
    c = cov * np.outer(d, d)
    c = (c + c.T) / 2
    np.fill_diagonal(c, 1.0)
    return c


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_reconstruction_property(n, seed):
    c = _random_corr(np.random.default_rng(seed), n)
    L = cholesky(c)
    assert np.abs(L @ L.T - c).max() <= 1e-10
    np.testing.assert_allclose(L, np.linalg.cholesky(c), atol=1e-10)


def test_clip_fixed_point():
    c = equicorrelation(4, 0.3)
    np.testing.assert_allclose(nearest_psd_clip(c), c, atol=1e-10)
    assert np.array_equal(nearest_psd_clip(np.eye(3)), np.eye(3))


def test_clip_repairs_negative_equicorrelation():
    c = equicorrelation(3, -0.9)
    assert np.linalg.eigvalsh(c).min() == pytest.approx(1 - 1.8)
    fixed = nearest_psd_clip(c)
    np.testing.assert_allclose(np.diag(fixed), 1.0, atol=1e-15)
    np.testing.assert_allclose(fixed, fixed.T, atol=0)
    # eigen-decomposition oracle: repaired matrix is positive definite
    assert np.linalg.eigvalsh(fixed).min() > 0
    L = cholesky(fixed)
    assert np.abs(L @ L.T - fixed).max() <= 1e-10


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_clip_output_factors(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1, 1, (n, n))
    c = (a + a.T) / 2
    np.fill_diagonal(c, 1.0)
    fixed = nearest_psd_clip(c)
    assert np.allclose(np.diag(fixed), 1.0)
    cholesky(fixed)
