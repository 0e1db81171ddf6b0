"""Cholesky factorization of correlation matrices and a spectral PSD repair."""

from __future__ import annotations

import numpy as np

from .errors import NotPositiveDefiniteError

PIVOT_TOL = 1e-12
SYMMETRY_TOL = 1e-12


def cholesky(corr, pivot_tol=PIVOT_TOL):
    """Lower-triangular ``L`` with ``L @ L.T == corr``.

    A plain Cholesky-Banachiewicz sweep; ``n`` is small (tens of assets) so
    the Python loop over rows is not a concern.

    Raises
    ------
    NotPositiveDefiniteError
        When a pivot is ``<= pivot_tol``. The error carries the order of
        the failing leading principal minor.
    """
    a = np.asarray(corr, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=SYMMETRY_TOL):
        raise ValueError("matrix is not symmetric")
    n = a.shape[0]
    L = np.zeros_like(a)
    for i in range(n):
        for j in range(i):
            L[i, j] = (a[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
        pivot = a[i, i] - L[i, :i] @ L[i, :i]
        if not pivot > pivot_tol:
            raise NotPositiveDefiniteError(i + 1, pivot)
        L[i, i] = np.sqrt(pivot)
    return L


def nearest_psd_clip(corr, min_eig=1e-8):
    """Clip eigenvalues to ``min_eig`` and rescale back to a unit diagonal.

    Matrices that are already positive definite (smallest eigenvalue at or
    above ``min_eig``) come back unchanged.
    """
    a = np.asarray(corr, dtype=float)
    a = (a + a.T) / 2
    w, v = np.linalg.eigh(a)
    if w.min() >= min_eig:
        return a.copy()
    b = (v * np.maximum(w, min_eig)) @ v.T
    d = 1 / np.sqrt(np.diag(b))
    b = b * np.outer(d, d)
    b = (b + b.T) / 2
    np.fill_diagonal(b, 1.0)
    return b


def equicorrelation(n, rho):
    """``n x n`` matrix with unit diagonal and ``rho`` everywhere else."""
    m = np.full((n, n), float(rho))
    np.fill_diagonal(m, 1.0)
    return m
