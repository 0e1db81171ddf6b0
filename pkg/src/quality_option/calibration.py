"""Volatility and correlation estimates from a window of historical prices."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InsufficientDataError

TRADING_DAYS = 252


@dataclass(frozen=True)
class VolCorr:
    """Annualized volatilities and the correlation matrix of log returns."""

    asset_ids: tuple
    vols: np.ndarray
    corr: np.ndarray

    def __post_init__(self):
        vols = np.atleast_1d(np.asarray(self.vols, dtype=float))
        corr = np.atleast_2d(np.asarray(self.corr, dtype=float))
        object.__setattr__(self, "asset_ids", tuple(self.asset_ids))
        object.__setattr__(self, "vols", vols)
        object.__setattr__(self, "corr", corr)
        n = vols.shape[0]
        if len(self.asset_ids) != n or corr.shape != (n, n):
            raise ValueError("asset_ids, vols and corr dimensions disagree")
        if np.any(vols < 0) or not np.all(np.isfinite(vols)):
            raise ValueError("volatilities must be finite and non-negative")
        if not np.allclose(corr, corr.T, rtol=0, atol=1e-12):
            raise ValueError("correlation matrix must be symmetric")
        if not np.allclose(np.diag(corr), 1.0, rtol=0, atol=1e-12):
            raise ValueError("correlation matrix must have unit diagonal")
        if np.any(np.abs(corr) > 1 + 1e-12):
            raise ValueError("correlations must lie in [-1, 1]")

    @property
    def n(self):
        return self.vols.shape[0]

    def to_dict(self):
        return {
            "asset_ids": list(self.asset_ids),
            "vols": self.vols.tolist(),
            "corr": self.corr.tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(d["asset_ids"], d["vols"], d["corr"])


def log_returns(window):
    """``ln(P[k+1] / P[k])`` for every consecutive pair of rows."""
    prices = window.prices if hasattr(window, "prices") else np.asarray(window, dtype=float)
    if prices.shape[0] < 2:
        raise InsufficientDataError("need at least 2 price rows for a return")
    return np.diff(np.log(prices), axis=0)


def annualized_vol(returns, periods_per_year=TRADING_DAYS):
    """Sample standard deviation (``k - 1`` divisor) scaled by ``sqrt(periods_per_year)``.

    Works column-wise on a 2-D array.
    """
    returns = np.asarray(returns, dtype=float)
    if returns.shape[0] < 2:
        raise InsufficientDataError(
            f"need at least 2 returns for a volatility, got {returns.shape[0]}"
        )
    return np.std(returns, axis=0, ddof=1) * np.sqrt(periods_per_year)


def correlation_matrix(returns, asset_ids=None):
    """Pearson correlation of the columns of ``returns``.

    Raises
    ------
    DegenerateInputError
        If a column has zero variance; the offending asset is named.
    """
    returns = np.asarray(returns, dtype=float)
    if returns.ndim == 1:
        returns = returns[:, None]
    k, n = returns.shape
    if k < 2:
        raise InsufficientDataError(f"need at least 2 returns for a correlation, got {k}")
    if asset_ids is None:
        asset_ids = [str(j) for j in range(n)]
    centered = returns - returns.mean(axis=0)
    ss = np.einsum("ij,ij->j", centered, centered)
    for j in range(n):
        # constant-to-rounding columns leave ss at ~1e-30 rather than exactly 0
        scale = np.abs(returns[:, j]).max()
        if ss[j] <= (1e-14 * scale) ** 2 * k:
            raise DegenerateInputError(
                f"asset {asset_ids[j]!s} has zero return variance", asset_id=asset_ids[j]
            )
    norm = np.sqrt(ss)
    corr = (centered.T @ centered) / np.outer(norm, norm)
    corr = np.clip((corr + corr.T) / 2, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def calibrate(window, periods_per_year=TRADING_DAYS):
    """Estimate a :class:`VolCorr` from an aligned price window."""
    rets = log_returns(window)
    vols = annualized_vol(rets, periods_per_year)
    corr = correlation_matrix(rets, window.asset_ids)
    return VolCorr(window.asset_ids, vols, corr)
