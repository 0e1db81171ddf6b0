import datetime as dt

import numpy as np
import pytest

from quality_option import data


@pytest.fixture
def cash_csv():
    return str(data.path(data.CASH))


@pytest.fixture
def futures_csv():
    return str(data.path(data.FUTURES))


def business_days(start, n):
    days = np.busday_offset(start, np.arange(n), roll="forward")
    return [dt.date.fromisoformat(str(d)) for d in days]


def gbm_prices(rng, n_obs, vols, corr, spot=100.0, dt_=1 / 252):
    """Daily GBM closes with the given annual vols/correlation (zero drift)."""
    vols = np.asarray(vols, dtype=float)
    L = np.linalg.cholesky(np.asarray(corr, dtype=float))
    z = rng.standard_normal((n_obs - 1, len(vols))) @ L.T
    steps = vols * np.sqrt(dt_) * z
    return spot * np.exp(np.vstack([np.zeros(len(vols)), np.cumsum(steps, axis=0)]))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
