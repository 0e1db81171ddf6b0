"""Historical cash-price ingestion, cross-asset alignment and lookback windows.

CSV files carry one observation per row with the header ``date,asset_id,price``.
Prices are taken raw; delivery discounts are applied later by the pricer.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    DuplicateError,
    InsufficientDataError,
    ParseError,
)

CSV_HEADER = ("date", "asset_id", "price")


@dataclass(frozen=True)
class PriceSeries:
    """Dated close prices for a single deliverable asset."""

    asset_id: str
    dates: tuple
    prices: np.ndarray

    def __post_init__(self):
        prices = np.asarray(self.prices, dtype=float)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", prices)
        if len(self.dates) != prices.shape[0] or prices.ndim != 1:
            raise ValueError("dates and prices must have the same length")
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise ValueError(f"{self.asset_id}: dates must be strictly increasing")
        if np.any(~(prices > 0)):
            raise DomainError(f"{self.asset_id}: prices must be positive")

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True)
class AlignedWindow:
    """Prices of several assets on a shared date grid.

    ``prices`` is ``(m, n)``: one row per date, one column per asset in
    ``asset_ids`` order. ``short`` is set when a lookback request could not
    be filled completely.
    """

    asset_ids: tuple
    dates: tuple
    prices: np.ndarray
    short: bool = field(default=False)

    def __post_init__(self):
        prices = np.atleast_2d(np.asarray(self.prices, dtype=float))
        object.__setattr__(self, "asset_ids", tuple(self.asset_ids))
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", prices)
        if prices.shape != (len(self.dates), len(self.asset_ids)):
            raise ValueError(
                f"prices shape {prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.asset_ids)} assets"
            )
        if len(self.dates) < 2:
            raise InsufficientDataError("an aligned window needs at least 2 dates")

    @property
    def last_prices(self):
        """Closing prices on the final date of the window."""
        return self.prices[-1].copy()

    def series(self):
        return [
            PriceSeries(a, self.dates, self.prices[:, j])
            for j, a in enumerate(self.asset_ids)
        ]


def _parse_date(text, line):
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise ParseError(f"malformed date {text!r}", line=line) from None


def parse_price_csv(text):
    """Parse ``date,asset_id,price`` rows into one series per asset.

    Parameters
    ----------
    text : str or file-like
        CSV content. A header row is required.

    Returns
    -------
    list of PriceSeries
        In order of first appearance of each ``asset_id``, each sorted by date.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, header required", line=1) from None
    if tuple(h.strip().lower() for h in header) != CSV_HEADER:
        raise ParseError(f"expected header {','.join(CSV_HEADER)}", line=1)

    rows = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=lineno)
        day = _parse_date(row[0], lineno)
        asset = row[1].strip()
        if not asset:
            raise ParseError("empty asset_id", line=lineno)
        try:
            price = float(row[2])
        except ValueError:
            raise ParseError(f"malformed price {row[2]!r}", line=lineno) from None
        if not np.isfinite(price) or price <= 0:
            raise DomainError(f"line {lineno}: price must be positive, got {row[2].strip()}")
        obs = rows.setdefault(asset, {})
        if day in obs:
            raise DuplicateError(f"line {lineno}: duplicate observation for {asset} on {day}")
        obs[day] = price

    out = []
    for asset, obs in rows.items():
        days = sorted(obs)
        out.append(PriceSeries(asset, days, [obs[d] for d in days]))
    return out


def format_price_csv(series):
    """Serialize series back to the ``date,asset_id,price`` format.

    ``repr`` of the float keeps the round trip exact.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in series:
        for day, price in zip(s.dates, s.prices):
            writer.writerow([day.isoformat(), s.asset_id, repr(float(price))])
    return buf.getvalue()


def read_price_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_price_csv(fh)


def align(series):
    """Restrict every series to the dates they all share.

    Column order follows the input order.
    """
    series = list(series)
    if not series:
        raise ValueError("align needs at least one series")
    common = set(series[0].dates)
    for s in series[1:]:
        common &= set(s.dates)
    dates = sorted(common)
    if len(dates) < 2:
        raise InsufficientDataError(
            f"only {len(dates)} common date(s) across {len(series)} series; need 2"
        )
    cols = []
    for s in series:
        lookup = dict(zip(s.dates, s.prices))
        cols.append([lookup[d] for d in dates])
    return AlignedWindow(
        tuple(s.asset_id for s in series), tuple(dates), np.array(cols).T
    )


def lookback_window(window, valuation_date, n_obs=30):
    """Last ``n_obs`` rows dated strictly before ``valuation_date``.

    Observations are counted as rows, not calendar days. When fewer rows
    qualify, all of them are returned with ``short=True``.
    """
    if n_obs < 2:
        raise ValueError("n_obs must be at least 2")
    if isinstance(valuation_date, str):
        valuation_date = dt.date.fromisoformat(valuation_date)
    end = int(np.searchsorted(np.array(window.dates, dtype="datetime64[D]"),
                              np.datetime64(valuation_date, "D"), side="left"))
    if end < 2:
        raise InsufficientDataError(
            f"{end} observation(s) before {valuation_date}; need at least 2"
        )
    start = max(0, end - n_obs)
    return AlignedWindow(
        window.asset_ids,
        window.dates[start:end],
        window.prices[start:end],
        short=(end - start) < n_obs,
    )
