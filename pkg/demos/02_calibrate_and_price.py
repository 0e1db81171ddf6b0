"""
From a cash-price file to a quality-option value
================================================

The bundled synthetic file mimics three chana delivery centres. Delhi is
the par asset; Bikaner and Indore deliver at discounts of 70 and 19.
"""

import datetime as dt

from quality_option import (
    Basket,
    MarketState,
    SimConfig,
    align,
    calibrate,
    lookback_window,
    value_quality_option,
)
from quality_option import data
from quality_option.market_data import read_price_csv

series = read_price_csv(data.path(data.CASH))
window = align(series)
print(window.asset_ids, len(window.dates), "common dates")

# %%
# Thirty observations strictly before the valuation date drive the
# volatility and correlation estimates (log returns, 252 per year).

valuation = dt.date(2014, 6, 2)
expiry = dt.date(2014, 8, 20)
lookback = lookback_window(window, valuation, n_obs=30)
vc = calibrate(lookback)
print("vols", vc.vols.round(4))
print("corr\n", vc.corr.round(3))

# %%
# The previous close is the starting price for each centre. The report
# carries both the direct estimate and the futures-with/without route.

state = MarketState(lookback.last_prices, (expiry - valuation).days / 365, 0.075)
basket = Basket(("DELHI", "BIKANER", "INDORE"), [0.0, 70.0, 19.0])
report = value_quality_option(state, vc, basket, SimConfig(), market_futures_price=2913.0)
print(report.to_json())
