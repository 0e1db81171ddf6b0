"""Monte Carlo valuation of the quality (cheapest-to-deliver) option
embedded in delivery-settled commodity futures."""

from .calibration import VolCorr, annualized_vol, calibrate, correlation_matrix, log_returns
from .errors import (
    DegenerateInputError,
    DomainError,
    DuplicateError,
    InsufficientDataError,
    InvalidBasketError,
    NotPositiveDefiniteError,
    ParseError,
    QualityOptionError,
)
from .linalg import cholesky, equicorrelation, nearest_psd_clip
from .market_data import AlignedWindow, PriceSeries, align, lookback_window, parse_price_csv
from .mc_engine import (
    Basket,
    MarketState,
    PricingResult,
    SimConfig,
    estimate,
    normal_stream,
    payoff,
    terminal_prices,
)
from .pricer import (
    ValuationReport,
    boyle_table,
    futures_with_option_mc,
    futures_without_option,
    quadrature_oracle_2asset,
    value_quality_option,
)

__version__ = "0.1.0"
