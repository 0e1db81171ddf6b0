"""Bundled synthetic datasets.

``synthetic_cash.csv`` holds 90 business days of raw cash prices for three
delivery centres (DELHI par, BIKANER and INDORE alternatives) and
``synthetic_futures.csv`` the matching futures quotes. Both are generated by
``demos/make_synthetic_data.py`` and are not market data.
"""

from importlib.resources import files

CASH = "synthetic_cash.csv"
FUTURES = "synthetic_futures.csv"


def path(name):
    return files(__name__) / name
