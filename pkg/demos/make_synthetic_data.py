"""Regenerate the bundled synthetic cash and futures files.

Three correlated GBM cash series over 90 business days (Mon-Fri) starting
2014-04-01, loosely at chana price levels, plus a futures series at cost of
carry with small noise. Run from the repository root:

    python3 demos/make_synthetic_data.py
"""

from pathlib import Path

import numpy as np

from quality_option import data
from quality_option.linalg import cholesky

rng = np.random.default_rng(2014)
days = np.busday_offset("2014-04-01", np.arange(90), roll="forward")
spot0 = np.array([2800.0, 2750.0, 2690.0])
vols = np.array([0.22, 0.25, 0.20])
corr = np.array([[1.0, 0.85, 0.80], [0.85, 1.0, 0.75], [0.80, 0.75, 1.0]])
dt = 1 / 252

z = rng.standard_normal((len(days) - 1, 3)) @ cholesky(corr).T
steps = -0.5 * vols**2 * dt + vols * np.sqrt(dt) * z
prices = spot0 * np.exp(np.vstack([np.zeros(3), np.cumsum(steps, axis=0)]))

out = Path(str(data.path(data.CASH)))
with open(out, "w") as fh:
    fh.write("date,asset_id,price\n")
    for day, row in zip(days, prices):
        for asset, p in zip(("DELHI", "BIKANER", "INDORE"), row):
            fh.write(f"{day},{asset},{p:.2f}\n")

expiry = np.datetime64("2014-08-20")
tau = (expiry - days).astype(float) / 365
fut = prices[:, 0] * np.exp(0.075 * tau) * np.exp(0.005 * rng.standard_normal(len(days)))
with open(Path(str(data.path(data.FUTURES))), "w") as fh:
    fh.write("date,price\n")
    for day, f in zip(days, fut):
        fh.write(f"{day},{f:.2f}\n")
print(f"wrote {out.parent}")
