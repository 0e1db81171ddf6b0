"""Monte Carlo valuation of the quality option.

Terminal prices are drawn in a single exact lognormal step under the
risk-neutral measure. Correlation is induced with the Cholesky factor of
the correlation matrix and every draw ``z`` is paired with ``-z``.

Randomness is organised in chunks. Column ``j`` of chunk ``k`` of a run
with seed ``s`` is a Philox (counter-based) stream keyed by ``(s, k, j)``,
mapped to normals by the inverse normal CDF, so row ``i`` of a chunk never
depends on how many rows were requested. Chunks can therefore be evaluated by any number of
workers and reduced in chunk order with bit-identical results.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .errors import InvalidBasketError
from .linalg import cholesky

_HALF_ULP = 2.0**-54


@dataclass(frozen=True)
class MarketState:
    """Spot prices, time to expiry (years) and continuously compounded rate."""

    spot: np.ndarray
    tau: float
    rate: float

    def __post_init__(self):
        spot = np.atleast_1d(np.asarray(self.spot, dtype=float))
        object.__setattr__(self, "spot", spot)
        if np.any(~(spot > 0)):
            raise ValueError("spot prices must be positive")
        if not self.tau > 0:
            raise ValueError("time to expiry must be positive")
        if not np.isfinite(self.rate):
            raise ValueError("rate must be finite")

    @property
    def n(self):
        return self.spot.shape[0]


@dataclass(frozen=True)
class Basket:
    """Deliverable assets: one par asset and its alternatives.

    ``discounts[i]`` is the currency penalty for delivering asset ``i``
    instead of the par asset; the par entry must be zero.
    """

    asset_ids: tuple
    discounts: np.ndarray
    par_index: int = 0

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.discounts, dtype=float))
        object.__setattr__(self, "asset_ids", tuple(self.asset_ids))
        object.__setattr__(self, "discounts", d)
        n = d.shape[0]
        if len(self.asset_ids) != n:
            raise InvalidBasketError("asset_ids and discounts differ in length")
        if n < 2:
            raise InvalidBasketError("a basket needs the par asset and at least one alternative")
        if not 0 <= self.par_index < n:
            raise InvalidBasketError(f"par_index {self.par_index} out of range")
        if d[self.par_index] != 0:
            raise InvalidBasketError("the par asset carries no discount")
        if not np.all(np.isfinite(d)):
            raise InvalidBasketError("discounts must be finite")

    @property
    def n(self):
        return self.discounts.shape[0]

    @classmethod
    def from_discounts(cls, discounts, par_index=0, asset_ids=None):
        discounts = list(discounts)
        if asset_ids is None:
            asset_ids = [f"A{i}" for i in range(len(discounts))]
        return cls(asset_ids, discounts, par_index)


@dataclass(frozen=True)
class SimConfig:
    """Simulation budget and reproducibility controls.

    ``n_pairs`` antithetic pairs give ``2 * n_pairs`` paths. ``chunk_size``
    is the number of normal draws per substream; with antithetics each
    draw produces two paths. ``workers`` never changes the result.
    """

    n_pairs: int = 50_000
    seed: int = 20140820
    chunk_size: int = 4096
    workers: int = 1
    antithetic: bool = True

    def __post_init__(self):
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def n_paths(self):
        return 2 * self.n_pairs

    @classmethod
    def from_paths(cls, n_paths, **kwargs):
        """Config for a total path budget (rounded up to an even count)."""
        return cls(n_pairs=max(1, (int(n_paths) + 1) // 2), **kwargs)


@dataclass(frozen=True)
class PricingResult:
    """Monte Carlo estimate and its diagnostics.

    ``f_wo`` is the analytic futures price without the option;
    ``f_wo_estimate`` and ``f_w_estimate`` are the sample means of the par
    terminal price and of the cheapest delivery-adjusted terminal price over
    the same paths as ``value``.
    """

    value: float
    std_error: float
    f_wo: float
    f_w_estimate: float
    f_wo_estimate: float
    n_paths: int
    seed: int
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self):
        return {
            "value": self.value,
            "std_error": self.std_error,
            "f_wo": self.f_wo,
            "f_w_estimate": self.f_w_estimate,
            "f_wo_estimate": self.f_wo_estimate,
            "n_paths": self.n_paths,
            "seed": self.seed,
            "elapsed": self.elapsed,
        }


def normal_stream(seed, chunk_index, chunk_size, dim):
    """Standard normals for substream ``chunk_index`` of ``seed``.

    Column ``j`` is a Philox stream keyed by ``(seed, chunk_index, j)``;
    uniforms are shifted by half an ulp into the open interval (0, 1)
    before the inverse CDF is applied. Requesting fewer rows returns a
    prefix of a larger request and requesting more columns leaves the
    existing ones untouched, so adding an asset keeps common random numbers
    for the others. Chunks 0 and 1 are independent streams, not a split of
    one double-size chunk.
    """
    u = np.empty((int(chunk_size), int(dim)))
    for j in range(int(dim)):
        ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(chunk_index), j))
        u[:, j] = np.random.Generator(np.random.Philox(ss)).random(int(chunk_size))
    u += _HALF_ULP
    return ndtri(u)


def terminal_prices(state, vc, L, z):
    """Exact risk-neutral lognormal terminal prices.

    ``z`` may be a single ``n``-vector or an ``(m, n)`` array of draws.
    """
    vols = vc.vols if hasattr(vc, "vols") else np.asarray(vc, dtype=float)
    z = np.asarray(z, dtype=float)
    tau = state.tau
    drift = (state.rate - 0.5 * vols**2) * tau
    shock = z @ np.asarray(L).T
    return state.spot * np.exp(drift + vols * np.sqrt(tau) * shock)


def _check_dims(basket, n):
    if basket.n != n:
        raise InvalidBasketError(f"basket has {basket.n} assets, prices have {n}")


def delivery_adjusted(terminal, basket):
    return np.asarray(terminal, dtype=float) + basket.discounts


def payoff(terminal, basket):
    """Short's payoff ``max(S_par - min_alt(S_i + d_i), 0)``.

    Vectorised over leading axes of ``terminal``.
    """
    terminal = np.asarray(terminal, dtype=float)
    if terminal.shape[-1] < 2:
        raise InvalidBasketError("payoff needs at least two deliverable assets")
    _check_dims(basket, terminal.shape[-1])
    adj = delivery_adjusted(terminal, basket)
    par = terminal[..., basket.par_index]
    alts = np.delete(adj, basket.par_index, axis=-1)
    return np.maximum(par - alts.min(axis=-1), 0.0)


def cheapest_to_deliver(terminal, basket):
    """``min`` over every deliverable of its delivery-adjusted terminal price.

    This is the per-path value of the futures with the embedded option.
    """
    _check_dims(basket, np.shape(terminal)[-1])
    return delivery_adjusted(terminal, basket).min(axis=-1)


@dataclass(frozen=True)
class Moments:
    """Count, mean and sum of squared deviations of one sample statistic."""

    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, x):
        mean = float(np.mean(x))
        return cls(x.shape[0], mean, float(np.sum((x - mean) ** 2)))

    def merge(self, other):
        n = self.count + other.count
        delta = other.mean - self.mean
        return Moments(
            n,
            self.mean + delta * other.count / n,
            self.m2 + other.m2 + delta * delta * self.count * other.count / n,
        )

    @property
    def std_error(self):
        if self.count < 2:
            return 0.0
        return float(np.sqrt(self.m2 / (self.count - 1) / self.count))


@dataclass(frozen=True)
class Simulation:
    """Reduced statistics of one path set.

    Each sample is an antithetic pair average (or a single path when
    antithetics are off). The per-sample arrays are only kept on request.
    """

    payoff: Moments
    cheapest: Moments
    par: Moments
    elapsed: float
    samples: dict | None = None


def _chunk_bounds(total, chunk_size):
    return [(k, min(chunk_size, total - k * chunk_size))
            for k in range(-(-total // chunk_size))]


def _run_chunk(state, vols, L, basket, cfg, k, rows):
    z = normal_stream(cfg.seed, k, rows, state.n)
    up = terminal_prices(state, vols, L, z)
    pay = payoff(up, basket)
    cheap = cheapest_to_deliver(up, basket)
    par = up[:, basket.par_index]
    if cfg.antithetic:
        dn = terminal_prices(state, vols, L, -z)
        pay = 0.5 * (pay + payoff(dn, basket))
        cheap = 0.5 * (cheap + cheapest_to_deliver(dn, basket))
        par = 0.5 * (par + dn[:, basket.par_index])
    return pay, cheap, par


def simulate(state, vc, basket, cfg, L=None, keep_samples=False):
    """Run the path set once and reduce it to per-statistic moments.

    With antithetics each sample is the average over a ``(z, -z)`` pair;
    without, ``2 * n_pairs`` independent paths are drawn so both modes
    spend the same path budget. Chunk moments are merged in chunk order,
    which keeps the result independent of ``cfg.workers``.
    """
    _check_dims(basket, state.n)
    vols = vc.vols if hasattr(vc, "vols") else np.asarray(vc, dtype=float)
    if vols.shape[0] != state.n:
        raise ValueError("volatility vector does not match the number of assets")
    if L is None:
        L = cholesky(vc.corr)
    total = cfg.n_pairs if cfg.antithetic else cfg.n_paths
    bounds = _chunk_bounds(total, cfg.chunk_size)
    kept = [] if keep_samples else None

    def work(kb):
        arrays = _run_chunk(state, vols, L, basket, cfg, *kb)
        return arrays if keep_samples else None, tuple(Moments.of(a) for a in arrays)

    t0 = time.perf_counter()
    acc = None
    if cfg.workers == 1 or len(bounds) == 1:
        results = map(work, bounds)
        pool = None
    else:
        pool = ThreadPoolExecutor(max_workers=cfg.workers)
        results = pool.map(work, bounds)
    try:
        for arrays, moments in results:
            acc = moments if acc is None else tuple(a.merge(b) for a, b in zip(acc, moments))
            if kept is not None:
                kept.append(arrays)
    finally:
        if pool is not None:
            pool.shutdown()
    samples = None
    if kept is not None:
        samples = dict(zip(("payoff", "cheapest", "par"),
                           (np.concatenate(c) for c in zip(*kept))))
    return Simulation(*acc, time.perf_counter() - t0, samples)


def result_from_simulation(state, basket, cfg, sim, target="payoff"):
    stat = getattr(sim, target)
    return PricingResult(
        value=stat.mean,
        std_error=stat.std_error,
        f_wo=float(state.spot[basket.par_index] * np.exp(state.rate * state.tau)),
        f_w_estimate=sim.cheapest.mean,
        f_wo_estimate=sim.par.mean,
        n_paths=cfg.n_paths,
        seed=int(cfg.seed),
        elapsed=sim.elapsed,
    )


def estimate(state, vc, basket, cfg=None):
    """Quality-option value as the undiscounted mean terminal payoff.

    The option is embedded in a futures contract, so no discount factor is
    applied. The standard error is computed over antithetic pair averages.
    """
    cfg = cfg or SimConfig()
    return result_from_simulation(state, basket, cfg, simulate(state, vc, basket, cfg))
