"""Command-line front end: ``calibrate``, ``price``, ``boyle`` and ``batch``.

Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
0 success, 1 ``boyle`` validation failure, 2 input/data error,
3 numerical error (correlation matrix not positive definite).
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import sys

import numpy as np

from . import calibration, market_data, mc_engine, pricer
from .errors import NotPositiveDefiniteError, QualityOptionError
from .linalg import cholesky, equicorrelation, nearest_psd_clip

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

BOYLE_TOLERANCE_PCT = 0.5
BATCH_HEADER = ("date", "futures_price", "option_value", "option_pct_of_futures", "error")


class UsageError(QualityOptionError):
    pass


def _date(text):
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _alt(text):
    name, sep, disc = text.rpartition(":")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected ASSET:DISCOUNT, got {text!r}")
    try:
        return name, float(disc)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad discount in {text!r}") from None


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


def year_fraction(start, end):
    """Actual calendar days / 365."""
    return (end - start).days / 365.0


def _sim_config(args):
    if args.paths < 2:
        raise UsageError("--paths must be at least 2")
    return mc_engine.SimConfig.from_paths(args.paths, seed=args.seed, workers=args.threads)


def _basket(args, asset_ids):
    """Build a Basket in ``asset_ids`` order from --par/--alt."""
    par = args.par if args.par is not None else asset_ids[0]
    alts = dict(args.alt or [])
    if not alts and args.par is None:
        alts = {a: 0.0 for a in asset_ids[1:]}
    wanted = [par, *alts]
    missing = [a for a in wanted if a not in asset_ids]
    if missing:
        raise UsageError(f"unknown asset(s) in basket: {', '.join(missing)}")
    if par in alts:
        raise UsageError(f"{par} is both the par asset and an alternative")
    discounts = [0.0 if a == par else alts[a] for a in wanted]
    return mc_engine.Basket(wanted, discounts, par_index=0)


def _subset(vc, ids):
    idx = [vc.asset_ids.index(a) for a in ids]
    return calibration.VolCorr(ids, vc.vols[idx], vc.corr[np.ix_(idx, idx)])


def _factorable(vc, repair):
    try:
        cholesky(vc.corr)
        return vc
    except NotPositiveDefiniteError as exc:
        if not repair:
            raise
        print(f"repairing correlation matrix: {exc}", file=sys.stderr)
        return calibration.VolCorr(vc.asset_ids, vc.vols, nearest_psd_clip(vc.corr))


def _load_window(path, valuation_date, n_obs):
    series = market_data.read_price_csv(path)
    window = market_data.lookback_window(market_data.align(series), valuation_date, n_obs)
    if window.short:
        print(f"warning: only {len(window.dates)} observations before {valuation_date}",
              file=sys.stderr)
    return window


def cmd_calibrate(args):
    window = _load_window(args.prices, args.valuation_date, args.n_obs)
    vc = calibration.calibrate(window, args.periods_per_year)
    print(vc.to_json())
    return EXIT_OK


def _explicit_market(args):
    if args.spots is None or args.vols is None or args.corr is None:
        raise UsageError("explicit pricing needs --spots, --vols and --corr (or use --prices)")
    n = len(args.spots)
    if len(args.vols) != n:
        raise UsageError("--spots and --vols differ in length")
    ids = args.asset_ids.split(",") if args.asset_ids else [f"A{i}" for i in range(n)]
    if len(ids) != n:
        raise UsageError("--asset-ids does not match --spots")
    corr = json.loads(args.corr)
    corr = equicorrelation(n, corr) if np.isscalar(corr) else np.asarray(corr, dtype=float)
    return ids, np.asarray(args.spots), calibration.VolCorr(ids, args.vols, corr)


def _tau(args, valuation_date):
    if args.tau is not None:
        return args.tau
    if args.expiry is None or valuation_date is None:
        raise UsageError("give --tau, or --expiry together with --valuation-date")
    if not args.expiry > valuation_date:
        raise UsageError("expiry must be after the valuation date")
    return year_fraction(valuation_date, args.expiry)


def cmd_price(args):
    cfg = _sim_config(args)
    if args.prices:
        if args.valuation_date is None:
            raise UsageError("--prices requires --valuation-date")
        window = _load_window(args.prices, args.valuation_date, args.n_obs)
        vc = calibration.calibrate(window, args.periods_per_year)
        ids, spots = list(window.asset_ids), window.last_prices
    else:
        ids, spots, vc = _explicit_market(args)
    basket = _basket(args, ids)
    idx = [ids.index(a) for a in basket.asset_ids]
    vc = _factorable(_subset(vc, list(basket.asset_ids)), args.repair_corr)
    state = mc_engine.MarketState(spots[idx], _tau(args, args.valuation_date), args.rate)
    report = pricer.value_quality_option(state, vc, basket, cfg, args.futures_price)
    if args.output == "csv":
        d = report.to_dict()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(d.keys())
        w.writerow(["" if v is None else v for v in d.values()])
        sys.stdout.write(buf.getvalue())
    else:
        print(report.to_json())
    return EXIT_OK


def cmd_boyle(args):
    cfg = _sim_config(args)
    rows = pricer.boyle_table(cfg)
    if args.output == "json":
        print(json.dumps([{k: getattr(r, k) for k in pricer.BOYLE_CSV_HEADER} for r in rows],
                         indent=2))
    else:
        sys.stdout.write(pricer.boyle_csv(rows))
    bad = [r for r in rows if abs(r.relative_error_pct) > BOYLE_TOLERANCE_PCT]
    for r in bad:
        print(f"n={r.n} rho={r.rho}: relative error {r.relative_error_pct:+.3f}% "
              f"exceeds {BOYLE_TOLERANCE_PCT}%", file=sys.stderr)
    return EXIT_VALIDATION if bad else EXIT_OK


def read_futures_csv(path):
    """``date,price`` rows into a dict keyed by date."""
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["date", "price"]:
            raise market_data.ParseError("expected header date,price", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                out[dt.date.fromisoformat(row[0].strip())] = float(row[1])
            except (ValueError, IndexError):
                raise market_data.ParseError(f"bad row {row!r}", line=lineno) from None
    return out


def _parse_dates(args):
    dates = []
    for chunk in args.dates or []:
        dates.extend(_date(x.strip()) for x in chunk.split(",") if x.strip())
    if args.dates_file:
        with open(args.dates_file, encoding="utf-8") as fh:
            dates.extend(_date(line.strip()) for line in fh if line.strip())
    if not dates:
        raise UsageError("no valuation dates given (--dates or --dates-file)")
    return dates


def batch_rows(aligned, futures, basket, rate, expiry, dates, n_obs, cfg,
               periods_per_year=calibration.TRADING_DAYS, repair=False):
    """Value the option on each date; failures become error rows.

    Duplicate dates are valued again rather than dropped.
    """
    ids = list(aligned.asset_ids)
    idx = [ids.index(a) for a in basket.asset_ids]
    rows = []
    for day in dates:
        fut = futures.get(day)
        row = {"date": day.isoformat(), "futures_price": fut, "option_value": None,
               "option_pct_of_futures": None, "error": ""}
        try:
            if not expiry > day:
                raise UsageError(f"expiry {expiry} is not after {day}")
            window = market_data.lookback_window(aligned, day, n_obs)
            vc = calibration.calibrate(window, periods_per_year)
            vc = _factorable(_subset(vc, list(basket.asset_ids)), repair)
            state = mc_engine.MarketState(window.last_prices[idx], year_fraction(day, expiry), rate)
            rep = pricer.value_quality_option(state, vc, basket, cfg, fut)
            row["option_value"] = rep.direct.value
            row["option_pct_of_futures"] = rep.ratio_pct
            if fut is None:
                row["error"] = "no futures price"
        except (QualityOptionError, NotPositiveDefiniteError) as exc:
            row["error"] = str(exc)
        rows.append(row)
    return rows


def _fmt(v, digits):
    return "" if v is None else f"{v:.{digits}f}"


def cmd_batch(args):
    cfg = _sim_config(args)
    aligned = market_data.align(market_data.read_price_csv(args.prices))
    futures = read_futures_csv(args.futures)
    basket = _basket(args, list(aligned.asset_ids))
    rows = batch_rows(aligned, futures, basket, args.rate, args.expiry, _parse_dates(args),
                      args.n_obs, cfg, args.periods_per_year, args.repair_corr)
    if args.output == "json":
        print(json.dumps(rows, indent=2))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BATCH_HEADER)
        for r in rows:
            w.writerow([r["date"], _fmt(r["futures_price"], 2), _fmt(r["option_value"], 4),
                        _fmt(r["option_pct_of_futures"], 4), r["error"]])
        sys.stdout.write(buf.getvalue())
    for r in rows:
        if r["error"]:
            print(f"{r['date']}: {r['error']}", file=sys.stderr)
    ok = any(r["option_value"] is not None for r in rows)
    return EXIT_OK if ok else EXIT_INPUT


def _add_sim(p, output="json"):
    p.add_argument("--paths", type=int, default=100_000, help="total paths (default 100000)")
    p.add_argument("--seed", type=int, default=mc_engine.SimConfig.seed)
    p.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    p.add_argument("--output", choices=("json", "csv"), default=output)


def _add_data(p):
    p.add_argument("--n-obs", type=int, default=30, help="lookback observations (default 30)")
    p.add_argument("--periods-per-year", type=int, default=calibration.TRADING_DAYS)


def _add_basket(p):
    p.add_argument("--par", help="par asset id")
    p.add_argument("--alt", type=_alt, action="append", metavar="ASSET:DISCOUNT",
                   help="alternative deliverable and its discount; repeatable")
    p.add_argument("--rate", type=float, required=True, help="continuously compounded rate")
    p.add_argument("--repair-corr", action="store_true",
                   help="clip a non positive-definite correlation matrix instead of failing")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quality-option",
        description="Monte Carlo valuation of the quality option in delivery-settled futures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="estimate vols and correlations from a price file")
    p.add_argument("prices", help="CSV with header date,asset_id,price")
    p.add_argument("--valuation-date", type=_date, required=True)
    _add_data(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("price", help="value the quality option once")
    p.add_argument("--prices", help="price CSV; calibrates inline")
    p.add_argument("--valuation-date", type=_date)
    p.add_argument("--spots", type=_floats)
    p.add_argument("--vols", type=_floats)
    p.add_argument("--corr", help="JSON matrix or a scalar for equicorrelation")
    p.add_argument("--asset-ids", help="comma-separated ids for explicit parameters")
    p.add_argument("--tau", type=float, help="time to expiry in years")
    p.add_argument("--expiry", type=_date)
    p.add_argument("--futures-price", type=float, help="market futures price for ratio_pct")
    _add_basket(p)
    _add_data(p)
    _add_sim(p)
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("boyle", help="reproduce Boyle's equicorrelated table")
    _add_sim(p, output="csv")
    p.set_defaults(func=cmd_boyle)

    p = sub.add_parser("batch", help="value the option on a list of dates")
    p.add_argument("--prices", required=True)
    p.add_argument("--futures", required=True, help="CSV with header date,price")
    p.add_argument("--expiry", type=_date, required=True)
    p.add_argument("--dates", action="append", help="comma-separated ISO dates; repeatable")
    p.add_argument("--dates-file")
    _add_basket(p)
    _add_data(p)
    _add_sim(p, output="csv")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except NotPositiveDefiniteError as exc:
        print(f"error: {exc} (use --repair-corr to clip)", file=sys.stderr)
        return EXIT_NUMERIC
    except (QualityOptionError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
