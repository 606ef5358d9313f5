"""Fit statistics, the Ljung-Box test, order selection and backtesting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    BoxcastError,
    DegenerateSeriesError,
    DomainError,
    InsufficientDataError,
    NoModelError,
)
from .estimate import FittedModel, ModelOrder, fit, fit_ses, fitted_values
from .forecast import ForecastTable, forecast_intervals
from .ingest import Month, MonthlySeries
from .special import chi_square_sf
from .transform import DifferencedSeries

DEFAULT_LAGS = 18
MIN_TRAIN_MONTHS = 24


def acf(x, max_lag: int) -> np.ndarray:
    """Sample autocorrelations at lags 1..max_lag (lag 0 is 1 and omitted)."""
    x = np.asarray(x, dtype=float)
    if x.size <= max_lag:
        raise InsufficientDataError(f"need more than {max_lag} observations")
    dev = x - x.mean()
    denom = float(dev @ dev)
    if denom <= 0.0:
        raise DegenerateSeriesError("autocorrelation undefined for a constant series")
    n = x.size
    return np.array([dev[k:] @ dev[:n - k] for k in range(1, max_lag + 1)]) / denom


class LjungBoxResult(NamedTuple):
    q_stat: float
    df: int
    sig: float
    lags: int


def ljung_box(residuals, lags: int = DEFAULT_LAGS, fitted_param_count: int = 0) -> LjungBoxResult:
    """Portmanteau statistic ``n(n+2) sum rho_k^2 / (n-k)`` against chi-square.

    A constant residual series carries no autocorrelation evidence and gives
    ``Q = 0``.
    """
    df = lags - fitted_param_count
    if df < 1:
        raise DomainError(f"{lags} lags with {fitted_param_count} fitted parameters leave df={df}")
    e = np.asarray(residuals, dtype=float)
    n = e.size
    if n <= lags:
        raise InsufficientDataError(f"need more than {lags} residuals, have {n}")
    try:
        rho = acf(e, lags)
    except DegenerateSeriesError:
        return LjungBoxResult(0.0, df, 1.0, lags)
    k = np.arange(1, lags + 1)
    q = float(n * (n + 2) * np.sum(rho * rho / (n - k)))
    return LjungBoxResult(q, df, chi_square_sf(q, df), lags)


def r_squared(actual, fitted) -> float:
    """``1 - SSE / SST`` on the scale of ``actual``; may be negative."""
    y = np.asarray(actual.values if isinstance(actual, MonthlySeries) else actual, dtype=float)
    f = np.asarray(fitted, dtype=float)
    if y.shape != f.shape:
        raise DomainError(f"length mismatch: {y.size} observations, {f.size} fitted values")
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst <= 0.0:
        raise DegenerateSeriesError("R-squared undefined for a constant series")
    return 1.0 - float(np.sum((y - f) ** 2)) / sst


def stationary_r_squared(diffed: DifferencedSeries, residuals) -> float:
    """R-squared against the mean model on the differenced scale.

    Only the trailing ``len(residuals)`` differenced values are used.
    """
    e = np.asarray(residuals, dtype=float)
    w = np.asarray(diffed.values, dtype=float)
    if e.size > w.size:
        raise DomainError(f"{e.size} residuals for {w.size} differenced values")
    w = w[w.size - e.size:]
    sst = float(np.sum((w - w.mean()) ** 2))
    if sst <= 0.0:
        raise DegenerateSeriesError("stationary R-squared undefined: differenced series is constant")
    return 1.0 - float(np.sum(e * e)) / sst


def _mape(actual: np.ndarray, predicted: np.ndarray) -> float:
    mask = actual != 0
    if not mask.any():
        return float("nan")
    return float(np.mean(np.abs((actual[mask] - predicted[mask]) / actual[mask])) * 100.0)


@dataclass(frozen=True)
class FitStatistics:
    r_squared: float
    stationary_r_squared: float
    ljung_box: LjungBoxResult
    rmse: float
    mape: float


def fit_statistics(model: FittedModel, series: MonthlySeries, lags: int = DEFAULT_LAGS) -> FitStatistics:
    offset, fitted = fitted_values(model, series)
    actual = series.values[offset:]
    e = model.residuals
    return FitStatistics(
        r_squared=r_squared(actual, fitted),
        stationary_r_squared=stationary_r_squared(model.diffed, e),
        ljung_box=ljung_box(e, lags, model.order.p + model.order.q),
        rmse=float(np.sqrt(np.mean(e * e))),
        mape=_mape(actual, fitted),
    )


def ses_statistics(series: MonthlySeries, lags: int = DEFAULT_LAGS) -> tuple[float, FitStatistics]:
    """Smoothing weight and fit statistics of the SES baseline.

    The stationary R-squared compares the one-step errors with the mean model
    of the first differences; Ljung-Box counts one fitted parameter.
    """
    ses = fit_ses(series)
    actual = series.values[1:]
    e = actual - ses.fitted
    diffs = np.diff(series.values)
    sst = float(np.sum((diffs - diffs.mean()) ** 2))
    stat_r2 = 1.0 - float(e @ e) / sst if sst > 0 else float("nan")
    stats = FitStatistics(
        r_squared=r_squared(actual, ses.fitted),
        stationary_r_squared=stat_r2,
        ljung_box=ljung_box(e, lags, 1),
        rmse=float(np.sqrt(np.mean(e * e))),
        mape=_mape(actual, ses.fitted),
    )
    return ses.alpha, stats


def bic(model: FittedModel, n_common: Optional[int] = None) -> float:
    """``n ln(loss / n) + k ln n`` with ``k = p + q + 1``; loss/n is floored at 1e-12.

    With ``n_common`` only the last ``n_common`` residuals enter the loss, so
    that models with different differencing or AR depth are scored on the
    same months. Residuals equal one-step errors on the original scale for
    every order, which keeps the comparison like for like.
    """
    if n_common is None:
        n, loss = model.n_effective, model.loss
    else:
        if not 1 <= n_common <= model.n_effective:
            raise DomainError(f"n_common={n_common} outside 1..{model.n_effective}")
        tail = model.residuals[model.n_effective - n_common:]
        n, loss = n_common, float(tail @ tail)
    return n * math.log(max(loss / n, 1e-12)) + model.order.n_params * math.log(n)


class Candidate(NamedTuple):
    order: ModelOrder
    bic: float
    r_squared: float
    model: FittedModel


class OrderSelection(NamedTuple):
    best: ModelOrder
    ranked: list
    skipped: list


def _rank_key(c: Candidate):
    o = c.order
    return (c.bic, o.n_params, o.q, o.p, o.d, o.ds)


def candidate_orders(p_max: int = 3, d_max: int = 2, q_max: int = 3,
                     ds_options: Sequence[int] = (0, 1)) -> list[ModelOrder]:
    return [ModelOrder(p, d, q, ds) for ds, d, p, q in
            product(sorted(set(ds_options)), range(d_max + 1), range(p_max + 1), range(q_max + 1))]


def select_order(series, p_max: int = 3, d_max: int = 2, q_max: int = 3,
                 ds_options: Sequence[int] = (0, 1),
                 orders: Optional[Sequence[ModelOrder]] = None) -> OrderSelection:
    """Fit every candidate order and rank by BIC.

    BIC is evaluated on the trailing window that every fitted candidate has
    residuals for (see :func:`bic`). Ties go to fewer parameters, then lower
    q, then lower p. Candidates that cannot be fitted are returned in
    ``skipped`` as ``(order, reason)``.
    """
    values = series.values if isinstance(series, MonthlySeries) else np.asarray(series, float)
    grid = list(orders) if orders is not None else candidate_orders(p_max, d_max, q_max, ds_options)
    models, skipped = [], []
    for order in grid:
        try:
            models.append(fit(values, order))
        except BoxcastError as exc:
            skipped.append((order, str(exc)))
    if not models:
        reasons = "; ".join(f"{o}: {r}" for o, r in skipped[:3])
        raise NoModelError(f"no candidate order could be fitted ({reasons})")
    n_common = min(m.n_effective for m in models)
    ranked = []
    for model in models:
        offset, fitted = fitted_values(model, values)
        try:
            r2 = r_squared(values[offset:], fitted)
        except DegenerateSeriesError:
            r2 = float("nan")
        ranked.append(Candidate(model.order, bic(model, n_common), r2, model))
    ranked.sort(key=_rank_key)
    return OrderSelection(ranked[0].order, ranked, skipped)


@dataclass(frozen=True)
class BacktestResult:
    coverage_pct: float
    mape: float
    within_20pct: float
    table: ForecastTable
    actual: np.ndarray
    order: ModelOrder


def backtest(series: MonthlySeries, train_end: Month, order: Optional[ModelOrder] = None,
             level: float = 0.95) -> BacktestResult:
    """Fit on months up to ``train_end`` and score forecasts of the rest.

    Without an explicit order the order is selected by BIC on the training
    window only.
    """
    n_train = series.month_index(train_end) + 1
    if n_train < MIN_TRAIN_MONTHS:
        raise InsufficientDataError(
            f"training window has {max(n_train, 0)} months, need at least {MIN_TRAIN_MONTHS}")
    if n_train >= len(series):
        raise InsufficientDataError(f"no holdout months after {train_end}")
    train = series.window(series.start, train_end)
    actual = series.values[n_train:]
    if order is None:
        selection = select_order(train)
        order, model = selection.best, selection.ranked[0].model
    else:
        model = fit(train, order)
    table = forecast_intervals(model, train, actual.size, level)
    f, ucl, lcl = table.column("forecast"), table.column("ucl"), table.column("lcl")
    covered = (actual >= lcl) & (actual <= ucl)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(actual - f) / np.abs(actual)
    within = np.where(actual != 0, rel <= 0.20, actual == f)
    return BacktestResult(
        coverage_pct=float(covered.mean() * 100.0),
        mape=_mape(actual, f),
        within_20pct=float(within.mean() * 100.0),
        table=table,
        actual=actual,
        order=order,
    )
