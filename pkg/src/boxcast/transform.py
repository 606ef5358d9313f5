"""Differencing, integration and lag-polynomial expansion."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DomainError, InsufficientDataError

SEASON = 12
MAX_D = 2
MAX_DS = 1


@dataclass(frozen=True)
class DifferencedSeries:
    """A differenced series plus the leading original values it consumed.

    ``heads`` has ``d + 12 * ds`` elements: the first original values, which
    together with ``values`` determine the original series exactly.
    """

    values: np.ndarray = field(repr=False)
    d: int
    ds: int
    heads: np.ndarray = field(repr=False)

    @property
    def lag_depth(self) -> int:
        return self.d + SEASON * self.ds


def _check_orders(d: int, ds: int) -> None:
    if d not in (0, 1, 2):
        raise DomainError(f"d must be 0, 1 or 2, got {d}")
    if ds not in (0, 1):
        raise DomainError(f"seasonal d must be 0 or 1, got {ds}")


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def difference(series, d: int) -> DifferencedSeries:
    """Apply ``d`` non-seasonal differences (d in 0, 1, 2)."""
    _check_orders(d, 0)
    y = np.asarray(series, dtype=float)
    if y.size <= d:
        raise InsufficientDataError(f"need more than {d} values to difference {d} time(s)")
    return DifferencedSeries(_frozen(np.diff(y, n=d) if d else y), d, 0, _frozen(y[:d]))


def seasonal_difference(series, ds: int, period: int = SEASON) -> DifferencedSeries:
    """Apply ``ds`` lag-``period`` differences, ``Y_t - Y_{t-period}``."""
    if period != SEASON:
        raise DomainError(f"only period {SEASON} is supported")
    _check_orders(0, ds)
    y = np.asarray(series, dtype=float)
    lag = period * ds
    if y.size <= lag:
        raise InsufficientDataError(f"need more than {lag} values for seasonal differencing")
    values = y[lag:] - y[:-lag] if lag else y
    return DifferencedSeries(_frozen(values), 0, ds, _frozen(y[:lag]))


def difference_full(series, d: int, ds: int = 0) -> DifferencedSeries:
    """Seasonal difference first, then ``d`` ordinary differences."""
    _check_orders(d, ds)
    y = np.asarray(series, dtype=float)
    depth = d + SEASON * ds
    if y.size <= depth:
        raise InsufficientDataError(
            f"need more than {depth} values for d={d}, seasonal d={ds}")
    w = seasonal_difference(y, ds).values
    w = np.diff(w, n=d) if d else w
    return DifferencedSeries(_frozen(w), d, ds, _frozen(y[:depth]))


def expand_ar_operator(phi, d: int, ds: int = 0) -> np.ndarray:
    """Coefficients ``c`` with ``phi(B) (1-B)^d (1-B^12)^ds = 1 - sum c_i B^i``.

    The result has length ``p + d + 12*ds``; ``c[i-1]`` multiplies ``Y_{t-i}``.
    """
    _check_orders(d, ds)
    poly = np.concatenate(([1.0], -np.asarray(phi, dtype=float)))
    for _ in range(d):
        poly = np.convolve(poly, [1.0, -1.0])
    if ds:
        seasonal = np.zeros(SEASON + 1)
        seasonal[0], seasonal[SEASON] = 1.0, -1.0
        poly = np.convolve(poly, seasonal)
    return -poly[1:]


def continue_series(history, future_diffs, d: int, ds: int = 0) -> np.ndarray:
    """Original-scale values that follow ``history`` given future differences.

    ``history`` needs at least ``d + 12*ds`` trailing values.
    """
    c = expand_ar_operator((), d, ds)
    m = c.size
    history = np.asarray(history, dtype=float)
    if history.size < m:
        raise ContractError(f"history of length {history.size} is shorter than lag depth {m}")
    future = np.asarray(future_diffs, dtype=float)
    buf = np.concatenate((history[history.size - m:], np.empty(future.size)))
    for k, w in enumerate(future):
        t = m + k
        buf[t] = w + sum(c[i] * buf[t - 1 - i] for i in range(m))
    return buf[m:]


def integrate(diffed: DifferencedSeries, future_diffs=()) -> np.ndarray:
    """Undo differencing.

    Rebuilds the original series from ``diffed.heads`` and ``diffed.values``
    and then extends it with ``future_diffs``; the returned array covers the
    whole original range followed by the continuation.
    """
    _check_orders(diffed.d, diffed.ds)
    heads = np.asarray(diffed.heads, dtype=float)
    if heads.size != diffed.lag_depth:
        raise ContractError(
            f"{heads.size} head value(s) stored, d={diffed.d} seasonal d={diffed.ds} "
            f"needs {diffed.lag_depth}")
    diffs = np.concatenate((np.asarray(diffed.values, dtype=float),
                            np.asarray(future_diffs, dtype=float)))
    if heads.size == 0:
        return diffs
    return np.concatenate((heads, continue_series(heads, diffs, diffed.d, diffed.ds)))
