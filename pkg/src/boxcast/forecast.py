"""Point forecasts and confidence limits on the original scale.

The differenced model is rewritten on the original scale as::

    Y_t = mu + sum_i c_i Y_{t-i} + e_t - sum_j theta_j e_{t-j}

where ``c`` expands ``phi(B) (1-B)^d (1-B^12)^ds``. Future innovations are
zero; intervals use the psi-weights of the same expanded operator.
Lower limits are not clamped at zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContractError, DomainError
from .estimate import ArimaParams, FittedModel, ModelOrder
from .ingest import Month, MonthlySeries
from .special import normal_quantile
from .transform import expand_ar_operator


class ForecastRow(NamedTuple):
    month: Month
    forecast: float
    ucl: float
    lcl: float

    @property
    def half_width(self) -> float:
        return self.ucl - self.forecast


@dataclass(frozen=True)
class ForecastTable:
    model_name: str
    level: float
    rows: tuple

    @property
    def months(self) -> list[Month]:
        return [r.month for r in self.rows]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def _check_horizon(h: int) -> None:
    if not isinstance(h, (int, np.integer)) or h < 1:
        raise DomainError(f"horizon must be a positive integer, got {h!r}")


def psi_weights(params: ArimaParams, order: ModelOrder, h: int) -> np.ndarray:
    """psi_0 .. psi_{h-1} of the MA(infinity) form on the original scale."""
    _check_horizon(h)
    c = expand_ar_operator(params.phi, order.d, order.ds)
    theta = params.theta
    psi = np.zeros(h)
    psi[0] = 1.0
    for j in range(1, h):
        acc = sum(c[i - 1] * psi[j - i] for i in range(1, min(j, c.size) + 1))
        psi[j] = acc - (theta[j - 1] if j <= len(theta) else 0.0)
    return psi


def point_forecasts(model: FittedModel, series, h: int) -> np.ndarray:
    """Forecasts for the ``h`` months after the end of ``series``.

    ``series`` must be the data the model was fitted or conditioned on.
    """
    _check_horizon(h)
    values = np.asarray(series.values if isinstance(series, MonthlySeries) else series,
                        dtype=float)
    n = values.size
    if n != model.n_obs:
        raise ContractError(
            f"series has {n} observations but the model was fitted on {model.n_obs}")
    params = model.params
    c = expand_ar_operator(params.phi, model.order.d, model.order.ds)
    theta = params.theta
    y = np.concatenate((values, np.zeros(h)))
    e = np.zeros(n + h)
    e[model.offset:n] = model.residuals
    for t in range(n, n + h):
        v = params.mu
        for i in range(c.size):
            v += c[i] * y[t - 1 - i]
        for j in range(len(theta)):
            v -= theta[j] * e[t - 1 - j]
        y[t] = v
    return y[n:]


def forecast_intervals(model: FittedModel, series: MonthlySeries, h: int,
                       level: float = 0.95, model_name: str | None = None) -> ForecastTable:
    """Point forecasts with symmetric limits ``forecast +- z * sigma * sqrt(sum psi^2)``."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    mean = point_forecasts(model, series, h)
    psi = psi_weights(model.params, model.order, h)
    z = normal_quantile(0.5 * (1.0 + level))
    half = z * model.sigma * np.sqrt(np.cumsum(psi * psi))
    start = series.end + 1
    rows = tuple(ForecastRow(start + j, float(mean[j]), float(mean[j] + half[j]),
                             float(mean[j] - half[j])) for j in range(h))
    return ForecastTable(model_name or f"{series.name}-Model", level, rows)
