"""Conditional-sum-of-squares estimation of ARIMA models and an SES baseline.

The model for the differenced series ``y`` is::

    y_t = mu + phi_1 y_{t-1} + ... + phi_p y_{t-p} + e_t - theta_1 e_{t-1} - ... - theta_q e_{t-q}

with ``mu`` the constant term (not the mean). Residuals are computed from
``t = p + 1`` with pre-sample errors set to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .errors import DomainError, InsufficientDataError
from .ingest import MonthlySeries
from .transform import DifferencedSeries, difference_full

MAX_P = 5
MAX_Q = 5
MIN_EXTRA_OBS = 10
SIGMA2_FLOOR = 1e-12
XTOL = 1e-8
ITER_PER_PARAM = 200
SES_GRID = tuple(k / 100 for k in range(1, 100))


@dataclass(frozen=True, order=True)
class ModelOrder:
    p: int
    d: int
    q: int
    ds: int = 0

    def __post_init__(self):
        for name, value, hi in (("p", self.p, MAX_P), ("d", self.d, 2),
                                ("q", self.q, MAX_Q), ("ds", self.ds, 1)):
            if not isinstance(value, (int, np.integer)) or not 0 <= value <= hi:
                raise DomainError(f"{name} must be an integer in [0, {hi}], got {value!r}")

    @classmethod
    def parse(cls, text: str, ds: int = 0) -> "ModelOrder":
        """Parse ``"p,d,q"``."""
        parts = text.replace(" ", "").strip("()").split(",")
        if len(parts) != 3:
            raise DomainError(f"order must look like p,d,q, got {text!r}")
        try:
            p, d, q = (int(v) for v in parts)
        except ValueError:
            raise DomainError(f"order must look like p,d,q, got {text!r}") from None
        return cls(p, d, q, ds)

    @property
    def n_params(self) -> int:
        """Estimated coefficients including the constant."""
        return self.p + self.q + 1

    @property
    def lag_depth(self) -> int:
        return self.d + 12 * self.ds

    def __str__(self):
        base = f"ARIMA({self.p},{self.d},{self.q})"
        return base + "(0,1,0)[12]" if self.ds else base


@dataclass(frozen=True)
class ArimaParams:
    mu: float
    phi: tuple = ()
    theta: tuple = ()
    sigma2: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        object.__setattr__(self, "theta", tuple(float(v) for v in self.theta))
        object.__setattr__(self, "mu", float(self.mu))
        if not self.sigma2 > 0:
            raise DomainError(f"sigma2 must be positive, got {self.sigma2}")

    def vector(self) -> np.ndarray:
        return np.array([self.mu, *self.phi, *self.theta], dtype=float)

    @property
    def stationary(self) -> bool:
        return kernels.step_down_violation(self.phi) < 0

    @property
    def invertible(self) -> bool:
        return kernels.step_down_violation(self.theta) < 0


@dataclass(frozen=True)
class FittedModel:
    order: ModelOrder
    params: ArimaParams
    residuals: np.ndarray = field(repr=False)
    loss: float
    diffed: DifferencedSeries = field(repr=False)
    converged: bool = True
    iterations: int = 0

    @property
    def n_effective(self) -> int:
        return self.residuals.size

    @property
    def n_obs(self) -> int:
        """Length of the original-scale series the model was conditioned on."""
        return self.diffed.values.size + self.diffed.lag_depth

    @property
    def offset(self) -> int:
        """Index in the original series of the first residual."""
        return self.diffed.lag_depth + self.order.p

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.params.sigma2))


def _check_lengths(y: np.ndarray, order: ModelOrder, params: ArimaParams) -> None:
    if len(params.phi) != order.p or len(params.theta) != order.q:
        raise DomainError(
            f"{order} needs {order.p} AR and {order.q} MA coefficients, "
            f"got {len(params.phi)} and {len(params.theta)}")
    if y.size <= order.p:
        raise InsufficientDataError(
            f"need more than {order.p} observations for an AR({order.p}) recursion")


def css_residuals(y, params: ArimaParams, order: ModelOrder) -> np.ndarray:
    """Innovations ``e_{p+1}, ..., e_n`` of the differenced series ``y``."""
    y = np.ascontiguousarray(y, dtype=float)
    _check_lengths(y, order, params)
    return kernels.css_residuals(y, params.mu, params.phi, params.theta)


def css_loss(y, params: ArimaParams, order: ModelOrder) -> float:
    """Sum of squared residuals, or ``1e12 * (1 + violation)`` when the AR
    part is non-stationary or the MA part is non-invertible."""
    y = np.ascontiguousarray(y, dtype=float)
    _check_lengths(y, order, params)
    return float(kernels.css_objective(y, order.p, order.q, params.vector()))


def yule_walker_init(y, p: int) -> np.ndarray:
    """Yule-Walker AR coefficients from biased sample autocovariances.

    Returns zeros when the autocovariance system is singular.
    """
    y = np.asarray(y, dtype=float)
    if p < 1:
        raise DomainError("p must be at least 1")
    if y.size <= p:
        raise InsufficientDataError(f"need more than {p} observations")
    x = y - y.mean()
    n = x.size
    gamma = np.array([x[k:] @ x[:n - k] for k in range(p + 1)]) / n
    if not gamma[0] > 1e-300:
        return np.zeros(p)
    idx = np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    toeplitz = gamma[idx]
    try:
        phi = np.linalg.solve(toeplitz, gamma[1:])
    except np.linalg.LinAlgError:
        return np.zeros(p)
    if not np.all(np.isfinite(phi)) or np.linalg.cond(toeplitz) > 1e12:
        return np.zeros(p)
    return phi


def condition(series, order: ModelOrder, params: ArimaParams) -> FittedModel:
    """Attach data to known parameters: compute residuals and loss.

    ``params.sigma2`` is kept as given.
    """
    values = series.values if isinstance(series, MonthlySeries) else series
    diffed = difference_full(values, order.d, order.ds)
    residuals = css_residuals(diffed.values, params, order)
    loss = float(kernels.css_objective(diffed.values, order.p, order.q, params.vector()))
    residuals.setflags(write=False)
    return FittedModel(order, params, residuals, loss, diffed)


def fit(series, order: ModelOrder, *, xtol: float = XTOL,
        max_iter: Optional[int] = None) -> FittedModel:
    """Estimate ``mu``, ``phi`` and ``theta`` by minimizing the CSS with Nelder-Mead.

    The search runs on the standardized differenced series so that one
    tolerance suits every data scale; the CSS recursion is linear, so the
    estimates map back exactly. Starting point: constant consistent with the
    sample mean, Yule-Walker ``phi``, zero ``theta``.
    """
    values = series.values if isinstance(series, MonthlySeries) else np.asarray(series, float)
    diffed = difference_full(values, order.d, order.ds)
    w = np.ascontiguousarray(diffed.values)
    p, q = order.p, order.q
    if w.size < p + q + MIN_EXTRA_OBS:
        raise InsufficientDataError(
            f"{order} needs at least {p + q + MIN_EXTRA_OBS} differenced observations, "
            f"have {w.size}")

    center = float(w.mean())
    if p == 0 and q == 0:
        x = np.array([center])
        iterations, converged = 0, True
    else:
        spread = float(w.std())
        scale = spread if spread > 0 else 1.0
        z = (w - center) / scale
        phi0 = yule_walker_init(z, p) if p else np.zeros(0)
        if kernels.step_down_violation(phi0) >= 0:
            phi0 = np.zeros(p)
        x0 = np.concatenate(([0.0], phi0, np.zeros(q)))
        dim = x0.size
        step = np.full(dim, 0.1)
        maxiter = ITER_PER_PARAM * dim if max_iter is None else max_iter
        xz, _, iterations, converged = kernels.nelder_mead_css(z, p, q, x0, step, xtol, maxiter)
        phi = xz[1:1 + p]
        x = np.concatenate(([center * (1.0 - phi.sum()) + scale * xz[0]], xz[1:]))

    params = ArimaParams(x[0], x[1:1 + p], x[1 + p:], 1.0)
    residuals = css_residuals(w, params, order)
    loss = float(kernels.css_objective(w, p, q, x))
    sigma2 = max(loss / residuals.size, SIGMA2_FLOOR)
    params = ArimaParams(params.mu, params.phi, params.theta, sigma2)
    residuals.setflags(write=False)
    return FittedModel(order, params, residuals, loss, diffed, bool(converged), int(iterations))


def standard_errors(model: FittedModel) -> np.ndarray:
    """Asymptotic standard errors of ``(mu, phi..., theta...)``.

    Uses the finite-difference Hessian ``H`` of the CSS at the estimate and
    ``cov = 2 sigma2 H^-1``. Entries are NaN when ``H`` is not positive definite.
    """
    w = np.ascontiguousarray(model.diffed.values)
    p, q = model.order.p, model.order.q
    x = model.params.vector()
    k = x.size
    h = 1e-4 * np.maximum(1.0, np.abs(x))

    def f(v):
        return float(kernels.css_objective(w, p, q, v))

    hess = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            ei, ej = np.zeros(k), np.zeros(k)
            ei[i], ej[j] = h[i], h[j]
            val = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (
                4.0 * h[i] * h[j])
            hess[i, j] = hess[j, i] = val
    try:
        np.linalg.cholesky(hess)
    except np.linalg.LinAlgError:
        return np.full(k, np.nan)
    cov = 2.0 * model.params.sigma2 * np.linalg.inv(hess)
    return np.sqrt(np.diag(cov))


def fitted_values(model: FittedModel, series) -> tuple[int, np.ndarray]:
    """One-step in-sample predictions on the original scale.

    Returns ``(offset, fitted)`` where ``fitted[i]`` predicts
    ``series[offset + i]``.
    """
    values = series.values if isinstance(series, MonthlySeries) else np.asarray(series, float)
    return model.offset, values[model.offset:] - model.residuals


class SesFit(NamedTuple):
    alpha: float
    fitted: np.ndarray
    sse: float


def ses_path(y, alpha: float) -> np.ndarray:
    """One-step SES predictions for ``y[1:]`` with level started at ``y[0]``."""
    y = np.asarray(y, dtype=float)
    out = np.empty(y.size - 1)
    level = y[0]
    for t in range(1, y.size):
        out[t - 1] = level
        level = alpha * y[t] + (1.0 - alpha) * level
    return out


def fit_ses(series) -> SesFit:
    """Simple exponential smoothing with ``alpha`` chosen on a 0.01 grid.

    The smallest ``alpha`` attaining the minimum one-step SSE wins. ``fitted``
    holds the one-step predictions for observations 2..n.
    """
    y = np.ascontiguousarray(
        series.values if isinstance(series, MonthlySeries) else series, dtype=float)
    if y.size < 2:
        raise InsufficientDataError("exponential smoothing needs at least 2 observations")
    best_alpha, best_sse = SES_GRID[0], np.inf
    for alpha in SES_GRID:
        sse = kernels.ses_sse(y, alpha)
        if sse < best_sse:
            best_alpha, best_sse = alpha, sse
    return SesFit(best_alpha, ses_path(y, best_alpha), float(best_sse))
