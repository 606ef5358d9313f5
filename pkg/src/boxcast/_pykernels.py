"""Pure Python/NumPy implementation of the numerical kernels.

Used when the compiled ``_ckernels`` extension is unavailable. The compiled
module implements the same functions with the same operation order.
"""

import math

import numpy as np
from scipy.signal import lfilter

PENALTY = 1e12
OVERFLOW_VIOLATION = 1e6


def css_residuals(y, mu, phi, theta):
    """Residuals e_{p+1..n} of y_t = mu + sum phi_i y_{t-i} + e_t - sum theta_j e_{t-j}.

    Pre-sample errors are zero.
    """
    y = np.asarray(y, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    p, n = phi.size, y.size
    w = y[p:] - mu
    for i in range(p):
        w = w - phi[i] * y[p - 1 - i:n - 1 - i]
    if theta.size == 0:
        return w
    # e_t = w_t + sum theta_j e_{t-j}, zero initial state
    return lfilter([1.0], np.concatenate(([1.0], -theta)), w)


def step_down_violation(coeffs):
    """Schur-Cohn step-down test of ``1 - sum c_i z^i``.

    Returns a negative number when every root lies outside the unit circle,
    otherwise ``|k| - 1 >= 0`` for the first partial coefficient ``k`` with
    ``|k| >= 1``.
    """
    a = [float(c) for c in coeffs]
    for k in range(len(a), 0, -1):
        kappa = a[k - 1]
        if abs(kappa) >= 1.0:
            return abs(kappa) - 1.0
        denom = 1.0 - kappa * kappa
        a = [(a[i] + kappa * a[k - 2 - i]) / denom for i in range(k - 1)]
    return -1.0


def css_objective(y, p, q, x):
    """Conditional sum of squares at ``x = [mu, phi..., theta...]`` with a
    penalty of ``1e12 * (1 + violation)`` outside the stationary/invertible region."""
    x = np.asarray(x, dtype=float)
    v_ar = step_down_violation(x[1:1 + p])
    v_ma = step_down_violation(x[1 + p:1 + p + q])
    if v_ar >= 0.0 or v_ma >= 0.0:
        return PENALTY * (1.0 + max(v_ar, 0.0) + max(v_ma, 0.0))
    e = css_residuals(y, x[0], x[1:1 + p], x[1 + p:1 + p + q])
    s = 0.0
    for v in e:
        s += v * v
    if not math.isfinite(s):
        return PENALTY * (1.0 + OVERFLOW_VIOLATION)
    return s


def _diameter(sim):
    best = 0.0
    for i in range(sim.shape[0]):
        for j in range(i + 1, sim.shape[0]):
            d = math.sqrt(float(np.sum((sim[i] - sim[j]) ** 2)))
            if d > best:
                best = d
    return best


def nelder_mead(f, x0, step, xtol, maxiter):
    """Minimize ``f`` with the Nelder-Mead simplex method.

    The initial simplex is ``x0`` and ``x0 + step[i] * e_i``. Stops when the
    largest distance between two vertices is below ``xtol`` (converged) or
    after ``maxiter`` iterations. Returns ``(x, fx, iterations, converged)``.
    """
    x0 = np.asarray(x0, dtype=float)
    dim = x0.size
    sim = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        sim[i + 1, i] += step[i]
    fsim = np.array([f(v) for v in sim])
    order = np.argsort(fsim, kind="stable")
    sim, fsim = sim[order], fsim[order]

    it = 0
    converged = False
    while True:
        if _diameter(sim) < xtol:
            converged = True
            break
        if it >= maxiter:
            break
        it += 1
        xbar = sim[:-1].sum(axis=0) / dim
        worst = sim[-1]
        xr = xbar + (xbar - worst)
        fr = f(xr)
        shrink = False
        if fr < fsim[0]:
            xe = xbar + 2.0 * (xbar - worst)
            fe = f(xe)
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-1]:
            xc = xbar + 0.5 * (xr - xbar)
            fc = f(xc)
            if fc <= fr:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True
        else:
            xc = xbar + 0.5 * (worst - xbar)
            fc = f(xc)
            if fc < fsim[-1]:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True
        if shrink:
            for j in range(1, dim + 1):
                sim[j] = sim[0] + 0.5 * (sim[j] - sim[0])
                fsim[j] = f(sim[j])
        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]
    return sim[0].copy(), float(fsim[0]), it, converged


def nelder_mead_css(y, p, q, x0, step, xtol, maxiter):
    y = np.ascontiguousarray(y, dtype=float)
    return nelder_mead(lambda x: css_objective(y, p, q, x), x0, step, xtol, maxiter)


def ses_sse(y, alpha):
    """One-step SSE of simple exponential smoothing with ``s_1 = y_1``."""
    level = float(y[0])
    sse = 0.0
    for t in range(1, len(y)):
        err = float(y[t]) - level
        sse += err * err
        level = alpha * float(y[t]) + (1.0 - alpha) * level
    return sse
