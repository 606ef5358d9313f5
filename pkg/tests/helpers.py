"""Simulation helpers shared by the test modules."""

import numpy as np


def simulate_arma(n, mu=0.0, phi=(), theta=(), sigma=1.0, seed=0, burn=200):
    """y_t = mu + sum phi_i y_{t-i} + e_t - sum theta_j e_{t-j}, Gaussian e."""
    rng = np.random.default_rng(seed)
    total = n + burn
    e = rng.normal(0.0, sigma, total)
    y = np.zeros(total)
    for t in range(total):
        v = mu + e[t]
        for i, f in enumerate(phi):
            if t - 1 - i >= 0:
                v += f * y[t - 1 - i]
        for j, th in enumerate(theta):
            if t - 1 - j >= 0:
                v -= th * e[t - 1 - j]
        y[t] = v
    return y[burn:]


def simulate_arima(n, d, mu=0.0, phi=(), theta=(), sigma=1.0, seed=0, level=100.0):
    w = simulate_arma(n - d, mu, phi, theta, sigma, seed)
    y = w
    for _ in range(d):
        y = np.concatenate(([level], level + np.cumsum(y)))
    return y
