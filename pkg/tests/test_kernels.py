import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxcast import _pykernels, kernels

from helpers import simulate_arma

try:
    from boxcast import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python"),
            pytest.param(_ckernels, id="cython",
                         marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))]


def brute_residuals(y, mu, phi, theta):
    p, q = len(phi), len(theta)
    e = []
    for t in range(p, len(y)):
        v = y[t] - mu
        for i in range(p):
            v -= phi[i] * y[t - 1 - i]
        for j in range(q):
            k = len(e) - 1 - j
            if k >= 0:
                v += theta[j] * e[k]
        e.append(v)
    return np.array(e)


def reciprocal_roots(coeffs):
    # roots of z^k - c1 z^(k-1) - ... - ck are the reciprocals of the roots of 1 - sum c_i B^i
    return np.abs(np.roots(np.concatenate(([1.0], -np.asarray(coeffs, dtype=float)))))


@pytest.mark.parametrize("impl", BACKENDS)
def test_residuals_against_brute_force(impl):
    rng = np.random.default_rng(1)
    for _ in range(30):
        p, q = rng.integers(0, 4), rng.integers(0, 4)
        y = rng.normal(size=40)
        phi, theta = rng.uniform(-0.4, 0.4, p), rng.uniform(-0.4, 0.4, q)
        got = impl.css_residuals(y, 0.3, phi, theta)
        assert np.allclose(got, brute_residuals(y, 0.3, phi, theta), atol=1e-12)


@pytest.mark.parametrize("impl", BACKENDS)
@given(coeffs=st.lists(st.floats(-2.5, 2.5), max_size=4))
@settings(max_examples=200)
def test_step_down_agrees_with_roots(impl, coeffs):
    mags = reciprocal_roots(coeffs)
    if mags.size and np.min(np.abs(mags - 1.0)) < 1e-6:
        return  # numerically on the unit circle
    v = impl.step_down_violation(np.array(coeffs, dtype=float))
    assert (v < 0) == bool(np.all(mags < 1.0))


@pytest.mark.parametrize("impl", BACKENDS)
def test_objective_penalty(impl):
    y = np.arange(20.0)
    assert impl.css_objective(y, 1, 0, np.array([0.0, 1.5])) >= 1e12
    assert impl.css_objective(y, 0, 1, np.array([0.0, -2.0])) >= 1e12
    # further outside costs more
    assert (impl.css_objective(y, 1, 0, np.array([0.0, 3.0]))
            > impl.css_objective(y, 1, 0, np.array([0.0, 1.5])))


@pytest.mark.skipif(_ckernels is None, reason="extension not built")
def test_backends_agree():
    y = simulate_arma(300, 1.0, (0.5, 0.2), (0.3,), seed=4)
    x = np.array([0.4, 0.4, 0.1, 0.2])
    for f in ("css_residuals",):
        a = _pykernels.css_residuals(y, x[0], x[1:3], x[3:])
        b = _ckernels.css_residuals(y, x[0], x[1:3], x[3:])
        assert np.max(np.abs(a - b)) < 1e-12
    assert _pykernels.css_objective(y, 2, 1, x) == pytest.approx(
        _ckernels.css_objective(y, 2, 1, x), rel=1e-13)
    for alpha in (0.01, 0.3, 0.99):
        assert _pykernels.ses_sse(y, alpha) == pytest.approx(_ckernels.ses_sse(y, alpha), rel=1e-13)
    z = (y - y.mean()) / y.std()
    x0, step = np.zeros(4), np.full(4, 0.1)
    ra = _pykernels.nelder_mead_css(z, 2, 1, x0, step, 1e-8, 800)
    rb = _ckernels.nelder_mead_css(z, 2, 1, x0, step, 1e-8, 800)
    assert np.allclose(ra[0], rb[0], atol=1e-6)
    assert ra[3] and rb[3]


@pytest.mark.parametrize("impl", BACKENDS)
def test_nelder_mead_reaches_least_squares(impl):
    # AR(1) CSS with mu is linear least squares; compare with lstsq
    y = simulate_arma(400, 0.5, (0.6,), seed=9)
    z = (y - y.mean()) / y.std()
    x, fx, it, ok = impl.nelder_mead_css(z, 1, 0, np.zeros(2), np.full(2, 0.1), 1e-10, 2000)
    design = np.column_stack((np.ones(z.size - 1), z[:-1]))
    ref, *_ = np.linalg.lstsq(design, z[1:], rcond=None)
    assert ok
    assert np.allclose(x, ref, atol=1e-6)


@pytest.mark.parametrize("impl", BACKENDS)
def test_ses_sse_matches_loop(impl):
    y = np.array([3.0, 5.0, 4.0, 8.0, 7.0])
    level, sse = y[0], 0.0
    for v in y[1:]:
        sse += (v - level) ** 2
        level = 0.3 * v + 0.7 * level
    assert impl.ses_sse(y, 0.3) == pytest.approx(sse, rel=1e-14)


def test_pure_python_switch():
    env = dict(os.environ, BOXCAST_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from boxcast import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
