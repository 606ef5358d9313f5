# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels; mirrors boxcast._pykernels."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, isfinite
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double PENALTY = 1e12
cdef double OVERFLOW_VIOLATION = 1e6


cdef void _residuals(const double[::1] y, double mu, const double* phi, Py_ssize_t p,
                     const double* theta, Py_ssize_t q, double* e) noexcept nogil:
    cdef Py_ssize_t n = y.shape[0], t, i, k
    cdef double v
    for t in range(p, n):
        k = t - p
        v = y[t] - mu
        for i in range(p):
            v -= phi[i] * y[t - 1 - i]
        for i in range(q):
            if k - 1 - i >= 0:
                v += theta[i] * e[k - 1 - i]
        e[k] = v


def css_residuals(y, double mu, phi, theta):
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef const double[::1] ph = np.ascontiguousarray(phi, dtype=np.float64)
    cdef const double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef Py_ssize_t p = ph.shape[0], q = th.shape[0], n = yv.shape[0]
    out = np.zeros(max(n - p, 0), dtype=np.float64)
    cdef double[::1] ov = out
    if n - p <= 0:
        return out
    cdef double dummy = 0.0
    _residuals(yv, mu, &ph[0] if p else &dummy, p, &th[0] if q else &dummy, q, &ov[0])
    return out


cdef double _step_down(const double* coeffs, Py_ssize_t m, double* work) noexcept nogil:
    cdef Py_ssize_t k, i
    cdef double kappa, denom, lo, hi
    for i in range(m):
        work[i] = coeffs[i]
    k = m
    while k > 0:
        kappa = work[k - 1]
        if fabs(kappa) >= 1.0:
            return fabs(kappa) - 1.0
        denom = 1.0 - kappa * kappa
        # in-place symmetric update of work[0..k-2]
        i = 0
        while i < (k - 1) - 1 - i:
            lo = work[i]
            hi = work[k - 2 - i]
            work[i] = (lo + kappa * hi) / denom
            work[k - 2 - i] = (hi + kappa * lo) / denom
            i += 1
        if i == (k - 1) - 1 - i:
            work[i] = (work[i] + kappa * work[i]) / denom
        k -= 1
    return -1.0


def step_down_violation(coeffs):
    cdef const double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t m = c.shape[0]
    if m == 0:
        return -1.0
    cdef double* work = <double*> malloc(m * sizeof(double))
    try:
        return _step_down(&c[0], m, work)
    finally:
        free(work)


cdef class _CssProblem:
    cdef const double[::1] y
    cdef Py_ssize_t p, q, n
    cdef double* e
    cdef double* work

    def __cinit__(self, y, Py_ssize_t p, Py_ssize_t q):
        self.y = np.ascontiguousarray(y, dtype=np.float64)
        self.p = p
        self.q = q
        self.n = self.y.shape[0]
        self.e = <double*> malloc((self.n - p + 1) * sizeof(double))
        self.work = <double*> malloc((p + q + 1) * sizeof(double))
        if self.e == NULL or self.work == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.e)
        free(self.work)

    cdef double objective(self, const double* x) noexcept nogil:
        cdef double v_ar = -1.0, v_ma = -1.0, s = 0.0
        cdef Py_ssize_t k
        if self.p:
            v_ar = _step_down(x + 1, self.p, self.work)
        if self.q:
            v_ma = _step_down(x + 1 + self.p, self.q, self.work)
        if v_ar >= 0.0 or v_ma >= 0.0:
            return PENALTY * (1.0 + (v_ar if v_ar > 0.0 else 0.0) + (v_ma if v_ma > 0.0 else 0.0))
        _residuals(self.y, x[0], x + 1, self.p, x + 1 + self.p, self.q, self.e)
        for k in range(self.n - self.p):
            s += self.e[k] * self.e[k]
        if not isfinite(s):
            return PENALTY * (1.0 + OVERFLOW_VIOLATION)
        return s


def css_objective(y, Py_ssize_t p, Py_ssize_t q, x):
    cdef _CssProblem prob = _CssProblem(y, p, q)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    return prob.objective(&xv[0])


cdef double _diameter(double[:, ::1] sim) noexcept nogil:
    cdef Py_ssize_t i, j, k, rows = sim.shape[0], dim = sim.shape[1]
    cdef double best = 0.0, acc, diff, d
    for i in range(rows):
        for j in range(i + 1, rows):
            acc = 0.0
            for k in range(dim):
                diff = sim[i, k] - sim[j, k]
                acc += diff * diff
            d = sqrt(acc)
            if d > best:
                best = d
    return best


cdef void _sort(double[:, ::1] sim, double[::1] fsim, double[::1] tmp) noexcept nogil:
    # stable insertion sort by fsim
    cdef Py_ssize_t i, j, k, dim = sim.shape[1]
    cdef double fv
    for i in range(1, fsim.shape[0]):
        fv = fsim[i]
        for k in range(dim):
            tmp[k] = sim[i, k]
        j = i - 1
        while j >= 0 and fsim[j] > fv:
            fsim[j + 1] = fsim[j]
            for k in range(dim):
                sim[j + 1, k] = sim[j, k]
            j -= 1
        fsim[j + 1] = fv
        for k in range(dim):
            sim[j + 1, k] = tmp[k]


def nelder_mead_css(y, Py_ssize_t p, Py_ssize_t q, x0, step, double xtol, Py_ssize_t maxiter):
    cdef _CssProblem prob = _CssProblem(y, p, q)
    cdef const double[::1] x0v = np.ascontiguousarray(x0, dtype=np.float64)
    cdef const double[::1] stepv = np.ascontiguousarray(step, dtype=np.float64)
    cdef Py_ssize_t dim = x0v.shape[0], i, j, k, it = 0
    sim_arr = np.empty((dim + 1, dim), dtype=np.float64)
    fsim_arr = np.empty(dim + 1, dtype=np.float64)
    cdef double[:, ::1] sim = sim_arr
    cdef double[::1] fsim = fsim_arr
    cdef double[::1] xbar = np.empty(dim)
    cdef double[::1] xr = np.empty(dim)
    cdef double[::1] xe = np.empty(dim)
    cdef double[::1] xc = np.empty(dim)
    cdef double[::1] tmp = np.empty(dim)
    cdef double fr, fe, fc
    cdef bint converged = False, shrink

    with nogil:
        for i in range(dim + 1):
            for k in range(dim):
                sim[i, k] = x0v[k]
            if i > 0:
                sim[i, i - 1] += stepv[i - 1]
            fsim[i] = prob.objective(&sim[i, 0])
        _sort(sim, fsim, tmp)

        while True:
            if _diameter(sim) < xtol:
                converged = True
                break
            if it >= maxiter:
                break
            it += 1
            for k in range(dim):
                xbar[k] = 0.0
                for i in range(dim):
                    xbar[k] += sim[i, k]
                xbar[k] /= dim
            for k in range(dim):
                xr[k] = xbar[k] + (xbar[k] - sim[dim, k])
            fr = prob.objective(&xr[0])
            shrink = False
            if fr < fsim[0]:
                for k in range(dim):
                    xe[k] = xbar[k] + 2.0 * (xbar[k] - sim[dim, k])
                fe = prob.objective(&xe[0])
                if fe < fr:
                    for k in range(dim):
                        sim[dim, k] = xe[k]
                    fsim[dim] = fe
                else:
                    for k in range(dim):
                        sim[dim, k] = xr[k]
                    fsim[dim] = fr
            elif fr < fsim[dim - 1]:
                for k in range(dim):
                    sim[dim, k] = xr[k]
                fsim[dim] = fr
            elif fr < fsim[dim]:
                for k in range(dim):
                    xc[k] = xbar[k] + 0.5 * (xr[k] - xbar[k])
                fc = prob.objective(&xc[0])
                if fc <= fr:
                    for k in range(dim):
                        sim[dim, k] = xc[k]
                    fsim[dim] = fc
                else:
                    shrink = True
            else:
                for k in range(dim):
                    xc[k] = xbar[k] + 0.5 * (sim[dim, k] - xbar[k])
                fc = prob.objective(&xc[0])
                if fc < fsim[dim]:
                    for k in range(dim):
                        sim[dim, k] = xc[k]
                    fsim[dim] = fc
                else:
                    shrink = True
            if shrink:
                for j in range(1, dim + 1):
                    for k in range(dim):
                        sim[j, k] = sim[0, k] + 0.5 * (sim[j, k] - sim[0, k])
                    fsim[j] = prob.objective(&sim[j, 0])
            _sort(sim, fsim, tmp)

    return sim_arr[0].copy(), float(fsim[0]), it, bool(converged)


def ses_sse(y, double alpha):
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t t
    cdef double level = yv[0], err, sse = 0.0
    with nogil:
        for t in range(1, yv.shape[0]):
            err = yv[t] - level
            sse += err * err
            level = alpha * yv[t] + (1.0 - alpha) * level
    return sse
