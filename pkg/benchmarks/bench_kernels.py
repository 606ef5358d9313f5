"""Compare the compiled and pure Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import sys
import timeit

import numpy as np

from boxcast import _pykernels


def simulate(n, seed=0):
    rng = np.random.default_rng(seed)
    e = rng.normal(size=n + 100)
    y = np.zeros_like(e)
    for t in range(2, y.size):
        y[t] = 0.5 * y[t - 1] + 0.3 * y[t - 2] + e[t] - 0.2 * e[t - 1]
    return y[100:]


def cases(impl, y):
    z = (y - y.mean()) / y.std()
    x = np.array([0.0, 0.5, 0.3, 0.2])
    x0, step = np.zeros(4), np.full(4, 0.1)
    return {
        "css_objective ARMA(2,1)": lambda: impl.css_objective(z, 2, 1, x),
        "nelder_mead_css ARMA(2,1)": lambda: impl.nelder_mead_css(z, 2, 1, x0, step, 1e-8, 800),
        "ses_sse": lambda: impl.ses_sse(y, 0.3),
    }


def best_of(fn, repeat):
    number, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--n", type=int, default=60, help="series length")
    args = parser.parse_args(argv)
    try:
        from boxcast import _ckernels
    except ImportError:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    y = simulate(args.n)
    py_cases, c_cases = cases(_pykernels, y), cases(_ckernels, y)
    print(f"series length {args.n}")
    print(f"{'kernel':<28}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name in py_cases:
        tp = best_of(py_cases[name], args.repeat)
        tc = best_of(c_cases[name], args.repeat)
        print(f"{name:<28}{tp * 1e6:>10.1f}us{tc * 1e6:>10.1f}us{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
