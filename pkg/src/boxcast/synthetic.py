"""Seeded generator for the bundled four-borough example dataset.

Each borough is ``level + trend * t + seasonal[month] + u_t`` with ``u_t`` a
Gaussian AR(2) process (phi = 0.5, 0.3), rounded to whole counts, for the 60
months Jan 2012 to Dec 2016. Two interior cells are blanked so that the file
exercises gap filling.
"""

import csv
import io

import numpy as np

from .ingest import Month

SEED = 20120101
START = Month(2012, 1)
N_MONTHS = 60
AR = (0.5, 0.3)

# level, monthly trend, noise sd (counts per month)
BOROUGHS = {
    "Barking and Dagenham": (1420.0, 0.8, 45.0),
    "Barnet": (2060.0, 1.0, 70.0),
    "Bexley": (1110.0, 0.5, 40.0),
    "Brent": (2300.0, 1.5, 80.0),
}
# relative seasonal profile, Jan..Dec
SEASONAL = np.array([0.00, -0.04, 0.05, -0.02, 0.02, 0.01,
                     0.04, -0.03, -0.02, 0.05, 0.06, 0.00])
MISSING = (("Barnet", 17), ("Bexley", 40))


def generate(seed: int = SEED) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    burn = 100
    out = {}
    t = np.arange(N_MONTHS)
    season = SEASONAL[(START.month - 1 + t) % 12]
    for name, (level, trend, sd) in BOROUGHS.items():
        e = rng.normal(0.0, sd, N_MONTHS + burn)
        u = np.zeros(N_MONTHS + burn)
        for k in range(2, u.size):
            u[k] = AR[0] * u[k - 1] + AR[1] * u[k - 2] + e[k]
        out[name] = np.round(level + trend * t + level * season + u[burn:])
    return out


def to_csv(data: dict[str, np.ndarray]) -> str:
    names = list(data)
    missing = set(MISSING)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["month", *names])
    for i in range(N_MONTHS):
        m = START + i
        label = f"{m.year % 100:02d}-{m.short()[:3]}"
        writer.writerow([label, *("" if (b, i) in missing else f"{data[b][i]:.0f}" for b in names)])
    return buf.getvalue()


def main(path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(generate()))


if __name__ == "__main__":
    import sys

    main(sys.argv[1])
