"""Writes data/synthetic_region.csv: cumulative cases and deaths whose 14-day-lagged
mortality rate follows an integrated AR(1)."""
import csv
import datetime as dt
import sys

import numpy as np


def build(seed: int, n: int = 130):
    rng = np.random.default_rng(seed)
    cases = np.floor(2000.0 * 1.08 ** np.arange(n) + rng.uniform(0, 50, n).cumsum())
    rate = np.empty(n)
    rate[:15] = 30.0
    step = 0.0
    for t in range(15, n):
        # Innovations that would make cumulative deaths fall are redrawn.
        while True:
            candidate = 0.2 * step + rng.normal(0.0, 1.0)
            if (rate[t - 1] + candidate) * cases[t - 14] >= rate[t - 1] * cases[t - 15] + 100.0:
                break
        step = candidate
        rate[t] = rate[t - 1] + step
    deaths = np.empty(n)
    deaths[:14] = np.floor(rate[0] / 100.0 * cases[0] * np.arange(14) / 14.0)
    for t in range(14, n):
        deaths[t] = np.round(rate[t] / 100.0 * cases[t - 14])
    return cases, deaths


def main(out: str, seed: int) -> None:
    cases, deaths = build(seed)
    if np.any(np.diff(cases) < 0) or np.any(np.diff(deaths) < 0) or np.any(deaths < 0):
        raise SystemExit(f"seed {seed}: counts not monotone")
    start = dt.date(2020, 3, 1)
    with open(out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["date", "cases", "deaths"])
        for i, (c, d) in enumerate(zip(cases, deaths)):
            w.writerow([(start + dt.timedelta(days=i)).isoformat(), int(c), int(d)])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/synthetic_region.csv",
         int(sys.argv[2]) if len(sys.argv) > 2 else 7)
