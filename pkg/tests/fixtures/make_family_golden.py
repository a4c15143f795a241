"""Regenerate family_golden.csv from a radial scipy quadrature (independent of the package).

Y_t = (s^4, t^4 s^4, t s^2) on S_4 with u = v = x dy / z^2, which pulls back to
4 t^2 s^3 ds; the cut-off is (1 - |phi|^2 / 0.25)^2.
"""
import csv
import math
import sys
from pathlib import Path

from scipy.integrate import quad

GRID = (1.0, 0.5, 0.25, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001)
R2 = 0.25


def radial(weight, support):
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if support(mid) < R2 else (lo, mid)

    def f(r):
        q = support(r) / R2
        return (1 - q) ** 2 * weight(r) * r if q < 1 else 0.0

    return 2 * math.pi * quad(f, 0, hi, limit=200, epsabs=1e-15, epsrel=1e-13)[0]


def rows():
    for t in GRID:
        support = lambda r: r ** 8 * (1 + t ** 8) + t ** 2 * r ** 4
        value = radial(lambda r: 16 * t ** 4 * r ** 6, support)
        mass = radial(lambda r: 16 * r ** 6 * (1 + t ** 8) + 4 * t ** 2 * r ** 2, support)
        yield [repr(t), repr(value), "0.0", repr(mass), 1]


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).with_name("family_golden.csv")
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "re", "im", "mass", "converged"])
        w.writerows(rows())
