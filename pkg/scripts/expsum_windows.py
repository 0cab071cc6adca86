"""Sawtooth sums over every dyadic window for one (x, q, a), next to their bounds."""

import argparse
import math

from floorsets.config import parse_int
from floorsets.expsum import ExpSumQuery, dyadic_windows, lemma_report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", default="1e8")
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--a", type=int, default=1)
    ap.add_argument("--delta", type=int, choices=(0, 1), default=0)
    args = ap.parse_args(argv)

    x = parse_int(args.x)
    scale = (x / args.q) ** (1 / 3)
    print(f"x={x} q={args.q} a={args.a} delta={args.delta} (x/q)^(1/3)={scale:.2f}")
    print(f"{'D':>12} {'D_prime':>12} {'sum':>12} {'bound':>12} {'H*':>6} {'sum/bound':>10}")
    for lo, hi in dyadic_windows(x, args.q, args.a):
        # the first window starts on the open boundary of the admissible range
        lo = max(lo, math.nextafter(lo, math.inf), 1.0)
        if lo >= hi:
            continue
        rep = lemma_report(ExpSumQuery(x, args.q, args.a, args.delta, lo, hi))
        print(
            f"{lo:>12.2f} {hi:>12.2f} {rep.empirical:>12.4f} {rep.total:>12.2f} "
            f"{rep.optimal_H:>6} {abs(rep.empirical) / rep.total:>10.4f}"
        )


if __name__ == "__main__":
    main()
