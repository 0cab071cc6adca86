"""pi_S(x) against Li_S(x) and 2 sqrt(x)/log(x) on a decade grid."""

import argparse
import time

from floorsets.config import parse_int
from floorsets.primes import prime_count_report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x-max", default="1e12")
    args = ap.parse_args(argv)

    x_max = parse_int(args.x_max)
    print(f"{'x':>14} {'pi_S':>9} {'Li_S':>12} {'ratio':>8} {'2sqrt(x)/log x':>15} {'sec':>6}")
    x = 10**4
    while x <= x_max:
        t0 = time.perf_counter()
        r = prime_count_report(x)
        dt = time.perf_counter() - t0
        print(f"{x:>14} {r.pi_s:>9} {r.li_s:>12.2f} {r.ratio:>8.5f} {r.heyman_main:>15.2f} {dt:>6.2f}")
        x *= 100


if __name__ == "__main__":
    main()
