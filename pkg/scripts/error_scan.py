"""Normalized error of S(x; q, a) over a grid, beyond the default q range.

    python3 scripts/error_scan.py --x-max 1e9 --q-max 30 --out error_scan.csv
"""

import argparse
import csv
import math
import sys

from floorsets.config import parse_int
from floorsets.progression import scan_errors


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x-max", default="1e8")
    ap.add_argument("--q-max", type=int, default=20)
    ap.add_argument("--max-residues", type=int, default=50)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    top = round(math.log10(parse_int(args.x_max)))
    grid = [10**k for k in range(4, top + 1)]
    reports = scan_errors(
        grid,
        q_policy=lambda x: range(1, args.q_max + 1),
        max_residues=args.max_residues,
        workers=args.workers,
    )

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["x", "q", "max_abs_normalized", "mean_abs_normalized", "residues"])
    by_xq = {}
    for r in reports:
        by_xq.setdefault((r.query.x, r.query.q), []).append(abs(r.normalized_error))
    for (x, q), errs in sorted(by_xq.items()):
        w.writerow([x, q, f"{max(errs):.6f}", f"{sum(errs) / len(errs):.6f}", len(errs)])
    if args.out:
        fh.close()
    worst = max(abs(r.normalized_error) for r in reports)
    print(f"{len(reports)} queries, worst |normalized error| = {worst:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
