"""Print the spectral threshold table for both extremal families as CSV.

Each row carries the quotient-polynomial root, the power-iteration value on
the full graph and their gap.
"""

import argparse
import sys

from spectral_kmatch.extremal import threshold_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["12", "14"], default="12")
    ap.add_argument("--t-max", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=40)
    args = ap.parse_args()
    lo = 2 if args.family == "12" else 6
    pairs = [(n, t) for t in range(1, args.t_max + 1) for n in range(2 * t + lo, args.n_max + 1, 2)]
    sys.stdout.write(threshold_table(pairs, args.family))


if __name__ == "__main__":
    main()
