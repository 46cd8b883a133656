"""Sweep k at fixed n and compare observed no-3-in-line survival with the
independence prediction. Writes CSV to stdout.

    python scripts/independence_sweep.py --n 12 --k-min 0.3 --k-max 1.2 --step 0.1 --samples 100000
"""

import argparse
import csv
import sys

import numpy as np

from no3l.montecarlo import independence_gap


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--k-min", type=float, default=0.3)
    p.add_argument("--k-max", type=float, default=1.2)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args()

    ks = np.round(np.arange(args.k_min, args.k_max + args.step / 2, args.step), 10)
    w = csv.writer(sys.stdout)
    w.writerow(["n", "k", "subset_size", "survivors", "p_hat", "predicted_log", "gap", "gap_stderr", "gap_upper_bound"])
    for k in ks:
        if round(k * args.n) < 3:
            continue
        g = independence_gap(args.n, float(k), args.samples, args.seed, args.threads)
        s = g.summary
        w.writerow([s.n, k, s.subset_size, s.survivors, s.p_hat, s.predicted_log, g.gap, g.stderr, g.upper_bound])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
