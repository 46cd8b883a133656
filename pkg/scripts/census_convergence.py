"""Print t_n against the (3/pi^2) n^4 ln n main term for a range of grid sizes.

    python scripts/census_convergence.py --sizes 64 128 256 512 1024 2048 4096
"""

import argparse
import math
import time

from no3l.census import compare_asymptotic


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512, 1024, 2048, 4096])
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args()

    print(f"{'n':>7} {'t_n':>22} {'ratio':>10} {'|ratio-1|*ln n':>15} {'sec':>7}")
    for n in args.sizes:
        t0 = time.perf_counter()
        c = compare_asymptotic(n, threads=args.threads)
        dt = time.perf_counter() - t0
        # an O(n^4) remainder makes (ratio - 1) * ln n roughly constant
        print(f"{n:>7} {c.exact.value:>22} {c.ratio:>10.6f} {abs(c.ratio - 1) * math.log(n):>15.4f} {dt:>7.2f}")


if __name__ == "__main__":
    main()
