"""Find 2n-point witnesses for a range of n, verify each independently, and
optionally count maximum solutions where exhaustive search is cheap.

    python scripts/solve_small.py --max-n 10 --outdir witnesses/
"""

import argparse
from pathlib import Path

from no3l.solver import EXHAUSTIVE_CAP, SolverConfig, count_maximum_solutions, solve
from no3l.verify import verify_witness


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--time-budget", type=float, default=60.0)
    p.add_argument("--outdir", type=Path, default=Path("witnesses"))
    p.add_argument("--symmetry-breaking", action="store_true")
    args = p.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    print(f"{'n':>3} {'best':>5} {'optimal':>8} {'nodes':>10} {'ms':>9}  verified  max-count")
    for n in range(args.min_n, args.max_n + 1):
        cfg = SolverConfig(time_budget=args.time_budget, symmetry_breaking=args.symmetry_breaking)
        r = solve(n, cfg)
        path = args.outdir / f"witness_n{n}.txt"
        r.witness.write(path)
        ok = bool(verify_witness(path))
        count = count_maximum_solutions(n) if n <= EXHAUSTIVE_CAP else "-"
        print(f"{n:>3} {r.best_size:>5} {str(r.proven_optimal):>8} {r.nodes_explored:>10} "
              f"{r.elapsed * 1000:>9.1f}  {str(ok):>8}  {count}")


if __name__ == "__main__":
    main()
