"""Exact counts of collinear triples in the n x n grid.

Every collinear triple of distinct grid points has a unique pair of extreme
points and an interior point between them. So

    t_n = sum over difference vectors (a, b) != (0, 0), 0 <= a, b < n, of
          mult(a, b) * (n - a) * (n - b) * (gcd(a, b) - 1)

where (n - a)(n - b) counts placements of a segment with that difference,
gcd - 1 counts its interior lattice points, and mult = 2 for a, b > 0
(both slope signs) else 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .grid import check_size, collinear, grid_points

BRUTE_CAP = 14
# Per-row sums are bounded by 2*n**3; they are formed in int64 and must stay
# below 2**63.
VECTOR_MAX_N = 1 << 20
_ROW_BLOCK = 256


@dataclass(frozen=True)
class TripleCount:
    n: int
    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("triple count must be nonnegative")
        if self.value > math.comb(self.n * self.n, 3):
            raise ValueError(f"triple count {self.value} exceeds C(n^2, 3) for n={self.n}")

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class AsymptoticComparison:
    n: int
    exact: TripleCount
    main_term: float
    ratio: float


def main_term(n: int) -> float:
    """Leading term (3/pi^2) n^4 ln n of the triple count."""
    return 3.0 / math.pi**2 * n**4 * math.log(n)


def _row_block_sum(n: int, lo: int, hi: int) -> int:
    b = np.arange(n, dtype=np.int64)
    wb = n - b
    a = np.arange(lo, hi, dtype=np.int64)[:, None]
    g = np.gcd(a, b[None, :]) - 1
    # (0, 0) is not a difference vector; gcd(0, 0) - 1 = -1 there.
    if lo == 0:
        g[0, 0] = 0
    # b = 0 has weight 1 (vertical runs), b > 0 weight 2, except the a = 0 row
    # where horizontal vectors only point one way.
    w = 2 * wb
    w[0] = n
    rows = g @ w
    if lo == 0:
        rows[0] = int(g[0] @ wb)
    total = 0
    for a_i, s in zip(range(lo, hi), rows.tolist()):
        total += (n - a_i) * s
    return total


def count_triples_fast(n: int, threads: int = 1) -> TripleCount:
    """Exact t_n in O(n^2) gcd evaluations.

    Rows of the difference rectangle are split into blocks; block sums are
    exact Python ints and are added in block order, so the result does not
    depend on ``threads``.
    """
    n = check_size(n)
    if n > VECTOR_MAX_N:
        raise OverflowError(f"n={n} exceeds the int64 row-sum capacity (n <= {VECTOR_MAX_N})")
    blocks = [(lo, min(lo + _ROW_BLOCK, n)) for lo in range(0, n, _ROW_BLOCK)]
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda blk: _row_block_sum(n, *blk), blocks))
    else:
        parts = [_row_block_sum(n, lo, hi) for lo, hi in blocks]
    return TripleCount(n, sum(parts))


def count_triples_brute(n: int, cap: int = BRUTE_CAP) -> TripleCount:
    """Count collinear triples by testing all C(n^2, 3) of them."""
    n = check_size(n)
    if n > cap:
        raise ValueError(f"brute-force census refuses n={n} > cap {cap} (O(n^6) work)")
    count = 0
    for a, b, c in combinations(grid_points(n), 3):
        if collinear(a, b, c):
            count += 1
    return TripleCount(n, count)


def compare_asymptotic(n: int, threads: int = 1) -> AsymptoticComparison:
    n = check_size(n)
    if n < 2:
        raise ValueError("asymptotic comparison needs n >= 2 (ln 1 = 0)")
    exact = count_triples_fast(n, threads=threads)
    mt = main_term(n)
    return AsymptoticComparison(n, exact, mt, exact.value / mt)
