"""Monte Carlo checks of the independence heuristic.

Random source: numpy ``Generator(PCG64(seed + w))`` for worker ``w``. Worker
``w`` of ``W`` draws ``samples // W`` samples, plus one if ``w < samples % W``;
tallies are summed. Batches have a fixed size, so results depend only on
(n, k, samples, seed, workers).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .census import count_triples_fast
from .grid import check_size
from .heuristic import PI2, subset_size, survival_log

RNG_ALGORITHM = "numpy.PCG64"
_PAIR_BUDGET = 1 << 22  # int64 cells per collinearity batch
_TRIPLE_BATCH = 1 << 18
_TABLE_MAX_N = 48  # n^4 int32 direction table, 21 MB at the cap


@dataclass(frozen=True)
class TrialSummary:
    n: int
    k: Optional[float]
    subset_size: int
    samples: int
    survivors: int  # event tally: no-3-in-line subsets, or collinear triples for event="collinear"
    p_hat: float
    stderr: float
    predicted_log: float
    seed: int
    workers: int = 1
    event: str = "no3l"
    rng: str = RNG_ALGORITHM

    def __post_init__(self) -> None:
        assert 0 <= self.survivors <= self.samples

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GapResult:
    """ln(p_hat) - survival_log, with a delta-method error bar.

    If every sample died, ``gap`` is None and ``upper_bound`` holds the
    95% bound from p < 3/samples.
    """

    gap: Optional[float]
    stderr: Optional[float]
    all_died: bool
    upper_bound: Optional[float]
    summary: TrialSummary

    def to_dict(self) -> dict:
        return {
            "gap": self.gap,
            "gap_stderr": self.stderr,
            "all_died": self.all_died,
            "gap_upper_bound": self.upper_bound,
            **self.summary.to_dict(),
        }


def _split(samples: int, workers: int) -> list[int]:
    q, r = divmod(samples, workers)
    return [q + (w < r) for w in range(workers)]


def _rng(seed: int, worker: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed + worker))


def _summary(n, k, size, samples, hits, predicted, seed, workers, event) -> TrialSummary:
    p = hits / samples
    return TrialSummary(
        n=n, k=k, subset_size=size, samples=samples, survivors=hits, p_hat=p,
        stderr=math.sqrt(p * (1.0 - p) / samples), predicted_log=predicted,
        seed=seed, workers=workers, event=event,
    )


def iter_subsets(n: int, size: int, samples: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Yield batches (rows = samples) of uniform random ``size``-subsets of point indices.

    Partial Fisher-Yates: for i < size swap slot i with a uniform slot in
    [i, n^2), applied to a whole batch of index rows at once. Point index
    ``i`` is the grid point (i // n, i % n).
    """
    N = n * n
    batch = max(1, min(samples, _PAIR_BUDGET // max(N, size * size)))
    low = np.arange(size)
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        arr = np.tile(np.arange(N, dtype=np.int64), (m, 1))
        draws = rng.integers(low, N, size=(m, size))
        rows = np.arange(m)
        for i in range(size):
            j = draws[:, i]
            a = arr[rows, i].copy()
            arr[rows, i] = arr[rows, j]
            arr[rows, j] = a
        yield arr[:, :size]
        done += m


def _codes_from_coords(n: int, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    g = np.gcd(dx, dy)
    g[g == 0] = 1
    dx = dx // g
    dy = dy // g
    flip = (dx < 0) | ((dx == 0) & (dy < 0))
    dx[flip] = -dx[flip]
    dy[flip] = -dy[flip]
    return dx * (2 * n + 1) + (dy + n)


@lru_cache(maxsize=4)
def _code_table(n: int) -> np.ndarray:
    i = np.arange(n * n, dtype=np.int64)
    x, y = i // n, i % n
    return _codes_from_coords(n, x[None, :] - x[:, None], y[None, :] - y[:, None]).astype(np.int32)


def direction_codes(n: int, idx: np.ndarray) -> np.ndarray:
    """Primitive direction codes from every member to every member, shape (m, s, s).

    The diagonal gets distinct negative sentinels so it never matches.
    """
    if n <= _TABLE_MAX_N:
        code = _code_table(n)[idx[:, :, None], idx[:, None, :]].astype(np.int64)
    else:
        x, y = idx // n, idx % n
        code = _codes_from_coords(n, x[:, None, :] - x[:, :, None], y[:, None, :] - y[:, :, None])
    s = idx.shape[1]
    diag = np.arange(s)
    code[:, diag, diag] = -1 - diag
    return code


def no3l_mask(n: int, idx: np.ndarray) -> np.ndarray:
    """Boolean per row of ``idx``: True iff the subset has no three collinear points.

    Three points are collinear iff two of them lie in the same direction from
    the third.
    """
    code = np.sort(direction_codes(n, idx), axis=2)
    repeated = (code[:, :, 1:] == code[:, :, :-1]).any(axis=(1, 2))
    return ~repeated


def _survival_worker(n: int, size: int, samples: int, rng: np.random.Generator) -> int:
    hits = 0
    for batch in iter_subsets(n, size, samples, rng):
        hits += int(no3l_mask(n, batch).sum())
    return hits


def _run(fn, n, size, samples, seed, workers) -> int:
    parts = _split(samples, workers)
    if workers == 1:
        return fn(n, size, samples, _rng(seed, 0))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(fn, n, size, m, _rng(seed, w)) for w, m in enumerate(parts) if m]
        return sum(f.result() for f in futs)


def _check_common(n: int, samples: int, workers: int) -> int:
    n = check_size(n)
    if samples < 1:
        raise ValueError("samples must be positive")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return n


def sample_survival(n: int, k: float, samples: int, seed: int, workers: int = 1,
                    size: Optional[int] = None) -> TrialSummary:
    """Fraction of uniform random round(kn)-subsets with no three in line.

    ``size`` overrides round(kn) (k is then only used for the prediction).
    """
    n = _check_common(n, samples, workers)
    s = subset_size(n, k) if size is None else size
    if not 3 <= s <= n * n:
        raise ValueError(f"subset size {s} must lie in [3, n^2={n * n}]")
    hits = _run(_survival_worker, n, s, samples, seed, workers)
    return _summary(n, k, s, samples, hits, survival_log(n, k), seed, workers, "no3l")


def random_triples(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """m uniform random unordered triples of distinct point indices, shape (m, 3)."""
    N = n * n
    i = rng.integers(0, N, size=m)
    j = rng.integers(0, N - 1, size=m)
    j += j >= i
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    k = rng.integers(0, N - 2, size=m)
    k += k >= lo
    k += k >= hi
    return np.stack([i, j, k], axis=1)


def collinear_mask(n: int, t: np.ndarray) -> np.ndarray:
    x, y = t // n, t % n
    return (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) == (y[:, 1] - y[:, 0]) * (x[:, 2] - x[:, 0])


def _triple_worker(n: int, size: int, samples: int, rng: np.random.Generator) -> int:
    hits = 0
    done = 0
    while done < samples:
        m = min(_TRIPLE_BATCH, samples - done)
        hits += int(collinear_mask(n, random_triples(n, m, rng)).sum())
        done += m
    return hits


def sample_triple_collinearity(n: int, samples: int, seed: int, workers: int = 1) -> TrialSummary:
    """Fraction of uniform random distinct triples that are collinear."""
    n = _check_common(n, samples, workers)
    if n < 2:
        raise ValueError("triple sampling needs n >= 2")
    hits = _run(_triple_worker, n, 3, samples, seed, workers)
    predicted = math.log(18.0 * math.log(n) / (PI2 * n * n))
    return _summary(n, None, 3, samples, hits, predicted, seed, workers, "collinear")


def independence_gap(n: int, k: float, samples: int, seed: int, workers: int = 1) -> GapResult:
    """Observed log-survival minus the independence prediction (positive: observed survives more)."""
    summ = sample_survival(n, k, samples, seed, workers)
    if summ.survivors == 0:
        return GapResult(None, None, True, math.log(3.0 / samples) - summ.predicted_log, summ)
    gap = math.log(summ.p_hat) - summ.predicted_log
    return GapResult(gap, summ.stderr / summ.p_hat, False, None, summ)


def exact_single_triple_gap(n: int) -> float:
    """Gap when the subset is a single triple: ln(1 - t_n / C(n^2, 3)) - survival_log(n, 3/n)."""
    t = count_triples_fast(n).value
    return math.log1p(-t / math.comb(n * n, 3)) - survival_log(n, 3.0 / n)
