"""Exact backtracking search for large no-three-in-line sets.

Columns are filled left to right with 0, 1 or 2 points each. State is a
bitmask over the n*n grid (bit ``x*n + y``): every chosen pair forbids the
rest of its line, and the chosen set only ever grows along a branch, so
backtracking restores the parent's mask from the recursion stack.

A node is pruned when the points already placed plus min(2, free cells) over
the remaining columns cannot beat the incumbent.
"""

from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .grid import GridPoint, PointSet, check_size, is_no3l, grid_points, line_through

EXHAUSTIVE_CAP = 5
_CHECK_EVERY = 1024


@dataclass(frozen=True)
class SolverConfig:
    """Search limits.

    ``target_size=None`` means 2n unless ``exhaustive`` is set, in which case
    the search runs until the tree is exhausted (or a budget trips).
    """

    node_budget: Optional[int] = None
    time_budget: Optional[float] = 60.0
    target_size: Optional[int] = None
    exhaustive: bool = False
    symmetry_breaking: bool = False
    thread_count: int = 1

    def __post_init__(self) -> None:
        if self.node_budget is not None and self.node_budget < 1:
            raise ValueError("node_budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")
        if self.thread_count < 1:
            raise ValueError("thread_count must be >= 1")

    def resolved_target(self, n: int) -> Optional[int]:
        if self.target_size is not None:
            return self.target_size
        return None if self.exhaustive else 2 * n


@dataclass(frozen=True)
class SolverResult:
    n: int
    best_size: int
    witness: PointSet
    proven_optimal: bool
    nodes_explored: int
    elapsed: float  # seconds
    config: SolverConfig = field(default_factory=SolverConfig, repr=False)

    def __post_init__(self) -> None:
        assert self.best_size == len(self.witness)
        assert self.best_size <= maximum_bound(self.n)


class _Stop(Exception):
    pass


class _Search:
    def __init__(self, n: int, cfg: SolverConfig, shared_best=None, deadline: Optional[float] = None):
        self.n = n
        self.cfg = cfg
        self.target = cfg.resolved_target(n)
        self.shared_best = shared_best
        self.deadline = deadline
        self.nodes = 0
        self.best = 0
        self.best_set: tuple[int, ...] = ()
        self.exhausted = False
        n2 = n * n
        self.pts = [GridPoint(i // n, i % n) for i in range(n2)]
        self.line = [[0] * n2 for _ in range(n2)]
        for i in range(n2):
            for j in range(i + 1, n2):
                m = 0
                for p in line_through(self.pts[i], self.pts[j], n):
                    m |= 1 << (p.x * n + p.y)
                self.line[i][j] = self.line[j][i] = m
        full = (1 << n) - 1
        self.col_mask = [full << (c * n) for c in range(n)]
        # Per-column choices in branch order: pairs lexicographic, then singles.
        self.choices = [(r1, r2) for r1, r2 in combinations(range(n), 2)] + [(r,) for r in range(n)]

    def _tick(self) -> None:
        self.nodes += 1
        budget = self.cfg.node_budget
        if budget is not None and self.nodes > budget:
            raise _Stop
        if self.nodes % _CHECK_EVERY == 0:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Stop
            if self.shared_best is not None and self.shared_best.value > self.best:
                # another worker improved; only strictly better sets matter here
                self.best = self.shared_best.value
                self.best_set = ()

    def _add(self, chosen: list[int], forb: int, p: int) -> int:
        line = self.line[p]
        for q in chosen:
            forb |= line[q]
        return forb | (1 << p)

    def _capacity(self, col: int, forb: int) -> int:
        cap = 0
        for c in range(col, self.n):
            free = (self.col_mask[c] & ~forb).bit_count()
            cap += 2 if free >= 2 else free
        return cap

    def _record(self, chosen: list[int]) -> None:
        k = len(chosen)
        self.best = k
        self.best_set = tuple(chosen)
        if self.shared_best is not None:
            with self.shared_best.get_lock():
                if self.shared_best.value < k:
                    self.shared_best.value = k
        if self.target is not None and k >= self.target:
            raise _Stop

    def _column_options(self, col: int):
        base = col * self.n
        for ch in self.choices:
            if self.cfg.symmetry_breaking and col == 0:
                flipped = tuple(sorted(self.n - 1 - r for r in ch))
                if flipped < ch:
                    continue
            yield tuple(base + r for r in ch)
        yield ()

    def _descend(self, col: int, chosen: list[int], forb: int) -> None:
        self._tick()
        if len(chosen) > self.best:
            self._record(chosen)
        if col == self.n:
            return
        if len(chosen) + self._capacity(col, forb) <= self.best:
            return
        for opt in self._column_options(col):
            f = forb
            ok = True
            added = 0
            for p in opt:
                if f >> p & 1:
                    ok = False
                    break
                f = self._add(chosen, f, p)
                chosen.append(p)
                added += 1
            if ok:
                self._descend(col + 1, chosen, f)
            del chosen[len(chosen) - added:]

    def run(self, first: Optional[tuple[int, ...]] = None) -> None:
        """Search the whole tree, or only the subtree under one first-column choice."""
        try:
            if first is None:
                self._descend(0, [], 0)
            else:
                chosen: list[int] = []
                f = 0
                for p in first:
                    f = self._add(chosen, f, p)
                    chosen.append(p)
                self._descend(1, chosen, f)
            self.exhausted = True
        except _Stop:
            # reaching the pigeonhole bound settles optimality
            self.exhausted = self.best == maximum_bound(self.n)

    def count(self, goal: int) -> int:
        """Number of subsets of exactly ``goal`` points with no three in line."""
        total = 0

        def rec(col: int, chosen: list[int], forb: int) -> None:
            nonlocal total
            k = len(chosen)
            if k == goal:
                total += 1
                return
            if col == self.n or k + self._capacity(col, forb) < goal:
                return
            for opt in self._column_options(col):
                f = forb
                ok = True
                added = 0
                for p in opt:
                    if f >> p & 1:
                        ok = False
                        break
                    f = self._add(chosen, f, p)
                    chosen.append(p)
                    added += 1
                if ok:
                    rec(col + 1, chosen, f)
                del chosen[len(chosen) - added:]

        rec(0, [], 0)
        return total

    def witness(self) -> PointSet:
        return PointSet(self.n, tuple(self.pts[i] for i in self.best_set))


# Worker state for the process pool; set by _init_worker.
_W: dict = {}


def _init_worker(n, cfg, shared_best, deadline):
    _W.update(n=n, cfg=cfg, shared_best=shared_best, deadline=deadline)


def _solve_branch(first):
    s = _Search(_W["n"], _W["cfg"], _W["shared_best"], _W["deadline"])
    s.run(first)
    return s.best_set, s.nodes, s.exhausted


def solve(n: int, cfg: Optional[SolverConfig] = None) -> SolverResult:
    """Find a large (optimal, if the tree is exhausted) no-three-in-line set."""
    n = check_size(n)
    cfg = cfg or SolverConfig()
    t0 = time.monotonic()
    deadline = t0 + cfg.time_budget if cfg.time_budget is not None else None

    if cfg.thread_count == 1 or n < 3:
        s = _Search(n, cfg, deadline=deadline)
        s.run()
        return SolverResult(n, s.best, s.witness(), s.exhausted, s.nodes, time.monotonic() - t0, cfg)

    # Split at the first column; workers share the incumbent size.
    probe = _Search(n, cfg)
    firsts = list(probe._column_options(0))
    shared = mp.Value("i", 0)
    with mp.get_context("fork").Pool(
        cfg.thread_count, initializer=_init_worker, initargs=(n, cfg, shared, deadline)
    ) as pool:
        outs = pool.map(_solve_branch, firsts, chunksize=1)
    best_set: tuple[int, ...] = ()
    for bs, _, _ in outs:  # earliest branch wins ties
        if len(bs) > len(best_set):
            best_set = bs
    nodes = sum(o[1] for o in outs)
    exhausted = all(o[2] for o in outs) or len(best_set) == maximum_bound(n)
    witness = PointSet(n, tuple(probe.pts[i] for i in best_set))
    return SolverResult(n, len(best_set), witness, exhausted, nodes, time.monotonic() - t0, cfg)


def count_maximum_solutions(n: int, cap: int = EXHAUSTIVE_CAP) -> int:
    """Raw (labelled, not symmetry-reduced) number of maximum no-three-in-line sets."""
    n = check_size(n)
    if n > cap:
        raise ValueError(f"exhaustive count refuses n={n} > cap {cap}")
    s = _Search(n, SolverConfig(time_budget=None, exhaustive=True))
    for goal in range(2 * n, -1, -1):
        c = s.count(goal)
        if c:
            return c
    return 0


def count_maximum_solutions_naive(n: int) -> int:
    """Oracle: scan all subsets of size f_n (found top-down from 2n) with is_no3l."""
    n = check_size(n)
    pts = grid_points(n)
    for size in range(min(2 * n, n * n), -1, -1):
        c = sum(1 for sub in combinations(pts, size) if is_no3l(sub))
        if c:
            return c
    return 0


def maximum_bound(n: int) -> int:
    """Pigeonhole bound: at most two points per column (n**2 for n < 2)."""
    return min(2 * n, n * n)


__all__ = [
    "SolverConfig",
    "SolverResult",
    "solve",
    "count_maximum_solutions",
    "count_maximum_solutions_naive",
    "maximum_bound",
    "EXHAUSTIVE_CAP",
]
