"""Lattice grid, point sets and the collinearity predicate.

Coordinates are 0-based: the n x n grid holds the points (x, y) with
0 <= x, y < n, so it has exactly n**2 points. ``x`` is the column and ``y``
the row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Optional

# Cross products of in-grid points are bounded by 2*n**2 in magnitude, so
# 2*bits(n) + 2 bits suffice. Python ints never overflow; the cap keeps the
# same contract as fixed-width builds.
MAX_N = 1 << 30


class GridPoint(NamedTuple):
    x: int
    y: int


def check_size(n: int) -> int:
    """Validate a grid side length and return it as an int."""
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"grid size must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"grid size must be >= 1, got {n}")
    if n > MAX_N:
        raise ValueError(f"grid size must be <= 2**30, got {n}")
    return n


def in_grid(p: tuple[int, int], n: int) -> bool:
    return 0 <= p[0] < n and 0 <= p[1] < n


def grid_points(n: int) -> list[GridPoint]:
    """All n**2 points in row-major order."""
    return [GridPoint(x, y) for y in range(n) for x in range(n)]


def collinear(a: tuple[int, int], b: tuple[int, int], c: tuple[int, int]) -> bool:
    """True iff the cross product (b - a) x (c - a) vanishes.

    Repeated points count as collinear.
    """
    return (b[0] - a[0]) * (c[1] - a[1]) == (b[1] - a[1]) * (c[0] - a[0])


def interior_count(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Number of lattice points strictly inside the segment ab."""
    if a[0] == b[0] and a[1] == b[1]:
        raise ValueError(f"interior_count needs distinct points, got {a} twice")
    return math.gcd(abs(b[0] - a[0]), abs(b[1] - a[1])) - 1


def direction(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    """Primitive direction of the line through a and b, sign-normalised.

    Two distinct points share a direction from a common third point iff the
    three are collinear.
    """
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = math.gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    return dx, dy


def line_through(a: tuple[int, int], b: tuple[int, int], n: int) -> list[GridPoint]:
    """Every grid point on the full line through distinct points a and b."""
    dx, dy = direction(a, b)
    x, y = a
    while in_grid((x - dx, y - dy), n):
        x, y = x - dx, y - dy
    out = []
    while in_grid((x, y), n):
        out.append(GridPoint(x, y))
        x, y = x + dx, y + dy
    return out


def find_collinear_triple(points: Iterable[tuple[int, int]]) -> Optional[tuple[GridPoint, GridPoint, GridPoint]]:
    """Return some collinear triple of distinct points, or None.

    Buckets the directions from each point to the later ones; a repeated
    direction from a common point is a collinear triple. O(s**2).
    """
    pts = [GridPoint(*p) for p in points]
    for i, p in enumerate(pts):
        seen: dict[tuple[int, int], GridPoint] = {}
        for q in pts[i + 1:]:
            d = direction(p, q)
            if d in seen:
                return p, seen[d], q
            seen[d] = q
    return None


def find_collinear_triple_naive(points: Iterable[tuple[int, int]]) -> Optional[tuple[GridPoint, GridPoint, GridPoint]]:
    """O(s**3) scan over all unordered triples; first hit in lexicographic index order."""
    pts = [GridPoint(*p) for p in points]
    for a, b, c in combinations(pts, 3):
        if collinear(a, b, c):
            return a, b, c
    return None


# The 8 symmetries of the square grid, as maps on a single point.
def dihedral_maps(n: int) -> list[Callable[[tuple[int, int]], GridPoint]]:
    m = n - 1
    return [
        lambda p: GridPoint(p[0], p[1]),
        lambda p: GridPoint(p[1], m - p[0]),
        lambda p: GridPoint(m - p[0], m - p[1]),
        lambda p: GridPoint(m - p[1], p[0]),
        lambda p: GridPoint(m - p[0], p[1]),
        lambda p: GridPoint(p[0], m - p[1]),
        lambda p: GridPoint(p[1], p[0]),
        lambda p: GridPoint(m - p[1], m - p[0]),
    ]


def _row_major(p: GridPoint) -> tuple[int, int]:
    return p[1], p[0]


@dataclass(frozen=True)
class PointSet:
    """An immutable subset of the n x n grid.

    Members are stored sorted in row-major order (by y, then x). Duplicates
    and out-of-grid points are rejected at construction.
    """

    n: int
    points: tuple[GridPoint, ...] = ()
    column_counts: tuple[int, ...] = field(init=False, repr=False, compare=False)
    row_counts: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = check_size(self.n)
        pts = sorted((GridPoint(int(x), int(y)) for x, y in self.points), key=_row_major)
        for p in pts:
            if not in_grid(p, n):
                raise ValueError(f"point {tuple(p)} lies outside the {n}x{n} grid")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise ValueError(f"duplicate point {tuple(p)}")
        cols, rows = [0] * n, [0] * n
        for x, y in pts:
            cols[x] += 1
            rows[y] += 1
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "column_counts", tuple(cols))
        object.__setattr__(self, "row_counts", tuple(rows))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self.points

    def pigeonhole_ok(self) -> bool:
        """No row or column holds more than two members."""
        return max(self.column_counts, default=0) <= 2 and max(self.row_counts, default=0) <= 2

    def transformed(self, f: Callable[[tuple[int, int]], GridPoint]) -> "PointSet":
        return PointSet(self.n, tuple(f(p) for p in self.points))

    def to_text(self) -> str:
        lines = [f"n {self.n}"]
        lines.extend(f"{x} {y}" for x, y in self.points)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PointSet":
        n, pts = parse_points(text)
        return cls(n, tuple(pts))

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def read(cls, path: str | Path) -> "PointSet":
        return cls.from_text(Path(path).read_text())


def parse_points(text: str) -> tuple[int, list[GridPoint]]:
    """Parse the witness format without validating membership.

    The first non-blank line is ``n <size>``; every following non-blank line
    is ``x y`` in decimal. Returns the raw point list so callers can report
    duplicates or out-of-grid points themselves.
    """
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise ValueError("empty witness: missing 'n <size>' header")
    lineno, head = lines[0]
    if len(head) != 2 or head[0] != "n":
        raise ValueError(f"line {lineno}: expected 'n <size>' header, got {' '.join(head)!r}")
    try:
        n = check_size(int(head[1]))
    except ValueError as exc:
        raise ValueError(f"line {lineno}: bad grid size: {exc}") from None
    pts = []
    for lineno, toks in lines[1:]:
        if len(toks) != 2:
            raise ValueError(f"line {lineno}: expected 'x y', got {' '.join(toks)!r}")
        try:
            pts.append(GridPoint(int(toks[0]), int(toks[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer coordinate in {' '.join(toks)!r}") from None
    return n, pts


def is_no3l(s: PointSet | Iterable[tuple[int, int]]) -> bool:
    """True iff no three distinct members are collinear."""
    return find_collinear_triple(s) is None


def is_no3l_naive(s: PointSet | Iterable[tuple[int, int]]) -> bool:
    return find_collinear_triple_naive(s) is None

