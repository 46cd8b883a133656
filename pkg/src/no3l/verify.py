"""Independent witness checker; depends on grid-core only, never on the solver."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .grid import GridPoint, find_collinear_triple_naive, in_grid, parse_points


@dataclass(frozen=True)
class Verification:
    ok: bool
    n: int
    size: int
    reason: str = ""
    triple: Optional[tuple[GridPoint, GridPoint, GridPoint]] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_points(n: int, points: list[GridPoint]) -> Verification:
    for p in points:
        if not in_grid(p, n):
            return Verification(False, n, len(points), f"point {tuple(p)} outside the {n}x{n} grid")
    seen = set()
    for p in points:
        if p in seen:
            return Verification(False, n, len(points), f"duplicate point {tuple(p)}")
        seen.add(p)
    triple = find_collinear_triple_naive(points)
    if triple is not None:
        a, b, c = (tuple(p) for p in triple)
        return Verification(False, n, len(points), f"collinear triple {a} {b} {c}", triple)
    return Verification(True, n, len(points))


def verify_text(text: str) -> Verification:
    """Raises ValueError if the text is not in witness format."""
    n, points = parse_points(text)
    return verify_points(n, points)


def verify_witness(path: str | Path) -> Verification:
    return verify_text(Path(path).read_text())
