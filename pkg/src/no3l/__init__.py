"""No-three-in-line problem: exact counts, search, heuristic numerics and Monte Carlo checks."""

__version__ = "0.1.0"

from .grid import GridPoint, PointSet, collinear, interior_count, is_no3l
from .census import TripleCount, compare_asymptotic, count_triples_brute, count_triples_fast
from .solver import SolverConfig, SolverResult, count_maximum_solutions, solve
from .verify import verify_witness
from .heuristic import (
    conjecture_constants,
    estimate_report,
    estimate_solution_count,
    exponent_comparison,
    survival_log,
    triple_probability,
)
from .montecarlo import independence_gap, sample_survival, sample_triple_collinearity

__all__ = [
    "GridPoint", "PointSet", "collinear", "interior_count", "is_no3l",
    "TripleCount", "compare_asymptotic", "count_triples_brute", "count_triples_fast",
    "SolverConfig", "SolverResult", "count_maximum_solutions", "solve", "verify_witness",
    "conjecture_constants", "estimate_report", "estimate_solution_count", "exponent_comparison",
    "survival_log", "triple_probability",
    "independence_gap", "sample_survival", "sample_triple_collinearity",
]
