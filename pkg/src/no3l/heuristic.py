"""Numerics of the probabilistic estimate for no-three-in-line set counts.

A random triple of grid points is collinear with probability about
18 ln n / (pi^2 n^2). Treating the C(kn, 3) triples of a kn-point set as
independent gives survival probability exp(-3 k^3 n ln n / pi^2 + O(n)), and
multiplying by C(n^2, kn) gives an expected number of solutions of order
n^{(k - 3k^3/pi^2) n} e^{O(n)}. That vanishes for k > pi/sqrt(3).

The exponent ``2 - 3k^3/pi^2`` comes from the same bookkeeping with 2n
substituted for kn. It agrees with the correct ``k - 3k^3/pi^2`` only at
k = 2 and puts the threshold at (2 pi^2 / 3)^{1/3} instead.

Everything is kept in log space. Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

from scipy.optimize import bisect

from .census import count_triples_fast
from .grid import check_size

PI2 = math.pi**2
LN10 = math.log(10.0)


def subset_size(n: int, k: float) -> int:
    """round(k n), halves rounded up."""
    return math.floor(k * n + 0.5)


def exponent_corrected(k: float) -> float:
    return k - 3.0 * k**3 / PI2


def exponent_erroneous(k: float) -> float:
    return 2.0 - 3.0 * k**3 / PI2


def exponent_comparison(k: float) -> tuple[float, float]:
    """(corrected, erroneous) exponents of n, per unit n, at density k."""
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    return exponent_corrected(k), exponent_erroneous(k)


@dataclass(frozen=True)
class ConjectureConstants:
    k_corrected: float
    k_original: float


def conjecture_constants() -> ConjectureConstants:
    return ConjectureConstants(
        k_corrected=math.pi / math.sqrt(3.0),
        k_original=(2.0 * PI2 / 3.0) ** (1.0 / 3.0),
    )


def positive_root(f: Callable[[float], float], lo: float = 1.0, hi: float = 3.0) -> float:
    """Bisection root of an exponent variant on [lo, hi]."""
    return bisect(f, lo, hi, xtol=1e-15, rtol=4 * 2.0**-52, maxiter=200)


class TripleProbability(NamedTuple):
    exact: Fraction
    asymptotic: float


def triple_probability(n: int) -> TripleProbability:
    """Chance that three distinct random grid points are collinear.

    ``exact`` is the rational t_n / C(n^2, 3).
    """
    n = check_size(n)
    if n < 2:
        raise ValueError("triple probability needs n >= 2")
    t = count_triples_fast(n).value
    return TripleProbability(Fraction(t, math.comb(n * n, 3)), 18.0 * math.log(n) / (PI2 * n * n))


def survival_log(n: int, k: float) -> float:
    """ln of the independence survival probability, -3 k^3 n ln n / pi^2.

    The O(n) correction is not included; see ``survival_bracket``.
    """
    n = check_size(n)
    if n < 2 or not k > 0:
        raise ValueError(f"survival_log needs n >= 2 and k > 0, got n={n}, k={k}")
    if k * n < 3 - 1e-9:  # k = 3/n must pass despite rounding
        raise ValueError(f"survival_log needs k*n >= 3, got k*n={k * n}")
    return -3.0 * k**3 * n * math.log(n) / PI2


def survival_bracket(n: int, k: float, slack: float = 1.0) -> tuple[float, float]:
    """survival_log widened by an explicit +-slack*n for the unspecified O(n) term."""
    s = survival_log(n, k)
    return s - slack * n, s + slack * n


def log_binomial(m: int, r: int) -> float:
    """ln C(m, r) via log-Gamma."""
    return math.lgamma(m + 1) - math.lgamma(r + 1) - math.lgamma(m - r + 1)


def _check_estimate_args(n: int, k: float) -> tuple[int, int]:
    n = check_size(n)
    if n < 2 or not k > 0:
        raise ValueError(f"estimate needs n >= 2 and k > 0, got n={n}, k={k}")
    s = subset_size(n, k)
    if not 3 <= s <= n * n:
        raise ValueError(f"round(k*n)={s} must lie in [3, n^2={n * n}]")
    return n, s


def estimate_solution_count(n: int, k: float) -> tuple[float, float]:
    """(log10 of the expected number of kn-point solutions, leading exponent).

    The count is C(n^2, round(kn)) * exp(survival_log) with exact log-Gamma
    binomials. The leading exponent k - 3k^3/pi^2 is the coefficient of
    n ln n in its natural log.
    """
    n, s = _check_estimate_args(n, k)
    ln_count = log_binomial(n * n, s) + survival_log(n, k)
    return ln_count / LN10, exponent_corrected(k)


def stirling_log_count(n: int, k: float) -> float:
    """Natural log of the solution-count estimate using the asymptotic steps.

    (n^2)!/(n^2 - kn)! is replaced by (n^2)^{kn} and (kn)! by Stirling's
    leading form (kn/e)^{kn}. Differs from the exact-binomial version by
    O(log n).
    """
    n, _ = _check_estimate_args(n, k)
    kn = k * n
    return kn * math.log(n * n) - (kn * math.log(kn) - kn) + survival_log(n, k)


@dataclass(frozen=True)
class EstimateReport:
    n: int
    k: float
    subset_size: int
    p_triple_exact: Optional[float]
    p_triple_asym: float
    survival_log: float
    survival_bracket: tuple[float, float]
    count_log10: float
    count_log10_bracket: tuple[float, float]
    leading_exponent: float
    exponent_corrected: float
    exponent_erroneous: float
    slack: float

    def __post_init__(self) -> None:
        if self.p_triple_exact is not None:
            assert 0.0 <= self.p_triple_exact <= 1.0

    def to_dict(self) -> dict:
        return asdict(self)


def estimate_report(n: int, k: float, slack: float = 1.0, exact: bool = True) -> EstimateReport:
    """Every heuristic quantity at (n, k).

    ``exact=False`` skips the O(n^2) census behind ``p_triple_exact``.
    """
    n, s = _check_estimate_args(n, k)
    count_log10, lead = estimate_solution_count(n, k)
    surv = survival_log(n, k)
    p_exact = float(triple_probability(n).exact) if exact else None
    corr, err = exponent_comparison(k)
    return EstimateReport(
        n=n,
        k=k,
        subset_size=s,
        p_triple_exact=p_exact,
        p_triple_asym=18.0 * math.log(n) / (PI2 * n * n),
        survival_log=surv,
        survival_bracket=survival_bracket(n, k, slack),
        count_log10=count_log10,
        count_log10_bracket=(count_log10 - slack * n / LN10, count_log10 + slack * n / LN10),
        leading_exponent=lead,
        exponent_corrected=corr,
        exponent_erroneous=err,
        slack=slack,
    )
