import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from no3l.census import count_triples_fast
from no3l.grid import is_no3l
from no3l.heuristic import survival_log
from no3l.montecarlo import (
    RNG_ALGORITHM,
    collinear_mask,
    exact_single_triple_gap,
    independence_gap,
    iter_subsets,
    no3l_mask,
    random_triples,
    sample_survival,
    sample_triple_collinearity,
)


def within(p_hat, exact, se, sigmas=3.0):
    return abs(p_hat - exact) <= sigmas * se


def test_whole_2x2_grid_always_survives():
    s = sample_survival(2, 2.0, 500, seed=1)
    assert s.subset_size == 4 and s.p_hat == 1.0 and s.stderr == 0.0


def test_single_triple_survival_n3():
    s = sample_survival(3, 1.0, 100_000, seed=11)
    assert s.subset_size == 3
    assert within(s.p_hat, 1 - 8 / 84, s.stderr)


def test_survival_determinism():
    a = sample_survival(10, 1.5, 20_000, seed=5)
    b = sample_survival(10, 1.5, 20_000, seed=5)
    assert a == b
    assert a.rng == RNG_ALGORITHM and a.seed == 5


def test_worker_split_is_reproducible():
    a = sample_survival(6, 0.8, 30_000, seed=9, workers=3)
    b = sample_survival(6, 0.8, 30_000, seed=9, workers=3)
    assert a.survivors == b.survivors and a.workers == 3
    # the single-worker stream is a different but equally valid estimate
    c = sample_survival(6, 0.8, 30_000, seed=9)
    assert abs(a.p_hat - c.p_hat) <= 3 * math.hypot(a.stderr, c.stderr)


def test_summary_invariants():
    s = sample_survival(7, 0.7, 5_000, seed=2)
    assert 0 <= s.survivors <= s.samples
    assert s.p_hat == s.survivors / s.samples
    assert s.stderr == pytest.approx(math.sqrt(s.p_hat * (1 - s.p_hat) / s.samples))
    assert s.predicted_log == survival_log(7, 0.7)


def test_subset_sampler_uniform_inclusion():
    rng = np.random.Generator(np.random.PCG64(2024))
    counts = np.zeros(25, dtype=np.int64)
    for batch in iter_subsets(5, 5, 100_000, rng):
        assert (np.sort(batch, axis=1)[:, 1:] != np.sort(batch, axis=1)[:, :-1]).all()
        counts += np.bincount(batch.ravel(), minlength=25)
    assert counts.sum() == 500_000
    assert chisquare(counts).pvalue > 1e-3


def test_subset_sampler_uniform_over_subsets():
    # all C(4, 2) = 6 subsets of a 2x2 grid are equally likely
    rng = np.random.Generator(np.random.PCG64(7))
    seen = {}
    for batch in iter_subsets(2, 2, 60_000, rng):
        for row in np.sort(batch, axis=1).tolist():
            seen[tuple(row)] = seen.get(tuple(row), 0) + 1
    assert len(seen) == 6
    assert chisquare(list(seen.values())).pvalue > 1e-3


def test_vectorised_no3l_agrees_with_grid_core():
    rng = np.random.Generator(np.random.PCG64(3))
    for n, size in [(4, 5), (7, 9), (12, 10), (60, 12)]:
        for batch in iter_subsets(n, size, 400, rng):
            fast = no3l_mask(n, batch)
            for row, ok in zip(batch.tolist(), fast.tolist()):
                assert ok == is_no3l([(i // n, i % n) for i in row])


def test_random_triples_distinct_and_collinear_mask():
    rng = np.random.Generator(np.random.PCG64(0))
    t = random_triples(6, 50_000, rng)
    assert ((t[:, 0] != t[:, 1]) & (t[:, 0] != t[:, 2]) & (t[:, 1] != t[:, 2])).all()
    assert t.min() >= 0 and t.max() < 36
    m = collinear_mask(6, np.array([[0, 7, 14], [0, 1, 6]]))
    assert m.tolist() == [True, False]


def test_triples_n2_never_collinear():
    s = sample_triple_collinearity(2, 10_000, seed=4)
    assert s.survivors == 0 and s.event == "collinear"


def test_triples_n3():
    s = sample_triple_collinearity(3, 100_000, seed=12)
    assert within(s.p_hat, 2 / 21, s.stderr)


def test_triples_n50_against_census():
    exact = count_triples_fast(50).value / math.comb(2500, 3)
    s = sample_triple_collinearity(50, 1_000_000, seed=2026)
    assert within(s.p_hat, exact, s.stderr)


def test_triples_determinism_and_workers():
    a = sample_triple_collinearity(20, 300_000, seed=1, workers=4)
    b = sample_triple_collinearity(20, 300_000, seed=1, workers=4)
    assert a == b


def test_single_triple_survival_matches_triple_sampler():
    n = 6
    surv = sample_survival(n, 3 / n, 100_000, seed=21)
    trip = sample_triple_collinearity(n, 100_000, seed=22)
    assert abs(surv.p_hat - (1 - trip.p_hat)) <= 3 * math.hypot(surv.stderr, trip.stderr)


def test_gap_whole_grid():
    g = independence_gap(2, 2.0, 1_000, seed=3)
    assert not g.all_died
    assert g.gap == pytest.approx(-survival_log(2, 2.0))
    assert g.stderr == 0.0


@pytest.mark.parametrize("n", [5, 10, 20])
def test_gap_single_triple(n):
    g = independence_gap(n, 3 / n, 100_000, seed=100 + n)
    assert g.summary.subset_size == 3
    exact = exact_single_triple_gap(n)
    t = count_triples_fast(n).value
    assert exact == pytest.approx(
        math.log(float(1 - Fraction(t, math.comb(n * n, 3)))) - survival_log(n, 3 / n)
    )
    assert abs(g.gap - exact) <= 3 * g.stderr


def test_gap_all_died_is_flagged():
    g = independence_gap(30, 1.2, 2_000, seed=1)
    assert g.all_died and g.gap is None
    assert g.upper_bound == pytest.approx(math.log(3 / 2_000) - survival_log(30, 1.2))
    d = g.to_dict()
    assert d["all_died"] and d["gap"] is None


def test_preconditions():
    with pytest.raises(ValueError):
        sample_survival(3, 0.5, 10, seed=0)
    with pytest.raises(ValueError):
        sample_survival(3, 4.0, 10, seed=0)
    with pytest.raises(ValueError):
        sample_survival(5, 1.0, 0, seed=0)
    with pytest.raises(ValueError):
        sample_triple_collinearity(1, 10, seed=0)
