import math
from fractions import Fraction

import numpy as np
import pytest

from monochrom.colorings import DeterministicColoring
from monochrom.equations import Cyclic, Interval, enumerate_solutions, validate
from monochrom.lifting import (
    BERNOULLI,
    WITHOUT_REPLACEMENT,
    _recolor,
    analytic_lift_value,
    estimate_lifted_mu,
    exact_lift_expectation,
    lift_once,
    repeated_coordinate_count,
    survival_probability,
    takeover_probability,
    trial_rng,
)
from monochrom.search import interval_search


def two_coloring(n, seed=0):
    rng = np.random.default_rng(seed)
    return DeterministicColoring(Interval(n), 2, rng.integers(0, 2, n).tolist())


@pytest.mark.parametrize("n, r", [(6, 3), (10, 2), (33, 3), (40, 5), (7, 7)])
def test_exactly_floor_n_over_r_recolored(n, r):
    base = DeterministicColoring(Interval(n), r - 1, [i % (r - 1) for i in range(n)])
    for seed in range(20):
        lifted = lift_once(base, r, seed)
        assert sum(c == r - 1 for c in lifted.colors) == n // r
        changed = [a != b for a, b in zip(base.colors, lifted.colors)]
        assert sum(changed) == n // r


def test_from_one_coloring():
    base = DeterministicColoring(Interval(9), 1, [0] * 9)
    assert sum(lift_once(base, 2, seed=3).colors) == 4


def test_seed_determinism():
    base = two_coloring(12)
    assert lift_once(base, 3, 5) == lift_once(base, 3, 5)
    outs = {tuple(lift_once(base, 3, s).colors) for s in range(10)}
    assert len(outs) > 1


def test_base_validation():
    with pytest.raises(ValueError):
        lift_once(DeterministicColoring(Interval(6), 3, [0, 1, 2, 0, 1, 2]), 3, 0)
    with pytest.raises(ValueError):
        lift_once(DeterministicColoring(Cyclic(6), 2, [0] * 6), 3, 0)
    with pytest.raises(ValueError):
        lift_once(DeterministicColoring(Interval(2), 2, [0, 1]), 3, 0)


def test_analytic_examples():
    assert analytic_lift_value(3, 3, Fraction(1, 4)) == Fraction(1, 9)
    assert analytic_lift_value(3, 4, Fraction(1, 9)) == Fraction(1, 16)
    value = analytic_lift_value(3, 3, 0.22)
    assert abs(value - (8 / 27 * 0.22 + 1 / 27)) < 1e-15
    assert abs(value - 0.10218) < 1e-4 and value < 1 / 9


@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_threshold_identity(k, r):
    assert analytic_lift_value(k, r, Fraction(1, (r - 1) ** (k - 1))) == Fraction(1, r) ** (k - 1)


@pytest.mark.parametrize("k", [3, 5])
@pytest.mark.parametrize("r", [3, 4, 5])
def test_monotone_below_threshold(k, r):
    threshold = Fraction(1, (r - 1) ** (k - 1))
    previous = None
    for i in range(20):
        mu = threshold * i / 20
        value = analytic_lift_value(k, r, mu)
        assert value < Fraction(1, r) ** (k - 1)
        if previous is not None:
            assert value > previous
        previous = value


def test_repeated_coordinates():
    schur = validate([1, 1, -1])
    assert repeated_coordinate_count(schur, Interval(9)) == (4, Fraction(4, 36))
    brute = [s for s in enumerate_solutions(schur, Interval(9)) if len(set(s.coords)) < 3]
    assert len(brute) == 4
    assert repeated_coordinate_count(validate([1, -1]), Cyclic(5))[0] == 5
    ratios = [repeated_coordinate_count(schur, Interval(n))[1] for n in (20, 40, 80)]
    assert ratios[0] > ratios[1] > ratios[2]


def test_survival_and_takeover_laws():
    assert survival_probability(30, 3, 3) == Fraction(math.comb(27, 10), math.comb(30, 10))
    assert takeover_probability(30, 3, 3) == Fraction(math.comb(27, 7), math.comb(30, 10))
    assert survival_probability(30, 3, 3, BERNOULLI) == Fraction(8, 27)
    assert takeover_probability(30, 3, 3, BERNOULLI) == Fraction(1, 27)
    # the without-replacement law tends to the independent one
    gaps = [abs(survival_probability(n, 3, 3) - Fraction(8, 27)) for n in (30, 300, 3000)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_per_solution_survival_frequency():
    n, r, trials = 30, 3, 20_000
    colors = np.zeros(n, dtype=np.int64)
    triple = [2, 7, 19]
    hits = 0
    for t in range(trials):
        lifted = _recolor(colors, r, trial_rng(11, t), WITHOUT_REPLACEMENT)
        hits += bool(np.all(lifted[triple] == 0))
    p = float(survival_probability(n, r, 3))
    se = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) < 4 * se


def brute_exact_expectation(coeffs, n, base_colors, r, distinct_only):
    """Average over all recolor sets of size n//r, counted directly."""
    from itertools import combinations

    schur_sols = [s.coords for s in enumerate_solutions(validate(coeffs), Interval(n))]
    if distinct_only:
        schur_sols = [s for s in schur_sols if len(set(s)) == len(s)]
    total, count = Fraction(0), 0
    for chosen in combinations(range(1, n + 1), n // r):
        colors = {x: base_colors[x - 1] for x in range(1, n + 1)}
        for x in chosen:
            colors[x] = r - 1
        mono = sum(len({colors[x] for x in s}) == 1 for s in schur_sols)
        total += Fraction(mono, len(schur_sols))
        count += 1
    return total / count


@pytest.mark.parametrize("distinct_only", [False, True])
def test_exact_expectation_matches_full_average(distinct_only):
    base = two_coloring(10, seed=4)
    eq = validate([1, 1, -1])
    exact = exact_lift_expectation(eq, Interval(10), base, 3, distinct_only=distinct_only)
    assert exact == brute_exact_expectation([1, 1, -1], 10, base.colors, 3, distinct_only)


def test_bernoulli_exact_equals_analytic_on_distinct():
    eq = validate([1, 1, -1])
    base = two_coloring(20, seed=1)
    exact = exact_lift_expectation(eq, Interval(20), base, 3, BERNOULLI, distinct_only=True)
    out = estimate_lifted_mu(eq, Interval(20), base, 3, trials=2000, seed=0, model=BERNOULLI, threads=1)
    assert abs(float(exact) - out.analytic_value) < 1e-15
    assert abs(out.distinct_only_mean - float(exact)) < 4 * out.distinct_only_stderr


def test_monochromatic_base_drops_below_one():
    eq = validate([1, 1, -1])
    base = DeterministicColoring(Interval(6), 1, [0] * 6)
    out = estimate_lifted_mu(eq, Interval(6), base, 2, trials=1000, seed=0, threads=1)
    assert out.empirical_mean < 1
    assert 0 <= out.empirical_mean <= 1


def test_estimate_against_oracle_and_thread_independence():
    eq = validate([1, 1, -1])
    base = interval_search(eq, 24, 2, max_cuts=2).best_coloring
    one = estimate_lifted_mu(eq, Interval(24), base, 3, trials=3000, seed=7, threads=1)
    many = estimate_lifted_mu(eq, Interval(24), base, 3, trials=3000, seed=7, threads=4)
    assert one == many
    assert abs(one.distinct_only_mean - one.exact_value_distinct) < 3 * one.distinct_only_stderr
    assert abs(one.empirical_mean - one.exact_value) < 3 * one.empirical_stderr


def test_stderr_scaling():
    eq = validate([1, 1, -1])
    base = two_coloring(20, seed=2)
    small = estimate_lifted_mu(eq, Interval(20), base, 3, trials=10_000, seed=1)
    large = estimate_lifted_mu(eq, Interval(20), base, 3, trials=40_000, seed=1)
    assert 1.7 < small.empirical_stderr / large.empirical_stderr < 2.3


def test_trial_floor():
    with pytest.raises(ValueError):
        estimate_lifted_mu(validate([1, 1, -1]), Interval(10), two_coloring(10), 3, trials=50)
