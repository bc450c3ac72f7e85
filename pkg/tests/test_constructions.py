from fractions import Fraction

import numpy as np
import pytest

from conftest import brute_mu
from monochrom.colorings import class_density
from monochrom.commonness import BELOW, deviation, expected_mono_direct, mu_fourier
from monochrom.constructions import (
    choose_prime,
    closed_form_deviation,
    paper_coloring,
    per_frequency_deviation,
    range_feasible,
    verify_construction,
)
from monochrom.equations import Cyclic, validate
from monochrom.errors import ConstructionCheckFailed, InfeasibleParams
from monochrom.fourier import Spectrum, idft


def test_choose_prime_examples(schur):
    assert choose_prime(schur, 3) == 11
    assert choose_prime(schur, 5) == 17
    assert choose_prime(validate([12, 1, -1]), 3) == 13


def test_choose_prime_scan_oracle():
    def feasible(p, r):
        return 1 / r - 2 * (p - 1) / p**2 >= 0 and (r - 1) / r + 3 * (p - 1) / p**2 <= 1

    primes = [p for p in range(2, 200) if all(p % d for d in range(2, p))]
    for r in (3, 4, 5, 6):
        for top in (1, 3, 12, 30):
            eq = validate([top, 1, -1])
            expected = next(p for p in primes if p > top and feasible(p, r))
            assert choose_prime(eq, r) == expected
            assert range_feasible(expected, r)


def test_closed_form_values(schur):
    col = paper_coloring(schur, 11, 3)
    rows = col.exact
    assert list(rows[0][:2]) == [Fraction(61, 363), Fraction(151, 363)]
    for u in range(1, 11):
        assert list(rows[u][:2]) == [Fraction(127, 363), Fraction(118, 363)]
    assert all(sum(r) == 1 for r in rows)


def test_pointwise_values_invert_the_prescribed_spectra(schur):
    p, r = 11, 3
    col = paper_coloring(schur, p, r)
    for c, off in [(0, -2 / p**2), (1, 1 / p**2)]:
        coeffs = np.full(p, off, dtype=complex)
        coeffs[0] = 1 / r
        values = idft(Spectrum(p, coeffs)).real
        assert np.allclose(values, col.column(c), atol=1e-15)


def test_densities_are_exactly_one_over_r(schur):
    col = paper_coloring(schur, 11, 3)
    assert [class_density(col, c) for c in range(3)] == [Fraction(1, 3)] * 3


def test_middle_colors_constant(schur):
    col = paper_coloring(schur, 17, 5)
    for row in col.exact:
        assert row[2] == row[3] == Fraction(1, 5)


def test_infeasible_prime(schur):
    with pytest.raises(InfeasibleParams):
        paper_coloring(schur, 7, 3)
    with pytest.raises(InfeasibleParams):
        paper_coloring(schur, 12, 3)
    with pytest.raises(InfeasibleParams):
        paper_coloring(schur, 11, 2)


def test_exact_mu_p11(schur):
    col = paper_coloring(schur, 11, 3)
    expected = Fraction(1, 9) - Fraction(60, 11**6)
    assert expected_mono_direct(schur, Cyclic(11), col) == expected
    assert brute_mu([1, 1, -1], Cyclic(11), col.exact) == expected
    assert closed_form_deviation(11, 3) == Fraction(-60, 11**6)
    assert per_frequency_deviation(11, 3) == Fraction(-6, 11**6)
    assert abs(deviation(schur, Cyclic(11), col) - float(closed_form_deviation(11, 3))) < 1e-12


@pytest.mark.parametrize("p", [11, 13, 17, 19])
@pytest.mark.parametrize("k", [3, 5])
def test_closed_form_negative_and_independent_of_r(p, k):
    values = {closed_form_deviation(p, k, r) for r in (3, 4, 5)}
    assert len(values) == 1 and values.pop() < 0


def test_closed_form_rejects_even_k():
    with pytest.raises(ValueError):
        closed_form_deviation(11, 4)


GRID = [(p, coeffs, r) for p in (11, 13, 17, 19) for coeffs in ([1, 1, -1], [1, 2, 3, 4, -5]) for r in (3, 4, 5)]


@pytest.mark.parametrize("p, coeffs, r", GRID)
def test_grid(p, coeffs, r):
    eq = validate(coeffs)
    if not range_feasible(p, r):
        with pytest.raises(InfeasibleParams):
            verify_construction(eq, p, r)
        return
    report = verify_construction(eq, p, r)
    base = Fraction(1, r) ** (eq.k - 1)
    assert report.verdict == BELOW
    assert report.mu_direct < base
    assert report.mu_direct == base + closed_form_deviation(p, eq.k)
    assert abs(report.mu_fourier - float(report.mu_direct)) < 1e-12
    col = paper_coloring(eq, p, r)
    assert all(0 < sum(row[:-1]) < 1 for row in col.exact)


def test_r4_below_one_sixteenth(schur):
    col = paper_coloring(schur, 11, 4)
    assert expected_mono_direct(schur, Cyclic(11), col) < Fraction(1, 16)
    assert mu_fourier(schur, Cyclic(11), col) < 1 / 16


def test_even_k_rejected():
    with pytest.raises(InfeasibleParams):
        verify_construction(validate([1, 1, -1, -1]), 11, 3)


def test_check_failure_is_assertion(monkeypatch, schur):
    import monochrom.constructions as mod

    monkeypatch.setattr(mod, "closed_form_deviation", lambda p, k, r=None: Fraction(0))
    with pytest.raises(ConstructionCheckFailed) as info:
        verify_construction(schur, 11, 3)
    assert isinstance(info.value, AssertionError)
