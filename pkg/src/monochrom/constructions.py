"""Explicit probabilistic colorings of Z/pZ that beat the uniform baseline for odd k.

Color 0 has Fourier coefficients -2/p^2 off frequency 0, color 1 has 1/p^2,
colors 2..r-2 are constant and the last color takes the remainder. All colors
have density 1/r. Pointwise values follow from inversion:

    f(0) = 1/r - 2(p-1)/p^2,   f(u) = 1/r + 2/p^2   (u != 0)
    g(0) = 1/r +  (p-1)/p^2,   g(u) = 1/r - 1/p^2   (u != 0)
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import sympy

from monochrom.colorings import ProbabilisticColoring, class_density
from monochrom.commonness import (
    BELOW,
    CommonnessReport,
    analyze,
    baseline,
    color_spectra,
)
from monochrom.equations import Cyclic, LinearEquation
from monochrom.errors import ConstructionCheckFailed, InfeasibleParams
from monochrom.fourier import Spectrum, is_hermitian

CHECK_TOL = 1e-10


def range_feasible(p: int, r: int) -> bool:
    """Sufficient conditions for every color to take values in [0, 1].

    1/r - 2(p-1)/p^2 >= 0 keeps color 0 nonnegative at 0, and
    (r-1)/r + 3(p-1)/p^2 <= 1 keeps the last color nonnegative everywhere.
    """
    spread = Fraction(p - 1, p * p)
    return Fraction(1, r) - 2 * spread >= 0 and Fraction(r - 1, r) + 3 * spread <= 1


def _check_params(eq: LinearEquation, p: int, r: int) -> None:
    if r < 3:
        raise InfeasibleParams(f"the construction needs r >= 3, got {r}")
    if not sympy.isprime(p):
        raise InfeasibleParams(f"{p} is not prime")
    if p <= max(abs(a) for a in eq.coeffs):
        raise InfeasibleParams(f"p = {p} must exceed max |a_i| = {max(abs(a) for a in eq.coeffs)}")
    if any(math.gcd(a, p) != 1 for a in eq.coeffs):
        raise InfeasibleParams(f"p = {p} divides a coefficient of {eq}")
    if not range_feasible(p, r):
        raise InfeasibleParams(
            f"p = {p} violates the range conditions for r = {r}: need "
            f"1/r - 2(p-1)/p^2 >= 0 and (r-1)/r + 3(p-1)/p^2 <= 1"
        )


def choose_prime(eq: LinearEquation, r: int) -> int:
    """Smallest prime above max |a_i| meeting the range conditions."""
    if r < 3:
        raise ValueError("r must be at least 3")
    p = sympy.nextprime(max(abs(a) for a in eq.coeffs))
    while not range_feasible(p, r):
        p = sympy.nextprime(p)
    return int(p)


def paper_coloring(eq: LinearEquation, p: int, r: int) -> ProbabilisticColoring:
    _check_params(eq, p, r)
    q = Fraction(1, p * p)
    share = Fraction(1, r)
    f_zero, f_rest = share - 2 * (p - 1) * q, share + 2 * q
    g_zero, g_rest = share + (p - 1) * q, share - q
    rows = []
    for u in range(p):
        f, g = (f_zero, g_zero) if u == 0 else (f_rest, g_rest)
        row = [f, g] + [share] * (r - 3)
        row.append(1 - sum(row))
        rows.append(row)
    return ProbabilisticColoring.from_fractions(Cyclic(p), rows)


def closed_form_deviation(p: int, k: int, r: int | None = None) -> Fraction:
    """Deviation of the construction for an odd-k equation over Z/pZ.

    Every nonzero frequency t contributes (-2/p^2)^k + 2 (1/p^2)^k since each
    a_i t is again nonzero mod p; there are p - 1 such frequencies. The
    constant middle colors contribute nothing, so ``r`` does not enter.
    """
    if k < 3 or k % 2 == 0:
        raise ValueError(f"k must be odd and at least 3, got {k}")
    return (p - 1) * per_frequency_deviation(p, k)


def per_frequency_deviation(p: int, k: int) -> Fraction:
    """Contribution of a single nonzero frequency: -(2/p^2)^k + 2 (1/p^2)^k."""
    q = Fraction(1, p * p)
    return -((2 * q) ** k) + 2 * q**k


def verify_construction(eq: LinearEquation, p: int, r: int) -> CommonnessReport:
    """Build the coloring, run both mu paths and check every property of the construction."""
    if eq.k % 2 == 0:
        raise InfeasibleParams(f"the construction needs an odd number of terms, got k = {eq.k}")
    coloring = paper_coloring(eq, p, r)
    group = coloring.domain

    def check(ok, what):
        if not ok:
            raise ConstructionCheckFailed(what)

    exact = coloring.exact
    check(all(0 <= x <= 1 for row in exact for x in row), "weights outside [0, 1]")
    check(all(sum(row) == 1 for row in exact), "rows do not sum to 1")
    check(all(0 < sum(row[:-1]) < 1 for row in exact), "partial row sums leave (0, 1)")
    check(all(class_density(coloring, c) == Fraction(1, r) for c in range(r)), "densities differ from 1/r")

    spectra = color_spectra(coloring)
    for c in range(r):
        spec = Spectrum(p, spectra[c])
        check(is_hermitian(spec, 1e-12), f"spectrum of color {c} is not Hermitian")
        off = spectra[c, 1:]
        check(np.all(np.abs(off.imag) < 1e-12) and np.ptp(off.real) < 1e-12,
              f"spectrum of color {c} is not a real constant off frequency 0")

    report = analyze(eq, group, coloring, method="both")
    expected = baseline(eq.k, r) + closed_form_deviation(p, eq.k)
    check(report.mu_direct == expected, f"direct mu {report.mu_direct} != {expected}")
    check(abs(report.mu_fourier - float(expected)) < CHECK_TOL, "Fourier mu disagrees with closed form")
    check(abs(report.deviation - float(closed_form_deviation(p, eq.k))) < CHECK_TOL,
          "Fourier deviation disagrees with closed form")
    check(report.verdict == BELOW, f"verdict is {report.verdict}")
    report.notes.append(f"construction over Z/{p}Z, r = {r}; smallest feasible prime is {choose_prime(eq, r)}")
    return report

