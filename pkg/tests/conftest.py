import itertools
from fractions import Fraction

import pytest

from monochrom.equations import Domain


def brute_solutions(coeffs, domain: Domain):
    """Independent k-fold scan over the whole domain."""
    ell = domain.size
    out = []
    for xs in itertools.product(domain.elements(), repeat=len(coeffs)):
        s = sum(a * x for a, x in zip(coeffs, xs))
        if (s % ell == 0) if domain.is_cyclic else (s == 0):
            out.append(xs)
    return out


def brute_mu(coeffs, domain: Domain, rows):
    """sum over solutions of sum_c prod_i rows[x_i][c], divided by #solutions, in Fractions."""
    sols = brute_solutions(coeffs, domain)
    total = Fraction(0)
    for xs in sols:
        for c in range(len(rows[0])):
            prod = Fraction(1)
            for x in xs:
                prod *= rows[x - domain.offset][c]
            total += prod
    return total / len(sols)


@pytest.fixture
def schur():
    from monochrom.equations import validate

    return validate([1, 1, -1])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
