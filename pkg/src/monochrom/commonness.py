"""Monochromatic-solution proportions, deviations and Sidorenko densities.

The proportion mu of monochromatic solutions is computed two independent ways:

* ``expected_mono_direct`` sums over the enumerated solution set, exactly in
  rational arithmetic when the coloring carries Fractions;
* ``mu_fourier`` uses the identity
  mu = sum_c sum_t prod_i hat h_c(a_i t)
  over Z/lZ, valid when some coefficient is a unit mod l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from monochrom.colorings import (
    DeterministicColoring,
    ProbabilisticColoring,
    class_density,
    from_deterministic,
)
from monochrom.equations import Domain, LinearEquation, count_solutions, solution_array
from monochrom.errors import (
    CoprimalityViolation,
    DegenerateEquation,
    DomainMismatch,
    GroupTooLarge,
    NoSolutions,
)
from monochrom.fourier import dft

VERDICT_TOL = 1e-12
MAX_SIDORENKO_MODULUS = 24

BELOW = "below_baseline"
AT = "at_baseline"
ABOVE = "above_baseline"


def baseline(k: int, r: int) -> Fraction:
    """Monochromatic proportion of a uniformly random r-coloring."""
    return Fraction(1, r) ** (k - 1)


def verdict_for(mu, base, tol: float = VERDICT_TOL) -> str:
    gap = float(Fraction(mu) - Fraction(base)) if isinstance(mu, Fraction) else float(mu) - float(base)
    if abs(gap) <= tol:
        return AT
    return BELOW if gap < 0 else ABOVE


def _check_domain(domain: Domain, coloring) -> None:
    if coloring.domain != domain:
        raise DomainMismatch(f"coloring is over {coloring.domain}, expected {domain}")


def mono_count(eq: LinearEquation, domain: Domain, coloring: DeterministicColoring) -> int:
    _check_domain(domain, coloring)
    sols = solution_array(eq, domain)
    if len(sols) == 0:
        return 0
    c = coloring.as_array()[sols]
    return int(np.all(c == c[:, :1], axis=1).sum())


def _exact_mono_sum(sols: np.ndarray, rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """sum over solutions and colors of prod_i rows[x_i][c], exactly."""
    # collapse positions with identical weight rows, then identical solution patterns
    classes: dict[tuple, int] = {}
    row_class = np.array([classes.setdefault(tuple(row), len(classes)) for row in rows], dtype=np.int64)
    patterns, counts = np.unique(np.sort(row_class[sols], axis=1), axis=0, return_counts=True)
    class_rows = list(classes)
    r = len(class_rows[0])
    total = Fraction(0)
    for pattern, mult in zip(patterns.tolist(), counts.tolist()):
        term = Fraction(0)
        for c in range(r):
            prod = Fraction(1)
            for cls in pattern:
                prod *= class_rows[cls][c]
                if not prod:
                    break
            term += prod
        total += mult * term
    return total


def expected_mono_direct(eq: LinearEquation, domain: Domain, coloring):
    """Expected proportion of monochromatic solutions by direct enumeration.

    Returns a Fraction for exact (rational or deterministic) colorings, else a float.
    """
    _check_domain(domain, coloring)
    sols = solution_array(eq, domain)
    if len(sols) == 0:
        raise NoSolutions(f"{eq} has no solutions in {domain}")
    if isinstance(coloring, DeterministicColoring):
        return Fraction(mono_count(eq, domain, coloring), len(sols))
    if coloring.exact is not None:
        return _exact_mono_sum(sols, coloring.exact) / len(sols)
    w = coloring.weights
    total = 0.0
    for c in range(coloring.r):
        total += float(np.prod(w[:, c][sols], axis=1).sum())
    return total / len(sols)


def color_spectra(coloring: ProbabilisticColoring, complement: bool = False) -> np.ndarray:
    """Fourier coefficients of each color column, shape (r, l).

    With ``complement`` the last color's spectrum is derived from the others:
    minus their sum off frequency 0 and one minus their densities at 0.
    """
    ell = coloring.domain.size
    spectra = np.array([dft(coloring.weights[:, c], ell).coeffs for c in range(coloring.r)])
    if complement:
        rest = spectra[:-1].sum(axis=0)
        spectra[-1] = -rest
        spectra[-1, 0] = 1 - rest[0]
    return spectra


def _fourier_terms(eq: LinearEquation, coloring: ProbabilisticColoring, complement: bool) -> np.ndarray:
    domain = coloring.domain
    if not domain.is_cyclic:
        raise ValueError("the Fourier path needs a cyclic domain")
    ell = domain.size
    if not eq.has_unit_coefficient(ell):
        raise CoprimalityViolation(f"no coefficient of {eq} is coprime to {ell}")
    spectra = color_spectra(coloring, complement)
    idx = np.outer(np.arange(ell), np.array(eq.coeffs, dtype=np.int64)) % ell
    # terms[c, t] = prod_i hat h_c(a_i t)
    return np.prod(spectra[:, idx], axis=2)


def mu_fourier(eq: LinearEquation, group: Domain, coloring: ProbabilisticColoring, complement: bool = False) -> float:
    _check_domain(group, coloring)
    return float(_fourier_terms(eq, coloring, complement).sum().real)


def deviation(eq: LinearEquation, group: Domain, coloring: ProbabilisticColoring, complement: bool = False) -> float:
    """Nonzero-frequency part of mu: mu = sum_c density_c**k + deviation."""
    _check_domain(group, coloring)
    return float(_fourier_terms(eq, coloring, complement)[:, 1:].sum().real)


@dataclass
class CommonnessReport:
    equation: LinearEquation
    domain: Domain
    r: int
    mu: float
    baseline: Fraction
    deviation: float
    method: str
    verdict: str
    total_solutions: int
    mu_direct: Optional[float | Fraction] = None
    mu_fourier: Optional[float] = None
    deviation_method: str = "fourier"
    notes: list[str] = field(default_factory=list)

    @property
    def expected_count(self) -> float:
        return self.mu * self.total_solutions

    @property
    def path_gap(self) -> Optional[float]:
        if self.mu_direct is None or self.mu_fourier is None:
            return None
        return abs(float(self.mu_direct) - self.mu_fourier)

    def to_dict(self) -> dict:
        out = {
            "equation": list(self.equation.coeffs),
            "k": self.equation.k,
            "domain": {"kind": self.domain.kind, "size": self.domain.size},
            "r": self.r,
            "total_solutions": self.total_solutions,
            "mu": {"value": float(self.mu), "method": self.method},
            "expected_count": {"value": float(self.expected_count), "method": self.method},
            "baseline": {"value": float(self.baseline), "exact": str(self.baseline), "method": "analytic"},
            "deviation": {"value": float(self.deviation), "method": self.deviation_method},
            "verdict": self.verdict,
        }
        if self.mu_direct is not None:
            entry = {"value": float(self.mu_direct), "method": "direct"}
            if isinstance(self.mu_direct, Fraction):
                entry["exact"] = str(self.mu_direct)
            out["mu_direct"] = entry
        if self.mu_fourier is not None:
            out["mu_fourier"] = {"value": self.mu_fourier, "method": "fourier"}
        if self.path_gap is not None:
            out["path_gap"] = {"value": self.path_gap, "method": "both"}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def analyze(eq: LinearEquation, domain: Domain, coloring, method: str = "auto") -> CommonnessReport:
    """Compute mu by every applicable path and classify against the baseline.

    ``method`` is one of ``auto`` (both paths when the Fourier identity applies),
    ``direct``, ``fourier`` or ``both``.
    """
    _check_domain(domain, coloring)
    prob = from_deterministic(coloring) if isinstance(coloring, DeterministicColoring) else coloring
    r = coloring.r
    notes = []
    fourier_ok = domain.is_cyclic and eq.has_unit_coefficient(domain.size)
    if method in ("fourier", "both") and not fourier_ok:
        reason = "domain is not cyclic" if not domain.is_cyclic else f"no coefficient is coprime to {domain.size}"
        raise CoprimalityViolation(reason)
    run_direct = method in ("auto", "direct", "both")
    run_fourier = method in ("fourier", "both") or (method == "auto" and fourier_ok)

    mu_d = expected_mono_direct(eq, domain, prob) if run_direct else None
    mu_f = mu_fourier(eq, domain, prob) if run_fourier else None
    if run_direct and run_fourier:
        used = "both"
    else:
        used = "direct" if run_direct else "fourier"
    mu = mu_d if mu_d is not None else mu_f

    densities = [class_density(prob, c) for c in range(prob.r)]
    if run_fourier:
        dev = deviation(eq, domain, prob)
        dev_method = "fourier"
    else:
        if isinstance(mu, Fraction):
            dev = float(mu - sum(Fraction(d) ** eq.k for d in densities))
        else:
            dev = float(mu) - sum(float(d) ** eq.k for d in densities)
        dev_method = "direct"
        if not domain.is_cyclic:
            notes.append("deviation computed as mu - sum(density^k); no Fourier meaning on intervals")

    base = baseline(eq.k, r)
    return CommonnessReport(
        equation=eq,
        domain=domain,
        r=r,
        mu=float(mu),
        baseline=base,
        deviation=dev,
        method=used,
        verdict=verdict_for(mu, base),
        total_solutions=count_solutions(eq, domain),
        mu_direct=mu_d,
        mu_fourier=mu_f,
        deviation_method=dev_method,
        notes=notes,
    )


# --- Sidorenko densities ---------------------------------------------------

@dataclass(frozen=True)
class Subset:
    domain: Domain
    members: frozenset

    def __post_init__(self):
        members = frozenset(int(x) for x in self.members)
        object.__setattr__(self, "members", members)
        if any(x < 0 or x >= self.domain.size for x in members):
            raise ValueError(f"members must be residues mod {self.domain.size}")

    @classmethod
    def from_mask(cls, domain: Domain, mask: int) -> "Subset":
        return cls(domain, frozenset(x for x in range(domain.size) if mask >> x & 1))

    @property
    def mask(self) -> int:
        return sum(1 << x for x in self.members)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.members), self.domain.size)


def _check_nondegenerate(eq: LinearEquation, group: Domain) -> None:
    if not group.is_cyclic:
        raise ValueError("Sidorenko densities are defined over cyclic groups")
    if all(a % group.size == 0 for a in eq.coeffs):
        raise DegenerateEquation(f"every coefficient of {eq} vanishes mod {group.size}")


def t_L(eq: LinearEquation, group: Domain, subset: Subset) -> Fraction:
    """Fraction of solutions lying entirely inside ``subset``."""
    _check_nondegenerate(eq, group)
    sols = solution_array(eq, group)
    inside = np.zeros(group.size, dtype=bool)
    inside[list(subset.members)] = True
    return Fraction(int(np.all(inside[sols], axis=1).sum()), len(sols))


def sidorenko_tallies(eq: LinearEquation, group: Domain) -> np.ndarray:
    """inside[A] = number of solutions contained in A, for every bitmask A.

    Each solution is reduced to the bitmask of its coordinates; a subset-sum
    (zeta) transform over the 2^l lattice then counts solutions below each A.
    """
    _check_nondegenerate(eq, group)
    ell = group.size
    if ell > MAX_SIDORENKO_MODULUS:
        raise GroupTooLarge(f"2^{ell} subsets exceeds the cap of 2^{MAX_SIDORENKO_MODULUS}")
    sols = solution_array(eq, group)
    masks = np.bitwise_or.reduce(np.left_shift(np.int64(1), sols), axis=1)
    tally = np.bincount(masks, minlength=1 << ell).astype(np.int64)
    for bit in range(ell):
        view = tally.reshape(-1, 2, 1 << bit)
        view[:, 1, :] += view[:, 0, :]
    return tally


def _popcounts(ell: int) -> np.ndarray:
    pop = np.zeros(1 << ell, dtype=np.int64)
    for bit in range(ell):
        pop.reshape(-1, 2, 1 << bit)[:, 1, :] += 1
    return pop


def sidorenko_check(eq: LinearEquation, group: Domain) -> tuple[bool, Optional[Subset]]:
    """Test t_L(1_A) >= (|A|/l)^k for every A; return the worst violator if any."""
    inside = sidorenko_tallies(eq, group)
    ell, k = group.size, eq.k
    total = int(len(solution_array(eq, group)))
    pop = _popcounts(ell)
    # inside/total >= (pop/ell)^k  <=>  inside * ell^k >= pop^k * total
    if total * ell**k < 2**62:
        lhs = inside * ell**k
        rhs = pop**k * total
        bad = lhs < rhs
    else:
        bad = np.array(
            [int(i) * ell**k < int(p) ** k * total for i, p in zip(inside.tolist(), pop.tolist())]
        )
    if not bad.any():
        return True, None
    shortfall = (pop / ell) ** k - inside / total
    candidates = np.flatnonzero(bad)
    worst = int(candidates[np.argmax(shortfall[candidates])])
    return False, Subset.from_mask(group, worst)
