"""Turning an (r-1)-coloring of [n] into an r-coloring by random recoloring.

Two recoloring models are supported:

* ``without_replacement``: exactly floor(n/r) elements, chosen uniformly,
  get the new color r-1. A solution on s distinct elements survives in its
  old color with probability C(n-s, m)/C(n, m) and turns fully new with
  probability C(n-s, m-s)/C(n, m), where m = floor(n/r).
* ``bernoulli``: every element independently gets the new color with
  probability 1/r; the two probabilities become ((r-1)/r)^s and (1/r)^s.

Trial i draws from its own PCG64 stream keyed by (seed, i), so results do not
depend on how trials are spread over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from monochrom.colorings import DeterministicColoring
from monochrom.equations import Domain, LinearEquation, distinct_mask, solution_array
from monochrom.errors import DomainMismatch, NoSolutions

WITHOUT_REPLACEMENT = "without_replacement"
BERNOULLI = "bernoulli"
MODELS = (WITHOUT_REPLACEMENT, BERNOULLI)
RNG_NAME = "PCG64"


@dataclass
class LiftOutcome:
    base_mu: float
    base_mu_all: float
    r: int
    trials: int
    model: str
    seed: int
    empirical_mean: float
    empirical_stderr: float
    distinct_only_mean: float
    distinct_only_stderr: float
    analytic_value: float
    exact_value: float
    exact_value_distinct: float
    rng: str = RNG_NAME

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "trials": self.trials,
            "model": self.model,
            "rng": {"algorithm": self.rng, "seed": self.seed},
            "base_mu": {"value": self.base_mu, "method": "direct", "solutions": "distinct"},
            "base_mu_all": {"value": self.base_mu_all, "method": "direct", "solutions": "all"},
            "empirical_mean": {"value": self.empirical_mean, "method": "monte_carlo", "solutions": "all"},
            "empirical_stderr": {"value": self.empirical_stderr, "method": "monte_carlo", "solutions": "all"},
            "distinct_only_mean": {"value": self.distinct_only_mean, "method": "monte_carlo",
                                   "solutions": "distinct"},
            "distinct_only_stderr": {"value": self.distinct_only_stderr, "method": "monte_carlo",
                                     "solutions": "distinct"},
            "analytic_value": {"value": self.analytic_value, "method": "analytic", "solutions": "distinct"},
            "exact_value": {"value": self.exact_value, "method": "exact", "solutions": "all"},
            "exact_value_distinct": {"value": self.exact_value_distinct, "method": "exact",
                                     "solutions": "distinct"},
            "analytic_minus_exact": {"value": self.analytic_value - self.exact_value_distinct,
                                     "method": "analytic"},
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def _check_base(base: DeterministicColoring, r: int) -> None:
    if base.domain.is_cyclic:
        raise ValueError("lifting is defined for interval domains only")
    if r < 2:
        raise ValueError("target color count must be at least 2")
    if any(c > r - 2 for c in base.colors):
        raise ValueError(f"base coloring must use colors 0..{r - 2}")
    if base.domain.size < r:
        raise ValueError(f"need n >= r, got n = {base.domain.size}, r = {r}")


def _recolor(colors: np.ndarray, r: int, rng: np.random.Generator, model: str) -> np.ndarray:
    out = colors.copy()
    n = len(colors)
    if model == WITHOUT_REPLACEMENT:
        chosen = rng.choice(n, size=n // r, replace=False)
        out[chosen] = r - 1
    elif model == BERNOULLI:
        out[rng.random(n) < 1.0 / r] = r - 1
    else:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    return out


def lift_once(base: DeterministicColoring, r: int, seed: int, model: str = WITHOUT_REPLACEMENT,
              trial: int = 0) -> DeterministicColoring:
    """Recolor floor(n/r) uniformly chosen elements of [n] with the new color r-1."""
    _check_base(base, r)
    colors = _recolor(base.as_array(), r, trial_rng(seed, trial), model)
    return DeterministicColoring(base.domain, r, colors.tolist())


def analytic_lift_value(k: int, r: int, mu_prev):
    """((r-1)/r)^k * mu_prev + (1/r)^k; exact when ``mu_prev`` is rational."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if isinstance(mu_prev, (Fraction, int)):
        return Fraction(r - 1, r) ** k * Fraction(mu_prev) + Fraction(1, r) ** k
    return ((r - 1) / r) ** k * float(mu_prev) + (1 / r) ** k


def survival_probability(n: int, r: int, s: int, model: str = WITHOUT_REPLACEMENT) -> Fraction:
    """Probability that none of s fixed distinct elements is recolored."""
    if model == BERNOULLI:
        return Fraction(r - 1, r) ** s
    m = n // r
    return Fraction(math.comb(n - s, m), math.comb(n, m))


def takeover_probability(n: int, r: int, s: int, model: str = WITHOUT_REPLACEMENT) -> Fraction:
    """Probability that all of s fixed distinct elements are recolored."""
    if model == BERNOULLI:
        return Fraction(1, r) ** s
    m = n // r
    return Fraction(math.comb(n - s, m - s) if m >= s else 0, math.comb(n, m))


def exact_lift_expectation(eq: LinearEquation, domain: Domain, base: DeterministicColoring, r: int,
                           model: str = WITHOUT_REPLACEMENT, distinct_only: bool = False) -> Fraction:
    """Exact expected monochromatic proportion after one lift.

    A solution stays monochromatic either because none of its elements is
    recolored and it was monochromatic before, or because all of them are.
    """
    _check_base(base, r)
    if base.domain != domain:
        raise DomainMismatch(f"base coloring is over {base.domain}, expected {domain}")
    n = domain.size
    sols = solution_array(eq, domain)
    if distinct_only:
        sols = sols[distinct_mask(sols)]
    if len(sols) == 0:
        raise NoSolutions(f"{eq} has no {'distinct ' if distinct_only else ''}solutions in {domain}")
    colors = base.as_array()[sols]
    mono = np.all(colors == colors[:, :1], axis=1)
    sizes = (np.diff(np.sort(sols, axis=1), axis=1) != 0).sum(axis=1) + 1
    total = Fraction(0)
    for s in np.unique(sizes).tolist():
        here = sizes == s
        n_mono = int((mono & here).sum())
        total += n_mono * survival_probability(n, r, s, model) + int(here.sum()) * takeover_probability(n, r, s, model)
    return total / len(sols)


def repeated_coordinate_count(eq: LinearEquation, domain: Domain) -> tuple[int, Fraction]:
    """Solutions with some x_i = x_j (i != j), and their share of all solutions."""
    sols = solution_array(eq, domain)
    if len(sols) == 0:
        return 0, Fraction(0)
    repeated = int((~distinct_mask(sols)).sum())
    return repeated, Fraction(repeated, len(sols))


def estimate_lifted_mu(
    eq: LinearEquation,
    domain: Domain,
    base: DeterministicColoring,
    r: int,
    trials: int = 10_000,
    seed: int = 0,
    model: str = WITHOUT_REPLACEMENT,
    threads: Optional[int] = None,
) -> LiftOutcome:
    """Monte Carlo estimate of the monochromatic proportion after lifting, with exact references."""
    _check_base(base, r)
    if base.domain != domain:
        raise DomainMismatch(f"base coloring is over {base.domain}, expected {domain}")
    if trials < 100:
        raise ValueError("use at least 100 trials")
    sols = solution_array(eq, domain)
    dmask = distinct_mask(sols)
    if len(sols) == 0 or not dmask.any():
        raise NoSolutions(f"{eq} has no distinct-coordinate solutions in {domain}")
    base_colors = base.as_array()

    def mono_shares(colors: np.ndarray) -> tuple[float, float]:
        c = colors[sols]
        mono = np.all(c == c[:, :1], axis=1)
        return mono.mean(), mono[dmask].mean()

    base_c = base_colors[sols]
    base_mono = np.all(base_c == base_c[:, :1], axis=1)
    base_mu_distinct = Fraction(int(base_mono[dmask].sum()), int(dmask.sum()))
    all_share = np.empty(trials)
    distinct_share = np.empty(trials)

    def run(bounds: tuple[int, int]) -> None:
        for t in range(*bounds):
            lifted = _recolor(base_colors, r, trial_rng(seed, t), model)
            all_share[t], distinct_share[t] = mono_shares(lifted)

    chunk = 1000
    spans = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    if threads is not None and threads <= 1:
        for span in spans:
            run(span)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, spans))

    k = eq.k
    return LiftOutcome(
        base_mu=float(base_mu_distinct),
        base_mu_all=float(base_mono.mean()),
        r=r,
        trials=trials,
        model=model,
        seed=seed,
        empirical_mean=float(all_share.mean()),
        empirical_stderr=float(all_share.std(ddof=1) / math.sqrt(trials)),
        distinct_only_mean=float(distinct_share.mean()),
        distinct_only_stderr=float(distinct_share.std(ddof=1) / math.sqrt(trials)),
        analytic_value=float(analytic_lift_value(k, r, base_mu_distinct)),
        exact_value=float(exact_lift_expectation(eq, domain, base, r, model)),
        exact_value_distinct=float(exact_lift_expectation(eq, domain, base, r, model, distinct_only=True)),
    )
