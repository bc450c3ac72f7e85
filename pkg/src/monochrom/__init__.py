"""Monochromatic solutions of linear equations under r-colorings of [n] and Z/lZ."""

__version__ = "0.1.0"

from monochrom.equations import (
    Cyclic,
    Domain,
    Interval,
    LinearEquation,
    Solution,
    count_solutions,
    enumerate_solutions,
    has_canceling_partition,
    validate,
)
from monochrom.fourier import Spectrum, dft, idft, is_hermitian
from monochrom.colorings import (
    DeterministicColoring,
    ProbabilisticColoring,
    class_density,
    from_deterministic,
    interval_coloring,
    pullback,
    uniform_coloring,
)
from monochrom.commonness import (
    CommonnessReport,
    Subset,
    analyze,
    baseline,
    deviation,
    expected_mono_direct,
    mono_count,
    mu_fourier,
    sidorenko_check,
    t_L,
)
from monochrom.constructions import (
    choose_prime,
    closed_form_deviation,
    paper_coloring,
    verify_construction,
)
from monochrom.lifting import (
    LiftOutcome,
    analytic_lift_value,
    estimate_lifted_mu,
    exact_lift_expectation,
    lift_once,
    repeated_coordinate_count,
)
from monochrom.search import (
    SearchResult,
    exhaustive_min,
    interval_search,
    local_search_min,
    sweep,
)
