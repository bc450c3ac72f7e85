"""Deterministic and probabilistic r-colorings, plus their file format.

A probabilistic coloring is a row-stochastic (size x r) matrix; row t is the
color distribution of the domain element at position t. When every entry is
rational the exact Fractions are kept alongside the float matrix so that the
direct enumeration path can compute proportions exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from monochrom.equations import CYCLIC, Domain, Interval
from monochrom.errors import MalformedBreakpoints

ROW_TOL = 1e-9

ExactRows = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True, eq=False)
class DeterministicColoring:
    domain: Domain
    r: int
    colors: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if self.r < 1:
            raise ValueError("need at least one color")
        if len(colors) != self.domain.size:
            raise ValueError(f"{len(colors)} colors for a domain of size {self.domain.size}")
        if any(c < 0 or c >= self.r for c in colors):
            raise ValueError(f"color indices must lie in [0, {self.r})")

    def as_array(self) -> np.ndarray:
        return np.array(self.colors, dtype=np.int64)

    def color_of(self, x: int) -> int:
        """Color of the domain element with value ``x``."""
        return self.colors[x - self.domain.offset]

    def __eq__(self, other):
        if not isinstance(other, DeterministicColoring):
            return NotImplemented
        return (self.domain, self.r, self.colors) == (other.domain, other.r, other.colors)

    def __hash__(self):
        return hash((self.domain, self.r, self.colors))


@dataclass(frozen=True, eq=False)
class ProbabilisticColoring:
    domain: Domain
    r: int
    weights: np.ndarray
    exact: Optional[ExactRows] = field(default=None, repr=False)

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("a probabilistic coloring needs r >= 2")
        if self.exact is not None:
            exact = tuple(tuple(Fraction(x) for x in row) for row in self.exact)
            object.__setattr__(self, "exact", exact)
            w = np.array([[float(x) for x in row] for row in exact], dtype=np.float64)
        else:
            w = np.array(self.weights, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if w.shape != (self.domain.size, self.r):
            raise ValueError(f"weights shape {w.shape} != ({self.domain.size}, {self.r})")
        if np.any(w < 0) or np.any(w > 1):
            raise ValueError("weights must lie in [0, 1]")
        if self.exact is not None:
            if any(x < 0 or x > 1 for row in self.exact for x in row):
                raise ValueError("weights must lie in [0, 1]")
            bad = [t for t, row in enumerate(self.exact) if sum(row) != 1]
            if bad:
                raise ValueError(f"row {bad[0]} does not sum to 1")
        elif np.any(np.abs(w.sum(axis=1) - 1) > ROW_TOL):
            raise ValueError("rows must sum to 1")

    @classmethod
    def from_fractions(cls, domain: Domain, rows: Sequence[Sequence]) -> "ProbabilisticColoring":
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        return cls(domain, len(rows[0]), np.zeros((0, 0)), exact=rows)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def column(self, c: int) -> np.ndarray:
        return self.weights[:, c]

    def permute_colors(self, perm: Sequence[int]) -> "ProbabilisticColoring":
        """New coloring whose color ``perm[c]`` is this coloring's color ``c``."""
        inv = np.argsort(perm)
        if self.exact is not None:
            return ProbabilisticColoring.from_fractions(
                self.domain, [[row[i] for i in inv] for row in self.exact]
            )
        return ProbabilisticColoring(self.domain, self.r, self.weights[:, inv])

    def reindex(self, positions: Sequence[int]) -> "ProbabilisticColoring":
        """New coloring whose row t is this coloring's row ``positions[t]``."""
        if self.exact is not None:
            return ProbabilisticColoring.from_fractions(self.domain, [self.exact[p] for p in positions])
        return ProbabilisticColoring(self.domain, self.r, self.weights[np.asarray(positions)])


def uniform_coloring(domain: Domain, r: int) -> ProbabilisticColoring:
    row = tuple([Fraction(1, r)] * r)
    return ProbabilisticColoring.from_fractions(domain, [row] * domain.size)


def from_deterministic(coloring: DeterministicColoring) -> ProbabilisticColoring:
    r = max(coloring.r, 2)
    rows = []
    for c in coloring.colors:
        row = [Fraction(0)] * r
        row[c] = Fraction(1)
        rows.append(row)
    return ProbabilisticColoring.from_fractions(coloring.domain, rows)


def pullback(base, n: int):
    """Color each x in [n] like the residue x mod l of a coloring of Z/lZ."""
    if base.domain.kind != CYCLIC:
        raise ValueError("pullback needs a coloring of a cyclic group")
    if n < 2:
        raise ValueError("interval domains need n >= 2")
    ell = base.domain.size
    positions = [x % ell for x in range(1, n + 1)]
    target = Interval(n)
    if isinstance(base, DeterministicColoring):
        return DeterministicColoring(target, base.r, [base.colors[p] for p in positions])
    if base.exact is not None:
        return ProbabilisticColoring.from_fractions(target, [base.exact[p] for p in positions])
    return ProbabilisticColoring(target, base.r, base.weights[positions])


def interval_coloring(
    n: int, r: int, breakpoints: Sequence[int], palette: Sequence[int]
) -> DeterministicColoring:
    """Color [n] by segments; a cut at b ends a segment after element b."""
    cuts = list(breakpoints)
    if any(b < 1 or b > n for b in cuts) or any(b >= c for b, c in zip(cuts, cuts[1:])):
        raise MalformedBreakpoints(f"cuts must be strictly ascending within [1, {n}]: {cuts}")
    if len(palette) != len(cuts) + 1:
        raise MalformedBreakpoints(f"{len(cuts)} cuts need {len(cuts) + 1} palette entries")
    colors = []
    bounds = [0] + cuts + [n]
    for j in range(len(bounds) - 1):
        colors.extend([palette[j]] * (bounds[j + 1] - bounds[j]))
    return DeterministicColoring(Interval(n), r, colors)


def class_density(coloring, c: int):
    """Average weight of color ``c``; exact Fraction when available."""
    if c < 0 or c >= coloring.r:
        raise ValueError(f"color {c} out of range")
    if isinstance(coloring, DeterministicColoring):
        return Fraction(coloring.colors.count(c), coloring.domain.size)
    if coloring.exact is not None:
        return sum((row[c] for row in coloring.exact), Fraction(0)) / coloring.domain.size
    return float(coloring.weights[:, c].mean())


def canonical_colors(colors: Sequence[int]) -> tuple[int, ...]:
    """Relabel colors so that first occurrences appear in ascending order."""
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(c, len(relabel)) for c in colors)


# --- file format -----------------------------------------------------------

def _format_entry(x) -> object:
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def _parse_entry(x) -> Fraction | float:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    raise ValueError(f"unreadable weight entry {x!r}")


def coloring_to_dict(coloring) -> dict:
    doc = {
        "domain": {"kind": coloring.domain.kind, "size": coloring.domain.size},
        "r": coloring.r,
    }
    if isinstance(coloring, DeterministicColoring):
        doc["colors"] = list(coloring.colors)
    elif coloring.exact is not None:
        doc["weights"] = [[_format_entry(x) for x in row] for row in coloring.exact]
    else:
        doc["weights"] = [[float(x) for x in row] for row in coloring.weights]
    return doc


def coloring_from_dict(doc: dict):
    try:
        domain = Domain(str(doc["domain"]["kind"]).lower(), int(doc["domain"]["size"]))
        r = int(doc["r"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"coloring document missing field: {exc}") from exc
    if "colors" in doc:
        return DeterministicColoring(domain, r, doc["colors"])
    if "weights" not in doc:
        raise ValueError("coloring document needs 'colors' or 'weights'")
    rows = [[_parse_entry(x) for x in row] for row in doc["weights"]]
    if rows and all(isinstance(x, Fraction) for row in rows for x in row):
        col = ProbabilisticColoring.from_fractions(domain, rows)
        if col.r != r:
            raise ValueError(f"declared r={r} but rows have {col.r} entries")
        return col
    return ProbabilisticColoring(domain, r, np.array(rows, dtype=np.float64))


def dumps_coloring(coloring) -> str:
    return json.dumps(coloring_to_dict(coloring), indent=1) + "\n"


def loads_coloring(text: str):
    return coloring_from_dict(json.loads(text))


def save_coloring(coloring, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_coloring(coloring))


def load_coloring(path):
    with open(path) as fh:
        return loads_coloring(fh.read())
