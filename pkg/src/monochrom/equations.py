"""Linear equations a_1 x_1 + ... + a_k x_k = 0 and their solution sets.

Solutions are ordered k-tuples and coordinates may repeat. Interval domains
hold the integers 1..n, cyclic domains hold the residues 0..l-1.
"""

from __future__ import annotations

import functools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from monochrom.errors import CapExceeded, CoefficientTooLarge, TooFewTerms, ZeroCoefficient

MAX_ABS_COEFF = 10**6
DEFAULT_CAP = 10**8

INTERVAL = "interval"
CYCLIC = "cyclic"


@dataclass(frozen=True)
class LinearEquation:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))
        if len(self.coeffs) < 2:
            raise TooFewTerms(f"need at least 2 terms, got {len(self.coeffs)}")
        for i, a in enumerate(self.coeffs):
            if a == 0:
                raise ZeroCoefficient(f"coefficient a_{i + 1} is zero")
            if abs(a) > MAX_ABS_COEFF:
                raise CoefficientTooLarge(f"|a_{i + 1}| = {abs(a)} exceeds {MAX_ABS_COEFF}")

    @property
    def k(self) -> int:
        return len(self.coeffs)

    def __str__(self):
        return ",".join(str(a) for a in self.coeffs)

    def evaluate(self, xs: Sequence[int]) -> int:
        return sum(a * x for a, x in zip(self.coeffs, xs))

    def has_unit_coefficient(self, modulus: int) -> bool:
        """True if some coefficient is invertible mod ``modulus``."""
        return any(math.gcd(a, modulus) == 1 for a in self.coeffs)


@dataclass(frozen=True)
class Domain:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in (INTERVAL, CYCLIC):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if int(self.size) < 2:
            raise ValueError(f"domain size must be at least 2, got {self.size}")
        object.__setattr__(self, "size", int(self.size))

    @property
    def is_cyclic(self) -> bool:
        return self.kind == CYCLIC

    @property
    def offset(self) -> int:
        """Value of the element stored at position 0."""
        return 1 if self.kind == INTERVAL else 0

    def elements(self) -> range:
        return range(self.offset, self.offset + self.size)

    def __str__(self):
        return f"{'zn' if self.is_cyclic else 'interval'}:{self.size}"


def Interval(n: int) -> Domain:
    return Domain(INTERVAL, n)


def Cyclic(modulus: int) -> Domain:
    return Domain(CYCLIC, modulus)


def parse_domain(text: str) -> Domain:
    """Parse ``interval:N`` or ``zn:L``."""
    kind, _, size = text.strip().partition(":")
    kind = kind.lower()
    if not size:
        raise ValueError(f"malformed domain {text!r}; expected interval:N or zn:L")
    if kind in ("interval", "int", "n"):
        return Interval(int(size))
    if kind in ("zn", "cyclic", "z"):
        return Cyclic(int(size))
    raise ValueError(f"unknown domain kind in {text!r}")


@dataclass(frozen=True)
class Solution:
    coords: tuple[int, ...]
    distinct: bool


def validate(coeffs: Sequence[int]) -> LinearEquation:
    return LinearEquation(tuple(coeffs))


def parse_equation(text: str) -> LinearEquation:
    """Parse the comma-separated coefficient format, e.g. ``"1,2,-1,-2"``."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        coeffs = [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"malformed coefficient list {text!r}") from exc
    return validate(coeffs)


def has_canceling_partition(eq: LinearEquation) -> tuple[bool, Optional[list[tuple[int, int]]]]:
    """Pair up coefficients so that each pair sums to zero.

    Returns ``(True, pairs)`` with 1-based index pairs, or ``(False, None)``.
    """
    if eq.k % 2:
        return False, None
    mult = Counter(eq.coeffs)
    if any(mult[v] != mult[-v] for v in mult):
        return False, None
    positions: dict[int, list[int]] = {}
    for i, a in enumerate(eq.coeffs, start=1):
        positions.setdefault(a, []).append(i)
    pairs = []
    for v in sorted(v for v in positions if v > 0):
        pairs.extend(zip(positions[v], positions[-v]))
    pairs.sort()
    return True, pairs


def _grid(values: np.ndarray, dims: int) -> np.ndarray:
    """All ``dims``-tuples over ``values`` in lexicographic order, shape (len**dims, dims)."""
    if dims == 0:
        return np.zeros((1, 0), dtype=np.int64)
    mesh = np.meshgrid(*([values] * dims), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _solved_position(eq: LinearEquation, domain: Domain) -> Optional[int]:
    if domain.is_cyclic:
        for j, a in enumerate(eq.coeffs):
            if math.gcd(a, domain.size) == 1:
                return j
        return None
    # any coordinate can be solved for over the integers; the largest
    # coefficient rejects the most candidates by divisibility
    return max(range(eq.k), key=lambda j: (abs(eq.coeffs[j]), -j))


def _solution_chunks(eq: LinearEquation, domain: Domain) -> Iterator[np.ndarray]:
    """Yield solution blocks as int64 arrays of element values, shape (m, k).

    Blocks follow the lexicographic order of the free coordinates.
    """
    coeffs = np.array(eq.coeffs, dtype=np.int64)
    values = np.array(domain.elements(), dtype=np.int64)
    ell = domain.size
    j = _solved_position(eq, domain)
    free = [i for i in range(eq.k) if i != j]
    rest = _grid(values, len(free) - 1)
    rest_sum = rest @ coeffs[free[1:]] if len(free) > 1 else np.zeros(1, dtype=np.int64)

    if j is None:
        # cyclic without a unit coefficient: scan every k-tuple
        for x0 in values:
            total = (coeffs[0] * x0 + rest_sum) % ell
            keep = total == 0
            block = np.empty((int(keep.sum()), eq.k), dtype=np.int64)
            block[:, 0] = x0
            block[:, 1:] = rest[keep]
            yield block
        return

    a_j = int(coeffs[j])
    inv = pow(a_j, -1, ell) if domain.is_cyclic else None
    for x0 in values:
        s = coeffs[free[0]] * x0 + rest_sum
        if domain.is_cyclic:
            xj = (-s * inv) % ell
            keep = np.ones(len(s), dtype=bool)
        else:
            divisible = (-s) % a_j == 0
            xj = np.where(divisible, -s // a_j, 0)
            keep = divisible & (xj >= 1) & (xj <= ell)
        block = np.empty((int(keep.sum()), eq.k), dtype=np.int64)
        block[:, free[0]] = x0
        if len(free) > 1:
            block[:, free[1:]] = rest[keep]
        block[:, j] = xj[keep]
        yield block


def enumerate_solutions(
    eq: LinearEquation, domain: Domain, cap: Optional[int] = DEFAULT_CAP
) -> Iterator[Solution]:
    """Stream every ordered solution exactly once.

    Raises CapExceeded once more than ``cap`` solutions have been produced.
    """
    produced = 0
    for block in _solution_chunks(eq, domain):
        for row in block.tolist():
            produced += 1
            if cap is not None and produced > cap:
                raise CapExceeded(f"more than {cap} solutions")
            yield Solution(tuple(row), len(set(row)) == len(row))


@functools.lru_cache(maxsize=64)
def solution_array(eq: LinearEquation, domain: Domain, cap: int = DEFAULT_CAP) -> np.ndarray:
    """All solutions as a read-only (N, k) array of 0-based positions into the domain."""
    blocks = []
    total = 0
    for block in _solution_chunks(eq, domain):
        total += len(block)
        if cap is not None and total > cap:
            raise CapExceeded(f"more than {cap} solutions")
        blocks.append(block)
    out = np.concatenate(blocks, axis=0) - domain.offset
    out.setflags(write=False)
    return out


def distinct_mask(solutions: np.ndarray) -> np.ndarray:
    """Boolean mask of rows whose coordinates are pairwise distinct."""
    srt = np.sort(solutions, axis=1)
    return np.all(np.diff(srt, axis=1) != 0, axis=1)


def count_solutions(eq: LinearEquation, domain: Domain) -> int:
    if domain.is_cyclic and eq.has_unit_coefficient(domain.size):
        return domain.size ** (eq.k - 1)
    return int(len(solution_array(eq, domain)))
