"""Minimizing the number of monochromatic solutions over colorings of [n].

Three engines share one counting convention (ordered solutions, repeats
allowed):

* ``exhaustive_min`` scans every coloring in lexicographic order, optionally
  only the canonical representative of each color-permutation class;
* ``local_search_min`` runs steepest-descent single-element recoloring from
  seeded random starts;
* ``interval_search`` scans colorings made of at most ``max_cuts + 1`` blocks.

Engines split their work into contiguous blocks that can run on a thread
pool. Blocks are merged by (count, lexicographic color vector), so results
do not depend on the number of threads.
"""

from __future__ import annotations

import csv
import itertools
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from monochrom.colorings import DeterministicColoring, canonical_colors
from monochrom.commonness import mono_count
from monochrom.equations import Interval, LinearEquation, solution_array
from monochrom.errors import BudgetExceeded

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
_BLOCK_CELLS = 1 << 22

EXHAUSTIVE = "exhaustive"
LOCAL = "local"
INTERVAL = "interval"
MODES = (EXHAUSTIVE, LOCAL, INTERVAL)

CSV_HEADER = ["n", "r", "mode", "best_count", "total_solutions", "proportion", "seed"]


@dataclass
class SearchResult:
    equation: LinearEquation
    n: int
    r: int
    mode: str
    best_count: int
    best_coloring: DeterministicColoring
    total_solutions: int
    nodes_explored: int
    wall_time: float = 0.0
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)

    @property
    def proportion(self) -> float:
        return self.best_count / self.total_solutions if self.total_solutions else 0.0

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "equation": list(self.equation.coeffs),
            "n": self.n,
            "r": self.r,
            "mode": self.mode,
            "best_count": self.best_count,
            "total_solutions": self.total_solutions,
            "proportion": {"value": self.proportion, "method": self.mode},
            "best_coloring": list(self.best_coloring.colors),
            "nodes_explored": self.nodes_explored,
            "seed": self.seed,
            "params": dict(self.params),
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out


@lru_cache(maxsize=32)
def _solution_sets(eq: LinearEquation, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Solutions of eq in [n] collapsed by coordinate multiset: (sets, multiplicity)."""
    sols = solution_array(eq, Interval(n))
    if len(sols) == 0:
        return np.zeros((0, eq.k), dtype=np.int64), np.zeros(0, dtype=np.int64)
    sets, counts = np.unique(np.sort(sols, axis=1), axis=0, return_counts=True)
    return sets, counts.astype(np.int64)


def block_mono_counts(colors: np.ndarray, sets: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Monochromatic solution counts for each row of a (B, n) color matrix."""
    if len(sets) == 0:
        return np.zeros(len(colors), dtype=np.int64)
    out = np.empty(len(colors), dtype=np.int64)
    step = max(1, _BLOCK_CELLS // (sets.size or 1))
    for start in range(0, len(colors), step):
        c = colors[start:start + step][:, sets]
        mono = np.all(c == c[:, :, :1], axis=2)
        out[start:start + step] = mono.astype(np.int64) @ weights
    return out


def _best_in(counts: np.ndarray, candidates: np.ndarray) -> tuple[int, np.ndarray]:
    """Minimum count and the lexicographically smallest color row achieving it."""
    best = int(counts.min())
    rows = candidates[counts == best]
    order = np.lexsort(rows.T[::-1])
    return best, rows[order[0]]


def _merge(parts: Iterable[Optional[tuple[int, np.ndarray]]]) -> tuple[int, np.ndarray]:
    best = None
    for part in parts:
        if part is None:
            continue
        if best is None or part[0] < best[0] or (part[0] == best[0] and tuple(part[1]) < tuple(best[1])):
            best = part
    return best


def _map(fn, items: Sequence, threads: Optional[int]):
    if threads is not None and threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _finish(eq, n, r, mode, best, colors, nodes, started, seed=None, params=None) -> SearchResult:
    coloring = DeterministicColoring(Interval(n), max(r, 1), [int(c) for c in colors])
    recount = mono_count(eq, Interval(n), coloring)
    if recount != best:
        raise RuntimeError(f"search bookkeeping error: reported {best}, recount {recount}")
    return SearchResult(
        equation=eq,
        n=n,
        r=r,
        mode=mode,
        best_count=best,
        best_coloring=coloring,
        total_solutions=int(len(solution_array(eq, Interval(n)))),
        nodes_explored=nodes,
        wall_time=time.perf_counter() - started,
        seed=seed,
        params=params or {},
    )


# --- exhaustive ------------------------------------------------------------

def _digits(indices: np.ndarray, base: int, width: int) -> np.ndarray:
    powers = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (indices[:, None] // powers) % base


def _is_canonical(colors: np.ndarray) -> np.ndarray:
    """Rows whose colors first appear in ascending order starting from 0."""
    prev_max = np.maximum.accumulate(colors, axis=1)
    ok = colors[:, 0] == 0
    return ok & np.all(colors[:, 1:] <= prev_max[:, :-1] + 1, axis=1)


def exhaustive_min(
    eq: LinearEquation,
    n: int,
    r: int,
    prune: bool = True,
    budget: int = DEFAULT_BUDGET,
    threads: Optional[int] = None,
) -> SearchResult:
    """Global minimum over all r-colorings of [n].

    With ``prune`` only canonical colorings are scanned (element 1 gets color 0
    and new colors appear in ascending order), one per color-permutation class.
    Ties go to the lexicographically smallest color vector.
    """
    started = time.perf_counter()
    if r == 1:
        zeros = np.zeros(n, dtype=np.int64)
        return _finish(eq, n, r, EXHAUSTIVE, int(len(solution_array(eq, Interval(n)))), zeros, 1, started)
    cost = r**n / math.factorial(r) if prune else r**n
    if cost > budget:
        raise BudgetExceeded(f"{r}^{n} colorings exceed the budget of {budget}")
    sets, weights = _solution_sets(eq, n)
    free = n - 1 if prune else n
    total = r**free
    block = max(1, min(total, 1 << 15))
    starts = list(range(0, total, block))

    def scan(start: int):
        idx = np.arange(start, min(start + block, total), dtype=np.int64)
        tail = _digits(idx, r, free)
        colors = np.concatenate([np.zeros((len(idx), 1), dtype=np.int64), tail], axis=1) if prune else tail
        if prune and r > 2:
            colors = colors[_is_canonical(colors)]
        if len(colors) == 0:
            return None, 0
        counts = block_mono_counts(colors, sets, weights)
        return _best_in(counts, colors), len(colors)

    results = _map(scan, starts, threads)
    best, colors = _merge(part for part, _ in results)
    nodes = sum(m for _, m in results)
    return _finish(eq, n, r, EXHAUSTIVE, best, colors, nodes, started, params={"pruned": prune})


# --- local search ----------------------------------------------------------

class _Incidence:
    """Per-element incidence of solution sets, for O(incidence) recolor updates."""

    def __init__(self, eq: LinearEquation, n: int):
        sets, weights = _solution_sets(eq, n)
        self.k = eq.k
        self.n = n
        self.sets = sets
        self.weights = weights
        pair_s, pair_x, pair_m = [], [], []
        for s, row in enumerate(sets.tolist()):
            for x in sorted(set(row)):
                pair_s.append(s)
                pair_x.append(x)
                pair_m.append(row.count(x))
        self.pair_s = np.array(pair_s, dtype=np.int64)
        self.pair_x = np.array(pair_x, dtype=np.int64)
        self.pair_m = np.array(pair_m, dtype=np.int64)
        self.pair_w = weights[self.pair_s] if len(pair_s) else np.zeros(0, dtype=np.int64)
        self.by_element = [np.flatnonzero(self.pair_x == x) for x in range(n)]


def _descend(inc: _Incidence, colors: np.ndarray, r: int) -> tuple[int, np.ndarray, int]:
    """Steepest descent from ``colors``; returns (count, colors, moves)."""
    n, k = inc.n, inc.k
    colors = colors.copy()
    cnt = np.zeros((len(inc.sets), r), dtype=np.int64)
    if len(inc.sets):
        np.add.at(cnt, (inc.pair_s, colors[inc.pair_x]), inc.pair_m)
    count = int(inc.weights @ (cnt.max(axis=1) == k)) if len(inc.sets) else 0
    moves = 0
    while len(inc.sets):
        own = colors[inc.pair_x]
        leave = (cnt[inc.pair_s, own] == k) * inc.pair_w
        join = (cnt[inc.pair_s] + inc.pair_m[:, None] == k) * inc.pair_w[:, None]
        delta = np.zeros((n, r), dtype=np.int64)
        for b in range(r):
            delta[:, b] = np.bincount(inc.pair_x, weights=join[:, b] - leave, minlength=n).astype(np.int64)
        delta[np.arange(n), colors] = 0
        flat = int(np.argmin(delta))
        if delta.flat[flat] >= 0:
            break
        x, b = divmod(flat, r)
        pairs = inc.by_element[x]
        np.add.at(cnt, (inc.pair_s[pairs], colors[x]), -inc.pair_m[pairs])
        np.add.at(cnt, (inc.pair_s[pairs], b), inc.pair_m[pairs])
        colors[x] = b
        count += int(delta.flat[flat])
        moves += 1
    return count, colors, moves


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    """Independent stream for one restart; prefixes are stable as restarts grow."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(restart,))))


def local_search_min(
    eq: LinearEquation,
    n: int,
    r: int,
    restarts: int = 50,
    seed: int = 0,
    threads: Optional[int] = None,
) -> SearchResult:
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    started = time.perf_counter()
    inc = _Incidence(eq, n)

    def run(i: int):
        start = restart_rng(seed, i).integers(0, r, size=n)
        count, colors, moves = _descend(inc, start, r)
        return (count, np.array(canonical_colors(colors.tolist()), dtype=np.int64)), moves + 1

    results = _map(run, list(range(restarts)), threads)
    best, colors = _merge(part for part, _ in results)
    nodes = sum(m for _, m in results)
    return _finish(eq, n, r, LOCAL, best, colors, nodes, started, seed=seed,
                   params={"restarts": restarts, "rng": "PCG64"})


# --- interval family -------------------------------------------------------

def _palettes(segments: int, r: int) -> list[tuple[int, ...]]:
    """Canonical palettes with distinct adjacent colors."""
    out = []
    for pal in itertools.product(range(r), repeat=segments):
        if any(a == b for a, b in zip(pal, pal[1:])):
            continue
        if canonical_colors(pal) == pal:
            out.append(pal)
    return out


def _interval_rows(n: int, cuts_list: Sequence[tuple[int, ...]], palettes) -> np.ndarray:
    rows = []
    positions = np.arange(1, n + 1)
    for cuts in cuts_list:
        segment = np.searchsorted(np.array(cuts, dtype=np.int64), positions, side="left")
        for pal in palettes:
            rows.append(np.asarray(pal, dtype=np.int64)[segment])
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def interval_search(
    eq: LinearEquation,
    n: int,
    r: int,
    max_cuts: int = 2,
    threads: Optional[int] = None,
) -> SearchResult:
    """Best coloring made of at most ``max_cuts + 1`` monochromatic blocks."""
    if not 0 <= max_cuts <= 4:
        raise ValueError("max_cuts must lie in 0..4")
    started = time.perf_counter()
    sets, weights = _solution_sets(eq, n)
    jobs = []
    for j in range(0, min(max_cuts, n - 1) + 1):
        palettes = _palettes(j + 1, r)
        if not palettes:
            continue
        cut_tuples = list(itertools.combinations(range(1, n), j))
        chunk = max(1, 4096 // len(palettes))
        for start in range(0, len(cut_tuples), chunk):
            jobs.append((cut_tuples[start:start + chunk], palettes))

    def scan(job):
        rows = _interval_rows(n, *job)
        return _best_in(block_mono_counts(rows, sets, weights), rows), len(rows)

    results = _map(scan, jobs, threads)
    best, colors = _merge(part for part, _ in results)
    nodes = sum(m for _, m in results)
    return _finish(eq, n, r, INTERVAL, best, colors, nodes, started, params={"max_cuts": max_cuts})


# --- sweeps ----------------------------------------------------------------

@dataclass
class SweepRow:
    n: int
    r: int
    mode: str
    best_count: int
    total_solutions: int
    proportion: float
    seed: Optional[int]
    result: SearchResult = field(repr=False)

    def as_csv(self) -> list:
        return [self.n, self.r, self.mode, self.best_count, self.total_solutions,
                repr(self.proportion), "" if self.seed is None else self.seed]


def run_engine(eq: LinearEquation, n: int, r: int, mode: str, *, restarts: int = 50, seed: int = 0,
               max_cuts: int = 2, threads: Optional[int] = None) -> SearchResult:
    if mode == EXHAUSTIVE:
        return exhaustive_min(eq, n, r, threads=threads)
    if mode == LOCAL:
        return local_search_min(eq, n, r, restarts=restarts, seed=seed, threads=threads)
    if mode == INTERVAL:
        return interval_search(eq, n, r, max_cuts=max_cuts, threads=threads)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def sweep(eq: LinearEquation, n_from: int, n_to: int, step: int = 1, r: int = 2,
          mode: str = EXHAUSTIVE, **engine_kwargs) -> list[SweepRow]:
    """Run one engine for n = n_from, n_from + step, ..., n_to (inclusive)."""
    if step < 1:
        raise ValueError("step must be positive")
    rows = []
    for n in range(n_from, n_to + 1, step):
        res = run_engine(eq, n, r, mode, **engine_kwargs)
        rows.append(SweepRow(n, r, mode, res.best_count, res.total_solutions, res.proportion,
                             res.seed, res))
    for prev, cur in zip(rows, rows[1:]):
        if cur.best_count < prev.best_count:
            # exact minima are monotone by restriction; heuristics need not be
            level = logging.ERROR if mode == EXHAUSTIVE else logging.WARNING
            log.log(level, "best_count dropped from %d (n=%d) to %d (n=%d)",
                    prev.best_count, prev.n, cur.best_count, cur.n)
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv())
