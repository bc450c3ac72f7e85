from fractions import Fraction

import numpy as np
import pytest

from monochrom.colorings import (
    DeterministicColoring,
    ProbabilisticColoring,
    canonical_colors,
    class_density,
    dumps_coloring,
    from_deterministic,
    interval_coloring,
    loads_coloring,
    pullback,
    uniform_coloring,
)
from monochrom.commonness import expected_mono_direct, mono_count
from monochrom.constructions import paper_coloring
from monochrom.equations import Cyclic, Interval, validate
from monochrom.errors import MalformedBreakpoints
from monochrom.fourier import dft


def test_uniform():
    col = uniform_coloring(Interval(5), 2)
    assert col.exact == ((Fraction(1, 2),) * 2,) * 5
    col = uniform_coloring(Cyclic(7), 3)
    assert np.allclose(col.weights, 1 / 3)
    for c in range(3):
        spec = dft(col.column(c)).coeffs
        assert abs(spec[0] - 1 / 3) < 1e-15 and np.allclose(spec[1:], 0, atol=1e-15)


def test_from_deterministic():
    prob = from_deterministic(DeterministicColoring(Interval(2), 2, [0, 1]))
    assert prob.weights.tolist() == [[1, 0], [0, 1]]
    prob = from_deterministic(DeterministicColoring(Interval(4), 2, [0] * 4))
    assert prob.weights[:, 0].tolist() == [1] * 4
    colors = [2, 0, 1, 1, 2]
    prob = from_deterministic(DeterministicColoring(Interval(5), 3, colors))
    assert prob.weights.argmax(axis=1).tolist() == colors


def test_row_invariants_enforced():
    with pytest.raises(ValueError):
        ProbabilisticColoring(Interval(2), 2, np.array([[0.5, 0.6], [0.5, 0.5]]))
    with pytest.raises(ValueError):
        ProbabilisticColoring.from_fractions(Interval(2), [[Fraction(3, 2), Fraction(-1, 2)], [1, 0]])
    with pytest.raises(ValueError):
        DeterministicColoring(Interval(3), 2, [0, 1, 2])


def test_pullback_parity():
    base = DeterministicColoring(Cyclic(2), 2, [0, 1])
    assert pullback(base, 5).colors == (1, 0, 1, 0, 1)
    uni = pullback(uniform_coloring(Cyclic(4), 3), 9)
    assert uni.exact == uniform_coloring(Interval(9), 3).exact


def test_pullback_depends_only_on_residue():
    rng = np.random.default_rng(1)
    base = DeterministicColoring(Cyclic(7), 3, rng.integers(0, 3, 7).tolist())
    col = pullback(base, 60)
    for x in range(1, 61):
        assert col.color_of(x) == base.colors[x % 7]


@pytest.mark.parametrize("base", [
    DeterministicColoring(Cyclic(11), 2, [0, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0]),
    paper_coloring(validate([1, 1, -1]), 11, 3),
])
def test_pullback_proportion_tracks_cyclic(base):
    eq = validate([1, 1, -1])
    target = expected_mono_direct(eq, Cyclic(11), base)
    gaps = [abs(expected_mono_direct(eq, Interval(n), pullback(base, n)) - target) for n in (110, 220, 440, 880)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_interval_coloring():
    assert interval_coloring(10, 2, [4], [0, 1]).colors == (0,) * 4 + (1,) * 6
    assert interval_coloring(6, 2, [], [0]).colors == (0,) * 6
    col = interval_coloring(5, 2, [2], [0, 1])
    assert col.colors == (0, 0, 1, 1, 1)
    assert mono_count(validate([1, 1, -1]), Interval(5), col) == 1
    with pytest.raises(MalformedBreakpoints):
        interval_coloring(5, 2, [3, 2], [0, 1, 0])
    with pytest.raises(MalformedBreakpoints):
        interval_coloring(5, 2, [2], [0])
    with pytest.raises(MalformedBreakpoints):
        interval_coloring(5, 2, [0], [0, 1])


def test_palette_permutation_keeps_counts():
    eq = validate([1, 2, -3])
    a = interval_coloring(20, 3, [5, 12], [0, 1, 2])
    b = interval_coloring(20, 3, [5, 12], [2, 0, 1])
    assert mono_count(eq, Interval(20), a) == mono_count(eq, Interval(20), b)


def test_class_density():
    uni = uniform_coloring(Cyclic(5), 3)
    assert [class_density(uni, c) for c in range(3)] == [Fraction(1, 3)] * 3
    mono = DeterministicColoring(Interval(4), 2, [0] * 4)
    assert class_density(mono, 0) == 1
    built = paper_coloring(validate([1, 1, -1]), 11, 3)
    assert [class_density(built, c) for c in range(3)] == [Fraction(1, 3)] * 3
    rng = np.random.default_rng(5)
    w = rng.random((8, 4))
    w /= w.sum(axis=1, keepdims=True)
    col = ProbabilisticColoring(Interval(8), 4, w)
    assert abs(sum(class_density(col, c) for c in range(4)) - 1) < 1e-12


def test_canonical_colors():
    assert canonical_colors([2, 2, 0, 1, 0]) == (0, 0, 1, 2, 1)


def test_file_roundtrip_exact():
    col = paper_coloring(validate([1, 1, -1]), 11, 3)
    text = dumps_coloring(col)
    assert '"61/363"' in text
    back = loads_coloring(text)
    assert back.exact == col.exact
    assert dumps_coloring(back) == text


def test_file_roundtrip_deterministic_and_float():
    det = DeterministicColoring(Interval(5), 2, [0, 1, 1, 0, 1])
    assert loads_coloring(dumps_coloring(det)) == det
    w = np.array([[0.25, 0.75], [0.1, 0.9]])
    flt = loads_coloring(dumps_coloring(ProbabilisticColoring(Cyclic(2), 2, w)))
    assert flt.exact is None and np.array_equal(flt.weights, w)


def test_file_decimal_strings_are_exact():
    doc = '{"domain": {"kind": "cyclic", "size": 2}, "r": 2, "weights": [["0.1", "9/10"], ["1/2", "0.5"]]}'
    col = loads_coloring(doc)
    assert col.exact[0] == (Fraction(1, 10), Fraction(9, 10))
