import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commlearn.classes import (
    UNBOUNDED,
    grid_singletons,
    half_bounded,
    halfplanes,
    is_consistent,
    non_realizable_witness,
    singletons,
    thresholds,
)
from commlearn.core import Example, GridPoint, Index, Label, LabelledSample, Natural, empirical_loss, point
from commlearn.instances import grid_hard_sample

pairs = LabelledSample.from_pairs


def test_halfplane_dimensions():
    assert halfplanes(2).covc_dim == 6
    assert halfplanes(2).vc_dim == 3
    assert halfplanes(3).covc_dim == 8
    assert singletons().covc_dim is UNBOUNDED
    with pytest.raises(ValueError):
        halfplanes(4)


def test_halfplane_two_points_separable():
    S = pairs([(point(0, 0), 1), (point(1, 0), -1)])
    h = halfplanes(2).find_consistent(S)
    assert h is not None and is_consistent(h, S)
    assert halfplanes(2).find_consistent(pairs([(point(0, 0), 1), (point(0, 0), -1)])) is None


def test_thresholds_examples():
    C = thresholds()
    h = C.find_consistent(pairs([(Natural(5), 1), (Natural(3), -1)]))
    assert Fraction(3) < h.params[0] <= 5
    assert C.find_consistent(pairs([(Natural(3), 1), (Natural(5), -1)])) is None
    assert C.find_consistent(LabelledSample()) is not None


def test_singletons_examples():
    C = singletons()
    S = pairs([(Natural(7), 1), (Natural(3), -1)])
    assert C.find_consistent(S).params == (7,)
    assert C.find_consistent(pairs([(Natural(7), 1), (Natural(3), 1)])) is None
    negs = pairs([(Natural(i), -1) for i in (0, 1, 2, 4)])
    h = C.find_consistent(negs)
    assert is_consistent(h, negs) and h.params[0] not in (0, 1, 2, 4)


def test_grid_singletons_hard_sample():
    C = grid_singletons()
    for k in range(1, 8):
        S = grid_hard_sample(k)
        assert C.find_consistent(S) is None
        for j in range(k):
            rest = LabelledSample(S.examples[:j] + S.examples[j + 1 :])
            h = C.find_consistent(rest)
            assert h is not None and is_consistent(h, rest)
    assert C.find_consistent(pairs([(GridPoint(2, 5), 1)])) is not None


def test_grid_witness_is_whole_hard_sample():
    S = grid_hard_sample(5)
    assert set(non_realizable_witness(grid_singletons(), S).subsample) == set(S)


def test_half_bounded_witnesses():
    C = half_bounded(4)
    S = pairs([(Index(3), 1)])
    assert C.find_consistent(S) is None
    assert non_realizable_witness(C, S).subsample == S
    free = pairs([(Index(0), 1), (Index(1), -1), (Index(3), -1)])
    assert C.find_consistent(free) is not None


def test_witness_sizes():
    H = halfplanes(2)
    noisy = pairs([(point(1, 1), 1), (point(1, 1), -1), (point(5, 5), 1)])
    assert len(non_realizable_witness(H, noisy).subsample) == 2
    tri = pairs([(point(0, 0), 1), (point(4, 0), 1), (point(0, 4), 1), (point(1, 1), -1), (point(9, 9), -1)])
    w = non_realizable_witness(H, tri).subsample
    assert len(w) == 4 and not H.is_realizable(w)
    with pytest.raises(ValueError):
        non_realizable_witness(H, pairs([(point(0, 0), 1)]))


def test_three_points_shattered_five_not():
    H = halfplanes(2)
    tri = [point(0, 0), point(3, 0), point(1, 2)]
    for ys in itertools.product((1, -1), repeat=3):
        assert H.is_realizable(pairs(zip(tri, ys)))
    rng = random.Random(0)
    for _ in range(20):
        five = list({point(rng.randint(0, 9), rng.randint(0, 9)) for _ in range(5)})
        if len(five) < 5:
            continue
        table = H.effective_table(pairs((p, 1) for p in five))
        assert len(table) < 2**5


coords = st.tuples(st.integers(0, 5), st.integers(0, 5)).map(lambda c: point(*c))
planar = st.lists(st.tuples(coords, st.sampled_from([1, -1])), min_size=1, max_size=12).map(pairs)
nat = st.lists(st.tuples(st.integers(0, 8).map(Natural), st.sampled_from([1, -1])), max_size=12).map(pairs)
grid = st.lists(
    st.tuples(st.tuples(st.integers(1, 4), st.integers(0, 3)).map(lambda t: GridPoint(t[0], t[0] + t[1])), st.sampled_from([1, -1])),
    max_size=10,
).map(pairs)
hb = st.lists(st.tuples(st.integers(0, 5).map(Index), st.sampled_from([1, -1])), max_size=10).map(pairs)


def _agrees(C, S):
    found = C.find_consistent(S)
    if len(S) == 0:
        return found is not None
    best = min(int(c) for c in C.effective_table(S).mistake_counts(S))
    if found is not None:
        assert is_consistent(found, S)
    return (found is not None) == (best == 0)


@settings(max_examples=60, deadline=None)
@given(planar)
def test_halfplane_find_matches_table(S):
    assert _agrees(halfplanes(2), S)


@settings(max_examples=60, deadline=None)
@given(nat)
def test_threshold_and_singleton_find_match_table(S):
    assert _agrees(thresholds(), S)
    assert _agrees(singletons(), S)


@settings(max_examples=60, deadline=None)
@given(grid, hb)
def test_grid_and_half_bounded_find_match_table(G, B):
    assert _agrees(grid_singletons(), G)
    assert _agrees(half_bounded(6), B)


@settings(max_examples=40, deadline=None)
@given(planar)
def test_halfplane_covc_bound(S):
    H = halfplanes(2)
    if H.is_realizable(S):
        return
    w = non_realizable_witness(H, S).subsample
    assert len(w) <= 6 and not H.is_realizable(w) and w.is_subsample_of(S)


def test_table_rows_are_realized_by_their_hypotheses():
    rng = random.Random(3)
    S = pairs((point(rng.randint(0, 20), rng.randint(0, 20)), 1) for _ in range(14))
    table = halfplanes(2).effective_table(S)
    pts = list(dict.fromkeys(S.points))
    for k in range(0, len(table), 7):
        h = table.hypothesis(k)
        got = [int(halfplanes(2).evaluate(h, p)) for p in pts]
        assert got == [int(v) for v in table.labels[k]]


def test_halfplanes3_table_and_find():
    H = halfplanes(3)
    S = pairs([(point(0, 0, 0), 1), (point(1, 0, 0), -1), (point(0, 1, 0), 1), (point(0, 0, 1), -1), (point(1, 1, 1), 1)])
    assert _agrees(H, S)
    assert empirical_loss(H.find_consistent(S), S) == 0
