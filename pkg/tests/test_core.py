import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commlearn.classes import halfplane, halfplanes
from commlearn.core import (
    Example,
    GridPoint,
    Hypothesis,
    Label,
    LabelledSample,
    Natural,
    SampleDistribution,
    concat,
    constant,
    empirical_loss,
    hypothesis_from_json,
    hypothesis_to_json,
    is_noisy,
    point,
    sample_from_json,
    sample_to_json,
    weighted_loss,
)

labels = st.sampled_from([1, -1])
naturals = st.integers(min_value=0, max_value=20).map(Natural)
samples = st.lists(st.tuples(naturals, labels), max_size=12).map(LabelledSample.from_pairs)
small = st.integers(min_value=-4, max_value=4)
planar = st.lists(st.tuples(st.tuples(small, small).map(lambda c: point(*c)), labels), min_size=1, max_size=8).map(
    LabelledSample.from_pairs
)


def test_constant_loss_examples():
    neg = constant(-1)
    assert empirical_loss(neg, LabelledSample.from_pairs([(Natural(3), -1)])) == 0
    assert empirical_loss(neg, LabelledSample.from_pairs([(Natural(3), 1), (Natural(4), -1)])) == Fraction(1, 2)


def test_halfplane_loss_counts_disagreements():
    h = halfplane((1, 0), 0)
    S = LabelledSample.from_pairs(
        [(point(1, 0), 1), (point(2, 5), 1), (point(-1, 0), -1), (point(-3, 2), -1), (point(0, 1), -1), (point(-1, -1), 1)]
    )
    assert empirical_loss(h, S) == Fraction(1, 3)


def test_weighted_loss_examples():
    S = LabelledSample.from_pairs([(Natural(1), -1), (Natural(2), 1)])
    h = constant(-1)
    assert weighted_loss(h, S, SampleDistribution((Fraction(1, 4), Fraction(3, 4)))) == Fraction(3, 4)
    assert weighted_loss(h, S, SampleDistribution.point_mass(2, 1)) == 1


def test_distribution_rejects_bad_weights():
    with pytest.raises(ValueError):
        SampleDistribution((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        SampleDistribution((Fraction(3, 2), Fraction(-1, 2)))


@given(samples, st.integers(min_value=0, max_value=20))
def test_uniform_weighting_is_empirical(S, t):
    if len(S) == 0:
        return
    h = Hypothesis("threshold", (Fraction(t),))
    assert weighted_loss(h, S, SampleDistribution.uniform(len(S))) == empirical_loss(h, S)


@given(samples, st.randoms())
def test_loss_permutation_invariant(S, rnd):
    if len(S) == 0:
        with pytest.raises(ValueError):
            empirical_loss(constant(1), S)
        return
    examples = list(S)
    rnd.shuffle(examples)
    h = constant(1)
    assert empirical_loss(h, S) == empirical_loss(h, LabelledSample(tuple(examples)))
    assert 0 <= empirical_loss(h, S) <= 1


@given(samples, samples)
def test_concat_sizes_and_identity(a, b):
    assert len(concat(a, b)) == len(a) + len(b)
    assert concat(LabelledSample(), a) == a == concat(a, LabelledSample())


def test_is_noisy_examples():
    x, x2 = point(1, 2), point(2, 1)
    assert is_noisy(LabelledSample.from_pairs([(x, 1), (x, -1)]))
    assert not is_noisy(LabelledSample.from_pairs([(x, 1), (x2, -1)]))


@given(planar)
def test_noisy_forces_a_mistake(S):
    if not is_noisy(S):
        return
    table = halfplanes(2).effective_table(S)
    assert min(int(c) for c in table.mistake_counts(S)) >= 1


def test_points_validate():
    with pytest.raises(ValueError):
        GridPoint(3, 2)
    with pytest.raises(ValueError):
        Natural(-1)
    with pytest.raises(ValueError):
        Example(Natural(1), 0)


@given(planar)
def test_sample_json_roundtrip(S):
    text = json.dumps(sample_to_json(S))
    assert sample_from_json(json.loads(text)) == S


def test_hypothesis_json_roundtrip():
    h = halfplane((Fraction(2), Fraction(-3, 7)), Fraction(5, 3))
    back = hypothesis_from_json(json.loads(json.dumps(hypothesis_to_json(h))))
    assert back == h
    assert all(isinstance(c, Fraction) for c in back.params[0])


def test_label_flip():
    assert Label.POS.flipped() is Label.NEG
