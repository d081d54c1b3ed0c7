import random
from fractions import Fraction

import pytest

from commlearn.classes import halfplanes, thresholds
from commlearn.core import LabelledSample, Natural, SampleDistribution
from commlearn.instances import random_halfplane_instance
from commlearn.nets import (
    NetError,
    epsilon_approximation,
    epsilon_net,
    verify_approximation,
    verify_net,
    violating_net_rows,
)

F = Fraction
H = halfplanes(2)


def _realizable(n, seed):
    sa, sb = random_halfplane_instance(n, False, seed)
    return sa + sb


def test_vacuous_net():
    S = _realizable(30, 1)
    cert = epsilon_net(S, SampleDistribution.uniform(len(S)), H, 1)
    assert len(cert.subsample) == 0 and verify_net(cert, S, SampleDistribution.uniform(len(S)), H)


@pytest.mark.parametrize("method", ["draw", "compression", "auto"])
def test_net_on_200_points(method):
    S = _realizable(200, 7)
    p = SampleDistribution.uniform(len(S))
    cert = epsilon_net(S, p, H, F(1, 10), seed=3, method=method)
    assert cert.verified
    assert not violating_net_rows(H, S, p, cert.subsample, F(1, 10))
    assert verify_net(cert, S, p, H)


def test_point_mass_net_contains_the_point():
    S = _realizable(40, 2)
    p = SampleDistribution.point_mass(len(S), 5)
    cert = epsilon_net(S, p, H, F(1, 2), method="draw")
    assert S[5] in cert.subsample.examples


def test_net_determinism_and_monotonicity():
    S = _realizable(120, 4)
    p = SampleDistribution.uniform(len(S))
    a = epsilon_net(S, p, H, F(1, 5), seed=9, method="draw")
    b = epsilon_net(S, p, H, F(1, 5), seed=9, method="draw")
    assert a == b
    rng = random.Random(0)
    for _ in range(5):
        extra = rng.sample(list(S), 10)
        bigger = LabelledSample(a.subsample.examples + tuple(extra))
        assert not violating_net_rows(H, S, p, bigger, F(1, 5))


def test_net_rejects_non_realizable():
    sa, sb = random_halfplane_instance(20, True, 1)
    S = sa + sb
    with pytest.raises(NetError):
        epsilon_net(S, SampleDistribution.uniform(len(S)), H, F(1, 4))


def test_threshold_net_compression():
    S = LabelledSample.from_pairs([(Natural(i), 1 if i >= 10 else -1) for i in range(30)])
    cert = epsilon_net(S, SampleDistribution.uniform(30), thresholds(), F(1, 10), method="compression")
    assert sorted(z.point.n for z in cert.subsample) == [9, 10]


def test_approximation_cases():
    S = _realizable(100, 5)
    cert = epsilon_approximation(S, H, F(1, 5))
    assert len(cert.subsample) <= 100 and verify_approximation(cert, S, H)
    one = S[:1]
    assert epsilon_approximation(one, H, F(1, 5)).subsample == one


def test_approximation_draw_route_verifies():
    S = LabelledSample.from_pairs([(Natural(i), 1 if i % 3 else -1) for i in range(600)])
    cert = epsilon_approximation(S, thresholds(), F(1, 5), seed=2)
    assert cert.method == "draw" and len(cert.subsample) < len(S)
    assert verify_approximation(cert, S, thresholds())
