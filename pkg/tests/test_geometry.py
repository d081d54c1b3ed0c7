import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commlearn import geometry
from commlearn.geometry import (
    Disjoint,
    HullsIntersectError,
    Intersecting,
    caratheodory_reduce,
    convex_hull_2d,
    hulls_intersect,
    in_hull,
    separating_line,
)
from commlearn.oracle import hulls_intersect_bruteforce

F = Fraction


def test_square_hull_drops_center():
    hull = convex_hull_2d([(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2))])
    assert sorted(hull) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_collinear_hull_is_endpoints():
    assert sorted(convex_hull_2d([(0, 0), (1, 1), (2, 2)])) == [(0, 0), (2, 2)]


def test_hull_vertices_against_lp():
    rng = random.Random(5)
    pts = list({(F(rng.randint(0, 40), 4), F(rng.randint(0, 40), 4)) for _ in range(20)})
    hull = convex_hull_2d(pts)
    for p in pts:
        if p in hull:
            assert not in_hull(p, [q for q in pts if q != p])
        else:
            assert in_hull(p, hull)


def test_base_cases():
    r = hulls_intersect([(0, 0)], [(0, 0)])
    assert isinstance(r, Intersecting) and r.witness.point == (0, 0)
    assert isinstance(hulls_intersect([(0, 0)], []), Disjoint)


def test_triangle_contains_point():
    r = hulls_intersect([(0, 0), (2, 0), (0, 2)], [(F(1, 2), F(1, 2))])
    assert isinstance(r, Intersecting)
    assert len(r.witness.positive_support) == 3
    assert r.witness.check()


def test_separating_line_midpoint():
    sep = separating_line([(0, 0)], [(2, 0)])
    assert sep.normal == (1, 0) and sep.offset == 1
    with pytest.raises(HullsIntersectError):
        separating_line([(0, 0), (2, 2)], [(1, 1)])


def test_arc_and_reflected_arc():
    # rational points on the upper unit circle and their reflection below y = -1/2
    ts = [F(j, 7) for j in range(1, 7)]
    arc = [((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)) for t in ts]
    mirror = [(x, -y - F(1, 2)) for x, y in arc]
    sep = separating_line(arc, mirror)
    assert sep.separates(arc, mirror)
    assert len(sep.support) <= 3


def test_caratheodory_cases():
    assert caratheodory_reduce((1, 1), [(1, 1), (0, 0), (3, 4)]) == ([(1, 1)], [1])
    sq = [(0, 0), (2, 0), (2, 2), (0, 2)]
    sup, lam = caratheodory_reduce((1, 1), sq)
    assert len(sup) <= 3 and sum(lam) == 1 and all(c > 0 for c in lam)
    assert tuple(sum(c * q[i] for c, q in zip(lam, sup)) for i in range(2)) == (1, 1)
    sup, lam = caratheodory_reduce((1, 1), [(0, 0), (2, 2)])
    assert lam == [F(1, 2), F(1, 2)]
    with pytest.raises(geometry.NotInHullError):
        caratheodory_reduce((5, 5), sq)


cell = st.tuples(st.integers(0, 4), st.integers(0, 4))
sets = st.lists(cell, min_size=1, max_size=8, unique=True)


@settings(max_examples=200, deadline=None)
@given(sets, sets)
def test_agrees_with_bruteforce_and_roundtrips(X, Y):
    r = hulls_intersect(X, Y)
    assert isinstance(r, Intersecting) == hulls_intersect_bruteforce(X, Y)
    if isinstance(r, Disjoint):
        assert r.separator.separates(X, Y)
    else:
        assert r.witness.check()


@settings(max_examples=80, deadline=None)
@given(sets, sets)
def test_symmetry(X, Y):
    a, b = hulls_intersect(X, Y), hulls_intersect(Y, X)
    assert type(a) is type(b)
    if isinstance(a, Disjoint):
        assert b.separator.separates(Y, X)
    else:
        assert a.witness.point == b.witness.point or b.witness.check()


@settings(max_examples=60, deadline=None)
@given(sets, sets, st.integers(1, 5), st.integers(-3, 3), st.fractions(F(-5), F(5)))
def test_affine_equivariance(X, Y, a, b, t):
    if a * a - b == 0:
        return

    def T(p):
        return (a * p[0] + b * p[1] + t, p[0] + a * p[1] - t)

    before = isinstance(hulls_intersect(X, Y), Intersecting)
    after = isinstance(hulls_intersect([T(p) for p in X], [T(q) for q in Y]), Intersecting)
    assert before == after


def test_random_disjoint_pairs_separated():
    rng = random.Random(11)
    for _ in range(100):
        X = [(F(rng.randint(0, 50)), F(rng.randint(0, 50))) for _ in range(rng.randint(1, 6))]
        Y = [(F(rng.randint(60, 100)), F(rng.randint(0, 50))) for _ in range(rng.randint(1, 6))]
        sep = separating_line(X, Y)
        assert all(sep.value(p) < 0 for p in X) and all(sep.value(q) > 0 for q in Y)


def test_three_dimensional_route():
    X = [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)]
    assert isinstance(hulls_intersect(X, [(F(1, 4), F(1, 4), F(1, 4))]), Intersecting)
    r = hulls_intersect(X, [(3, 3, 3)])
    assert isinstance(r, Disjoint) and r.separator.separates(X, [(3, 3, 3)])


def test_separate_from_polyhedron():
    xs = [(0, 0), (1, 0)]
    # y >= 3 and x <= 5
    halfspaces = [((F(0), F(1)), F(3)), ((F(-1), F(0)), F(-5))]
    sep = geometry.separate_from_polyhedron(xs, halfspaces)
    assert sep is not None and all(sep.value(p) < 0 for p in xs)
    assert sep.value((4, 3)) > 0
