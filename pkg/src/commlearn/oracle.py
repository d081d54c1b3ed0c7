"""Brute-force ground truth.

Decisions come from exhaustive search over the effective hypotheses of a
sample. Planar half-plane samples too large for the table are decided by a
separate hull routine here (gift wrapping, segment crossings, point in
polygon), which shares no code with the geometry module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .classes import HypothesisClassDescriptor, NonRealizableWitness
from .core import Hypothesis, Label, LabelledSample, PlanarPoint

TABLE_LIMIT = 64


@dataclass(frozen=True)
class OracleVerdict:
    realizable: bool
    witness: Hypothesis | NonRealizableWitness | None
    optimal_loss: Fraction | None
    optimizer: Hypothesis | None

    def __post_init__(self) -> None:
        if self.optimal_loss is not None and self.realizable != (self.optimal_loss == 0):
            raise ValueError("realizable must coincide with zero optimal loss")


@lru_cache(maxsize=1024)
def optimal_loss(cls: HypothesisClassDescriptor, sample: LabelledSample) -> tuple[Fraction, Hypothesis]:
    """Exact minimum empirical loss and the first minimizing row of the table."""
    table = cls.effective_table(sample)
    counts = table.mistake_counts(sample)
    best = int(np.argmin(counts))
    n = max(len(sample), 1)
    return Fraction(int(counts[best]), n), table.hypothesis(best)


@lru_cache(maxsize=1024)
def decide_realizable(cls: HypothesisClassDescriptor, sample: LabelledSample) -> OracleVerdict:
    if cls.name == "halfplanes2" and len(sample) > TABLE_LIMIT:
        pos = [z.point.coords for z in sample if z.label is Label.POS]
        neg = [z.point.coords for z in sample if z.label is Label.NEG]
        ok = not hulls_intersect_bruteforce(pos, neg)
        witness = None if ok else NonRealizableWitness(sample.distinct())
        return OracleVerdict(ok, witness, None, None)
    loss, h = optimal_loss(cls, sample)
    if loss == 0:
        return OracleVerdict(True, h, loss, h)
    return OracleVerdict(False, NonRealizableWitness(sample.distinct()), loss, h)


# ---------------------------------------------------------------------------
# planar hulls, from scratch


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _between(a, b, c) -> bool:
    """c lies in the bounding box of segment ab."""
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def _dist2(a, b):
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def gift_wrap(points) -> list:
    """Hull vertices by Jarvis march, collinear points dropped."""
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if len(pts) <= 1:
        return pts
    start = min(pts, key=lambda p: (p[1], p[0]))
    hull = [start]
    current = start
    while True:
        candidate = pts[0] if pts[0] != current else pts[1]
        for q in pts:
            if q == current:
                continue
            o = _orient(current, candidate, q)
            # q is clockwise of the candidate, or further along the same ray
            if o < 0 or (o == 0 and _dist2(current, q) > _dist2(current, candidate)):
                candidate = q
        if candidate == start:
            break
        hull.append(candidate)
        current = candidate
        if len(hull) > len(pts):
            raise RuntimeError("gift wrapping did not close")
    return hull


def _segments_meet(p1, p2, q1, q2) -> bool:
    d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and _between(q1, q2, p1))
        or (d2 == 0 and _between(q1, q2, p2))
        or (d3 == 0 and _between(p1, p2, q1))
        or (d4 == 0 and _between(p1, p2, q2))
    )


def _inside(hull: list, c) -> bool:
    if len(hull) == 1:
        return hull[0] == c
    if len(hull) == 2:
        return _orient(hull[0], hull[1], c) == 0 and _between(hull[0], hull[1], c)
    # counterclockwise hull: inside or on the boundary means never strictly right
    return all(_orient(hull[i], hull[(i + 1) % len(hull)], c) >= 0 for i in range(len(hull)))


def _edges(hull: list) -> list:
    if len(hull) < 2:
        return []
    if len(hull) == 2:
        return [(hull[0], hull[1])]
    return [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]


def _integral(X, Y):
    """Both sets rescaled by one positive common denominator; every
    orientation sign survives, and integer arithmetic is far cheaper."""
    X = [tuple(Fraction(c) for c in p) for p in X]
    Y = [tuple(Fraction(c) for c in p) for p in Y]
    scale = 1
    for p in X + Y:
        for c in p:
            scale = math.lcm(scale, c.denominator)
    return ([tuple(int(c * scale) for c in p) for p in X], [tuple(int(c * scale) for c in p) for p in Y])


def hulls_intersect_bruteforce(X, Y) -> bool:
    """Do the convex hulls of two planar point sets share a point?"""
    X, Y = _integral(X, Y)
    hx, hy = gift_wrap(X), gift_wrap(Y)
    if not hx or not hy:
        return False
    if any(_inside(hy, p) for p in hx) or any(_inside(hx, q) for q in hy):
        return True
    return any(_segments_meet(a, b, c, d) for a, b in _edges(hx) for c, d in _edges(hy))


def point_sets_verdict(X, Y) -> str:
    return "INTERSECTION" if hulls_intersect_bruteforce(_coords(X), _coords(Y)) else "DISJOINT"


def _coords(points) -> list:
    return [p.coords if isinstance(p, PlanarPoint) else tuple(p) for p in points]
