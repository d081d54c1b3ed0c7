"""Instance generators: the recursive planar family I_{m,r}, reduction maps
from bit-string problems, and random half-plane samples.

The circle anchors are rational: t -> ((1 - t^2)/(1 + t^2), 2t/(1 + t^2)) at
t_j = j/(m+1) gives m distinct directions in the open positive quadrant, and
the rotation built from an anchor and its perpendicular is exactly orthogonal.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import geometry, lp
from .core import (
    Example,
    GridPoint,
    Label,
    LabelledSample,
    Natural,
    PlanarPoint,
    fraction_str,
    sample_to_json,
)

Point = tuple[Fraction, Fraction]
MAX_HALVINGS = 40
ORIGIN: Point = (Fraction(0), Fraction(0))


# ---------------------------------------------------------------------------
# affine maps


def circle_points(m: int) -> list[Point]:
    pts = []
    for j in range(1, m + 1):
        t = Fraction(j, m + 1)
        pts.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    return pts


@dataclass(frozen=True)
class AffineMap:
    """v -> rotation @ diag(scale) @ v + translation."""

    rotation: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    scale: tuple[Fraction, Fraction]
    translation: Point

    @classmethod
    def for_anchor(cls, p: Point, eps: Fraction) -> AffineMap:
        # columns p_perp = (p_y, -p_x) and p
        rot = ((p[1], p[0]), (-p[0], p[1]))
        return cls(rot, (-eps, -eps * eps), p)

    def __call__(self, v: Point) -> Point:
        sx, sy = self.scale[0] * v[0], self.scale[1] * v[1]
        (a, b), (c, d) = self.rotation
        return (a * sx + b * sy + self.translation[0], c * sx + d * sy + self.translation[1])

    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.rotation
        return (a * d - b * c) * self.scale[0] * self.scale[1]


def _maps(m: int, eps: Fraction) -> list[AffineMap]:
    return [AffineMap.for_anchor(p, eps) for p in circle_points(m)]


# ---------------------------------------------------------------------------
# I_{m,r}


@dataclass(frozen=True)
class ImrInstance:
    m: int
    r: int
    eps: Fraction
    A: tuple[Point, ...]
    B: tuple[Point, ...]
    chain: tuple[int, ...]
    base_flag: bool  # True when the innermost B on the chain is empty
    subinstances: tuple[ImrInstance, ...] = ()

    @property
    def intersecting(self) -> bool:
        return not self.base_flag

    def to_json(self) -> dict:
        return {
            "kind": "imr",
            "params": {"m": self.m, "r": self.r, "eps": fraction_str(self.eps), "chain": list(self.chain)},
            "alice": [[fraction_str(c) for c in p] for p in self.A],
            "bob": [[fraction_str(c) for c in p] for p in self.B],
            "truth": "INTERSECTION" if self.intersecting else "DISJOINT",
        }


def _build(m: int, r: int, eps: Fraction, rng: random.Random) -> ImrInstance:
    if r == 1:
        empty = rng.random() < 0.5
        return ImrInstance(m, 1, eps, (ORIGIN,), () if empty else (ORIGIN,), (), empty)
    subs = tuple(_build(m, r - 1, eps, rng) for _ in range(m))
    i = rng.randrange(m)
    maps = _maps(m, eps)
    # roles swap one level down: Alice gets every sub-instance's Bob side
    A = tuple(dict.fromkeys(maps[j](b) for j, s in enumerate(subs) for b in s.B))
    B = tuple(dict.fromkeys(maps[i](a) for a in subs[i].A))
    return ImrInstance(m, r, eps, A, B, (i,) + subs[i].chain, subs[i].base_flag, subs)


def positive_separator(A: Sequence[Point], B: Sequence[Point]) -> tuple[Fraction, ...] | None:
    """u > 0 (entrywise) with u.a < 1 < u.b for all a in A, b in B, or None.

    Solved homogeneously: u >= 1, s >= 1, u.a <= s - 1, u.b >= s + 1, then
    rescaled by 1/s.
    """
    cons = [((1, 0, 0), ">=", 1), ((0, 1, 0), ">=", 1), ((0, 0, 1), ">=", 1)]
    cons += [((a[0], a[1], -1), "<=", -1) for a in A]
    cons += [((b[0], b[1], -1), ">=", 1) for b in B]
    sol = lp.feasible(cons, 3)
    if sol is None:
        return None
    u1, u2, s = sol
    return (u1 / s, u2 / s)


def _equivalence_holds(inst: ImrInstance) -> bool:
    hull_disjoint = isinstance(geometry.hulls_intersect(inst.A, inst.B), geometry.Disjoint)
    set_disjoint = not set(inst.A) & set(inst.B)
    if not hull_disjoint == inst.base_flag == set_disjoint:
        return False
    if hull_disjoint and inst.A and inst.B:
        u = positive_separator(inst.A, inst.B)
        if u is None:
            return False
        assert all(lp.dot(u, a) < 1 for a in inst.A) and all(lp.dot(u, b) > 1 for b in inst.B)
    return True


def validate_imr(inst: ImrInstance) -> bool:
    """Exact check of the three-way equivalence (hull disjointness, innermost
    disjointness, set disjointness) and the positive separator, at every
    level of the recursion."""
    if not _equivalence_holds(inst):
        return False
    return all(validate_imr(s) for s in inst.subinstances)


def default_eps(m: int) -> Fraction:
    return Fraction(1, 16 * m * m)


def gen_imr(m: int, r: int, seed: int = 0, eps=None) -> ImrInstance:
    if m < 1 or r < 1:
        raise ValueError("m and r must be at least 1")
    if eps is not None:
        return _build(m, r, Fraction(eps), random.Random(seed))
    eps = default_eps(m)
    for _ in range(MAX_HALVINGS + 1):
        inst = _build(m, r, eps, random.Random(seed))
        if validate_imr(inst):
            return inst
        eps /= 2
    raise ValueError(f"no valid eps for I_{{{m},{r}}} after {MAX_HALVINGS} halvings")


@lru_cache(maxsize=None)
def universe(m: int, r: int, eps=None) -> frozenset[Point]:
    """Every point any I_{m,r} instance can use."""
    if m < 1 or r < 1:
        raise ValueError("m and r must be at least 1")
    if r == 1:
        return frozenset({ORIGIN})
    eps = default_eps(m) if eps is None else Fraction(eps)
    inner = universe(m, r - 1, eps)
    return frozenset(T(v) for T in _maps(m, eps) for v in inner)


# ---------------------------------------------------------------------------
# reductions


def _bits(x) -> tuple[int, ...]:
    bits = tuple(int(c) for c in x)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a bit string: {x!r}")
    return bits


def _same_length(*strings) -> int:
    n = len(strings[0])
    if any(len(s) != n for s in strings):
        raise ValueError("bit strings must have equal length")
    return n


def agnostic_reduction(x, y) -> tuple[LabelledSample, LabelledSample]:
    """Example i is (i, +1) when bit i is set and (i, -1) otherwise, over
    the naturals 1..n."""
    x, y = _bits(x), _bits(y)
    n = _same_length(x, y)
    if n < 1:
        raise ValueError("bit strings must be nonempty")

    def side(bits):
        return LabelledSample(tuple(Example(Natural(i + 1), Label.POS if b else Label.NEG) for i, b in enumerate(bits)))

    return side(x), side(y)


def agnostic_optimum_formula(x, y) -> Fraction:
    """(|x| + |y| - 2 [x and y meet]) / (2n): the best singleton picks a
    shared index when there is one."""
    x, y = _bits(x), _bits(y)
    n = _same_length(x, y)
    meet = any(a and b for a, b in zip(x, y))
    return Fraction(sum(x) + sum(y) - 2 * meet, 2 * n)


def conp_reduction(x, y, S: LabelledSample) -> tuple[LabelledSample, LabelledSample]:
    x, y = _bits(x), _bits(y)
    n = _same_length(x, y, S.examples)
    if n <= 1:
        raise ValueError("need n > 1")
    sa = LabelledSample(tuple(z for z, b in zip(S, x) if b == 0))
    sb = LabelledSample(tuple(z for z, b in zip(S, y) if b == 0))
    return sa, sb


def np_reduction(x, y, R: Sequence) -> tuple[LabelledSample, LabelledSample]:
    x, y = _bits(x), _bits(y)
    _same_length(x, y, R)
    sa = LabelledSample(tuple(Example(p, Label.POS) for p, b in zip(R, x) if b))
    sb = LabelledSample(tuple(Example(p, Label.NEG) for p, b in zip(R, y) if b))
    return sa, sb


# ---------------------------------------------------------------------------
# random samples

GRID = 1000
DENOM = 10


def _grid_point(rng: random.Random) -> PlanarPoint:
    return PlanarPoint((Fraction(rng.randint(-GRID, GRID), DENOM), Fraction(rng.randint(-GRID, GRID), DENOM)))


def _random_halfplane(rng: random.Random):
    while True:
        w = (rng.randint(-5, 5), rng.randint(-5, 5))
        if w != (0, 0):
            break
    return w, Fraction(rng.randint(-GRID // 2, GRID // 2), DENOM)


def random_halfplane_instance(n: int, noisy: bool = False, seed: int = 0, margin=Fraction(1, 2)):
    """n distinct grid points labelled by a random half-plane, kept at least
    ``margin`` away from the boundary. With ``noisy``, two of the n examples
    are replaced by one fresh point carried with both labels, one copy per
    party."""
    if n < 1 or (noisy and n < 2):
        raise ValueError("n must be at least 1 (2 when noisy)")
    rng = random.Random(seed)
    w, c = _random_halfplane(rng)
    clean = n - 2 if noisy else n
    seen: dict[PlanarPoint, Label] = {}
    while len(seen) < clean + noisy:
        p = _grid_point(rng)
        v = w[0] * p.coords[0] + w[1] * p.coords[1] - c
        if abs(v) < margin or p in seen:
            continue
        seen[p] = Label.POS if v > 0 else Label.NEG
    items = list(seen.items())
    extra = items.pop() if noisy else None
    sa, sb = [], []
    for p, y in items:
        (sa if rng.random() < 0.5 else sb).append(Example(p, y))
    if extra is not None:
        p, y = extra
        sa.insert(rng.randint(0, len(sa)), Example(p, y))
        sb.insert(rng.randint(0, len(sb)), Example(p, y.flipped()))
    return LabelledSample(tuple(sa)), LabelledSample(tuple(sb))


def random_point_sets(n: int, separable: bool, seed: int = 0) -> tuple[list[PlanarPoint], list[PlanarPoint]]:
    """Alice's and Bob's point sets for convex set disjointness, n points in
    total. Separable sets are the two sides of a random line; otherwise
    each point picks a side by coin flip, which for all but tiny n makes
    the hulls meet. Either way the ground truth is left to the oracle."""
    rng = random.Random(seed)
    if separable:
        sa, sb = random_halfplane_instance(n, False, seed)
        joint = sa + sb
        return joint.positives(), joint.negatives()
    pts = list(dict.fromkeys(_grid_point(rng) for _ in range(n)))
    while len(pts) < n:
        p = _grid_point(rng)
        if p not in pts:
            pts.append(p)
    X, Y = [], []
    for p in pts:
        (X if rng.random() < 0.5 else Y).append(p)
    if not X:
        X.append(Y.pop())
    if not Y:
        Y.append(X.pop())
    return X, Y


def instance_json(kind: str, params: dict, alice: LabelledSample, bob: LabelledSample, truth=None) -> dict:
    return {
        "kind": kind,
        "params": params,
        "alice": sample_to_json(alice),
        "bob": sample_to_json(bob),
        "truth": truth,
    }


def grid_hard_sample(k: int) -> LabelledSample:
    """S_k = ((1,k),-1), ..., ((k,k),-1): non-realizable by grid singletons,
    while dropping any one example leaves it realizable."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return LabelledSample(tuple(Example(GridPoint(j, k), Label.NEG) for j in range(1, k + 1)))


def split(sample: LabelledSample, rng: random.Random) -> tuple[LabelledSample, LabelledSample]:
    sa, sb = [], []
    for z in sample:
        (sa if rng.random() < 0.5 else sb).append(z)
    return LabelledSample(tuple(sa)), LabelledSample(tuple(sb))


def flip_labels(sample: LabelledSample, rate, seed: int = 0) -> LabelledSample:
    """Each example's label flipped independently with probability ``rate``."""
    rng = random.Random(seed)
    rate = float(rate)
    return LabelledSample(tuple(Example(z.point, z.label.flipped() if rng.random() < rate else z.label) for z in sample))


def random_threshold_instance(n: int, seed: int = 0, span: int = 1000) -> tuple[LabelledSample, LabelledSample]:
    """n naturals below ``span`` labelled by a random threshold."""
    rng = random.Random(seed)
    t = rng.randint(0, span)
    xs = [rng.randrange(span) for _ in range(n)]
    sample = LabelledSample(tuple(Example(Natural(x), Label.POS if x >= t else Label.NEG) for x in xs))
    return split(sample, rng)


def random_singleton_instance(n: int, seed: int = 0, span: int = 1000) -> tuple[LabelledSample, LabelledSample]:
    """n naturals labelled by a random singleton; about half the time the
    chosen point itself is in the sample."""
    rng = random.Random(seed)
    target = rng.randrange(span)
    xs = [rng.randrange(span) for _ in range(n)]
    if n and rng.random() < 0.5:
        xs[rng.randrange(n)] = target
    sample = LabelledSample(tuple(Example(Natural(x), Label.POS if x == target else Label.NEG) for x in xs))
    return split(sample, rng)
