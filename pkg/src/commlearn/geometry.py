"""Exact rational geometry in R^2 and R^3.

Points are tuples of ``Fraction``. Nothing in this module uses floating point.

Hull intersection is decided by exact linear feasibility of the system
``sum_i lam_i x_i = sum_j mu_j y_j`` with both combinations convex. A vertex
solution of that system is already a Caratheodory witness. Disjoint pairs get
the maximum-margin separator: its normal is the minimum-norm point of the
Minkowski difference conv(Y) - conv(X), which is rational, so the separator
is exact and is reproduced from its support points alone.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from . import lp
from .lp import Vector, combination, dot, sub

Point = tuple[Fraction, ...]


def as_point(p: Iterable) -> Point:
    coords = getattr(p, "coords", p)
    return tuple(Fraction(c) for c in coords)


def _dim(*sets: Sequence[Point]) -> int | None:
    dims = {len(p) for s in sets for p in s}
    if len(dims) > 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")
    if dims and not dims <= {2, 3}:
        raise ValueError(f"unsupported dimension {dims.pop()}")
    return dims.pop() if dims else None


@dataclass(frozen=True)
class Separator:
    """Strict separator: ``normal . x < offset`` on the negative side and
    ``> offset`` on the positive side."""

    normal: Vector
    offset: Fraction
    negative_support: tuple[Point, ...] = ()
    positive_support: tuple[Point, ...] = ()

    def __post_init__(self) -> None:
        if not any(self.normal):
            raise ValueError("separator normal must be nonzero")

    @property
    def support(self) -> tuple[Point, ...]:
        return self.negative_support + self.positive_support

    def value(self, p: Point) -> Fraction:
        return dot(self.normal, p) - self.offset

    def side(self, p: Point) -> int:
        v = self.value(p)
        return (v > 0) - (v < 0)

    def separates(self, negatives: Iterable[Point], positives: Iterable[Point]) -> bool:
        return all(self.value(p) < 0 for p in negatives) and all(self.value(q) > 0 for q in positives)

    def flipped(self) -> Separator:
        return Separator(
            tuple(-c for c in self.normal), -self.offset, self.positive_support, self.negative_support
        )


@dataclass(frozen=True)
class CaratheodoryWitness:
    point: Point
    positive_support: tuple[Point, ...]
    positive_coefficients: tuple[Fraction, ...]
    negative_support: tuple[Point, ...]
    negative_coefficients: tuple[Fraction, ...]

    def check(self) -> bool:
        for support, coeffs in (
            (self.positive_support, self.positive_coefficients),
            (self.negative_support, self.negative_coefficients),
        ):
            if not support or any(c < 0 for c in coeffs) or sum(coeffs) != 1:
                return False
            if combination(coeffs, support) != self.point:
                return False
        return True

    def swapped(self) -> CaratheodoryWitness:
        return CaratheodoryWitness(
            self.point,
            self.negative_support,
            self.negative_coefficients,
            self.positive_support,
            self.positive_coefficients,
        )


@dataclass(frozen=True)
class Disjoint:
    separator: Separator


@dataclass(frozen=True)
class Intersecting:
    witness: CaratheodoryWitness


IntersectionResult = Disjoint | Intersecting


class HullsIntersectError(ValueError):
    def __init__(self, witness: CaratheodoryWitness):
        super().__init__("point sets have intersecting convex hulls")
        self.witness = witness


class NotInHullError(ValueError):
    pass


# ---------------------------------------------------------------------------
# hulls


def cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Iterable) -> list[Point]:
    """Counterclockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(as_point(p) for p in points))
    if pts and len(pts[0]) != 2:
        raise ValueError("convex_hull_2d needs planar points")
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain: list[Point] = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull


def in_convex_polygon(p: Point, hull: Sequence[Point]) -> bool:
    """Closed membership test against ccw hull vertices (any size)."""
    if not hull:
        return False
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        a, b = hull
        if cross(a, b, p) != 0:
            return False
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    n = len(hull)
    return all(cross(hull[i], hull[(i + 1) % n], p) >= 0 for i in range(n))


def in_hull(p: Point, points: Sequence[Point]) -> bool:
    p = as_point(p)
    pts = [as_point(q) for q in points]
    if not pts:
        return False
    if len(p) == 2:
        return in_convex_polygon(p, convex_hull_2d(pts))
    return _convex_coefficients(p, pts) is not None


def extreme_points(points: Iterable) -> list[Point]:
    """Vertices of conv(points), sorted; the planar case is the hull in ccw order."""
    pts = sorted(set(as_point(p) for p in points))
    if not pts:
        return []
    if len(pts[0]) == 2:
        return convex_hull_2d(pts)
    return [p for i, p in enumerate(pts) if _convex_coefficients(p, pts[:i] + pts[i + 1 :]) is None]


# ---------------------------------------------------------------------------
# convex combinations


def _convex_coefficients(p: Point, pts: Sequence[Point]) -> Vector | None:
    if not pts:
        return None
    d = len(p)
    a_eq = [[q[k] for q in pts] for k in range(d)] + [[Fraction(1)] * len(pts)]
    return lp.feasible_nonneg(a_eq, list(p) + [Fraction(1)])


def _eliminate(points: list[Point], coeffs: list[Fraction]) -> tuple[list[Point], list[Fraction]]:
    """Shrink a convex combination to at most d+1 affinely independent terms."""
    keep = [(q, c) for q, c in zip(points, coeffs) if c > 0]
    points = [q for q, _ in keep]
    coeffs = [c for _, c in keep]
    d = len(points[0])
    while len(points) > d + 1 or _affinely_dependent(points):
        # affine dependency: sum a_i q_i = 0 with sum a_i = 0, a != 0
        cols = [tuple(q) + (Fraction(1),) for q in points]
        a = lp.null_vector(cols)
        assert a is not None
        if all(v <= 0 for v in a):
            a = tuple(-v for v in a)
        t = min(c / v for c, v in zip(coeffs, a) if v > 0)
        coeffs = [c - t * v for c, v in zip(coeffs, a)]
        keep = [(q, c) for q, c in zip(points, coeffs) if c > 0]
        points = [q for q, _ in keep]
        coeffs = [c for _, c in keep]
    return points, coeffs


def _affinely_dependent(points: Sequence[Point]) -> bool:
    if len(points) <= 1:
        return False
    return lp.null_vector([tuple(q) + (Fraction(1),) for q in points]) is not None


def caratheodory_reduce(p: Iterable, points: Iterable) -> tuple[list[Point], list[Fraction]]:
    """At most d+1 points of ``points`` with convex coefficients reproducing ``p``."""
    p = as_point(p)
    pts = sorted(set(as_point(q) for q in points))
    _dim([p], pts)
    if p in pts:
        return [p], [Fraction(1)]
    lam = _convex_coefficients(p, pts)
    if lam is None:
        raise NotInHullError(f"{p} is not in the convex hull")
    sup, coeffs = _eliminate(list(pts), list(lam))
    return sup, coeffs


# ---------------------------------------------------------------------------
# minimum-norm point (Wolfe)


def _affine_min_norm(pts: Sequence[Point]) -> Vector:
    k = len(pts)
    mat = [[dot(pts[i], pts[j]) for j in range(k)] + [Fraction(1)] for i in range(k)]
    mat.append([Fraction(1)] * k + [Fraction(0)])
    sol = lp.solve(mat, [Fraction(0)] * k + [Fraction(1)])
    if sol is None:
        raise ArithmeticError("affinely dependent corral")
    return sol[:k]


def min_norm_point(points: Sequence[Point]) -> tuple[Vector, dict[int, Fraction]]:
    """Exact minimum-norm point of conv(points) with its convex coefficients."""
    pts = [as_point(p) for p in points]
    j0 = min(range(len(pts)), key=lambda i: (dot(pts[i], pts[i]), i))
    corral = [j0]
    lam = {j0: Fraction(1)}
    x = pts[j0]
    while True:
        xx = dot(x, x)
        j = min(range(len(pts)), key=lambda i: (dot(x, pts[i]), i))
        if dot(x, pts[j]) >= xx or j in lam:
            break
        corral.append(j)
        lam[j] = Fraction(0)
        while True:
            mu = dict(zip(corral, _affine_min_norm([pts[i] for i in corral])))
            if all(v > 0 for v in mu.values()):
                lam = mu
                break
            theta = min(lam[i] / (lam[i] - mu[i]) for i in corral if mu[i] <= 0 and lam[i] != mu[i])
            lam = {i: (1 - theta) * lam[i] + theta * mu[i] for i in corral}
            corral = [i for i in corral if lam[i] > 0]
            lam = {i: lam[i] for i in corral}
        x = combination([lam[i] for i in corral], [pts[i] for i in corral])
    return x, lam


def _normalize(normal: Vector, offset: Fraction) -> tuple[Vector, Fraction]:
    lead = next(abs(c) for c in normal if c != 0)
    return tuple(c / lead for c in normal), offset / lead


def _max_margin(xs: Sequence[Point], ys: Sequence[Point]) -> tuple[Vector, Fraction, list[tuple[Point, Point]]]:
    diffs = []
    pairs = []
    for x in xs:
        for y in ys:
            diffs.append(sub(y, x))
            pairs.append((x, y))
    v, lam = min_norm_point(diffs)
    if not any(v):
        raise ValueError("hulls intersect")
    top = max(dot(v, x) for x in xs)
    bottom = min(dot(v, y) for y in ys)
    normal, offset = _normalize(v, (top + bottom) / 2)
    return normal, offset, [pairs[i] for i in sorted(lam)]


def _one_sided(xs: Sequence[Point], ys: Sequence[Point], d: int) -> Separator:
    e1 = tuple(Fraction(int(k == 0)) for k in range(d))
    if xs:
        top = max(xs)
        return Separator(e1, top[0] + 1, (top,), ())
    if ys:
        bottom = min(ys)
        return Separator(e1, bottom[0] - 1, (), (bottom,))
    return Separator(e1, Fraction(0))


def _separator(xs: list[Point], ys: list[Point]) -> Separator:
    """Canonical max-margin separator of disjoint hulls (X negative, Y positive)."""
    d = len((xs or ys)[0])
    if not xs or not ys:
        return _one_sided(xs, ys, d)
    normal, offset, pairs = _max_margin(xs, ys)
    sup_x = sorted({x for x, _ in pairs})
    sup_y = sorted({y for _, y in pairs})
    # drop support points (lexicographic order) while the separator persists
    changed = True
    while changed and len(sup_x) + len(sup_y) > 2:
        changed = False
        for side in (0, 1):
            current = sup_x if side == 0 else sup_y
            if len(current) == 1:
                continue
            for q in list(current):
                trial = [r for r in current if r != q]
                tx, ty = (trial, sup_y) if side == 0 else (sup_x, trial)
                n2, o2, _ = _max_margin(tx, ty)
                if (n2, o2) == (normal, offset):
                    current[:] = trial
                    changed = True
                    break
    return Separator(normal, offset, tuple(sup_x), tuple(sup_y))


def separator_from_support(negative_support: Sequence[Point], positive_support: Sequence[Point], d: int = 2) -> Separator:
    """Rebuild a canonical separator from its transmitted support points."""
    xs = sorted(set(as_point(p) for p in negative_support))
    ys = sorted(set(as_point(p) for p in positive_support))
    if not xs or not ys:
        return _one_sided(xs, ys, d)
    normal, offset, _ = _max_margin(xs, ys)
    return Separator(normal, offset, tuple(xs), tuple(ys))


# ---------------------------------------------------------------------------
# hull intersection


def _common_point(xs: list[Point], ys: list[Point]) -> CaratheodoryWitness | None:
    d = len(xs[0])
    nx, ny = len(xs), len(ys)
    rows = []
    for k in range(d):
        rows.append([x[k] for x in xs] + [-y[k] for y in ys])
    rows.append([Fraction(1)] * nx + [Fraction(0)] * ny)
    rows.append([Fraction(0)] * nx + [Fraction(1)] * ny)
    sol = lp.feasible_nonneg(rows, [Fraction(0)] * d + [Fraction(1), Fraction(1)])
    if sol is None:
        return None
    lam, mu = list(sol[:nx]), list(sol[nx:])
    omega = combination(lam, xs)
    px, cx = _eliminate(list(xs), lam)
    py, cy = _eliminate(list(ys), mu)
    return CaratheodoryWitness(omega, tuple(px), tuple(cx), tuple(py), tuple(cy))


def hulls_intersect(xs: Iterable, ys: Iterable) -> IntersectionResult:
    """Decide conv(X) cap conv(Y) exactly.

    The separator of a ``Disjoint`` result has X on its negative side; the
    witness of an ``Intersecting`` result lists X's support as positive.
    """
    xs = [as_point(p) for p in xs]
    ys = [as_point(p) for p in ys]
    d = _dim(xs, ys) or 2
    hx, hy = extreme_points(xs), extreme_points(ys)
    if hx and hy:
        w = _common_point(hx, hy)
        if w is not None:
            return Intersecting(w)
    return Disjoint(_separator(hx, hy))


def separating_line(xs: Iterable, ys: Iterable) -> Separator:
    xs = [as_point(p) for p in xs]
    ys = [as_point(p) for p in ys]
    if not xs or not ys:
        raise ValueError("separating_line needs two nonempty point sets")
    result = hulls_intersect(xs, ys)
    if isinstance(result, Intersecting):
        raise HullsIntersectError(result.witness)
    return result.separator


def separate_from_polyhedron(
    xs: Iterable, halfspaces: Sequence[tuple[Vector, Fraction]]
) -> Separator | None:
    """Strictly separate conv(X) from K = {y : a . y >= c for all (a, c)}.

    By Farkas, K lies in {w . y >= b + 1} when w = sum_t l_t a_t and
    b + 1 <= sum_t l_t c_t for some l >= 0 (K nonempty). Returns None if no
    such separator exists. X ends up on the negative side.
    """
    xs = extreme_points(xs)
    if not xs:
        return None
    d = len(xs[0])
    nt = len(halfspaces)
    # variables: w (d, free), b (free), l (nt, >= 0)
    nv = d + 1 + nt
    cons = []
    for x in xs:
        row = list(x) + [Fraction(-1)] + [Fraction(0)] * nt
        cons.append((row, "<=", Fraction(-1)))
    for k in range(d):
        row = [Fraction(0)] * nv
        row[k] = Fraction(1)
        for t, (a, _) in enumerate(halfspaces):
            row[d + 1 + t] = -a[k]
        cons.append((row, "==", Fraction(0)))
    row = [Fraction(0)] * d + [Fraction(1)] + [-c for _, c in halfspaces]
    cons.append((row, "<=", Fraction(-1)))
    sol = lp.feasible(cons, nv, free=range(d + 1))
    if sol is None:
        return None
    w, b = sol[:d], sol[d]
    if not any(w):
        return None
    # midway between X's top value and b + 1
    top = max(dot(w, x) for x in xs)
    normal, offset = _normalize(tuple(w), (top + b + 1) / 2)
    return Separator(normal, offset)
