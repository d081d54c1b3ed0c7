"""Concrete hypothesis classes.

Each class is described by a :class:`HypothesisClassDescriptor` bundling its
evaluator, a consistency oracle and an *effective table*: a finite list of
class members inducing every labeling the class can put on a sample's
distinct points. The table is what exact ERM and the oracle use.

Hypothesis records per class id:

``halfplane``      ``(normal, offset)``; +1 iff ``normal . x >= offset``
``threshold``      ``(t,)``; +1 iff ``x >= t``
``singleton``      ``(n,)``; +1 iff ``x == n``
``grid_singleton`` ``(a, b)``; +1 off column b and at (a, b), else -1
``half_bounded``   ``(n, positives)``; +1 exactly on the frozenset ``positives``
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import geometry
from .core import (
    DomainPoint,
    Example,
    GridPoint,
    Hypothesis,
    Index,
    Label,
    LabelledSample,
    Natural,
    PlanarPoint,
    SampleDistribution,
    constant,
    is_noisy,
    register_evaluator,
)
from .lp import dot


class Unbounded:
    """Marker for an infinite VC or coVC dimension."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Unbounded"

    def __reduce__(self):
        return (Unbounded, ())


UNBOUNDED = Unbounded()


class RealizableSampleError(ValueError):
    pass


@dataclass(frozen=True)
class NonRealizableWitness:
    subsample: LabelledSample

    def __len__(self) -> int:
        return len(self.subsample)


# ---------------------------------------------------------------------------
# effective tables


@dataclass
class EffectiveTable:
    """Rows of ``labels`` are the distinct labelings of ``points`` by the class.

    ``make(k)`` builds an exact class member realizing row ``k``.
    """

    points: list
    labels: np.ndarray
    make: Callable[[int], Hypothesis]
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return self.labels.shape[0]

    def hypothesis(self, k: int) -> Hypothesis:
        if k not in self._cache:
            self._cache[k] = self.make(k)
        return self._cache[k]

    def hypotheses(self) -> list[Hypothesis]:
        return [self.hypothesis(k) for k in range(len(self))]

    def columns(self, sample: LabelledSample) -> np.ndarray:
        where = {x: j for j, x in enumerate(self.points)}
        return np.array([where[z.point] for z in sample], dtype=np.intp)

    def mistake_matrix(self, sample: LabelledSample) -> np.ndarray:
        """Boolean (rows x |sample|) matrix of errors."""
        if len(sample) == 0:
            return np.zeros((len(self), 0), dtype=bool)
        y = np.array([int(z.label) for z in sample], dtype=np.int8)
        return self.labels[:, self.columns(sample)] != y

    def mistake_counts(self, sample: LabelledSample) -> np.ndarray:
        return self.mistake_matrix(sample).sum(axis=1)

    def weighted_losses(self, sample: LabelledSample, p: SampleDistribution) -> list[Fraction]:
        """Exact weighted loss of every row."""
        den = math.lcm(*(w.denominator for w in p.weights)) if len(p) else 1
        ints = [int(w * den) for w in p.weights]
        big = max(ints, default=0) * max(len(ints), 1) >= 2**62
        wvec = np.array(ints, dtype=object if big else np.int64)
        totals = self.mistake_matrix(sample).astype(wvec.dtype) @ wvec
        return [Fraction(int(t), den) for t in totals]


def _unique_rows(rows: np.ndarray, recipes: list) -> tuple[np.ndarray, list]:
    if rows.shape[0] == 0:
        return rows, []
    if rows.shape[1] and np.all(np.abs(rows) == 1):
        # +-1 rows packed to bits sort in the same order and far faster
        bits = np.ascontiguousarray(np.packbits(rows > 0, axis=1))
        keys = bits.view(np.dtype((np.void, bits.shape[1]))).ravel()
        _, idx = np.unique(keys, return_index=True)
        return rows[idx], [recipes[i] for i in idx]
    uniq, idx = np.unique(rows, axis=0, return_index=True)
    return uniq, [recipes[i] for i in idx]


# ---------------------------------------------------------------------------
# half-planes


def _coords(x: DomainPoint, d: int) -> tuple[Fraction, ...]:
    if not isinstance(x, PlanarPoint) or x.dim != d:
        raise ValueError(f"half-spaces in R^{d} need {d}-dimensional planar points, got {x!r}")
    return x.coords


@register_evaluator("halfplane")
def _eval_halfplane(params: tuple, x: DomainPoint) -> Label:
    normal, offset = params
    return Label.POS if dot(normal, _coords(x, len(normal))) >= offset else Label.NEG


def halfplane(normal: Sequence, offset) -> Hypothesis:
    normal = tuple(Fraction(c) for c in normal)
    if not any(normal):
        raise ValueError("half-plane normal must be nonzero")
    lead = next(abs(c) for c in normal if c)
    return Hypothesis("halfplane", (tuple(c / lead for c in normal), Fraction(offset) / lead))


def _halfplane_constant(label: int, coords: Sequence[tuple[Fraction, ...]], d: int) -> Hypothesis:
    e1 = tuple(Fraction(int(k == 0)) for k in range(d))
    if not coords:
        return halfplane(e1, -1 if label > 0 else 1)
    xs = [c[0] for c in coords]
    return halfplane(e1, min(xs) - 1 if label > 0 else max(xs) + 1)


def _integer_matrix(coords: Sequence[tuple[Fraction, ...]]) -> np.ndarray:
    den = math.lcm(*(c.denominator for p in coords for c in p)) if coords else 1
    ints = [[int(c * den) for c in p] for p in coords]
    bound = max((abs(v) for row in ints for v in row), default=0)
    dtype = np.int64 if bound < 2**29 else object
    return np.array(ints, dtype=dtype).reshape(len(coords), -1)


def _sign(a: np.ndarray) -> np.ndarray:
    return np.sign(a).astype(np.int8) if a.dtype != object else np.array(
        [(v > 0) - (v < 0) for v in a.ravel()], dtype=np.int8
    ).reshape(a.shape)


def _rows_2d(P: np.ndarray) -> tuple[np.ndarray, list]:
    """All dichotomies of distinct planar points ``P`` (integer array) by half-planes.

    Recipes: ("const", label), ("pair", i, j, o, a, b) meaning the oriented line
    through P_i, P_j with P_i labelled a and P_j labelled b, or
    ("line", i, j, o, first, cut) for lines carrying more than two points.
    """
    n = P.shape[0]
    blocks = [np.ones((1, n), dtype=np.int8), -np.ones((1, n), dtype=np.int8)]
    recipes: list = [("const", 1), ("const", -1)]
    combos = ((1, 1), (1, -1), (-1, 1), (-1, -1))
    for i in range(n - 1):
        D = P - P[i]
        rest = D[i + 1 :]
        # cross(D_j, D_k) for j > i, all k
        F = np.outer(rest[:, 0], D[:, 1]) - np.outer(rest[:, 1], D[:, 0])
        S = _sign(F)
        online = (S == 0).sum(axis=1)
        generic = np.nonzero(online == 2)[0]
        if generic.size:
            base = S[generic]
            js = generic + i + 1
            for o in (1, -1):
                for a, b in combos:
                    block = (o * base).astype(np.int8)
                    block[:, i] = a
                    block[np.arange(len(js)), js] = b
                    blocks.append(block)
                    recipes.extend(("pair", i, int(j), o, a, b) for j in js)
        for r in np.nonzero(online > 2)[0]:
            j = int(r) + i + 1
            on = S[r] == 0
            u = D[j]
            t = D[:, 0] * u[0] + D[:, 1] * u[1]
            tv = sorted(set(t[on].tolist()))
            for o in (1, -1):
                for cut in range(len(tv) + 1):
                    for first in (1, -1):
                        row = (o * S[r]).astype(np.int8)
                        below = np.array([v < tv[cut] if cut < len(tv) else True for v in t[on]])
                        row[on] = np.where(below, first, -first)
                        blocks.append(row[None, :])
                        recipes.append(("line", i, j, o, first, cut))
    return _unique_rows(np.concatenate(blocks), recipes)


def _perturbed_halfplane(coords, recipe) -> Hypothesis:
    """Exact half-plane for a ``pair``/``line`` recipe of :func:`_rows_2d`."""
    _, i, j, o, x1, x2 = recipe
    p, q = coords[i], coords[j]
    u = (q[0] - p[0], q[1] - p[1])
    nrm = (-o * u[1], o * u[0])

    def f(x):
        return nrm[0] * (x[0] - p[0]) + nrm[1] * (x[1] - p[1])

    def t(x):
        return u[0] * (x[0] - p[0]) + u[1] * (x[1] - p[1])

    if recipe[0] == "pair":
        first, length = x1, t(q)
        tau = length / 2 if x1 != x2 else length + 1
    else:
        first, cut = x1, x2
        tv = sorted({t(x) for x in coords if f(x) == 0})
        if cut == 0:
            tau = tv[0] - 1
        elif cut == len(tv):
            tau = tv[-1] + 1
        else:
            tau = (tv[cut - 1] + tv[cut]) / 2
    off = [abs(f(x)) for x in coords if f(x) != 0]
    spread = max(abs(t(x) - tau) for x in coords)
    delta = min(off) / (2 * (spread + 1)) if off else Fraction(1)
    normal = (nrm[0] - first * delta * u[0], nrm[1] - first * delta * u[1])
    offset = dot(nrm, p) - first * delta * dot(u, p) - first * delta * tau
    return halfplane(normal, offset)


def _halfplane_labelings(coords: list[tuple[Fraction, ...]], d: int) -> tuple[np.ndarray, list]:
    if d == 2:
        return _rows_2d(_integer_matrix(coords))
    return _rows_3d(coords)


def _rows_3d(coords: list[tuple[Fraction, ...]]) -> tuple[np.ndarray, list]:
    """Dichotomies of distinct points in R^3: planes through affinely
    independent triples, with coplanar points split by planar dichotomies."""
    n = len(coords)
    seen: set[tuple[int, ...]] = {tuple([1] * n), tuple([-1] * n)}
    spanning = False
    for i, j, k in itertools.combinations(range(n), 3):
        a, b, c = coords[i], coords[j], coords[k]
        u = tuple(y - x for x, y in zip(a, b))
        v = tuple(y - x for x, y in zip(a, c))
        nrm = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if not any(nrm):
            continue
        spanning = True
        vals = [dot(nrm, tuple(y - x for x, y in zip(a, p))) for p in coords]
        on = [m for m in range(n) if vals[m] == 0]
        drop = next(m for m in range(3) if nrm[m] != 0)
        flat = [tuple(coords[m][e] for e in range(3) if e != drop) for m in on]
        sub_rows, _ = _rows_2d(_integer_matrix(flat))
        for o in (1, -1):
            base = [o * ((v > 0) - (v < 0)) for v in vals]
            for row in sub_rows:
                lab = list(base)
                for m, y in zip(on, row):
                    lab[m] = int(y)
                seen.add(tuple(lab))
    if not spanning and n:
        # collinear: any injective coordinate projection to the plane preserves dichotomies
        direction = next((tuple(y - x for x, y in zip(coords[0], p)) for p in coords if p != coords[0]), (1, 0, 0))
        keep = next(m for m in range(3) if direction[m] != 0)
        other = (keep + 1) % 3
        flat = [(p[keep], p[other]) for p in coords]
        sub_rows, _ = _rows_2d(_integer_matrix(flat))
        seen.update(tuple(int(y) for y in row) for row in sub_rows)
    rows = np.array(sorted(seen), dtype=np.int8).reshape(len(seen), n)
    return rows, [("lp",)] * len(rows)


def _halfplane_find_consistent(d: int):
    def find(sample: LabelledSample) -> Hypothesis | None:
        for z in sample:
            _coords(z.point, d)
        if is_noisy(sample):
            return None
        pos = [p.coords for p in sample.positives()]
        neg = [p.coords for p in sample.negatives()]
        if not pos or not neg:
            return _halfplane_constant(1 if pos else -1, pos or neg, d)
        result = geometry.hulls_intersect(neg, pos)
        if isinstance(result, geometry.Intersecting):
            return None
        sep = result.separator
        return halfplane(sep.normal, sep.offset)

    # boosting asks about the same local sample every round
    return lru_cache(maxsize=4096)(find)


def _halfplane_table(d: int):
    find = _halfplane_find_consistent(d)

    def table(sample: LabelledSample) -> EffectiveTable:
        points = list(dict.fromkeys(sample.points))
        coords = [_coords(x, d) for x in points]
        if not points:
            rows = np.zeros((2, 0), dtype=np.int8)
            return EffectiveTable([], rows, lambda k: _halfplane_constant(1 - 2 * k, [], d))
        rows, recipes = _halfplane_labelings(coords, d)

        def make(k: int) -> Hypothesis:
            recipe = recipes[k]
            if recipe[0] == "const":
                h = _halfplane_constant(recipe[1], coords, d)
            elif recipe[0] == "lp":
                h = find(LabelledSample(tuple(Example(x, Label(int(y))) for x, y in zip(points, rows[k]))))
            else:
                h = _perturbed_halfplane(coords, recipe)
            assert h is not None and all(
                int(_eval_halfplane(h.params, x)) == int(y) for x, y in zip(points, rows[k])
            ), f"effective half-plane for row {k} is inconsistent"
            return h

        return EffectiveTable(points, rows, make)

    return table


def _halfplane_compress(d: int):
    def compress(sample: LabelledSample) -> LabelledSample:
        keep = set(geometry.extreme_points([p.coords for p in sample.positives()]))
        keep_neg = set(geometry.extreme_points([p.coords for p in sample.negatives()]))
        out = []
        for z in sample.distinct():
            pool = keep if z.label is Label.POS else keep_neg
            if z.point.coords in pool:
                out.append(z)
                pool.discard(z.point.coords)
        return LabelledSample(tuple(out))

    return compress


def _halfplane_witness_candidates(sample: LabelledSample) -> LabelledSample:
    """A small non-realizable subsample found geometrically."""
    first: dict = {}
    for z in sample:
        prev = first.setdefault(z.point, z)
        if prev.label is not z.label:
            return LabelledSample((prev, z))
    pos = [p.coords for p in sample.positives()]
    neg = [p.coords for p in sample.negatives()]
    result = geometry.hulls_intersect(pos, neg)
    assert isinstance(result, geometry.Intersecting)
    w = result.witness
    want = {(c, Label.POS) for c in w.positive_support} | {(c, Label.NEG) for c in w.negative_support}
    out = []
    for z in sample.distinct():
        key = (z.point.coords, z.label)
        if key in want:
            out.append(z)
            want.discard(key)
    return LabelledSample(tuple(out))


# ---------------------------------------------------------------------------
# thresholds and singletons over the naturals


def _natural(x: DomainPoint) -> int:
    if not isinstance(x, Natural):
        raise ValueError(f"expected a natural-number point, got {x!r}")
    return x.n


@register_evaluator("threshold")
def _eval_threshold(params: tuple, x: DomainPoint) -> Label:
    return Label.POS if _natural(x) >= params[0] else Label.NEG


def threshold(t) -> Hypothesis:
    return Hypothesis("threshold", (Fraction(t),))


def _threshold_find(sample: LabelledSample) -> Hypothesis | None:
    pos = [_natural(x) for x in sample.positives()]
    neg = [_natural(x) for x in sample.negatives()]
    if pos and neg:
        if max(neg) >= min(pos):
            return None
        return threshold(Fraction(max(neg) + min(pos), 2))
    if neg:
        return threshold(max(neg) + 1)
    if pos:
        return threshold(min(pos))
    return threshold(0)


def _threshold_table(sample: LabelledSample) -> EffectiveTable:
    points = sorted(dict.fromkeys(sample.points), key=_natural)
    values = [_natural(x) for x in points]
    cuts = values + [values[-1] + 1 if values else 0]
    rows = np.array([[1 if v >= t else -1 for v in values] for t in cuts], dtype=np.int8).reshape(len(cuts), len(values))
    return EffectiveTable(points, rows, lambda k: threshold(cuts[k]))


def _threshold_compress(sample: LabelledSample) -> LabelledSample:
    pos = [z for z in sample if z.label is Label.POS]
    neg = [z for z in sample if z.label is Label.NEG]
    out = []
    if neg:
        out.append(max(neg, key=lambda z: _natural(z.point)))
    if pos:
        out.append(min(pos, key=lambda z: _natural(z.point)))
    return LabelledSample(tuple(out))


@register_evaluator("singleton")
def _eval_singleton(params: tuple, x: DomainPoint) -> Label:
    return Label.POS if _natural(x) == params[0] else Label.NEG


def singleton(n: int) -> Hypothesis:
    return Hypothesis("singleton", (int(n),))


def _fresh_natural(values) -> int:
    taken = set(values)
    return next(v for v in itertools.count() if v not in taken)


def _singleton_find(sample: LabelledSample) -> Hypothesis | None:
    if is_noisy(sample):
        return None
    pos = {_natural(x) for x in sample.positives()}
    if len(pos) > 1:
        return None
    if pos:
        return singleton(pos.pop())
    return singleton(_fresh_natural(_natural(x) for x in sample.points))


def _singleton_table(sample: LabelledSample) -> EffectiveTable:
    points = sorted(dict.fromkeys(sample.points), key=_natural)
    values = [_natural(x) for x in points]
    centers = values + [_fresh_natural(values)]
    rows = np.array([[1 if v == c else -1 for v in values] for c in centers], dtype=np.int8).reshape(
        len(centers), len(values)
    )
    return EffectiveTable(points, rows, lambda k: singleton(centers[k]))


# ---------------------------------------------------------------------------
# singletons copied along columns of the grid {(m, n) : 1 <= m <= n}


def _grid(x: DomainPoint) -> GridPoint:
    if not isinstance(x, GridPoint):
        raise ValueError(f"expected a grid point, got {x!r}")
    return x


@register_evaluator("grid_singleton")
def _eval_grid(params: tuple, x: DomainPoint) -> Label:
    a, b = params
    g = _grid(x)
    if g.n != b or g.m == a:
        return Label.POS
    return Label.NEG


def grid_singleton(a: int, b: int) -> Hypothesis:
    if not 1 <= a <= b:
        raise ValueError(f"h_(a,b) needs 1 <= a <= b, got ({a}, {b})")
    return Hypothesis("grid_singleton", (int(a), int(b)))


def _free_row(column: int, taken) -> int | None:
    taken = set(taken)
    return next((a for a in range(1, column + 1) if a not in taken), None)


def _grid_find(sample: LabelledSample) -> Hypothesis | None:
    if is_noisy(sample):
        return None
    neg = [_grid(x) for x in sample.negatives()]
    pos = [_grid(x) for x in sample.positives()]
    columns = {g.n for g in neg}
    if len(columns) > 1:
        return None
    if not columns:
        b = max((g.n for g in pos), default=0) + 1
        return grid_singleton(1, b)
    b = columns.pop()
    hits = {g.m for g in pos if g.n == b}
    if len(hits) > 1:
        return None
    if hits:
        return grid_singleton(hits.pop(), b)
    a = _free_row(b, (g.m for g in neg))
    return None if a is None else grid_singleton(a, b)


def _grid_table(sample: LabelledSample) -> EffectiveTable:
    points = sorted(dict.fromkeys(_grid(x) for x in sample.points))
    params = []
    for b in sorted({g.n for g in points}):
        rows_here = sorted({g.m for g in points if g.n == b})
        params.extend((a, b) for a in rows_here)
        free = _free_row(b, rows_here)
        if free is not None:
            params.append((free, b))
    params.append((1, max((g.n for g in points), default=0) + 1))
    rows = np.array(
        [[int(_eval_grid(ab, g)) for g in points] for ab in params], dtype=np.int8
    ).reshape(len(params), len(points))
    rows, params = _unique_rows(rows, params)
    return EffectiveTable(points, rows, lambda k: grid_singleton(*params[k]))


# ---------------------------------------------------------------------------
# functions on [n] that vanish (are -1) on the upper half


def _index(x: DomainPoint, n: int) -> int:
    if not isinstance(x, Index) or x.i >= n:
        raise ValueError(f"expected an index in [0, {n}), got {x!r}")
    return x.i


@register_evaluator("half_bounded")
def _eval_half_bounded(params: tuple, x: DomainPoint) -> Label:
    n, positives = params
    return Label.POS if _index(x, n) in positives else Label.NEG


def half_bounded_hypothesis(n: int, positives) -> Hypothesis:
    positives = frozenset(int(i) for i in positives)
    if any(not 0 <= i < n // 2 for i in positives):
        raise ValueError("half-bounded hypotheses are -1 on the upper half")
    return Hypothesis("half_bounded", (int(n), positives))


def _half_bounded_find(n: int):
    def find(sample: LabelledSample) -> Hypothesis | None:
        for x in sample.points:
            _index(x, n)
        if is_noisy(sample):
            return None
        pos = {x.i for x in sample.positives()}
        if any(i >= n // 2 for i in pos):
            return None
        return half_bounded_hypothesis(n, pos)

    return find


def _half_bounded_table(n: int, limit: int = 16):
    def table(sample: LabelledSample) -> EffectiveTable:
        points = sorted(dict.fromkeys(sample.points), key=lambda x: _index(x, n))
        free = [j for j, x in enumerate(points) if x.i < n // 2]
        if len(free) > limit:
            raise ValueError(f"half-bounded table is exponential; {len(free)} free points exceeds {limit}")
        subsets = [c for r in range(len(free) + 1) for c in itertools.combinations(free, r)]
        rows = -np.ones((len(subsets), len(points)), dtype=np.int8)
        for k, c in enumerate(subsets):
            rows[k, list(c)] = 1
        return EffectiveTable(
            points, rows, lambda k: half_bounded_hypothesis(n, (points[j].i for j in subsets[k]))
        )

    return table


# ---------------------------------------------------------------------------
# descriptors


def _distinct(sample: LabelledSample) -> LabelledSample:
    return sample.distinct()


@dataclass(frozen=True)
class HypothesisClassDescriptor:
    name: str
    vc_dim: int | Unbounded
    covc_dim: int | Unbounded
    evaluate: Callable[[Hypothesis, DomainPoint], Label]
    find_consistent: Callable[[LabelledSample], Hypothesis | None] = field(repr=False)
    effective_table: Callable[[LabelledSample], EffectiveTable] = field(repr=False)
    compress: Callable[[LabelledSample], LabelledSample] = field(default=_distinct, repr=False)
    witness_candidates: Callable[[LabelledSample], LabelledSample] = field(default=_distinct, repr=False)
    hypothesis_ids: tuple[str, ...] = ()

    def enumerate_effective(self, sample: LabelledSample) -> list[Hypothesis]:
        return self.effective_table(sample).hypotheses()

    def is_realizable(self, sample: LabelledSample) -> bool:
        return self.find_consistent(sample) is not None

    def contains(self, h: Hypothesis) -> bool:
        return h.class_id in self.hypothesis_ids

    def compression(self, sample: LabelledSample) -> LabelledSample:
        """Subsample S'' of S such that every member consistent with S'' is
        consistent with S (vacuously so when S'' is non-realizable)."""
        if not self.is_realizable(sample):
            return non_realizable_witness(self, sample).subsample
        return self.compress(sample)


def _evaluator(fn):
    def evaluate(h: Hypothesis, x: DomainPoint) -> Label:
        return fn(h.params, x)

    return evaluate


def halfplanes(d: int = 2) -> HypothesisClassDescriptor:
    if d not in (2, 3):
        raise ValueError(f"half-spaces are supported in dimension 2 or 3, not {d}")
    return _halfplanes(d)


@lru_cache(maxsize=None)
def _halfplanes(d: int) -> HypothesisClassDescriptor:
    return HypothesisClassDescriptor(
        name=f"halfplanes{d}",
        vc_dim=d + 1,
        covc_dim=2 * d + 2,
        evaluate=_evaluator(_eval_halfplane),
        find_consistent=_halfplane_find_consistent(d),
        effective_table=_halfplane_table(d),
        compress=_halfplane_compress(d),
        witness_candidates=_halfplane_witness_candidates,
        hypothesis_ids=("halfplane",),
    )


@lru_cache(maxsize=None)
def thresholds() -> HypothesisClassDescriptor:
    return HypothesisClassDescriptor(
        name="thresholds",
        vc_dim=1,
        covc_dim=2,
        evaluate=_evaluator(_eval_threshold),
        find_consistent=_threshold_find,
        effective_table=_threshold_table,
        compress=_threshold_compress,
        hypothesis_ids=("threshold",),
    )


@lru_cache(maxsize=None)
def singletons() -> HypothesisClassDescriptor:
    return HypothesisClassDescriptor(
        name="singletons",
        vc_dim=1,
        covc_dim=UNBOUNDED,
        evaluate=_evaluator(_eval_singleton),
        find_consistent=_singleton_find,
        effective_table=_singleton_table,
        hypothesis_ids=("singleton",),
    )


@lru_cache(maxsize=None)
def grid_singletons() -> HypothesisClassDescriptor:
    return HypothesisClassDescriptor(
        name="grid_singletons",
        vc_dim=1,
        covc_dim=UNBOUNDED,
        evaluate=_evaluator(_eval_grid),
        find_consistent=_grid_find,
        effective_table=_grid_table,
        hypothesis_ids=("grid_singleton",),
    )


def half_bounded(n: int) -> HypothesisClassDescriptor:
    if n < 2 or n % 2:
        raise ValueError(f"half_bounded needs an even n >= 2, got {n}")
    return _half_bounded(n)


@lru_cache(maxsize=None)
def _half_bounded(n: int) -> HypothesisClassDescriptor:
    # A sample (i,+1), (i,-1) with i in the free half is non-realizable and
    # every proper subsample is realizable, so the coVC dimension is 2.
    return HypothesisClassDescriptor(
        name=f"half_bounded:{n}",
        vc_dim=n // 2,
        covc_dim=2,
        evaluate=_evaluator(_eval_half_bounded),
        find_consistent=_half_bounded_find(n),
        effective_table=_half_bounded_table(n),
        hypothesis_ids=("half_bounded",),
    )


def get_class(name: str) -> HypothesisClassDescriptor:
    """Look up a class by its registry name."""
    if name.startswith("half_bounded:"):
        return half_bounded(int(name.split(":", 1)[1]))
    table = {
        "halfplanes2": lambda: halfplanes(2),
        "halfplanes3": lambda: halfplanes(3),
        "thresholds": thresholds,
        "singletons": singletons,
        "grid_singletons": grid_singletons,
    }
    try:
        return table[name]()
    except KeyError:
        raise ValueError(f"unknown hypothesis class {name!r}") from None


CLASS_NAMES = ("halfplanes2", "halfplanes3", "thresholds", "singletons", "grid_singletons", "half_bounded:n")


def normalize_hypothesis(h: Hypothesis) -> Hypothesis:
    """Restore canonical parameter types after a JSON round trip."""
    if h.class_id == "halfplane":
        normal, offset = h.params
        return Hypothesis("halfplane", (tuple(Fraction(c) for c in normal), Fraction(offset)))
    if h.class_id == "threshold":
        return threshold(h.params[0])
    if h.class_id == "half_bounded":
        return half_bounded_hypothesis(h.params[0], h.params[1])
    if h.class_id == "majority":
        return Hypothesis("majority", tuple(h.params))
    return h


# ---------------------------------------------------------------------------
# witnesses


def non_realizable_witness(cls: HypothesisClassDescriptor, sample: LabelledSample) -> NonRealizableWitness:
    """Smallest non-realizable subsample (increasing size, then position order)
    among a candidate pool; for half-planes the pool is a Caratheodory witness."""
    if cls.is_realizable(sample):
        raise RealizableSampleError("witness requested for realizable sample")
    pool = tuple(cls.witness_candidates(sample))
    for size in range(1, len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            sub = LabelledSample(combo)
            if not cls.is_realizable(sub):
                return NonRealizableWitness(sub)
    raise AssertionError("unreachable: the full pool is non-realizable")


def is_consistent(h: Hypothesis, sample: LabelledSample) -> bool:
    from .core import evaluate

    return all(evaluate(h, z.point) is z.label for z in sample)


__all__ = [
    "UNBOUNDED",
    "EffectiveTable",
    "HypothesisClassDescriptor",
    "NonRealizableWitness",
    "RealizableSampleError",
    "Unbounded",
    "constant",
    "get_class",
    "grid_singleton",
    "grid_singletons",
    "half_bounded",
    "half_bounded_hypothesis",
    "halfplane",
    "halfplanes",
    "is_consistent",
    "non_realizable_witness",
    "normalize_hypothesis",
    "singleton",
    "singletons",
    "threshold",
    "thresholds",
]
