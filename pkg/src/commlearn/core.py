"""Shared vocabulary: domain points, examples, samples, hypotheses and losses.

All numeric quantities are exact (``fractions.Fraction`` or ``int``). Hypotheses
are plain parameter records; the code that interprets a record is looked up by
its ``class_id`` in a small evaluator registry, so records stay serializable.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Any, Union


class Label(IntEnum):
    POS = 1
    NEG = -1

    def flipped(self) -> Label:
        return Label.NEG if self is Label.POS else Label.POS


def as_label(value: int) -> Label:
    try:
        return Label(int(value))
    except ValueError:
        raise ValueError(f"label must be +1 or -1, got {value!r}") from None


# ---------------------------------------------------------------------------
# domain points


@dataclass(frozen=True, slots=True)
class PlanarPoint:
    """A point of Q^d, d in {2, 3}."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coords = tuple(to_fraction(c) for c in self.coords)
        if len(coords) not in (2, 3):
            raise ValueError(f"planar points have dimension 2 or 3, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __lt__(self, other: PlanarPoint) -> bool:
        return self.coords < other.coords


@dataclass(frozen=True, slots=True)
class Natural:
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"natural must be a nonnegative int, got {self.n!r}")

    def __lt__(self, other: Natural) -> bool:
        return self.n < other.n


@dataclass(frozen=True, slots=True)
class GridPoint:
    """A point (m, n) of {(m, n) : 1 <= m <= n}."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.n:
            raise ValueError(f"grid point needs 1 <= m <= n, got ({self.m}, {self.n})")

    def __lt__(self, other: GridPoint) -> bool:
        return (self.m, self.n) < (other.m, other.n)


@dataclass(frozen=True, slots=True)
class Index:
    """An element of [n] = {0, ..., n-1}; the bound is owned by the class."""

    i: int

    def __post_init__(self) -> None:
        if not isinstance(self.i, int) or self.i < 0:
            raise ValueError(f"index must be a nonnegative int, got {self.i!r}")

    def __lt__(self, other: Index) -> bool:
        return self.i < other.i


DomainPoint = Union[PlanarPoint, Natural, GridPoint, Index]


def point(*coords: Any) -> PlanarPoint:
    return PlanarPoint(tuple(coords))


# ---------------------------------------------------------------------------
# examples and samples


@dataclass(frozen=True, slots=True)
class Example:
    point: DomainPoint
    label: Label

    def __post_init__(self) -> None:
        object.__setattr__(self, "label", as_label(self.label))

    def sort_key(self) -> tuple:
        return (type(self.point).__name__, _point_key(self.point), int(self.label))


def _point_key(x: DomainPoint) -> tuple:
    if isinstance(x, PlanarPoint):
        return x.coords
    if isinstance(x, Natural):
        return (x.n,)
    if isinstance(x, GridPoint):
        return (x.m, x.n)
    return (x.i,)


@dataclass(frozen=True)
class LabelledSample(Sequence):
    """An ordered sequence of examples; duplicates allowed."""

    examples: tuple[Example, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "examples", tuple(self.examples))

    def __hash__(self) -> int:
        # samples key several caches; hashing Fractions each time is costly
        try:
            return self._hash
        except AttributeError:
            object.__setattr__(self, "_hash", hash(self.examples))
            return self._hash

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[Example]:
        return iter(self.examples)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return LabelledSample(self.examples[i])
        return self.examples[i]

    def __add__(self, other: LabelledSample) -> LabelledSample:
        return concat(self, other)

    @property
    def points(self) -> list[DomainPoint]:
        return [z.point for z in self.examples]

    def positives(self) -> list[DomainPoint]:
        return [z.point for z in self.examples if z.label is Label.POS]

    def negatives(self) -> list[DomainPoint]:
        return [z.point for z in self.examples if z.label is Label.NEG]

    def distinct(self) -> LabelledSample:
        """First occurrence of every distinct example, in order."""
        return LabelledSample(tuple(dict.fromkeys(self.examples)))

    def is_subsample_of(self, other: LabelledSample) -> bool:
        # membership-based: multiplicities are ignored
        pool = set(other.examples)
        return all(z in pool for z in self.examples)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[DomainPoint, int]]) -> LabelledSample:
        return cls(tuple(Example(x, as_label(y)) for x, y in pairs))


def concat(sa: LabelledSample, sb: LabelledSample) -> LabelledSample:
    return LabelledSample(sa.examples + sb.examples)


def is_noisy(sample: LabelledSample) -> bool:
    """True iff some point occurs in the sample with both labels."""
    seen: dict[DomainPoint, Label] = {}
    for z in sample:
        prev = seen.setdefault(z.point, z.label)
        if prev is not z.label:
            return True
    return False


@dataclass(frozen=True)
class SampleDistribution:
    """Exact probability weights indexed by sample position."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        weights = tuple(Fraction(w) for w in self.weights)
        if any(w < 0 for w in weights):
            raise ValueError("distribution weights must be nonnegative")
        if weights and sum(weights) != 1:
            raise ValueError(f"distribution weights sum to {sum(weights)}, not 1")
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, n: int) -> SampleDistribution:
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def from_masses(cls, masses: Sequence[int | Fraction]) -> SampleDistribution:
        total = sum(Fraction(m) for m in masses)
        if total <= 0:
            raise ValueError("masses must have positive total")
        return cls(tuple(Fraction(m) / total for m in masses))

    @classmethod
    def point_mass(cls, n: int, i: int) -> SampleDistribution:
        return cls(tuple(Fraction(int(j == i)) for j in range(n)))


# ---------------------------------------------------------------------------
# hypotheses


@dataclass(frozen=True)
class Hypothesis:
    class_id: str
    params: tuple

    def __call__(self, x: DomainPoint) -> Label:
        return evaluate(self, x)


_EVALUATORS: dict[str, Callable[[tuple, DomainPoint], Label]] = {}


def register_evaluator(class_id: str):
    def deco(fn):
        _EVALUATORS[class_id] = fn
        return fn

    return deco


def evaluate(h: Hypothesis, x: DomainPoint) -> Label:
    try:
        fn = _EVALUATORS[h.class_id]
    except KeyError:
        raise ValueError(f"no evaluator registered for class {h.class_id!r}") from None
    return fn(h.params, x)


@register_evaluator("constant")
def _eval_constant(params: tuple, x: DomainPoint) -> Label:
    return as_label(params[0])


def constant(label: int) -> Hypothesis:
    return Hypothesis("constant", (int(as_label(label)),))


def mistakes(h: Hypothesis, sample: LabelledSample) -> list[bool]:
    return [evaluate(h, z.point) is not z.label for z in sample]


def empirical_loss(h: Hypothesis, sample: LabelledSample) -> Fraction:
    if len(sample) == 0:
        raise ValueError("undefined loss on empty sample")
    return Fraction(sum(mistakes(h, sample)), len(sample))


def weighted_loss(h: Hypothesis, sample: LabelledSample, p: SampleDistribution) -> Fraction:
    if len(p) != len(sample):
        raise ValueError(f"distribution has {len(p)} weights for a sample of size {len(sample)}")
    return sum((w for w, bad in zip(p.weights, mistakes(h, sample)) if bad), Fraction(0))


# ---------------------------------------------------------------------------
# JSON


def to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as an exact rational (floats are rejected)")


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def point_to_json(x: DomainPoint) -> dict:
    if isinstance(x, PlanarPoint):
        return {"type": "planar", "coords": [fraction_str(c) for c in x.coords]}
    if isinstance(x, Natural):
        return {"type": "natural", "n": x.n}
    if isinstance(x, GridPoint):
        return {"type": "grid", "m": x.m, "n": x.n}
    if isinstance(x, Index):
        return {"type": "index", "i": x.i}
    raise TypeError(f"not a domain point: {x!r}")


def point_from_json(obj: dict) -> DomainPoint:
    kind = obj["type"]
    if kind == "planar":
        return PlanarPoint(tuple(parse_fraction(c) for c in obj["coords"]))
    if kind == "natural":
        return Natural(obj["n"])
    if kind == "grid":
        return GridPoint(obj["m"], obj["n"])
    if kind == "index":
        return Index(obj["i"])
    raise ValueError(f"unknown point type {kind!r}")


def example_to_json(z: Example) -> dict:
    return {"point": point_to_json(z.point), "label": int(z.label)}


def example_from_json(obj: dict) -> Example:
    return Example(point_from_json(obj["point"]), as_label(obj["label"]))


def sample_to_json(sample: LabelledSample) -> list:
    return [example_to_json(z) for z in sample]


def sample_from_json(items: list) -> LabelledSample:
    return LabelledSample(tuple(example_from_json(o) for o in items))


def _param_to_json(value: Any) -> Any:
    if isinstance(value, Hypothesis):
        return hypothesis_to_json(value)
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, (PlanarPoint, Natural, GridPoint, Index)):
        return point_to_json(value)
    if isinstance(value, (tuple, list, frozenset)):
        items = sorted(value) if isinstance(value, frozenset) else value
        return [_param_to_json(v) for v in items]
    if isinstance(value, (int, str)) or value is None:
        return value
    raise TypeError(f"cannot serialize hypothesis parameter {value!r}")


def _param_from_json(value: Any) -> Any:
    if isinstance(value, dict):
        if "class" in value:
            return hypothesis_from_json(value)
        return point_from_json(value)
    if isinstance(value, list):
        return tuple(_param_from_json(v) for v in value)
    if isinstance(value, str) and "/" in value:
        return parse_fraction(value)
    return value


def hypothesis_to_json(h: Hypothesis) -> dict:
    return {"class": h.class_id, "params": _param_to_json(h.params)}


def hypothesis_from_json(obj: dict) -> Hypothesis:
    from . import classes  # noqa: F401  (registers evaluators)

    params = _param_from_json(obj["params"])
    h = Hypothesis(obj["class"], params)
    return classes.normalize_hypothesis(h)


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, no whitespace variance."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
