"""Multiplicative weights with the halving update, majority votes, margins.

Weights are always powers of two, so a state stores for each example the
number of times it has been halved. ``2**-c`` is exact, never needs a gcd
pass, and the distribution is a ratio of integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    DomainPoint,
    Hypothesis,
    Label,
    LabelledSample,
    Natural,
    SampleDistribution,
    evaluate,
    register_evaluator,
)


@dataclass(frozen=True)
class BoostState:
    sample: LabelledSample
    halvings: tuple[int, ...] = None
    round: int = 0
    history: tuple[Hypothesis, ...] = ()

    def __post_init__(self) -> None:
        if self.halvings is None:
            object.__setattr__(self, "halvings", (0,) * len(self.sample))
        if len(self.halvings) != len(self.sample):
            raise ValueError("one halving count per example")

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, 2**c) for c in self.halvings)

    @property
    def potential(self) -> Fraction:
        return sum(self.weights, Fraction(0))


def fresh_state(sample: LabelledSample) -> BoostState:
    return BoostState(sample)


def current_distribution(st: BoostState) -> SampleDistribution:
    if len(st.sample) == 0:
        raise ValueError("distribution over an empty sample")
    top = max(st.halvings)
    masses = [2 ** (top - c) for c in st.halvings]
    total = sum(masses)
    return SampleDistribution(tuple(Fraction(m, total) for m in masses))


def boost_step(st: BoostState, h: Hypothesis) -> BoostState:
    """Halve the weight of every example ``h`` labels correctly."""
    halvings = tuple(
        c + (evaluate(h, z.point) is z.label) for c, z in zip(st.halvings, st.sample)
    )
    return BoostState(st.sample, halvings, st.round + 1, st.history + (h,))


def boost_mask(st: BoostState, correct, h: Hypothesis | None = None) -> BoostState:
    """Halve exactly where ``correct`` is true (for updates not phrased as a
    hypothesis, e.g. strict separation)."""
    correct = list(correct)
    if len(correct) != len(st.sample):
        raise ValueError("one flag per example")
    halvings = tuple(c + bool(f) for c, f in zip(st.halvings, correct))
    history = st.history + ((h,) if h is not None else ())
    return BoostState(st.sample, halvings, st.round + 1, history)


# ---------------------------------------------------------------------------
# majority vote


@register_evaluator("majority")
def _eval_majority(params: tuple, x: DomainPoint) -> Label:
    total = sum(int(evaluate(h, x)) for h in params)
    return Label.POS if total >= 0 else Label.NEG


def majority_vote(hs) -> Hypothesis:
    """Pointwise majority; a tied vote is +1. A unanimous vote is returned as
    its single hypothesis."""
    hs = tuple(hs)
    if not hs:
        raise ValueError("majority of no hypotheses")
    if len(set(hs)) == 1:
        return hs[0]
    return Hypothesis("majority", hs)


# ---------------------------------------------------------------------------
# margins


@dataclass(frozen=True)
class MarginReport:
    err_fraction: tuple[Fraction, ...]
    rounds: int = field(default=0)

    def worst(self) -> Fraction:
        return max(self.err_fraction, default=Fraction(0))


def margin_report(st: BoostState) -> MarginReport:
    if st.round < 1:
        raise ValueError("margin report needs at least one round")
    # every correct answer halves once, so errors = rounds - halvings
    return MarginReport(tuple(Fraction(st.round - c, st.round) for c in st.halvings), st.round)


# ---------------------------------------------------------------------------
# round counts


def ceil_log2_multiple(a: Fraction, n: int) -> int:
    """Smallest integer T >= 0 with T >= a * log2(n), computed exactly."""
    a = Fraction(a)
    if n < 1:
        raise ValueError("log of a nonpositive size")
    if n == 1 or a <= 0:
        return 0
    # 2**T >= n**a  <=>  2**(T*q) >= n**p
    p, q = a.numerator, a.denominator
    target = n**p
    t = max(0, math.floor(a * math.log2(n)) - 1)
    while 2 ** (t * q) < target:
        t += 1
    return t


def supermajority_rounds(k: int, n: int) -> int:
    return ceil_log2_multiple(Fraction(2 * k), n)


def adaboost_rounds(eps: Fraction) -> int:
    """Rounds that push a vote of 1/4-weak hypotheses below error eps."""
    eps = Fraction(eps)
    return math.ceil(32 * math.log(1 / eps)) + 1


def potential_step_ok(before: BoostState, after: BoostState, k: int) -> bool:
    """Phi_{t+1} <= (Phi_t / 2)(1 + 1/(5k)), the per-round potential drop."""
    return after.potential <= before.potential / 2 * (1 + Fraction(1, 5 * k))


def potential_bound(n: int, rounds: int, k: int) -> Fraction:
    return n * (Fraction(1, 2) * (1 + Fraction(1, 5 * k))) ** rounds


# ---------------------------------------------------------------------------
# synthetic weak learners over Natural points 0..n-1


@register_evaluator("lookup")
def _eval_lookup(params: tuple, x: DomainPoint) -> Label:
    if not isinstance(x, Natural) or x.n >= len(params):
        raise ValueError(f"lookup hypothesis undefined at {x!r}")
    return Label(params[x.n])


def lookup_hypothesis(labels) -> Hypothesis:
    """A hypothesis given by its value table on Natural(0..n-1)."""
    return Hypothesis("lookup", tuple(int(Label(v)) for v in labels))


def adversarial_weak_hypothesis(st: BoostState, budget: Fraction) -> Hypothesis:
    """A lookup hypothesis erring on as many examples as possible, preferring
    the ones it has already beaten, with weighted error at most ``budget``.

    The sample must consist of the points Natural(0), ..., Natural(n-1) in order.
    """
    p = current_distribution(st).weights
    labels = [int(z.label) for z in st.sample]
    errors = [st.round - c for c in st.halvings]
    order = sorted(range(len(labels)), key=lambda i: (-errors[i], i))
    spent = Fraction(0)
    for i in order:
        if spent + p[i] <= budget:
            spent += p[i]
            labels[i] = -labels[i]
    return lookup_hypothesis(labels)
