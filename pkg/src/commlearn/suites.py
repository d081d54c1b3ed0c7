"""Lemma-verification suites shared by ``commlearn verify`` and the test suite.

Each suite returns a list of :class:`Check` records rather than raising,
so a report can show every failing case.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import boosting, instances, oracle
from .classes import get_class, grid_singletons, half_bounded, halfplanes, non_realizable_witness
from .core import Example, Index, Label, LabelledSample, Natural, point


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def supermajority(trials: int = 200, seed: int = 0, ks=range(2, 9), sizes=(16, 32, 64, 128, 256)) -> list[Check]:
    """Adversarial weak learners of weighted error at most 1/(5k); after
    ceil(2k log2 n) halving rounds no example may be misclassified in more
    than a 1/k share of them."""
    rng = random.Random(seed)
    checks = []
    ks, sizes = list(ks), list(sizes)
    violations = worst_seen = 0
    for t in range(trials):
        k, n = rng.choice(ks), rng.choice(sizes)
        labels = [rng.choice((1, -1)) for _ in range(n)]
        sample = LabelledSample.from_pairs((Natural(i), y) for i, y in enumerate(labels))
        st = boosting.fresh_state(sample)
        budget = Fraction(1, 5 * k)
        rounds = boosting.supermajority_rounds(k, n)
        for _ in range(rounds):
            h = boosting.adversarial_weak_hypothesis(st, budget)
            st = boosting.boost_step(st, h)
        worst = boosting.margin_report(st).worst()
        worst_seen = max(worst_seen, worst)
        if worst > Fraction(1, k):
            violations += 1
            checks.append(Check(f"trial {t} (k={k}, n={n})", False, f"worst err fraction {worst}"))
    checks.append(Check(f"supermajority over {trials} trials", violations == 0, f"{violations} violations"))
    return checks


def intersection_criteria(m_max: int = 4, r_max: int = 3, draws: int = 50, seed: int = 0) -> list[Check]:
    checks = []
    for m in range(1, m_max + 1):
        for r in range(1, r_max + 1):
            bad = []
            eps_seen = set()
            for s in range(draws):
                inst = instances.gen_imr(m, r, seed + s)
                eps_seen.add(inst.eps)
                if not instances.validate_imr(inst):
                    bad.append(s)
            detail = f"eps {min(eps_seen)}" + (f", failing draws {bad}" if bad else "")
            checks.append(Check(f"I_{{{m},{r}}} x{draws}", not bad, detail))
    return checks


def small_universe(m_max: int = 5, r_max: int = 4) -> list[Check]:
    checks = []
    for m in range(1, m_max + 1):
        for r in range(1, r_max + 1):
            size = len(instances.universe(m, r))
            checks.append(Check(f"|R_{{{m},{r}}}| = {m}^{r - 1}", size == m ** (r - 1), f"got {size}"))
    return checks


def covc_witness(k_max: int = 12, exhaustive_upto: int = 8, samples: int = 500, seed: int = 0) -> list[Check]:
    cls = grid_singletons()
    rng = random.Random(seed)
    checks = []
    for k in range(1, k_max + 1):
        S = instances.grid_hard_sample(k)
        ok = not cls.is_realizable(S)
        idx = range(k)
        if k <= exhaustive_upto:
            subsets = itertools.combinations(idx, k - 1)
        else:
            subsets = (sorted(rng.sample(idx, k - 1)) for _ in range(samples))
        sub_ok = all(cls.is_realizable(LabelledSample(tuple(S[i] for i in c))) for c in subsets)
        checks.append(Check(f"S_{k}", ok and sub_ok, f"non-realizable={ok}, (k-1)-subsamples realizable={sub_ok}"))
    for n in (2, 4, 8, 16):
        hb = half_bounded(n)
        upper = Example(Index(n - 1), Label.POS)
        lower = [Example(Index(i), Label.POS if i % 2 else Label.NEG) for i in range(n // 2)]
        S = LabelledSample(tuple(lower) + (upper,))
        w = non_realizable_witness(hb, S)
        checks.append(Check(f"half_bounded({n}) witness size", len(w.subsample) == 1, f"size {len(w.subsample)}"))
    return checks


def _bitstrings(n: int):
    return ["".join(bits) for bits in itertools.product("01", repeat=n)]


def _meet(x: str, y: str) -> bool:
    return any(a == b == "1" for a, b in zip(x, y))


def reductions(n_max: int = 5) -> list[Check]:
    """np/conp reductions against the oracle, over all bit-string pairs."""
    checks = []
    plane = halfplanes(2)
    triangle = [point(0, 0), point(1, 0), point(0, 1)]
    for n in range(1, n_max + 1):
        cases = [(half_bounded(2 * n), [Index(i) for i in range(n)])]
        if n <= 3:
            cases.append((plane, triangle[:n]))
        for cls, R in cases:
            bad = 0
            for x in _bitstrings(n):
                for y in _bitstrings(n):
                    sa, sb = instances.np_reduction(x, y, R)
                    if oracle.decide_realizable(cls, sa + sb).realizable == _meet(x, y):
                        bad += 1
            checks.append(Check(f"np_reduction n={n} on {cls.name}", bad == 0, f"{bad} mismatches of {4 ** n}"))
        if n > 1:
            cls = grid_singletons()
            S = instances.grid_hard_sample(n)
            bad = 0
            for x in _bitstrings(n):
                for y in _bitstrings(n):
                    sa, sb = instances.conp_reduction(x, y, S)
                    if oracle.decide_realizable(cls, sa + sb).realizable != _meet(x, y):
                        bad += 1
            checks.append(Check(f"conp_reduction n={n} on S_{n}", bad == 0, f"{bad} mismatches of {4 ** n}"))
    return checks


def agnostic_formula(n_max: int = 6) -> list[Check]:
    """Oracle optimum on agnostic-reduction samples equals the closed form."""
    cls = get_class("singletons")
    checks = []
    for n in range(1, n_max + 1):
        bad = 0
        for x in _bitstrings(n):
            for y in _bitstrings(n):
                sa, sb = instances.agnostic_reduction(x, y)
                loss, _ = oracle.optimal_loss(cls, sa + sb)
                if loss != instances.agnostic_optimum_formula(x, y):
                    bad += 1
        checks.append(Check(f"agnostic optimum n={n}", bad == 0, f"{bad} mismatches of {4 ** n}"))
    return checks


SUITES = {
    "supermajority": supermajority,
    "intersection-criteria": intersection_criteria,
    "small-universe": small_universe,
    "covc-witness": covc_witness,
    "reductions": reductions,
    "agnostic-formula": agnostic_formula,
}
