"""The two-party protocols, each built as a pair of party machines.

Conventions shared by the multi-round protocols:

* A net is sent as one flag bit followed by its examples. Flag ``1`` means
  "same net as my previous round" and carries no examples; flag ``0`` starts
  a fresh net. Examples already on the public log go by index reference.
* Whenever both parties hold the same information they compute the output
  independently, so the engine's agreement check is meaningful. An
  ``OutputPayload`` is only used when one side decides on private data.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from . import boosting, geometry
from .classes import (
    HypothesisClassDescriptor,
    Unbounded,
    get_class,
    halfplanes,
    is_consistent,
    non_realizable_witness,
    singleton,
    singletons,
    thresholds,
)
from .core import Example, Label, LabelledSample, Natural, PlanarPoint, SampleDistribution
from .engine import Channel, Decision, Party, PartyMachine, ProtocolOutput, received
from .nets import compression_net, epsilon_approximation, epsilon_net

PROTOCOL_NAMES = ("csd", "realizability", "proper", "improper", "agnostic", "thresholds", "singletons")


class ProtocolInapplicable(ValueError):
    pass


@dataclass(frozen=True)
class ProtocolConfig:
    class_name: str = "halfplanes2"
    epsilon: Fraction = Fraction(1, 10)
    seed: int = 0
    net_constants: tuple[int, int] = (8, 8)
    round_cap_override: int | None = None

    def __post_init__(self) -> None:
        eps = Fraction(self.epsilon)
        if not 0 < eps < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
        object.__setattr__(self, "epsilon", eps)


def _pair(name: str, sa: LabelledSample, sb: LabelledSample, alice, bob) -> tuple[PartyMachine, PartyMachine]:
    return PartyMachine(Party.ALICE, sa, alice, name), PartyMachine(Party.BOB, sb, bob, name)


def _cap(t: int, config: ProtocolConfig | None) -> int:
    if config is not None and config.round_cap_override is not None:
        return min(t, config.round_cap_override)
    return t


# ---------------------------------------------------------------------------
# net blocks


def _send_net(ch: Channel, net: LabelledSample, last: LabelledSample | None) -> None:
    if last is not None and net == last:
        ch.send_flag(True)
        return
    ch.send_flag(False)
    for z in net:
        ch.share(z)


class _Reader:
    """Sequential reader over one inbox."""

    def __init__(self, ch: Channel, inbox):
        self.examples, self.bits, self.output = received(inbox, ch)

    def bit_string(self) -> str:
        return self.bits.pop(0)

    def integer(self) -> int:
        return int(self.bit_string(), 2)

    def net(self, last: LabelledSample | None) -> LabelledSample:
        if self.bit_string() == "1":
            return last
        out, self.examples = LabelledSample(tuple(self.examples)), []
        return out


def _local_net(state: boosting.BoostState, cls, eps, seed, constants) -> LabelledSample:
    if len(state.sample) == 0:
        return LabelledSample()
    if cls.is_realizable(state.sample):
        cert = compression_net(state.sample, cls, eps, constants)
        if cert is not None:
            return cert.subsample
    p = boosting.current_distribution(state)
    return epsilon_net(state.sample, p, cls, eps, seed=seed, constants=constants).subsample


def _share_all(ch: Channel, sample: LabelledSample) -> None:
    for z in sample:
        ch.share(z)


# ---------------------------------------------------------------------------
# convex set disjointness


def _as_points(points) -> list[PlanarPoint]:
    return [p if isinstance(p, PlanarPoint) else PlanarPoint(tuple(p)) for p in points]


def csd(X: Sequence, Y: Sequence, d: int = 2, config: ProtocolConfig | None = None):
    """Convex set disjointness by boosting over Alice's points.

    Alice holds X (labelled +1), Bob holds Y (labelled -1).
    """
    if d not in (2, 3):
        raise ValueError("convex set disjointness is implemented for d in {2, 3}")
    xs, ys = _as_points(X), _as_points(Y)
    for p in xs + ys:
        if p.dim != d:
            raise ValueError(f"point {p} is not in R^{d}")
    sa = LabelledSample(tuple(Example(p, Label.POS) for p in dict.fromkeys(xs)))
    sb = LabelledSample(tuple(Example(p, Label.NEG) for p in dict.fromkeys(ys)))
    cls = halfplanes(d)
    eps = Fraction(1, 100 * d)
    n = len(xs) + len(ys)
    rounds = _cap(max(1, boosting.ceil_log2_multiple(Fraction(2 * (d + 1)), max(n, 1))), config)
    seed = config.seed if config else 0
    constants = config.net_constants if config else (8, 8)

    def alice(ch: Channel):
        yield
        state = boosting.fresh_state(sa)
        separators: list[geometry.Separator] = []
        cut: dict = {}
        last = None
        for t in range(1, rounds + 1):
            net = _local_net(state, cls, eps, seed + t, constants)
            _send_net(ch, net, last)
            last = net
            reader = _Reader(ch, (yield))
            if reader.output is not None:
                return reader.output
            xside = [z.point.coords for z in reader.examples if z.label is Label.POS]
            yside = [z.point.coords for z in reader.examples if z.label is Label.NEG]
            sep = geometry.separator_from_support(xside, yside, d)
            separators.append(sep)
            if sep not in cut:
                cut[sep] = [sep.value(z.point.coords) < 0 for z in sa]
            state = boosting.boost_mask(state, cut[sep])
        if len(sa):
            # every x must be cut off by more than a d/(d+1) share of the rounds
            need = Fraction(d, d + 1)
            assert all(Fraction(c, state.round) > need for c in state.halvings), "separation margin violated"
        halfspaces = list(dict.fromkeys((s.normal, s.offset) for s in separators))
        final = geometry.separate_from_polyhedron([z.point.coords for z in sa], halfspaces)
        if final is None:
            final = separators[-1]
        out = ProtocolOutput.decide(Decision.DISJOINT, final, rounds=len(separators))
        ch.send_output(out)
        return out

    def bob(ch: Channel):
        reader = _Reader(ch, (yield))
        y_points = [z.point.coords for z in sb]
        cache: dict = {}
        last = None
        for t in range(1, rounds + 1):
            net = reader.net(last)
            last = net
            key = net.examples
            if key not in cache:
                cache[key] = geometry.hulls_intersect([z.point.coords for z in net], y_points)
            result = cache[key]
            if isinstance(result, geometry.Intersecting):
                w = result.witness
                for q in w.negative_support:
                    ch.share(Example(PlanarPoint(q), Label.NEG))
                out = ProtocolOutput.decide(Decision.INTERSECTION, w, rounds=t)
                ch.send_output(out)
                return out
            sep = result.separator
            for q in sep.negative_support:
                ch.share(Example(PlanarPoint(q), Label.POS))
            for q in sep.positive_support:
                ch.share(Example(PlanarPoint(q), Label.NEG))
            reader = _Reader(ch, (yield))
        return reader.output

    return _pair("csd", sa, sb, alice, bob)


# ---------------------------------------------------------------------------
# boosting rounds shared by realizability, proper and improper learning


def _local_check(ch: Channel, cls, sample: LabelledSample) -> ProtocolOutput | None:
    if cls.is_realizable(sample):
        return None
    w = non_realizable_witness(cls, sample)
    _share_all(ch, w.subsample)
    out = ProtocolOutput.decide(Decision.NON_REALIZABLE, w, rounds=0, stage="local")
    ch.send_output(out)
    return out


def _rounds_for(cls, total: int, fixed: int | None) -> int:
    if fixed is not None:
        return fixed
    k = cls.covc_dim
    return max(1, boosting.ceil_log2_multiple(Fraction(4 * (k + 1)), max(total, 1)))


def _boost_core(ch: Channel, role: Party, sample, cls, net_eps, fixed_rounds, config, inbox0=None):
    """Run local checks and the boosting rounds.

    Returns ``(output, None)`` when a NON_REALIZABLE decision was reached, or
    ``(None, history)`` after the last round. Alice returns inside her turn
    right after reading Bob's last net; Bob returns inside his turn right
    after sending it.
    """
    seed = config.seed if config else 0
    constants = config.net_constants if config else (8, 8)
    state = boosting.fresh_state(sample)
    last_mine = last_theirs = None
    solved: dict = {}
    masks: dict = {}
    if role is Party.ALICE:
        ch.send_int(len(sample))
        out = _local_check(ch, cls, sample)
        if out is not None:
            return out, None
        reader = _Reader(ch, (yield))
        if reader.output is not None:
            return reader.output, None
        total = len(sample) + reader.integer()
    else:
        reader = _Reader(ch, inbox0)
        if reader.output is not None:
            return reader.output, None
        total = len(sample) + reader.integer()
        ch.send_int(len(sample))
        out = _local_check(ch, cls, sample)
        if out is not None:
            return out, None
        reader = _Reader(ch, (yield))
    rounds = _cap(_rounds_for(cls, total, fixed_rounds), config)
    for t in range(1, rounds + 1):
        mine = _local_net(state, cls, net_eps, seed + 2 * t + (role is Party.BOB), constants)
        if role is Party.ALICE:
            _send_net(ch, mine, last_mine)
            reader = _Reader(ch, (yield))
            if reader.output is not None:
                return reader.output, None
            theirs = reader.net(last_theirs)
        else:
            theirs = reader.net(last_theirs)
            _send_net(ch, mine, last_mine)
        last_mine, last_theirs = mine, theirs
        union = mine + theirs if role is Party.ALICE else theirs + mine
        if union not in solved:
            solved[union] = cls.find_consistent(union)
        h = solved[union]
        if h is None:
            w = non_realizable_witness(cls, union)
            out = ProtocolOutput.decide(Decision.NON_REALIZABLE, w, rounds=t, stage="rounds")
            if role is Party.BOB:
                ch.send_output(out)
            return out, None
        if h not in masks:
            masks[h] = [cls.evaluate(h, z.point) is z.label for z in sample]
        state = boosting.boost_mask(state, masks[h], h)
        if role is Party.BOB and t < rounds:
            reader = _Reader(ch, (yield))
            if reader.output is not None:
                return reader.output, None
    return None, state.history


def _coVC(cls: HypothesisClassDescriptor) -> int:
    if isinstance(cls.covc_dim, Unbounded) or isinstance(cls.vc_dim, Unbounded):
        raise ProtocolInapplicable("coVC unbounded: protocol inapplicable")
    return cls.covc_dim


def realizability(sa: LabelledSample, sb: LabelledSample, cls: HypothesisClassDescriptor, config: ProtocolConfig | None = None):
    k = _coVC(cls)
    net_eps = Fraction(1, 5 * k)

    def program(role: Party, sample: LabelledSample):
        def run(ch: Channel):
            inbox = yield
            out, history = yield from _boost_core(ch, role, sample, cls, net_eps, None, config, inbox)
            if out is not None:
                return out
            vote = boosting.majority_vote(history)
            return ProtocolOutput.decide(Decision.REALIZABLE, rounds=len(history), majority=vote)

        return run

    return _pair("realizability", sa, sb, program(Party.ALICE, sa), program(Party.BOB, sb))


def proper_learn(sa: LabelledSample, sb: LabelledSample, cls: HypothesisClassDescriptor, eps, config: ProtocolConfig | None = None):
    """Proper learning: local eps-nets, realizability rounds on the nets, then
    any class member consistent with both nets."""
    k = _coVC(cls)
    eps = Fraction(eps)
    net_eps = Fraction(1, 5 * k)
    seed = config.seed if config else 0
    constants = config.net_constants if config else (8, 8)

    def reduce(sample: LabelledSample) -> LabelledSample:
        if len(sample) == 0 or not cls.is_realizable(sample):
            return sample
        p = SampleDistribution.uniform(len(sample))
        return epsilon_net(sample, p, cls, eps, seed=seed, constants=constants).subsample

    def program(role: Party, sample: LabelledSample):
        def run(ch: Channel):
            inbox = yield
            net = reduce(sample)
            out, history = yield from _boost_core(ch, role, net, cls, net_eps, None, config, inbox)
            if out is not None:
                return out
            h = history[-1]
            mine_ok = is_consistent(h, net)
            if role is Party.BOB:
                reader = _Reader(ch, (yield))
                ch.send_flag(mine_ok)
                theirs_ok = reader.bit_string() == "1"
                if mine_ok and theirs_ok:
                    return ProtocolOutput.learned(h, rounds=len(history))
                _share_all(ch, net)
                reader = _Reader(ch, (yield))
                union = LabelledSample(tuple(reader.examples)) + net
            else:
                ch.send_flag(mine_ok)
                reader = _Reader(ch, (yield))
                theirs_ok = reader.bit_string() == "1"
                if mine_ok and theirs_ok:
                    return ProtocolOutput.learned(h, rounds=len(history))
                union = net + LabelledSample(tuple(reader.examples))
                _share_all(ch, net)
            found = cls.find_consistent(union)
            if found is None:
                return ProtocolOutput.decide(Decision.NON_REALIZABLE, non_realizable_witness(cls, union))
            return ProtocolOutput.learned(found, rounds=len(history), fallback=True)

        return run

    return _pair("proper", sa, sb, program(Party.ALICE, sa), program(Party.BOB, sb))


def improper_learn(sa: LabelledSample, sb: LabelledSample, cls: HypothesisClassDescriptor, eps, config: ProtocolConfig | None = None):
    """Boosting with 1/4-nets; the output is the majority of all round hypotheses."""
    eps = Fraction(eps)
    if isinstance(cls.vc_dim, Unbounded):
        raise ProtocolInapplicable("VC unbounded: protocol inapplicable")
    rounds = boosting.adaboost_rounds(eps)

    def program(role: Party, sample: LabelledSample):
        def run(ch: Channel):
            inbox = yield
            out, history = yield from _boost_core(ch, role, sample, cls, Fraction(1, 4), rounds, config, inbox)
            if out is not None:
                return out
            return ProtocolOutput.learned(boosting.majority_vote(history), rounds=len(history))

        return run

    return _pair("improper", sa, sb, program(Party.ALICE, sa), program(Party.BOB, sb))


# ---------------------------------------------------------------------------
# agnostic learning


def weighted_erm(cls, size_a: int, sub_a: LabelledSample, size_b: int, sub_b: LabelledSample):
    """Minimize |S_a| L_{S'_a}(h) + |S_b| L_{S'_b}(h) over the effective table
    of S'_a + S'_b; ties go to the first row of the table."""
    union = sub_a + sub_b
    table = cls.effective_table(union)
    ma = table.mistake_counts(sub_a).astype(object)
    mb = table.mistake_counts(sub_b).astype(object)
    score = ma * (size_a * max(1, len(sub_b))) + mb * (size_b * max(1, len(sub_a)))
    best = min(range(len(table)), key=lambda k: (score[k], k))
    return table.hypothesis(best)


def agnostic_learn(sa: LabelledSample, sb: LabelledSample, cls: HypothesisClassDescriptor, eps, config: ProtocolConfig | None = None):
    eps = Fraction(eps)
    seed = config.seed if config else 0

    def approx(sample: LabelledSample, salt: int) -> LabelledSample:
        if len(sample) == 0:
            return sample
        return epsilon_approximation(sample, cls, eps, seed=seed + salt).subsample

    def alice(ch: Channel):
        yield
        mine = approx(sa, 0)
        ch.send_int(len(sa))
        _share_all(ch, mine)
        reader = _Reader(ch, (yield))
        size_b = reader.integer()
        theirs = LabelledSample(tuple(reader.examples))
        return ProtocolOutput.learned(weighted_erm(cls, len(sa), mine, size_b, theirs))

    def bob(ch: Channel):
        reader = _Reader(ch, (yield))
        size_a = reader.integer()
        theirs = LabelledSample(tuple(reader.examples))
        mine = approx(sb, 1)
        ch.send_int(len(sb))
        _share_all(ch, mine)
        return ProtocolOutput.learned(weighted_erm(cls, size_a, theirs, len(sb), mine))

    return _pair("agnostic", sa, sb, alice, bob)


# ---------------------------------------------------------------------------
# constant-size protocols


def thresholds_protocol(sa: LabelledSample, sb: LabelledSample):
    cls = thresholds()

    def extremes(sample: LabelledSample) -> list[Example]:
        return list(cls.compress(sample))

    def decide(examples: list[Example]) -> ProtocolOutput:
        joint = LabelledSample(tuple(examples))
        h = cls.find_consistent(joint)
        if h is None:
            return ProtocolOutput.decide(Decision.NON_REALIZABLE, non_realizable_witness(cls, joint))
        return ProtocolOutput.learned(h)

    def alice(ch: Channel):
        yield
        mine = extremes(sa)
        for z in mine:
            ch.send_example(z)
        reader = _Reader(ch, (yield))
        return decide(mine + reader.examples)

    def bob(ch: Channel):
        reader = _Reader(ch, (yield))
        mine = extremes(sb)
        for z in mine:
            ch.send_example(z)
        return decide(reader.examples + mine)

    return _pair("thresholds", sa, sb, alice, bob)


def singletons_protocol(sa: LabelledSample, sb: LabelledSample):
    """Publish a positive example if there is one; otherwise publish the
    largest point as bits, so that both sides can pick an unused singleton."""
    cls = singletons()

    def summary(ch: Channel, sample: LabelledSample) -> None:
        pos = sample.positives()
        if pos:
            ch.send_example(next(z for z in sample if z.label is Label.POS))
        elif len(sample):
            ch.send_bits("1" + format(max(x.n for x in sample.points), "b"))
        else:
            ch.send_bits("0")

    def their_max(bits: str) -> int | None:
        return int(bits[1:], 2) if bits != "0" else None

    def conflict(sample: LabelledSample, positive: Example) -> Example | None:
        v = positive.point
        return next(
            (z for z in sample if (z.point == v) != (z.label is Label.POS)),
            None,
        )

    def non_realizable(*examples: Example) -> ProtocolOutput:
        return ProtocolOutput.decide(Decision.NON_REALIZABLE, non_realizable_witness(cls, LabelledSample(examples)))

    def fresh(*maxima) -> ProtocolOutput:
        top = max((m for m in maxima if m is not None), default=-1)
        return ProtocolOutput.learned(singleton(top + 1))

    def alice(ch: Channel):
        yield
        out = _local_check(ch, cls, sa)
        if out is not None:
            return out
        summary(ch, sa)
        reader = _Reader(ch, (yield))
        if reader.output is not None:
            return reader.output
        mine = next((z for z in sa if z.label is Label.POS), None)
        if mine is not None:
            # Bob either confirmed (bit 1) or already decided
            return ProtocolOutput.learned(singleton(mine.point.n))
        if reader.examples:
            theirs = reader.examples[0]
            bad = conflict(sa, theirs)
            if bad is not None:
                ch.send_example(bad)
                out = non_realizable(theirs, bad)
            else:
                ch.send_flag(True)
                out = ProtocolOutput.learned(singleton(theirs.point.n))
            ch.send_output(out)
            return out
        mine_max = max((x.n for x in sa.points), default=None)
        return fresh(mine_max, their_max(reader.bit_string()))

    def bob(ch: Channel):
        reader = _Reader(ch, (yield))
        if reader.output is not None:
            return reader.output
        out = _local_check(ch, cls, sb)
        if out is not None:
            return out
        if reader.examples:
            theirs = reader.examples[0]
            bad = conflict(sb, theirs)
            if bad is not None:
                ch.send_example(bad)
                out = non_realizable(theirs, bad)
                ch.send_output(out)
                return out
            ch.send_flag(True)
            return ProtocolOutput.learned(singleton(theirs.point.n))
        summary(ch, sb)
        if any(z.label is Label.POS for z in sb):
            reader = _Reader(ch, (yield))
            return reader.output
        mine_max = max((x.n for x in sb.points), default=None)
        return fresh(mine_max, their_max(reader.bit_string()))

    return _pair("singletons", sa, sb, alice, bob)


# ---------------------------------------------------------------------------
# dispatch


def make_protocol(name: str, sa: LabelledSample, sb: LabelledSample, config: ProtocolConfig | None = None):
    config = config or ProtocolConfig()
    if name == "csd":
        d = next((z.point.dim for z in sa + sb), 2)
        return csd([z.point for z in sa], [z.point for z in sb], d, config)
    if name == "thresholds":
        return thresholds_protocol(sa, sb)
    if name == "singletons":
        return singletons_protocol(sa, sb)
    cls = get_class(config.class_name)
    if name == "realizability":
        return realizability(sa, sb, cls, config)
    if name == "proper":
        return proper_learn(sa, sb, cls, config.epsilon, config)
    if name == "improper":
        return improper_learn(sa, sb, cls, config.epsilon, config)
    if name == "agnostic":
        return agnostic_learn(sa, sb, cls, config.epsilon, config)
    raise ValueError(f"unknown protocol {name!r}; choose from {', '.join(PROTOCOL_NAMES)}")


__all__ = [
    "PROTOCOL_NAMES",
    "ProtocolConfig",
    "ProtocolInapplicable",
    "agnostic_learn",
    "csd",
    "improper_learn",
    "make_protocol",
    "proper_learn",
    "realizability",
    "singletons_protocol",
    "thresholds_protocol",
    "weighted_erm",
]
