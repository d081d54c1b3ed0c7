"""Two-party execution with cost accounting.

A party is a generator function ``program(channel)``. Its first statement
is ``inbox = yield`` (the engine primes every program, then hands Alice an
empty inbox). A party queues messages on the channel, ends its turn with
``inbox = yield`` and halts by returning a :class:`ProtocolOutput`. Messages queued before a halt
are still delivered. The engine alternates turns starting with Alice, checks
that every example a party sends occurs in its own sample, and records a
public log that both parties can read (this is how index references are
resolved).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Generator
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .classes import NonRealizableWitness
from .core import (
    Example,
    Hypothesis,
    LabelledSample,
    example_to_json,
    fraction_str,
    hypothesis_to_json,
    sample_to_json,
)
from .geometry import CaratheodoryWitness, Separator


class Party(str, Enum):
    ALICE = "alice"
    BOB = "bob"

    @property
    def other(self) -> Party:
        return Party.BOB if self is Party.ALICE else Party.ALICE


class Decision(str, Enum):
    REALIZABLE = "REALIZABLE"
    NON_REALIZABLE = "NON_REALIZABLE"
    DISJOINT = "DISJOINT"
    INTERSECTION = "INTERSECTION"


_WITNESS_TYPES = {
    Decision.DISJOINT: Separator,
    Decision.INTERSECTION: CaratheodoryWitness,
    Decision.NON_REALIZABLE: NonRealizableWitness,
}


@dataclass(frozen=True)
class ProtocolOutput:
    """Either a decision or a learned hypothesis, plus an optional witness.

    ``info`` carries diagnostics (round counts, informational hypotheses) and
    takes no part in equality.
    """

    decision: Decision | None = None
    hypothesis: Hypothesis | None = None
    witness: Any = None
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if (self.decision is None) == (self.hypothesis is None):
            raise ValueError("an output is exactly one of a decision or a hypothesis")
        if self.witness is not None:
            want = _WITNESS_TYPES.get(self.decision)
            if want is None or not isinstance(self.witness, want):
                raise ValueError(f"witness {type(self.witness).__name__} does not match {self.decision}")

    @classmethod
    def decide(cls, decision: Decision, witness=None, **info) -> ProtocolOutput:
        return cls(decision=decision, witness=witness, info=info)

    @classmethod
    def learned(cls, h: Hypothesis, **info) -> ProtocolOutput:
        return cls(hypothesis=h, info=info)


# ---------------------------------------------------------------------------
# messages


@dataclass(frozen=True)
class ExamplePayload:
    example: Example


@dataclass(frozen=True)
class BitsPayload:
    bits: str
    ref: int | None = None

    def __post_init__(self) -> None:
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"bit payload must be a nonempty 0/1 string, got {self.bits!r}")


@dataclass(frozen=True)
class OutputPayload:
    output: ProtocolOutput


@dataclass(frozen=True)
class Message:
    index: int
    sender: Party
    payload: ExamplePayload | BitsPayload | OutputPayload


def ref_bits(j: int) -> str:
    """Encoding of a reference to message j: ceil(log2(j+1)) + 1 bits."""
    width = math.ceil(math.log2(j + 1)) if j > 0 else 0
    return "1" + (format(j, f"0{width}b") if width else "")


def int_bits(v: int) -> str:
    return format(v, "b")


class ProtocolAbort(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


class Channel:
    """A party's handle on the conversation."""

    def __init__(self, role: Party, sample: LabelledSample, log: list[Message]):
        self.role = role
        self.sample = sample
        self.log = log
        self.outbox: list[Any] = []

    def send_example(self, z: Example) -> None:
        self.outbox.append(ExamplePayload(z))

    def send_bits(self, bits: str) -> None:
        self.outbox.append(BitsPayload(bits))

    def send_int(self, v: int) -> None:
        self.send_bits(int_bits(v))

    def send_flag(self, flag: bool) -> None:
        self.send_bits("1" if flag else "0")

    def send_ref(self, j: int) -> None:
        if not isinstance(self.log[j].payload, ExamplePayload):
            raise ProtocolAbort("bad reference", f"message {j} carries no example")
        self.outbox.append(BitsPayload(ref_bits(j), ref=j))

    def send_output(self, out: ProtocolOutput) -> None:
        self.outbox.append(OutputPayload(out))

    def first_index(self, z: Example) -> int | None:
        for m in self.log:
            if isinstance(m.payload, ExamplePayload) and m.payload.example == z:
                return m.index
        return None

    def share(self, z: Example) -> None:
        """Send ``z``, by reference if anyone has sent it before."""
        j = self.first_index(z)
        if j is None:
            self.send_example(z)
        else:
            self.send_ref(j)

    def resolve(self, payload) -> Example | None:
        if isinstance(payload, ExamplePayload):
            return payload.example
        if isinstance(payload, BitsPayload) and payload.ref is not None:
            return self.log[payload.ref].payload.example
        return None


Program = Callable[[Channel], Generator[None, list, ProtocolOutput]]


@dataclass(frozen=True)
class PartyMachine:
    role: Party
    sample: LabelledSample
    program: Program
    protocol: str = ""


# ---------------------------------------------------------------------------
# transcripts


@dataclass
class Transcript:
    messages: list[Message] = field(default_factory=list)
    output: ProtocolOutput | None = None
    abort: str | None = None
    abort_detail: str = ""
    protocol: str = ""

    @property
    def examples_sent(self) -> int:
        return sum(isinstance(m.payload, ExamplePayload) for m in self.messages)

    @property
    def bits_sent(self) -> int:
        return sum(len(m.payload.bits) for m in self.messages if isinstance(m.payload, BitsPayload))

    @property
    def rounds(self) -> int:
        runs, last = 0, None
        for m in self.messages:
            if m.sender is not last:
                runs += 1
                last = m.sender
        return runs

    @property
    def ok(self) -> bool:
        return self.abort is None

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol,
            "messages": [_message_json(m) for m in self.messages],
            "rounds": self.rounds,
            "examples_sent": self.examples_sent,
            "bits_sent": self.bits_sent,
            "output": output_to_json(self.output) if self.output is not None else None,
            "abort": self.abort,
        }


def sample_complexity(t: Transcript) -> tuple[int, int, int]:
    e, b = t.examples_sent, t.bits_sent
    return e, b, e + b


def _points_json(pts) -> list:
    return [[fraction_str(c) for c in p] for p in pts]


def witness_to_json(w) -> dict | None:
    if w is None:
        return None
    if isinstance(w, Separator):
        return {
            "type": "separator",
            "normal": [fraction_str(c) for c in w.normal],
            "offset": fraction_str(w.offset),
            "negative_support": _points_json(w.negative_support),
            "positive_support": _points_json(w.positive_support),
        }
    if isinstance(w, CaratheodoryWitness):
        return {
            "type": "caratheodory",
            "point": [fraction_str(c) for c in w.point],
            "positive_support": _points_json(w.positive_support),
            "positive_coefficients": [fraction_str(c) for c in w.positive_coefficients],
            "negative_support": _points_json(w.negative_support),
            "negative_coefficients": [fraction_str(c) for c in w.negative_coefficients],
        }
    return {"type": "subsample", "subsample": sample_to_json(w.subsample)}


def output_to_json(out: ProtocolOutput) -> dict:
    return {
        "decision": out.decision.value if out.decision else None,
        "hypothesis": hypothesis_to_json(out.hypothesis) if out.hypothesis else None,
        "witness": witness_to_json(out.witness),
    }


def _message_json(m: Message) -> dict:
    p = m.payload
    if isinstance(p, ExamplePayload):
        body = {"kind": "example", "example": example_to_json(p.example)}
    elif isinstance(p, BitsPayload):
        body = {"kind": "bits", "bits": p.bits, "ref": p.ref}
    else:
        body = {"kind": "output", "output": output_to_json(p.output)}
    return {"index": m.index, "sender": m.sender.value, **body}


# ---------------------------------------------------------------------------
# execution


def default_budget(alice: PartyMachine, bob: PartyMachine) -> int:
    return 10 * (len(alice.sample) + len(bob.sample)) + 100


def run(alice: PartyMachine, bob: PartyMachine, max_messages: int | None = None) -> Transcript:
    if alice.protocol != bob.protocol:
        raise ValueError(f"protocol mismatch: {alice.protocol!r} vs {bob.protocol!r}")
    budget = default_budget(alice, bob) if max_messages is None else max_messages
    if budget <= 0:
        raise ValueError("max_messages must be positive")
    transcript = Transcript(protocol=alice.protocol)
    log = transcript.messages
    machines = {Party.ALICE: alice, Party.BOB: bob}
    channels = {r: Channel(r, m.sample, log) for r, m in machines.items()}
    gens = {r: m.program(channels[r]) for r, m in machines.items()}
    pools = {r: set(m.sample.examples) for r, m in machines.items()}
    outputs: dict[Party, ProtocolOutput] = {}
    pending: dict[Party, list[Message]] = {Party.ALICE: [], Party.BOB: []}
    turn = Party.ALICE
    turns = 0
    try:
        for role, gen in gens.items():
            next(gen)
            if channels[role].outbox:
                raise ProtocolAbort("protocol error", f"{role.value} sent before its first turn")
        while len(outputs) < 2:
            turns += 1
            if turns > budget:
                raise ProtocolAbort("budget exceeded", f"more than {budget} turns")
            if turn in outputs:
                turn = turn.other
                continue
            ch = channels[turn]
            try:
                inbox, pending[turn] = pending[turn], []
                gens[turn].send(inbox)
                halted = None
            except StopIteration as stop:
                halted = stop.value
                if not isinstance(halted, ProtocolOutput):
                    raise ProtocolAbort("bad halt", f"{turn.value} returned {halted!r}") from None
            for payload in ch.outbox:
                if isinstance(payload, ExamplePayload) and payload.example not in pools[turn]:
                    raise ProtocolAbort("origin violation", f"{turn.value} sent {payload.example}")
                msg = Message(len(log), turn, payload)
                log.append(msg)
                pending[turn.other].append(msg)
                if len(log) > budget:
                    raise ProtocolAbort("budget exceeded", f"more than {budget} messages")
            ch.outbox.clear()
            if halted is not None:
                outputs[turn] = halted
            turn = turn.other
        if outputs[Party.ALICE] != outputs[Party.BOB]:
            raise ProtocolAbort("output disagreement", f"{outputs[Party.ALICE]} != {outputs[Party.BOB]}")
        transcript.output = outputs[Party.ALICE]
    except ProtocolAbort as err:
        transcript.abort = err.reason
        transcript.abort_detail = err.detail
    return transcript


def received(inbox: list[Message], ch: Channel) -> tuple[list[Example], list[str], ProtocolOutput | None]:
    """Split an inbox into resolved examples, plain bit strings and any output."""
    examples, bits, out = [], [], None
    for m in inbox:
        p = m.payload
        if isinstance(p, OutputPayload):
            out = p.output
            continue
        z = ch.resolve(p)
        if z is not None:
            examples.append(z)
        else:
            bits.append(p.bits)
    return examples, bits, out


__all__ = [
    "BitsPayload",
    "Channel",
    "Decision",
    "ExamplePayload",
    "Message",
    "OutputPayload",
    "Party",
    "PartyMachine",
    "ProtocolAbort",
    "ProtocolOutput",
    "Transcript",
    "default_budget",
    "received",
    "ref_bits",
    "run",
    "sample_complexity",
]
