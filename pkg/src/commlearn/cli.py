"""Command-line driver: ``commlearn {gen,run,experiment,verify}``.

Exit codes: 0 ok, 2 usage error or a protocol that refuses the class,
3 protocol abort, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import instances, oracle, suites
from .classes import CLASS_NAMES, get_class, grid_singletons, halfplanes
from .core import (
    Example,
    Label,
    LabelledSample,
    PlanarPoint,
    empirical_loss,
    parse_fraction,
    sample_from_json,
)
from .engine import Decision, run
from .protocols import PROTOCOL_NAMES, ProtocolConfig, ProtocolInapplicable, make_protocol

EXIT_OK, EXIT_USAGE, EXIT_ABORT, EXIT_VERIFY = 0, 2, 3, 4
CSV_HEADER = "n,trial,decision_correct,examples_sent,bits_sent,rounds,runtime_ms"
GEN_KINDS = ("imr", "halfplane", "points", "thresholds", "singletons", "reduction")


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("COMMLEARN_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"COMMLEARN_SEED must be an integer, got {raw!r}") from None


def _fraction_arg(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _sizes_arg(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be a comma list of integers: {text!r}") from None
    if not sizes or sizes != sorted(set(sizes)) or sizes[0] < 1:
        raise argparse.ArgumentTypeError("sizes must be positive and strictly increasing")
    return sizes


def _key_values(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        out[key] = value
    return out


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# gen


def _flag(params: dict, key: str) -> bool:
    return params.get(key, "false").lower() in ("1", "true", "yes")


def generate(kind: str, params: dict, seed: int) -> dict:
    if kind == "imr":
        eps = parse_fraction(params["eps"]) if "eps" in params else None
        return instances.gen_imr(int(params.get("m", 3)), int(params.get("r", 2)), seed, eps).to_json()
    if kind == "halfplane":
        n, noisy = int(params.get("n", 100)), _flag(params, "noisy")
        sa, sb = instances.random_halfplane_instance(n, noisy, seed)
        truth = "REALIZABLE" if oracle.decide_realizable(halfplanes(2), sa + sb).realizable else "NON_REALIZABLE"
        return instances.instance_json(kind, {"n": n, "noisy": noisy}, sa, sb, truth)
    if kind == "points":
        n, separable = int(params.get("n", 100)), _flag(params, "separable")
        X, Y = instances.random_point_sets(n, separable, seed)
        sa, sb = _label_points(X, Y)
        return instances.instance_json(kind, {"n": n, "separable": separable}, sa, sb, oracle.point_sets_verdict(X, Y))
    if kind in ("thresholds", "singletons"):
        n = int(params.get("n", 20))
        make = instances.random_threshold_instance if kind == "thresholds" else instances.random_singleton_instance
        sa, sb = make(n, seed)
        return instances.instance_json(kind, {"n": n}, sa, sb, "REALIZABLE")
    if kind == "reduction":
        which, x, y = params.get("type", "agnostic"), params.get("x", "0"), params.get("y", "0")
        if which == "agnostic":
            sa, sb = instances.agnostic_reduction(x, y)
            truth = str(instances.agnostic_optimum_formula(x, y))
        elif which == "conp":
            sa, sb = instances.conp_reduction(x, y, instances.grid_hard_sample(len(x)))
            truth = "REALIZABLE" if oracle.decide_realizable(grid_singletons(), sa + sb).realizable else "NON_REALIZABLE"
        elif which == "np":
            triangle = [PlanarPoint((0, 0)), PlanarPoint((1, 0)), PlanarPoint((0, 1))]
            if len(x) > 3:
                raise UsageError("np reduction over half-planes needs n <= 3")
            sa, sb = instances.np_reduction(x, y, triangle[: len(x)])
            truth = "REALIZABLE" if oracle.decide_realizable(halfplanes(2), sa + sb).realizable else "NON_REALIZABLE"
        else:
            raise UsageError(f"unknown reduction type {which!r}")
        return instances.instance_json(kind, {"type": which, "x": x, "y": y}, sa, sb, truth)
    raise UsageError(f"unknown instance kind {kind!r}; choose from {', '.join(GEN_KINDS)}")


def cmd_gen(args) -> int:
    params = _key_values(args.params)
    try:
        obj = generate(args.kind, params, args.seed)
    except (KeyError, ValueError) as err:
        raise UsageError(str(err)) from None
    _write(json.dumps(obj, indent=1) + "\n", args.out)
    print(f"{obj['kind']}: alice {len(obj['alice'])}, bob {len(obj['bob'])}, truth {obj['truth']}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# run


def _label_points(X, Y) -> tuple[LabelledSample, LabelledSample]:
    sa = LabelledSample(tuple(Example(PlanarPoint(tuple(p.coords if isinstance(p, PlanarPoint) else p)), Label.POS) for p in X))
    sb = LabelledSample(tuple(Example(PlanarPoint(tuple(q.coords if isinstance(q, PlanarPoint) else q)), Label.NEG) for q in Y))
    return sa, sb


def load_instance(path: str) -> tuple[LabelledSample, LabelledSample, dict]:
    obj = json.loads(Path(path).read_text())
    alice, bob = obj.get("alice", []), obj.get("bob", [])
    if all(isinstance(p, list) for p in alice + bob):
        # bare point lists: Alice's points are +1, Bob's are -1
        X = [tuple(parse_fraction(c) for c in p) for p in alice]
        Y = [tuple(parse_fraction(c) for c in p) for p in bob]
        sa, sb = _label_points(X, Y)
    else:
        sa, sb = sample_from_json(alice), sample_from_json(bob)
    return sa, sb, obj


def _config(args) -> ProtocolConfig:
    return ProtocolConfig(class_name=args.cls, epsilon=args.eps, seed=args.seed)


def _summary(t) -> str:
    if not t.ok:
        return f"ABORT {t.abort} ({t.abort_detail}) examples_sent={t.examples_sent} bits_sent={t.bits_sent} rounds={t.rounds}"
    out = t.output
    what = out.decision.value if out.decision else f"hypothesis={out.hypothesis.class_id}"
    return f"{what} examples_sent={t.examples_sent} bits_sent={t.bits_sent} rounds={t.rounds}"


def cmd_run(args) -> int:
    sa, sb, obj = load_instance(args.instance)
    try:
        machines = make_protocol(args.protocol, sa, sb, _config(args))
    except ProtocolInapplicable as err:
        print(f"refused: {err}", file=sys.stderr)
        return EXIT_USAGE
    t = run(*machines, max_messages=args.max_messages)
    if args.out:
        Path(args.out).write_text(json.dumps(t.to_json(), indent=1) + "\n")
    line = _summary(t)
    if obj.get("truth") is not None:
        line += f" truth={obj['truth']}"
    print(line)
    return EXIT_OK if t.ok else EXIT_ABORT


# ---------------------------------------------------------------------------
# experiment


@dataclass(frozen=True)
class ExperimentSpec:
    protocol: str
    class_name: str
    sizes: tuple[int, ...]
    trials: int
    epsilon: Fraction
    seed: int
    out: str | None = None
    timing: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if list(self.sizes) != sorted(set(self.sizes)):
            raise UsageError("sizes must be strictly increasing")


def _trial_seed(spec: ExperimentSpec, n: int, trial: int) -> int:
    return spec.seed * 1_000_003 + n * 1009 + trial


def _trial_instance(spec: ExperimentSpec, n: int, trial: int, seed: int):
    p = spec.protocol
    if p == "csd":
        X, Y = instances.random_point_sets(n, trial % 2 == 0, seed)
        return _label_points(X, Y)
    if p == "realizability":
        return instances.random_halfplane_instance(max(n, 2), trial % 2 == 1, seed)
    if p in ("proper", "improper"):
        return instances.random_halfplane_instance(n, False, seed)
    if p == "agnostic":
        sa, sb = instances.random_halfplane_instance(n, False, seed)
        return instances.flip_labels(sa, Fraction(1, 10), seed), instances.flip_labels(sb, Fraction(1, 10), seed + 1)
    if p == "thresholds":
        return instances.random_threshold_instance(n, seed)
    return instances.random_singleton_instance(n, seed)


def _correct(spec: ExperimentSpec, sa: LabelledSample, sb: LabelledSample, t) -> bool:
    """Score an output against the oracle, never the protocol's own claim."""
    if not t.ok:
        return False
    out, joint = t.output, sa + sb
    if spec.protocol == "csd":
        return out.decision.value == oracle.point_sets_verdict(sa.points, sb.points)
    cls = get_class(spec.class_name) if spec.protocol not in ("thresholds", "singletons") else get_class(spec.protocol)
    truth = oracle.decide_realizable(cls, joint).realizable
    if out.decision is not None:
        return (out.decision is Decision.REALIZABLE) == truth
    loss = empirical_loss(out.hypothesis, joint)
    if spec.protocol == "agnostic":
        best, _ = oracle.optimal_loss(cls, joint)
        return loss <= best + 2 * spec.epsilon
    if spec.protocol == "proper" and not cls.contains(out.hypothesis):
        return False
    if spec.protocol in ("thresholds", "singletons"):
        return loss == 0
    return loss <= spec.epsilon


def experiment_rows(spec: ExperimentSpec) -> list[tuple]:
    config = ProtocolConfig(class_name=spec.class_name, epsilon=spec.epsilon, seed=spec.seed)
    rows = []
    for n in spec.sizes:
        for trial in range(spec.trials):
            seed = _trial_seed(spec, n, trial)
            sa, sb = _trial_instance(spec, n, trial, seed)
            start = time.perf_counter()
            t = run(*make_protocol(spec.protocol, sa, sb, config))
            elapsed = round((time.perf_counter() - start) * 1000) if spec.timing else 0
            rows.append((n, trial, int(_correct(spec, sa, sb, t)), t.examples_sent, t.bits_sent, t.rounds, elapsed))
    return rows


def render_csv(rows: list[tuple]) -> str:
    lines = [CSV_HEADER]
    lines += [",".join(str(v) for v in row) for row in rows]
    for n in dict.fromkeys(r[0] for r in rows):
        group = [r for r in rows if r[0] == n]
        ex = [r[3] for r in group]
        lines.append(
            f"# n={n} trials={len(group)} correct={sum(r[2] for r in group)} "
            f"mean_examples={Fraction(sum(ex), len(ex))} max_examples={max(ex)} "
            f"max_bits={max(r[4] for r in group)} max_rounds={max(r[5] for r in group)}"
        )
    return "\n".join(lines) + "\n"


def cmd_experiment(args) -> int:
    spec = ExperimentSpec(args.protocol, args.cls, tuple(args.sizes), args.trials, args.eps, args.seed, args.out, args.timing)
    if spec.protocol != "csd":
        try:
            make_protocol(spec.protocol, LabelledSample(), LabelledSample(), ProtocolConfig(spec.class_name, spec.epsilon))
        except ProtocolInapplicable as err:
            print(f"refused: {err}", file=sys.stderr)
            return EXIT_USAGE
    rows = experiment_rows(spec)
    _write(render_csv(rows), spec.out)
    wrong = sum(1 for r in rows if not r[2])
    print(f"{len(rows)} runs, {wrong} incorrect", file=sys.stderr)
    return EXIT_OK if wrong == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# verify

_SUITE_PARAMS = {"m": "m_max", "r": "r_max", "k": "k_max", "n": "n_max", "trials": "trials", "draws": "draws"}


def cmd_verify(args) -> int:
    name = "intersection-criteria" if args.suite == "imr" else args.suite
    if name not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    kwargs = {}
    for key, value in _key_values(args.params).items():
        if key not in _SUITE_PARAMS:
            raise UsageError(f"unknown suite parameter {key!r}")
        kwargs[_SUITE_PARAMS[key]] = int(value)
    if name == "supermajority":
        kwargs.setdefault("seed", args.seed)
    try:
        checks = suites.SUITES[name](**kwargs)
    except TypeError as err:
        raise UsageError(str(err)) from None
    for c in checks:
        print(c.line())
    ok = all(c.ok for c in checks)
    print(f"{name}: {'pass' if ok else 'FAIL'} ({sum(c.ok for c in checks)}/{len(checks)})")
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commlearn", description="Two-party learning protocols with exact accounting.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, protocol=False):
        p.add_argument("--seed", type=int, default=None, help="defaults to $COMMLEARN_SEED or 0")
        p.add_argument("--out", default=None)
        if protocol:
            p.add_argument("--protocol", choices=PROTOCOL_NAMES, required=True)
            p.add_argument("--class", dest="cls", choices=CLASS_NAMES, default="halfplanes2")
            p.add_argument("--eps", type=_fraction_arg, default=Fraction(1, 10))

    g = sub.add_parser("gen", help="write an instance file")
    g.add_argument("kind", help=f"one of {', '.join(GEN_KINDS)}")
    g.add_argument("params", nargs="*", help="key=value parameters, e.g. m=3 r=2")
    common(g)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run a protocol on an instance file")
    r.add_argument("instance")
    r.add_argument("--max-messages", type=int, default=None)
    common(r, protocol=True)
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("experiment", help="size sweep with CSV output")
    e.add_argument("--sizes", type=_sizes_arg, default=[64, 128, 256])
    e.add_argument("--trials", type=int, default=10)
    e.add_argument("--timing", action="store_true", help="record wall-clock runtime_ms (otherwise 0, keeping output byte-stable)")
    common(e, protocol=True)
    e.set_defaults(func=cmd_experiment)

    v = sub.add_parser("verify", help="run a lemma suite")
    v.add_argument("suite", help=f"one of {', '.join(suites.SUITES)} (imr is an alias)")
    v.add_argument("params", nargs="*", help="key=value bounds, e.g. m=3 r=3 or k=10")
    common(v)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.seed is None:
            args.seed = default_seed()
        if getattr(args, "max_messages", None) is not None and args.max_messages <= 0:
            raise UsageError("--max-messages must be positive")
        return args.func(args)
    except UsageError as err:
        print(f"commlearn: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as err:
        print(f"commlearn: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
