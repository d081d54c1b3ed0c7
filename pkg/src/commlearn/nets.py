"""Certified eps-nets and eps-approximations.

Every certificate handed back has been checked exactly. Two routes exist for
nets:

* ``compression``: the class's compression subsample. Any member consistent
  with it is consistent with the whole sample, so it is an eps-net for every
  distribution and every eps. It is checked structurally (for half-planes,
  every point lies in the hull of same-labelled compression points).
* ``draw``: i.i.d. draws from p, verified against the effective table, with
  the size doubled on failure.

``auto`` takes the compression whenever it is no larger than the size target.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import geometry
from .classes import HypothesisClassDescriptor, Unbounded
from .core import Label, LabelledSample, SampleDistribution

MAX_DOUBLINGS = 20


class NetKind(str, Enum):
    NET = "net"
    APPROXIMATION = "approximation"


@dataclass(frozen=True)
class NetCertificate:
    subsample: LabelledSample
    epsilon: Fraction
    kind: NetKind
    verified: bool
    draws_attempted: int
    method: str = "draw"

    def __len__(self) -> int:
        return len(self.subsample)


class NetError(ValueError):
    pass


def _vc(cls: HypothesisClassDescriptor) -> int:
    if isinstance(cls.vc_dim, Unbounded):
        raise NetError(f"{cls.name} has unbounded VC dimension")
    return cls.vc_dim


def net_size_target(d: int, eps: Fraction, c: int = 8, c_prime: int = 8) -> int:
    eps = Fraction(eps)
    return math.ceil(c * (d / eps) * math.log(1 / eps)) + c_prime


def approximation_size_target(d: int, eps: Fraction) -> int:
    eps = Fraction(eps)
    return math.ceil(4 * d / eps**2)


# ---------------------------------------------------------------------------
# verification


def violating_net_rows(
    cls: HypothesisClassDescriptor, sample: LabelledSample, p: SampleDistribution, net: LabelledSample, eps
) -> list[int]:
    """Effective rows consistent with ``net`` whose weighted loss exceeds eps."""
    table = cls.effective_table(sample)
    ok = ~table.mistake_matrix(net).any(axis=1) if len(net) else np.ones(len(table), dtype=bool)
    rows = np.nonzero(ok)[0]
    if rows.size == 0:
        return []
    losses = table.weighted_losses(sample, p)
    return [int(k) for k in rows if losses[k] > eps]


def compression_certifies(cls: HypothesisClassDescriptor, sample: LabelledSample, net: LabelledSample) -> bool:
    """Exact check that consistency with ``net`` forces consistency with ``sample``."""
    pool = set(sample.examples)
    if any(z not in pool for z in net):
        return False
    if not cls.is_realizable(net):
        return True
    name = cls.name
    if name.startswith("halfplanes"):
        for label in (Label.POS, Label.NEG):
            hull = [z.point.coords for z in net if z.label is label]
            pts = [z.point.coords for z in sample if z.label is label]
            if name == "halfplanes2":
                vertices = geometry.convex_hull_2d(hull)
                if not all(geometry.in_convex_polygon(q, vertices) for q in set(pts)):
                    return False
            elif not all(geometry.in_hull(q, hull) for q in set(pts)):
                return False
        return True
    if name == "thresholds":
        pos = [z.point.n for z in net if z.label is Label.POS]
        neg = [z.point.n for z in net if z.label is Label.NEG]
        return all(
            (z.label is Label.POS and pos and z.point.n >= min(pos))
            or (z.label is Label.NEG and neg and z.point.n <= max(neg))
            for z in sample
        )
    return set(net.examples) == pool


@lru_cache(maxsize=4096)
def _certified_compression(cls: HypothesisClassDescriptor, sample: LabelledSample) -> LabelledSample | None:
    net = cls.compression(sample)
    return net if compression_certifies(cls, sample, net) else None


def verify_net(cert: NetCertificate, sample: LabelledSample, p: SampleDistribution, cls: HypothesisClassDescriptor) -> bool:
    if cert.epsilon >= 1:
        return True
    if cert.method == "compression":
        return compression_certifies(cls, sample, cert.subsample)
    return not violating_net_rows(cls, sample, p, cert.subsample, cert.epsilon)


def approximation_discrepancy(cls: HypothesisClassDescriptor, sample: LabelledSample, sub: LabelledSample) -> Fraction:
    """max over effective h of |L_sub(h) - L_S(h)|, exact."""
    table = cls.effective_table(sample)
    full = table.mistake_counts(sample)
    part = table.mistake_counts(sub)
    n, m = len(sample), len(sub)
    # compare integers: |part/m - full/n| = |part*n - full*m| / (n*m)
    worst = int(np.max(np.abs(part.astype(object) * n - full.astype(object) * m)))
    return Fraction(worst, n * m)


def verify_approximation(cert: NetCertificate, sample: LabelledSample, cls: HypothesisClassDescriptor) -> bool:
    if cert.subsample == sample:
        return True
    return approximation_discrepancy(cls, sample, cert.subsample) <= cert.epsilon


# ---------------------------------------------------------------------------
# constructors


def compression_net(sample: LabelledSample, cls: HypothesisClassDescriptor, eps, constants=(8, 8)) -> NetCertificate | None:
    """The compression route alone. It holds for every distribution, so no
    distribution is needed; ``None`` if it is larger than the size target
    (pass ``constants=None`` to skip the size test) or fails certification."""
    eps = Fraction(eps)
    net = _certified_compression(cls, sample)
    if net is None:
        return None
    if constants is not None and len(net) > net_size_target(_vc(cls), eps, *constants):
        return None
    return NetCertificate(net, eps, NetKind.NET, True, 0, "compression")


def epsilon_net(
    sample: LabelledSample,
    p: SampleDistribution,
    cls: HypothesisClassDescriptor,
    eps,
    seed: int = 0,
    method: str = "auto",
    constants: tuple[int, int] = (8, 8),
) -> NetCertificate:
    eps = Fraction(eps)
    if eps <= 0:
        raise NetError("eps must be positive")
    if len(p) != len(sample):
        raise NetError("distribution and sample sizes differ")
    if not cls.is_realizable(sample):
        raise NetError("eps-net requested for a non-realizable sample")
    if eps >= 1:
        return NetCertificate(LabelledSample(), eps, NetKind.NET, True, 0, "vacuous")
    target = net_size_target(_vc(cls), eps, *constants)
    if method in ("auto", "compression"):
        cert = compression_net(sample, cls, eps, None if method == "compression" else constants)
        if cert is not None:
            return cert
        if method == "compression":
            raise NetError("compression failed certification")
    elif method != "draw":
        raise ValueError(f"unknown net method {method!r}")

    rng = random.Random(seed)
    support = [i for i, w in enumerate(p.weights) if w > 0]
    masses = [float(p.weights[i]) for i in support]
    size = target
    for attempt in range(1, MAX_DOUBLINGS + 2):
        if size >= len(support):
            # the whole support: anything consistent with it has zero loss
            net = LabelledSample(tuple(sample[i] for i in support)).distinct()
            return NetCertificate(net, eps, NetKind.NET, True, attempt, "draw")
        picks = sorted(set(rng.choices(support, weights=masses, k=size)))
        net = LabelledSample(tuple(sample[i] for i in picks)).distinct()
        bad = violating_net_rows(cls, sample, p, net, eps)
        if not bad:
            return NetCertificate(net, eps, NetKind.NET, True, attempt, "draw")
        size *= 2
    table = cls.effective_table(sample)
    raise NetError(f"net verification failed; violating hypothesis {table.hypothesis(bad[0])}")


def epsilon_approximation(
    sample: LabelledSample, cls: HypothesisClassDescriptor, eps, seed: int = 0
) -> NetCertificate:
    eps = Fraction(eps)
    if not 0 < eps:
        raise NetError("eps must be positive")
    if len(sample) == 0:
        raise NetError("eps-approximation of an empty sample")
    size = approximation_size_target(_vc(cls), eps)
    rng = random.Random(seed)
    for attempt in range(MAX_DOUBLINGS + 1):
        if size >= len(sample):
            return NetCertificate(sample, eps, NetKind.APPROXIMATION, True, attempt, "whole")
        picks = sorted(rng.choices(range(len(sample)), k=size))
        sub = LabelledSample(tuple(sample[i] for i in picks))
        if approximation_discrepancy(cls, sample, sub) <= eps:
            return NetCertificate(sub, eps, NetKind.APPROXIMATION, True, attempt + 1, "draw")
        size *= 2
    raise NetError("approximation verification budget exhausted")
