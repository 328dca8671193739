"""Shamir-variant threshold sharing with multi-element secrets.

A random polynomial ``f`` of degree < t = n is evaluated at ``n + g`` public
points. The first ``g`` evaluations are the secret, the remaining ``n`` are the
shares, one per channel. Any ``Delta = n - g`` shares reveal nothing about the
secret; all ``n`` determine it. Shares are one-time padded with field elements
drawn from the channel's key stream by rejection sampling.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .field import PrimeField

MAX_ENUMERATION = 200_000


class SchemeError(ValueError):
    pass


class KeyStreamExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class ThresholdScheme:
    field: PrimeField
    n: int
    g: int
    inputs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not 1 <= self.g < self.n:
            raise SchemeError(f"need 1 <= g < n, got n={self.n} g={self.g}")
        if self.field.q <= self.n + self.g:
            raise SchemeError(f"need q > n + g, got q={self.field.q} n+g={self.n + self.g}")
        if not self.inputs:
            object.__setattr__(self, "inputs", tuple(range(self.n + self.g)))
        if len(self.inputs) != self.n + self.g:
            raise SchemeError(f"need {self.n + self.g} inputs, got {len(self.inputs)}")
        if len({x % self.field.q for x in self.inputs}) != len(self.inputs):
            raise SchemeError("inputs must be pairwise distinct field elements")

    @classmethod
    def make(cls, q: int, n: int, g: int) -> ThresholdScheme:
        return cls(PrimeField(q), n, g)

    @property
    def t(self) -> int:
        return self.n

    @property
    def delta(self) -> int:
        return self.n - self.g

    @property
    def secret_inputs(self) -> tuple[int, ...]:
        return self.inputs[: self.g]

    @property
    def share_inputs(self) -> tuple[int, ...]:
        return self.inputs[self.g :]


@dataclass(frozen=True)
class Deal:
    coeffs: tuple[int, ...]
    secret: tuple[int, ...]
    shares: tuple[int, ...]
    inputs: tuple[int, ...]

    def points(self) -> list[tuple[int, int]]:
        return list(zip(self.inputs, self.shares))


def evaluate(coeffs: Sequence[int], x: int, q: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = (acc * x + a) % q
    return acc


def deal_polynomial(scheme: ThresholdScheme, coeffs: Sequence[int]) -> Deal:
    q = scheme.field.q
    if len(coeffs) != scheme.t:
        raise SchemeError(f"polynomial needs {scheme.t} coefficients, got {len(coeffs)}")
    coeffs = tuple(c % q for c in coeffs)
    return Deal(
        coeffs=coeffs,
        secret=tuple(evaluate(coeffs, x, q) for x in scheme.secret_inputs),
        shares=tuple(evaluate(coeffs, x, q) for x in scheme.share_inputs),
        inputs=scheme.share_inputs,
    )


def shamir_deal(scheme: ThresholdScheme, rng: random.Random | int) -> Deal:
    """Draw ``t`` uniform coefficients and deal. Deterministic for an int seed."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    q = scheme.field.q
    return deal_polynomial(scheme, [rng.randrange(q) for _ in range(scheme.t)])


def interpolate(points: Sequence[tuple[int, int]], q: int) -> list[int]:
    """Coefficients (low degree first) of the unique polynomial through ``points``."""
    xs = [x % q for x, _ in points]
    if len(set(xs)) != len(xs):
        raise SchemeError("duplicate interpolation inputs")
    k = len(points)
    coeffs = [0] * k
    for j, (xj, yj) in enumerate(points):
        # basis polynomial prod_{m != j} (x - x_m) / (x_j - x_m)
        basis = [1]
        denom = 1
        for m, (xm, _) in enumerate(points):
            if m == j:
                continue
            basis = [(a - xm * b) % q for a, b in zip([0] + basis, basis + [0])]
            denom = denom * (xj - xm) % q
        scale = yj * pow(denom, q - 2, q) % q
        for i, b in enumerate(basis):
            coeffs[i] = (coeffs[i] + scale * b) % q
    return coeffs


def shamir_recover(scheme: ThresholdScheme, points: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    if len(points) != scheme.n:
        raise SchemeError(f"need exactly {scheme.n} shares, got {len(points)}")
    q = scheme.field.q
    coeffs = interpolate(points, q)
    return tuple(evaluate(coeffs, x, q) for x in scheme.secret_inputs)


# -- padding -------------------------------------------------------------------


def element_from_bits(bits: Sequence[int], pos: int, q: int) -> tuple[int, int]:
    """Read big-endian ``ceil(log2 q)``-bit windows from ``pos`` until one is < q.

    Returns ``(element, new_pos)``; raises KeyStreamExhausted when no full window
    remains.
    """
    w = (q - 1).bit_length()
    while pos + w <= len(bits):
        value = 0
        for b in bits[pos : pos + w]:
            value = (value << 1) | b
        pos += w
        if value < q:
            return value, pos
    raise KeyStreamExhausted(f"key stream exhausted at bit {pos}")


@dataclass
class PadResult:
    ciphertexts: list[int]
    keys: list[int]
    consumed: list[int]


def shamir_pad(shares: Sequence[int], channel_bits: Sequence[Sequence[int]], q: int) -> PadResult:
    """One-time pad each share with a uniform element from its own channel."""
    if len(shares) != len(channel_bits):
        raise SchemeError("one key stream per share is required")
    out = PadResult([], [], [])
    for s, bits in zip(shares, channel_bits):
        k, used = element_from_bits(bits, 0, q)
        out.ciphertexts.append((s + k) % q)
        out.keys.append(k)
        out.consumed.append(used)
    return out


def shamir_unpad(ciphertexts: Sequence[int], keys: Sequence[int], q: int) -> list[int]:
    return [(c - k) % q for c, k in zip(ciphertexts, keys)]


# -- leakage ---------------------------------------------------------------------


@dataclass
class LeakageReport:
    q: int
    consistent: int
    per_coordinate: list[Counter]
    joint: Counter

    def coordinate_uniform(self) -> bool:
        return all(len(c) == self.q and len(set(c.values())) == 1 for c in self.per_coordinate)

    def joint_uniform(self) -> bool:
        g = len(self.per_coordinate)
        return len(self.joint) == self.q**g and len(set(self.joint.values())) == 1

    def determined(self) -> bool:
        return len(self.joint) == 1


def secret_distribution(scheme: ThresholdScheme, exposed: Mapping[int, int]) -> LeakageReport:
    """Enumerate every polynomial agreeing with the exposed shares.

    ``exposed`` maps a 0-based share index to its value.
    """
    q, t = scheme.field.q, scheme.t
    if q**t > MAX_ENUMERATION:
        raise SchemeError(f"q^t = {q**t} polynomials is too many to enumerate")
    checks = [(scheme.share_inputs[i], v % q) for i, v in exposed.items()]
    per = [Counter() for _ in range(scheme.g)]
    joint: Counter = Counter()
    consistent = 0
    for coeffs in product(range(q), repeat=t):
        if all(evaluate(coeffs, x, q) == v for x, v in checks):
            consistent += 1
            secret = tuple(evaluate(coeffs, x, q) for x in scheme.secret_inputs)
            joint[secret] += 1
            for c, s in zip(per, secret):
                c[s] += 1
    return LeakageReport(q, consistent, per, joint)


def shamir_leakage_check(scheme: ThresholdScheme, exposed_share_count: int, seed: int = 0) -> LeakageReport:
    """Deal once, expose the first ``exposed_share_count`` shares, enumerate."""
    if not 0 <= exposed_share_count <= scheme.n:
        raise SchemeError(f"exposed share count must lie in [0, {scheme.n}]")
    deal = shamir_deal(scheme, seed)
    return secret_distribution(scheme, {i: deal.shares[i] for i in range(exposed_share_count)})
