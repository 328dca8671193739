"""Relay protocol through a central key-management node.

Alice and Bob are joined by a chain of quantum links ``q_0..q_n`` through
relays ``r_1..r_n``. Every hop also has a KEM link ``k_i`` to the central node
``K``, and Bob has ``k_{n+1}``. Alice announces ``m_0 = s ^ q_0 ^ k_0`` and
relay ``r_i`` announces ``m_i = q_{i-1} ^ q_i ^ k_i``. ``K`` strips the KEM
pads, accumulates ``c = s ^ q_n`` and sends ``c ^ k_{n+1}`` to Bob.

Eve's knowledge is a GF(2) row space: each announcement is a row, each known
key contributes unit rows, and ``s`` is learned iff its indicator lies in the
span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable

from .gf2 import Gf2Span, evaluate
from .simexec.streams import key_stream
from .vulnset import is_compromised, minimize


def q_id(i: int) -> str:
    return f"q{i}"


def r_id(i: int) -> str:
    return f"r{i}"


def k_id(i: int) -> str:
    return f"k{i}"


CENTRAL = "K"


@dataclass(frozen=True)
class KmsInstance:
    n: int
    L: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one relay")
        if self.L < 1:
            raise ValueError("key length must be >= 1")

    @property
    def quantum(self) -> list[str]:
        return [q_id(i) for i in range(self.n + 1)]

    @property
    def relays(self) -> list[str]:
        return [r_id(i) for i in range(1, self.n + 1)]

    @property
    def kem(self) -> list[str]:
        return [k_id(i) for i in range(self.n + 2)]

    @property
    def universe(self) -> list[str]:
        """Attackable elements; the end users are excluded."""
        return self.quantum + self.relays + self.kem + [CENTRAL]

    # variable layout: s, q_0..q_n, k_0..k_{n+1}
    def var(self, name: str) -> int:
        if name == "s":
            return 1
        idx = int(name[1:])
        if name[0] == "q":
            return 1 << (1 + idx)
        return 1 << (self.n + 2 + idx)

    def announcement_forms(self) -> list[int]:
        v = self.var
        forms = [v("s") ^ v(q_id(0)) ^ v(k_id(0))]
        for i in range(1, self.n + 1):
            forms.append(v(q_id(i - 1)) ^ v(q_id(i)) ^ v(k_id(i)))
        return forms

    def c_form(self) -> int:
        return self.var("s") ^ self.var(q_id(self.n))

    def bob_form(self) -> int:
        return self.c_form() ^ self.var(k_id(self.n + 1))

    def view_forms(self, element: str) -> list[int]:
        """Rows Eve gains by compromising ``element``."""
        if element == CENTRAL:
            ann = self.announcement_forms()
            return [m ^ self.var(k_id(i)) for i, m in enumerate(ann)] + [self.c_form()]
        if element.startswith("r"):
            i = int(element[1:])
            return [self.var(q_id(i - 1)), self.var(q_id(i)), self.var(k_id(i))]
        if element in self.quantum or element in self.kem:
            return [self.var(element)]
        raise KeyError(f"unknown KMS element {element!r}")


@dataclass
class KmsTranscript:
    instance: KmsInstance
    s: list[int]
    keys: dict[str, list[int]]
    announcements: list[list[int]]  # m_0..m_n
    bob_message: list[int]
    recovered: list[int]
    views: dict[str, list[list[int]]] = field(default_factory=dict)

    def assignment(self, p: int) -> int:
        """Bitmask of every variable's value at bit position ``p``."""
        inst = self.instance
        out = inst.var("s") if self.s[p] else 0
        for name, bits in self.keys.items():
            if bits[p]:
                out |= inst.var(name)
        return out


def _xor(*rows: list[int]) -> list[int]:
    out = list(rows[0])
    for r in rows[1:]:
        out = [a ^ b for a, b in zip(out, r)]
    return out


def kms_run(n: int, L: int, seed: int, keys: dict[str, list[int]] | None = None) -> KmsTranscript:
    """Run the relay protocol; ``keys`` (with ``"s"``) overrides the seeded streams."""
    inst = KmsInstance(n, L)
    given = dict(keys or {})
    names = ["s"] + inst.quantum + inst.kem
    bits = {}
    for name in names:
        bits[name] = list(given[name]) if name in given else list(key_stream(seed, f"kms:{name}", L))
        if len(bits[name]) != L:
            raise ValueError(f"key {name} has length {len(bits[name])}, expected {L}")
    s = bits.pop("s")
    q = [bits[q_id(i)] for i in range(n + 1)]
    k = [bits[k_id(i)] for i in range(n + 2)]

    m = [_xor(s, q[0], k[0])] + [_xor(q[i - 1], q[i], k[i]) for i in range(1, n + 1)]
    c = _xor(*[_xor(m[i], k[i]) for i in range(n + 1)])
    bob_message = _xor(c, k[n + 1])
    recovered = _xor(bob_message, k[n + 1], q[n])

    views = {r_id(i): [q[i - 1], q[i], k[i]] for i in range(1, n + 1)}
    views[CENTRAL] = [_xor(m[i], k[i]) for i in range(n + 1)] + [c]
    return KmsTranscript(inst, s, bits, m, bob_message, recovered, views)


@dataclass(frozen=True)
class KmsAttackResult:
    success: bool
    s: list[int] | None = None


def _knowledge(inst: KmsInstance, compromised: Iterable[str]) -> list[int]:
    rows = inst.announcement_forms() + [inst.bob_form()]
    for e in compromised:
        rows.extend(inst.view_forms(e))
    return rows


def kms_derivable(inst: KmsInstance, compromised: Iterable[str]) -> bool:
    return Gf2Span(_knowledge(inst, compromised)).contains(inst.var("s"))


def kms_attack(transcript: KmsTranscript, compromised: Iterable[str]) -> KmsAttackResult:
    """Recover ``s`` from public data plus compromised keys and views, if possible."""
    inst = transcript.instance
    rows = _knowledge(inst, compromised)
    if not Gf2Span(rows).contains(inst.var("s")):
        return KmsAttackResult(False)
    # carry each row's observed value in bit 0 and reduce the unit vector of s
    s_bits = []
    for p in range(inst.L):
        values = transcript.assignment(p)
        span = Gf2Span((r << 1) | evaluate(r, values) for r in rows)
        s_bits.append(span.reduce(inst.var("s") << 1) & 1)
    return KmsAttackResult(True, s_bits)


# -- vulnerability formulas ----------------------------------------------------


def kms_families(n: int, amended: bool = False) -> dict[str, list[frozenset]]:
    """The four families V1..V4, unminimised.

    With ``amended`` the relay family uses ``{r_i, k_0..k_{i-1}}``: the relay
    already holds ``k_i`` itself, so the upstream KEM pads up to ``i - 1``
    suffice.
    """
    if n < 1:
        raise ValueError("need at least one relay")
    V1 = [frozenset({CENTRAL, q_id(i)}) for i in range(n + 1)]
    V2 = [frozenset({CENTRAL, r_id(i)}) for i in range(1, n + 1)]
    V3, V4 = [], []
    for i in range(n + 1):
        V3.append(frozenset({q_id(i)} | {k_id(j) for j in range(i + 1)}))
        V3.append(frozenset({q_id(i)} | {k_id(j) for j in range(i + 1, n + 2)}))
    for i in range(1, n + 1):
        upto = i if amended else i + 1
        V4.append(frozenset({r_id(i)} | {k_id(j) for j in range(upto)}))
        V4.append(frozenset({r_id(i)} | {k_id(j) for j in range(i + 1, n + 2)}))
    return {"V1": V1, "V2": V2, "V3": V3, "V4": V4}


def kms_vuln(n: int, amended: bool = False) -> frozenset:
    fams = kms_families(n, amended)
    return minimize(v for fam in fams.values() for v in fam)


@dataclass
class KmsComparison:
    n: int
    subsets: int
    formula_only: list[frozenset]  # formulas say compromised, oracle says safe
    oracle_only: list[frozenset]  # oracle recovers s, formulas miss it
    oracle_minimal: frozenset
    amended_agrees: bool

    @property
    def agrees(self) -> bool:
        return not self.formula_only and not self.oracle_only


def kms_compare(n: int) -> KmsComparison:
    """Check the formulas against the GF(2) oracle on every subset of elements."""
    inst = KmsInstance(n, 1)
    universe = inst.universe
    formula, amended = kms_vuln(n), kms_vuln(n, amended=True)
    formula_only, oracle_only, hits = [], [], []
    amended_ok = True
    count = 0
    for r in range(len(universe) + 1):
        for combo in combinations(universe, r):
            S = frozenset(combo)
            count += 1
            got = kms_derivable(inst, S)
            want = is_compromised(formula, S)
            if got:
                hits.append(S)
            if got and not want:
                oracle_only.append(S)
            elif want and not got:
                formula_only.append(S)
            if got != is_compromised(amended, S):
                amended_ok = False
    return KmsComparison(n, count, formula_only, oracle_only, minimize(hits), amended_ok)


def kms_masking_check(n: int) -> dict[str, bool]:
    """For L = 1, does every relay view plus the public data leave both values of s open?"""
    inst = KmsInstance(n, 1)
    names = ["s"] + inst.quantum + inst.kem
    out = {}
    for relay in inst.relays:
        seen: dict[tuple, set[int]] = {}
        for bits in product((0, 1), repeat=len(names)):
            keys = {name: [b] for name, b in zip(names, bits)}
            t = kms_run(n, 1, 0, keys)
            obs = (tuple(m[0] for m in t.announcements), t.bob_message[0], tuple(v[0] for v in t.views[relay]))
            seen.setdefault(obs, set()).add(t.s[0])
        out[relay] = all(len(v) == 2 for v in seen.values())
    return out
