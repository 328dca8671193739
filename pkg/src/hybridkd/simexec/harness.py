"""Cross-check the vulnerability algebra and rate rules against execution."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .. import ratecalc, vulnset
from ..gfss.field import rank
from ..gfss.lincode import CodeError, LinearCode, access_sets_for_children
from ..netgraph import (
    AccessStructure,
    Bundle,
    ExplicitRate,
    Leaf,
    Link,
    LinkKind,
    NetworkGraph,
    ProtocolTree,
    SecretShare,
    Series,
    Threshold,
    Xor,
    elements,
)
from .attack import attack
from .execute import Execution, execute


@dataclass
class OracleReport:
    universe: list[str]
    subsets_checked: int
    mismatches: list[tuple[frozenset, bool, bool]] = field(default_factory=list)
    expected_bits: Fraction | None = None
    measured_bits: int = 0

    @property
    def ok(self) -> bool:
        rate_ok = self.expected_bits is None or self.expected_bits == self.measured_bits
        return not self.mismatches and rate_ok


def has_secret_sharing(tree: ProtocolTree) -> bool:
    if isinstance(tree, Leaf):
        return False
    return isinstance(tree, SecretShare) or any(has_secret_sharing(c) for c in tree.children)


def oracle_check(
    tree: ProtocolTree,
    graph: NetworkGraph,
    seed: int,
    rounds: int = 512,
    execution: Execution | None = None,
    max_exhaustive: int = 14,
    samples: int = 2000,
) -> OracleReport:
    """Compare ``attack`` with ``is_compromised`` on every subset of the elements.

    Universes above ``max_exhaustive`` elements are sampled instead. For trees
    without secret sharing the output length must also equal ``rounds`` times
    the rate rules evaluated at one bit per tick per link.
    """
    ex = execution or execute(tree, graph, seed, rounds)
    v_min = vulnset.protocol_vuln(tree, graph)
    universe = elements(tree)
    if len(universe) <= max_exhaustive:
        subsets = (frozenset(c) for r in range(len(universe) + 1) for c in combinations(universe, r))
    else:
        rng = random.Random(seed)
        subsets = (frozenset(x for x in universe if rng.random() < 0.5) for _ in range(samples))
    report = OracleReport(universe, 0)
    for s in subsets:
        report.subsets_checked += 1
        got = attack(ex, s).success
        want = vulnset.is_compromised(v_min, s)
        if got != want:
            report.mismatches.append((s, got, want))
    report.measured_bits = ex.key_length
    if not has_secret_sharing(tree):
        unit = {e: Fraction(1) for e in ex.link_vars}
        report.expected_bits = ex.rounds * ratecalc.tree_rate(tree, unit)
    return report


# -- random instances ----------------------------------------------------------


class _Gen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.nodes = ["A", "B"]
        self.links: list[Link] = []

    def node(self) -> str:
        name = f"N{len(self.nodes) - 1}"
        self.nodes.append(name)
        return name

    def link(self, a: str, b: str) -> Leaf:
        kind = self.rng.choice([LinkKind.QKD, LinkKind.KEM])
        link_id = f"{kind.value[0]}{len(self.links) + 1}"
        self.links.append(Link(link_id, kind, (a, b), ExplicitRate(1.0)))
        return Leaf(link_id)

    def split(self, total: int, k: int) -> list[int]:
        cuts = sorted(self.rng.sample(range(1, total), k - 1))
        return [b - a for a, b in zip([0] + cuts, cuts + [total])]

    def build(self, a: str, b: str, budget: int, depth: int = 0) -> ProtocolTree:
        rng = self.rng
        if budget < 2 or depth >= 3 or rng.random() < 0.15:
            return self.link(a, b)
        op = rng.choice(["xor", "bundle", "series", "ss", "ss"])
        if op == "series":
            if budget < 3:
                return self.link(a, b)
            k = rng.randint(2, min(3, (budget + 1) // 2))
            via = [self.node() for _ in range(k - 1)]
            hops = [a] + via + [b]
            sizes = self.split(budget - (k - 1), k)
            kids = [self.build(hops[i], hops[i + 1], sizes[i], depth + 1) for i in range(k)]
            return Series(tuple(kids), tuple(via))
        k = rng.randint(2, min(4, budget))
        sizes = self.split(budget, k)
        kids = tuple(self.build(a, b, s, depth + 1) for s in sizes)
        if op == "xor":
            return Xor(kids)
        if op == "bundle":
            return Bundle(kids)
        if rng.random() < 0.5:
            return SecretShare(kids, Threshold(rng.randint(1, k - 1)))
        code = self.random_code(k)
        if code is None:
            return SecretShare(kids, Threshold(rng.randint(1, k - 1)))
        sets = tuple(sorted(access_sets_for_children(code), key=sorted))
        return SecretShare(kids, AccessStructure(sets, code))

    def random_code(self, n_children: int) -> LinearCode | None:
        rng = self.rng
        n = n_children + 1
        for _ in range(50):
            q = rng.choice([2, 3, 5])
            k = rng.randint(1, n - 1)
            G = [[rng.randrange(q) for _ in range(n)] for _ in range(k)]
            if rank(G, q) != k or not any(row[0] for row in G):
                continue
            try:
                code = LinearCode.from_generator(q, G)
                if access_sets_for_children(code):
                    return code
            except (CodeError, ValueError):
                continue
        return None


def random_protocol(rng: random.Random | int, max_elements: int = 10) -> tuple[NetworkGraph, ProtocolTree]:
    """A random valid network and tree using at most ``max_elements`` links and relays."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    gen = _Gen(rng)
    tree = gen.build("A", "B", rng.randint(min(2, max_elements), max_elements))
    graph = NetworkGraph(tuple(gen.nodes), tuple(gen.links))
    return graph, tree
