"""Bit-level execution of protocol trees.

Every link bit is a GF(2) variable. Each bit flowing through the tree carries
its concrete value at both ends, its symbolic linear form over the variables,
and its provenance (the link bits spent to produce it). Secret-sharing layers
are not GF(2)-linear, so their output bits are fresh variables; the attacker
learns them only by decrypting a qualified set of shares for that round.

Combinators:

* Xor: position-wise XOR, truncated to the shortest child.
* Series: output is the first child's key; relay ``M_j`` announces
  ``c_{j-1} ^ c_j`` position-wise; Bob unmasks from the last child.
* Bundle: children multiplexed in blocks of ``block`` bits, whole blocks only,
  in a public seed-derived order. A fixed order (plain concatenation or round
  robin) would keep portions of sibling bundles from ever lining up under an
  Xor. The block is a multiple of every secret-sharing window width in the
  tree so sampling windows never straddle two children.
* SecretShare: per round, one padded share per channel; ``g`` (threshold) or
  one (linear code) field elements out, each serialised to ``ceil(log2 q)`` bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from ..gfss.field import PrimeField, next_prime
from ..gfss.lincode import LinearCode, find_code_for_access, lc_deal, lc_recover, lc_recovery_vector
from ..gfss.shamir import ThresholdScheme, shamir_deal, shamir_recover
from ..netgraph import (
    Bundle,
    Leaf,
    NetworkGraph,
    ProtocolTree,
    SecretShare,
    Series,
    Threshold,
    Xor,
    elements,
    validate_tree,
)
from .streams import derived_rng, digest_bits, key_stream


class InsufficientKeyMaterial(RuntimeError):
    pass


@dataclass
class Stream:
    alice: list[int]
    bob: list[int]
    forms: list[int]
    prov: list[int]

    def __len__(self) -> int:
        return len(self.alice)

    def head(self, n: int) -> Stream:
        return Stream(self.alice[:n], self.bob[:n], self.forms[:n], self.prov[:n])


@dataclass
class SsRound:
    windows: list[list[int]]  # per channel: forms of the accepted window's bits
    outputs: list[int]  # fresh variable ids


@dataclass
class SsLayer:
    path: str
    q: int
    n: int
    per_round: int
    decide: Callable[[frozenset], bool] = field(repr=False)
    rounds: list[SsRound] = field(default_factory=list)
    channel_bits: list[int] = field(default_factory=list)

    @property
    def elements_out(self) -> int:
        return self.per_round * len(self.rounds)

    @property
    def padded_elements(self) -> int:
        return self.n * len(self.rounds)


@dataclass
class Execution:
    tree: ProtocolTree
    seed: int
    rounds: int
    alice_key: list[int]
    bob_key: list[int]
    final_forms: list[int]
    announcements: list[tuple[int, int]]  # (form, value)
    node_views: dict[str, list[int]]
    link_vars: dict[str, tuple[int, int]]  # link id -> (first var, length)
    var_values: int  # bitmask of concrete variable values
    n_vars: int
    ss_layers: list[SsLayer]
    consumed: dict[str, int]
    universe: list[str]
    _attack_model: object = field(default=None, repr=False)

    @property
    def key_length(self) -> int:
        return len(self.alice_key)

    def digest(self) -> str:
        return digest_bits(self.alice_key)


class _Builder:
    def __init__(self, seed: int, block: int, streams: Mapping[str, Sequence[int]]):
        self.seed = seed
        self.block = block
        self.streams = streams
        self.n_vars = 0
        self.values = 0
        self.link_vars: dict[str, tuple[int, int]] = {}
        self.announcements: list[tuple[int, int]] = []
        self.node_views: dict[str, list[int]] = {}
        self.ss_layers: list[SsLayer] = []

    def fresh(self, value: int) -> int:
        v = self.n_vars
        self.n_vars += 1
        if value:
            self.values |= 1 << v
        return v

    def leaf(self, link_id: str, length: int) -> Stream:
        if link_id in self.streams:
            bits = [int(b) & 1 for b in self.streams[link_id]]
            length = len(bits)
        else:
            bits = key_stream(self.seed, link_id, length)
        start = self.n_vars
        self.link_vars[link_id] = (start, length)
        forms = []
        for b in bits:
            forms.append(1 << self.fresh(b))
        return Stream(list(bits), list(bits), forms, list(forms))

    def run(self, tree: ProtocolTree, lengths: Mapping[str, int], path: str = "r") -> Stream:
        if isinstance(tree, Leaf):
            return self.leaf(tree.link_id, lengths[tree.link_id])
        kids = [self.run(c, lengths, f"{path}.{i}") for i, c in enumerate(tree.children)]
        if isinstance(tree, Xor):
            return self._xor(kids)
        if isinstance(tree, Series):
            return self._series(kids, tree.via)
        if isinstance(tree, Bundle):
            return self._bundle(kids, path)
        assert isinstance(tree, SecretShare)
        return self._secret_share(tree, kids, path)

    def _xor(self, kids: list[Stream]) -> Stream:
        n = min(len(k) for k in kids)
        out = kids[0].head(n)
        for k in kids[1:]:
            for p in range(n):
                out.alice[p] ^= k.alice[p]
                out.bob[p] ^= k.bob[p]
                out.forms[p] ^= k.forms[p]
                out.prov[p] |= k.prov[p]
        return out

    def _series(self, kids: list[Stream], via: tuple[str, ...]) -> Stream:
        n = min(len(k) for k in kids)
        kids = [k.head(n) for k in kids]
        for j, m in enumerate(via, start=1):
            left, right = kids[j - 1], kids[j]
            # relay holds the far end of the left hop and the near end of the right hop
            for p in range(n):
                self.announcements.append((left.forms[p] ^ right.forms[p], left.bob[p] ^ right.alice[p]))
            view = self.node_views.setdefault(m, [])
            view.extend(left.forms)
            view.extend(right.forms)
        # Bob unmasks hop by hop from his own end
        bob = list(kids[-1].bob)
        start = len(self.announcements) - n * len(via)
        for j in range(len(via)):
            block = self.announcements[start + j * n : start + (j + 1) * n]
            bob = [b ^ a for b, (_, a) in zip(bob, block)]
        prov = list(kids[0].prov)
        for k in kids[1:]:
            prov = [a | b for a, b in zip(prov, k.prov)]
        return Stream(list(kids[0].alice), bob, list(kids[0].forms), prov)

    def _bundle(self, kids: list[Stream], path: str) -> Stream:
        B = self.block
        rng = derived_rng(self.seed, f"bundle:{path}")
        out = Stream([], [], [], [])
        ptr = [0] * len(kids)
        while True:
            ready = [i for i, k in enumerate(kids) if ptr[i] + B <= len(k)]
            if not ready:
                return out
            i = rng.choice(ready)
            sl = slice(ptr[i], ptr[i] + B)
            k = kids[i]
            out.alice.extend(k.alice[sl])
            out.bob.extend(k.bob[sl])
            out.forms.extend(k.forms[sl])
            out.prov.extend(k.prov[sl])
            ptr[i] += B

    def _secret_share(self, tree: SecretShare, kids: list[Stream], path: str) -> Stream:
        n = len(kids)
        scheme = tree.scheme
        if isinstance(scheme, Threshold):
            q = scheme.q or next_prime(n + scheme.g)
            ts = ThresholdScheme(PrimeField(q), n, scheme.g)
            per_round = scheme.g
            decide = lambda chans: len(chans) == n  # noqa: E731
        else:
            code = scheme.code or find_code_for_access(scheme.sets, n)
            q = code.q
            per_round = 1
            qualified: dict[frozenset, bool] = {}

            def decide(chans: frozenset, code: LinearCode = code) -> bool:
                if chans not in qualified:
                    qualified[chans] = lc_recovery_vector(code, [c + 1 for c in chans]) is not None
                return qualified[chans]

        w = (q - 1).bit_length()
        layer = SsLayer(path, q, n, per_round, decide, channel_bits=[0] * n)
        self.ss_layers.append(layer)
        rng = derived_rng(self.seed, f"ss:{path}")
        ptr = [0] * n
        out = Stream([], [], [], [])
        while True:
            picks = []
            for i, k in enumerate(kids):
                got = _sample(k, ptr[i], q, w)
                if got is None:
                    break
                picks.append(got)
            if len(picks) < n:
                break
            windows, prov = [], 0
            pads_a, pads_b = [], []
            for i, (ka, kb, start, end) in enumerate(picks):
                pads_a.append(ka)
                pads_b.append(kb)
                windows.append(kids[i].forms[end - w : end])
                for p in range(start, end):
                    prov |= kids[i].prov[p]
                layer.channel_bits[i] += end - start
                ptr[i] = end

            if isinstance(scheme, Threshold):
                deal = shamir_deal(ts, rng)
                cipher = [(s + k) % q for s, k in zip(deal.shares, pads_a)]
                got_shares = [(c - k) % q for c, k in zip(cipher, pads_b)]
                secret_a = list(deal.secret)
                secret_b = list(shamir_recover(ts, list(zip(deal.inputs, got_shares))))
            else:
                m = rng.randrange(q)
                deal = lc_deal(code, m, rng)
                cipher = [(s + k) % q for s, k in zip(deal.shares, pads_a)]
                got_shares = {j + 1: (c - k) % q for j, (c, k) in enumerate(zip(cipher, pads_b))}
                secret_a = [deal.secret]
                secret_b = [lc_recover(code, got_shares)]

            outputs = []
            for ea, eb in zip(secret_a, secret_b):
                for shift in range(w - 1, -1, -1):
                    ba, bb = (ea >> shift) & 1, (eb >> shift) & 1
                    v = self.fresh(ba)
                    outputs.append(v)
                    out.alice.append(ba)
                    out.bob.append(bb)
                    out.forms.append(1 << v)
                    out.prov.append(prov)
            layer.rounds.append(SsRound(windows, outputs))
        return out


def _sample(k: Stream, pos: int, q: int, w: int):
    """Rejection-sample one element from both ends' copies of a channel stream."""
    start = pos
    while pos + w <= len(k):
        va = vb = 0
        for p in range(pos, pos + w):
            va = (va << 1) | k.alice[p]
            vb = (vb << 1) | k.bob[p]
        pos += w
        if va < q:
            return va, vb, start, pos
    return None


def window_widths(tree: ProtocolTree) -> list[int]:
    if isinstance(tree, Leaf):
        return []
    out = [w for c in tree.children for w in window_widths(c)]
    if isinstance(tree, SecretShare):
        n = len(tree.children)
        if isinstance(tree.scheme, Threshold):
            q = tree.scheme.q or next_prime(n + tree.scheme.g)
        else:
            q = (tree.scheme.code or find_code_for_access(tree.scheme.sets, n)).q
        out.append((q - 1).bit_length())
    return out


def execute(
    tree: ProtocolTree,
    graph: NetworkGraph,
    seed: int,
    rounds: int,
    bits_per_tick: Mapping[str, int] | None = None,
    streams: Mapping[str, Sequence[int]] | None = None,
) -> Execution:
    """Run the protocol for ``rounds`` ticks.

    Each link supplies ``bits_per_tick[link]`` bits per tick (default 1), so
    link ``e`` contributes ``rounds * bits_per_tick[e]`` bits in total.
    ``streams`` replaces the seeded stream of the named links verbatim.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    validate_tree(tree, graph)
    bpt = dict(bits_per_tick or {})
    lengths = {}
    for link_id in elements(tree):
        if graph.has_link(link_id):
            lengths[link_id] = rounds * bpt.get(link_id, 1)
    block = math.lcm(1, *window_widths(tree))
    b = _Builder(seed, block, dict(streams or {}))
    final = b.run(tree, lengths)
    if not final.alice:
        raise InsufficientKeyMaterial(f"no output key after {rounds} rounds; increase rounds or link rates")

    spent = 0
    for p in final.prov:
        spent |= p
    consumed = {}
    for link_id, (start, length) in b.link_vars.items():
        consumed[link_id] = bin((spent >> start) & ((1 << length) - 1)).count("1")

    return Execution(
        tree=tree,
        seed=seed,
        rounds=rounds,
        alice_key=final.alice,
        bob_key=final.bob,
        final_forms=final.forms,
        announcements=b.announcements,
        node_views=b.node_views,
        link_vars=b.link_vars,
        var_values=b.values,
        n_vars=b.n_vars,
        ss_layers=b.ss_layers,
        consumed=consumed,
        universe=elements(tree),
    )
