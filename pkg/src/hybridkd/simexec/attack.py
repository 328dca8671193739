"""Exact attacker for executed protocols.

Eve knows every public announcement (a GF(2) linear relation), the streams of
compromised links, and the views of compromised relay nodes. For each
secret-sharing round she learns the output iff the channels whose pads she can
fully derive form a qualified set; recovered outputs become known variables
and may unlock further layers, so the decision is iterated to a fixpoint.

The GF(2) system splits into independent connected components (variables tied
together by some announcement, view row or query). Each component is solved
on its own, and components with identical local structure share a cache keyed
by which of their knowledge sources are active.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable

from ..gf2 import Gf2Span, bit_indices
from .execute import Execution


@dataclass(frozen=True)
class AttackResult:
    recovered_bit_count: int
    key_length: int
    recovered_rounds: int = 0

    @property
    def success(self) -> bool:
        return self.recovered_bit_count >= 1

    @property
    def full_key(self) -> bool:
        return self.recovered_bit_count == self.key_length


@dataclass
class _Group:
    sig: int
    labels: tuple
    final_masks: Counter
    windows: list  # (query bit, window ref)


class AttackModel:
    def __init__(self, ex: Execution):
        self.ex = ex
        parent = list(range(ex.n_vars))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def tie(form: int) -> None:
            bits = bit_indices(form)
            r0 = find(bits[0])
            for b in bits[1:]:
                rb = find(b)
                if rb != r0:
                    parent[rb] = r0

        queries: list[tuple[int, object]] = []  # (form, None for final | window ref)
        for f in ex.final_forms:
            queries.append((f, None))
        self.window_width: dict[tuple[int, int, int], int] = {}
        for li, layer in enumerate(ex.ss_layers):
            for ri, rnd in enumerate(layer.rounds):
                for ch, win in enumerate(rnd.windows):
                    self.window_width[(li, ri, ch)] = len(win)
                    for f in win:
                        queries.append((f, (li, ri, ch)))

        sources: dict[object, list[int]] = {}
        for link_id, (start, length) in ex.link_vars.items():
            sources[link_id] = [1 << v for v in range(start, start + length)]
        for node, forms in ex.node_views.items():
            sources[node] = list(forms)
        for li, layer in enumerate(ex.ss_layers):
            for ri, rnd in enumerate(layer.rounds):
                sources[("ss", li, ri)] = [1 << v for v in rnd.outputs]

        for form, _ in ex.announcements:
            tie(form)
        for rows in sources.values():
            for f in rows:
                tie(f)
        for f, _ in queries:
            tie(f)

        comp_queries: dict[int, list[int]] = defaultdict(list)
        for qid, (f, _) in enumerate(queries):
            comp_queries[find(f.bit_length() - 1)].append(qid)
        comp_base: dict[int, list[int]] = defaultdict(list)
        for form, _ in ex.announcements:
            r = find(form.bit_length() - 1)
            if r in comp_queries:
                comp_base[r].append(form)
        comp_src: dict[int, dict[object, list[int]]] = defaultdict(lambda: defaultdict(list))
        for label, rows in sources.items():
            for f in rows:
                r = find(f.bit_length() - 1)
                if r in comp_queries:
                    comp_src[r][label].append(f)

        self.signatures: list[tuple] = []
        sig_ids: dict[tuple, int] = {}
        groups: dict[tuple, _Group] = {}
        for root, qids in comp_queries.items():
            allv = 0
            for f in comp_base[root]:
                allv |= f
            for rows in comp_src[root].values():
                for f in rows:
                    allv |= f
            for qid in qids:
                allv |= queries[qid][0]
            local = {v: i for i, v in enumerate(bit_indices(allv))}

            def loc(form: int) -> int:
                out = 0
                for v in bit_indices(form):
                    out |= 1 << local[v]
                return out

            base = tuple(sorted(loc(f) for f in comp_base[root]))
            srcs = sorted(
                (tuple(sorted(loc(f) for f in rows)), repr(label), label)
                for label, rows in comp_src[root].items()
            )
            qs = sorted((loc(queries[qid][0]), qid) for qid in qids)
            sig = (base, tuple(s[0] for s in srcs), tuple(f for f, _ in qs))
            sid = sig_ids.get(sig)
            if sid is None:
                sid = sig_ids[sig] = len(self.signatures)
                self.signatures.append(sig)
            labels = tuple(s[2] for s in srcs)
            group = groups.get((sid, labels))
            if group is None:
                group = groups[(sid, labels)] = _Group(sid, labels, Counter(), [])
            fmask = 0
            for i, (_, qid) in enumerate(qs):
                ref = queries[qid][1]
                if ref is None:
                    fmask |= 1 << i
                else:
                    group.windows.append((i, ref))
            if fmask:
                group.final_masks[fmask] += 1
        self.groups = list(groups.values())
        self._base_spans = [Gf2Span(sig[0]) for sig in self.signatures]
        self._cache: dict[tuple[int, int], int] = {}

    def _solve(self, sid: int, flags: int) -> int:
        key = (sid, flags)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        _, src_rows, qforms = self.signatures[sid]
        span = self._base_spans[sid].copy()
        for i, rows in enumerate(src_rows):
            if flags >> i & 1:
                for r in rows:
                    span.add(r)
        known = 0
        for i, f in enumerate(qforms):
            if span.contains(f):
                known |= 1 << i
        self._cache[key] = known
        return known

    def attack(self, compromised: Iterable[str]) -> AttackResult:
        active = set(compromised)
        layers = self.ex.ss_layers
        while True:
            final_known = 0
            win_bits: Counter = Counter()
            for g in self.groups:
                flags = 0
                for i, label in enumerate(g.labels):
                    if label in active:
                        flags |= 1 << i
                res = self._solve(g.sig, flags)
                if not res:
                    continue
                for mask, count in g.final_masks.items():
                    final_known += count * bin(res & mask).count("1")
                for bit, ref in g.windows:
                    if res >> bit & 1:
                        win_bits[ref] += 1
            grew = False
            for li, layer in enumerate(layers):
                for ri in range(len(layer.rounds)):
                    label = ("ss", li, ri)
                    if label in active:
                        continue
                    chans = frozenset(
                        ch for ch in range(layer.n) if win_bits[(li, ri, ch)] == self.window_width[(li, ri, ch)]
                    )
                    if chans and layer.decide(chans):
                        active.add(label)
                        grew = True
            if not grew:
                rounds = sum(1 for a in active if isinstance(a, tuple))
                return AttackResult(final_known, self.ex.key_length, rounds)


def attack(execution: Execution, compromised: Iterable[str]) -> AttackResult:
    """Decide what Eve learns of the final key from ``compromised`` elements."""
    if execution._attack_model is None:
        execution._attack_model = AttackModel(execution)
    return execution._attack_model.attack(compromised)
