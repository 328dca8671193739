"""Vulnerability-set algebra over protocol trees.

A vulnerability is a frozenset of element ids (links or nodes). A vulnerability
set is a set of those; it is *minimal* when it is an antichain under inclusion.
The total set of vulnerabilities is never materialised: it is the upward
closure of the minimal one, which is what :func:`is_compromised` tests.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .netgraph import (
    Bundle,
    Leaf,
    Link,
    NetworkGraph,
    ProtocolTree,
    SecretShare,
    Series,
    Threshold,
    Xor,
    validate_tree,
)

Vulnerability = frozenset
VulnerabilitySet = frozenset


def vset(*members: Iterable[str]) -> VulnerabilitySet:
    """Shorthand: ``vset({"a"}, {"b", "c"})``."""
    return frozenset(frozenset(m) for m in members)


def minimize(vs: Iterable[frozenset]) -> VulnerabilitySet:
    """Drop every member that has a strict subset in ``vs``."""
    members = sorted(set(vs), key=len)
    kept: list[frozenset] = []
    for m in members:
        if not any(k <= m for k in kept):
            kept.append(m)
    return frozenset(kept)


def leaf_vuln(link: Link | str) -> VulnerabilitySet:
    link_id = link if isinstance(link, str) else link.id
    return frozenset({frozenset({link_id})})


def series_vuln(child_sets: Sequence[VulnerabilitySet], via: Sequence[str]) -> VulnerabilitySet:
    if len(via) != len(child_sets) - 1:
        raise ValueError(f"{len(child_sets)} children need {len(child_sets) - 1} via nodes")
    out: set[frozenset] = set()
    for vs in child_sets:
        out.update(vs)
    out.update(frozenset({m}) for m in via)
    return minimize(out)


def xor_vuln(child_sets: Sequence[VulnerabilitySet]) -> VulnerabilitySet:
    if not child_sets:
        raise ValueError("xor needs at least one child")
    # minimise children first: the cross product of antichains is far smaller
    pools = [sorted(minimize(vs), key=sorted) for vs in child_sets]
    return minimize(frozenset().union(*choice) for choice in product(*pools))


def ss_vuln(child_sets: Sequence[VulnerabilitySet], scheme) -> VulnerabilitySet:
    if isinstance(scheme, Threshold):
        # every share is needed before a single secret element is pinned down
        return xor_vuln(child_sets)
    out: set[frozenset] = set()
    for access in scheme.sets:
        out.update(xor_vuln([child_sets[i] for i in sorted(access)]))
    return minimize(out)


def protocol_vuln(tree: ProtocolTree, graph: NetworkGraph) -> VulnerabilitySet:
    validate_tree(tree, graph)
    return _vuln(tree)


def _vuln(tree: ProtocolTree) -> VulnerabilitySet:
    if isinstance(tree, Leaf):
        return leaf_vuln(tree.link_id)
    kids = [_vuln(c) for c in tree.children]
    if isinstance(tree, Bundle):
        # uncombined streams: losing any one child leaks its slice of the output
        return minimize(frozenset().union(*kids))
    if isinstance(tree, Series):
        return series_vuln(kids, tree.via)
    if isinstance(tree, Xor):
        return xor_vuln(kids)
    assert isinstance(tree, SecretShare)
    return ss_vuln(kids, tree.scheme)


def is_compromised(v_min: Iterable[frozenset], compromised: Iterable[str]) -> bool:
    comp = frozenset(compromised)
    return any(v <= comp for v in v_min)


def security_summary(v_min: VulnerabilitySet) -> tuple[int, int]:
    """Return ``(smallest attack size, number of minimal vulnerabilities)``."""
    if not v_min:
        raise ValueError("empty vulnerability set")
    return min(len(v) for v in v_min), len(v_min)


def canonical(vs: Iterable[frozenset]) -> list[tuple[str, ...]]:
    """Deterministic lexicographic ordering of members, each sorted internally."""
    return sorted(tuple(sorted(v)) for v in vs)


def format_vuln(v: Iterable[str]) -> str:
    return "{" + ",".join(sorted(v)) + "}"


def format_set(vs: Iterable[frozenset]) -> list[str]:
    return [format_vuln(v) for v in canonical(vs)]


__all__ = [
    "canonical",
    "format_set",
    "format_vuln",
    "is_compromised",
    "leaf_vuln",
    "minimize",
    "protocol_vuln",
    "security_summary",
    "series_vuln",
    "ss_vuln",
    "vset",
    "xor_vuln",
]
