"""End-to-end key rate of a protocol tree.

Rules, applied bottom-up over the tree:

    Leaf      the link's own rate
    Bundle    sum of child rates (keys are not combined)
    Series    min of child rates
    Xor       min of child rates
    Threshold g * min of child rates
    Access    min of child rates (one secret element per dealing round)

Combining keys and classical messaging are treated as free, buffers unbounded.
"""

from __future__ import annotations

from .linkrates import DEFAULT_PRESETS, PresetRegistry, kem_rate, qkd_rate
from .netgraph import (
    Bundle,
    ExplicitRate,
    KemPreset,
    Leaf,
    Link,
    NetworkGraph,
    ProtocolTree,
    QkdPreset,
    SecretShare,
    Series,
    Threshold,
    Xor,
    validate_tree,
)


class UnknownPresetError(KeyError):
    pass


def link_rate(link: Link, presets: PresetRegistry = DEFAULT_PRESETS) -> float:
    spec = link.rate_spec
    if isinstance(spec, ExplicitRate):
        return spec.bps
    if isinstance(spec, QkdPreset):
        if spec.name not in presets.qkd:
            raise UnknownPresetError(f"unknown QKD preset {spec.name!r}")
        return qkd_rate(presets.qkd[spec.name], spec.distance_km)
    assert isinstance(spec, KemPreset)
    if spec.name not in presets.kem:
        raise UnknownPresetError(f"unknown KEM preset {spec.name!r}")
    return kem_rate(presets.kem[spec.name])


def combine(tree: ProtocolTree, child_rates: list):
    """Apply one combinator's rule. Works for floats and Fractions alike."""
    if isinstance(tree, Bundle):
        return sum(child_rates)
    if isinstance(tree, (Series, Xor)):
        return min(child_rates)
    assert isinstance(tree, SecretShare)
    per_round = tree.scheme.g if isinstance(tree.scheme, Threshold) else 1
    return per_round * min(child_rates)


def tree_rate(tree: ProtocolTree, leaf_rates) -> float:
    """Evaluate the rate rules given a mapping ``link id -> rate``."""
    if isinstance(tree, Leaf):
        return leaf_rates[tree.link_id]
    return combine(tree, [tree_rate(c, leaf_rates) for c in tree.children])


def protocol_rate(tree: ProtocolTree, graph: NetworkGraph, presets: PresetRegistry = DEFAULT_PRESETS) -> float:
    validate_tree(tree, graph)
    rates = {link.id: link_rate(link, presets) for link in graph.links}
    return tree_rate(tree, rates)


def information_ratio(tree: ProtocolTree) -> float:
    """Output over total input for one parallel combinator with equal-rate children."""
    n = len(tree.children)
    if isinstance(tree, Xor):
        return 1 / n
    if isinstance(tree, SecretShare):
        return (tree.scheme.g if isinstance(tree.scheme, Threshold) else 1) / n
    raise TypeError(f"information ratio is defined for Xor and SecretShare, not {type(tree).__name__}")
