import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridkd.netgraph import AccessStructure, Bundle, Leaf, Threshold, elements
from hybridkd.vulnset import (
    format_set,
    is_compromised,
    leaf_vuln,
    minimize,
    protocol_vuln,
    security_summary,
    series_vuln,
    ss_vuln,
    vset,
    xor_vuln,
)
from hybridkd.simexec import random_protocol

from conftest import TWO_PATH_VMIN, parallel_graph

ids = st.sampled_from("abcdef")
vulns = st.frozensets(st.frozensets(ids, min_size=1, max_size=4), min_size=1, max_size=6)


def test_leaf():
    assert leaf_vuln("q_AY") == vset({"q_AY"})


def test_series_examples():
    assert series_vuln([vset({"q_AY"}), vset({"k_YB"})], ["Y"]) == vset({"q_AY"}, {"Y"}, {"k_YB"})
    assert series_vuln([vset({"k_AX", "q_AX"}), vset({"k_XB"})], ["X"]) == vset({"k_AX", "q_AX"}, {"X"}, {"k_XB"})
    assert series_vuln([vset({"a"}, {"b"})], []) == vset({"a"}, {"b"})
    with pytest.raises(ValueError):
        series_vuln([vset({"a"}), vset({"b"})], [])


def test_xor_examples():
    assert xor_vuln([vset({"q_AX"}), vset({"k_AX"})]) == vset({"q_AX", "k_AX"})
    V = vset({"a", "e"}, {"b", "e"})
    assert xor_vuln([V, vset({"e"})]) == V


def test_two_path_from_parts():
    axb = vset({"k_AX", "q_AX"}, {"X"}, {"k_XB"})
    ayb = vset({"q_AY"}, {"Y"}, {"k_YB"})
    assert format_set(xor_vuln([axb, ayb])) == TWO_PATH_VMIN


def test_two_path_protocol(two_path):
    graph, tree = two_path
    v = protocol_vuln(tree, graph)
    assert format_set(v) == TWO_PATH_VMIN
    assert is_compromised(v, {"X", "Y"})
    assert security_summary(v) == (2, 9)


def test_ss_examples():
    kids = [vset({f"L{i}"}) for i in range(1, 5)]
    access = AccessStructure((frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 3})))
    assert ss_vuln(kids, access) == vset({"L1", "L2"}, {"L1", "L3"}, {"L1", "L4"})
    assert ss_vuln(kids, Threshold(2)) == vset({"L1", "L2", "L3", "L4"})
    assert ss_vuln([vset({"a"}, {"b"})], AccessStructure((frozenset({0}),))) == vset({"a"}, {"b"})


def test_bundle_is_per_child():
    graph = parallel_graph(2)
    assert protocol_vuln(Bundle((Leaf("e1"), Leaf("e2"))), graph) == vset({"e1"}, {"e2"})


def test_minimize_examples():
    assert minimize(vset({"a"}, {"a", "b"})) == vset({"a"})
    assert minimize(vset({"a", "b"}, {"b", "c"}, {"a", "b", "c"})) == vset({"a", "b"}, {"b", "c"})


def test_is_compromised_examples():
    V = vset({"a"}, {"b", "c"})
    assert is_compromised(V, {"b", "c", "d"})
    assert not is_compromised(V, {"b"})


def test_summary():
    assert security_summary(vset({"a"}, {"b", "c"})) == (1, 2)
    assert security_summary(vset({"a", "b", "c"})) == (3, 1)
    with pytest.raises(ValueError):
        security_summary(frozenset())


@given(vulns)
def test_minimize_idempotent_antichain(V):
    m = minimize(V)
    assert minimize(m) == m
    assert m <= V
    assert not any(a < b for a in m for b in m)


@given(vulns, st.frozensets(ids))
def test_minimize_preserves_compromise(V, S):
    assert is_compromised(minimize(V), S) == is_compromised(V, S)


@given(st.lists(vulns, min_size=1, max_size=3), st.frozensets(ids), st.randoms(use_true_random=False))
def test_xor_semantics(children, S, rnd):
    # compromised iff every child is compromised
    assert is_compromised(xor_vuln(children), S) == all(is_compromised(c, S) for c in children)
    shuffled = children[:]
    rnd.shuffle(shuffled)
    assert xor_vuln(shuffled) == xor_vuln(children)


@given(st.lists(vulns, min_size=1, max_size=3), st.frozensets(ids))
def test_series_semantics(children, S):
    via = [f"M{i}" for i in range(len(children) - 1)]
    expected = any(is_compromised(c, S) for c in children) or any(m in S for m in via)
    assert is_compromised(series_vuln(children, via), S) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_protocol_vuln_is_minimal_and_in_universe(seed):
    graph, tree = random_protocol(seed, 10)
    v = protocol_vuln(tree, graph)
    assert minimize(v) == v
    assert frozenset().union(*v) <= set(elements(tree))
    # the full universe always breaks the protocol, the empty set never does
    assert is_compromised(v, elements(tree))
    assert not is_compromised(v, ())
