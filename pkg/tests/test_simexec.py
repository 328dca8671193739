import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridkd.netgraph import AccessStructure, Bundle, Leaf, SecretShare, Series, Threshold, Xor, elements, iter_leaves
from hybridkd.ratecalc import tree_rate
from hybridkd.simexec import InsufficientKeyMaterial, attack, execute, key_stream, oracle_check, random_protocol
from hybridkd.simexec.harness import has_secret_sharing
from hybridkd.gfss import F5_EXAMPLE

from conftest import chain_graph, parallel_graph

E12 = (Leaf("e1"), Leaf("e2"))


def test_key_stream_golden():
    # sha256("0|e1|0") starts with bytes bf f9
    assert key_stream(0, "e1", 16) == [1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1]
    assert key_stream(0, "e1", 300)[:8] == key_stream(0, "e1", 8)
    assert key_stream(1, "e1", 64) != key_stream(0, "e1", 64)


def test_xor_literal():
    ex = execute(Xor(E12), parallel_graph(2), 0, 4, streams={"e1": [1, 0, 1, 0], "e2": [0, 1, 1, 0]})
    assert ex.alice_key == ex.bob_key == [1, 1, 0, 0]
    assert not attack(ex, {"e1"}).success
    assert attack(ex, {"e1", "e2"}).full_key


def test_series_literal():
    ex = execute(Series(E12, ("M1",)), chain_graph(2), 0, 4, streams={"e1": [1, 0, 1, 0], "e2": [0, 1, 1, 0]})
    assert ex.alice_key == ex.bob_key == [1, 0, 1, 0]
    assert [v for _, v in ex.announcements] == [1, 1, 0, 0]
    assert attack(ex, {"e2"}).full_key
    assert attack(ex, {"M1"}).success
    assert not attack(ex, set()).success


def test_single_leaf():
    ex = execute(Leaf("e1"), parallel_graph(1), 3, 16)
    assert attack(ex, {"e1"}).success
    assert not attack(ex, set()).success
    assert oracle_check(Leaf("e1"), parallel_graph(1), 3, execution=ex).ok


def test_two_path(two_path):
    graph, tree = two_path
    ex = execute(tree, graph, 7, 64)
    assert attack(ex, {"X", "Y"}).success
    assert not attack(ex, {"X", "q_AX"}).success
    rep = oracle_check(tree, graph, 7, execution=ex)
    assert rep.subsets_checked == 128
    assert rep.mismatches == []
    assert rep.expected_bits == rep.measured_bits == 64


def test_determinism(two_path):
    graph, tree = two_path
    a, b = execute(tree, graph, 11, 40), execute(tree, graph, 11, 40)
    assert a.digest() == b.digest()
    assert a.announcements == b.announcements and a.consumed == b.consumed
    assert execute(tree, graph, 12, 40).digest() != a.digest()


def test_xor_information_ratio():
    n, rounds = 4, 50
    ex = execute(Xor(tuple(Leaf(f"e{i}") for i in range(1, n + 1))), parallel_graph(n), 0, rounds)
    assert Fraction(ex.key_length, sum(ex.consumed.values())) == Fraction(1, n)


def test_threshold_information_ratio():
    kids = tuple(Leaf(f"e{i}") for i in range(1, 6))
    ex = execute(SecretShare(kids, Threshold(2, q=11)), parallel_graph(5), 0, 700)
    (layer,) = ex.ss_layers
    assert len(layer.rounds) >= 100
    assert layer.elements_out == 2 * len(layer.rounds)
    assert layer.padded_elements == 5 * len(layer.rounds)
    assert Fraction(layer.elements_out, layer.padded_elements) == Fraction(2, 5)
    assert ex.key_length == 2 * 4 * len(layer.rounds)
    assert ex.alice_key == ex.bob_key


def test_access_structure_execution():
    kids = tuple(Leaf(f"e{i}") for i in range(1, 5))
    sets = tuple(frozenset({j, 3}) for j in range(3))
    tree = SecretShare(kids, AccessStructure(sets, F5_EXAMPLE))
    ex = execute(tree, parallel_graph(4), 2, 128)
    assert ex.alice_key == ex.bob_key
    assert attack(ex, {"e1", "e4"}).success
    assert not attack(ex, {"e1", "e2", "e3"}).success
    assert oracle_check(tree, parallel_graph(4), 2, execution=ex).ok


def test_insufficient_material():
    kids = tuple(Leaf(f"e{i}") for i in range(1, 4))
    with pytest.raises(InsufficientKeyMaterial):
        execute(SecretShare(kids, Threshold(1)), parallel_graph(3), 0, 1)
    with pytest.raises(ValueError):
        execute(Leaf("e1"), parallel_graph(1), 0, 0)


def test_bundle_exposes_each_child():
    tree = Bundle(E12)
    ex = execute(tree, parallel_graph(2), 0, 32)
    assert ex.key_length == 64
    assert attack(ex, {"e1"}).success and attack(ex, {"e2"}).success
    assert attack(ex, {"e1"}).recovered_bit_count == 32


def test_consumption_ledger():
    tree = Xor((Leaf("e1"), Bundle((Leaf("e2"), Leaf("e3")))))
    ex = execute(tree, parallel_graph(3), 0, 10)
    assert ex.key_length == 10
    assert ex.consumed["e1"] == 10
    assert ex.consumed["e2"] + ex.consumed["e3"] == 10


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_endpoints_agree_and_empty_attack_fails(seed):
    graph, tree = random_protocol(seed, 10)
    ex = execute(tree, graph, seed, 64) if not has_secret_sharing(tree) else _ss_exec(tree, graph, seed)
    assert ex.alice_key == ex.bob_key
    assert not attack(ex, set()).success
    assert attack(ex, elements(tree)).full_key


def _ss_exec(tree, graph, seed):
    try:
        return execute(tree, graph, seed, 256)
    except InsufficientKeyMaterial:
        return execute(tree, graph, seed, 2048)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 40))
def test_rate_consistency_with_bits_per_tick(seed, rounds):
    graph, tree = random_protocol(seed, 10)
    if has_secret_sharing(tree):
        return
    rng = random.Random(seed)
    bpt = {e: rng.randint(1, 4) for e in iter_leaves(tree)}
    ex = execute(tree, graph, seed, rounds, bits_per_tick=bpt)
    assert ex.key_length == rounds * tree_rate(tree, {e: Fraction(v) for e, v in bpt.items()})


@pytest.mark.parametrize("seed", range(25))
def test_oracle_random(seed):
    graph, tree = random_protocol(10_000 + seed, 10)
    rep = oracle_check(tree, graph, seed)
    assert rep.ok, rep.mismatches[:5]
