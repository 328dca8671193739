import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridkd.gfss import F5_EXAMPLE
from hybridkd.gfss.field import PrimeField, field_arith, is_prime, next_prime, nullspace, rank
from hybridkd.gfss.lincode import (
    CodeError,
    LinearCode,
    access_sets_for_children,
    codeword,
    dictatorial_indices,
    find_code_for_access,
    lc_deal,
    lc_minimal_access,
    lc_recover,
    lc_recovery_vector,
    lc_validate,
)
from hybridkd.gfss.shamir import (
    KeyStreamExhausted,
    SchemeError,
    ThresholdScheme,
    deal_polynomial,
    element_from_bits,
    secret_distribution,
    shamir_deal,
    shamir_leakage_check,
    shamir_pad,
    shamir_recover,
    shamir_unpad,
)

PRIMES = [p for p in range(2, 32) if is_prime(p)]


def test_field_examples():
    assert field_arith(5, "add", 2, 4) == 1
    assert field_arith(5, "inv", 2) == 3
    assert field_arith(7, "pow", 3, 5) == 5
    assert field_arith(7, "neg", 3) == 4
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)
    with pytest.raises(ValueError):
        PrimeField(9)


def test_primes():
    assert [p for p in range(40) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    assert is_prime(2_147_483_647)
    assert next_prime(5) == 7 and next_prime(7) == 11


@given(st.sampled_from(PRIMES), st.integers(1, 10**6), st.integers(1, 10**6))
def test_field_inverse(q, a, b):
    F = PrimeField(q)
    a, b = a % q, b % q
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b


# -- threshold scheme -------------------------------------------------------------


def test_worked_deal():
    scheme = ThresholdScheme.make(7, 3, 1)
    deal = deal_polynomial(scheme, [1, 2, 3])
    assert deal.secret == (1,)
    assert deal.shares == (6, 3, 6)
    assert shamir_recover(scheme, [(1, 6), (2, 3), (3, 6)]) == (1,)
    zero = deal_polynomial(scheme, [0, 0, 0])
    assert zero.secret == (0,) and zero.shares == (0, 0, 0)


def test_scheme_parameter_errors():
    with pytest.raises(SchemeError):
        ThresholdScheme.make(7, 1, 1)
    with pytest.raises(SchemeError):
        ThresholdScheme.make(5, 3, 2)  # q must exceed n + g
    scheme = ThresholdScheme.make(7, 3, 1)
    with pytest.raises(SchemeError):
        shamir_recover(scheme, [(1, 6), (2, 3)])


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_round_trip(data):
    n = data.draw(st.integers(2, 6))
    g = data.draw(st.integers(1, n - 1))
    q = data.draw(st.sampled_from([p for p in PRIMES if p > n + g]))
    scheme = ThresholdScheme.make(q, n, g)
    deal = shamir_deal(scheme, data.draw(st.integers(0, 2**32)))
    assert len(deal.secret) == g
    assert shamir_recover(scheme, deal.points()) == deal.secret


def test_leakage_q5():
    scheme5 = ThresholdScheme(PrimeField(5), 3, 1)
    # every pair of exposed share values leaves all 5 secrets equally likely
    for idx in ((0, 1), (0, 2), (1, 2)):
        for vals in product(range(5), repeat=2):
            rep = secret_distribution(scheme5, dict(zip(idx, vals)))
            assert rep.consistent == 5 and rep.coordinate_uniform()
    assert shamir_leakage_check(scheme5, 3).determined()
    assert shamir_leakage_check(scheme5, 0).coordinate_uniform()
    assert shamir_leakage_check(ThresholdScheme.make(7, 3, 1), 2, seed=4).joint_uniform()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_fewer_than_n_shares_leak_nothing(data):
    n = data.draw(st.integers(2, 4))
    g = data.draw(st.integers(1, n - 1))
    q = next_prime(n + g)
    scheme = ThresholdScheme.make(q, n, g)
    exposed = data.draw(st.integers(0, n - 1))
    rep = shamir_leakage_check(scheme, exposed, data.draw(st.integers(0, 1000)))
    assert rep.coordinate_uniform()


def test_padding():
    res = shamir_pad([6], [[1, 0, 1]], 7)
    assert res.ciphertexts == [4] and res.keys == [5]
    assert shamir_unpad([4], [5], 7) == [6]
    assert shamir_pad([3], [[0, 0, 0]], 7).ciphertexts == [3]
    assert element_from_bits([1, 1, 1, 0, 1, 0], 0, 7) == (2, 6)
    with pytest.raises(KeyStreamExhausted):
        element_from_bits([1, 1, 1, 0], 0, 7)


@given(st.sampled_from(PRIMES), st.lists(st.integers(0, 1), min_size=64, max_size=64))
def test_pad_unpad_identity(q, bits):
    try:
        res = shamir_pad([1 % q], [bits], q)
    except KeyStreamExhausted:
        return
    assert shamir_unpad(res.ciphertexts, res.keys, q) == [1 % q]
    assert 0 <= res.keys[0] < q and res.consumed[0] % (q - 1).bit_length() == 0


# -- linear codes -------------------------------------------------------------------


def test_f5_code():
    assert lc_validate(F5_EXAMPLE)
    rep = lc_minimal_access(F5_EXAMPLE)
    assert rep.sorted_sets() == [(1, 4), (2, 4), (3, 4)]
    assert rep.dictatorial == (4,)
    assert lc_recovery_vector(F5_EXAMPLE, {1, 4}) == [1, 2, 0, 0, 1]
    assert lc_recovery_vector(F5_EXAMPLE, {2, 3}) is None


def test_f5_deal_example():
    f = codeword(F5_EXAMPLE, (2, 0))
    assert f == (2, 0, 0, 0, 3)
    assert lc_recover(F5_EXAMPLE, {1: 0, 4: 3}) == 2
    assert codeword(F5_EXAMPLE, (0, 0)) == (0,) * 5


def test_perturbed_h_rejected():
    H = [list(r) for r in F5_EXAMPLE.H]
    H[0][1] = (H[0][1] + 1) % 5
    with pytest.raises(CodeError):
        lc_validate(LinearCode.from_lists(5, F5_EXAMPLE.G, H))


def test_repetition_code():
    rep = LinearCode.from_lists(5, [[1, 1]], [[1, 4]])
    assert lc_validate(rep)
    assert lc_recovery_vector(rep, {1}) == [1, 4]
    assert lc_recover(rep, {1: 3}) == 3
    assert lc_minimal_access(rep).sorted_sets() == [(1,)]


def test_dictatorial_scalar_multiple():
    # h_1 = 2 h_0 forces share 1 into every qualified set
    code2 = LinearCode.from_lists(5, [[2, 4, 0]], [[2, 4, 0], [0, 0, 1]])
    assert code2.column(code2.H, 1) == tuple(2 * x % 5 for x in code2.column(code2.H, 0))
    assert dictatorial_indices(code2) == (1,)


@pytest.mark.parametrize("seed", range(100))
def test_f5_recovery_random(seed):
    rng = random.Random(seed)
    m = rng.randrange(5)
    deal = lc_deal(F5_EXAMPLE, m, rng)
    assert deal.secret == m
    for s in lc_minimal_access(F5_EXAMPLE).sorted_sets():
        v = lc_recovery_vector(F5_EXAMPLE, s)
        assert -sum(v[j] * deal.codeword[j] for j in s) % 5 == m


def test_find_code_for_access():
    target = {frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 3})}
    code = find_code_for_access(target, 4)
    assert access_sets_for_children(code) == target
    with pytest.raises(CodeError):
        # {0,1},{2,3} is the classic non-ideal structure on four parties
        find_code_for_access([{0, 1}, {1, 2}, {2, 3}], 4, attempts=20)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(3, 5), st.data())
def test_minimal_sets_recover(q, n, data):
    k = data.draw(st.integers(1, n - 1))
    G = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    if rank(G, q) != k or not any(r[0] for r in G) or not nullspace(G, q):
        return
    code = LinearCode.from_generator(q, G)
    try:
        rep = lc_minimal_access(code)
    except CodeError:
        return
    deal = lc_deal(code, 1 % q, data.draw(st.integers(0, 1000)))
    for s in rep.minimal_sets:
        assert lc_recover(code, {j: deal.codeword[j] for j in s}) == deal.secret
        for j in s:
            assert lc_recovery_vector(code, s - {j}) is None
