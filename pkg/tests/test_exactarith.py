import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lclab.exactarith import (
    GF,
    artin_schreier_solve,
    base_p_digits,
    big_binomial,
    binom_mod_p,
    embed,
    extend_by_artin_schreier,
    gen_binomial,
    is_prime,
    parse_field,
)


def test_big_binomial_examples():
    assert big_binomial(5, 2) == 10
    assert big_binomial(7, 4) == 35
    assert big_binomial(0, 0) == 1
    assert big_binomial(3, 5) == 0


def test_base_p_digits_examples():
    assert list(base_p_digits(5, 2)) == [1, 0, 1]
    assert list(base_p_digits(0, 7)) == []
    # repeated division by hand: 35 = 2 + 2*3 + 0*9 + 1*27
    assert list(base_p_digits(35, 3)) == [2, 2, 0, 1]
    with pytest.raises(ValueError):
        base_p_digits(5, 4)


@given(st.integers(0, 10**12), st.sampled_from([2, 3, 5, 7, 11]))
def test_digits_reconstruct(d, p):
    dv = base_p_digits(d, p)
    assert dv.value == d
    assert all(0 <= s < p for s in dv)
    assert d == 0 or dv.digits[-1] != 0


def test_binom_mod_p_examples():
    assert binom_mod_p(5, 2, 2) == 0
    assert binom_mod_p(5, 1, 2) == 1
    assert binom_mod_p(35, 4, 3) == big_binomial(35, 4) % 3


@given(st.integers(0, 2**20), st.integers(0, 2**20), st.sampled_from([2, 3, 5, 7]))
def test_lucas_matches_exact(d, k, p):
    assert binom_mod_p(d, k, p) == big_binomial(d, k) % p


def test_gen_binomial():
    assert gen_binomial(-1, 1) == -1
    assert gen_binomial(-2, 3) == -4  # (-2)(-3)(-4)/6
    for a in range(-6, 7):
        for t in range(6):
            num = math.prod(a - i for i in range(t))
            assert gen_binomial(a, t) * math.factorial(t) == num


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1), (3, 3), (2, 4)])
def test_field_axioms(p, k):
    F = GF(p, k)
    els = list(F.elements())
    assert len(els) == p**k
    sample = els if len(els) <= 9 else els[:: max(1, len(els) // 9)]
    for x, y, z in itertools.product(sample, repeat=3):
        assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
        assert F.add(x, y) == F.add(y, x)
    for x in els[1:]:
        assert F.mul(x, F.inv(x)) == 1
    # Frobenius is additive and has order k
    for x, y in itertools.product(sample, repeat=2):
        assert F.frob(F.add(x, y)) == F.add(F.frob(x), F.frob(y))
    assert all(F.frob(x, k) == x for x in els)


def test_moduli_and_text():
    assert str(GF(2, 2)) == "GF(2^2; modulus=a^2 + a + 1)"
    assert str(GF(3)) == "GF(3)"
    F = parse_field("GF(3^3; modulus=a^3 + 2*a + 1)")
    assert F == GF(3, 3)
    for x in F.elements():
        assert F.parse(F.format(x)) == x
    with pytest.raises(ValueError):
        GF(2, 2, (1, 0, 1))  # a^2 + 1 = (a + 1)^2


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3), (5, 1), (3, 3), (2, 6), (3, 6)])
def test_artin_schreier_exhaustive(p, k):
    F = GF(p, k)
    for c in F.elements():
        t = artin_schreier_solve(F, c)
        roots = [x for x in F.elements() if F.add(F.sub(F.pow(x, p), x), c) == 0]
        if t is None:
            assert roots == []
        else:
            assert t == min(roots)


def test_artin_schreier_examples():
    assert artin_schreier_solve(GF(2), 0) == 0
    assert artin_schreier_solve(GF(2), 1) is None
    F4 = GF(2, 2)
    w = artin_schreier_solve(F4, 1)
    assert F4.add(F4.add(F4.mul(w, w), w), 1) == 0


@pytest.mark.parametrize("p", [2, 3])
def test_extend_by_artin_schreier(p):
    F2, t = extend_by_artin_schreier(GF(p), 1)
    assert F2.order == p**p
    assert F2.add(F2.sub(F2.pow(t, p), t), 1) == 0
    with pytest.raises(ValueError):
        extend_by_artin_schreier(GF(2), 0)


@pytest.mark.parametrize("src,dst", [((2, 2), (2, 4)), ((2, 1), (2, 3)), ((3, 1), (3, 2)), ((2, 2), (2, 6))])
def test_embedding_is_a_ring_map(src, dst):
    F, F2 = GF(*src), GF(*dst)
    els = list(F.elements())
    images = [embed(F, F2, x) for x in els]
    assert len(set(images)) == len(els)
    for x, y in itertools.product(els, repeat=2):
        assert embed(F, F2, F.mul(x, y)) == F2.mul(embed(F, F2, x), embed(F, F2, y))
        assert embed(F, F2, F.add(x, y)) == F2.add(embed(F, F2, x), embed(F, F2, y))
