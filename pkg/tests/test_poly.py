import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lclab.exactarith import binom_mod_p, gen_binomial
from lclab.poly import (
    QQ,
    ZZ,
    DividedPowerOp,
    MultiPoly,
    apply_divided_power,
    bracket_power,
    euler_apply,
    gf,
)


def P(text, ring=ZZ, n=3):
    return MultiPoly.parse(text, ring, n)


def test_arithmetic_examples():
    assert (P("x1 + x2") * P("x1 - x2")) == P("x1^2 - x2^2")
    assert P("x1*x2").substitute({2: P("x1")}) == P("x1^2")
    F2 = gf(2)
    assert P("x1 + x2", F2) ** 2 == P("x1^2 + x2^2", F2)


def test_text_form():
    f = P("3*x1^2*x2 - x3")
    assert str(f) == "3*x1^2*x2 - x3"
    assert str(P("-x1 + 2", gf(3))) == "2*x1 + 2"
    assert str(MultiPoly.zero(ZZ, 2)) == "0"
    assert P("1/2*x1", QQ) == P("x1", QQ).scale(QQ.norm("1/2"))
    with pytest.raises(ValueError):
        P("x1 * x9")
    with pytest.raises(ValueError):
        P("x1 + x2", ZZ, 3) + P("x1", ZZ, 2)


def test_divided_power_examples():
    assert apply_divided_power(DividedPowerOp(1, 2), P("x1^5", n=1)) == P("10*x1^3", n=1)
    inv = MultiPoly.monomial(ZZ, (-1,))
    assert apply_divided_power(DividedPowerOp(1, 1), inv) == MultiPoly.monomial(ZZ, (-2,), -1)
    assert not apply_divided_power(DividedPowerOp(1, 3), P("x1^2", n=1))


def test_euler_examples():
    assert euler_apply(1, P("x1^2*x2", n=2)) == P("3*x1^2*x2", n=2)
    g = P("x1*x2*x3", gf(2))
    assert euler_apply(2, g) == g
    cech = MultiPoly.monomial(gf(3), (-1, -1))
    assert euler_apply(1, cech) == cech  # -2 = 1 mod 3


def test_bracket_power():
    F2, F3 = gf(2), gf(3)
    assert bracket_power([P("x1 + x2", F2)], 2) == [P("x1^2 + x2^2", F2)]
    d1 = P("x2*x3 - x1*x3", F2)
    assert bracket_power([d1], 4) == [d1**4]
    assert bracket_power([P("x1", F3), P("x2", F3)], 3) == [P("x1^3", F3), P("x2^3", F3)]
    with pytest.raises(ValueError):
        bracket_power([P("x1", F2)], 6)


def _homogeneous(draw, ring, n, d, max_terms=6):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        cut = sorted(draw(st.lists(st.integers(0, d), min_size=n - 1, max_size=n - 1)))
        e = tuple(b - a for a, b in zip([0] + cut, cut + [d]))
        terms[e] = draw(st.integers(-20, 20))
    return MultiPoly(ring, n, terms)


@st.composite
def homogeneous(draw, p=None):
    p = draw(st.sampled_from([2, 3, 5])) if p is None else p
    n = draw(st.integers(1, 4))
    d = draw(st.integers(0, 7))
    return p, _homogeneous(draw, gf(p), n, d)


@settings(max_examples=200)
@given(homogeneous(), st.integers(1, 4))
def test_eulerian_identity(pg, k):
    p, g = pg
    if not g:
        return
    assert euler_apply(k, g) == g.scale(binom_mod_p(g.degree, k, p))


@given(st.lists(st.integers(-5, 3), min_size=1, max_size=3), st.integers(1, 4), st.sampled_from([0, 2, 3, 5]))
def test_euler_on_cech_terms(exps, k, p):
    ring = gf(p) if p else ZZ
    m = MultiPoly.monomial(ring, tuple(exps))
    assert euler_apply(k, m) == m.scale(gen_binomial(sum(exps), k))


@given(st.integers(-4, 6), st.integers(0, 4), st.integers(0, 4), st.sampled_from([0, 2, 3]))
def test_divided_powers_compose(a, s, t, p):
    ring = gf(p) if p else ZZ
    m = MultiPoly.monomial(ring, (a, 1))
    lhs = apply_divided_power(DividedPowerOp(1, s), apply_divided_power(DividedPowerOp(1, t), m))
    rhs = apply_divided_power(DividedPowerOp(1, s + t), m).scale(gen_binomial(s + t, s))
    assert lhs == rhs


@st.composite
def poly_pair(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    ring = gf(p)
    n = draw(st.integers(1, 3))

    def one():
        terms = {
            tuple(draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))): draw(st.integers(0, p - 1))
            for _ in range(draw(st.integers(0, 4)))
        }
        return MultiPoly(ring, n, terms)

    return p, one(), one()


@given(poly_pair())
def test_frobenius_additive(data):
    p, g, h = data
    assert (g + h) ** p == g**p + h**p


@given(poly_pair())
def test_ring_laws(data):
    _, g, h = data
    assert g * h == h * g
    assert (g + h) - h == g
    assert g * (g + h) == g * g + g * h


@given(homogeneous(p=5))
def test_parse_print_roundtrip(pg):
    _, g = pg
    assert MultiPoly.parse(str(g), g.ring, g.nvars) == g
    assert str(MultiPoly.parse(str(g), g.ring, g.nvars)) == str(g)


def test_parse_print_roundtrip_integers():
    for text in ["3*x1^2*x2 - x3", "-x1^3 + 7", "x1*x2*x3 - 12*x2^2"]:
        assert str(P(text)) == text
