import random
from math import comb

import pytest

from lclab.certlab import (
    barile_certificate,
    identity_summands,
    valla_certificate,
    verify_2x3_identity,
    verify_2x3_modp_reduction,
)
from lclab.poly import QQ, MultiPoly, ZZ


def bracket_at(k, i, j, u, v, w, x, y, z):
    """One cyclic bracket of the 2x3 identity evaluated at integers, no polynomial arithmetic."""
    d1, d2, d3 = v * z - w * y, w * x - u * z, u * y - v * x
    return (
        u ** (k + 1) * d1 ** (2 * k + 1) * (-w * x) ** i * (v * x) ** j * d2 ** (k - i) * d3 ** (k - j)
        + v ** (k + 1) * d2 ** (2 * k + 1) * (-u * y) ** i * (w * y) ** j * d3 ** (k - i) * d1 ** (k - j)
        + w ** (k + 1) * d3 ** (2 * k + 1) * (-v * z) ** i * (u * z) ** j * d1 ** (k - i) * d2 ** (k - j)
    )


def identity_at(k, *pt):
    return sum(
        comb(k, i + j) * comb(k + i, k) * comb(k + j, k) * bracket_at(k, i, j, *pt)
        for i in range(k + 1)
        for j in range(k + 1 - i)
    )


@pytest.mark.parametrize("k", range(5))
def test_identity_residual_zero(k):
    rep = verify_2x3_identity(k)
    assert rep["success"] and rep["residual"] == "0"
    assert rep["summands"] == (k + 1) * (k + 2) // 2


@pytest.mark.parametrize("k", range(7))
def test_identity_numeric_oracle(k):
    rng = random.Random(k)
    for _ in range(20):
        pt = [rng.randint(-9, 9) for _ in range(6)]
        assert identity_at(k, *pt) == 0


def _value(f, pt):
    total = 0
    for e, c in f.terms.items():
        term = c
        for a, x in zip(e, pt):
            term *= x**a
        total += term
    return total


def test_summands_evaluate_like_oracle():
    pt = (2, -1, 3, 1, 4, -2)
    for k in range(4):
        for (i, j), c, bracket in identity_summands(k):
            assert c == comb(k, i + j) * comb(k + i, k) * comb(k + j, k)
            assert _value(bracket, pt) == bracket_at(k, i, j, *pt)


def test_negative_k():
    with pytest.raises(ValueError):
        verify_2x3_identity(-1)


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2)])
def test_modp_reduction(p, e):
    rep = verify_2x3_modp_reduction(p, e)
    assert rep["success"]
    assert rep["nonzero_coefficients_mod_p"] == [[0, 0]]
    assert rep["bracket_residual_mod_p"] == "0"
    assert rep["bracket_terms_over_Z"] > 0


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2)])
def test_modp_coefficients_oracle(p, e):
    k = p**e - 1
    nonzero = [(i, j) for i in range(k + 1) for j in range(k + 1 - i)
               if comb(k, i + j) * comb(k + i, k) * comb(k + j, k) % p]
    assert nonzero == [(0, 0)]


def test_modp_rejects():
    with pytest.raises(ValueError):
        verify_2x3_modp_reduction(4, 1)
    with pytest.raises(ValueError):
        verify_2x3_modp_reduction(2, 4)


def _reverify(rep, nvars=5):
    ideal = [MultiPoly.parse(g, QQ, nvars) for g in rep["ideal"]]
    small = [MultiPoly.parse(g, QQ, nvars) for g in rep["generators"]]
    for cert in rep["in_ideal"]:
        target = MultiPoly.parse(cert["element"], QQ, nvars)
        got = sum((MultiPoly.parse(a, QQ, nvars) * g for a, g in zip(cert["multipliers"], ideal)),
                  MultiPoly.zero(QQ, nvars))
        assert got == target
    for cert, base in zip(rep["powers_in_generated"], ideal):
        target = MultiPoly.parse(cert["element"], QQ, nvars)
        assert target == base ** cert["N"]
        assert target.degree <= rep["bound"] and cert["N"] <= rep["max_power"]
        got = sum((MultiPoly.parse(a, QQ, nvars) * g for a, g in zip(cert["multipliers"], small)),
                  MultiPoly.zero(QQ, nvars))
        assert got == target


def test_barile_certificate():
    rep = barile_certificate()
    assert rep["success"] and not rep["bound_failures"]
    assert rep["identity"]["residual"] == "0"
    _reverify(rep)


def test_barile_literal_identity():
    v, w, x, y, z = (MultiPoly.var(ZZ, 5, i) for i in range(1, 6))
    delta = v * z - w * y
    f = w * x**2 + z * delta
    g = v * x**2 + y * delta
    assert v * f - w * g == delta**2


def test_valla_certificate():
    rep = valla_certificate()
    assert rep["success"] and rep["g1_is_minor"]
    _reverify(rep)


def test_tight_bounds_fail_honestly():
    rep = barile_certificate(D=4, max_N=1)
    assert not rep["success"] and rep["bound_failures"]
    with pytest.raises(ValueError):
        valla_certificate(D=5)
