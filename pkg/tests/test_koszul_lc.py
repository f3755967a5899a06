from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import det2x3, fermat, polys, rp2_ideal
from lclab.exactarith import GF
from lclab.ffmod import mat_mul
from lclab.koszul_lc import (
    StabilizationError,
    StageComplex,
    a_invariant,
    a_invariant_report,
    frobenius_matrix,
    stabilize,
    strand_cohomology,
    torsion_obstruction,
    transition,
)
from lclab.linstrand import Ideal, PieceTooLarge
from lclab.poly import MultiPoly, gf


def _mono(n, e):
    return "*".join(f"x{i + 1}^{a}" for i, a in enumerate(e) if a) or "1"


@st.composite
def small_ideals(draw, n=3):
    """Homogeneous ideals in <= 3 variables over F_2 or F_3, generators of degree 1 or 2."""
    p = draw(st.sampled_from([2, 3]))
    ring = gf(p)
    gens = []
    for _ in range(draw(st.integers(0, 3))):
        d = draw(st.integers(1, 2))
        monos = [e for e in _exps(n, d)]
        chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=3, unique=True))
        text = " + ".join(f"{draw(st.integers(1, p - 1))}*{_mono(n, e)}" for e in chosen)
        gens.append(MultiPoly.parse(text, ring, n))
    return Ideal(gens, ring, n)


def _exps(n, d):
    if n == 1:
        return [(d,)]
    return [(a,) + rest for a in range(d, -1, -1) for rest in _exps(n - 1, d - a)]


def _c(a, b):
    return comb(a, b) if a >= 0 else 0


def _mm(p, A, B):
    return [list(r) for r in mat_mul(GF(p), A, B)]


# --- examples ---

def test_polynomial_ring_in_one_variable():
    I = Ideal([], gf(2), 1)
    assert strand_cohomology(I, 1, -1, 3).dim == 1
    assert strand_cohomology(I, 1, 0, 3).dim == 0
    assert transition(I, 1, -1, 2, 3) == [[1]]
    assert transition(I, 1, -1, 3, 3) == [[1]]


def test_residue_field_h0():
    n = 3
    I = Ideal(polys(gf(2), n, ["x1", "x2", "x3"]), gf(2), n)
    st_ = stabilize(I, 0, 0)
    assert (st_.T, st_.dim) == (1, 1)


def test_rp2_odd_characteristic_vanishes():
    assert stabilize(rp2_ideal(3), 3, 0).dim == 0


def test_fermat_examples():
    assert frobenius_matrix(fermat(2), 2).matrix == [[0]]
    assert not frobenius_matrix(fermat(7), 2).nilpotent


def test_frobenius_needs_prime_field():
    with pytest.raises(ValueError):
        frobenius_matrix(fermat(0), 2)


def test_degree_skipping_avoids_false_zero():
    # every stage t <= 3 vanishes for degree reasons in degree -7
    I = Ideal([], gf(2), 2)
    assert stabilize(I, 2, -7).dim == 6


def test_t_max_too_small_raises():
    with pytest.raises(StabilizationError):
        stabilize(Ideal([], gf(2), 2), 2, -7, t_max=2)


def test_frobenius_stage_before_T_rejected():
    with pytest.raises(ValueError):
        frobenius_matrix(rp2_ideal(2), 3, stage=0)


# --- closed forms ---

@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", range(-6, 1))
def test_polynomial_ring_top_cohomology(n, s):
    I = Ideal([], gf(3), n)
    expected = comb(-s - 1, n - 1) if s <= -n else 0
    assert stabilize(I, n, s).dim == expected
    for j in range(n):
        assert stabilize(I, j, s).dim == 0


@pytest.mark.parametrize("text,d", [("x1^2 + x2*x3", 2), ("x1^3 + x2^3 + x3^3", 3), ("x1*x2", 2)])
@pytest.mark.parametrize("s", range(-4, 2))
def test_hypersurface_top_cohomology(text, d, s):
    n = 3
    I = Ideal(polys(gf(5), n, [text]), gf(5), n)
    expected = _c(-s + d - 1, n - 1) - _c(-s - 1, n - 1)
    assert stabilize(I, n - 1, s).dim == expected


# --- properties ---

@given(small_ideals(), st.integers(1, 3), st.integers(-3, 2), st.integers(0, 3))
@settings(max_examples=60)
def test_dd_is_zero(I, t, s, j):
    assert StageComplex(I, t, s).check_dd(j)


@given(small_ideals(), st.integers(0, 3), st.integers(-2, 1))
@settings(max_examples=30)
def test_transition_functorial(I, j, s):
    p = I.ring.char
    for t in (1, 2):
        a = transition(I, j, s, t, t + 1)
        b = transition(I, j, s, t + 1, t + 2)
        direct = transition(I, j, s, t, t + 2)
        d0 = strand_cohomology(I, j, s, t).dim
        d2 = strand_cohomology(I, j, s, t + 2).dim
        if d0 == 0 or d2 == 0:
            assert all(not any(r) for r in direct)
            continue
        if not a or not b:
            assert all(not any(r) for r in direct)
            continue
        assert _mm(p, b, a) == direct


@given(small_ideals(), st.integers(0, 3), st.integers(-2, 1), st.integers(1, 3))
@settings(max_examples=30)
def test_identity_transition(I, j, s, t):
    d = strand_cohomology(I, j, s, t).dim
    A = transition(I, j, s, t, t)
    assert A == [[int(r == c) for c in range(d)] for r in range(d)]


@given(small_ideals(), st.integers(0, 3))
@settings(max_examples=80)
def test_frobenius_stage_shift(I, j):
    try:
        v = frobenius_matrix(I, j)
    except StabilizationError:
        return
    if v.dim == 0:
        return
    T2 = v.stage_T + 1
    try:
        w = frobenius_matrix(I, j, stage=T2)
    except StabilizationError:
        return
    p = I.ring.char
    A = transition(I, j, 0, v.stage_T, T2)
    assert _mm(p, w.matrix, A) == _mm(p, A, v.matrix)
    assert w.nilpotent == v.nilpotent


# --- a-invariants ---

@pytest.mark.parametrize("n", [1, 2, 3])
def test_a_invariant_polynomial_ring(n):
    I = Ideal([], gf(2), n)
    assert a_invariant(I, "hilbert") == -n
    assert a_invariant(I, "strand") == -n


def test_a_invariant_fat_point():
    # k[x]/(x^2) is its own H^0_m, top degree 1
    I = Ideal(polys(gf(3), 1, ["x1^2"]), gf(3), 1)
    assert a_invariant(I, "hilbert") == 1
    assert a_invariant(I, "strand") == 1


@pytest.mark.parametrize("p", [2, 3])
def test_a_invariant_determinantal(p):
    I = det2x3(p)
    h = a_invariant_report(I, "hilbert", cm=True)
    assert h["a_invariant"] == -3
    assert h["numerator"] == [1, 0, -3, 2]
    assert a_invariant(I, "strand") == -3


def test_unknown_method():
    with pytest.raises(ValueError):
        a_invariant(Ideal([], gf(2), 1), "guess")


def test_torsion_determinantal_nilpotent():
    rep = torsion_obstruction(det2x3(0), 2, 2)
    assert rep["obstruction"] == "NILPOTENT"
    assert rep["dim"] == 0
    assert rep["unchecked_hypotheses"]


def test_torsion_needs_integer_ideal():
    with pytest.raises(ValueError):
        torsion_obstruction(det2x3(2), 2, 2)


def test_stage_cap(monkeypatch):
    monkeypatch.setenv("LCLAB_STAGE_CAP", "3")
    with pytest.raises(PieceTooLarge):
        stabilize(rp2_ideal(2), 3, 0)
