"""Graded pieces of R, I and R/I by per-degree row reduction (no Groebner bases)."""

from __future__ import annotations

import math
import os
from functools import lru_cache

from .linalg import Echelon
from .poly import CoefficientRing, MultiPoly

__all__ = [
    "DEFAULT_CAP",
    "Ideal",
    "PieceTooLarge",
    "SparseMatrix",
    "StrandSpace",
    "dimension_from_numerator",
    "hilbert_function",
    "hilbert_numerator",
    "ideal_piece",
    "membership_solve",
    "monomial_basis",
    "monomial_index",
    "mult_matrix",
    "num_monomials",
    "piece_cap",
]

DEFAULT_CAP = 200_000


class PieceTooLarge(RuntimeError):
    pass


def piece_cap() -> int:
    env = os.environ.get("LCLAB_STAGE_CAP")
    return int(env) if env else DEFAULT_CAP


def num_monomials(n: int, d: int) -> int:
    if d < 0:
        return 0
    return math.comb(d + n - 1, n - 1)


@lru_cache(maxsize=512)
def monomial_basis(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Monomials of degree d in n variables, largest first in graded-lex order."""
    if d < 0:
        return ()
    if n == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        out.extend((a,) + rest for rest in monomial_basis(n - 1, d - a))
    return tuple(out)


@lru_cache(maxsize=512)
def monomial_index(n: int, d: int) -> dict:
    return {m: i for i, m in enumerate(monomial_basis(n, d))}


class SparseMatrix:
    """nrows x ncols matrix stored by columns (dict row -> value)."""

    def __init__(self, nrows: int, ncols: int, cols: list[dict]):
        self.nrows, self.ncols, self.cols = nrows, ncols, cols

    def to_dense(self) -> list[list]:
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def is_zero(self) -> bool:
        return not any(self.cols)


class StrandSpace:
    """[R]_d with its monomial basis, the reduced span of [I]_d, and the induced basis of [R/I]_d."""

    def __init__(self, ideal: Ideal, d: int):
        n = ideal.nvars
        self.ideal = ideal
        self.degree = d
        self.monomials = monomial_basis(n, d)
        if len(self.monomials) > piece_cap():
            raise PieceTooLarge(f"[R]_{d} has {len(self.monomials)} monomials, above the cap {piece_cap()}")
        self.index = monomial_index(n, d)
        self.echelon = None
        self._nf: dict = {}
        if ideal.is_monomial:
            gens = [g for g in ideal.lead_exps if sum(g) <= d]
            self.standard = tuple(
                m for m in self.monomials if not any(all(a >= b for a, b in zip(m, g)) for g in gens)
            )
        else:
            ech = Echelon(ideal.ring.char)
            for g in ideal.gens:
                dg = g.degree
                if dg > d:
                    continue
                terms = list(g.terms.items())
                for m in monomial_basis(n, d - dg):
                    ech.insert({self.index[tuple(a + b for a, b in zip(m, e))]: c for e, c in terms})
            self.echelon = ech
            self.standard = tuple(m for i, m in enumerate(self.monomials) if i not in ech.rows)
        self.std_index = {m: i for i, m in enumerate(self.standard)}
        self._col_to_std = {self.index[m]: i for i, m in enumerate(self.standard)}

    @property
    def dim(self) -> int:
        return len(self.standard)

    @property
    def ideal_dim(self) -> int:
        return len(self.monomials) - len(self.standard)

    def nf_monomial(self, e) -> dict:
        """Coordinates of the class of x^e in the standard basis of [R/I]_d."""
        got = self._nf.get(e)
        if got is not None:
            return got
        if self.echelon is None:
            i = self.std_index.get(e)
            got = {} if i is None else {i: 1}
        else:
            resid, _ = self.echelon.reduce({self.index[e]: 1})
            got = {self._col_to_std[c]: v for c, v in resid.items()}
        self._nf[e] = got
        return got

    def normal_form(self, terms) -> dict:
        """Coordinates of a homogeneous element of degree d given as {exponent: coeff} or a MultiPoly."""
        if isinstance(terms, MultiPoly):
            terms = terms.terms
        p = self.ideal.ring.char
        out: dict = {}
        for e, c in terms.items():
            for i, v in self.nf_monomial(tuple(e)).items():
                x = out.get(i, 0) + c * v
                if p:
                    x %= p
                if x:
                    out[i] = x
                else:
                    out.pop(i, None)
        return out

    def element(self, coords: dict) -> MultiPoly:
        return MultiPoly(self.ideal.ring, self.ideal.nvars, {self.standard[i]: c for i, c in coords.items()})


class Ideal:
    """Homogeneous ideal of a polynomial ring over a field, given by generators.

    Graded pieces are memoized per degree; they depend only on (ring, gens, d).
    """

    def __init__(self, gens, ring: CoefficientRing | None = None, nvars: int | None = None):
        gens = list(gens)
        if gens:
            ring = ring or gens[0].ring
            nvars = nvars or gens[0].nvars
        if ring is None or nvars is None:
            raise ValueError("ring and nvars needed for an ideal without generators")
        kept = []
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("generators live in different rings")
            g = g.change_ring(ring) if g.ring != ring else g
            if not g.is_polynomial():
                raise ValueError("negative exponents are not allowed in ideal generators")
            if not g.is_homogeneous():
                raise ValueError(f"inhomogeneous generator {g}")
            if g:
                kept.append(g)
        self.ring = ring
        self.nvars = nvars
        self.gens = tuple(kept)
        self.is_monomial = all(g.is_monomial() for g in self.gens)
        self.lead_exps = tuple(next(iter(g.terms)) for g in self.gens) if self.is_monomial else ()
        self._pieces: dict[int, StrandSpace] = {}

    def __eq__(self, other):
        return isinstance(other, Ideal) and (self.ring, self.nvars, self.gens) == (other.ring, other.nvars, other.gens)

    def __hash__(self):
        return hash((self.ring, self.nvars, self.gens))

    def __repr__(self):
        return f"Ideal({self.ring}, n={self.nvars}, [{', '.join(map(str, self.gens))}])"

    def piece(self, d: int) -> StrandSpace:
        if not self.ring.is_field:
            raise ValueError("graded pieces need field coefficients")
        sp = self._pieces.get(d)
        if sp is None:
            sp = self._pieces[d] = StrandSpace(self, d)
        return sp

    def reduce_mod(self, p: int) -> Ideal:
        from .poly import gf

        return Ideal([g.change_ring(gf(p)) for g in self.gens], gf(p), self.nvars)

    def is_squarefree_monomial(self) -> bool:
        return self.is_monomial and all(max(e) <= 1 for e in self.lead_exps)

    def to_text(self) -> list[str]:
        return [str(g) for g in self.gens]


def _as_ideal(gens, ring=None, nvars=None) -> Ideal:
    return gens if isinstance(gens, Ideal) else Ideal(gens, ring, nvars)


def ideal_piece(gens, d: int, ring=None, nvars=None) -> StrandSpace:
    return _as_ideal(gens, ring, nvars).piece(d)


def mult_matrix(g: MultiPoly, ideal, d: int) -> SparseMatrix:
    """Matrix of multiplication by g from [R/I]_d to [R/I]_{d + deg g} in the standard bases."""
    ideal = _as_ideal(ideal)
    if not g.is_homogeneous() or not g.is_polynomial():
        raise ValueError("multiplier must be a homogeneous polynomial")
    src = ideal.piece(d)
    dg = max(g.degree, 0)
    dst = ideal.piece(d + dg)
    cols = []
    for u in src.standard:
        cols.append(dst.normal_form({tuple(a + b for a, b in zip(u, e)): c for e, c in g.terms.items()}))
    return SparseMatrix(dst.dim, src.dim, cols)


def hilbert_function(gens, d_max: int, ring=None, nvars=None) -> list[int]:
    ideal = _as_ideal(gens, ring, nvars)
    return [ideal.piece(d).dim for d in range(d_max + 1)]


def hilbert_numerator(gens, cutoff: int, ring=None, nvars=None, window: int = 5) -> list[int]:
    """Q(s) with sum_d dim[R/I]_d s^d = Q(s)/(1-s)^n, from the Hilbert function up to cutoff.

    The last `window` coefficients up to the cutoff must vanish, and the cutoff
    must exceed every generator degree by at least `window`.
    """
    ideal = _as_ideal(gens, ring, nvars)
    n = ideal.nvars
    top = max((g.degree for g in ideal.gens), default=0)
    if cutoff < top + window:
        raise ValueError("cutoff too small")
    hf = hilbert_function(ideal, cutoff)
    q = [sum((-1) ** i * math.comb(n, i) * hf[d - i] for i in range(min(d, n) + 1)) for d in range(cutoff + 1)]
    if any(q[cutoff - window + 1 :]):
        raise ValueError("cutoff too small")
    while q and q[-1] == 0:
        q.pop()
    return q


def dimension_from_numerator(q: list[int], n: int) -> int:
    """Krull dimension n - (order of vanishing of Q at s = 1)."""
    q = list(q)
    m = 0
    while q and sum(q) == 0:
        # divide by (1 - s): coefficients of Q/(1-s) are partial sums
        acc, out = 0, []
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = out
        m += 1
    return n - m


def membership_solve(h: MultiPoly, gens, D: int):
    """Polynomials q_i with h = sum q_i g_i and deg q_i <= D - deg g_i, or None.

    Solves the linear system over all monomial multiples up to degree D
    (no homogenization); over ZZ the coefficients are taken in QQ.
    """
    gens = list(gens)
    ring = h.ring.fraction_field()
    n = h.nvars
    h = h.change_ring(ring)
    gens = [g.change_ring(ring) for g in gens]
    if not h:
        return [MultiPoly.zero(ring, n) for _ in gens]
    if h.degree > D:
        return None
    offsets, acc = {}, 0
    for deg in range(D, -1, -1):
        offsets[deg] = acc
        acc += num_monomials(n, deg)

    def col(e):
        dd = sum(e)
        return offsets[dd] + monomial_index(n, dd)[e]

    ech = Echelon(ring.char, track=True)
    unknowns = []
    for i, g in enumerate(gens):
        if not g:
            continue
        for dm in range(D - g.degree, -1, -1):
            for m in monomial_basis(n, dm):
                u = len(unknowns)
                unknowns.append((i, m))
                vec = {col(tuple(a + b for a, b in zip(m, e))): c for e, c in g.terms.items()}
                ech.insert(vec, {u: 1})
    resid, comb = ech.reduce({col(e): c for e, c in h.terms.items()})
    if resid:
        return None
    qs = [dict() for _ in gens]
    for u, c in comb.items():
        i, m = unknowns[u]
        qs[i][m] = c
    out = [MultiPoly(ring, n, q) for q in qs]
    total = MultiPoly.zero(ring, n)
    for q, g in zip(out, gens):
        total = total + q * g
    assert total == h, "membership certificate failed to re-verify"
    return out

