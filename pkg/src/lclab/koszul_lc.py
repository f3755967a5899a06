"""Graded pieces of H^j_m(R/I) as colimits of degree strands of Koszul cochain complexes.

Stage t uses the Koszul complex on x_1^t, ..., x_n^t. Its degree-s strand in
cohomological position j' is the sum over |S| = j' of [R/I]_{s + t*j'}, with
components ordered by the bitmask of S (colex order). The differential is
e_S (x) u -> sum_{i not in S} (-1)^{#{k in S: k < i}} e_{S+i} (x) x_i^t u, and
stage t maps to stage t' by multiplying the S-component by x_S^(t'-t).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import combinations

from .exactarith import GF
from .ffmod import PLinearModule, is_nilpotent, mat_inverse, mat_mul, rank as mat_rank
from .linalg import Echelon
from .linstrand import (
    Ideal,
    PieceTooLarge,
    dimension_from_numerator,
    hilbert_numerator,
    piece_cap,
)

__all__ = [
    "FrobeniusVerdict",
    "StabilizationError",
    "StableStrand",
    "StageCohomology",
    "StageComplex",
    "a_invariant",
    "a_invariant_report",
    "frobenius_matrix",
    "stabilize",
    "strand_cohomology",
    "torsion_obstruction",
    "transition",
]

DEFAULT_WINDOW = 2
DEFAULT_T_MAX = 8
DEFAULT_MAX_STAGE = 64

LOCALIZATION_CAVEAT = (
    "not checked: multiplication by p must also be injective on H^(k+1)_I(R) "
    "after inverting each variable x_i; the verdict concerns only the graded piece at m"
)


class StabilizationError(RuntimeError):
    """No stable window was found; no verdict is given."""


def _subsets(n: int, size: int) -> list[int]:
    masks = [sum(1 << i for i in c) for c in combinations(range(n), size)]
    return sorted(masks)


def _bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class StageComplex:
    """Degree-s strand of the stage-t Koszul cochain complex of R/I."""

    def __init__(self, ideal: Ideal, t: int, s: int):
        if not ideal.ring.char:
            raise ValueError("the Koszul engine works over prime fields")
        if t < 1:
            raise ValueError("stage must be positive")
        self.ideal, self.t, self.s = ideal, t, s
        self.n = ideal.nvars
        self.p = ideal.ring.char
        self._layout: dict[int, tuple] = {}

    def layout(self, j: int):
        """(masks, piece, offsets, total, position of mask) for position j; piece is None when empty."""
        got = self._layout.get(j)
        if got is not None:
            return got
        if j < 0 or j > self.n:
            got = ((), None, (), 0, {})
        else:
            d = self.s + self.t * j
            masks = _subsets(self.n, j)
            piece = self.ideal.piece(d) if d >= 0 else None
            size = piece.dim if piece is not None else 0
            total = size * len(masks)
            if total > piece_cap():
                raise PieceTooLarge(
                    f"strand piece j'={j} at stage {self.t} has {total} basis elements, above the cap {piece_cap()}"
                )
            offsets = tuple(k * size for k in range(len(masks)))
            got = (tuple(masks), piece, offsets, total, {m: i for i, m in enumerate(masks)})
        self._layout[j] = got
        return got

    def dim(self, j: int) -> int:
        return self.layout(j)[3]

    def locate(self, j: int, col: int):
        """(mask, standard monomial) of basis column col in position j."""
        masks, piece, offsets = self.layout(j)[:3]
        k = bisect_right(offsets, col) - 1
        return masks[k], piece.standard[col - offsets[k]]

    def column(self, j: int, mask: int, std_idx: int) -> int:
        lay = self.layout(j)
        return lay[2][lay[4][mask]] + std_idx

    def image(self, j: int, col: int) -> dict:
        """d(basis vector col) in position j+1."""
        if self.dim(j + 1) == 0:
            return {}
        mask, u = self.locate(j, col)
        _, tpiece, toffsets, _, tpos = self.layout(j + 1)
        p, t = self.p, self.t
        out: dict = {}
        below = 0
        for i in range(self.n):
            bit = 1 << i
            if mask & bit:
                below += 1
                continue
            sign = -1 if below & 1 else 1
            e = list(u)
            e[i] += t
            nf = tpiece.nf_monomial(tuple(e))
            if not nf:
                continue
            base = toffsets[tpos[mask | bit]]
            for k, v in nf.items():
                c = base + k
                x = (out.get(c, 0) + sign * v) % p
                if x:
                    out[c] = x
                else:
                    out.pop(c, None)
        return out

    def images(self, j: int):
        for col in range(self.dim(j)):
            yield col, self.image(j, col)

    def check_dd(self, j: int) -> bool:
        """d o d = 0 from position j to j+2, checked exactly."""
        for col, v in self.images(j):
            acc: dict = {}
            for c, a in v.items():
                for c2, b in self.image(j + 1, c).items():
                    acc[c2] = (acc.get(c2, 0) + a * b) % self.p
            if any(acc.values()):
                return False
        return True


class StageCohomology:
    """H^j of the degree-s strand at stage t, with cocycle representatives."""

    def __init__(self, ideal: Ideal, j: int, s: int, t: int):
        self.ideal, self.j, self.s, self.t = ideal, j, s, t
        self.complex = cx = StageComplex(ideal, t, s)
        p = cx.p
        n_j = cx.dim(j)
        bound = Echelon(p)
        if n_j:
            for _, v in cx.images(j - 1):
                if v:
                    bound.insert(v)
        self._bound = bound
        cocycle_rank = Echelon(p)
        if n_j and cx.dim(j + 1):
            for _, v in cx.images(j):
                if v:
                    cocycle_rank.insert(v)
        self.dim = n_j - cocycle_rank.rank - bound.rank
        self.reps: list[dict] = []
        self._coords = None
        if self.dim:
            self._build_basis()

    def _build_basis(self):
        cx, p, j = self.complex, self.complex.p, self.j
        kern = Echelon(p, track=True)
        cocycles = []
        for col, v in cx.images(j):
            z = kern.insert(v, {col: 1})
            if z is not None:
                cocycles.append(z)
        coords = self._bound.copy(track=True)
        for z in cocycles:
            if coords.insert(z, {len(self.reps): 1}) is None:
                self.reps.append(z)
        assert len(self.reps) == self.dim
        self._coords = coords

    def coordinates(self, cocycle: dict) -> list[int]:
        """Coordinates of the class of a cocycle in the representative basis."""
        if not self.dim:
            return []
        resid, comb = self._coords.reduce(cocycle)
        if resid:
            raise ValueError("vector is not a cocycle")
        return [comb.get(k, 0) % self.complex.p for k in range(self.dim)]

    def rep_terms(self, k: int):
        """Representative k as (mask, monomial, coefficient) triples."""
        cx = self.complex
        for col, c in sorted(self.reps[k].items()):
            mask, u = cx.locate(self.j, col)
            yield mask, u, c


def strand_cohomology(ideal: Ideal, j: int, s: int, t: int) -> StageCohomology:
    return StageCohomology(ideal, j, s, t)


class _Stages:
    """Per-(ideal, j, s) cache of stage cohomologies."""

    def __init__(self, ideal: Ideal, j: int, s: int):
        self.ideal, self.j, self.s = ideal, j, s
        self.stages: dict[int, StageCohomology] = {}

    def __getitem__(self, t: int) -> StageCohomology:
        h = self.stages.get(t)
        if h is None:
            h = self.stages[t] = StageCohomology(self.ideal, self.j, self.s, t)
        return h


def _transition(src: StageCohomology, dst: StageCohomology) -> list[list[int]]:
    """Matrix (dst.dim x src.dim) of the map induced by x_S^(t'-t)."""
    if dst.t < src.t:
        raise ValueError("transitions go up in stage")
    cx = dst.complex
    p = cx.p
    j, shift = src.j, dst.t - src.t
    _, piece, offsets, _, pos = cx.layout(j)
    cols = []
    for k in range(src.dim):
        vec: dict = {}
        for mask, u, c in src.rep_terms(k):
            e = list(u)
            for i in _bits(mask):
                e[i] += shift
            base = offsets[pos[mask]]
            for idx, v in piece.nf_monomial(tuple(e)).items():
                col = base + idx
                x = (vec.get(col, 0) + c * v) % p
                if x:
                    vec[col] = x
                else:
                    vec.pop(col, None)
        cols.append(dst.coordinates(vec))
    return [[cols[c][r] for c in range(src.dim)] for r in range(dst.dim)]


def transition(ideal: Ideal, j: int, s: int, t: int, t2: int) -> list[list[int]]:
    st = _Stages(ideal, j, s)
    return _transition(st[t], st[t2])


def _invertible(F: GF, A, dim: int) -> bool:
    return len(A) == dim and all(len(r) == dim for r in A) and mat_rank(F, A) == dim


@dataclass
class StableStrand:
    T: int
    dim: int
    j: int
    s: int
    window: int
    dims: list[int]
    transitions: list[list[list[int]]]
    cohomology: StageCohomology = field(repr=False)


def stabilize(ideal: Ideal, j: int, s: int, window: int = DEFAULT_WINDOW, t_max: int = DEFAULT_T_MAX,
              _stages: _Stages | None = None) -> StableStrand:
    """Least T <= t_max whose next `window` transitions are isomorphisms of equal dimension.

    Stages with s + t*j < 0 are skipped: their strands vanish for degree
    reasons alone and would fake a stable zero.
    """
    st = _stages or _Stages(ideal, j, s)
    F = GF(ideal.ring.char)
    first = max(1, -(s // j)) if j > 0 and s < 0 else 1
    for T in range(first, t_max + 1):
        dims = [st[t].dim for t in range(T, T + window + 1)]
        if len(set(dims)) != 1:
            continue
        mats = []
        ok = True
        for t in range(T, T + window):
            A = _transition(st[t], st[t + 1])
            if dims[0] and not _invertible(F, A, dims[0]):
                ok = False
                break
            mats.append(A)
        if ok:
            return StableStrand(T, dims[0], j, s, window, dims, mats, st[T])
    raise StabilizationError("stabilization not detected within t_max")


@dataclass
class FrobeniusVerdict:
    p: int
    j: int
    s: int
    stage_T: int
    stage_pT: int | None
    dim: int
    matrix: list[list[int]]
    nilpotent: bool
    index: int
    stable: StableStrand = field(repr=False)

    def report(self, ideal_text=None) -> dict:
        return {
            "ideal": ideal_text,
            "p": self.p,
            "j": self.j,
            "s": self.s,
            "stage_T": self.stage_T,
            "stage_pT": self.stage_pT,
            "dim": self.dim,
            "frobenius_matrix": self.matrix,
            "verdict": "nilpotent" if self.nilpotent else "non-nilpotent",
            "nilpotency_index": self.index,
            "evidence": {
                "stages": list(range(self.stable.T, self.stable.T + self.stable.window + 1)),
                "stage_dims": self.stable.dims,
                "transition_dims": [[len(m), len(m[0]) if m else self.stable.dim] for m in self.stable.transitions],
                "transition_matrices": self.stable.transitions,
                "stabilization": f"heuristic: {self.stable.window} consecutive isomorphisms",
            },
        }


def frobenius_matrix(ideal: Ideal, j: int, window: int = DEFAULT_WINDOW, t_max: int = DEFAULT_T_MAX,
                     max_stage: int = DEFAULT_MAX_STAGE, stage: int | None = None) -> FrobeniusVerdict:
    """Matrix of the natural Frobenius action on [H^j_m(R/I)]_0 over F_p.

    The matrix is written in the basis of stage `stage` (default: the
    stabilized stage T); a later stage must map isomorphically from T.
    """
    p = ideal.ring.char
    if not p:
        raise ValueError("Frobenius needs a prime field")
    st = _Stages(ideal, j, 0)
    stable = stabilize(ideal, j, 0, window, t_max, st)
    T, dim = stable.T, stable.dim
    F = GF(p)
    if stage is not None:
        if stage < T:
            raise ValueError(f"stage {stage} precedes the stabilized stage {T}")
        if stage > T and (st[stage].dim != dim or not _invertible(F, _transition(st[T], st[stage]), dim)):
            raise StabilizationError(f"stage {stage} is not isomorphic to stage {T}")
        T = stage
    if dim == 0:
        return FrobeniusVerdict(p, j, 0, T, None, 0, [], True, 0, stable)
    pT = p * T
    if pT > max_stage:
        raise StabilizationError(f"stage cap exceeded at pT = {pT}")
    src, big = st[T], st[pT]
    if big.dim != dim:
        raise StabilizationError(f"dimension changes between stages {T} and {pT}")
    trans = _transition(src, big)
    inv = mat_inverse(F, trans)
    if inv is None:
        raise StabilizationError(f"transition {T} -> {pT} is not invertible")
    cx = big.complex
    _, piece, offsets, _, pos = cx.layout(j)
    cols = []
    for k in range(dim):
        vec: dict = {}
        for mask, u, c in src.rep_terms(k):
            # (c u)^p = c u^p over F_p
            base = offsets[pos[mask]]
            for idx, v in piece.nf_monomial(tuple(p * a for a in u)).items():
                col = base + idx
                x = (vec.get(col, 0) + c * v) % p
                if x:
                    vec[col] = x
                else:
                    vec.pop(col, None)
        cols.append(big.coordinates(vec))
    image = [[cols[c][r] for c in range(dim)] for r in range(dim)]
    Fm = [list(r) for r in mat_mul(F, inv, image)]
    nil, index = is_nilpotent(PLinearModule(F, Fm))
    return FrobeniusVerdict(p, j, 0, T, pT, dim, Fm, nil, index, stable)


def torsion_obstruction(ideal_z: Ideal, p: int, k: int, **opts) -> dict:
    """Run the degree-0 Frobenius criterion on H^(n-k)_m of R/(I + pR)."""
    if ideal_z.ring.char:
        raise ValueError("expected an ideal with integer coefficients")
    reduced = ideal_z.reduce_mod(p)
    j = ideal_z.nvars - k
    v = frobenius_matrix(reduced, j, **opts)
    rep = v.report([str(g) for g in ideal_z.gens])
    rep.update(
        {
            "k": k,
            "obstruction": "NILPOTENT" if v.nilpotent else "NON-NILPOTENT",
            "conclusion": (
                "multiplication by p on H^(k+1)_I(R) is injective, provided the unchecked hypothesis holds"
                if v.nilpotent
                else "H^k_I(R/pR) has a nonzero graded F-module quotient supported only at m; "
                "no injectivity conclusion for p"
            ),
            "unchecked_hypotheses": [LOCALIZATION_CAVEAT],
        }
    )
    return rep


def _auto_numerator(ideal: Ideal) -> list[int]:
    top = max((g.degree for g in ideal.gens), default=0)
    cutoff = top + ideal.nvars + 5
    for _ in range(6):
        try:
            return hilbert_numerator(ideal, cutoff)
        except ValueError:
            cutoff *= 2
    raise ValueError("Hilbert numerator did not settle")


def a_invariant(ideal: Ideal, method: str = "strand", dim: int | None = None, s_max: int | None = None,
                depth: int | None = None, window: int = DEFAULT_WINDOW, t_max: int = DEFAULT_T_MAX) -> int:
    return a_invariant_report(ideal, method, dim, s_max, depth, window, t_max)["a_invariant"]


def a_invariant_report(ideal: Ideal, method: str = "strand", dim: int | None = None, s_max: int | None = None,
                       depth: int | None = None, window: int = DEFAULT_WINDOW, t_max: int = DEFAULT_T_MAX,
                       cm: bool = False) -> dict:
    """Top nonzero degree of H^dim_m(R/I).

    hilbert: deg Q - n, valid for Cohen-Macaulay quotients (the caller's
    assertion is recorded). strand: scans degrees s_max, s_max - 1, ... down
    `depth` steps; s_max defaults to the sum of generator degrees minus n,
    which is exact for complete intersections, and degrees above it are not
    examined.
    """
    n = ideal.nvars
    if method == "hilbert":
        q = _auto_numerator(ideal)
        return {"method": "hilbert", "a_invariant": len(q) - 1 - n, "numerator": q, "cohen_macaulay_asserted": cm}
    if method != "strand":
        raise ValueError(f"unknown method {method}")
    if dim is None:
        dim = dimension_from_numerator(_auto_numerator(ideal), n)
    if s_max is None:
        s_max = sum(g.degree for g in ideal.gens) - n
    if depth is None:
        depth = 2 * n + 2
    scanned = []
    for s in range(s_max, s_max - depth - 1, -1):
        st = stabilize(ideal, dim, s, window, t_max)
        scanned.append({"s": s, "dim": st.dim, "stage_T": st.T})
        if st.dim:
            return {"method": "strand", "a_invariant": s, "krull_dim": dim, "scan_start": s_max, "scanned": scanned}
    raise StabilizationError("scan window exhausted")
