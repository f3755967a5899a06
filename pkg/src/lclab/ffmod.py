"""Finite-dimensional modules with a Frobenius action over finite fields.

A module is a pair (F, A) acting by f(v) = A * phi(v), phi the entrywise p-th power.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactarith import GF, artin_schreier_solve, embed, extend_by_artin_schreier, MAX_EXT_DEGREE

__all__ = [
    "FixedBasis",
    "PLinearModule",
    "Section",
    "column_space",
    "fixed_basis",
    "fixed_points",
    "format_matrix",
    "is_nilpotent",
    "iterate",
    "kernel",
    "mat_inverse",
    "mat_mul",
    "nilpotent_part",
    "parse_matrix",
    "rank",
    "reduce_mod",
    "reduced",
    "solve",
    "split_surjection",
    "stable_image",
]


# --- dense matrices over a GF: tuples of row tuples ---

def _mat(rows):
    return tuple(tuple(r) for r in rows)


def identity(r: int):
    return _mat([[1 if i == j else 0 for j in range(r)] for i in range(r)])


def mat_mul(F: GF, A, B):
    if not A:
        return ()
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        new = [0] * m
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        new[j] = F.add(new[j], F.mul(a, b))
        out.append(new)
    return _mat(out)


def mat_vec(F: GF, A, v):
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return tuple(out)


def frob(F: GF, A, e: int = 1):
    """Entrywise x -> x^(p^e); e may be negative (inverse Frobenius)."""
    e %= F.k
    if e == 0:
        return _mat(A) if A and isinstance(A[0], (tuple, list)) else tuple(A)
    if A and isinstance(A[0], (tuple, list)):
        return _mat([[F.frob(x, e) for x in row] for row in A])
    return tuple(F.frob(x, e) for x in A)


def transpose(A, ncols=None):
    if not A:
        return _mat([[] for _ in range(ncols or 0)])
    return _mat(zip(*A))


def rref(F: GF, rows):
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return _mat(rows[:r]), pivots


def rank(F: GF, A) -> int:
    return len(rref(F, A)[1])


def kernel(F: GF, A, ncols: int | None = None):
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    n = len(A[0]) if A else (ncols or 0)
    R, piv = rref(F, A)
    out = []
    for f in range(n):
        if f in piv:
            continue
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = F.neg(R[i][f])
        out.append(tuple(v))
    return out


def column_space(F: GF, A, nrows: int | None = None):
    """Canonical basis (RREF rows) of the span of the columns of A."""
    return rref(F, transpose(A, nrows))[0]


def span(F: GF, vectors):
    return rref(F, vectors)[0] if vectors else ()


def reduce_mod(F: GF, basis, pivots, v):
    """Reduce v modulo the span of an RREF basis with the given pivots."""
    v = list(v)
    for row, c in zip(basis, pivots):
        if v[c]:
            f = v[c]
            v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, row)]
    return tuple(v)


def solve(F: GF, A, b):
    """One solution of A x = b with free variables zero, or None."""
    n = len(A[0]) if A else 0
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(F, aug)
    if n in piv:
        return None
    x = [0] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return tuple(x)


def mat_inverse(F: GF, A):
    r = len(A)
    cols = []
    for j in range(r):
        e = [0] * r
        e[j] = 1
        x = solve(F, A, e)
        if x is None:
            return None
        cols.append(x)
    return transpose(cols, r)


def embed_matrix(F: GF, F2: GF, A):
    return _mat([[embed(F, F2, x) for x in row] for row in A])


def parse_matrix(text: str, F: GF):
    rows = [r for r in text.strip().split(";")]
    out = [[F.parse(x) for x in r.split(",")] for r in rows if r.strip()]
    if len({len(r) for r in out}) > 1:
        raise ValueError("ragged matrix")
    return _mat(out)


def format_matrix(F: GF, A) -> str:
    return ";".join(",".join(F.format(x) for x in row) for row in A)


# --- modules ---

@dataclass(frozen=True)
class PLinearModule:
    field: GF
    matrix: tuple

    def __post_init__(self):
        A = _mat(self.matrix)
        if any(len(row) != len(A) for row in A):
            raise ValueError("matrix must be square")
        if any(not 0 <= x < self.field.order for row in A for x in row):
            raise ValueError("matrix entries outside the field")
        object.__setattr__(self, "matrix", A)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def apply(self, v):
        return mat_vec(self.field, self.matrix, frob(self.field, tuple(v)))


def iterate(M: PLinearModule, e: int):
    """B_e with f^e(v) = B_e * phi^e(v)."""
    if e < 0:
        raise ValueError("e must be nonnegative")
    F, A = M.field, M.matrix
    B = identity(M.rank)
    for _ in range(e):
        B = mat_mul(F, A, frob(F, B))
    return B


def stable_image(M: PLinearModule):
    """Canonical basis of the intersection of the images of f^e."""
    F, r = M.field, M.rank
    B = identity(r)
    cur = column_space(F, B, r)
    while True:
        B = mat_mul(F, M.matrix, frob(F, B))
        nxt = column_space(F, B, r)
        if len(nxt) == len(cur):
            return cur
        cur = nxt


def nilpotent_part(M: PLinearModule):
    """Canonical basis of the union of the kernels of f^e."""
    F, r = M.field, M.rank
    cur: tuple = ()
    B = identity(r)
    e = 0
    while True:
        e += 1
        B = mat_mul(F, M.matrix, frob(F, B))
        # f^e(v) = B phi^e(v) = 0  iff  phi^e(v) in ker B
        ker = [frob(F, v, -e) for v in kernel(F, B, r)]
        nxt = span(F, ker)
        if len(nxt) == len(cur):
            return cur
        cur = nxt


def reduced(M: PLinearModule):
    """M / M_nil with its induced matrix; returns (module, complement coordinate indices)."""
    F, r = M.field, M.rank
    nil = nilpotent_part(M)
    piv = [next(i for i, x in enumerate(row) if x) for row in nil]
    comp = [i for i in range(r) if i not in piv]
    cols = []
    for i in comp:
        img = reduce_mod(F, nil, piv, [M.matrix[k][i] for k in range(r)])
        cols.append([img[c] for c in comp])
    return PLinearModule(F, transpose(cols, len(comp))), comp


def project_to_reduced(M: PLinearModule, vectors):
    """Images of vectors of M in M_red coordinates, as a canonical subspace basis."""
    F = M.field
    nil = nilpotent_part(M)
    piv = [next(i for i, x in enumerate(row) if x) for row in nil]
    comp = [i for i in range(M.rank) if i not in piv]
    imgs = [reduce_mod(F, nil, piv, v) for v in vectors]
    return span(F, [tuple(v[c] for c in comp) for v in imgs])


def is_nilpotent(M: PLinearModule):
    """(True, least e with f^e = 0) or (False, 0)."""
    F, r = M.field, M.rank
    if r == 0:
        return True, 0
    B = identity(r)
    prev = r
    e = 0
    while True:
        e += 1
        B = mat_mul(F, M.matrix, frob(F, B))
        rk = rank(F, B)
        if rk == 0:
            return True, e
        if rk == prev:
            return False, 0
        prev = rk


def fixed_points(M: PLinearModule):
    """F_p-basis of {v : f(v) = v}."""
    F, r = M.field, M.rank
    p, k = F.p, F.k
    Fp = GF(p)
    cols = []
    for i in range(r):
        for l in range(k):
            v = [0] * r
            v[i] = p**l
            img = M.apply(v)
            diff = [F.sub(a, b) for a, b in zip(img, v)]
            cols.append([c for x in diff for c in F.coords(x)])
    A = transpose(cols, r * k)
    out = []
    for sol in kernel(Fp, A, r * k):
        v = tuple(F.from_coords(sol[i * k:(i + 1) * k]) for i in range(r))
        assert M.apply(v) == v
        out.append(v)
    return out


@dataclass(frozen=True)
class FixedBasis:
    field: GF
    basis: tuple
    extension_steps: int = 0


def _order(F: GF, C, cap: int = 1 << 20) -> int:
    r = len(C)
    I = identity(r)
    P = C
    for n in range(1, cap):
        if P == I:
            return n
        P = mat_mul(F, P, C)
    raise ValueError("matrix order not found")


def _ladder(M: PLinearModule):
    """Extension degrees (over F) that can carry a full fixed basis, smallest first.

    Fixed vectors satisfy v = C^N phi^(kN)(v) with C = B_k, so all of them lie
    over the degree-N extension when C^N = 1; only divisors of N can matter.
    """
    F = M.field
    N = _order(F, iterate(M, F.k))
    return [m for m in range(2, N + 1) if N % m == 0 and F.k * m <= MAX_EXT_DEGREE]


def fixed_basis(M: PLinearModule, max_ext_steps: int = 3) -> FixedBasis | None:
    """Basis of fixed vectors over F or a finite extension; None when the budget runs out."""
    F, r = M.field, M.rank
    if rank(F, M.matrix) < r:
        raise ValueError("fixed bases need an injective Frobenius action")
    fp = fixed_points(M)
    if len(fp) == r:
        return FixedBasis(F, tuple(fp), 0)
    for step, m in enumerate(_ladder(M)[:max_ext_steps], start=1):
        F2 = GF(F.p, F.k * m)
        M2 = PLinearModule(F2, embed_matrix(F, F2, M.matrix))
        fp = fixed_points(M2)
        if len(fp) == r:
            return FixedBasis(F2, tuple(fp), step)
    return None


@dataclass(frozen=True)
class Section:
    field: GF
    matrix: tuple
    extensions: tuple = field(default_factory=tuple)


def _check_equivariant(F, AM, AN, P):
    if mat_mul(F, P, AM) != mat_mul(F, AN, frob(F, P)):
        raise ValueError("projection does not commute with the Frobenius actions")


def split_surjection(M: PLinearModule, N: PLinearModule, proj, max_ext_steps: int = 0) -> Section | None:
    """Equivariant section of proj: M -> N by lifting a fixed basis of N.

    Each lift is corrected inside the kernel L by Artin-Schreier roots in the
    coordinates of a fixed basis of L. The field is extended (at most
    max_ext_steps times) when a fixed basis or a root is missing; None means
    the budget ran out.
    """
    base = M.field
    if N.field != base:
        raise ValueError("modules over different fields")
    P0 = _mat(proj)
    rM, rN = M.rank, N.rank
    if len(P0) != rN or any(len(row) != rM for row in P0):
        raise ValueError("projection has the wrong shape")
    _check_equivariant(base, M.matrix, N.matrix, P0)
    if rank(base, P0) != rN:
        raise ValueError("projection is not surjective")

    F = base
    steps: list[str] = []
    while True:
        AM, AN, P = (embed_matrix(base, F, X) for X in (M.matrix, N.matrix, P0))
        Kb = kernel(F, P, rM)
        rL = len(Kb)
        K = transpose(Kb, rM)
        # matrix of f on L in the basis Kb:  AM phi(K) = K AL
        img = mat_mul(F, AM, frob(F, K))
        AL = transpose([solve(F, K, [img[i][j] for i in range(rM)]) for j in range(rL)], rL)
        ML, MN = PLinearModule(F, AL), PLinearModule(F, AN)
        need = None
        for sub in (ML, MN):
            if rank(F, sub.matrix) < sub.rank:
                return None
            if len(fixed_points(sub)) < sub.rank:
                need = sub
                break
        if need is not None:
            if len(steps) >= max_ext_steps:
                return None
            ladder = _ladder(need)
            if not ladder:
                return None
            F = GF(F.p, F.k * ladder[0])
            steps.append(str(F))
            continue
        E = [mat_vec(F, K, x) for x in fixed_points(ML)]
        Emat = transpose(E, rM)
        V = fixed_points(MN)
        W = []
        missing = None
        for v in V:
            lift = solve(F, P, v)
            fl = mat_vec(F, AM, frob(F, lift))
            d = [F.sub(a, b) for a, b in zip(fl, lift)]
            cs = solve(F, Emat, d) if rL else ()
            w = list(lift)
            for c, e in zip(cs, E):
                t = artin_schreier_solve(F, c)
                if t is None:
                    missing = c
                    break
                w = [F.add(x, F.mul(t, y)) for x, y in zip(w, e)]
            if missing is not None:
                break
            W.append(tuple(w))
        if missing is not None:
            if len(steps) >= max_ext_steps:
                return None
            F, _ = extend_by_artin_schreier(F, missing)
            steps.append(str(F))
            continue
        Vinv = mat_inverse(F, transpose(V, rN))
        sigma = mat_mul(F, transpose(W, rM), Vinv)
        assert mat_mul(F, P, sigma) == identity(rN)
        assert mat_mul(F, sigma, AN) == mat_mul(F, AM, frob(F, sigma))
        return Section(F, sigma, tuple(steps))
