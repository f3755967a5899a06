"""Generic, alternating and symmetric determinantal ideals, Stanley-Reisner ideals,
closed-form height/arithmetic-rank formulas, vanishing predictors and the
x11-localization check for generic minors.

Variables are flattened: generic x_ij -> x_{(i-1)n+j}; alternating x_ij (i<j)
and symmetric x_ij (i<=j) are numbered in lexicographic order of (i, j).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .linstrand import Ideal, membership_solve
from .poly import QQ, ZZ, CoefficientRing, MultiPoly, gf
from .simplicial import parse_faces

__all__ = [
    "FAMILIES",
    "IdealFamilySpec",
    "alternating_matrix",
    "build_ideal",
    "determinant",
    "family_invariants",
    "generic_matrix",
    "hypersurface_Bdt",
    "localization_check",
    "minors_ideal",
    "parse_family",
    "pfaffian",
    "pfaffians_ideal",
    "stanley_reisner",
    "symmetric_matrix",
    "symmetric_minors_ideal",
    "vanishing_predict",
]

FAMILIES = ("generic", "alternating", "symmetric", "stanley_reisner", "hypersurface_Bdt")
_ALIASES = {"sr": "stanley_reisner", "bdt": "hypersurface_Bdt"}


def generic_matrix(m: int, n: int, ring: CoefficientRing = ZZ):
    N = m * n
    return [[MultiPoly.var(ring, N, i * n + j + 1) for j in range(n)] for i in range(m)]


def _pair_index(n: int, diagonal: bool) -> dict:
    pairs = [(i, j) for i in range(n) for j in range(i if diagonal else i + 1, n)]
    return {ij: k + 1 for k, ij in enumerate(pairs)}


def alternating_matrix(n: int, ring: CoefficientRing = ZZ):
    idx = _pair_index(n, False)
    N = len(idx)
    zero = MultiPoly.zero(ring, N)
    rows = [[zero] * n for _ in range(n)]
    for (i, j), k in idx.items():
        x = MultiPoly.var(ring, N, k)
        rows[i][j], rows[j][i] = x, -x
    return rows


def symmetric_matrix(n: int, ring: CoefficientRing = ZZ):
    idx = _pair_index(n, True)
    N = len(idx)
    rows = [[None] * n for _ in range(n)]
    for (i, j), k in idx.items():
        rows[i][j] = rows[j][i] = MultiPoly.var(ring, N, k)
    return rows


def determinant(M) -> MultiPoly:
    """Laplace expansion along the first row."""
    t = len(M)
    if t == 1:
        return M[0][0]
    total = None
    for j in range(t):
        if not M[0][j]:
            continue
        sub = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * determinant(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return M[0][0] - M[0][0]
    return total


def pfaffian(A) -> MultiPoly:
    """pf(A) = sum_{j>=2} (-1)^j a_1j pf(A_1j), indices 1-based, A_1j deleting rows/cols 1 and j."""
    t = len(A)
    if t % 2:
        raise ValueError("Pfaffian of an odd-sized matrix")
    if t == 2:
        return A[0][1]
    total = None
    for j in range(1, t):
        keep = [k for k in range(1, t) if k != j]
        sub = [[A[a][b] for b in keep] for a in keep]
        term = A[0][j] * pfaffian(sub)
        if j % 2 == 0:  # 1-based index j+1 odd
            term = -term
        total = term if total is None else total + term
    return total


def _submatrix(M, rows, cols):
    return [[M[i][j] for j in cols] for i in rows]


def minors_ideal(m: int, n: int, t: int, ring: CoefficientRing = ZZ) -> list[MultiPoly]:
    """All t x t minors, rows then columns in lexicographic order of index sets."""
    if not 1 <= t <= min(m, n):
        raise ValueError(f"need 1 <= t <= min(m, n), got t={t}")
    X = generic_matrix(m, n, ring)
    return [determinant(_submatrix(X, r, c)) for r in combinations(range(m), t) for c in combinations(range(n), t)]


def pfaffians_ideal(n: int, t: int, ring: CoefficientRing = ZZ) -> list[MultiPoly]:
    if t % 2 or not 2 <= t <= n:
        raise ValueError(f"need t even with 2 <= t <= n, got n={n} t={t}")
    A = alternating_matrix(n, ring)
    return [pfaffian(_submatrix(A, s, s)) for s in combinations(range(n), t)]


def symmetric_minors_ideal(n: int, t: int, ring: CoefficientRing = ZZ) -> list[MultiPoly]:
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got n={n} t={t}")
    S = symmetric_matrix(n, ring)
    out, seen = [], set()
    for r in combinations(range(n), t):
        for c in combinations(range(n), t):
            d = determinant(_submatrix(S, r, c))
            # transposed index sets give the same minor
            if d and d not in seen:
                seen.add(d)
                out.append(d)
    return out


def stanley_reisner(n: int, nonfaces, ring: CoefficientRing = ZZ) -> list[MultiPoly]:
    gens = []
    for face in nonfaces:
        face = list(face)
        if not face:
            raise ValueError("empty nonface")
        if len(set(face)) != len(face):
            raise ValueError(f"nonface {face} repeats a vertex")
        if not all(1 <= v <= n for v in face):
            raise ValueError(f"nonface {face} has a vertex outside 1..{n}")
        gens.append(MultiPoly.monomial(ring, tuple(1 if i + 1 in face else 0 for i in range(n))))
    return gens


def hypersurface_Bdt(d: int, t: int, ring: CoefficientRing = ZZ) -> MultiPoly:
    """X1^t...Xd^t - sum Y_i X_i^(t+1) with X_i = x_i and Y_i = x_(d+i)."""
    if d < 1 or t < 1:
        raise ValueError("need d >= 1 and t >= 1")
    N = 2 * d
    f = MultiPoly.monomial(ring, tuple([t] * d + [0] * d))
    for i in range(d):
        e = [0] * N
        e[i], e[d + i] = t + 1, 1
        f = f - MultiPoly.monomial(ring, tuple(e))
    return f


@dataclass(frozen=True)
class IdealFamilySpec:
    family: str
    params: tuple = ()  # sorted (name, value) pairs
    ring: CoefficientRing = ZZ
    nonfaces: tuple = field(default=())

    def __post_init__(self):
        fam = _ALIASES.get(self.family, self.family)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "params", tuple(sorted(dict(self.params).items())))
        object.__setattr__(self, "nonfaces", tuple(tuple(sorted(f)) for f in self.nonfaces))
        self.validate()

    def __getitem__(self, key):
        return dict(self.params)[key]

    def validate(self):
        p = dict(self.params)
        need = {
            "generic": ("m", "n", "t"),
            "alternating": ("n", "t"),
            "symmetric": ("n", "t"),
            "stanley_reisner": ("n",),
            "hypersurface_Bdt": ("d", "t"),
        }
        if self.family not in need:
            raise ValueError(f"unknown family {self.family!r}")
        missing = [k for k in need[self.family] if k not in p]
        if missing:
            raise ValueError(f"{self.family} needs {', '.join(missing)}")
        if any(v < 1 for v in p.values()):
            raise ValueError("parameters must be positive")
        if self.family == "generic" and not p["t"] <= min(p["m"], p["n"]):
            raise ValueError("t exceeds the matrix size")
        if self.family == "alternating" and (p["t"] % 2 or not 2 <= p["t"] <= p["n"]):
            raise ValueError("alternating family needs t even with 2 <= t <= n")
        if self.family == "symmetric" and p["t"] > p["n"]:
            raise ValueError("t exceeds the matrix size")

    @property
    def nvars(self) -> int:
        p = dict(self.params)
        return {
            "generic": lambda: p["m"] * p["n"],
            "alternating": lambda: comb(p["n"], 2),
            "symmetric": lambda: comb(p["n"] + 1, 2),
            "stanley_reisner": lambda: p["n"],
            "hypersurface_Bdt": lambda: 2 * p["d"],
        }[self.family]()

    def to_text(self) -> str:
        short = {"stanley_reisner": "sr", "hypersurface_Bdt": "bdt"}.get(self.family, self.family)
        parts = [short] + [f"{k}={v}" for k, v in self.params]
        if self.family == "stanley_reisner":
            parts.append("nonfaces=[" + ",".join("{" + ",".join(map(str, f)) + "}" for f in self.nonfaces) + "]")
        if self.ring != ZZ:
            parts.append(f"char={self.ring.char}")
        return " ".join(parts)


def parse_family(text: str) -> IdealFamilySpec:
    """`generic m=2 n=3 t=2`, `alternating n=6 t=4`, `symmetric n=4 t=3`,
    `sr n=6 nonfaces=[123,124,...]`, `bdt d=3 t=2`; optional `char=<p>`."""
    text = text.strip()
    nonfaces = ()
    m = re.search(r"nonfaces\s*=\s*(\[.*\]|\S+)", text)
    if m:
        body = m.group(1)
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        nonfaces = parse_faces(body)
        text = text[: m.start()] + text[m.end() :]
    words = text.split()
    if not words:
        raise ValueError("empty family spec")
    params, ring = {}, ZZ
    for w in words[1:]:
        if "=" not in w:
            raise ValueError(f"bad token {w!r}")
        k, v = w.split("=", 1)
        if k == "char":
            ring = gf(int(v)) if int(v) else ZZ
        else:
            params[k] = int(v)
    spec = IdealFamilySpec(words[0], tuple(params.items()), ring, nonfaces)
    if spec.family == "stanley_reisner" and not m:
        raise ValueError("sr family needs nonfaces=")
    return spec


def build_ideal(spec: IdealFamilySpec, ring: CoefficientRing | None = None) -> Ideal:
    ring = ring or spec.ring
    p = dict(spec.params)
    fam = spec.family
    if fam == "generic":
        gens = minors_ideal(p["m"], p["n"], p["t"], ring)
    elif fam == "alternating":
        gens = pfaffians_ideal(p["n"], p["t"], ring)
    elif fam == "symmetric":
        gens = symmetric_minors_ideal(p["n"], p["t"], ring)
    elif fam == "stanley_reisner":
        gens = stanley_reisner(p["n"], spec.nonfaces, ring)
    else:
        raise ValueError("the B_{d,t} relation is not homogeneous; use hypersurface_Bdt directly")
    return Ideal(gens, ring, spec.nvars)


def family_invariants(spec: IdealFamilySpec, char: int = 0) -> dict:
    p = dict(spec.params)
    fam = spec.family
    if fam == "generic":
        m, n, t = p["m"], p["n"], p["t"]
        height, ara = (m - t + 1) * (n - t + 1), m * n - t * t + 1
    elif fam == "alternating":
        n, t = p["n"], p["t"]
        height, ara = comb(n - t + 2, 2), comb(n, 2) - comb(t, 2) + 1
    elif fam == "symmetric":
        n, t = p["n"], p["t"]
        height = comb(n - t + 2, 2)
        if char == 2 and t % 2 == 0:
            ara = comb(n, 2) - comb(t, 2) + 1
        else:
            ara = comb(n + 1, 2) - comb(t + 1, 2) + 1
    else:
        raise ValueError(f"no closed-form invariants for {fam}")
    return {"family": fam, "char": char, "height": height, "ara": ara, "critical_index": ara}


def vanishing_predict(dimA: int, spec: IdealFamilySpec) -> dict:
    """Whether H^c_a(A) = 0 is predicted for c the critical index, from dim A alone."""
    p = dict(spec.params)
    fam = spec.family
    out = {"family": fam, "dimA": dimA, "applicable": False, "vanishes": None, "index": None, "threshold": None}
    if fam == "generic":
        m, n, t = p["m"], p["n"], p["t"]
        if not 1 <= t <= min(m, n):
            out["reason"] = "theorem inapplicable: t out of range"
            return out
        if t == m and t == n:
            out["reason"] = "theorem inapplicable: t equals both m and n"
            return out
        threshold, index = m * n, m * n - t * t + 1
    elif fam == "alternating":
        n, t = p["n"], p["t"]
        if t % 2 or not 2 < t < n:
            out["reason"] = "theorem inapplicable: needs t even with 2 < t < n"
            return out
        threshold, index = comb(n, 2), comb(n, 2) - comb(t, 2) + 1
    elif fam == "symmetric":
        n, t = p["n"], p["t"]
        if t % 2 == 0:
            out["reason"] = "theorem inapplicable: no vanishing statement for even-sized symmetric minors"
            return out
        if not 1 < t < n:
            out["reason"] = "theorem inapplicable: needs 1 < t < n"
            return out
        threshold, index = comb(n + 1, 2), comb(n + 1, 2) - comb(t + 1, 2) + 1
    else:
        out["reason"] = f"theorem inapplicable: no predictor for {fam}"
        return out
    out.update(
        applicable=True,
        threshold=threshold,
        index=index,
        vanishes=dimA < threshold,
        reason=f"dim A {'<' if dimA < threshold else '>='} {threshold}",
    )
    return out


def _first_power_in(h: MultiPoly, base: MultiPoly, gens, N: int, D: int):
    """Least e <= N with base^e * h in (gens) within degree D, and its certificate."""
    for e in range(N + 1):
        target = base**e * h
        if target.degree > D:
            return None
        q = membership_solve(target, gens, D)
        if q is not None:
            return e, target, q
    return None


def _verify(target, gens, q) -> bool:
    total = MultiPoly.zero(target.ring, target.nvars)
    for a, g in zip(q, gens):
        total = total + a * g
    return total == target


def localization_check(m: int, n: int, t: int, N: int, D: int) -> dict:
    """Certificates for I_t(X) = I_{t-1}(Y) after inverting x11, with denominators cleared.

    Y' has entries x11*x_ij - x_i1*x_1j (i, j >= 2). Forward: x11^e * Delta lies in
    I_{t-1}(Y') for each t-minor Delta of X. Converse: x11^e * Delta' lies in I_t(X)
    for each (t-1)-minor Delta' of Y'. The least e <= N is searched within degree D.
    """
    if t < 2 or t > min(m, n):
        raise ValueError("need 2 <= t <= min(m, n)")
    ring = QQ
    X = generic_matrix(m, n, ring)
    x11 = X[0][0]
    Yp = [[x11 * X[i][j] - X[i][0] * X[0][j] for j in range(1, n)] for i in range(1, m)]
    big = minors_ideal(m, n, t, ring)
    small = [determinant(_submatrix(Yp, r, c)) for r in combinations(range(m - 1), t - 1)
             for c in combinations(range(n - 1), t - 1)]

    def run(hs, gens):
        found, failed = [], []
        for h in hs:
            got = _first_power_in(h, x11, gens, N, D)
            if got is None:
                failed.append(str(h))
                continue
            e, target, q = got
            found.append(
                {
                    "element": str(h),
                    "exponent": e,
                    "multipliers": [str(a) for a in q],
                    "reverified": _verify(target, gens, q),
                }
            )
        return found, failed

    fwd, fwd_fail = run(big, small)
    back, back_fail = run(small, big)
    ok = not fwd_fail and not back_fail and all(c["reverified"] for c in fwd + back)
    return {
        "m": m,
        "n": n,
        "t": t,
        "N": N,
        "D": D,
        "cleared_minors": [str(g) for g in small],
        "minors": [str(g) for g in big],
        "forward": fwd,
        "converse": back,
        "bound_failures": {"forward": fwd_fail, "converse": back_fail},
        "success": ok,
    }
