"""Simplicial complexes on {1..n}, reduced cohomology over F_p, and the
degree-zero Hochster formula [H^j_m(R/I)]_0 = H~^(j-1)(Delta(I)).

Faces are bitmasks (bit v-1 for vertex v).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .linalg import Echelon

__all__ = [
    "SimplicialComplex",
    "face_complex",
    "from_nonfaces",
    "hochster_degree_zero",
    "parse_complex",
    "parse_faces",
    "reduced_cohomology",
    "reduced_euler_characteristic",
]


def _verts(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    faces: tuple[int, ...]

    def __post_init__(self):
        fs = set(self.faces)
        for f in fs:
            for v in _verts(f):
                if f & ~(1 << v) not in fs:
                    raise ValueError("face set is not closed under subsets")
        object.__setattr__(self, "faces", tuple(sorted(fs)))

    def by_dimension(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for f in self.faces:
            out.setdefault(f.bit_count() - 1, []).append(f)
        return out

    def facets(self) -> list[int]:
        fs = set(self.faces)
        return [f for f in self.faces if not any(f | (1 << v) in fs for v in range(self.n) if not f >> v & 1)]

    def face_lists(self) -> list[list[int]]:
        return [[v + 1 for v in _verts(f)] for f in self.faces]


def from_nonfaces(n: int, nonfaces) -> SimplicialComplex:
    masks = []
    for nf in nonfaces:
        nf = list(nf)
        if len(set(nf)) != len(nf):
            raise ValueError(f"nonface {nf} is not squarefree")
        if not nf or not all(1 <= v <= n for v in nf):
            raise ValueError(f"bad nonface {nf}")
        masks.append(sum(1 << (v - 1) for v in nf))
    return SimplicialComplex(n, tuple(f for f in range(1 << n) if not any(f & m == m for m in masks)))


def face_complex(n: int, faces) -> SimplicialComplex:
    """Closure of the given faces."""
    out = {0}
    for face in faces:
        m = sum(1 << (v - 1) for v in face)
        sub = m
        while True:
            out.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & m
    return SimplicialComplex(n, tuple(out))


def _coboundary_rank(cx: SimplicialComplex, k: int, p: int) -> int:
    """Rank of delta: C^k -> C^(k+1) (faces of dimension k to k+1)."""
    dims = cx.by_dimension()
    upper = {f: i for i, f in enumerate(dims.get(k + 1, []))}
    ech = Echelon(p)
    for f in dims.get(k, []):
        vec = {}
        for v in range(cx.n):
            if f >> v & 1:
                continue
            g = f | (1 << v)
            col = upper.get(g)
            if col is None:
                continue
            # position of v among the vertices of g, ascending
            pos = (g & ((1 << v) - 1)).bit_count()
            vec[col] = (-1) ** pos % p if p else (-1) ** pos
        if vec:
            ech.insert(vec)
    return ech.rank


def reduced_cohomology(cx: SimplicialComplex, i: int, p: int) -> int:
    """dim over F_p (Q when p = 0) of the reduced cohomology in degree i; C^-1 is spanned by the empty face."""
    if i < -1:
        return 0
    c_i = len(cx.by_dimension().get(i, []))
    return c_i - _coboundary_rank(cx, i, p) - (_coboundary_rank(cx, i - 1, p) if i >= 0 else 0)


def reduced_euler_characteristic(cx: SimplicialComplex) -> int:
    return sum((-1) ** (k % 2) * len(fs) for k, fs in cx.by_dimension().items())


def hochster_degree_zero(ideal, j: int, p: int) -> int:
    """dim [H^j_m(R/I)]_0 for a squarefree monomial ideal I."""
    from .linstrand import Ideal

    if not isinstance(ideal, Ideal):
        raise TypeError("expected an Ideal")
    if not ideal.is_squarefree_monomial():
        raise ValueError("Hochster's formula needs a squarefree monomial ideal")
    nonfaces = [[i + 1 for i, a in enumerate(e) if a] for e in ideal.lead_exps]
    return reduced_cohomology(from_nonfaces(ideal.nvars, nonfaces), j - 1, p)


def parse_faces(text: str) -> tuple[tuple[int, ...], ...]:
    """`123,124,...` (one digit per vertex) or `{1,2,3},{10,11,12}` / `[1,2,3],[...]`."""
    text = text.strip()
    if not text:
        return ()
    if "{" in text or "[" in text:
        groups = re.findall(r"[\[{]([^\]}]*)[\]}]", text)
        return tuple(tuple(int(v) for v in g.split(",") if v.strip()) for g in groups)
    out = []
    for word in text.split(","):
        word = word.strip()
        if not word.isdigit():
            raise ValueError(f"bad face {word!r}")
        out.append(tuple(int(c) for c in word))
    return tuple(out)


def parse_complex(text: str) -> tuple[int, tuple]:
    """`n=6; nonfaces=123,124,...` -> (n, nonfaces)."""
    fields = {}
    for part in text.split(";"):
        if part.strip():
            k, _, v = part.partition("=")
            fields[k.strip()] = v.strip()
    if "n" not in fields or "nonfaces" not in fields:
        raise ValueError("complex text needs n= and nonfaces=")
    body = fields["nonfaces"]
    if body.startswith("[") and body.endswith("]") and body.count("[") == 1:
        body = body[1:-1]
    return int(fields["n"]), parse_faces(body)
