"""Sparse exact row reduction over F_p (p > 0) or Q (p = 0).

Vectors are dicts column -> nonzero value. Pivots are always the smallest
column index present, so results depend only on the column order.
"""

from __future__ import annotations

from fractions import Fraction
from heapq import heapify, heappop, heappush

__all__ = ["Echelon", "dense_rank", "rank", "solve_dense"]


def _inv(a, p):
    return pow(a, -1, p) if p else Fraction(1) / a


def _axpy(v, a, row, p, heap=None):
    """v -= a * row in place; pushes columns that newly appear onto heap."""
    if p:
        for c, b in row.items():
            x = v.get(c)
            if x is None:
                nv = -a * b % p
                if nv:
                    v[c] = nv
                    if heap is not None:
                        heappush(heap, c)
            else:
                nv = (x - a * b) % p
                if nv:
                    v[c] = nv
                else:
                    del v[c]
    else:
        for c, b in row.items():
            x = v.get(c)
            if x is None:
                v[c] = -a * b
                if heap is not None:
                    heappush(heap, c)
            else:
                nv = x - a * b
                if nv:
                    v[c] = nv
                else:
                    del v[c]


class Echelon:
    """Growing semi-echelon basis: each stored row has a distinct pivot (its least column, value 1).

    With track=True every row carries a tag recording it as a combination of
    the inserted vectors' tags, which yields kernels and membership certificates.
    """

    def __init__(self, p: int, track: bool = False):
        self.p = p
        self.track = track
        self.rows: dict[int, dict] = {}
        self.tags: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self, track: bool | None = None) -> Echelon:
        e = Echelon(self.p, self.track if track is None else track)
        e.rows = dict(self.rows)
        if e.track:
            e.tags = dict(self.tags) if self.track else {c: {} for c in self.rows}
        return e

    def insert(self, vec: dict, tag: dict | None = None):
        """Add vec to the span. Returns None if it was independent, else the tag of the
        vanishing combination (an element of the kernel when tags are unit vectors)."""
        p = self.p
        v = dict(vec)
        t = dict(tag) if self.track and tag is not None else ({} if self.track else None)
        heap = list(v)
        heapify(heap)
        rows = self.rows
        while heap:
            c = heappop(heap)
            a = v.get(c)
            if a is None:
                continue
            row = rows.get(c)
            if row is None:
                inv = _inv(a, p)
                if inv != 1:
                    v = {k: (x * inv % p if p else x * inv) for k, x in v.items()}
                    if self.track:
                        t = {k: (x * inv % p if p else x * inv) for k, x in t.items()}
                rows[c] = v
                if self.track:
                    self.tags[c] = t
                return None
            _axpy(v, a, row, p, heap)
            if self.track:
                _axpy(t, a, self.tags[c], p)
        return t if self.track else {}

    def reduce(self, vec: dict):
        """Full reduction: returns (residual on non-pivot columns, combination tag or None)."""
        p = self.p
        v = dict(vec)
        comb = {} if self.track else None
        heap = list(v)
        heapify(heap)
        rows = self.rows
        while heap:
            c = heappop(heap)
            a = v.get(c)
            if a is None:
                continue
            row = rows.get(c)
            if row is None:
                continue
            _axpy(v, a, row, p, heap)
            if self.track:
                # v_new = v - a*row, so vec = residual + sum a*row
                _axpy(comb, -a, self.tags[c], p)
        return v, comb

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]


def rank(vectors, p: int) -> int:
    e = Echelon(p)
    for v in vectors:
        e.insert(v)
    return e.rank


def dense_rank(matrix, p: int) -> int:
    return rank(({j: x % p if p else x for j, x in enumerate(row) if (x % p if p else x)} for row in matrix), p)


def solve_dense(A, b, p: int):
    """One solution x of A x = b (free variables zero), or None. A is a list of rows."""
    ncols = len(A[0]) if A else 0

    def norm(x):
        return x % p if p else x

    e = Echelon(p, track=True)
    # columns of A become vectors over the row index; tags record the column
    for j in range(ncols):
        e.insert({i: norm(row[j]) for i, row in enumerate(A) if norm(row[j])}, {j: 1})
    resid, comb = e.reduce({i: norm(x) for i, x in enumerate(b) if norm(x)})
    if resid:
        return None
    return [comb.get(j, 0) for j in range(ncols)]
