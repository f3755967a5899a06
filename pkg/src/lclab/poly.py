"""Sparse multivariate polynomials, divided-power operators and Euler operators."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .exactarith import gen_binomial, is_prime

__all__ = [
    "QQ",
    "ZZ",
    "CoefficientRing",
    "DividedPowerOp",
    "MultiPoly",
    "apply_divided_power",
    "bracket_power",
    "compositions",
    "euler_apply",
    "gf",
]


@dataclass(frozen=True)
class CoefficientRing:
    """ZZ (char 0, integral), QQ (char 0, rational) or F_p (char p)."""

    char: int = 0
    rational: bool = False

    def __post_init__(self):
        if self.char and not is_prime(self.char):
            raise ValueError(f"{self.char} is not prime")
        if self.char and self.rational:
            raise ValueError("a prime field is not rational")

    @property
    def is_field(self) -> bool:
        return bool(self.char) or self.rational

    def norm(self, c):
        if self.char:
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, self.char) % self.char
            return c % self.char
        if self.rational:
            c = Fraction(c)
            return c.numerator if c.denominator == 1 else c
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError("non-integral coefficient over ZZ")
            return c.numerator
        return int(c)

    def fraction_field(self) -> CoefficientRing:
        return self if self.is_field else QQ

    def __str__(self) -> str:
        if self.char:
            return f"GF({self.char})"
        return "QQ" if self.rational else "ZZ"


ZZ = CoefficientRing(0, False)
QQ = CoefficientRing(0, True)


def gf(p: int) -> CoefficientRing:
    return CoefficientRing(p)


def _grlex_key(e):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial: exponent tuple -> nonzero coefficient.

    Exponents may be negative only for the operator calculus; `is_polynomial`
    tells the two apart.
    """

    __slots__ = ("ring", "nvars", "terms", "_hash")

    def __init__(self, ring: CoefficientRing, nvars: int, terms=None):
        self.ring = ring
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError("exponent vector has wrong length")
            c = ring.norm(c)
            if c:
                clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, nvars, terms):
        obj = cls.__new__(cls)
        obj.ring, obj.nvars, obj.terms, obj._hash = ring, nvars, terms, None
        return obj

    # constructors
    @classmethod
    def zero(cls, ring, nvars):
        return cls._raw(ring, nvars, {})

    @classmethod
    def const(cls, ring, nvars, c):
        return cls(ring, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, ring, nvars, i, power=1):
        """x_i (1-based index)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable x{i} outside x1..x{nvars}")
        e = [0] * nvars
        e[i - 1] = power
        return cls._raw(ring, nvars, {tuple(e): ring.norm(1)})

    @classmethod
    def monomial(cls, ring, exps, c=1):
        return cls(ring, len(exps), {tuple(exps): c})

    # basic queries
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in canonical order: graded-lex, largest monomial first."""
        return sorted(self.terms.items(), key=lambda ec: _grlex_key(ec[0]), reverse=True)

    def leading(self):
        return max(self.terms, key=_grlex_key) if self.terms else None

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_polynomial(self) -> bool:
        return all(a >= 0 for e in self.terms for a in e)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), 0)

    # arithmetic
    def _check(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.ring, self.nvars, other)
        if other.nvars != self.nvars or other.ring != self.ring:
            raise ValueError("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        norm = self.ring.norm
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.ring, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.norm
        return MultiPoly._raw(self.ring, self.nvars, {e: norm(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.ring.norm(c)
        if not c:
            return MultiPoly.zero(self.ring, self.nvars)
        norm = self.ring.norm
        return MultiPoly._raw(self.ring, self.nvars, {e: norm(v * c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._check(other)
        norm = self.ring.norm
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        clean = {}
        for e, c in out.items():
            c = norm(c)
            if c:
                clean[e] = c
        return MultiPoly._raw(self.ring, self.nvars, clean)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        if self.ring.char and e % self.ring.char == 0 and e:
            # Frobenius shortcut: (sum c m)^p = sum c^p m^p, and c^p = c in F_p
            q, r = self.ring.char, 1
            base = self
            while e % q == 0:
                e //= q
                r *= q
            base = base.frobenius(r)
            return base ** e
        result = MultiPoly.const(self.ring, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, q: int):
        """Raise every term to the q-th power; equals self**q when char divides q or self is a monomial."""
        if self.ring.char:
            norm = self.ring.norm
            terms = {tuple(q * a for a in e): norm(pow(c, q, self.ring.char)) for e, c in self.terms.items()}
            return MultiPoly._raw(self.ring, self.nvars, {e: c for e, c in terms.items() if c})
        return self ** q

    def mul_monomial(self, exps, c=1):
        norm = self.ring.norm
        out = {}
        for e, v in self.terms.items():
            w = norm(v * c)
            if w:
                out[tuple(a + b for a, b in zip(e, exps))] = w
        return MultiPoly._raw(self.ring, self.nvars, out)

    def substitute(self, mapping: dict):
        """Replace x_i (1-based keys) by the given polynomials."""
        result = MultiPoly.zero(self.ring, self.nvars)
        cache = {}
        for e, c in self.terms.items():
            term = MultiPoly.const(self.ring, self.nvars, c)
            rest = list(e)
            for i, a in enumerate(e):
                if (i + 1) in mapping:
                    if a < 0:
                        raise ValueError("cannot substitute into a negative power")
                    key = (i, a)
                    if key not in cache:
                        cache[key] = mapping[i + 1] ** a
                    term = term * cache[key]
                    rest[i] = 0
            result = result + term.mul_monomial(rest)
        return result

    def change_ring(self, ring: CoefficientRing):
        return MultiPoly(ring, self.nvars, self.terms)

    # text
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(e) if a
            )
            neg = not self.ring.char and c < 0
            mag = -c if neg else c
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.ring}, {self.nvars}, '{self}')"

    @classmethod
    def parse(cls, text: str, ring: CoefficientRing, nvars: int) -> MultiPoly:
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        if s == "0":
            return cls.zero(ring, nvars)
        terms: dict = {}
        pieces = re.split(r"(?<![\^])(?=[+-])", s)
        for piece in pieces:
            if not piece:
                continue
            sign = -1 if piece[0] == "-" else 1
            body = piece[1:] if piece[0] in "+-" else piece
            if not body:
                raise ValueError(f"dangling sign in '{text}'")
            coeff = Fraction(1)
            exps = [0] * nvars
            for k, factor in enumerate(body.split("*")):
                m = re.fullmatch(r"x(\d+)(?:\^(-?\d+))?", factor)
                if m:
                    i = int(m.group(1))
                    if not 1 <= i <= nvars:
                        raise ValueError(f"variable x{i} outside x1..x{nvars}")
                    exps[i - 1] += int(m.group(2)) if m.group(2) else 1
                    continue
                m = re.fullmatch(r"(\d+)(?:/(\d+))?", factor)
                if m and k == 0:
                    coeff = Fraction(int(m.group(1)), int(m.group(2) or 1))
                    continue
                raise ValueError(f"cannot parse factor '{factor}' in '{text}'")
            e = tuple(exps)
            terms[e] = terms.get(e, 0) + sign * coeff
        return cls(ring, nvars, terms)


@dataclass(frozen=True)
class DividedPowerOp:
    """The operator d_i^[t] = (1/t!) d^t/dx_i^t, i 1-based."""

    var: int
    order: int

    def __post_init__(self):
        if self.var < 1 or self.order < 0:
            raise ValueError("bad divided-power operator")


def apply_divided_power(op: DividedPowerOp, g: MultiPoly) -> MultiPoly:
    i, t = op.var - 1, op.order
    if i >= g.nvars:
        raise ValueError("operator variable outside the ring")
    out = {}
    for e, c in g.terms.items():
        b = gen_binomial(e[i], t)
        if b:
            e2 = list(e)
            e2[i] -= t
            out[tuple(e2)] = c * b
    return MultiPoly(g.ring, g.nvars, out)


def compositions(k: int, n: int):
    """All exponent vectors of length n with sum k, in lex-descending order."""
    for combo in combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


def euler_apply(k: int, g: MultiPoly) -> MultiPoly:
    """E_k(g) = sum over |t| = k of x^t * d^[t](g), expanded operator by operator."""
    if k < 1:
        raise ValueError("k must be positive")
    result = MultiPoly.zero(g.ring, g.nvars)
    for t in compositions(k, g.nvars):
        h = g
        for i, ti in enumerate(t):
            if ti:
                h = apply_divided_power(DividedPowerOp(i + 1, ti), h)
                if not h:
                    break
        if h:
            result = result + h.mul_monomial(t)
    return result


def bracket_power(gens, q: int):
    """I^[q]: q-th powers of the generators (q a power of the characteristic, or any q >= 1 over ZZ/QQ)."""
    if q < 1:
        raise ValueError("q must be positive")
    out = []
    for g in gens:
        p = g.ring.char
        if p:
            r = q
            while r % p == 0:
                r //= p
            if r != 1:
                raise ValueError(f"{q} is not a power of {p}")
        out.append(g ** q)
    return out
