"""Exact scalar arithmetic: binomials mod p, base-p digits, finite fields, Artin-Schreier roots."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

MAX_EXT_DEGREE = 12

__all__ = [
    "MAX_EXT_DEGREE",
    "DigitVector",
    "GF",
    "artin_schreier_solve",
    "base_p_digits",
    "big_binomial",
    "binom_mod_p",
    "embed",
    "extend_by_artin_schreier",
    "gen_binomial",
    "is_prime",
    "parse_field",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def big_binomial(n: int, k: int) -> int:
    """C(n, k) for nonnegative n, k; zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError("big_binomial needs nonnegative arguments")
    return math.comb(n, k)


def gen_binomial(a: int, t: int) -> int:
    """Generalized binomial a(a-1)...(a-t+1)/t! for any integer a and t >= 0."""
    if t < 0:
        raise ValueError("order must be nonnegative")
    if a >= 0:
        return math.comb(a, t)
    return (-1) ** t * math.comb(t - a - 1, t)


@dataclass(frozen=True)
class DigitVector:
    """Base-p expansion d = sum s_e p^e, least significant digit first."""

    digits: tuple[int, ...]
    p: int

    @property
    def value(self) -> int:
        return sum(s * self.p**e for e, s in enumerate(self.digits))

    def digit(self, e: int) -> int:
        return self.digits[e] if e < len(self.digits) else 0

    def __iter__(self):
        return iter(self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, e):
        return self.digits[e]


def base_p_digits(d: int, p: int) -> DigitVector:
    _check_prime(p)
    if d < 0:
        raise ValueError("digits of a negative integer")
    out = []
    while d:
        d, r = divmod(d, p)
        out.append(r)
    return DigitVector(tuple(out), p)


def binom_mod_p(d: int, k: int, p: int) -> int:
    """C(d, k) mod p by the digitwise product of base-p digits."""
    _check_prime(p)
    if d < 0 or k < 0:
        raise ValueError("binom_mod_p needs nonnegative arguments")
    r = 1
    while k:
        d, a = divmod(d, p)
        k, b = divmod(k, p)
        if b > a:
            return 0
        r = r * math.comb(a, b) % p
    return r


# --- univariate polynomials over F_p, coefficient lists low degree first ---

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = list(f)
    inv = pow(g[-1], -1, p)
    dg = len(g) - 1
    while len(_ptrim(f)) - 1 >= dg:
        c = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
    return f


def _monic_polys(p: int, deg: int):
    for tail in product(range(p), repeat=deg):
        yield list(reversed(tail)) + [1]


def _is_irreducible(f, p: int) -> bool:
    deg = len(f) - 1
    if deg < 1:
        return False
    for dd in range(1, deg // 2 + 1):
        for g in _monic_polys(p, dd):
            if not _pmod(f, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def _search_modulus(p: int, k: int) -> tuple[int, ...]:
    # Candidates a^k + tail, ordered by number of nonzero tail terms, then by the
    # tail read as a base-p integer (coefficient of a^0 least significant).
    def key(tail):
        return (sum(1 for c in tail if c), sum(c * p**i for i, c in enumerate(tail)))

    tails = sorted(product(range(p), repeat=k), key=key)
    for tail in tails:
        f = list(tail) + [1]
        if f[0] and _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable: one always exists


@dataclass(frozen=True)
class GF:
    """The field F_{p^k} = F_p[a]/(modulus).

    Elements are integers 0 <= x < p^k; the base-p digits of x are the
    coordinates of x on 1, a, ..., a^(k-1). Integer order on elements is the
    canonical element ordering used whenever a least element is chosen.
    """

    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        _check_prime(self.p)
        if not 1 <= self.k <= MAX_EXT_DEGREE:
            raise ValueError(f"extension degree {self.k} outside 1..{MAX_EXT_DEGREE}")
        if self.k == 1:
            object.__setattr__(self, "modulus", None)
            return
        if self.modulus is None:
            object.__setattr__(self, "modulus", _search_modulus(self.p, self.k))
        m = tuple(c % self.p for c in self.modulus)
        if len(m) != self.k + 1 or m[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _is_irreducible(list(m), self.p):
            raise ValueError("modulus is reducible over F_p")
        object.__setattr__(self, "modulus", m)

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def elements(self):
        return range(self.order)

    # coordinates
    def coords(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_coords(self, cs) -> int:
        x = 0
        for c in reversed(list(cs)):
            x = x * self.p + c % self.p
        return x

    # arithmetic
    def add(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x + y) % self.p
        return self.from_coords(a + b for a, b in zip(self.coords(x), self.coords(y)))

    def neg(self, x: int) -> int:
        if self.k == 1:
            return -x % self.p
        return self.from_coords(-a for a in self.coords(x))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.k == 1:
            return x * y % self.p
        if x == 0 or y == 0:
            return 0
        return self._mul(x, y)

    @lru_cache(maxsize=1 << 16)
    def _mul(self, x: int, y: int) -> int:
        p = self.p
        a, b = self.coords(x), self.coords(y)
        prod = [0] * (2 * self.k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return self.from_coords(_pmod([c % p for c in prod], self.modulus, p))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        if self.k == 1:
            return pow(x, e, self.p)
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def inv(self, x: int) -> int:
        if x % self.order == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(x, -1, self.p)
        return self.pow(x, self.order - 2)

    def frob(self, x: int, e: int = 1) -> int:
        """x^(p^e)."""
        return self.pow(x, self.p ** (e % self.k))

    def scalar(self, n: int) -> int:
        """Image of the integer n."""
        return n % self.p

    # text forms
    def format(self, x: int) -> str:
        if self.k == 1:
            return str(x)
        terms = []
        for i, c in reversed(list(enumerate(self.coords(x)))):
            if not c:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        cs = _parse_univariate(text, self.p)
        if self.k == 1:
            if len(cs) > 1:
                raise ValueError(f"'{text}' is not a prime-field element")
            return cs[0] if cs else 0
        return self.from_coords(_pmod(cs, self.modulus, self.p)) if cs else 0

    def __str__(self) -> str:
        if self.k == 1:
            return f"GF({self.p})"
        poly = _format_univariate(list(self.modulus), self.p)
        return f"GF({self.p}^{self.k}; modulus={poly})"


def _format_univariate(cs, p) -> str:
    terms = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i] % p
        if not c:
            continue
        mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


_TERM = re.compile(r"^(\d+)?\*?(a(?:\^(\d+))?)?$")


def _parse_univariate(text: str, p: int) -> list[int]:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty field element")
    out: dict[int, int] = {}
    for m in re.finditer(r"([+-]?)([^+-]+)", s):
        sign, body = m.group(1), m.group(2)
        t = _TERM.match(body)
        if not t or (t.group(1) is None and t.group(2) is None):
            raise ValueError(f"bad field element term '{body}'")
        c = int(t.group(1)) if t.group(1) else 1
        e = 0 if t.group(2) is None else int(t.group(3) or 1)
        out[e] = out.get(e, 0) + (-c if sign == "-" else c)
    deg = max(out)
    return _ptrim([out.get(i, 0) % p for i in range(deg + 1)])


def parse_field(text: str) -> GF:
    """Parse `GF(p)`, `GF(p^k)` or `GF(p^k; modulus=<poly in a>)`."""
    m = re.fullmatch(r"\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?:;\s*modulus\s*=\s*([^)]*))?\)\s*", text)
    if not m:
        raise ValueError(f"bad field descriptor '{text}'")
    p, k = int(m.group(1)), int(m.group(2) or 1)
    _check_prime(p)
    modulus = None
    if m.group(3):
        modulus = tuple(_parse_univariate(m.group(3), p))
        if len(modulus) != k + 1:
            raise ValueError("modulus degree does not match k")
    return GF(p, k, modulus)


def artin_schreier_solve(F: GF, c: int) -> int | None:
    """Least root t of t^p - t + c = 0 in F, or None."""
    p, k = F.p, F.k
    # t -> t^p - t is F_p-linear; solve L(t) = -c on coordinates.
    cols = [F.coords(F.sub(F.frob(p**i), p**i)) for i in range(k)]
    rhs = F.coords(F.neg(c))
    sol = _solve_mod_p([[cols[j][i] for j in range(k)] for i in range(k)], rhs, p)
    if sol is None:
        return None
    t0 = F.from_coords(sol)
    # The roots are t0 + F_p.
    return min(F.add(t0, a) for a in range(p))


def _solve_mod_p(A, b, p):
    """One solution of A x = b over F_p (free variables zero), or None."""
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    n = len(A[0]) if A else 0
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(v - f * w) % p for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] % p for row in rows[r:]):
        return None
    x = [0] * n
    for i, col in enumerate(pivots):
        x[col] = rows[i][-1]
    return x


@lru_cache(maxsize=None)
def _generator_image(F: GF, F2: GF) -> int:
    # least root of F.modulus in F2
    for z in F2.elements():
        acc = 0
        for c in reversed(F.modulus):
            acc = F2.add(F2.mul(acc, z), c)
        if acc == 0:
            return z
    raise ValueError(f"{F} does not embed in {F2}")


def embed(F: GF, F2: GF, x: int) -> int:
    """Image of x under the fixed embedding F -> F2 (F2.k a multiple of F.k)."""
    if F.p != F2.p or F2.k % F.k:
        raise ValueError(f"{F} does not embed in {F2}")
    if F.k == 1 or F == F2:
        return x
    g = _generator_image(F, F2)
    acc = 0
    for c in reversed(F.coords(x)):
        acc = F2.add(F2.mul(acc, g), c)
    return acc


def extend_by_artin_schreier(F: GF, c: int) -> tuple[GF, int]:
    """Degree-p extension F' of F containing a root t of t^p - t + c; returns (F', t)."""
    if artin_schreier_solve(F, c) is not None:
        raise ValueError("equation already solvable in the base field")
    k2 = F.k * F.p
    if k2 > MAX_EXT_DEGREE:
        raise ValueError(f"extension degree {k2} exceeds {MAX_EXT_DEGREE}")
    F2 = GF(F.p, k2)
    t = artin_schreier_solve(F2, embed(F, F2, c))
    assert t is not None
    return F2, t
