"""Exact checks of explicit polynomial identities and radical certificates.

The 2x3 identity lives in Z[u,v,w,x,y,z] (u,v,w / x,y,z the rows of the
generic 2x3 matrix) with D1 = vz - wy, D2 = wx - uz, D3 = uy - vx.
"""

from __future__ import annotations

from math import comb

from .exactarith import big_binomial, binom_mod_p, is_prime
from .linstrand import membership_solve
from .poly import QQ, ZZ, CoefficientRing, MultiPoly, gf

__all__ = [
    "barile_certificate",
    "identity_summands",
    "valla_certificate",
    "verify_2x3_identity",
    "verify_2x3_modp_reduction",
]

MODP_CAP = 9


def _vars(ring: CoefficientRing, n: int, names: str):
    return {c: MultiPoly.var(ring, n, i + 1) for i, c in enumerate(names)}


def _deltas(ring: CoefficientRing):
    V = _vars(ring, 6, "uvwxyz")
    u, v, w, x, y, z = (V[c] for c in "uvwxyz")
    return V, (v * z - w * y, w * x - u * z, u * y - v * x)


class _Powers:
    def __init__(self):
        self.cache = {}

    def __call__(self, f: MultiPoly, e: int) -> MultiPoly:
        key = (f, e)
        got = self.cache.get(key)
        if got is None:
            got = self.cache[key] = f**e
        return got


def identity_summands(k: int, ring: CoefficientRing = ZZ):
    """Yield ((i, j), coefficient, bracket) for i + j <= k; bracket is the cyclic three-term sum."""
    V, (d1, d2, d3) = _deltas(ring)
    u, v, w, x, y, z = (V[c] for c in "uvwxyz")
    pw = _Powers()
    # (lead variable, D_a, -first factor, second factor, D_b, D_c) for the three cyclic terms
    cyc = [(u, d1, w * x, v * x, d2, d3), (v, d2, u * y, w * y, d3, d1), (w, d3, v * z, u * z, d1, d2)]
    for i in range(k + 1):
        for j in range(k + 1 - i):
            coeff = comb(k, i + j) * comb(k + i, k) * comb(k + j, k)
            bracket = MultiPoly.zero(ring, 6)
            for lead, da, a, b, db, dc in cyc:
                term = pw(lead, k + 1) * pw(da, 2 * k + 1) * pw(-a, i) * pw(b, j) * pw(db, k - i) * pw(dc, k - j)
                bracket = bracket + term
            yield (i, j), coeff, bracket


def verify_2x3_identity(k: int) -> dict:
    if k < 0:
        raise ValueError("k must be nonnegative")
    total = MultiPoly.zero(ZZ, 6)
    sizes = []
    for _, coeff, bracket in identity_summands(k):
        sizes.append(len(bracket.terms))
        total = total + bracket.scale(coeff)
    return {
        "k": k,
        "residual": str(total),
        "success": not total,
        "summands": len(sizes),
        "max_bracket_terms": max(sizes),
        "total_bracket_terms": sum(sizes),
    }


def verify_2x3_modp_reduction(p: int, e: int) -> dict:
    """At k = p^e - 1: (a) every coefficient with (i, j) != (0, 0) vanishes mod p;
    (b) the surviving summand equals (D1 D2 D3)^k [u^q D1^q + v^q D2^q + w^q D3^q]
    over Z, and that bracket is nonzero over Z but zero mod p."""
    if not is_prime(p) or e < 1:
        raise ValueError("need p prime and e >= 1")
    q = p**e
    if q > MODP_CAP:
        raise ValueError(f"p^e = {q} exceeds the size cap {MODP_CAP}")
    k = q - 1
    coeffs = {}
    for i in range(k + 1):
        for j in range(k + 1 - i):
            lucas = binom_mod_p(k, i + j, p) * binom_mod_p(k + i, k, p) * binom_mod_p(k + j, k, p) % p
            exact = big_binomial(k, i + j) * big_binomial(k + i, k) * big_binomial(k + j, k) % p
            if lucas != exact:
                raise AssertionError("Lucas products disagree with exact binomials")
            coeffs[(i, j)] = lucas
    nonzero = sorted(ij for ij, c in coeffs.items() if c)
    claim_a = nonzero == [(0, 0)]

    V, (d1, d2, d3) = _deltas(ZZ)
    u, v, w = V["u"], V["v"], V["w"]
    surviving = next(b for ij, _, b in identity_summands(k) if ij == (0, 0))
    bracket = u**q * d1**q + v**q * d2**q + w**q * d3**q
    # equality over Z, hence mod p
    claim_b = surviving == (d1 * d2 * d3) ** k * bracket
    # the bracket is the q-th power of the k = 0 relation u D1 + v D2 + w D3 = 0 modulo p
    base = u * d1 + v * d2 + w * d3
    F = gf(p)
    claim_c = not base and not bracket.change_ring(F) and bool(bracket)
    return {
        "p": p,
        "e": e,
        "k": k,
        "nonzero_coefficients_mod_p": [list(ij) for ij in nonzero],
        "coefficients_vanish": claim_a,
        "surviving_term_matches": claim_b,
        "bracket_residual_mod_p": str(bracket.change_ring(F)),
        "bracket_terms_over_Z": len(bracket.terms),
        "bracket_vanishes": claim_c,
        "surviving_terms": len(surviving.terms),
        "success": claim_a and claim_b and claim_c,
    }


def _certify(h: MultiPoly, gens, D: int) -> dict | None:
    q = membership_solve(h, gens, D)
    if q is None:
        return None
    total = MultiPoly.zero(q[0].ring, h.nvars) if q else MultiPoly.zero(QQ, h.nvars)
    for a, g in zip(q, gens):
        total = total + a * g.change_ring(a.ring)
    return {"element": str(h), "multipliers": [str(a) for a in q], "reverified": total == h.change_ring(total.ring)}


def _least_power(h: MultiPoly, gens, max_N: int, D: int) -> dict | None:
    for N in range(1, max_N + 1):
        if N * h.degree > D:
            break
        cert = _certify(h**N, gens, D)
        if cert is not None:
            cert.update(base=str(h), N=N)
            return cert
    return None


def _radical_report(a_gens, small, D, max_N, names):
    up = [_certify(g, a_gens, D) for g in small]
    down = [_least_power(g, small, max_N, D) for g in a_gens]
    failures = [str(g) for g, c in zip(small, up) if c is None] + [
        f"{g}^N" for g, c in zip(a_gens, down) if c is None
    ]
    ok = not failures and all(c["reverified"] for c in up + down)
    return {
        "variables": list(names),
        "ideal": [str(g) for g in a_gens],
        "generators": [str(g) for g in small],
        "in_ideal": up,
        "powers_in_generated": down,
        "bound": D,
        "max_power": max_N,
        "bound_failures": failures,
        "success": ok,
    }


def barile_certificate(D: int = 10, max_N: int = 4) -> dict:
    """(vx, wx, vz - wy) is the radical of (f, g) with f = wx^2 + z(vz - wy), g = vx^2 + y(vz - wy)."""
    V = _vars(QQ, 5, "vwxyz")
    v, w, x, y, z = (V[c] for c in "vwxyz")
    delta = v * z - w * y
    f = w * x**2 + z * delta
    g = v * x**2 + y * delta
    residual = v * f - w * g - delta**2
    rep = _radical_report([v * x, w * x, delta], [f, g], D, max_N, "vwxyz")
    rep["identity"] = {"statement": "v*f - w*g - (v*z - w*y)^2", "residual": str(residual)}
    rep["success"] = rep["success"] and not residual
    return rep


def valla_certificate(D: int = 6, max_N: int = 3) -> dict:
    """The 2-minors of [[u,v,w],[v,x,y]] are the radical of (v^2 - ux, det[[u,v,w],[v,x,y],[w,y,0]])."""
    if D < 6:
        raise ValueError("D must be at least 6")
    V = _vars(QQ, 5, "uvwxy")
    u, v, w, x, y = (V[c] for c in "uvwxy")
    minors = [u * x - v * v, u * y - v * w, v * y - w * x]
    g1 = v * v - u * x
    g2 = u * (-(y * y)) - v * (-(w * y)) + w * (v * y - x * w)
    rep = _radical_report(minors, [g1, g2], D, max_N, "uvwxy")
    rep["g1_is_minor"] = g1 == -minors[0]
    rep["success"] = rep["success"] and rep["g1_is_minor"]
    return rep
