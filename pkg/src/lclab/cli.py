"""Command-line entry point: every command prints one JSON report.

Exit status: 0 verdict given, 2 verdict withheld (no stabilization, size or
degree bound reached, failed certificate), 1 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import certlab, ffmod, ideals, koszul_lc, simplicial
from .exactarith import is_prime, parse_field
from .linstrand import Ideal, PieceTooLarge
from .poly import ZZ, MultiPoly, gf
from .report import REPORT_SCHEMA, dumps, envelope

__all__ = ["build_parser", "execute", "main", "parse_ideal_text", "parse_matrix_file", "run"]


class InputError(ValueError):
    pass


class Withheld(Exception):
    def __init__(self, reason: str, result=None):
        super().__init__(reason)
        self.reason, self.result = reason, result


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# --- input formats ---

def parse_ideal_text(text: str) -> Ideal:
    """Header `ring: char=<p|0> vars=<n>`, then one generator per nonempty line ('#' starts a comment)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("ring:"):
        raise InputError("ideal file must start with 'ring: char=<p|0> vars=<n>'")
    fields = dict(tok.split("=", 1) for tok in lines[0][5:].split() if "=" in tok)
    try:
        char, nvars = int(fields["char"]), int(fields["vars"])
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad ring header {lines[0]!r}") from exc
    if nvars < 1:
        raise InputError("vars must be positive")
    ring = gf(char) if char else ZZ
    return Ideal([MultiPoly.parse(ln, ring, nvars) for ln in lines[1:]], ring, nvars)


def parse_matrix_file(text: str) -> dict:
    """`name = rows` lines (rows split by ';', entries by ','), or bare rows giving M."""
    named, bare = {}, []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        if "=" in ln:
            k, v = ln.split("=", 1)
            named[k.strip()] = v.strip()
        else:
            bare.append(ln)
    if bare:
        if "M" in named:
            raise InputError("matrix file mixes named and bare rows")
        named["M"] = ";".join(bare)
    return named


# --- helpers ---

def _ideal_from_args(args, job: dict) -> Ideal:
    if getattr(args, "family", None):
        spec = ideals.parse_family(args.family)
        ideal = ideals.build_ideal(spec)
        job["ideal"] = {"source": "family", "text": spec.to_text()}
    elif getattr(args, "ideal", None):
        ideal = parse_ideal_text(Path(args.ideal).read_text())
        job["ideal"] = {"source": "file", "text": str(args.ideal)}
    else:
        raise InputError("give --family or --ideal")
    job["ideal"]["generators"] = ideal.to_text()
    job["ring"] = {"char": ideal.ring.char, "nvars": ideal.nvars}
    return ideal


def _over_prime(ideal: Ideal, p: int | None) -> Ideal:
    if p is None:
        if not ideal.ring.char:
            raise InputError("integer coefficients: give --p")
        return ideal
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if ideal.ring.char and ideal.ring.char != p:
        raise InputError(f"ideal is over GF({ideal.ring.char}), not GF({p})")
    return ideal.reduce_mod(p) if not ideal.ring.char else ideal


def _koszul_opts(args) -> dict:
    return {"window": args.window, "t_max": args.t_max}


def _undetected(ideal: Ideal, p: int, j: int) -> dict:
    return {"ideal": ideal.to_text(), "p": p, "j": j, "s": 0, "verdict": "undetected"}


def _fmt_vectors(F, vs):
    return [[F.format(x) for x in v] for v in vs]


# --- commands ---

def cmd_frobenius(args, job):
    ideal = _over_prime(_ideal_from_args(args, job), args.p)
    try:
        v = koszul_lc.frobenius_matrix(ideal, args.j, max_stage=args.max_stage, **_koszul_opts(args))
    except koszul_lc.StabilizationError as exc:
        raise Withheld(str(exc), _undetected(ideal, ideal.ring.char, args.j)) from exc
    return v.report(ideal.to_text())


def cmd_torsion(args, job):
    ideal = _ideal_from_args(args, job)
    if ideal.ring.char:
        raise InputError("torsion needs an ideal with integer coefficients (char=0)")
    if not is_prime(args.p):
        raise InputError(f"{args.p} is not prime")
    if not 0 <= args.k <= ideal.nvars:
        raise InputError("k out of range")
    try:
        return koszul_lc.torsion_obstruction(ideal, args.p, args.k, max_stage=args.max_stage, **_koszul_opts(args))
    except koszul_lc.StabilizationError as exc:
        rep = _undetected(ideal, args.p, ideal.nvars - args.k)
        rep.update(k=args.k, unchecked_hypotheses=[koszul_lc.LOCALIZATION_CAVEAT])
        raise Withheld(str(exc), rep) from exc


def cmd_lcdim(args, job):
    ideal = _over_prime(_ideal_from_args(args, job), args.p)
    st = koszul_lc.stabilize(ideal, args.j, args.s, **_koszul_opts(args))
    return {
        "j": args.j,
        "s": args.s,
        "p": ideal.ring.char,
        "dim": st.dim,
        "stage_T": st.T,
        "stage_dims": st.dims,
        "transition_matrices": st.transitions,
        "stabilization": f"heuristic: {st.window} consecutive isomorphisms",
    }


def cmd_ainv(args, job):
    ideal = _over_prime(_ideal_from_args(args, job), args.p)
    return koszul_lc.a_invariant_report(ideal, args.method, cm=args.cm, **_koszul_opts(args))


def cmd_hochster(args, job):
    n, nonfaces = simplicial.parse_complex(args.sr)
    if not is_prime(args.p):
        raise InputError(f"{args.p} is not prime")
    ideal = Ideal(ideals.stanley_reisner(n, nonfaces, gf(args.p)), gf(args.p), n)
    job["ideal"] = {"source": "complex", "text": args.sr, "generators": ideal.to_text()}
    job["ring"] = {"char": args.p, "nvars": n}
    if not 0 <= args.j <= n:
        raise InputError("j out of range")
    dim = simplicial.hochster_degree_zero(ideal, args.j, args.p)
    out = {"j": args.j, "p": args.p, "dim": dim, "reduced_cohomology_degree": args.j - 1}
    if args.crosscheck:
        st = koszul_lc.stabilize(ideal, args.j, 0, **_koszul_opts(args))
        out["crosscheck"] = {"koszul_dim": st.dim, "stage_T": st.T, "agree": st.dim == dim}
        if st.dim != dim:
            raise Withheld("Koszul and simplicial dimensions disagree", out)
    return out


def cmd_ffmod(args, job):
    F = parse_field(args.field)
    job["field"] = str(F)
    mats = parse_matrix_file(Path(args.matrix).read_text())
    if "M" not in mats:
        raise InputError("matrix file needs M")
    M = ffmod.PLinearModule(F, ffmod.parse_matrix(mats["M"], F))
    out = {"action": args.action, "field": str(F), "M": _fmt_vectors(F, M.matrix)}
    if args.action == "stable":
        basis = ffmod.stable_image(M)
        out.update(stable_image=_fmt_vectors(F, basis), dim=len(basis))
    elif args.action == "nil":
        basis = ffmod.nilpotent_part(M)
        red, comp = ffmod.reduced(M)
        nil, index = ffmod.is_nilpotent(M)
        out.update(
            nilpotent_part=_fmt_vectors(F, basis),
            dim=len(basis),
            reduced_matrix=_fmt_vectors(F, red.matrix),
            reduced_coordinates=comp,
            nilpotent=nil,
            nilpotency_index=index,
        )
    elif args.action == "fixed":
        fp = ffmod.fixed_points(M)
        out.update(fixed_points=_fmt_vectors(F, fp), fixed_dim=len(fp))
        if ffmod.rank(F, M.matrix) == M.rank:
            fb = ffmod.fixed_basis(M, args.ext_steps)
            out["fixed_basis"] = None if fb is None else {
                "field": str(fb.field),
                "basis": _fmt_vectors(fb.field, fb.basis),
                "extension_steps": fb.extension_steps,
            }
            if fb is None:
                raise Withheld("no fixed basis within the extension budget", out)
        else:
            out["fixed_basis"] = None
            out["note"] = "Frobenius action is not injective"
    else:
        missing = [k for k in ("N", "proj") if k not in mats]
        if missing:
            raise InputError(f"split needs {', '.join(missing)} in the matrix file")
        N = ffmod.PLinearModule(F, ffmod.parse_matrix(mats["N"], F))
        P = ffmod.parse_matrix(mats["proj"], F)
        out.update(N=_fmt_vectors(F, N.matrix), proj=_fmt_vectors(F, P))
        sec = ffmod.split_surjection(M, N, P, args.ext_steps)
        if sec is None:
            out["section"] = None
            raise Withheld("no equivariant section over the available fields", out)
        out["section"] = {
            "field": str(sec.field),
            "matrix": _fmt_vectors(sec.field, sec.matrix),
            "extensions": list(sec.extensions),
        }
    return out


def cmd_identity2x3(args, job):
    if args.k is not None:
        if args.p is not None or args.e is not None:
            raise InputError("give either --k or --p with --e")
        rep = certlab.verify_2x3_identity(args.k)
    elif args.p is not None and args.e is not None:
        rep = certlab.verify_2x3_modp_reduction(args.p, args.e)
    else:
        raise InputError("give --k, or --p with --e")
    out = {"identity": rep}
    if not rep["success"]:
        raise Withheld("identity check failed", out)
    return out


def cmd_cert(args, job):
    opts = {}
    if args.bound is not None:
        opts["D"] = args.bound
    if args.max_power is not None:
        opts["max_N"] = args.max_power
    rep = certlab.barile_certificate(**opts) if args.name == "barile" else certlab.valla_certificate(**opts)
    out = {"identity": rep}
    if not rep["success"]:
        raise Withheld("certificate search hit its bounds", out)
    return out


def cmd_predict(args, job):
    spec = ideals.parse_family(args.family)
    job["ideal"] = {"source": "family", "text": spec.to_text(), "generators": []}
    char = spec.ring.char
    try:
        inv = ideals.family_invariants(spec, char)
    except ValueError:
        inv = None
    return {"prediction": ideals.vanishing_predict(args.dim, spec), "invariants": inv}


def cmd_localize(args, job):
    if args.family != "generic":
        raise InputError("localize supports only the generic family")
    rep = ideals.localization_check(args.m, args.n, args.t, args.N, args.D)
    if not rep["success"]:
        raise Withheld("no certificate within the exponent and degree bounds", rep)
    return rep


# --- parser ---

def _source(sp):
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--family", help="family spec, e.g. 'generic m=2 n=3 t=2'")
    g.add_argument("--ideal", help="ideal file")


def _stages(sp, max_stage=False):
    sp.add_argument("--window", type=int, default=koszul_lc.DEFAULT_WINDOW)
    sp.add_argument("--t-max", type=int, default=koszul_lc.DEFAULT_T_MAX)
    if max_stage:
        sp.add_argument("--max-stage", type=int, default=koszul_lc.DEFAULT_MAX_STAGE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lclab", description=__doc__.splitlines()[0])
    ap.add_argument("--out", help="write the report here instead of standard output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("frobenius", help="Frobenius action on [H^j_m(R/I)]_0")
    _source(sp)
    sp.add_argument("--p", type=int)
    sp.add_argument("--j", type=int, required=True)
    _stages(sp, True)
    sp.set_defaults(func=cmd_frobenius)

    sp = sub.add_parser("torsion", help="degree-0 Frobenius criterion for p-torsion")
    _source(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    _stages(sp, True)
    sp.set_defaults(func=cmd_torsion)

    sp = sub.add_parser("lcdim", help="dimension of [H^j_m(R/I)]_s")
    _source(sp)
    sp.add_argument("--p", type=int)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    _stages(sp)
    sp.set_defaults(func=cmd_lcdim)

    sp = sub.add_parser("ainv", help="a-invariant of R/I")
    _source(sp)
    sp.add_argument("--p", type=int)
    sp.add_argument("--method", choices=["strand", "hilbert"], default="strand")
    sp.add_argument("--cm", action="store_true", help="assert R/I is Cohen-Macaulay")
    _stages(sp)
    sp.set_defaults(func=cmd_ainv)

    sp = sub.add_parser("hochster", help="degree-0 Hochster formula")
    sp.add_argument("--sr", required=True, help="'n=6; nonfaces=123,124,...'")
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--crosscheck", action="store_true")
    _stages(sp)
    sp.set_defaults(func=cmd_hochster)

    sp = sub.add_parser("ffmod", help="finite modules with a Frobenius action")
    sp.add_argument("action", choices=["stable", "nil", "fixed", "split"])
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--field", required=True, help="GF(p), GF(p^k) or GF(p^k; modulus=...)")
    sp.add_argument("--ext-steps", type=int, default=None)
    sp.set_defaults(func=cmd_ffmod)

    sp = sub.add_parser("identity2x3", help="the 2x3 determinantal identity")
    sp.add_argument("--k", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--e", type=int)
    sp.set_defaults(func=cmd_identity2x3)

    sp = sub.add_parser("cert", help="radical certificates")
    sp.add_argument("name", choices=["barile", "valla"])
    sp.add_argument("--bound", type=int)
    sp.add_argument("--max-power", type=int)
    sp.set_defaults(func=cmd_cert)

    sp = sub.add_parser("predict", help="vanishing predictor and closed-form invariants")
    sp.add_argument("--family", required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("localize", help="x11-localization certificates for generic minors")
    sp.add_argument("--family", default="generic")
    for name in ("m", "n", "t", "N", "D"):
        sp.add_argument(f"--{name}", type=int, required=True)
    sp.set_defaults(func=cmd_localize)

    sub.add_parser("schema", help="print the report JSON schema").set_defaults(func=None)
    return ap


def execute(argv=None) -> tuple[int, str, str | None]:
    """Execute one job; returns (exit status, report text, output path). Diagnostics go to standard error."""
    try:
        args = build_parser().parse_args(argv)
    except InputError as exc:
        print(f"lclab: {exc}", file=sys.stderr)
        return 1, "", None
    if args.command == "schema":
        return 0, json.dumps(REPORT_SCHEMA, sort_keys=True, indent=2) + "\n", args.out
    if args.command == "ffmod" and args.ext_steps is None:
        args.ext_steps = 0 if args.action == "split" else 3
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "command")}
    job = {"command": args.command, "params": params, "output": args.out}
    try:
        result = args.func(args, job)
        report, code = envelope(args.command, job, result), 0
    except Withheld as w:
        print(f"lclab: verdict withheld: {w.reason}", file=sys.stderr)
        report, code = envelope(args.command, job, w.result, "withheld", w.reason), 2
    except (koszul_lc.StabilizationError, PieceTooLarge) as exc:
        print(f"lclab: verdict withheld: {exc}", file=sys.stderr)
        report, code = envelope(args.command, job, None, "withheld", str(exc)), 2
    except (InputError, ValueError, OSError) as exc:
        print(f"lclab: invalid input: {exc}", file=sys.stderr)
        return 1, "", None
    return code, dumps(report), args.out


def run(argv=None) -> int:
    """Run one job, writing its report to --out or standard output; returns the exit status."""
    code, text, out = execute(argv)
    if text:
        if out:
            Path(out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
