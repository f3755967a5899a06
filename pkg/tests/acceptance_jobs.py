"""Emit the JSON reports behind acceptance criteria 1-12, one after another.

Run as a script; the determinism criterion compares the output of two runs.
"""

import random
import sys
from math import comb
from pathlib import Path

from lclab.cli import execute
from lclab.exactarith import big_binomial, binom_mod_p
from lclab.poly import MultiPoly, compositions, euler_apply, gf
from lclab.report import dumps

RP2_FAMILY = "sr n=6 nonfaces=[123,124,135,146,156,236,245,256,345,346]"
RP2_COMPLEX = "n=6; nonfaces=123,124,135,146,156,236,245,256,345,346"


def random_complex_texts(count=3, seed=7):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(3, 6)
        faces = set()
        while len(faces) < rng.randint(1, 5):
            size = rng.randint(1, min(3, n))
            faces.add("".join(str(v) for v in sorted(rng.sample(range(1, n + 1), size))))
        out.append(f"n={n}; nonfaces={','.join(sorted(faces))}")
    return out


def cli_jobs():
    jobs = [["frobenius", "--family", RP2_FAMILY, "--p", str(p), "--j", "3"] for p in (2, 3, 5)]
    for text in [RP2_COMPLEX] + random_complex_texts():
        n = int(text.split(";")[0].split("=")[1])
        jobs += [["hochster", "--sr", text, "--j", str(j), "--p", "2", "--crosscheck"] for j in range(n + 1)]
    jobs += [["identity2x3", "--k", str(k)] for k in range(5)]
    jobs += [["identity2x3", "--p", str(p), "--e", str(e)] for p, e in ((2, 1), (3, 1), (2, 2))]
    for p in (2, 3):
        fam = f"generic m=2 n=3 t=2 char={p}"
        jobs += [["ainv", "--family", fam, "--method", "hilbert", "--cm"], ["ainv", "--family", fam]]
        jobs.append(["torsion", "--family", "generic m=2 n=3 t=2", "--p", str(p), "--k", "2"])
    jobs += [["frobenius", "--ideal", "{fermat%d}" % p, "--j", "2"] for p in (2, 5, 7, 13)]
    jobs += [["ffmod", "split", "--matrix", "{nonsplit}", "--field", f, "--ext-steps", s]
             for f in ("GF(2)", "GF(3)") for s in ("0", "1")]
    jobs += [["cert", "barile"], ["cert", "valla"]]
    for fam in ("generic m=2 n=3 t=2", "generic m=3 n=3 t=2", "alternating n=6 t=4", "symmetric n=4 t=3"):
        jobs.append(["predict", "--family", fam, "--dim", "5"])
    jobs.append(["localize", "--m", "2", "--n", "3", "--t", "2", "--N", "2", "--D", "6"])
    return jobs


def lucas_table(seed=3):
    rng = random.Random(seed)
    rows = []
    for _ in range(50):
        p = rng.choice([2, 3, 5, 7, 11])
        d = rng.randint(0, 5000)
        k = rng.randint(0, d)
        rows.append([p, d, k, binom_mod_p(d, k, p), big_binomial(d, k) % p])
    return {"criterion": 3, "rows": rows}


def euler_table(seed=4):
    rng = random.Random(seed)
    rows = []
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        n, d, k = rng.randint(1, 3), rng.randint(0, 4), rng.randint(1, 4)
        monos = list(compositions(d, n))
        terms = {e: rng.randint(1, p - 1) for e in rng.sample(monos, min(3, len(monos)))}
        g = MultiPoly(gf(p), n, terms)
        rows.append([p, str(g), k, str(euler_apply(k, g)), comb(d, k) % p])
    return {"criterion": 4, "rows": rows}


def main(workdir):
    files = {}
    base = Path(workdir)
    for p in (2, 5, 7, 13):
        path = base / f"fermat{p}.txt"
        path.write_text(f"ring: char={p} vars=3\nx1^3 + x2^3 + x3^3\n")
        files[f"fermat{p}"] = str(path)
    path = base / "nonsplit.txt"
    path.write_text("M = 1,0;1,1\nN = 1\nproj = 1,0\n")
    files["nonsplit"] = str(path)
    out = []
    for argv in cli_jobs():
        argv = [a.format(**files) for a in argv]
        code, text, _ = execute(argv)
        out.append(f"# exit {code}: {' '.join(argv)}\n{text}")
    out.append(dumps(lucas_table()))
    out.append(dumps(euler_table()))
    sys.stdout.write("".join(out))


if __name__ == "__main__":
    main(sys.argv[1])
