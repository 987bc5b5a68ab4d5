#!/usr/bin/env python3
"""Regenerate the bundled field datasets with PARI/GP (via cypari2).

This is an offline tool: the package never imports it and cypari2 is not a
runtime dependency.  For a degree-q polynomial f over Q whose Galois group is
dihedral of order 2q it computes

  * the splitting field L, its Galois group, a rotation rho and a reflection sigma;
  * class numbers of L, K = L^sigma, F = L^rho (certified with bnfcertify);
  * fundamental units and the torsion generator of L, and the matrices of
    rho and sigma on them (column j = exponents of the image of generator j);
  * the finite primes ramified in L with their type in F and ramification index.

Usage:  python3 tools/make_datasets.py [outdir]
"""

import json
import sys
from pathlib import Path

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9)

GP_HELPERS = [
    "dih_compose(a, b) = vecextract(a, b)",
    "dih_power(a, k) = { my(r = Vecsmall(vector(#a, i, i))); for (j = 1, k, r = dih_compose(a, r)); r }",
]

GP = r"""
dih_data(f) =
{
  my(P, nf, gal, els, n, q, rh, sg, bnf, fu, tu, w, gens, r, Rmat, Smat,
     Kpol, Fpol, bK, bF, nfF, ram, fac, p, e, dec, typ, autR, autS, sigF);
  P = polredbest(nfsplitting(f));
  nf = nfinit(P);
  gal = galoisinit(nf);
  els = gal.group;
  n = poldegree(P); q = n / 2;
  rh = 0; sg = 0;
  for (i = 1, #els, if (!rh && permorder(els[i]) == q, rh = els[i]));
  for (i = 1, #els,
    my(s = els[i]);
    if (!sg && permorder(s) == 2
        && dih_compose(dih_compose(s, rh), s) == dih_power(rh, q - 1), sg = s));
  if (!rh || !sg, error("group is not dihedral of order 2q"));
  bnf = bnfinit(P, 1);
  if (bnfcertify(bnf) != 1, error("class group of L not certified"));
  fu = bnf.fu; tu = bnf.tu; w = tu[1];
  gens = concat(apply(lift, fu), [lift(tu[2])]);
  r = #fu;
  autR = galoispermtopol(gal, rh);
  autS = galoispermtopol(gal, sg);
  Rmat = matrix(r + 1, r + 1); Smat = matrix(r + 1, r + 1);
  for (j = 1, r + 1,
    my(vR = bnfisunit(bnf, nfgaloisapply(nf, autR, gens[j])),
       vS = bnfisunit(bnf, nfgaloisapply(nf, autS, gens[j])));
    for (i = 1, r + 1, Rmat[i, j] = lift(vR[i]); Smat[i, j] = lift(vS[i])));
  Kpol = polredbest(galoisfixedfield(gal, sg, 1));
  Fpol = polredbest(galoisfixedfield(gal, rh, 1));
  bK = bnfinit(Kpol, 1); if (bnfcertify(bK) != 1, error("K not certified"));
  bF = bnfinit(Fpol, 1); if (bnfcertify(bF) != 1, error("F not certified"));
  nfF = bF.nf;
  sigF = nfF.sign;
  fac = factor(abs(nf.disc))[, 1];
  ram = [];
  for (k = 1, #fac,
    p = fac[k];
    e = idealprimedec(nf, p)[1].e;
    if (e > 1,
      dec = idealprimedec(nfF, p);
      typ = if (#dec == 2, "split", if (dec[1].e == 2, "ramified", "inert"));
      ram = concat(ram, [[typ, e, p]])));
  [P, q, bnf.no, bK.no, bF.no, w, Rmat, Smat, r, sigF, ram, Kpol, Fpol];
}
"""

for _src in GP_HELPERS:
    pari(_src)
pari(GP)


def _int_matrix(M, size):
    return [[int(M[i, j]) for j in range(size)] for i in range(size)]


def dataset(poly: str, label: str) -> dict:
    res = pari(f"dih_data({poly})")
    P, q, hL, hK, hF, w, R, S, r, sigF, ram, Kpol, Fpol = res
    q, r = int(q), int(r)
    r1F, r2F = int(sigF[0]), int(sigF[1])
    rank_F = r1F + r2F - 1
    doc = {
        "label": label,
        "q": q,
        "class_numbers": {"L": int(hL), "K": int(hK), "F": int(hF), "k": 1},
        "units": {
            "rank": r,
            "w": int(w),
            "rho": _int_matrix(R, r + 1),
            "sigma": _int_matrix(S, r + 1),
        },
        "flags": {"k_is_Q": True, "F_type": "real" if r1F == 2 else "imaginary"},
        "unit_ranks": {"k": 0, "F": rank_F},
        "ramification": [{"type": str(t), "e": int(e)} for t, e, _ in ram],
    }
    info = {
        "L": str(P),
        "K": str(Kpol),
        "F": str(Fpol),
        "ramified_primes": [int(p) for _, _, p in ram],
    }
    return doc, info


FIELDS = [
    ("x^3 - x - 1", "x3-x-1", "splitting field of x^3 - x - 1 over Q"),
    ("x^3 - 4*x + 1", "x3-4x+1", "splitting field of x^3 - 4x + 1 over Q"),
    ("x^5 - 5*x + 12", "x5-5x+12", "splitting field of x^5 - 5x + 12 over Q"),
]


def main(outdir: str) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for poly, name, label in FIELDS:
        doc, info = dataset(poly, label)
        (out / f"{name}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(name, json.dumps({"class_numbers": doc["class_numbers"], **info}))
    # negative control: the real dataset with h_F perturbed by one
    bad = json.loads((out / "x3-x-1.json").read_text())
    bad["label"] = "x3-x-1 with h_F perturbed by one (negative control)"
    bad["class_numbers"]["F"] += 1
    (out / "x3-x-1-corrupted.json").write_text(json.dumps(bad, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).resolve().parents[1] / "src/dihedral_tate/data"))
