#!/usr/bin/env python3
"""Print reference cohomology values for the fixed modules in tests/test_cohomology.py.

Values come only from tests/oracles.py: element enumeration for finite
modules with diagonal relations, and Fox calculus over sympy for H^1 and H^2
of D.  The package is used only to build the modules.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import oracles  # noqa: E402
from reference_modules import REFERENCE_MODULES  # noqa: E402


def diagonal_moduli(M):
    """Moduli if the relations are exactly n_i e_i, else None."""
    n = M.ngens
    moduli = [0] * n
    for r in M.base.relations:
        nz = [i for i, x in enumerate(r) if x]
        if len(nz) != 1:
            return None
        moduli[nz[0]] = abs(r[nz[0]])
    return moduli if all(moduli) else None


def main():
    for name, build in REFERENCE_MODULES.items():
        M = build()
        rels = [list(r) for r in M.base.relations]
        P = oracles.PresentedModule(M.q, M.ngens, rels, M.act_rho.tolist(), M.act_sigma.tolist())
        row = {"D1": tuple(oracles.presented_h1(P)), "D2": tuple(oracles.presented_h2(P))}
        moduli = diagonal_moduli(M)
        if moduli:
            F = oracles.FiniteModule(moduli, M.act_rho.tolist(), M.act_sigma.tolist(), M.q)
            for label, kind, param in (("D", "full", 0), ("G", "rotation", M.q), ("S", "reflection", 0)):
                for deg in (0, -1):
                    row[f"{label}{deg}"] = oracles.brute_tate(F, kind, param, deg)
        print(f"    {name!r}: {row!r},")


if __name__ == "__main__":
    main()
