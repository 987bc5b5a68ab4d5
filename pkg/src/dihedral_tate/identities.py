"""Executable checks of the algebraic identities for D-modules, and the fuzz harness."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from .cohomology import (
    ConsistencyError,
    FiniteAbGroup,
    delta_split_subgroups,
    delta_split,
    herbrand_quotient,
    presentation_tate,
    tate_cyclic,
    tate_dihedral,
    tate_dihedral_direct,
)
from .dmodule import (
    FULL,
    SIGMA,
    SIGMA_PRIME,
    DModule,
    RandomModuleSpec,
    SubgroupSpec,
    direct_sum,
    random_dmodule,
    random_unimodular,
    rotations,
    sublattice_module,
    sum_over_reflections,
)
from .intlinalg import (
    INFINITE,
    IntMatrix,
    Subgroup,
    index,
    prime_factors,
    subgroup_intersection,
    subgroup_sum,
    subquotient,
    torsion_subgroup,
)

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class CheckReport:
    check_name: str
    module_fingerprint: str
    outcome: str
    reason: str = ""
    witness: object = None
    subchecks: list[CheckReport] = field(default_factory=list)

    def __post_init__(self):
        if self.outcome == FAIL and self.witness is None:
            raise ValueError("a failing check must carry a witness")

    @property
    def passed(self) -> bool:
        return self.outcome != FAIL

    def leaves(self) -> list[CheckReport]:
        if not self.subchecks:
            return [self]
        return [leaf for s in self.subchecks for leaf in s.leaves()]

    def line(self) -> str:
        if self.outcome == PASS:
            status = "PASS"
        elif self.outcome == SKIP:
            status = f"SKIP({self.reason})"
        else:
            status = "FAIL"
        text = f"CHECK {self.check_name} {self.module_fingerprint} {status}"
        if self.outcome == FAIL:
            text += " witness=" + json.dumps(_jsonable(self.witness), sort_keys=True)
        return text

    def lines(self) -> list[str]:
        return [leaf.line() for leaf in self.leaves()]


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, FiniteAbGroup):
        return list(x.divisors)
    if isinstance(x, Subgroup):
        return [list(g) for g in x.reduced().generators]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is INFINITE:
        return "inf"
    return x


class _Collector:
    """Accumulates sub-check outcomes; exceptions inside a sub-check become failures."""

    def __init__(self, prefix: str, fingerprint: str):
        self.prefix = prefix
        self.fingerprint = fingerprint
        self.items: list[CheckReport] = []

    def _add(self, name, outcome, reason="", witness=None):
        self.items.append(CheckReport(f"{self.prefix}.{name}", self.fingerprint, outcome, reason, witness))

    def equal(self, name: str, left, right, **context):
        if left == right:
            self._add(name, PASS)
        else:
            self._add(name, FAIL, witness={"left": left, "right": right, **context})

    def true(self, name: str, condition: bool, **witness):
        if condition:
            self._add(name, PASS)
        else:
            self._add(name, FAIL, witness=witness or {"condition": False})

    def same_subgroup(self, name: str, S: Subgroup, T: Subgroup):
        if S.equals(T):
            self._add(name, PASS)
        else:
            self._add(name, FAIL, witness={"left": S, "right": T})

    def contained(self, name: str, S: Subgroup, T: Subgroup):
        missing = [g for g in S.generators if not T.contains(g)]
        if missing:
            self._add(name, FAIL, witness={"not_contained": missing, "in": T})
        else:
            self._add(name, PASS)

    def skip(self, name: str, reason: str):
        self._add(name, SKIP, reason)

    def run(self, name: str, fn: Callable[[], None]):
        try:
            fn()
        except (ConsistencyError, ArithmeticError, ValueError) as exc:
            self._add(name, FAIL, witness={"error": f"{type(exc).__name__}: {exc}"})

    def report(self) -> CheckReport:
        outcomes = {s.outcome for s in self.items}
        if FAIL in outcomes:
            outcome = FAIL
            witness = [s.check_name for s in self.items if s.outcome == FAIL]
        elif outcomes == {SKIP}:
            outcome, witness = SKIP, None
        else:
            outcome, witness = PASS, None
        reason = self.items[0].reason if outcome == SKIP else ""
        return CheckReport(self.prefix, self.fingerprint, outcome, reason, witness, self.items)


# ---------------------------------------------------------------------------
# Shared pieces


def fingerprint_of(M: DModule) -> str:
    import hashlib

    return "module=" + hashlib.sha256(M.dumps().encode()).hexdigest()[:12]


def _S2(M: DModule) -> Subgroup:
    return subgroup_sum(M.invariants(SIGMA), M.invariants(SIGMA_PRIME)).reduced()


def _S3(M: DModule) -> Subgroup:
    return subgroup_sum(_S2(M), M.invariants(rotations(M.q))).reduced()


def _q_torsion(M: DModule) -> Subgroup:
    return torsion_subgroup(M.base, M.q)


def _image(M: DModule, S: Subgroup, A) -> Subgroup:
    return Subgroup(M.base, [A.apply(g) for g in S.generators]).reduced()


def _order(S: Subgroup) -> int:
    return S.order()


def _odd_order(n: int) -> int:
    while n % 2 == 0:
        n //= 2
    return n


def _q_supported(n, q: int) -> bool:
    if n is INFINITE:
        return False
    for p in prime_factors(q):
        while n % p == 0:
            n //= p
    return n == 1


def _independent_dihedral(M: DModule, i: int) -> FiniteAbGroup:
    """Tate cohomology of D computed without the eigenspace assembly."""
    if i in (-1, 0):
        return tate_dihedral_direct(M, i).group
    return presentation_tate(M, i)


# ---------------------------------------------------------------------------
# The checks


def check_split_walter(M: DModule, fingerprint: str | None = None) -> CheckReport:
    fp = fingerprint or fingerprint_of(M)
    c = _Collector("split_walter", fp)
    B = M.base
    if not B.is_finite():
        c.skip("all", "infinite module")
        return c.report()
    if gcd(B.order(), M.q) != 1:
        c.skip("all", "q-divisibility violated")
        return c.report()
    q = M.q
    BG, BD = M.invariants(rotations(q)), M.invariants(FULL)
    BS, BSp = M.invariants(SIGMA), M.invariants(SIGMA_PRIME)
    S2 = _S2(M)
    whole = B.whole()
    c.same_subgroup("decomposition", subgroup_sum(BG, S2), whole)
    c.same_subgroup("all_reflections", sum_over_reflections(M), S2)
    c.same_subgroup("direct_mod_D", subgroup_intersection(BG, S2), BD)
    c.same_subgroup("sigma_cap", subgroup_intersection(BS, BSp), BD)

    def first():
        total = FiniteAbGroup.of(subquotient(whole, BD))
        summands = FiniteAbGroup.of(subquotient(BG, BD)) + FiniteAbGroup.of(subquotient(S2, BD))
        c.equal("first_iso", total, summands)

    def second():
        total = FiniteAbGroup.of(subquotient(whole, BG))
        summands = FiniteAbGroup.of(subquotient(BS, BD)) + FiniteAbGroup.of(subquotient(BSp, BD))
        c.equal("second_iso", total, summands)
        c.equal("order_bookkeeping", index(BD, BS) * index(BD, BSp), index(BG, whole))

    c.run("first_iso", first)
    c.run("second_iso", second)
    return c.report()


def unit_index_sides(M: DModule) -> tuple[Fraction, Fraction, dict]:
    """Both sides of the unit index formula and the factors of the right side."""
    q = M.q
    G = rotations(q)
    h0 = tate_dihedral(M, 0).group.odd_part().order()
    h1 = tate_dihedral(M, -1).group.odd_part().order()
    lhs = Fraction(h0, h1)
    S3 = _S3(M)
    idx = index(S3)
    IG = M.augmentation_submodule(G)
    BG, BD = M.invariants(G), M.invariants(FULL)
    num = _order(subgroup_intersection(IG, BD))
    den = _order(subgroup_intersection(IG, BG))
    Q = herbrand_quotient(M, G)
    exponent = BD.rank - BG.rank
    rhs = Fraction(idx) * Q * Fraction(num, den) * Fraction(q) ** exponent
    factors = {"index": idx, "herbrand": Q, "IG_cap_BD": num, "IG_cap_BG": den, "q_exponent": exponent}
    return lhs, rhs, factors


def check_unit_index_formula(M: DModule, fingerprint: str | None = None) -> CheckReport:
    c = _Collector("unit_index", fingerprint or fingerprint_of(M))

    def run():
        lhs, rhs, factors = unit_index_sides(M)
        c.equal("formula", lhs, rhs, factors=factors)

    def paths():
        # odd-part ratio against the full dihedral ratio with the order-2 correction
        lhs, _, _ = unit_index_sides(M)
        full = Fraction(tate_dihedral_direct(M, 0).order(), tate_dihedral_direct(M, -1).order())
        full *= Fraction(tate_cyclic(M, SIGMA, -1).order(), tate_cyclic(M, SIGMA, 0).order())
        c.equal("ratio_paths", lhs, full)

    c.run("formula", run)
    c.run("ratio_paths", paths)
    return c.report()


def check_index_lemmas(M: DModule, fingerprint: str | None = None) -> CheckReport:
    c = _Collector("index_lemmas", fingerprint or fingerprint_of(M))
    q = M.q
    G = rotations(q)
    B = M.base
    NG = M.norm_map(G)
    S3 = _S3(M)
    BG, BD = M.invariants(G), M.invariants(FULL)
    ker = M.norm_kernel(G)
    Bq = _q_torsion(M)

    def run():
        total = index(S3)
        first = index(_image(M, S3, NG), M.norm_image(G))
        second = index(subgroup_intersection(ker, S3), ker)
        c.equal("factorization", total, first * second, first=first, second=second)
        for name, value in (("total", total), ("first", first), ("second", second)):
            c.true(f"q_support.{name}", _q_supported(value, q), index=value, q=q)

        h0D = tate_dihedral(M, 0).group.odd_part().order()
        h0G = tate_cyclic(M, G, 0).order()
        qBG, qBD = BG.scaled(q).reduced(), BD.scaled(q).reduced()
        rhs1 = Fraction(h0D * index(qBG, BG), h0G * index(qBD, BD))
        c.equal("first_factor", Fraction(first), rhs1)

        h1G = tate_cyclic(M, G, -1).order()
        h1D = tate_dihedral(M, -1).group.odd_part().order()
        IG = M.augmentation_submodule(G)
        BGq, BDq = subgroup_intersection(BG, Bq), subgroup_intersection(BD, Bq)
        tors_idx = index(subgroup_intersection(IG, BDq), subgroup_intersection(IG, BGq))
        rhs2 = Fraction(h1G * tors_idx, h1D * index(BDq, BGq))
        c.equal("second_factor", Fraction(second), rhs2)

        for name, X in (("BG", BG), ("BD", BD), ("B", B.whole())):
            lhs = _order(subgroup_intersection(X, Bq)) * q ** X.rank
            c.equal(f"rank_vs_torsion.{name}", lhs, index(X.scaled(q).reduced(), X))

    c.run("lemmas", run)
    return c.report()


def check_cohomology_identities(M: DModule, fingerprint: str | None = None) -> CheckReport:
    c = _Collector("cohomology", fingerprint or fingerprint_of(M))
    q = M.q
    G = rotations(q)

    def restriction():
        for i in (-3, -2, -1, 0, 1, 2):
            indep = _independent_dihedral(M, i)
            plus, minus = delta_split(M, i)
            # degrees 0 and -1 mod 4 see the plus part, 1 and 2 mod 4 the minus part
            part = plus if i % 4 in (0, 3) else minus
            c.equal(f"restriction_odd[{i}]", indep.odd_part(), part)
            c.equal(f"two_primary[{i}]", indep.two_part(), tate_cyclic(M, SIGMA, i).group)
            c.equal(f"assembly[{i}]", tate_dihedral(M, i, check=False).group, indep)
        c.equal("period4[-3]", presentation_tate(M, -3), presentation_tate(M, 1))
        c.equal("period4[-2]", presentation_tate(M, -2), presentation_tate(M, 2))

    def split():
        for i in (0, -1):
            T, odd, plus, minus = delta_split_subgroups(M, i)
            c.same_subgroup(f"split_sum[{i}]", subgroup_sum(plus, minus), odd)
            c.true(f"split_direct[{i}]", subgroup_intersection(plus, minus).is_trivial(), plus=plus, minus=minus)

    c.run("restriction", restriction)
    c.run("split", split)

    IG = M.augmentation_submodule(G)
    BS, BSp = M.invariants(SIGMA), M.invariants(SIGMA_PRIME)
    S2 = _S2(M)
    c.contained("augmentation_in_reflections", IG, S2)
    c.same_subgroup("reflection_sum_sigma", subgroup_sum(BS, IG), S2)
    c.same_subgroup("reflection_sum_sigma_prime", subgroup_sum(BSp, IG), S2)

    def compat():
        for H in (G, SIGMA, SIGMA_PRIME, FULL):
            c.contained(f"norm_in_invariants.{H.label()}", M.norm_image(H), M.invariants(H))
            c.contained(f"augmentation_in_norm_kernel.{H.label()}", M.augmentation_submodule(H), M.norm_kernel(H))

    c.run("compat", compat)

    def quotients():
        T, odd, plus, minus = delta_split_subgroups(M, -1)
        ker = M.norm_kernel(G)
        inner = subgroup_intersection(ker, S2)
        W = T.subgroup_from(inner)
        c.same_subgroup("quotient_plus", subgroup_intersection(W, odd), plus)
        outer = FiniteAbGroup.of(subquotient(ker, inner))
        c.equal("quotient_minus", outer.odd_part(), FiniteAbGroup.of(minus.as_group()))
        c.equal("quotient_dihedral[-1]", FiniteAbGroup.of(subquotient(inner, IG)).odd_part(),
                tate_dihedral_direct(M, -1).group.odd_part())
        c.equal("quotient_dihedral[1]", outer.odd_part(), presentation_tate(M, 1).odd_part())

    c.run("quotient", quotients)

    def torsion_kernel():
        Bq = _q_torsion(M)
        BG, BD = M.invariants(G), M.invariants(FULL)
        if not Bq.issubset(BG):
            c.skip("torsion_kernel", "torsion not fixed by G")
            return
        I = IntMatrix.identity(M.ngens)
        IGq = Subgroup(M.base, [(M.act_rho - I).apply(g) for g in Bq.generators])
        num = subgroup_intersection(Bq, M.norm_kernel(G))
        kernel_pre = subgroup_intersection(num, IG)
        c.true("torsion_kernel.no_local_augmentation", IGq.is_trivial(), generators=IGq)
        c.same_subgroup("torsion_kernel.G_torsion", kernel_pre, subgroup_intersection(IG, subgroup_intersection(Bq, BG)))
        c.same_subgroup("torsion_kernel.G", kernel_pre, subgroup_intersection(IG, BG))
        numD = subgroup_intersection(Bq, M.norm_kernel(FULL))
        ID = M.augmentation_submodule(FULL)
        IDq = Subgroup(
            M.base,
            [(A - I).apply(g) for A in (M.act_rho, M.act_sigma) for g in Bq.generators],
        )
        preD = subgroup_intersection(numD, ID)
        kerD = FiniteAbGroup.of(subquotient(subgroup_sum(preD, IDq), IDq))
        c.equal("torsion_kernel.D_torsion", kerD.odd_part(),
                FiniteAbGroup.of(subgroup_intersection(IG, subgroup_intersection(Bq, BD)).as_group()).odd_part())
        c.equal("torsion_kernel.D", kerD.odd_part(),
                FiniteAbGroup.of(subgroup_intersection(IG, BD).as_group()).odd_part())

    c.run("torsion_kernel", torsion_kernel)
    return c.report()


ALL_CHECKS: tuple[tuple[str, Callable[..., CheckReport]], ...] = (
    ("split_walter", check_split_walter),
    ("unit_index", check_unit_index_formula),
    ("index_lemmas", check_index_lemmas),
    ("cohomology", check_cohomology_identities),
)


def run_all_checks(M: DModule, fingerprint: str | None = None) -> list[CheckReport]:
    fp = fingerprint or fingerprint_of(M)
    return [fn(M, fp) for _, fn in ALL_CHECKS]


def check_direct_sum(M: DModule, parts: Sequence[DModule], fingerprint: str | None = None) -> CheckReport:
    """Herbrand quotient and both unit-index sides are multiplicative over the summands."""
    c = _Collector("direct_sum", fingerprint or fingerprint_of(M))
    G = rotations(M.q)

    def run():
        Q = Fraction(1)
        lhs = rhs = Fraction(1)
        for P in parts:
            Q *= herbrand_quotient(P, G)
            l, r, _ = unit_index_sides(P)
            lhs, rhs = lhs * l, rhs * r
        L, R, _ = unit_index_sides(M)
        c.equal("herbrand", herbrand_quotient(M, G), Q)
        c.equal("unit_index_lhs", L, lhs)
        c.equal("unit_index_rhs", R, rhs)

    c.run("multiplicative", run)
    return c.report()


# ---------------------------------------------------------------------------
# Fuzzing


@dataclass(frozen=True)
class FuzzConfig:
    q_list: tuple[int, ...] = (3, 5, 7, 9, 15)
    trials: int = 200
    spec: RandomModuleSpec = RandomModuleSpec()
    seed: int = 0
    finite_every: int = 3

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.q_list:
            raise ValueError("q_list is empty")
        for q in self.q_list:
            if q < 3 or q % 2 == 0:
                raise ValueError(f"q must be odd and at least 3, got {q}")
        if self.finite_every < 0:
            raise ValueError("finite_every must be non-negative")


def fuzz_module(q: int, spec: RandomModuleSpec, seed: int, trial: int, finite: bool = False):
    """The trial module, a conjugated sum of two random summands, and its summands."""
    rng = random.Random(f"fuzz:{seed}:{q}:{trial}")
    sub = replace(spec, coprime_to_q=finite or spec.coprime_to_q, finite_only=finite or spec.finite_only)
    if spec.max_rank < 2:
        M = random_dmodule(q, sub, f"{seed}:{trial}")
        return M, [M]
    first = rng.randint(1, spec.max_rank - 1)
    n1 = rng.randint(1, max(1, spec.num_summands - 1))
    M1 = random_dmodule(q, replace(sub, max_rank=first, num_summands=n1), f"{seed}:{trial}:a")
    rest = spec.max_rank - M1.ngens
    n2 = max(1, spec.num_summands - n1)
    M2 = random_dmodule(q, replace(sub, max_rank=rest, num_summands=n2), f"{seed}:{trial}:b")
    S = direct_sum([M1, M2])
    parts = [M1, M2]
    if not finite and rng.random() < 0.5:
        # glue the summands along a random sublattice of index dividing a power of m
        m = rng.choice([p for p in (2, 3, 5, 7) if q % p == 0] + [2, q])
        v = [rng.randint(-2, 2) for _ in range(S.ngens)]
        S = sublattice_module(S, [v], m)
        parts = [S]
    P, Pinv = random_unimodular(rng, S.ngens, spec.conjugation_depth)
    return S.conjugate(P, Pinv), parts


def run_trial(q: int, spec: RandomModuleSpec, seed: int, trial: int, finite_every: int = 3) -> list[CheckReport]:
    finite = bool(finite_every) and trial % finite_every == finite_every - 1
    fp = f"q={q} seed={seed} trial={trial}"
    M, parts = fuzz_module(q, spec, seed, trial, finite)
    reports = run_all_checks(M, fp)
    if len(parts) > 1:
        reports.append(check_direct_sum(M, parts, fp))
    return reports


def _run_trial_args(args):
    return run_trial(*args)


@dataclass
class FuzzReport:
    config: FuzzConfig
    reports: list[CheckReport]

    @property
    def leaves(self) -> list[CheckReport]:
        return [leaf for r in self.reports for leaf in r.leaves()]

    def counts(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.reports:
            d = out.setdefault(r.check_name, {PASS: 0, FAIL: 0, SKIP: 0})
            d[r.outcome] += 1
        return out

    def first_failures(self) -> dict[str, CheckReport]:
        out: dict[str, CheckReport] = {}
        for leaf in self.leaves:
            if leaf.outcome == FAIL and leaf.check_name not in out:
                out[leaf.check_name] = leaf
        return out

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.reports)

    def summary_lines(self) -> list[str]:
        cfg = self.config
        leaves = self.leaves
        tally = {k: sum(1 for x in leaves if x.outcome == k) for k in (PASS, FAIL, SKIP)}
        lines = [
            "SUMMARY",
            f"q_list={','.join(map(str, cfg.q_list))} trials={cfg.trials} seed={cfg.seed}",
            f"subchecks={len(leaves)} pass={tally[PASS]} fail={tally[FAIL]} skip={tally[SKIP]}",
        ]
        for name, d in sorted(self.counts().items()):
            lines.append(f"{name} pass={d[PASS]} fail={d[FAIL]} skip={d[SKIP]}")
        for name, leaf in sorted(self.first_failures().items()):
            lines.append("FIRST_FAILURE " + leaf.line()[len("CHECK "):])
        lines.append("RESULT " + ("PASS" if self.ok else "FAIL"))
        return lines

    def lines(self, quiet: bool = False, verbose: bool = False) -> list[str]:
        """One line per check and trial; leaves when verbose; only failures when quiet."""
        if quiet:
            body = [leaf.line() for leaf in self.leaves if leaf.outcome == FAIL]
        elif verbose:
            body = [leaf.line() for leaf in self.leaves]
        else:
            body = [r.line() for r in self.reports]
        return body + self.summary_lines()


def fuzz(config: FuzzConfig, jobs: int = 1, progress: Callable[[int], None] | None = None) -> FuzzReport:
    """Run every check on ``trials`` random modules per q, merged in (q, trial) order."""
    tasks = [
        (q, config.spec, config.seed, t, config.finite_every)
        for q in config.q_list
        for t in range(config.trials)
    ]
    reports: list[CheckReport] = []
    if jobs > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            for k, rs in enumerate(pool.imap(_run_trial_args, tasks, chunksize=4)):
                reports.extend(rs)
                if progress:
                    progress(k)
    else:
        for k, task in enumerate(tasks):
            reports.extend(_run_trial_args(task))
            if progress:
                progress(k)
    return FuzzReport(config, reports)


__all__ = [
    "CheckReport",
    "FuzzConfig",
    "FuzzReport",
    "check_split_walter",
    "check_unit_index_formula",
    "check_index_lemmas",
    "check_cohomology_identities",
    "check_direct_sum",
    "run_all_checks",
    "unit_index_sides",
    "fuzz",
    "fuzz_module",
    "run_trial",
    "ALL_CHECKS",
]
