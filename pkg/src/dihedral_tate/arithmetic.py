"""Field data: ingestion of unit-group presentations and the class number checks.

A field dataset describes a dihedral extension L/k of degree 2q through the
class numbers of L, K = L^Sigma, F = L^G and k, and the unit group E_L as an
abstract D-module: free generators (fundamental units) plus one torsion
generator of order w, with the matrices of rho and sigma.  No number field
arithmetic happens here; everything is computed from the presented module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

from .cohomology import herbrand_quotient, tate_cyclic, tate_dihedral, tate_dihedral_direct
from .dmodule import FULL, SIGMA, SIGMA_PRIME, DModule, DModuleError, rotations
from .intlinalg import (
    INFINITE,
    FinGenAb,
    IntMatrix,
    index,
    prime_factors,
    subgroup_intersection,
    subgroup_sum_all,
    torsion_subgroup,
    valuation,
)

F_TYPES = ("real", "imaginary", "CM_over_k")
SPLIT_TYPES = ("split", "inert", "ramified")
DATA_DIR = Path(__file__).with_name("data")


class DataError(ValueError):
    """A field document is malformed or contradicts a structural invariant."""


def _is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == [n]


def _odd(n: int) -> int:
    while n and n % 2 == 0:
        n //= 2
    return n


@dataclass(frozen=True)
class RamificationRow:
    split_type: str
    e: int


@dataclass
class FieldData:
    label: str
    q: int
    h_L: int
    h_K: int
    h_F: int
    h_k: int
    unit_module: DModule
    w: int
    k_is_Q: bool
    F_type: str
    unit_rank_k: int
    unit_rank_F: int
    ramification: tuple[RamificationRow, ...] | None = None

    @property
    def unit_rank(self) -> int:
        return self.unit_module.ngens - 1

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.h_L * self.h_k**2, self.h_F * self.h_K**2)

    def to_dict(self) -> dict:
        doc = {
            "label": self.label,
            "q": self.q,
            "class_numbers": {"L": self.h_L, "K": self.h_K, "F": self.h_F, "k": self.h_k},
            "units": {
                "rank": self.unit_rank,
                "w": self.w,
                "rho": self.unit_module.act_rho.tolist(),
                "sigma": self.unit_module.act_sigma.tolist(),
            },
            "flags": {"k_is_Q": self.k_is_Q, "F_type": self.F_type},
            "unit_ranks": {"k": self.unit_rank_k, "F": self.unit_rank_F},
        }
        if self.ramification is not None:
            doc["ramification"] = [{"type": r.split_type, "e": r.e} for r in self.ramification]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# -- loading -----------------------------------------------------------------


def _int(value, what: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DataError(f"parse error: {what} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise DataError(f"parse error: {what} must be >= {minimum}, got {value}")
    return value


def _section(doc: dict, key: str) -> dict:
    value = doc.get(key)
    if not isinstance(value, dict):
        raise DataError(f"parse error: missing or malformed '{key}'")
    return value


def _matrix(value, size: int, what: str) -> IntMatrix:
    if not isinstance(value, list) or len(value) != size:
        raise DataError(f"parse error: {what} must be a {size}x{size} matrix")
    for row in value:
        if not isinstance(row, list) or len(row) != size:
            raise DataError(f"parse error: {what} must be a {size}x{size} matrix")
        for x in row:
            _int(x, f"{what} entry")
    return IntMatrix(value, size)


def _parse_ramification(rows) -> tuple[RamificationRow, ...]:
    if not isinstance(rows, list):
        raise DataError("parse error: ramification must be a list")
    out = []
    for row in rows:
        if not isinstance(row, dict) or row.get("type") not in SPLIT_TYPES:
            raise DataError(f"parse error: bad ramification row {row!r}")
        out.append(RamificationRow(row["type"], _int(row.get("e"), "ramification index", 1)))
    return tuple(out)


def parse_field_data(doc: dict) -> FieldData:
    """Build FieldData from a document, checking syntax and module relations only."""
    if not isinstance(doc, dict):
        raise DataError("parse error: document must be an object")
    label = doc.get("label")
    if not isinstance(label, str):
        raise DataError("parse error: label must be a string")
    q = _int(doc.get("q"), "q", 3)
    if q % 2 == 0:
        raise DataError(f"parse error: q must be odd, got {q}")
    cn = _section(doc, "class_numbers")
    h = {key: _int(cn.get(key), f"class number h_{key}", 1) for key in ("L", "K", "F", "k")}
    units = _section(doc, "units")
    rank = _int(units.get("rank"), "unit rank", 0)
    w = _int(units.get("w"), "w", 2)
    if w % 2:
        raise DataError(f"parse error: w must be even, got {w}")
    rho = _matrix(units.get("rho"), rank + 1, "rho")
    sigma = _matrix(units.get("sigma"), rank + 1, "sigma")
    flags = _section(doc, "flags")
    k_is_Q = flags.get("k_is_Q")
    if not isinstance(k_is_Q, bool):
        raise DataError("parse error: flags.k_is_Q must be a boolean")
    F_type = flags.get("F_type")
    if F_type not in F_TYPES:
        raise DataError(f"parse error: flags.F_type must be one of {F_TYPES}")
    ranks = _section(doc, "unit_ranks")
    rk_k = _int(ranks.get("k"), "unit_ranks.k", 0)
    rk_F = _int(ranks.get("F"), "unit_ranks.F", 0)
    ram = _parse_ramification(doc["ramification"]) if "ramification" in doc else None

    torsion = [0] * rank + [w]
    try:
        module = DModule(q, FinGenAb(rank + 1, [torsion]), rho, sigma)
    except DModuleError as exc:
        raise DataError(f"relation violation: {exc}") from exc
    return FieldData(label, q, h["L"], h["K"], h["F"], h["k"], module, w, k_is_Q, F_type, rk_k, rk_F, ram)


def validate_field_data(fd: FieldData) -> None:
    """The structural gates every accepted dataset must pass."""
    M, q = fd.unit_module, fd.q
    G = rotations(q)
    t = [0] * fd.unit_rank + [1]
    if not M.base.equal(M.act_rho.apply(t), t):
        raise DataError("torsion not fixed by G: rho moves the roots of unity")
    Q = herbrand_quotient(M, G)
    if Q != Fraction(1, q):
        raise DataError(f"Herbrand gate failed: Q(G, E_L) = {Q}, expected 1/{q}")
    rk_G, rk_D = M.invariants(G).rank, M.invariants(FULL).rank
    if rk_G != fd.unit_rank_F:
        raise DataError(f"unit rank mismatch: rank E_L^G = {rk_G}, declared rank E_F = {fd.unit_rank_F}")
    if rk_D != fd.unit_rank_k:
        raise DataError(f"unit rank mismatch: rank E_L^D = {rk_D}, declared rank E_k = {fd.unit_rank_k}")
    if fd.unit_rank != q * fd.unit_rank_F + q - 1:
        raise DataError(
            f"rank identity violated: rank E_L = {fd.unit_rank}, expected q*rank E_F + q - 1 = {q * fd.unit_rank_F + q - 1}"
        )


def load_field_data(document) -> FieldData:
    """Load and validate a dataset from a dict, JSON text or a path."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        try:
            document = Path(document).read_text()
        except OSError as exc:
            raise DataError(f"cannot read {document}: {exc}") from exc
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DataError(f"parse error: {exc}") from exc
    fd = parse_field_data(document)
    validate_field_data(fd)
    return fd


def bundled_dataset(name: str) -> FieldData:
    return load_field_data(DATA_DIR / f"{name}.json")


def bundled_names() -> list[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.json"))


# -- reports -----------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{k}:{_fmt(v)}" for k, v in value.items()) + "}"
    return str(value)


@dataclass
class StatementResult:
    name: str
    outcome: str
    left: Fraction | None = None
    right: Fraction | None = None
    reason: str = ""
    details: dict = field(default_factory=dict)
    windows: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.outcome not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad outcome {self.outcome!r}")
        if self.outcome == "fail" and (self.left is None or self.right is None):
            if not self.reason:
                raise ValueError("a failed statement needs both values or a reason")

    def line(self) -> str:
        parts = [self.name, self.outcome.upper()]
        if self.outcome == "skipped":
            parts[-1] = f"SKIPPED({self.reason})"
        if self.left is not None:
            parts.append(f"left={self.left}")
        if self.right is not None:
            parts.append(f"right={self.right}")
        for key, value in self.details.items():
            parts.append(f"{key}={_fmt(value)}")
        for ell, (lo, v, hi) in sorted(self.windows.items()):
            parts.append(f"v{ell}={v} in [{lo},{hi}]")
        if self.outcome == "fail" and self.reason:
            parts.append(f"reason={self.reason!r}")
        return " ".join(parts)


@dataclass
class VerificationReport:
    label: str
    statements: list[StatementResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.outcome != "fail" for s in self.statements)

    def outcome(self, name: str) -> str:
        for s in self.statements:
            if s.name == name:
                return s.outcome
        raise KeyError(name)

    def get(self, name: str) -> StatementResult:
        for s in self.statements:
            if s.name == name:
                return s
        raise KeyError(name)

    def extend(self, other: VerificationReport) -> VerificationReport:
        self.statements.extend(other.statements)
        return self

    def lines(self) -> list[str]:
        out = [f"DATASET {self.label}"]
        out.extend(s.line() for s in self.statements)
        out.append(f"RESULT {'PASS' if self.ok else 'FAIL'}")
        return out


def _statement(name: str, left, right, **details) -> StatementResult:
    outcome = "pass" if left == right else "fail"
    return StatementResult(name, outcome, left, right, details=details)


# -- class number ratio vs unit cohomology ------------------------------------


def cohomological_ratios(M: DModule) -> tuple[Fraction, Fraction]:
    """Odd-part ratio h0(D)/h-1(D), and the full-group ratio corrected by Sigma.

    The first goes through the G-cohomology split into eigenspaces of sigma;
    the second uses the dihedral groups computed directly from invariants and
    norms together with the order-2 subgroup, never taking odd parts.
    """
    odd0 = tate_dihedral(M, 0).group.odd_part().order()
    odd1 = tate_dihedral(M, -1).group.odd_part().order()
    rhs_odd = Fraction(odd0, odd1)
    d0 = tate_dihedral_direct(M, 0).order()
    d1 = tate_dihedral_direct(M, -1).order()
    s0 = tate_cyclic(M, SIGMA, 0).order()
    s1 = tate_cyclic(M, SIGMA, -1).order()
    rhs_full = Fraction(d0, d1) * Fraction(s1, s0)
    return rhs_odd, rhs_full


def verify_main_theorem(fd: FieldData) -> VerificationReport:
    lhs = fd.ratio
    rhs_odd, rhs_full = cohomological_ratios(fd.unit_module)
    ok = lhs == rhs_odd == rhs_full
    res = StatementResult(
        "main_theorem",
        "pass" if ok else "fail",
        lhs,
        rhs_odd,
        reason="" if ok else "class number ratio differs from unit cohomology",
        details={"rhs_odd": rhs_odd, "rhs_full": rhs_full},
    )
    return VerificationReport(fd.label, [res])


# -- unit index ----------------------------------------------------------------


@dataclass(frozen=True)
class UnitIndexData:
    index: int
    s: int
    rhs: Fraction


def unit_index_data(fd: FieldData) -> UnitIndexData:
    M, q = fd.unit_module, fd.q
    BS, BSp, BG, BD = (M.invariants(H) for H in (SIGMA, SIGMA_PRIME, rotations(q), FULL))
    idx = index(subgroup_sum_all([BS, BSp, BG]))
    if idx is INFINITE:
        raise DataError("unit index [E_L : E_K E_K' E_F] is infinite")
    s = index(BD.scaled(q), subgroup_intersection(BS.scaled(q), BD))
    rhs = Fraction(idx) * Fraction(q) ** (fd.unit_rank_k - fd.unit_rank_F - 1) / s
    return UnitIndexData(idx, s, rhs)


def verify_unit_index(fd: FieldData) -> VerificationReport:
    data = unit_index_data(fd)
    report = VerificationReport(fd.label)
    report.statements.append(_statement("unit_index", fd.ratio, data.rhs, index=data.index, s=data.s))
    divides = fd.q % data.s == 0
    report.statements.append(
        StatementResult(
            "s_divides_q",
            "pass" if divides else "fail",
            Fraction(data.s),
            Fraction(fd.q),
            reason="" if divides else f"s = {data.s} does not divide q = {fd.q}",
        )
    )
    return report


# -- bounds ------------------------------------------------------------------


def _q_part(n: int, q: int) -> int:
    out = 1
    for ell in prime_factors(q):
        out *= ell ** valuation(n, ell)
    return out


def defects(fd: FieldData) -> tuple[int, int]:
    """(delta_F, delta_k): whether F, resp. k, contain nontrivial q-th roots of unity."""
    M = fd.unit_module
    delta_F = int(gcd(fd.w, fd.q) > 1)
    Bq = torsion_subgroup(M.base, fd.q)
    delta_k = int(not subgroup_intersection(M.invariants(FULL), Bq).is_trivial())
    return delta_F, delta_k


def root_of_unity_index(fd: FieldData) -> int:
    """t = |mu_{q^infty}(F) / mu_q(F)|, using mu_F = mu_L."""
    return _q_part(fd.w, fd.q) // gcd(fd.w, fd.q)


def _window_check(name: str, ratio: Fraction, q: int, lower, upper, details=None) -> StatementResult:
    """lower/upper map a prime to the bound on v_ell(ratio)."""
    primes = sorted(set(prime_factors(q)) | set(prime_factors(ratio.numerator)) | set(prime_factors(ratio.denominator)))
    windows, ok = {}, True
    for ell in primes:
        v = valuation(ratio.numerator, ell) - valuation(ratio.denominator, ell)
        lo, hi = lower(ell), upper(ell)
        windows[ell] = (lo, v, hi)
        ok = ok and lo <= v <= hi
    return StatementResult(
        name,
        "pass" if ok else "fail",
        reason="" if ok else "valuation outside its window",
        details=details or {},
        windows=windows,
    )


def check_bounds(fd: FieldData) -> VerificationReport:
    q, ratio = fd.q, fd.ratio
    dF, dk = defects(fd)
    a = fd.unit_rank_F + dF + 1
    b = fd.unit_rank_k + dk
    report = VerificationReport(fd.label)
    report.statements.append(
        _window_check(
            "bounds_general",
            ratio,
            q,
            lambda ell: -a * valuation(q, ell),
            lambda ell: b * valuation(q, ell),
            {"a": a, "b": b},
        )
    )
    cm = fd.F_type == "CM_over_k" or (fd.k_is_Q and fd.F_type == "imaginary")
    if cm:
        s = unit_index_data(fd).s
        t = root_of_unity_index(fd)
        report.statements.append(
            _window_check(
                "bounds_cm",
                ratio,
                q,
                lambda ell: -valuation(q, ell) - valuation(s, ell) - valuation(t, ell),
                lambda ell: b * valuation(q, ell),
                {"s": s, "t": t},
            )
        )
    else:
        report.statements.append(StatementResult("bounds_cm", "skipped", reason="F is not CM over k"))
    if fd.k_is_Q:
        factor = 1 if fd.F_type == "imaginary" else 2
        report.statements.append(
            _window_check(
                "bounds_rational",
                ratio,
                q,
                lambda ell: -factor * valuation(q, ell),
                lambda ell: 0,
            )
        )
        if _is_prime(q):
            allowed = [Fraction(1), Fraction(1, q), Fraction(1, q * q)]
            inside = ratio in allowed and (fd.F_type != "imaginary" or ratio != Fraction(1, q * q))
            report.statements.append(
                StatementResult(
                    "bounds_rational_prime",
                    "pass" if inside else "fail",
                    ratio,
                    None,
                    reason="" if inside else f"ratio {ratio} not in the allowed set",
                    details={"allowed": allowed},
                )
            )
        else:
            report.statements.append(StatementResult("bounds_rational_prime", "skipped", reason="q not prime"))
    else:
        report.statements.append(StatementResult("bounds_rational", "skipped", reason="k is not Q"))
    return report


# -- local unit cohomology -----------------------------------------------------


@dataclass(frozen=True)
class LocalOrders:
    h0_D: int
    h1_D: int
    h1_G: int
    ramified_rows: int

    def identity_holds(self) -> bool:
        """h1_G = h1_D * h0_D on odd parts; each ramified row costs exactly 4 on the 2-part."""
        return _odd(self.h1_G) == _odd(self.h1_D * self.h0_D) and self.h1_G * 4**self.ramified_rows == self.h1_D * self.h0_D


def local_orders_from_table(rows) -> LocalOrders:
    h0_D = h1_D = h1_G = 1
    n_ram = 0
    for row in rows:
        kind, e = (row.split_type, row.e) if isinstance(row, RamificationRow) else row
        if kind not in SPLIT_TYPES or e < 1:
            raise DataError(f"bad ramification row ({kind}, {e})")
        h1_D *= e
        if kind == "split":
            h0_D *= e
            h1_G *= e * e
        elif kind == "inert":
            h1_G *= e
        else:
            if e % 2:
                raise DataError(f"ramified row with odd e = {e}: ramified primes have even index")
            h0_D *= 2
            h1_G *= e // 2
            n_ram += 1
    return LocalOrders(h0_D, h1_D, h1_G, n_ram)


def local_cohomology_orders(fd: FieldData) -> LocalOrders:
    if fd.ramification is None:
        raise DataError("dataset has no ramification table")
    return local_orders_from_table(fd.ramification)


def verify_local(fd: FieldData) -> VerificationReport:
    report = VerificationReport(fd.label)
    if fd.ramification is None:
        report.statements.append(StatementResult("local_orders", "skipped", reason="no ramification table"))
        return report
    lo = local_cohomology_orders(fd)
    report.statements.append(
        StatementResult(
            "local_orders",
            "pass" if lo.identity_holds() else "fail",
            Fraction(_odd(lo.h1_G)),
            Fraction(_odd(lo.h1_D * lo.h0_D)),
            details={"h0_D": lo.h0_D, "h1_D": lo.h1_D, "h1_G": lo.h1_G},
            reason="" if lo.identity_holds() else "h1_G differs from h1_D * h0_D",
        )
    )
    return report


# -- equivalence with the prime degree formula ---------------------------------


def verify_bartel_equivalence(fd: FieldData) -> VerificationReport:
    report = VerificationReport(fd.label)
    p = fd.q
    if not _is_prime(p):
        report.statements.append(StatementResult("bartel", "skipped", reason="q not prime"))
        return report
    if fd.unit_rank != p * fd.unit_rank_F + p - 1:
        raise DataError("rank identity violated")
    data = unit_index_data(fd)
    delta = 3 if data.s == p else 1
    alpha = 2 * fd.unit_rank_k - 2 * fd.unit_rank_F - 1 - delta
    rhs = Fraction(p) ** (alpha // 2) * data.index
    report.statements.append(_statement("bartel", fd.ratio, rhs, delta=delta, alpha=alpha, index=data.index))
    return report


# -- everything ----------------------------------------------------------------

CHECKS = {
    "main": verify_main_theorem,
    "index": verify_unit_index,
    "bounds": check_bounds,
    "bartel": verify_bartel_equivalence,
    "local": verify_local,
}


def verify_all(fd: FieldData, checks=tuple(CHECKS)) -> VerificationReport:
    report = VerificationReport(fd.label)
    for name in checks:
        if name not in CHECKS:
            raise DataError(f"unknown check {name!r}; choose from {','.join(CHECKS)}")
        report.extend(CHECKS[name](fd))
    return report


__all__ = [
    "DataError",
    "FieldData",
    "LocalOrders",
    "RamificationRow",
    "StatementResult",
    "UnitIndexData",
    "VerificationReport",
    "CHECKS",
    "bundled_dataset",
    "bundled_names",
    "check_bounds",
    "cohomological_ratios",
    "defects",
    "load_field_data",
    "local_cohomology_orders",
    "local_orders_from_table",
    "parse_field_data",
    "root_of_unity_index",
    "unit_index_data",
    "validate_field_data",
    "verify_all",
    "verify_bartel_equivalence",
    "verify_local",
    "verify_main_theorem",
    "verify_unit_index",
]
