"""The dihedral group of order 2q and finitely generated abelian groups with D-action.

Group elements are pairs ``(i, e)`` standing for ``rho^i sigma^e``.  A
:class:`DModule` stores only the matrices of ``rho`` and ``sigma``; every
other element acts through products of these two.
"""

from __future__ import annotations

import json
import random
from math import gcd
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .intlinalg import (
    FinGenAb,
    IntMatrix,
    Lattice,
    Subgroup,
    kernel,
    kernel_stacked,
    subgroup_sum_all,
)

Element = tuple[int, int]


class DihedralGroup:
    """D of order 2q with ``sigma rho = rho^-1 sigma``."""

    def __init__(self, q: int):
        q = int(q)
        if q < 3 or q % 2 == 0:
            raise ValueError(f"q must be odd and at least 3, got {q}")
        self.q = q

    def mul(self, g: Element, h: Element) -> Element:
        # rho^i sigma^e rho^j sigma^f = rho^(i + (-1)^e j) sigma^(e+f)
        i, e = g
        j, f = h
        return ((i + (-j if e else j)) % self.q, (e + f) % 2)

    def inverse(self, g: Element) -> Element:
        i, e = g
        return (i, 1) if e else ((-i) % self.q, 0)

    @property
    def identity(self) -> Element:
        return (0, 0)

    def elements(self) -> list[Element]:
        return [(i, e) for e in (0, 1) for i in range(self.q)]

    def __eq__(self, other):
        return isinstance(other, DihedralGroup) and other.q == self.q

    def __hash__(self):
        return hash(("D", self.q))

    def __repr__(self):
        return f"DihedralGroup(q={self.q})"


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup of D.

    ``kind`` is one of ``trivial``, ``rotation`` (param n: the subgroup
    <rho^(q/n)> of order n), ``reflection`` (param i: <sigma rho^i>) or
    ``full``.  Use :meth:`canonical` before comparing specs for different q.
    """

    kind: str
    param: int = 0

    @staticmethod
    def trivial() -> SubgroupSpec:
        return SubgroupSpec("trivial")

    @staticmethod
    def rotation(n: int) -> SubgroupSpec:
        return SubgroupSpec("rotation", int(n))

    @staticmethod
    def reflection(i: int) -> SubgroupSpec:
        return SubgroupSpec("reflection", int(i))

    @staticmethod
    def full() -> SubgroupSpec:
        return SubgroupSpec("full")

    def canonical(self, q: int) -> SubgroupSpec:
        if self.kind == "rotation":
            if self.param < 1 or q % self.param:
                raise ValueError(f"rotation order {self.param} does not divide q={q}")
            if self.param == 1:
                return SubgroupSpec.trivial()
            return self
        if self.kind == "reflection":
            return SubgroupSpec("reflection", self.param % q)
        if self.kind in ("trivial", "full"):
            return SubgroupSpec(self.kind)
        raise ValueError(f"unknown subgroup kind {self.kind!r}")

    def generators(self, q: int) -> list[Element]:
        s = self.canonical(q)
        if s.kind == "trivial":
            return []
        if s.kind == "rotation":
            return [(q // s.param, 0)]
        if s.kind == "reflection":
            # sigma rho^i = rho^-i sigma
            return [((-s.param) % q, 1)]
        return [(1, 0), (0, 1)]

    def elements(self, q: int) -> list[Element]:
        D = DihedralGroup(q)
        seen = {D.identity}
        frontier = [D.identity]
        gens = self.generators(q)
        while frontier:
            g = frontier.pop()
            for s in gens:
                h = D.mul(g, s)
                if h not in seen:
                    seen.add(h)
                    frontier.append(h)
        return sorted(seen, key=lambda g: (g[1], g[0]))

    def order(self, q: int) -> int:
        s = self.canonical(q)
        return {"trivial": 1, "rotation": s.param, "reflection": 2, "full": 2 * q}[s.kind]

    def is_cyclic(self) -> bool:
        return self.kind != "full"

    def label(self) -> str:
        if self.kind == "rotation":
            return f"rot{self.param}"
        if self.kind == "reflection":
            return f"ref{self.param}"
        return self.kind

    @staticmethod
    def parse(text: str, q: int) -> SubgroupSpec:
        """Parse CLI names: G, Sigma, SigmaPrime, D, 1, rot:<n>, ref:<i>."""
        t = text.strip()
        aliases = {
            "G": SubgroupSpec.rotation(q),
            "Sigma": SubgroupSpec.reflection(0),
            "SigmaPrime": SubgroupSpec.reflection(1),
            "D": SubgroupSpec.full(),
            "full": SubgroupSpec.full(),
            "1": SubgroupSpec.trivial(),
            "trivial": SubgroupSpec.trivial(),
        }
        if t in aliases:
            return aliases[t].canonical(q)
        if ":" in t:
            kind, _, value = t.partition(":")
            if kind in ("rot", "rotation"):
                return SubgroupSpec.rotation(int(value)).canonical(q)
            if kind in ("ref", "reflection"):
                return SubgroupSpec.reflection(int(value)).canonical(q)
        raise ValueError(f"unknown subgroup {text!r}")


def rotations(q: int) -> SubgroupSpec:
    return SubgroupSpec.rotation(q)


SIGMA = SubgroupSpec.reflection(0)
SIGMA_PRIME = SubgroupSpec.reflection(1)
FULL = SubgroupSpec.full()
TRIVIAL = SubgroupSpec.trivial()


class DModuleError(ValueError):
    """Raised when action matrices do not define a D-module."""


class DModule:
    """A finitely generated abelian group with an action of D of order 2q."""

    def __init__(self, q: int, base: FinGenAb, act_rho: IntMatrix, act_sigma: IntMatrix, check: bool = True):
        self.group = DihedralGroup(q)
        self.q = self.group.q
        self.base = base
        n = base.ngens
        for name, A in (("rho", act_rho), ("sigma", act_sigma)):
            if A.shape != (n, n):
                raise DModuleError(f"{name} must be {n}x{n}, got {A.shape}")
        self.act_rho = act_rho
        self.act_sigma = act_sigma
        self._actions: dict[Element, IntMatrix] = {}
        if check:
            self.verify()

    @property
    def ngens(self) -> int:
        return self.base.ngens

    # -- actions ---------------------------------------------------------

    def _same_endomorphism(self, A: IntMatrix, B: IntMatrix) -> bool:
        lat = self.base.lattice
        diff = A - B
        return all(col in lat for col in diff.columns())

    def verify(self) -> None:
        """Check well-definedness and the dihedral relations modulo relations."""
        n = self.ngens
        I = IntMatrix.identity(n)
        for name, A in (("rho", self.act_rho), ("sigma", self.act_sigma)):
            if not self.base.preserves(A):
                raise DModuleError(f"{name} does not preserve the relation lattice")
        if not self._same_endomorphism(self.act_rho ** self.q, I):
            raise DModuleError("rho^q is not the identity")
        if not self._same_endomorphism(self.act_sigma @ self.act_sigma, I):
            raise DModuleError("sigma^2 is not the identity")
        lhs = self.act_sigma @ self.act_rho @ self.act_sigma
        if not self._same_endomorphism(lhs, self.act_rho ** (self.q - 1)):
            raise DModuleError("sigma rho sigma is not rho^-1")

    def action_of(self, g: Element) -> IntMatrix:
        i, e = g[0] % self.q, g[1] % 2
        key = (i, e)
        A = self._actions.get(key)
        if A is None:
            A = self.act_rho ** i
            if e:
                A = A @ self.act_sigma
            self._actions[key] = A
        return A

    def norm_map(self, H: SubgroupSpec) -> IntMatrix:
        n = self.ngens
        total = IntMatrix.zeros(n, n)
        for h in H.elements(self.q):
            total = total + self.action_of(h)
        return total

    def group_ring_action(self, element: dict[Element, int]) -> IntMatrix:
        """Matrix of a group ring element given as ``{g: coefficient}``."""
        n = self.ngens
        total = IntMatrix.zeros(n, n)
        for g, c in element.items():
            if c:
                total = total + self.action_of(g).scale(c)
        return total

    # -- submodules ------------------------------------------------------

    def invariants(self, H: SubgroupSpec) -> Subgroup:
        key = ("inv", H.canonical(self.q))
        return self._cached(key, lambda: self._invariants(H))

    def _invariants(self, H):
        I = IntMatrix.identity(self.ngens)
        maps = [self.action_of(g) - I for g in H.generators(self.q)]
        return kernel_stacked(maps, self.base)

    def norm_image(self, H: SubgroupSpec) -> Subgroup:
        """``N_H B``."""
        key = ("nim", H.canonical(self.q))
        return self._cached(key, lambda: self.base.whole().image(self.norm_map(H)).reduced())

    def norm_kernel(self, H: SubgroupSpec) -> Subgroup:
        """``B[N_H]``."""
        key = ("nker", H.canonical(self.q))
        return self._cached(key, lambda: kernel(self.norm_map(H), self.base, self.base))

    def augmentation_submodule(self, H: SubgroupSpec) -> Subgroup:
        """``I_H B``: the span of ``(g - 1) b`` for generators g of H."""
        key = ("aug", H.canonical(self.q))
        return self._cached(key, lambda: self._augmentation(H))

    def _augmentation(self, H):
        I = IntMatrix.identity(self.ngens)
        gens = []
        for g in H.generators(self.q):
            gens.extend((self.action_of(g) - I).columns())
        return Subgroup(self.base, gens).reduced()

    def _cached(self, key, compute):
        cache = self.__dict__.setdefault("_subcache", {})
        if key not in cache:
            cache[key] = compute()
        return cache[key]

    def is_submodule(self, S: Subgroup) -> bool:
        return all(S.contains(A.apply(g)) for A in (self.act_rho, self.act_sigma) for g in S.generators)

    # -- constructions ---------------------------------------------------

    def direct_sum(self, other: DModule) -> DModule:
        if other.q != self.q:
            raise ValueError("direct sum of modules for different q")
        return direct_sum([self, other])

    def conjugate(self, P: IntMatrix, P_inv: IntMatrix) -> DModule:
        """Same module written in the basis given by the columns of P."""
        n = self.ngens
        if (P @ P_inv) != IntMatrix.identity(n):
            raise ValueError("P_inv is not the inverse of P")
        rels = [P_inv.apply(r) for r in self.base.relations]
        return DModule(
            self.q,
            FinGenAb(n, rels),
            P_inv @ self.act_rho @ P,
            P_inv @ self.act_sigma @ P,
        )

    def odd_localization(self) -> DModule:
        """Quotient by the 2-power torsion (same action)."""
        B = self.base
        _, divisors = B.structure()
        t2 = _two_part(divisors[-1]) if divisors else 1
        tors2 = kernel(IntMatrix.identity(self.ngens).scale(t2), B, B)
        newbase = FinGenAb(self.ngens, B.relations + tors2.lattice.basis)
        return DModule(self.q, newbase, self.act_rho, self.act_sigma)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "ngens": self.ngens,
            "relations": [list(r) for r in self.base.relations],
            "rho": self.act_rho.tolist(),
            "sigma": self.act_sigma.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> DModule:
        try:
            q = int(doc["q"])
            n = int(doc["ngens"])
            rels = [[int(x) for x in r] for r in doc.get("relations", [])]
            rho = IntMatrix(doc["rho"], n) if n else IntMatrix((), 0)
            sigma = IntMatrix(doc["sigma"], n) if n else IntMatrix((), 0)
        except (KeyError, TypeError) as exc:
            raise DModuleError(f"malformed module document: {exc}") from exc
        return cls(q, FinGenAb(n, rels), rho, sigma)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> DModule:
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        return (
            isinstance(other, DModule)
            and self.q == other.q
            and self.base.ngens == other.base.ngens
            and self.base.relations == other.base.relations
            and self.act_rho == other.act_rho
            and self.act_sigma == other.act_sigma
        )

    def __hash__(self):
        return hash((self.q, self.base.relations, self.act_rho, self.act_sigma))

    def __repr__(self):
        rank, divisors = self.base.structure()
        return f"DModule(q={self.q}, ngens={self.ngens}, rank={rank}, torsion={list(divisors)})"


def _two_part(n: int) -> int:
    t = 1
    while n and n % 2 == 0:
        n //= 2
        t *= 2
    return t


def direct_sum(modules: Sequence[DModule]) -> DModule:
    q = modules[0].q
    n = sum(M.ngens for M in modules)
    rels, rho, sigma = [], [[0] * n for _ in range(n)], [[0] * n for _ in range(n)]
    off = 0
    for M in modules:
        if M.q != q:
            raise ValueError("direct sum of modules for different q")
        k = M.ngens
        for r in M.base.relations:
            v = [0] * n
            v[off:off + k] = r
            rels.append(v)
        for i in range(k):
            rho[off + i][off:off + k] = M.act_rho.rows[i]
            sigma[off + i][off:off + k] = M.act_sigma.rows[i]
        off += k
    return DModule(q, FinGenAb(n, rels), IntMatrix(rho, n), IntMatrix(sigma, n))


# ---------------------------------------------------------------------------
# Building blocks


def cosets(q: int, H: SubgroupSpec) -> list[frozenset]:
    """Left cosets gH, the coset of the identity first."""
    D = DihedralGroup(q)
    Hel = H.elements(q)
    out, seen = [], set()
    for g in D.elements():
        if g in seen:
            continue
        c = frozenset(D.mul(g, h) for h in Hel)
        seen |= c
        out.append(c)
    return out


def permutation_module(q: int, H: SubgroupSpec, modulus: int = 0) -> DModule:
    """``Z[D/H]`` (or ``(Z/modulus)[D/H]``) with D permuting left cosets."""
    D = DihedralGroup(q)
    cs = cosets(q, H)
    where = {g: k for k, c in enumerate(cs) for g in c}
    m = len(cs)

    def perm_matrix(g):
        # column k = image of the basis vector of coset k
        cols = []
        for c in cs:
            rep = next(iter(c))
            j = where[D.mul(g, rep)]
            cols.append([int(i == j) for i in range(m)])
        return IntMatrix.from_columns(cols, m)

    rels = [[modulus if i == j else 0 for i in range(m)] for j in range(m)] if modulus else []
    return DModule(q, FinGenAb(m, rels), perm_matrix((1, 0)), perm_matrix((0, 1)))


def trivial_module(q: int, modulus: int = 0) -> DModule:
    rels = [[modulus]] if modulus else []
    one = IntMatrix([[1]])
    return DModule(q, FinGenAb(1, rels), one, one)


def sign_module(q: int, modulus: int = 0) -> DModule:
    """Z (or Z/modulus) with sigma acting by -1 and rho trivially."""
    rels = [[modulus]] if modulus else []
    return DModule(q, FinGenAb(1, rels), IntMatrix([[1]]), IntMatrix([[-1]]))


def regular_module(q: int) -> DModule:
    return permutation_module(q, TRIVIAL)


def submodule_on_basis(M: DModule, basis: Sequence[Sequence[int]]) -> DModule:
    """D-stable sublattice of a free module, rewritten on the given basis."""
    if M.base.relations:
        raise ValueError("submodule_on_basis expects a free module")
    lat = Lattice.span(M.ngens, basis)
    k = len(basis)
    if lat.rank != k:
        raise ValueError("basis vectors are dependent")
    B = IntMatrix.from_columns(basis, M.ngens)

    def restrict(A):
        from .intlinalg import solve
        cols = []
        for b in basis:
            c = solve(B, A.apply(b))
            if c is None:
                raise DModuleError("sublattice is not D-stable")
            cols.append(c)
        return IntMatrix.from_columns(cols, k)

    return DModule(M.q, FinGenAb(k), restrict(M.act_rho), restrict(M.act_sigma))


def augmentation_module(q: int, H: SubgroupSpec) -> DModule:
    """Kernel of the augmentation ``Z[D/H] -> Z``."""
    P = permutation_module(q, H)
    m = P.ngens
    basis = [[1 if i == j else (-1 if i == 0 else 0) for i in range(m)] for j in range(1, m)]
    return submodule_on_basis(P, basis)


def coaugmentation_module(q: int, H: SubgroupSpec) -> DModule:
    """``Z[D/H] / Z N``, presented with the norm vector as a relation."""
    P = permutation_module(q, H)
    m = P.ngens
    return DModule(q, FinGenAb(m, [[1] * m]), P.act_rho, P.act_sigma)



def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_divexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """a / b for monic b dividing a."""
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1]
        out[i] = c
        for j, y in enumerate(b):
            a[i + j] -= c * y
    if any(a):
        raise ValueError("inexact polynomial division")
    return out


def cyclotomic(d: int) -> list[int]:
    """Coefficients of the d-th cyclotomic polynomial, constant term first."""
    f = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            f = _poly_divexact(f, cyclotomic(e))
    return f


def cyclic_ring_module(q: int, factors: Sequence[tuple[int, int]], modulus: int = 0, sign: int = 1) -> DModule:
    """``Z[x]/(g, x^q - 1, modulus)`` with rho = x and sigma = sign * (x -> 1/x).

    ``g`` is the product of ``cyclotomic(d)**m`` over ``(d, m)`` in ``factors``;
    every d must divide q.  The monomial basis 1, x, ..., x^(deg g - 1) is used.
    """
    g = [1]
    for d, m in factors:
        if q % d:
            raise DModuleError(f"cyclotomic index {d} does not divide q = {q}")
        for _ in range(m):
            g = _poly_mul(g, cyclotomic(d))
    k = len(g) - 1
    if k < 1:
        raise DModuleError("empty ring")
    rows = [[0] * k for _ in range(k)]
    for i in range(k - 1):
        rows[i + 1][i] = 1
    for i in range(k):
        rows[i][k - 1] = -g[i]
    rho = IntMatrix(rows, k)
    # x is a unit because g(0) = +-1, and the inverse is again integral
    rho_inv = _companion_inverse(g)
    e0 = [1] + [0] * (k - 1)
    cols, v = [], e0
    for _ in range(k):
        cols.append([sign * x for x in v])
        v = rho_inv.apply(v)
    sigma = IntMatrix.from_columns(cols, k)
    I = IntMatrix.identity(k)
    rels = list((rho ** q - I).columns())
    if modulus:
        rels += [[modulus * int(i == j) for i in range(k)] for j in range(k)]
    return DModule(q, FinGenAb(k, rels), rho, sigma)


def _companion_inverse(g: Sequence[int]) -> IntMatrix:
    # x^-1 = -(g_1 + g_2 x + ... + x^(k-1)) / g_0 with g_0 = +-1
    k = len(g) - 1
    g0 = g[0]
    if g0 not in (1, -1):
        raise DModuleError("x is not a unit modulo g")
    inv_x = [-c * g0 for c in g[1:]]
    cols = [inv_x]
    for i in range(1, k):
        cols.append([int(j == i - 1) for j in range(k)])
    return IntMatrix.from_columns(cols, k)


# ---------------------------------------------------------------------------
# Random modules

SUMMAND_KINDS = (
    "perm",        # Z[D/H]
    "trivial",     # Z
    "torsion",     # Z/n trivial action
    "sign",        # Z with sigma = -1
    "torsion_sign",  # Z/n with sigma = -1
    "torsion_perm",  # (Z/n)[D/H]
    "aug",         # augmentation lattice of Z[D/H]
    "coaug",       # Z[D/H] / Z N
    "quotient",    # Z[D/H] / Z[D] v for a random small v
    "cyclic",      # Z[x]/(g, x^q - 1, n), g a product of cyclotomic powers
)


@dataclass(frozen=True)
class RandomModuleSpec:
    num_summands: int = 3
    allowed_summand_kinds: tuple[str, ...] = SUMMAND_KINDS
    torsion_exponent_bound: int = 36
    conjugation_depth: int = 6
    max_rank: int = 6
    coprime_to_q: bool = False
    finite_only: bool = False

    def __post_init__(self):
        if self.num_summands < 1:
            raise ValueError("num_summands must be at least 1")
        if self.max_rank < 1:
            raise ValueError("max_rank must be at least 1")
        if self.torsion_exponent_bound < 2 and any(k.startswith("torsion") for k in self.allowed_summand_kinds):
            raise ValueError("torsion_exponent_bound must be at least 2")
        bad = set(self.allowed_summand_kinds) - set(SUMMAND_KINDS)
        if bad or not self.allowed_summand_kinds:
            raise ValueError(f"invalid summand kinds {sorted(bad)}")


def subgroup_specs(q: int) -> list[SubgroupSpec]:
    """All subgroup specs up to the canonical aliases, conjugacy classes of reflections collapsed."""
    divs = [n for n in range(2, q + 1) if q % n == 0]
    return [TRIVIAL, SIGMA, FULL] + [SubgroupSpec.rotation(n) for n in divs]


def orbit_quotient(M: DModule, v: Sequence[int]) -> DModule:
    """M modulo the D-submodule generated by v."""
    orbit = [M.action_of(g).apply(v) for g in M.group.elements()]
    base = FinGenAb(M.ngens, M.base.relations + tuple(tuple(w) for w in orbit))
    return DModule(M.q, base, M.act_rho, M.act_sigma)


def sublattice_module(M: DModule, vectors: Sequence[Sequence[int]], m: int) -> DModule:
    """The D-stable sublattice Z[D]<vectors> + m Z^n (plus relations), as a module.

    Taking such a sublattice of a direct sum glues the summands together, which
    is how non-split lattices appear.
    """
    n = M.ngens
    gens = [M.action_of(g).apply(v) for v in vectors for g in M.group.elements()]
    gens += [tuple(m * int(i == j) for j in range(n)) for i in range(n)]
    gens += list(M.base.relations)
    lat = Lattice.span(n, gens)

    def restrict(A):
        cols = [lat.coordinates(A.apply(b)) for b in lat.basis]
        if any(c is None for c in cols):
            raise DModuleError("sublattice is not D-stable")
        return IntMatrix.from_columns(cols, lat.rank)

    rels = [lat.coordinates(r) for r in M.base.relations]
    return DModule(M.q, FinGenAb(lat.rank, rels), restrict(M.act_rho), restrict(M.act_sigma))


def _random_modulus(rng: random.Random, q: int, spec: RandomModuleSpec) -> int:
    choices = list(range(2, spec.torsion_exponent_bound + 1))
    if spec.coprime_to_q:
        choices = [n for n in choices if gcd(n, q) == 1]
    elif rng.random() < 0.4:
        # q-torsion is where the interesting cohomology lives
        choices = [n for n in choices if gcd(n, q) > 1] or choices
    return rng.choice(choices)


def _random_block(rng: random.Random, q: int, spec: RandomModuleSpec, budget: int) -> DModule | None:
    kinds = list(spec.allowed_summand_kinds)
    if spec.finite_only:
        kinds = [k for k in kinds if k.startswith("torsion") or k == "cyclic"] or ["torsion"]
    for _ in range(20):
        kind = rng.choice(kinds)
        if kind == "cyclic":
            block = _random_cyclic(rng, q, spec, budget)
            if block is None:
                continue
            return block
        if kind in ("perm", "torsion_perm", "aug", "coaug", "quotient"):
            H = rng.choice(subgroup_specs(q))
            if H.kind == "reflection":
                H = SubgroupSpec.reflection(rng.randrange(q))
            size = 2 * q // H.order(q)
            if kind == "aug":
                size -= 1
            if size > budget or size < 1:
                continue
            if kind == "perm":
                return permutation_module(q, H)
            if kind == "quotient":
                v = [rng.randint(-2, 2) for _ in range(size)]
                modulus = _random_modulus(rng, q, spec) if rng.random() < 0.5 else 0
                return orbit_quotient(permutation_module(q, H, modulus), v)
            if kind == "torsion_perm":
                return permutation_module(q, H, _random_modulus(rng, q, spec))
            if kind == "aug":
                if H.kind == "full":
                    continue
                return augmentation_module(q, H)
            if H.kind == "full":
                continue
            return coaugmentation_module(q, H)
        if kind == "trivial":
            return trivial_module(q)
        if kind == "sign":
            return sign_module(q)
        if kind == "torsion":
            return trivial_module(q, _random_modulus(rng, q, spec))
        if kind == "torsion_sign":
            return sign_module(q, _random_modulus(rng, q, spec))
    return None


def _random_cyclic(rng: random.Random, q: int, spec: RandomModuleSpec, budget: int) -> DModule | None:
    divisors = [d for d in range(1, q + 1) if q % d == 0]
    factors, degree = [], 0
    for _ in range(rng.randint(1, 3)):
        d = rng.choice(divisors)
        deg = len(cyclotomic(d)) - 1
        if degree + deg <= budget:
            factors.append((d, 1))
            degree += deg
    if not factors:
        return None
    modulus = _random_modulus(rng, q, spec) if spec.finite_only or rng.random() < 0.5 else 0
    return cyclic_ring_module(q, factors, modulus, rng.choice((1, -1)))


def random_unimodular(rng: random.Random, n: int, depth: int) -> tuple[IntMatrix, IntMatrix]:
    """A random unimodular P together with its inverse, from elementary operations."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Pinv = [row[:] for row in P]
    if n < 2:
        if n == 1 and depth and rng.random() < 0.5:
            P, Pinv = [[-1]], [[-1]]
        return IntMatrix(P, n), IntMatrix(Pinv, n)
    for _ in range(depth):
        i, j = rng.sample(range(n), 2)
        f = rng.choice((-2, -1, 1, 2))
        # P <- P E with E = I + f e_ij (column j += f column i); inverse side mirrors
        for row in P:
            row[j] += f * row[i]
        Pinv[i] = [a - f * b for a, b in zip(Pinv[i], Pinv[j])]
    return IntMatrix(P, n), IntMatrix(Pinv, n)


def random_dmodule(q: int, spec: RandomModuleSpec | None, seed) -> DModule:
    """Deterministic random D-module built from standard blocks, then conjugated."""
    spec = spec or RandomModuleSpec()
    DihedralGroup(q)
    rng = random.Random(f"dmodule:{q}:{seed}")
    blocks: list[DModule] = []
    budget = spec.max_rank
    for _ in range(spec.num_summands):
        if budget <= 0:
            break
        b = _random_block(rng, q, spec, budget)
        if b is None:
            continue
        blocks.append(b)
        budget -= b.ngens
    if not blocks:
        blocks.append(trivial_module(q, _random_modulus(rng, q, spec)) if spec.finite_only else trivial_module(q))
    M = direct_sum(blocks) if len(blocks) > 1 else blocks[0]
    P, Pinv = random_unimodular(rng, M.ngens, spec.conjugation_depth)
    M = M.conjugate(P, Pinv)
    M.verify()
    return M


def sum_over_reflections(M: DModule) -> Subgroup:
    """``sum of B^S`` over all subgroups S of order 2."""
    return subgroup_sum_all([M.invariants(SubgroupSpec.reflection(i)) for i in range(M.q)]).reduced()


__all__ = [
    "cyclic_ring_module",
    "cyclotomic",
    "orbit_quotient",
    "sublattice_module",
    "DihedralGroup",
    "SubgroupSpec",
    "DModule",
    "DModuleError",
    "RandomModuleSpec",
    "SUMMAND_KINDS",
    "rotations",
    "SIGMA",
    "SIGMA_PRIME",
    "FULL",
    "TRIVIAL",
    "direct_sum",
    "permutation_module",
    "regular_module",
    "trivial_module",
    "sign_module",
    "augmentation_module",
    "coaugmentation_module",
    "submodule_on_basis",
    "random_dmodule",
    "random_unimodular",
    "subgroup_specs",
    "sum_over_reflections",
    "cosets",
]
