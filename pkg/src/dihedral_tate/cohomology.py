"""Tate cohomology of subgroups of D, the involution on G-cohomology, Herbrand quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .dmodule import FULL, SIGMA, DModule, SubgroupSpec, rotations
from .intlinalg import (
    IntMatrix,
    Subgroup,
    Subquotient,
    kernel,
    prime_factors,
    subquotient,
    valuation,
)


class CohomologyError(ValueError):
    """Raised on contract violations (non-cyclic subgroup, split of an even-order group)."""


class ConsistencyError(AssertionError):
    """Two independent computations of the same group disagree."""


@dataclass(frozen=True)
class FiniteAbGroup:
    """Finite abelian group in invariant factor form: divisors > 1, each dividing the next."""

    divisors: tuple[int, ...] = ()

    def __post_init__(self):
        ds = tuple(int(d) for d in self.divisors)
        if any(d <= 1 for d in ds):
            raise ValueError(f"divisors must exceed 1: {ds}")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise ValueError(f"divisors must form a divisibility chain: {ds}")
        object.__setattr__(self, "divisors", ds)

    @classmethod
    def from_cyclic_orders(cls, orders) -> FiniteAbGroup:
        """Canonical form of a direct sum of cyclic groups of the given orders."""
        powers: dict[int, list[int]] = {}
        for n in orders:
            n = int(n)
            if n == 0:
                raise ValueError("infinite cyclic factor in a finite group")
            for p in prime_factors(n):
                powers.setdefault(p, []).append(p ** valuation(n, p))
        if not powers:
            return cls(())
        length = max(len(v) for v in powers.values())
        divs = [1] * length
        for p, ps in powers.items():
            ps.sort()
            for k, pp in enumerate(ps):
                divs[length - len(ps) + k] *= pp
        return cls(tuple(d for d in divs if d > 1))

    @classmethod
    def of(cls, B) -> FiniteAbGroup:
        """From a FinGenAb, which must be finite."""
        rank, divisors = B.structure()
        if rank:
            raise CohomologyError("group is infinite")
        return cls(divisors)

    def order(self) -> int:
        return prod(self.divisors)

    def is_trivial(self) -> bool:
        return not self.divisors

    def exponent(self) -> int:
        return self.divisors[-1] if self.divisors else 1

    def odd_part(self) -> FiniteAbGroup:
        return odd_part(self)

    def two_part(self) -> FiniteAbGroup:
        return FiniteAbGroup.from_cyclic_orders(_two(d) for d in self.divisors)

    def p_part(self, p: int) -> FiniteAbGroup:
        return FiniteAbGroup.from_cyclic_orders(p ** valuation(d, p) for d in self.divisors)

    def __add__(self, other: FiniteAbGroup) -> FiniteAbGroup:
        return FiniteAbGroup.from_cyclic_orders(self.divisors + other.divisors)

    def __str__(self):
        if not self.divisors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.divisors)


def _two(n: int) -> int:
    return 1 << valuation(n, 2)


def odd_part(Gp: FiniteAbGroup) -> FiniteAbGroup:
    return FiniteAbGroup(tuple(d for d in (x >> valuation(x, 2) for x in Gp.divisors) if d > 1))


@dataclass(frozen=True)
class TateGroup:
    """A Tate cohomology group together with how it was computed.

    ``presentation`` is the subquotient the group was read off from (absent for
    assembled dihedral groups in degrees with no direct formula), and
    ``involution`` the matrix induced by sigma on it when the subgroup is a
    rotation subgroup.
    """

    group: FiniteAbGroup
    degree: int
    subgroup: SubgroupSpec
    presentation: Subquotient | None = field(default=None, compare=False, repr=False)
    involution: IntMatrix | None = field(default=None, compare=False, repr=False)

    @property
    def divisors(self) -> tuple[int, ...]:
        return self.group.divisors

    def order(self) -> int:
        return self.group.order()


def _cyclic_pieces(M: DModule, H: SubgroupSpec, i: int) -> tuple[Subgroup, Subgroup]:
    if i % 2 == 0:
        return M.invariants(H), M.norm_image(H)
    return M.norm_kernel(H), M.augmentation_submodule(H)


def tate_cyclic(M: DModule, H: SubgroupSpec, i: int) -> TateGroup:
    """``H^i(H, B)`` for cyclic H, via degree 0 or -1 by periodicity."""
    if not H.is_cyclic():
        raise CohomologyError(f"{H.label()} is not cyclic")
    H = H.canonical(M.q)
    key = ("tate", H, i % 2)
    cache = M.__dict__.setdefault("_subcache", {})
    if key in cache:
        base = cache[key]
        return TateGroup(base.group, i, H, base.presentation, base.involution)
    X, Y = _cyclic_pieces(M, H, i)
    T = subquotient(X, Y)
    involution = T.induced(M.act_sigma) if H.kind == "rotation" else None
    out = TateGroup(FiniteAbGroup.of(T), i, H, T, involution)
    cache[key] = out
    return out


def _split_subgroups(T: Subquotient, iota: IntMatrix) -> tuple[Subgroup, Subgroup, Subgroup]:
    """Odd part of T and its +1 / -1 eigenspaces under iota."""
    e2 = _two(FiniteAbGroup.of(T).exponent())
    odd = T.whole().scaled(e2).reduced()
    n = T.ngens
    one = IntMatrix.identity(n)
    plus = kernel(iota - one, T, T, domain=odd)
    minus = kernel(iota + one, T, T, domain=odd)
    return odd, plus, minus


def split_odd_order(T: Subquotient, iota: IntMatrix) -> tuple[FiniteAbGroup, FiniteAbGroup]:
    """Plus and minus parts of a finite group of odd order under an involution."""
    if FiniteAbGroup.of(T).order() % 2 == 0:
        raise CohomologyError("the +/- split is only defined on groups of odd order")
    _, plus, minus = _split_subgroups(T, iota)
    return FiniteAbGroup.of(plus.as_group()), FiniteAbGroup.of(minus.as_group())


def odd_split(T: TateGroup) -> tuple[FiniteAbGroup, FiniteAbGroup]:
    """Plus and minus parts of the odd part of a rotation-subgroup Tate group."""
    if T.involution is None or T.presentation is None:
        raise CohomologyError("no involution on this group")
    _, plus, minus = _split_subgroups(T.presentation, T.involution)
    return FiniteAbGroup.of(plus.as_group()), FiniteAbGroup.of(minus.as_group())


def delta_split_subgroups(M: DModule, i: int) -> tuple[Subquotient, Subgroup, Subgroup, Subgroup]:
    """``(H^i(G,B), odd part, plus part, minus part)`` as subgroups of the presentation."""
    t = tate_cyclic(M, rotations(M.q), i)
    odd, plus, minus = _split_subgroups(t.presentation, t.involution)
    return t.presentation, odd, plus, minus


def delta_split(M: DModule, i: int) -> tuple[FiniteAbGroup, FiniteAbGroup]:
    """Plus and minus parts of the odd part of ``H^i(G, B)``."""
    key = ("split", i % 2)
    cache = M.__dict__.setdefault("_subcache", {})
    if key not in cache:
        T, odd, plus, minus = delta_split_subgroups(M, i)
        p = FiniteAbGroup.of(plus.as_group())
        m = FiniteAbGroup.of(minus.as_group())
        if p.order() * m.order() != FiniteAbGroup.of(odd.as_group()).order():
            raise ConsistencyError("plus and minus parts do not exhaust the odd part")
        cache[key] = (p, m)
    return cache[key]


def tate_dihedral_direct(M: DModule, i: int) -> TateGroup:
    """``B^D / N_D B`` (even i) or ``B[N_D] / I_D B`` (odd i), valid for i in {-1, 0}."""
    X, Y = _cyclic_pieces(M, FULL, i)
    T = subquotient(X, Y)
    return TateGroup(FiniteAbGroup.of(T), i, FULL, T)


def tate_dihedral(M: DModule, i: int, check: bool = True) -> TateGroup:
    """``H^i(D, B)``: odd part from the G-cohomology eigenspaces, 2-part from Sigma.

    With ``check`` the degrees congruent to -1 and 0 mod 4 are also computed
    directly and must agree exactly.
    """
    r = i % 4
    plus, minus = delta_split(M, 0 if r in (0, 2) else 1)
    odd = plus if r in (0, 3) else minus
    two = tate_cyclic(M, SIGMA, i).group.two_part()
    group = odd + two
    presentation = None
    if r in (0, 3):
        key = ("tateD", r)
        cache = M.__dict__.setdefault("_subcache", {})
        if key not in cache:
            cache[key] = tate_dihedral_direct(M, 0 if r == 0 else -1) if check else None
        direct = cache[key]
        if direct is not None:
            if direct.group != group:
                raise ConsistencyError(
                    f"degree {i}: assembled {group.divisors} but direct {direct.group.divisors}"
                )
            presentation = direct.presentation
    return TateGroup(group, i, FULL, presentation)


def tate(M: DModule, H: SubgroupSpec, i: int) -> TateGroup:
    if H.canonical(M.q).kind == "full":
        return tate_dihedral(M, i)
    return tate_cyclic(M, H, i)


def herbrand_quotient(M: DModule, H: SubgroupSpec) -> Fraction:
    """``h^0(H,B) / h^1(H,B)``, with h^1 realized as the order of H^-1."""
    if not H.is_cyclic():
        raise CohomologyError(f"{H.label()} is not cyclic")
    return Fraction(tate_cyclic(M, H, 0).order(), tate_cyclic(M, H, -1).order())


# ---------------------------------------------------------------------------
# An independent route to H^i(D, B) for i in {-3, -2, 1, 2}.
#
# The presentation <rho, sigma | rho^q, sigma^2, (sigma rho)^2> gives the start
# C_2 -> C_1 -> C_0 of a free Z[D]-resolution via Fox derivatives; C_3 maps onto
# the second syzygies.  Cohomology comes from Hom_D(C, B) = B^rank and homology
# (Tate degrees -2, -3) from C (x)_D B, where group ring elements act through
# the antipode g -> g^-1.

RingElement = dict


def _ring_mul(q: int, a: RingElement, b: RingElement) -> RingElement:
    out: RingElement = {}
    for (i, e), c in a.items():
        for (j, f), d in b.items():
            g = ((i + (-j if e else j)) % q, (e + f) % 2)
            out[g] = out.get(g, 0) + c * d
    return {g: c for g, c in out.items() if c}


def _antipode(q: int, a: RingElement) -> RingElement:
    return {((i, 1) if e else ((-i) % q, 0)): c for (i, e), c in a.items()}


def fox_derivatives(q: int) -> list[list[RingElement]]:
    """``[r][x]``: derivative of relator r (rho^q, sigma^2, (sigma rho)^2) in generator x (rho, sigma)."""
    one, sigma = (0, 0), (0, 1)
    norm = {(k, 0): 1 for k in range(q)}
    sr, srs = ((q - 1) % q, 1), ((q - 1) % q, 0)  # sigma rho and sigma rho sigma = rho^-1
    return [
        [norm, {}],
        [{}, {one: 1, sigma: 1}],
        [{sigma: 1, srs: 1}, {one: 1, sr: 1}],
    ]


_SYZYGY_CACHE: dict[int, list[list[RingElement]]] = {}


def second_syzygies(q: int) -> list[list[RingElement]]:
    """Z[D]-generators of the kernel of ``C_2 -> C_1``, chosen greedily from a Z-basis."""
    if q in _SYZYGY_CACHE:
        return _SYZYGY_CACHE[q]
    from .dmodule import DihedralGroup
    from .intlinalg import Lattice, integer_kernel

    els = DihedralGroup(q).elements()
    pos = {g: k for k, g in enumerate(els)}
    m = len(els)
    fox = fox_derivatives(q)
    cols = []
    for r in range(3):
        for g in els:
            v = [0] * (2 * m)
            for x in range(2):
                for h, c in _ring_mul(q, {g: 1}, fox[r][x]).items():
                    v[x * m + pos[h]] += c
            cols.append(v)
    basis = integer_kernel(IntMatrix.from_columns(cols, 2 * m))
    full = Lattice.span(3 * m, basis)

    def as_triple(v):
        return [{els[k]: v[r * m + k] for k in range(m) if v[r * m + k]} for r in range(3)]

    def orbit(v):
        t = as_triple(v)
        for g in els:
            w = [0] * (3 * m)
            for r in range(3):
                for h, c in _ring_mul(q, {g: 1}, t[r]).items():
                    w[r * m + pos[h]] += c
            yield w

    chosen, span = [], Lattice.zero(3 * m)
    for v in basis:
        if span == full:
            break
        if v in span:
            continue
        chosen.append(as_triple(v))
        span = Lattice.span(3 * m, list(span.basis) + list(orbit(v)))
    if span != full:
        raise ConsistencyError("syzygy orbits do not span the kernel")
    _SYZYGY_CACHE[q] = chosen
    return chosen


def _power_group(B, k: int):
    from .intlinalg import FinGenAb

    n = B.ngens
    rels = []
    for blk in range(k):
        for r in B.relations:
            v = [0] * (n * k)
            v[blk * n:(blk + 1) * n] = r
            rels.append(v)
    return FinGenAb(n * k, rels)


def _block_matrix(M: DModule, blocks: list[list[RingElement]]) -> IntMatrix:
    """Map ``B^cols -> B^rows`` whose (row, col) block is the action of a ring element."""
    n = M.ngens
    rows = [[0] * (n * len(blocks[0])) for _ in range(n * len(blocks))]
    for bi, brow in enumerate(blocks):
        for bj, a in enumerate(brow):
            if not a:
                continue
            A = M.group_ring_action(a)
            for i in range(n):
                rows[bi * n + i][bj * n:(bj + 1) * n] = A.rows[i]
    return IntMatrix(rows, n * len(blocks[0]))


def _homology_at(M: DModule, d_in: IntMatrix, d_out: IntMatrix, k_in: int, k_mid: int, k_out: int) -> FiniteAbGroup:
    mid = _power_group(M.base, k_mid)
    out = _power_group(M.base, k_out)
    Z = kernel(d_out, mid, out)
    src = _power_group(M.base, k_in)
    Bnd = Subgroup(mid, src.whole().image(d_in, mid).generators)
    return FiniteAbGroup.of(subquotient(Z, Bnd))


def presentation_tate(M: DModule, i: int) -> FiniteAbGroup:
    """``H^i(D, B)`` for i in {-3, -2, 1, 2}, from the presentation complex."""
    if i not in (-3, -2, 1, 2):
        raise ValueError("presentation route covers degrees -3, -2, 1, 2")
    key = ("pres", i)
    cache = M.__dict__.setdefault("_subcache", {})
    if key in cache:
        return cache[key]
    q = M.q
    fox = fox_derivatives(q)
    d1 = [[{(1, 0): 1, (0, 0): -1}, {(0, 1): 1, (0, 0): -1}]]  # C_1 -> C_0: e_x -> (x - 1)
    if i > 0:
        # cochains: delta^0: B -> B^2, delta^1: B^2 -> B^3, delta^2: B^3 -> B^s
        c0 = _block_matrix(M, [[d1[0][x]] for x in range(2)])
        c1 = _block_matrix(M, fox)
        if i == 1:
            res = _homology_at(M, c0, c1, 1, 2, 3)
        else:
            syz = second_syzygies(q)
            c2 = _block_matrix(M, syz)
            res = _homology_at(M, c1, c2, 2, 3, len(syz))
    else:
        # chains with the antipode: boundary e_r (x) b -> sum_x e_x (x) bar(d r / d x) b
        bar = lambda a: _antipode(q, a)
        h1 = _block_matrix(M, [[bar(d1[0][x]) for x in range(2)]])
        h2 = _block_matrix(M, [[bar(fox[r][x]) for r in range(3)] for x in range(2)])
        if i == -2:
            res = _homology_at(M, h2, h1, 3, 2, 1)
        else:
            syz = second_syzygies(q)
            h3 = _block_matrix(M, [[bar(k[r]) for k in syz] for r in range(3)])
            res = _homology_at(M, h3, h2, len(syz), 3, 2)
    cache[key] = res
    return res


__all__ = [
    "odd_split",
    "CohomologyError",
    "ConsistencyError",
    "FiniteAbGroup",
    "TateGroup",
    "tate_cyclic",
    "tate_dihedral",
    "tate_dihedral_direct",
    "tate",
    "delta_split",
    "delta_split_subgroups",
    "split_odd_order",
    "herbrand_quotient",
    "odd_part",
    "presentation_tate",
    "second_syzygies",
    "fox_derivatives",
]
