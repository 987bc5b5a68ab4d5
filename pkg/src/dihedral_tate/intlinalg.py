"""Exact integer linear algebra and finitely generated abelian groups.

A finitely generated abelian group is presented as ``B = Z^n / R`` where the
relation lattice ``R`` is spanned by the relation vectors (the columns of the
relation matrix).  Every subgroup ``S`` of ``B`` is handled through its full
preimage lattice ``R <= L_S <= Z^n``, kept in Hermite normal form, so sums,
intersections, kernels and indices all reduce to lattice operations in
``Z^n``.

Matrices acting on elements use the column convention: an endomorphism with
matrix ``A`` sends the coefficient vector ``v`` to ``A v``.
"""

from __future__ import annotations

from functools import reduce
from math import gcd, prod
from typing import Iterable, Sequence


class _Infinite:
    """Marker for an infinite index or order."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    __str__ = lambda self: "inf"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


class IntMatrix:
    """Immutable integer matrix stored row-major."""

    __slots__ = ("rows", "_shape")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        self.rows = data
        self._shape = (len(data), ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> IntMatrix:
        return cls(([0] * n for _ in range(m)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        return cls(([c[i] for c in columns] for i in range(nrows)), len(columns))

    @property
    def nrows(self) -> int:
        return self._shape[0]

    @property
    def ncols(self) -> int:
        return self._shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.columns(), self.nrows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            ([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + other.scale(-1)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix(([c * a for a in r] for r in self.rows), self.ncols)

    def __pow__(self, k: int) -> IntMatrix:
        if self.nrows != self.ncols or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        result, base = IntMatrix.identity(self.nrows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("det of a non-square matrix")
        a = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self._shape == other._shape and self.rows == other.rows

    def __hash__(self):
        return hash((self._shape, self.rows))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------------------
# Row echelon machinery


def _echelon(rows: Iterable[Sequence[int]], width: int):
    """Row-reduce over Z on the first ``width`` columns.

    Returns ``(pivots, rest)``: ``pivots`` is a list of ``(col, row)`` in
    Hermite form on the leading block (positive pivots, entries above a pivot
    reduced into ``[0, pivot)``); ``rest`` holds the rows whose leading block
    vanished.  Together they span the same lattice as the input rows.
    """
    active = [list(r) for r in rows if any(r)]
    pivots: list[tuple[int, list[int]]] = []
    for c in range(width):
        nz = [r for r in active if r[c]]
        if not nz:
            continue
        zero = [r for r in active if not r[c]]
        while len(nz) > 1:
            p = min(nz, key=lambda r: abs(r[c]))
            pc = p[c]
            survivors = [p]
            for r in nz:
                if r is p:
                    continue
                f = r[c] // pc
                r = [a - f * b for a, b in zip(r, p)]
                if r[c]:
                    survivors.append(r)
                elif any(r):
                    zero.append(r)
            nz = survivors
        p = nz[0]
        if p[c] < 0:
            p = [-a for a in p]
        pivots.append((c, p))
        active = zero
    for k in range(1, len(pivots)):
        c, p = pivots[k]
        pc = p[c]
        for j in range(k):
            cj, pj = pivots[j]
            f = pj[c] // pc
            if f:
                pivots[j] = (cj, [a - f * b for a, b in zip(pj, p)])
    return pivots, active


class Lattice:
    """A sublattice of ``Z^n`` held by its Hermite basis (rows)."""

    __slots__ = ("n", "basis", "pivots")

    def __init__(self, n: int, basis: Sequence[Sequence[int]], pivots: Sequence[int]):
        self.n = n
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, n: int, vectors: Iterable[Sequence[int]]) -> Lattice:
        pivots, _ = _echelon(vectors, n)
        return cls(n, [r for _, r in pivots], [c for c, _ in pivots])

    @classmethod
    def zero(cls, n: int) -> Lattice:
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> Lattice:
        return cls(n, IntMatrix.identity(n).rows, range(n))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of ``v`` in the basis, or None when ``v`` is not in the lattice."""
        v = list(v)
        coords = []
        for c, row in zip(self.pivots, self.basis):
            if any(v[j] for j in range(c)):
                return None
            if v[c] % row[c]:
                return None
            f = v[c] // row[c]
            coords.append(f)
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        if any(v):
            return None
        return coords

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: Lattice) -> bool:
        return all(self.coordinates(b) is not None for b in other.basis)

    def __add__(self, other: Lattice) -> Lattice:
        return Lattice.span(self.n, self.basis + other.basis)

    def intersect(self, other: Lattice) -> Lattice:
        """Zassenhaus intersection."""
        n = self.n
        zeros = (0,) * n
        rows = [b + b for b in self.basis] + [b + zeros for b in other.basis]
        _, rest = _echelon(rows, n)
        return Lattice.span(n, (r[n:] for r in rest))

    def index(self):
        """``[Z^n : L]``, or INFINITE when the lattice is not of full rank."""
        if self.rank < self.n:
            return INFINITE
        return prod(r[c] for c, r in zip(self.pivots, self.basis))

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        return f"Lattice(n={self.n}, basis={[list(b) for b in self.basis]})"


def preimage(domain: Lattice, row_map: Sequence[Sequence[int]], target: Lattice) -> Lattice:
    """``{x in domain : x @ row_map in target}`` for a row-convention map."""
    m = target.n
    zeros = (0,) * domain.n
    rows = []
    for b in domain.basis:
        img = [0] * m
        for coeff, map_row in zip(b, row_map):
            if coeff:
                img = [a + coeff * r for a, r in zip(img, map_row)]
        rows.append(img + list(b))
    rows.extend(list(t) + list(zeros) for t in target.basis)
    _, rest = _echelon(rows, m)
    return Lattice.span(domain.n, (r[m:] for r in rest))


def integer_kernel(A: IntMatrix) -> list[tuple[int, ...]]:
    """A basis of ``{x in Z^n : A x = 0}`` (Hermite reduced)."""
    n = A.ncols
    row_map = A.transpose().rows
    lat = preimage(Lattice.full(n), row_map, Lattice.zero(A.nrows))
    return list(lat.basis)


def solve(A: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution of ``A x = b`` or None if there is none."""
    m, n = A.shape
    cols = A.columns()
    # rows [col_j | e_j]; reduce b against the echelon of the column lattice
    rows = [list(c) + [int(i == j) for i in range(n)] for j, c in enumerate(cols)]
    pivots, _ = _echelon(rows, m)
    v = list(b) + [0] * n
    for c, row in pivots:
        if any(v[j] for j in range(c)):
            return None
        if v[c] % row[c]:
            return None
        f = v[c] // row[c]
        if f:
            v = [a - f * r for a, r in zip(v, row)]
    if any(v[:m]):
        return None
    return tuple(-x for x in v[m:])


# ---------------------------------------------------------------------------
# Smith normal form


class SmithForm:
    """``left @ A @ right`` is diagonal with ``divisors`` on the diagonal."""

    __slots__ = ("left", "right", "divisors")

    def __init__(self, left: IntMatrix, right: IntMatrix, divisors: Sequence[int]):
        self.left = left
        self.right = right
        self.divisors = tuple(divisors)

    def diagonal(self, shape: tuple[int, int]) -> IntMatrix:
        m, n = shape
        return IntMatrix(
            ([self.divisors[i] if i == j and i < len(self.divisors) else 0 for j in range(n)] for i in range(m)),
            n,
        )

    def __repr__(self):
        return f"SmithForm(divisors={list(self.divisors)})"


def _snf_core(a: list[list[int]], m: int, n: int, track: bool):
    """In-place Smith reduction; returns (divisors, U, V) with U a V = diag."""
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if track:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row dst -= f * row src
        a[dst] = [x - f * y for x, y in zip(a[dst], a[src])]
        if track:
            U[dst] = [x - f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col dst -= f * col src
        for r in a:
            r[dst] -= f * r[src]
        if track:
            for r in V:
                r[dst] -= f * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/column t to the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if track:
                U[t] = [-x for x in U[t]]
        t += 1
    divisors = [a[i][i] for i in range(min(m, n))]
    return divisors, U, V


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """Smith form with unimodular transforms, ``left @ A @ right = diag``."""
    m, n = A.shape
    a = [list(r) for r in A.rows]
    divisors, U, V = _snf_core(a, m, n, track=True)
    return SmithForm(IntMatrix(U, m), IntMatrix(V, n), divisors)


def elementary_divisors(vectors: Sequence[Sequence[int]], n: int) -> list[int]:
    """Smith divisors of the ``n x k`` matrix with the given columns (zeros trail)."""
    pivots, _ = _echelon(vectors, n)
    rows = [r for _, r in pivots]
    k = len(rows)
    if k == 0:
        return [0] * min(n, len(vectors))
    divisors, _, _ = _snf_core([list(r) for r in rows], k, n, track=False)
    return divisors + [0] * (min(n, len(vectors)) - k)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


def _as_vectors(relations, ngens: int) -> tuple[tuple[int, ...], ...]:
    if isinstance(relations, IntMatrix):
        if relations.ncols and relations.nrows != ngens:
            raise ValueError("relation matrix must have ngens rows")
        return tuple(relations.columns())
    vecs = tuple(tuple(int(x) for x in r) for r in relations)
    if any(len(r) != ngens for r in vecs):
        raise ValueError("relation vectors must have length ngens")
    return vecs


class FinGenAb:
    """``Z^ngens`` modulo the span of the relation vectors."""

    __slots__ = ("ngens", "relations", "_lattice", "_structure")

    def __init__(self, ngens: int, relations=()):
        self.ngens = int(ngens)
        self.relations = _as_vectors(relations, self.ngens)
        self._lattice = None
        self._structure = None

    @classmethod
    def free(cls, n: int) -> FinGenAb:
        return cls(n, ())

    @classmethod
    def from_divisors(cls, divisors: Sequence[int], rank: int = 0) -> FinGenAb:
        n = len(divisors) + rank
        rels = [[d if i == j else 0 for i in range(n)] for j, d in enumerate(divisors)]
        return cls(n, rels)

    @property
    def relation_matrix(self) -> IntMatrix:
        if self.relations:
            return IntMatrix.from_columns(self.relations, self.ngens)
        return IntMatrix(([] for _ in range(self.ngens)), 0)

    @property
    def lattice(self) -> Lattice:
        if self._lattice is None:
            self._lattice = Lattice.span(self.ngens, self.relations)
        return self._lattice

    def structure(self) -> tuple[int, tuple[int, ...]]:
        """``(rank, divisors)`` with divisors > 1, each dividing the next."""
        if self._structure is None:
            d = elementary_divisors(self.lattice.basis, self.ngens)
            nonzero = [x for x in d if x]
            rank = self.ngens - len(nonzero)
            self._structure = (rank, tuple(x for x in nonzero if x > 1))
        return self._structure

    @property
    def rank(self) -> int:
        return self.structure()[0]

    @property
    def divisors(self) -> tuple[int, ...]:
        return self.structure()[1]

    def order(self):
        return self.lattice.index()

    def is_finite(self) -> bool:
        return self.lattice.rank == self.ngens

    def is_zero(self, v: Sequence[int]) -> bool:
        return v in self.lattice

    def equal(self, v, w) -> bool:
        return self.is_zero([a - b for a, b in zip(v, w)])

    def whole(self) -> Subgroup:
        return Subgroup(self, IntMatrix.identity(self.ngens).rows)

    def trivial(self) -> Subgroup:
        return Subgroup(self, ())

    def subgroup(self, generators) -> Subgroup:
        return Subgroup(self, generators)

    def preserves(self, A: IntMatrix) -> bool:
        """Whether the matrix maps the relation lattice into itself."""
        return all(A.apply(r) in self.lattice for r in self.relations)

    def __eq__(self, other):
        return isinstance(other, FinGenAb) and self.ngens == other.ngens and self.lattice == other.lattice

    def __hash__(self):
        return hash((self.ngens, self.lattice))

    def __repr__(self):
        rank, divisors = self.structure()
        return f"FinGenAb(rank={rank}, divisors={list(divisors)})"


def structure(B: FinGenAb) -> tuple[int, tuple[int, ...]]:
    return B.structure()


class Subgroup:
    """Subgroup of a FinGenAb generated by element vectors."""

    __slots__ = ("ambient", "generators", "_lattice")

    def __init__(self, ambient: FinGenAb, generators, lattice: Lattice | None = None):
        n = ambient.ngens
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        if any(len(g) != n for g in gens):
            raise ValueError("generator length must equal ambient ngens")
        self.ambient = ambient
        self.generators = gens
        self._lattice = lattice

    @classmethod
    def from_lattice(cls, ambient: FinGenAb, lattice: Lattice) -> Subgroup:
        """Subgroup whose preimage lattice is ``lattice`` (must contain the relations)."""
        return cls(ambient, lattice.basis, lattice)

    @property
    def lattice(self) -> Lattice:
        """Full preimage of the subgroup in ``Z^ngens``."""
        if self._lattice is None:
            self._lattice = Lattice.span(self.ambient.ngens, self.generators + self.ambient.lattice.basis)
        return self._lattice

    def reduced(self) -> Subgroup:
        """Same subgroup, generated by its Hermite lattice basis."""
        return Subgroup.from_lattice(self.ambient, self.lattice)

    def contains(self, v: Sequence[int]) -> bool:
        return v in self.lattice

    __contains__ = contains

    def issubset(self, other: Subgroup) -> bool:
        _check_same(self, other)
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: Subgroup) -> bool:
        """Equality by mutual membership of generators."""
        return self.issubset(other) and other.issubset(self)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.ambient == other.ambient and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def is_trivial(self) -> bool:
        return self.lattice == self.ambient.lattice

    @property
    def rank(self) -> int:
        return self.lattice.rank - self.ambient.lattice.rank

    def order(self):
        """Order of the subgroup itself."""
        return subquotient(self, self.ambient.trivial()).order()

    def as_group(self) -> FinGenAb:
        return subquotient(self, self.ambient.trivial())

    def image(self, A: IntMatrix, target: FinGenAb | None = None) -> Subgroup:
        return Subgroup(target or self.ambient, (A.apply(g) for g in self.generators))

    def scaled(self, m: int) -> Subgroup:
        return Subgroup(self.ambient, (tuple(m * x for x in g) for g in self.generators))

    def __repr__(self):
        return f"Subgroup(ngens={self.ambient.ngens}, generators={[list(g) for g in self.generators]})"


def _check_same(S: Subgroup, T: Subgroup):
    if S.ambient is not T.ambient and S.ambient != T.ambient:
        raise ValueError("subgroups live in different ambient groups")


def subgroup_sum(S: Subgroup, T: Subgroup) -> Subgroup:
    _check_same(S, T)
    return Subgroup(S.ambient, S.generators + T.generators, S.lattice + T.lattice)


def subgroup_sum_all(subgroups: Sequence[Subgroup]) -> Subgroup:
    return reduce(subgroup_sum, subgroups)


def subgroup_intersection(S: Subgroup, T: Subgroup) -> Subgroup:
    _check_same(S, T)
    return Subgroup.from_lattice(S.ambient, S.lattice.intersect(T.lattice))


def index(S: Subgroup, T: Subgroup | None = None):
    """``[T : S]`` (``T`` defaults to the ambient group); INFINITE on rank drop."""
    if T is None:
        return S.lattice.index()
    _check_same(S, T)
    return subquotient(T, S).order()


def quotient(B: FinGenAb, S: Subgroup) -> FinGenAb:
    if S.ambient is not B and S.ambient != B:
        raise ValueError("subgroup does not belong to this group")
    return FinGenAb(B.ngens, B.relations + S.generators)


def kernel(A: IntMatrix, source: FinGenAb, target: FinGenAb, domain: Subgroup | None = None) -> Subgroup:
    """Kernel of the homomorphism ``v -> A v`` from ``source`` (or a subgroup) to ``target``."""
    dom = domain.lattice if domain is not None else Lattice.full(source.ngens)
    lat = preimage(dom, A.transpose().rows, target.lattice)
    return Subgroup.from_lattice(source, lat + source.lattice)


def kernel_stacked(maps: Sequence[IntMatrix], B: FinGenAb, domain: Subgroup | None = None) -> Subgroup:
    """Common kernel of several endomorphisms of ``B``."""
    n = B.ngens
    k = len(maps)
    if k == 0:
        return domain if domain is not None else B.whole()
    # row i of the stacked row-convention map: image of e_i in B^k
    row_map = [[x for A in maps for x in (A.rows[j][i] for j in range(n))] for i in range(n)]
    rel = B.lattice.basis
    target_basis = []
    for blk in range(k):
        for r in rel:
            v = [0] * (n * k)
            v[blk * n:(blk + 1) * n] = r
            target_basis.append(v)
    target = Lattice.span(n * k, target_basis)
    dom = domain.lattice if domain is not None else Lattice.full(n)
    lat = preimage(dom, row_map, target)
    return Subgroup.from_lattice(B, lat + B.lattice)


def torsion_subgroup(B: FinGenAb, m: int | None = None) -> Subgroup:
    """``B[m]`` (or the full torsion subgroup when ``m`` is None)."""
    n = B.ngens
    if m is None:
        # full torsion: saturation of the relation lattice
        _, divisors = B.structure()
        m = divisors[-1] if divisors else 1
    return kernel(IntMatrix.identity(n).scale(m), B, B)


class Subquotient(FinGenAb):
    """``X / Y`` presented on the Hermite basis of the lattice of ``X``."""

    __slots__ = ("numerator", "denominator", "basis")

    def __init__(self, X: Subgroup, Y: Subgroup):
        _check_same(X, Y)
        LX, LY = X.lattice, Y.lattice
        rels = []
        for y in LY.basis:
            c = LX.coordinates(y)
            if c is None:
                raise ValueError("denominator is not contained in numerator")
            rels.append(c)
        super().__init__(LX.rank, rels)
        self.numerator = X
        self.denominator = Y
        self.basis = LX

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        c = self.basis.coordinates(v)
        if c is None:
            raise ValueError("element does not lie in the numerator")
        return tuple(c)

    def lift(self, w: Sequence[int]) -> tuple[int, ...]:
        n = self.basis.n
        out = [0] * n
        for c, b in zip(w, self.basis.basis):
            if c:
                out = [x + c * y for x, y in zip(out, b)]
        return tuple(out)

    def induced(self, A: IntMatrix) -> IntMatrix:
        """Matrix of the endomorphism induced by ``A`` (which must preserve X and Y)."""
        cols = []
        for b in self.basis.basis:
            c = self.basis.coordinates(A.apply(b))
            if c is None:
                raise ValueError("endomorphism does not preserve the numerator")
            cols.append(c)
        for y in self.denominator.lattice.basis:
            if A.apply(y) not in self.denominator.lattice:
                raise ValueError("endomorphism does not preserve the denominator")
        k = self.ngens
        return IntMatrix.from_columns(cols, k) if k else IntMatrix((), 0)

    def subgroup_from(self, S: Subgroup) -> Subgroup:
        """Image in X/Y of a subgroup S with Y <= S <= X (or S <= X)."""
        return Subgroup(self, (self.coordinates(b) for b in S.lattice.basis))


def subquotient(X: Subgroup, Y: Subgroup) -> Subquotient:
    return Subquotient(X, Y)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_factors(n: int) -> list[int]:
    n, out, p = abs(n), [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


__all__ = [
    "INFINITE",
    "IntMatrix",
    "Lattice",
    "SmithForm",
    "FinGenAb",
    "Subgroup",
    "Subquotient",
    "smith_normal_form",
    "elementary_divisors",
    "integer_kernel",
    "solve",
    "preimage",
    "structure",
    "subgroup_sum",
    "subgroup_sum_all",
    "subgroup_intersection",
    "index",
    "quotient",
    "kernel",
    "kernel_stacked",
    "torsion_subgroup",
    "subquotient",
    "valuation",
    "prime_factors",
    "gcd",
]
