from itertools import product

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dihedral_tate.intlinalg import (
    INFINITE,
    FinGenAb,
    IntMatrix,
    Subgroup,
    index,
    quotient,
    smith_normal_form,
    subgroup_intersection,
    subgroup_sum,
    torsion_subgroup,
)
from oracles import sympy_divisors

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


def matrices(max_rows=4, max_cols=4, bound=12):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            ).map(lambda rows: IntMatrix(rows, n))
        )
    )


def is_diagonal(A):
    return all(A.rows[i][j] == 0 for i in range(A.shape[0]) for j in range(A.shape[1]) if i != j)


# -- spec examples --------------------------------------------------------


def test_smith_identity():
    S = smith_normal_form(IntMatrix.identity(3))
    assert S.divisors == (1, 1, 1)


def test_smith_zero():
    S = smith_normal_form(IntMatrix.zeros(2, 2))
    assert S.divisors == (0, 0)


def test_smith_small():
    A = IntMatrix([[2, 4], [6, 8]], 2)
    S = smith_normal_form(A)
    assert S.divisors == (2, 4)
    assert S.left @ A @ S.right == S.diagonal(A.shape)


def test_structure_examples():
    assert FinGenAb(2, [[2, 0], [0, 3]]).structure() == (0, (6,))
    assert FinGenAb(3).structure() == (3, ())
    assert FinGenAb(2, [[4, 6]]).structure() == (1, (2,))


def test_sum_examples():
    Z2 = FinGenAb(2)
    T = Z2.subgroup([(3, 5), (1, 1)])
    assert subgroup_sum(Z2.trivial(), T).equals(T)
    assert subgroup_sum(T, T).equals(T)
    S = subgroup_sum(Z2.subgroup([(2, 0)]), Z2.subgroup([(0, 3)]))
    assert index(S) == 6


def test_intersection_examples():
    Z2 = FinGenAb(2)
    S = Z2.subgroup([(2, 0), (0, 1)])
    T = Z2.subgroup([(1, 0), (0, 3)])
    assert subgroup_intersection(S, T).equals(Z2.subgroup([(2, 0), (0, 3)]))
    assert subgroup_intersection(S, Z2.trivial()).is_trivial()
    Z4 = FinGenAb(1, [[4]])
    two = Z4.subgroup([(2,)])
    assert subgroup_intersection(two, two).equals(two)


def test_index_examples():
    assert index(FinGenAb(1).subgroup([(5,)])) == 5
    assert index(FinGenAb(2).subgroup([(1, 0)])) is INFINITE
    B = FinGenAb(2, [[6, 0]])
    assert index(B.subgroup([(2, 0), (0, 1)])) == 2


def test_quotient_examples():
    B = FinGenAb(2, [[5, 10]])
    assert quotient(B, B.trivial()).structure() == B.structure()
    assert quotient(B, B.whole()).structure() == (0, ())
    Z2 = FinGenAb(2)
    assert quotient(Z2, Z2.subgroup([(2, 0), (0, 3)])).structure() == (0, (6,))


def test_ambient_mismatch():
    with pytest.raises(ValueError):
        subgroup_sum(FinGenAb(1).whole(), FinGenAb(2).whole())


# -- properties -------------------------------------------------------------


@given(matrices())
def test_smith_reconstructs(A):
    S = smith_normal_form(A)
    D = S.left @ A @ S.right
    assert is_diagonal(D)
    assert D == S.diagonal(A.shape)
    nz = [d for d in S.divisors if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert S.divisors[len(nz):] == (0,) * (len(S.divisors) - len(nz))
    assert abs(S.left.det()) == 1 and abs(S.right.det()) == 1


@given(matrices(max_rows=5, max_cols=5, bound=30))
def test_divisors_match_sympy(A):
    n = A.shape[0]
    columns = [tuple(c) for c in A.columns()]
    assert FinGenAb(n, columns).structure() == sympy_divisors(columns, n)


@given(matrices(), st.randoms(use_true_random=False))
def test_unimodular_invariance(A, rng):
    from dihedral_tate.dmodule import random_unimodular

    m, n = A.shape
    P, _ = random_unimodular(rng, m, 8)
    Q, _ = random_unimodular(rng, n, 8)
    assert smith_normal_form(P @ A @ Q).divisors == smith_normal_form(A).divisors


def groups(max_gens=3, bound=10):
    return st.integers(1, max_gens).flatmap(
        lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), max_size=n + 1).map(
            lambda rels: FinGenAb(n, rels)
        )
    )


@given(groups(), st.integers(1, 36))
def test_rank_vs_torsion(B, m):
    Bm = torsion_subgroup(B, m)
    mB = B.whole().scaled(m)
    assert Bm.order() * m**B.rank == index(mB)


@given(groups(), st.data())
def test_index_is_quotient_order(B, data):
    n = B.ngens
    gens = data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), max_size=4))
    S = B.subgroup(gens)
    idx = index(S)
    Q = quotient(B, S)
    if idx is INFINITE:
        assert Q.rank > 0
    else:
        assert Q.rank == 0 and Q.order() == idx


def _elements_of(moduli):
    return list(product(*(range(m) for m in moduli)))


def _span(gens, moduli):
    S = {tuple(0 for _ in moduli)}
    frontier = list(S)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple((a + b) % m for a, b, m in zip(x, g, moduli))
            if y not in S:
                S.add(y)
                frontier.append(y)
    return S


def _as_set(S: Subgroup, moduli):
    return {v for v in _elements_of(moduli) if S.contains(v)}


@settings(max_examples=40)
@given(
    st.lists(st.integers(2, 12), min_size=1, max_size=3),
    st.data(),
)
def test_sum_intersection_brute_force(moduli, data):
    n = len(moduli)
    B = FinGenAb(n, [[m * int(i == j) for i in range(n)] for j, m in enumerate(moduli)])
    vec = st.tuples(*(st.integers(0, m - 1) for m in moduli))
    a, b, c = (data.draw(st.lists(vec, max_size=2)) for _ in range(3))
    S, T, U0 = B.subgroup(a), B.subgroup(b), B.subgroup(c)
    U = subgroup_sum(S, U0)  # S <= U for the modular law
    sets = {k: _span(g, moduli) for k, g in (("S", a), ("T", b))}
    assert _as_set(subgroup_sum(S, T), moduli) == _span(a + b, moduli)
    assert _as_set(subgroup_intersection(S, T), moduli) == sets["S"] & sets["T"]
    left = subgroup_sum(S, subgroup_intersection(T, U))
    right = subgroup_intersection(subgroup_sum(S, T), U)
    assert left.equals(right)
