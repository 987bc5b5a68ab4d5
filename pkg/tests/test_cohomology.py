from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dihedral_tate.cohomology import (
    CohomologyError,
    FiniteAbGroup,
    delta_split,
    herbrand_quotient,
    odd_part,
    presentation_tate,
    split_odd_order,
    tate,
    tate_cyclic,
    tate_dihedral,
    tate_dihedral_direct,
)
from dihedral_tate.dmodule import (
    FULL,
    SIGMA,
    SIGMA_PRIME,
    RandomModuleSpec,
    SubgroupSpec,
    direct_sum,
    permutation_module,
    random_dmodule,
    rotations,
    sign_module,
    trivial_module,
)
from reference_modules import REFERENCE_MODULES

settings.register_profile("coh", deadline=None, max_examples=30)
settings.load_profile("coh")

# Frozen from tools/freeze_cohomology.py: D1, D2 by Fox calculus over sympy,
# the rest by enumerating elements of the finite module.
FROZEN = {
    "trivial_Z_q3": {"D1": (), "D2": (2,)},
    "trivial_Z6_q3": {"D1": (2,), "D2": (2,), "D0": (6,), "D-1": (6,), "G0": (3,), "G-1": (3,), "S0": (2,), "S-1": (2,)},
    "sign_Z_q5": {"D1": (2,), "D2": (5,)},
    "sign_Z9_q3": {"D1": (3,), "D2": (3,), "D0": (), "D-1": (), "G0": (3,), "G-1": (3,), "S0": (), "S-1": ()},
    "perm_sigma_q3": {"D1": (), "D2": (2,)},
    "perm_sigma_mod9_q3": {"D1": (), "D2": (), "D0": (), "D-1": (), "G0": (), "G-1": (), "S0": (), "S-1": ()},
    "perm_sigma_mod3_q5": {"D1": (), "D2": (), "D0": (), "D-1": (), "G0": (), "G-1": (), "S0": (), "S-1": ()},
    "jordan_mod9_q3": {"D1": (3,), "D2": (), "D0": (3,), "D-1": (), "G0": (3,), "G-1": (3,), "S0": (), "S-1": ()},
    "jordan_mod5_q5": {"D1": (5,), "D2": (), "D0": (5,), "D-1": (), "G0": (5,), "G-1": (5,), "S0": (), "S-1": ()},
    "mod7_pair_q3": {"D1": (), "D2": (), "D0": (), "D-1": (), "G0": (), "G-1": (), "S0": (), "S-1": ()},
    "ring_x1sq_q3": {"D1": (), "D2": (6,)},
    "ring_cyclo5_twisted_q5": {"D1": (5,), "D2": ()},
    "ring_mixed_mod6_q9": {"D1": (2,), "D2": (2,)},
    "orbit_quotient_q3": {"D1": (), "D2": ()},
    "glued_q3": {"D1": (), "D2": (2, 2)},
}


def _computed(M, key):
    label, deg = key[0], int(key[1:])
    if label == "D":
        return tate_dihedral(M, deg).divisors
    H = rotations(M.q) if label == "G" else SIGMA
    return tate_cyclic(M, H, deg).divisors


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_values(name):
    M = REFERENCE_MODULES[name]()
    for key, expected in FROZEN[name].items():
        assert _computed(M, key) == expected, key


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_presentation_route_matches_frozen(name):
    M = REFERENCE_MODULES[name]()
    assert presentation_tate(M, 1).divisors == FROZEN[name]["D1"]
    assert presentation_tate(M, 2).divisors == FROZEN[name]["D2"]


# -- spec examples --------------------------------------------------------


def test_cyclic_examples():
    Z = trivial_module(5)
    G = rotations(5)
    assert tate_cyclic(Z, G, 0).divisors == (5,)
    assert tate_cyclic(Z, G, -1).divisors == ()
    ZG = permutation_module(3, SIGMA)
    for i in range(-3, 4):
        assert tate_cyclic(ZG, rotations(3), i).group.is_trivial()


def test_cyclic_rejects_full():
    with pytest.raises(CohomologyError):
        tate_cyclic(trivial_module(3), FULL, 0)
    with pytest.raises(CohomologyError):
        herbrand_quotient(trivial_module(3), FULL)


def test_dihedral_examples():
    for q in (3, 5, 9):
        Z = trivial_module(q)
        assert tate_dihedral(Z, 0).divisors == (2 * q,)
        assert tate_dihedral(Z, -1).divisors == ()
    assert tate_dihedral(permutation_module(3, SIGMA), 0).divisors == (2,)
    assert tate_cyclic(trivial_module(3), SIGMA, 0).divisors == (2,)


def test_split_examples():
    # sigma acts trivially on H^0(G, Z)
    plus, minus = delta_split(trivial_module(3), 0)
    assert minus.is_trivial() and plus.divisors == (3,)
    plus, minus = delta_split(sign_module(3), 0)
    assert plus.is_trivial() and minus.divisors == (3,)


def test_split_rejects_even_order():
    T = tate_cyclic(trivial_module(3, 6), SIGMA, 0)
    with pytest.raises(CohomologyError):
        split_odd_order(T.presentation, T.presentation.induced(trivial_module(3, 6).act_sigma))


def test_herbrand_examples():
    for q in (3, 5, 7, 9, 15):
        G = rotations(q)
        assert herbrand_quotient(trivial_module(q), G) == q
        assert herbrand_quotient(permutation_module(q, SIGMA), G) == 1
        assert herbrand_quotient(trivial_module(q, 7 if q % 7 else 11), G) == 1


def test_odd_part_examples():
    assert odd_part(FiniteAbGroup((2, 4))).is_trivial()
    assert odd_part(FiniteAbGroup((6, 12))).divisors == (3, 3)
    assert odd_part(FiniteAbGroup((30,))).divisors == (15,)


def test_finite_group_validation():
    with pytest.raises(ValueError):
        FiniteAbGroup((4, 6))
    assert FiniteAbGroup.from_cyclic_orders([2, 3, 4]).divisors == (2, 12)


# -- properties -------------------------------------------------------------


def modules(**kw):
    spec = RandomModuleSpec(**kw)
    return st.tuples(st.sampled_from((3, 5, 7, 9, 15)), st.integers(0, 10**6)).map(
        lambda t: random_dmodule(t[0], spec, t[1])
    )


def _cyclic_subgroups(q):
    return [SIGMA, SIGMA_PRIME] + [SubgroupSpec.rotation(n) for n in range(3, q + 1) if q % n == 0]


@given(modules())
def test_period_two_for_cyclic(M):
    for H in _cyclic_subgroups(M.q):
        for i in (-1, 0):
            assert tate_cyclic(M, H, i).divisors == tate_cyclic(M, H, i + 2).divisors


@given(modules())
def test_period_four_for_dihedral(M):
    for i in range(-2, 2):
        assert tate_dihedral(M, i).divisors == tate_dihedral(M, i + 4).divisors


@given(modules())
def test_two_part_from_sigma(M):
    for i in (-1, 0, 1):
        assert tate_dihedral(M, i).group.two_part() == tate_cyclic(M, SIGMA, i).group.two_part()


@given(modules())
def test_direct_degrees_agree(M):
    for i in (-1, 0):
        assert tate_dihedral(M, i, check=False).group == tate_dihedral_direct(M, i).group


@given(modules())
def test_presentation_route_agrees(M):
    for i in (-3, -2, 1, 2):
        assert presentation_tate(M, i) == tate_dihedral(M, i).group


@given(modules())
def test_split_exhausts_odd_part(M):
    for i in (0, -1):
        plus, minus = delta_split(M, i)
        odd = tate_cyclic(M, rotations(M.q), i).group.odd_part()
        assert plus.order() * minus.order() == odd.order()
        assert plus + minus == odd


@given(modules(), modules())
def test_herbrand_multiplicative(M, N):
    if M.q != N.q:
        N = random_dmodule(M.q, RandomModuleSpec(), 7)
    G = rotations(M.q)
    assert herbrand_quotient(direct_sum([M, N]), G) == herbrand_quotient(M, G) * herbrand_quotient(N, G)


@settings(max_examples=25)
@given(st.sampled_from((3, 5)), st.integers(0, 10**6))
def test_against_brute_force(q, seed):
    """Degrees 0 and -1 for G, Sigma and D against element enumeration."""
    spec = RandomModuleSpec(finite_only=True, torsion_exponent_bound=6, max_rank=3,
                            allowed_summand_kinds=("torsion", "torsion_sign", "torsion_perm"),
                            conjugation_depth=0)
    M = random_dmodule(q, spec, seed)
    moduli = [0] * M.ngens
    for r in M.base.relations:
        (i,) = [k for k, x in enumerate(r) if x]
        moduli[i] = r[i]
    if any(m == 0 for m in moduli) or len(oracles.FiniteModule(moduli, [[0]], [[0]], q).elements) > 3000:
        return
    F = oracles.FiniteModule(moduli, M.act_rho.tolist(), M.act_sigma.tolist(), q)
    for i in (0, -1):
        assert tate_cyclic(M, rotations(q), i).divisors == oracles.brute_tate(F, "rotation", q, i)
        assert tate_cyclic(M, SIGMA, i).divisors == oracles.brute_tate(F, "reflection", 0, i)
        assert tate(M, FULL, i).divisors == oracles.brute_tate(F, "full", 0, i)


def test_herbrand_is_fraction():
    assert isinstance(herbrand_quotient(trivial_module(3), rotations(3)), Fraction)
