import copy
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dihedral_tate.arithmetic import (
    DATA_DIR,
    DataError,
    LocalOrders,
    RamificationRow,
    StatementResult,
    bundled_dataset,
    bundled_names,
    check_bounds,
    cohomological_ratios,
    defects,
    load_field_data,
    local_orders_from_table,
    parse_field_data,
    unit_index_data,
    verify_all,
    verify_bartel_equivalence,
    verify_local,
    verify_main_theorem,
    verify_unit_index,
)
from dihedral_tate.dmodule import SIGMA, augmentation_module

REAL = ("x3-x-1", "x3-4x+1", "x5-5x+12")


def _doc(name):
    return json.loads((DATA_DIR / f"{name}.json").read_text())


def _synthetic_q9(h=(1, 1, 1, 1)):
    """Augmentation of Z[D/Sigma] for q = 9 with roots of unity {+-1}; rank 8, rank E_F = 0."""
    A = augmentation_module(9, SIGMA)
    n = A.ngens

    def extend(X):
        return [row + [0] for row in X.tolist()] + [[0] * n + [1]]

    return {
        "label": "synthetic q=9",
        "q": 9,
        "class_numbers": dict(zip("LKFk", h)),
        "units": {"rank": n, "w": 2, "rho": extend(A.act_rho), "sigma": extend(A.act_sigma)},
        "flags": {"k_is_Q": True, "F_type": "imaginary"},
        "unit_ranks": {"k": 0, "F": 0},
    }


def test_bundled_names():
    assert bundled_names() == ["x3-4x+1", "x3-x-1", "x3-x-1-corrupted", "x5-5x+12"]


@pytest.mark.parametrize("name", REAL)
def test_real_datasets_pass(name):
    report = verify_all(bundled_dataset(name))
    assert report.ok, report.lines()
    assert report.lines()[-1] == "RESULT PASS"


def test_cubic_values():
    fd = bundled_dataset("x3-x-1")
    assert fd.ratio == Fraction(1, 3)
    assert cohomological_ratios(fd.unit_module) == (Fraction(1, 3), Fraction(1, 3))
    assert verify_unit_index(fd).get("unit_index").details == {"index": 1, "s": 1}
    assert verify_bartel_equivalence(fd).get("bartel").details["delta"] == 1
    assert defects(fd) == (0, 0)


def test_totally_real_cubic():
    fd = bundled_dataset("x3-4x+1")
    assert fd.F_type == "real" and fd.unit_rank == 5
    report = verify_all(fd)
    assert report.ok
    assert report.outcome("bounds_cm") == "skipped"


def test_quintic():
    fd = bundled_dataset("x5-5x+12")
    assert fd.q == 5 and fd.ratio == Fraction(1, 1)
    assert verify_all(fd).ok


def test_corrupted_fails_with_values():
    fd = bundled_dataset("x3-x-1-corrupted")
    res = verify_main_theorem(fd).get("main_theorem")
    assert res.outcome == "fail"
    assert res.left == Fraction(1, 4) and res.right == Fraction(1, 3)
    assert "left=1/4 right=1/3" in res.line()
    assert verify_all(fd).lines()[-1] == "RESULT FAIL"


def test_round_trip_byte_exact():
    for name in bundled_names():
        text = (DATA_DIR / f"{name}.json").read_text()
        assert load_field_data(text).dumps() == text


def test_load_from_path_dict_and_text():
    path = DATA_DIR / "x3-x-1.json"
    a = load_field_data(path).dumps()
    assert load_field_data(str(path)).dumps() == a
    assert load_field_data(_doc("x3-x-1")).dumps() == a


# -- negative controls -----------------------------------------------------


def test_sigma_not_involution():
    doc = _doc("x3-x-1")
    doc["units"]["sigma"] = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(DataError, match="relation violation"):
        load_field_data(doc)


def test_ranks_contradict_action():
    doc = _doc("x3-x-1")
    doc["unit_ranks"]["F"] = 1
    with pytest.raises(DataError, match="unit rank mismatch"):
        load_field_data(doc)
    doc = _doc("x3-4x+1")
    doc["unit_ranks"]["k"] = 1
    with pytest.raises(DataError, match="unit rank mismatch"):
        load_field_data(doc)


def test_sign_flipped_sigma():
    doc = _doc("x3-4x+1")
    sigma = doc["units"]["sigma"]
    for row in sigma:
        row[0] = -row[0]
    try:
        fd = load_field_data(doc)
    except DataError:
        return
    assert not verify_all(fd).ok


def test_torsion_moved_by_rho():
    doc = _doc("x3-x-1")
    doc["units"]["w"] = 6
    doc["units"]["sigma"][2][2] = -1
    doc["units"]["rho"][2][2] = -1
    with pytest.raises(DataError):
        load_field_data(doc)


def test_parse_errors():
    base = _doc("x3-x-1")
    bad = []
    for path, value in (
        (("q",), 4),
        (("q",), "3"),
        (("class_numbers", "L"), 0),
        (("units", "w"), 3),
        (("units", "rho"), [[1]]),
        (("flags", "F_type"), "complex"),
        (("flags", "k_is_Q"), 1),
        (("ramification",), [{"type": "wild", "e": 2}]),
    ):
        doc = copy.deepcopy(base)
        target = doc
        for key in path[:-1]:
            target = target[key]
        target[path[-1]] = value
        bad.append(doc)
    for doc in bad:
        with pytest.raises(DataError, match="parse error"):
            parse_field_data(doc)
    with pytest.raises(DataError, match="parse error"):
        load_field_data("{not json")


def test_herbrand_gate():
    doc = _doc("x3-x-1")
    # identity action: rank 2 trivial lattice has Q = 9
    doc["units"]["rho"] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    doc["units"]["sigma"] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(DataError, match="Herbrand"):
        load_field_data(doc)


def test_small_ratio_breaks_bounds():
    doc = _doc("x3-x-1")
    doc["class_numbers"]["F"] = 27
    fd = load_field_data(doc)
    assert fd.ratio == Fraction(1, 27)
    report = check_bounds(fd)
    assert report.outcome("bounds_rational") == "fail"
    assert report.outcome("bounds_rational_prime") == "fail"
    assert report.outcome("bounds_cm") == "fail"
    assert "v3=-3 in [-1,0]" in report.get("bounds_rational").line()


def test_imaginary_excludes_one_over_p_squared():
    doc = _doc("x3-x-1")
    doc["class_numbers"]["F"] = 9
    report = check_bounds(load_field_data(doc))
    assert report.outcome("bounds_rational_prime") == "fail"


def test_composite_q_skips_bartel():
    fd = load_field_data(_synthetic_q9())
    assert fd.unit_rank == 8
    report = verify_all(fd)
    assert report.outcome("bartel") == "skipped"
    assert report.get("bartel").line() == "bartel SKIPPED(q not prime)"
    assert report.outcome("main_theorem") == "pass"
    assert report.outcome("unit_index") == "pass"
    assert report.outcome("bounds_rational_prime") == "skipped"
    assert unit_index_data(fd).index == 9


def test_statement_needs_values_or_reason():
    with pytest.raises(ValueError):
        StatementResult("x", "fail")
    with pytest.raises(ValueError):
        StatementResult("x", "maybe")


def test_unknown_check():
    with pytest.raises(DataError):
        verify_all(bundled_dataset("x3-x-1"), ("main", "nope"))


# -- local tables ------------------------------------------------------------


def test_local_examples():
    q = 7
    assert local_orders_from_table([]) == LocalOrders(1, 1, 1, 0)
    lo = local_orders_from_table([("split", q)])
    assert (lo.h0_D, lo.h1_D, lo.h1_G) == (q, q, q * q)
    lo = local_orders_from_table([RamificationRow("ramified", 2 * q)])
    assert (lo.h0_D, lo.h1_D, lo.h1_G) == (2, 2 * q, q)
    assert lo.identity_holds()
    with pytest.raises(DataError):
        local_orders_from_table([("ramified", 3)])


def test_local_dataset():
    report = verify_local(bundled_dataset("x3-x-1"))
    assert report.ok and report.get("local_orders").details == {"h0_D": 2, "h1_D": 2, "h1_G": 1}
    assert verify_local(load_field_data(_synthetic_q9())).outcome("local_orders") == "skipped"


rows = st.one_of(
    st.tuples(st.sampled_from(("split", "inert")), st.integers(1, 30)),
    st.tuples(st.just("ramified"), st.integers(1, 15).map(lambda k: 2 * k)),
)


@settings(max_examples=100)
@given(st.lists(rows, max_size=6))
def test_local_identity(table):
    lo = local_orders_from_table(table)
    assert lo.identity_holds()
    assert lo.ramified_rows == sum(1 for k, _ in table if k == "ramified")
