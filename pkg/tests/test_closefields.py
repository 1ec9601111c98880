import pytest

from localhecke.closefields import (
    CloseFieldPair,
    check_bound,
    eta_map,
    family_hecke,
    family_to_json,
    match_double_cosets,
    verify_algebra_iso,
)
from localhecke.family import Family
from localhecke.hecke import DoubleCoset, HeckeElem
from localhecke.localfield import FieldError, load_field


@pytest.fixture(scope="module")
def pair_e4():
    return CloseFieldPair(load_field("Q2_root4_2"), load_field("F2t"), 2, 1)


def test_refuses_when_e_below_level():
    with pytest.raises(FieldError):
        CloseFieldPair(load_field("Q2_sqrt2"), load_field("F2t"), 2, 3)


def test_refuses_different_residue_fields():
    with pytest.raises(FieldError):
        CloseFieldPair(load_field("Q2"), load_field("F3t"), 2, 0)


def test_matching_counts(pair_e4):
    m = match_double_cosets(pair_e4, 1)
    assert {nu: e["lhs_count"] for nu, e in m.items()} == {
        (-1, -1): 6, (0, -1): 9, (0, 0): 6, (1, -1): 9, (1, 0): 9, (1, 1): 6}
    assert all(e["bijective"] and e["left_counts_equal"] for e in m.values())


def test_eta_linear_and_unital(pair_e4):
    lhs = pair_e4.lhs
    a, b = lhs.double_cosets((1, 0))[:2]
    h = HeckeElem.make(1, {a: 3, b: 2})
    assert eta_map(h, pair_e4) == HeckeElem.make(1, {pair_e4.transport(a): 3, pair_e4.transport(b): 2})
    assert eta_map(lhs.unit(), pair_e4) == pair_e4.rhs.unit()
    assert pair_e4.transport(lhs.nabla((1, -1))) == pair_e4.rhs.nabla((1, -1))


def test_eta_commutes_with_inversion(pair_e4):
    for d in pair_e4.lhs.generating_set(1):
        assert pair_e4.transport(pair_e4.lhs.inverse_coset(d)) == pair_e4.rhs.inverse_coset(pair_e4.transport(d))


@pytest.mark.parametrize("name,n", [("Q2", 0), ("Q2_sqrt2", 0), ("Q2_sqrt2", 1), ("Q2_root4_2", 1)])
def test_algebra_isomorphism(name, n):
    rep = verify_algebra_iso(CloseFieldPair(load_field(name), load_field("F2t"), 2, n), 1, 2)
    s = rep["summary"]
    assert s["discrepancies"] == 0 and s["all_equal"]
    assert s["products"] == (36 if n == 0 else 2025)


def test_spherical_square_both_sides():
    pair = CloseFieldPair(load_field("Q2"), load_field("F2t"), 2, 0)
    a = DoubleCoset((1, 0))
    rep = verify_algebra_iso(pair, 1, 2, products=[(a, a)])
    inst = rep["instances"][0]
    assert inst["equal"]
    assert [t["coeff"] for t in inst["rhs_terms"]] == [3, 1]


@pytest.mark.parametrize("name,n", [("Q2", 0), ("Q2", 1), ("Q2_sqrt2", 2), ("Q2_root4_2", 2)])
def test_torus_tables_equal(name, n):
    pair = CloseFieldPair(load_field(name), load_field("F2t"), 1, n)
    rep = verify_algebra_iso(pair, 1, 2)
    assert rep["summary"]["all_equal"]
    units = 2 ** (n - 1) if n else 1  # |(O/pi^n)^x| for q = 2
    assert rep["summary"]["generators"] == 3 * units


def test_discrepancies_are_reported(pair_e4, monkeypatch):
    rhs = pair_e4.rhs
    a = rhs.nabla((1, 0))
    original = rhs.basis_product

    def broken(x, y):
        out = dict(original(x, y))
        if x == a and y == a:
            out[rhs.nabla((1, 1))] = out.get(rhs.nabla((1, 1)), 0) + 1
        return out

    monkeypatch.setattr(rhs, "basis_product", broken)
    lhs_a = pair_e4.lhs.nabla((1, 0))
    rep = verify_algebra_iso(pair_e4, 1, 2, products=[(lhs_a, lhs_a)])
    assert rep["summary"]["discrepancies"] == 1
    assert not rep["instances"][0]["equal"]


def test_closure_bound():
    assert check_bound(1, 2, 2)["closed"]


def test_family_hecke():
    res = family_hecke([load_field("Q2_sqrt2"), load_field("Q2_root4_2")], load_field("F2t"), 1)
    fam = res["family"]
    assert isinstance(fam, Family) and fam.exceptions == {}
    assert res["verified_indices"] == [0, 1]
    js = family_to_json(fam, 2, 1)
    assert js["exceptions"] == {} and len(js["tail"]) == 45 * 45


def test_family_hecke_empty_list():
    res = family_hecke([], load_field("F2t"), 0)
    assert res["family"].exceptions == {} and res["indices"] == []

