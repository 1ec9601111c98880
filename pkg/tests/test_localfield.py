import json

import pytest
from hypothesis import given, settings, strategies as st

from localhecke.localfield import (
    BUILTIN_FIELDS,
    CloseFieldIso,
    FieldError,
    NotUnitError,
    TruncElem,
    close_field_iso,
    is_irreducible,
    load_field,
    make_field,
    spread_extension,
    teichmuller,
)

FIELDS = sorted(BUILTIN_FIELDS)


def elems(field, N):
    q = field.q
    return st.lists(st.integers(0, q - 1), min_size=N, max_size=N).map(
        lambda ds: TruncElem.from_digits(field, ds))


def test_zp_unit_inverse():
    F = load_field("Q2")
    three = TruncElem.of(F, 3, 3)
    assert three * three == TruncElem.of(F, 3, 1)
    assert three.inverse() == three


def test_digits_of_small_integers():
    assert TruncElem.of(load_field("Q2"), 3, 7).digits() == [1, 1, 1]
    # Teichmueller digit for 2 in Z_3 is -1, so 5 = [2] + 3*[2] + O(9)
    F3 = load_field("Q3")
    assert TruncElem.of(F3, 2, 5).digits() == [2, 2]
    assert teichmuller(F3, 2, 2) == TruncElem.of(F3, 2, 8)


def test_ramified_uniformizer_squares_to_two():
    F = load_field("Q2_sqrt2")
    x = TruncElem.pi(F, 4)
    assert x * x == TruncElem.of(F, 4, 2)
    assert (x * x).val() == 2


def test_equal_characteristic_inverse():
    F = load_field("F2t")
    a = TruncElem.from_digits(F, [1, 1, 0])
    assert a.inverse().digits() == [1, 1, 1]


def test_not_a_unit_raises():
    with pytest.raises(NotUnitError):
        TruncElem.pi(load_field("Q3"), 3).inverse()


def test_irreducibility_check():
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)
    with pytest.raises(FieldError):
        make_field(2, 2, [1, 0, 1])


def test_non_eisenstein_rejected():
    with pytest.raises(FieldError):
        make_field(2, 1, None, [-4, 0, 1])


@pytest.mark.parametrize("name", FIELDS)
def test_teichmueller_is_multiplicative_and_fixed(name):
    F = load_field(name)
    R = F.ring(3)
    for a in range(F.q):
        ta = R.teich(a)
        assert R.pow(ta, F.q) == ta
        for b in range(F.q):
            assert R.mul(ta, R.teich(b)) == R.teich(F.residue.mul(a, b))


@pytest.mark.parametrize("name", FIELDS)
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_ring_laws(name, data):
    F = load_field(name)
    a, b, c = (data.draw(elems(F, 4)) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a - b) + b == a
    assert TruncElem.from_digits(F, a.digits()) == a


@pytest.mark.parametrize("name", FIELDS)
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_valuation_and_division(name, data):
    F = load_field(name)
    a, b = data.draw(elems(F, 4)), data.draw(elems(F, 4))
    if a.val() + b.val() < 4:
        assert (a * b).val() == a.val() + b.val()
    if a.is_unit():
        assert a * a.inverse() == TruncElem.of(F, 4, 1)
    v = a.val()
    if v < 4:
        u = a.divide_by_pi(v)
        assert u.is_unit()
        assert u.lift(4) * TruncElem.pi(F, 4) ** v == a


@pytest.mark.parametrize("name", ["Q2_sqrt2", "Q2_root4_2", "Q3_sqrt3", "Q4_sqrt2"])
def test_close_field_iso_verifies(name):
    E = load_field(name)
    for n in range(1, E.e + 1):
        assert CloseFieldIso(E, n).verify()


def test_close_field_iso_refuses_small_e():
    with pytest.raises(FieldError, match="e >= n"):
        close_field_iso(load_field("Q2"), 2)


def test_close_field_iso_fails_beyond_e():
    # digit transport O/pi^2 -> F_2[t]/t^2 is not additive for Z_2: 1 + 1 = 2 = pi
    E = load_field("Q2")
    iso = CloseFieldIso.__new__(CloseFieldIso)
    iso.source, iso.target, iso.n = E, load_field("F2t"), 2
    iso.R, iso.S = E.ring(2), iso.target.ring(2)
    assert not iso.verify()


def test_spread_extension_quadratic():
    E = load_field("Q2_sqrt2")
    F = spread_extension([[1], [0]], E, 2)
    assert F.e == 4
    assert F.describe()["eisenstein"] == [[-2], [0], [0], [0], [1]]


def test_spread_extension_matches_resultant():
    sympy = pytest.importorskip("sympy")
    T, x = sympy.symbols("T x")
    # a_0 = 1 + t, a_1 = t; over Q_2(x) with x^2 = 2 the relative polynomial is
    # T^2 + x (x T + 1 + x); its norm down to Q_2 is the resultant in x
    rel = T ** 2 + x * (x * T + 1 + x)
    norm = sympy.Poly(sympy.resultant(rel, x ** 2 - 2, x), T)
    F = spread_extension([[1, 1], [0, 1]], load_field("Q2_sqrt2"), 2)
    got = [c[0] for c in F.describe()["eisenstein"]]
    assert got == [int(c) for c in reversed(norm.all_coeffs())]
    assert got == [2, 8, 8, 4, 1]


def test_load_descriptor_files(tmp_path):
    toml = tmp_path / "q2s.toml"
    toml.write_text('p = 2\nf = 1\nkind = "mixed"\neisenstein = [-2, 0, 1]\n')
    js = tmp_path / "f4.json"
    js.write_text(json.dumps({"p": 2, "f": 2, "kind": "laurent", "defining_poly": [1, 1, 1]}))
    a = load_field(str(toml))
    assert a.e == 2 and a.q == 2
    b = load_field(str(js))
    assert b.q == 4 and not b.is_mixed
    with pytest.raises(FileNotFoundError):
        load_field(str(tmp_path / "missing.toml"))
