import pytest
from hypothesis import given, settings, strategies as st

from localhecke.localfield import BUILTIN_FIELDS, load_field
from localhecke.witt import (
    NumericWitt,
    ResidueAlgebra,
    Theta,
    WittRingTable,
    WittVec,
    law_polynomials,
    specialize_check,
    structure_vector,
    teichmuller,
    witt_one,
)


def as_ints(field, poly, M):
    R = field.ring(M)
    out = {}
    for mono, rep in poly.items():
        for k in range(-8, 9):
            if R.from_int(k) == rep:
                out[mono] = k
                break
        else:
            out[mono] = R.digits(rep)
    return out


def test_zp_first_witt_polynomials():
    F = load_field("Q2")
    t = law_polynomials(F, 2, 4)
    # variables X0, X1, Y0, Y1
    assert as_ints(F, t.S[1], 4) == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (1, 0, 1, 0): -1}
    assert as_ints(F, t.P[1], 4) == {(2, 0, 0, 1): 1, (0, 1, 2, 0): 1, (0, 1, 0, 1): 2}


@pytest.mark.parametrize("name", ["Q2", "Q3", "Q2_sqrt2"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_laws_are_ghost_consistent(name, n):
    assert law_polynomials(load_field(name), n, 4).ghost_consistent()


@pytest.mark.parametrize("name", ["Q2", "Q3"])
def test_matches_classical_p_typical_laws(name):
    rep = specialize_check(load_field(name), 3, 4)
    assert rep["match"], rep


@pytest.mark.parametrize("name", ["F2t", "F3t", "F4t"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_ring_axioms_exhaustive(name, n):
    F = load_field(name)
    tab = WittRingTable(law_polynomials(F, n, 4), ResidueAlgebra(F))
    assert tab.size == F.q ** n
    assert tab.check_axioms() == []


@pytest.mark.parametrize("name", ["Q2", "Q3", "Q2_sqrt2", "F2t", "F4t"])
def test_frobenius_verschiebung_is_pi(name):
    F = load_field(name)
    table = law_polynomials(F, 3, 4)
    alg = ResidueAlgebra(F)
    pi = structure_vector(table, "pi", alg)
    assert pi.coords == (0, 1, 0)
    tab = WittRingTable(table, alg)
    for x in tab.vectors:
        assert x.verschiebung().frobenius() == pi * x
        assert x.frobenius().verschiebung() == pi * x


@pytest.mark.parametrize("name", ["Q2", "Q3", "Q2_sqrt2", "F2t", "F3t", "F4t", "Q4"])
def test_theta_is_isomorphism(name):
    F = load_field(name)
    N = 1
    while F.q ** (N + 1) <= 512 and N < 4:
        N += 1
    for k in range(1, N + 1):
        rep = Theta(F, k).verify(table=law_polynomials(F, k, 4) if F.q ** k <= 64 else None)
        assert rep["ok"], (k, rep)


def test_teichmueller_multiplicative():
    F = load_field("Q3")
    table = law_polynomials(F, 2, 4)
    alg = ResidueAlgebra(F)
    for a in range(3):
        for b in range(3):
            assert teichmuller(table, alg, a) * teichmuller(table, alg, b) == teichmuller(table, alg, F.residue.mul(a, b))
    assert witt_one(table, alg).coords == (1, 0)


@pytest.mark.parametrize("name", ["Q2_sqrt2", "Q3", "F4t"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_tables_agree_with_numeric_ghost_lift(name, data):
    F = load_field(name)
    n = 3
    table = law_polynomials(F, n, 4)
    alg = ResidueAlgebra(F)
    vec = st.tuples(*[st.integers(0, F.q - 1)] * n)
    u, v = data.draw(vec), data.draw(vec)
    num = NumericWitt(F, n)
    a, b = WittVec(table, alg, u), WittVec(table, alg, v)
    assert (a + b).coords == num.add(u, v)
    assert (a * b).coords == num.mul(u, v)


def test_wrong_length_rejected():
    F = load_field("Q2")
    with pytest.raises(ValueError):
        WittVec(law_polynomials(F, 2, 4), ResidueAlgebra(F), (1,))
