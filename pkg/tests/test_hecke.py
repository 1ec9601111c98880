import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from localhecke.localfield import load_field
from localhecke.hecke import (
    BudgetError,
    DoubleCoset,
    GrpElt,
    HeckeAlgebra,
    HeckeElem,
    HeckeError,
    cartan_decompose,
    digit_ring,
    dominant_box,
    grp_elt,
    mat_mul,
    spherical_count_brute,
)


@pytest.fixture(scope="module")
def q2_level1():
    return HeckeAlgebra(load_field("Q2"), 2, 1)


def test_cartan_examples():
    F = load_field("Q2")
    assert cartan_decompose(grp_elt(F, [[(1, 1), 0], [0, 1]]))[0] == (1, 0)
    assert cartan_decompose(grp_elt(F, [[1, (1, -1)], [0, 1]]))[0] == (1, -1)
    assert cartan_decompose(grp_elt(F, [[1, 1], [1, 0]]))[0] == (0, 0)
    assert cartan_decompose(grp_elt(F, [[6, 4], [2, 12]]))[0] == (5, 1)


def test_cartan_reconstructs_the_matrix():
    F = load_field("Q2_sqrt2")
    g = grp_elt(F, [[3, (1, 1)], [(5, 2), 7]], W=8)
    nu, k1, k2 = cartan_decompose(g)
    D = g.ring
    low = min(nu)
    diag = tuple(D.mulpi(D.one, nu[i] - low) if i == j else 0 for i in range(2) for j in range(2))
    assert mat_mul(D, mat_mul(D, k1, diag, 2), k2, 2) == g.A and g.shift == -low


@pytest.mark.parametrize("name", ["Q2", "F2t", "Q2_sqrt2"])
def test_spherical_left_coset_counts(name):
    H = HeckeAlgebra(load_field(name), 2, 0)
    assert len(H.left_cosets(H.nabla((1, 0)))) == 3
    assert len(H.left_cosets(H.nabla((0, 0)))) == 1


@pytest.mark.parametrize("name", ["Q2", "F2t", "Q3", "F4t"])
def test_left_count_formula_matches_enumeration(name):
    F = load_field(name)
    for nu in dominant_box(2, 1 if F.q > 2 else 2):
        assert HeckeAlgebra(F, 2, 0).left_count(DoubleCoset(nu)) == spherical_count_brute(F, 2, nu)
    H1 = HeckeAlgebra(F, 2, 1)
    for nu in dominant_box(2, 1):
        for d in H1.double_cosets(nu)[:3]:
            assert len(H1.left_cosets(d)) == H1.left_count(d)


def test_rank_three_counts():
    H = HeckeAlgebra(load_field("Q2"), 3, 0)
    assert H.left_count(DoubleCoset((1, 0, 0))) == 7
    assert H.left_count(DoubleCoset((1, 1, 0))) == 7
    assert spherical_count_brute(load_field("Q2"), 3, (1, 0, 0)) == 7


def _hnf_cosets(k):
    """Left cosets g K in K diag(2^a, 2^b) K with a + b = k, a, b >= 0: upper
    triangular Hermite forms [[2^a, c], [0, 2^b]] with c mod 2^b."""
    out = []
    for a in range(k + 1):
        b = k - a
        for c in range(2 ** b):
            out.append((2 ** a, c, 0, 2 ** b))
    return out


def _type(m):
    a, b, c, d = m
    det = a * d - b * c
    v = lambda x: 99 if x == 0 else (x & -x).bit_length() - 1
    low = min(v(x) for x in m)
    return (v(det) - low, low)


def test_spherical_square_by_hermite_forms():
    """Independent count: products of Hermite representatives over Z."""
    xs = [m for m in _hnf_cosets(1) if _type(m) == (1, 0)]
    assert len(xs) == 3
    counts = Counter()
    for x in xs:
        for y in xs:
            a, b, c, d = x
            e, f, g, h = y
            counts[_type((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))] += 1
    assert counts == {(2, 0): 6, (1, 1): 3}
    H = HeckeAlgebra(load_field("Q2"), 2, 0)
    prod = H.basis_product(H.nabla((1, 0)), H.nabla((1, 0)))
    assert prod == {DoubleCoset((1, 1)): 3, DoubleCoset((2, 0)): 1}
    for nu, c in counts.items():
        assert c // H.left_count(DoubleCoset(nu)) == prod[DoubleCoset(nu)]


@pytest.mark.parametrize("name", ["Q2", "F2t"])
def test_torus_elements_multiply(name):
    H = HeckeAlgebra(load_field(name), 2, 1)
    nus = dominant_box(2, 1)
    for nu in nus:
        for mu in nus:
            s = tuple(a + b for a, b in zip(nu, mu))
            assert H.basis_product(H.nabla(nu), H.nabla(mu)) == {H.nabla(s): 1}


def test_identity_is_unit(q2_level1):
    H = q2_level1
    e = H.unit()
    for d in H.generating_set(1)[::7]:
        h = H.basis(d)
        assert H.convolve(e, h) == h and H.convolve(h, e) == h


def test_k_nabla_j_rule(q2_level1):
    H = q2_level1
    rng = random.Random(5)
    K = H.k_bar()
    F = H.field
    for _ in range(12):
        k, j = rng.choice(K), rng.choice(K)
        nu = rng.choice(dominant_box(2, 1))
        lhs = H.convolve(H.convolve(H.basis(H.k_coset(k)), H.basis(H.nabla(nu))), H.basis(H.k_coset(j)))
        W = 1 + (nu[0] - nu[1]) + 1
        D = digit_ring(F, W)
        low = nu[1]
        diag = tuple(D.mulpi(D.one, nu[i] - low) if i == jj else 0 for i in range(2) for jj in range(2))
        kl = tuple(D.lift(x, 1) for x in k)
        jl = tuple(D.lift(x, 1) for x in j)
        g = GrpElt(F, 2, mat_mul(D, mat_mul(D, kl, diag, 2), jl, 2), -low, W)
        assert lhs == H.basis(H.double_coset(g))


def test_mass_conservation_on_generators(q2_level1):
    H = q2_level1
    G = H.generating_set(1)
    for a in G[::4]:
        for b in G[::5]:
            assert H.mass_check(a, b)


@pytest.mark.parametrize("name", ["Q2", "F2t"])
def test_associativity_on_generating_set(name):
    F = load_field(name)
    for n in (0, 1):
        H = HeckeAlgebra(F, 2, n)
        gens = [H.k_coset(k) for k in H.k_bar()] if n else []
        gens += [H.nabla((1, 0)), H.nabla((1, 1)), H.nabla((0, -1))]
        gens = sorted(set(gens))
        for a, b, c in itertools.product(gens, repeat=3):
            ha, hb, hc = H.basis(a), H.basis(b), H.basis(c)
            assert H.convolve(H.convolve(ha, hb), hc) == H.convolve(ha, H.convolve(hb, hc))


def test_inverse_is_an_involution(q2_level1):
    H = q2_level1
    for d in H.generating_set(1):
        inv = H.inverse_coset(d)
        assert inv.nu == tuple(-x for x in reversed(d.nu))
        assert H.inverse_coset(inv) == d


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), idx=st.integers(0, 44))
def test_label_stable_under_resampling(q2_level1, seed, idx):
    H = q2_level1
    d = H.generating_set(1)[idx]
    rng = random.Random(seed)
    W = H.n + d.spread + 1
    g = H.representative(d, W)
    k, kp = H.random_k_n(rng, W), H.random_k_n(rng, W)
    assert H.double_coset(k * g * kp) == d


def test_double_coset_counts_gl2_q2_level1(q2_level1):
    H = q2_level1
    assert [len(H.double_cosets(nu)) for nu in dominant_box(2, 1)] == [6, 9, 6, 9, 9, 6]
    assert len(H.generating_set(1)) == 45


def test_json_round_trip(q2_level1):
    H = q2_level1
    for d in H.generating_set(1):
        assert DoubleCoset.from_json(d.to_json(2, 1), 2) == d


def test_errors(q2_level1):
    H = q2_level1
    with pytest.raises(HeckeError):
        H.nabla((0, 1))
    with pytest.raises(HeckeError):
        H.convolve(HeckeElem.make(0, {}), H.unit())
    with pytest.raises(BudgetError):
        HeckeAlgebra(load_field("Q2"), 2, 1, budget=10).generating_set(1)
