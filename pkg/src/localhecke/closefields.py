"""Comparison of congruence Hecke algebras over close local fields.

For a mixed-characteristic E with e >= n and an equal-characteristic E' with
the same residue field, O/pi^n and O'/t^n are isomorphic by transporting
Teichmueller digits.  Double cosets are matched by transporting their residue
labels entrywise and keeping nu; products are then computed separately on
each side by the same generic enumeration and compared term by term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .family import Family
from .hecke import DoubleCoset, HeckeAlgebra, HeckeElem, HeckeError, DEFAULT_BUDGET, dominant_box, digit_ring
from .localfield import CloseFieldIso, FieldDesc, FieldError, TruncElem


class MatchError(ArithmeticError):
    """The double-coset matching is not a bijection at some nu."""


@dataclass
class CloseFieldPair:
    """E, E' and level n with the verified isomorphism O/pi^n = O'/t^n."""

    E: FieldDesc
    Eprime: FieldDesc
    r: int
    n: int
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.E.q != self.Eprime.q or self.E.residue != self.Eprime.residue:
            raise FieldError("close fields need the same residue field")
        self.iso = CloseFieldIso(self.E, self.n, target=self.Eprime)
        if self.n and not self.iso.verify():
            raise FieldError("digit transport is not a ring isomorphism at this level")
        # the two sides never share caches
        self.lhs = HeckeAlgebra(self.E, self.r, self.n, self.budget)
        self.rhs = HeckeAlgebra(self.Eprime, self.r, self.n, self.budget)

    def transport_entry(self, x: int) -> int:
        """Apply the ring isomorphism to one digit-integer entry."""
        Dn, Dn2 = digit_ring(self.E, self.n), digit_ring(self.Eprime, self.n)
        a = self.iso.R.from_digits(Dn.digits(x))
        b = self.iso(TruncElem(self.iso.R, a))
        return Dn2.from_digits(b.digits())

    def transport(self, d: DoubleCoset) -> DoubleCoset:
        """The matched coset on the E' side, re-canonicalized there."""
        if not d.residue:
            return DoubleCoset(d.nu)
        res = tuple(tuple(self.transport_entry(x) for x in m) for m in d.residue)
        return self.rhs.validate(DoubleCoset(d.nu, res))


def check_bound(bound: int, depth: int, r: int) -> dict:
    """Products of `depth` cosets with |nu_j| <= bound stay in |nu_j| <= depth*bound."""
    gens = dominant_box(r, bound)
    big = set(dominant_box(r, depth * bound))
    ok = True
    for a in gens:
        for b in gens:
            s = tuple(x + y for x, y in zip(a, b))
            ok &= all(abs(x) <= depth * bound for x in s)
    return {"generators": len(gens), "closure_bound": depth * bound, "closed": ok and bool(big)}


def match_double_cosets(pair: CloseFieldPair, bound: int = 1) -> dict:
    """Per-nu matching of independently enumerated double cosets on both sides."""
    out = {}
    for nu in dominant_box(pair.r, bound):
        left = pair.lhs.double_cosets(nu)
        right = pair.rhs.double_cosets(nu)
        image = [pair.transport(d) for d in left]
        bij = len(set(image)) == len(left) and set(image) == set(right)
        counts_ok = all(pair.lhs.left_count(d) == pair.rhs.left_count(e) for d, e in zip(left, image))
        entry = {"lhs_count": len(left), "rhs_count": len(right), "bijective": bij,
                 "left_counts_equal": counts_ok, "table": list(zip(left, image))}
        if len(left) != len(right) or not bij:
            raise MatchError(f"double-coset matching fails at nu = {nu}: {len(left)} vs {len(right)}")
        out[nu] = entry
    return out


def eta_map(h: HeckeElem, pair: CloseFieldPair) -> HeckeElem:
    if h.level != pair.n:
        raise HeckeError("level mismatch")
    return HeckeElem.make(pair.n, {pair.transport(pair.lhs.validate(d)): c for d, c in h.support})


def _terms_json(terms: dict, q: int, n: int):
    return [{"coset": d.to_json(q, n), "coeff": c} for d, c in sorted(terms.items())]


def verify_algebra_iso(pair: CloseFieldPair, bound: int = 1, depth: int = 2, products=None) -> dict:
    """Compare h_a * h_b with eta^-1(eta(h_a) * eta(h_b)) for all generator pairs.

    Returns the report {"instances": [...], "summary": {...}}; discrepancies are
    listed in full, never suppressed."""
    closure = check_bound(bound, depth, pair.r)
    if depth != 2:
        raise HeckeError("only pairwise products (depth 2) are compared")
    matching = match_double_cosets(pair, bound)
    gens = [d for nu in sorted(matching) for d, _ in matching[nu]["table"]]
    q, n = pair.E.q, pair.n
    instances = []
    pairs = products if products is not None else [(a, b) for a in gens for b in gens]
    for a, b in pairs:
        lhs = pair.lhs.basis_product(a, b)
        rhs = pair.rhs.basis_product(pair.transport(a), pair.transport(b))
        mapped = {pair.transport(d): c for d, c in lhs.items()}
        equal = mapped == rhs
        inst = {"product": [a.to_json(q, n), b.to_json(q, n)],
                "lhs_terms": _terms_json(mapped, q, n),
                "rhs_terms": _terms_json(rhs, q, n),
                "equal": equal}
        instances.append(inst)
    bad = [i for i in instances if not i["equal"]]
    summary = {
        "E": pair.E.name, "Eprime": pair.Eprime.name, "rank": pair.r, "level": n,
        "bound": bound, "depth": depth, "closure": closure["closed"],
        "generators": len(gens), "products": len(instances), "discrepancies": len(bad),
        "per_nu_counts": {",".join(map(str, nu)): [m["lhs_count"], m["rhs_count"]] for nu, m in sorted(matching.items())},
        "all_equal": not bad and closure["closed"],
    }
    return {"instances": instances, "summary": summary}


def product_table(alg: HeckeAlgebra, gens) -> dict:
    """{(a, b): structure constants} over a list of generators."""
    return {(a, b): alg.basis_product(a, b) for a in gens for b in gens}


def family_hecke(E_list, Eprime: FieldDesc, n: int, r: int = 2, bound: int = 1,
                 budget: int = DEFAULT_BUDGET) -> dict:
    """Family of structure-constant tables indexed by N u {inf}: index i is
    E_list[i] (transported to the E' labels), infinity is E' itself."""
    tail_alg = HeckeAlgebra(Eprime, r, n, budget)
    gens = tail_alg.generating_set(bound)
    tail = _freeze_table(product_table(tail_alg, gens))
    stalks = {}
    verified = []
    for i, E in enumerate(E_list):
        pair = CloseFieldPair(E, Eprime, r, n, budget)
        match_double_cosets(pair, bound)
        back = {pair.transport(d): d for d in pair.lhs.generating_set(bound)}
        table = {}
        for a2 in gens:
            for b2 in gens:
                prod = pair.lhs.basis_product(back[a2], back[b2])
                table[(a2, b2)] = {pair.transport(d): c for d, c in prod.items()}
        frozen = _freeze_table(table)
        stalks[i] = frozen
        if frozen == tail:
            verified.append(i)
    fam = Family(tail, stalks)
    return {"family": fam, "verified_indices": verified, "indices": list(range(len(E_list)))}


def _freeze_table(table: dict):
    return tuple((a, b, tuple(sorted(v.items()))) for (a, b), v in sorted(table.items()))


def family_to_json(fam: Family, q: int, n: int) -> dict:
    def enc(t):
        return [{"a": a.to_json(q, n), "b": b.to_json(q, n),
                 "terms": [{"coset": d.to_json(q, n), "coeff": c} for d, c in terms]} for a, b, terms in t]
    return fam.to_json(enc)


def torus_check(E: FieldDesc, Eprime: FieldDesc, n: int, bound: int = 1, budget: int = DEFAULT_BUDGET) -> dict:
    """The r = 1 case: compare full multiplication tables of the generators."""
    pair = CloseFieldPair(E, Eprime, 1, n, budget)
    rep = verify_algebra_iso(pair, bound, 2)
    return rep
