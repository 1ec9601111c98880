"""Eventually constant families over the one-point compactification N u {inf}.

A family is a tail value (taken at infinity and at every natural number not
listed) together with finitely many exceptional values at naturals.  Clopen
subsets are finite sets of naturals or complements of those (which contain
infinity).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

INF = "inf"


def _check_index(i):
    if i == INF:
        return i
    if isinstance(i, bool) or not isinstance(i, int) or i < 0:
        raise ValueError(f"index must be a natural number or INF, got {i!r}")
    return i


class Family:
    """Eventually constant function N u {inf} -> V in canonical form."""

    __slots__ = ("tail", "_exc")

    def __init__(self, tail, exceptions=None):
        exc = {}
        for k, v in dict(exceptions or {}).items():
            if k == INF:
                raise ValueError("an exception at infinity is not allowed; the value there is the tail")
            _check_index(k)
            if v != tail:
                exc[k] = v
        self.tail = tail
        self._exc = dict(sorted(exc.items()))

    @property
    def exceptions(self) -> dict:
        return dict(self._exc)

    def stalk(self, i):
        _check_index(i)
        if i == INF:
            return self.tail
        return self._exc.get(i, self.tail)

    __call__ = stalk

    def support_points(self):
        """Exception indices plus one generic point; enough to test equality pointwise."""
        generic = max(self._exc, default=-1) + 1
        return list(self._exc) + [generic, INF]

    def map(self, g: Callable) -> "Family":
        return Family(g(self.tail), {k: g(v) for k, v in self._exc.items()})

    def restrict(self, clopen: "Clopen") -> dict:
        """Values on the exceptional points inside a clopen (finite data only)."""
        return {k: v for k, v in self._exc.items() if clopen.contains(k)}

    def __eq__(self, other):
        return isinstance(other, Family) and self.tail == other.tail and self._exc == other._exc

    def __hash__(self):
        return hash((_freeze(self.tail), tuple((k, _freeze(v)) for k, v in self._exc.items())))

    def __repr__(self):
        return f"Family(tail={self.tail!r}, exceptions={self._exc!r})"

    def to_json(self, encode: Callable = lambda v: v) -> dict:
        return {"tail": encode(self.tail), "exceptions": {str(k): encode(v) for k, v in self._exc.items()}}

    @classmethod
    def from_json(cls, d: dict, decode: Callable = lambda v: v) -> "Family":
        return cls(decode(d["tail"]), {int(k): decode(v) for k, v in d.get("exceptions", {}).items()})


def _freeze(v):
    if isinstance(v, dict):
        return tuple(sorted((k, _freeze(x)) for k, x in v.items()))
    if isinstance(v, (list, tuple)):
        return tuple(_freeze(x) for x in v)
    return v


def make_family(tail, exceptions=None) -> Family:
    return Family(tail, exceptions)


def stalk(f: Family, i):
    return f.stalk(i)


def constant(v) -> Family:
    return Family(v)


@dataclass(frozen=True)
class Clopen:
    """A clopen subset: ``points`` if not cofinite, else the complement of ``points``."""

    points: frozenset
    cofinite: bool = False

    @classmethod
    def finite(cls, pts: Iterable[int]) -> "Clopen":
        return cls(frozenset(_check_index(i) for i in pts), False)

    @classmethod
    def cofinite_set(cls, missing: Iterable[int] = ()) -> "Clopen":
        return cls(frozenset(_check_index(i) for i in missing), True)

    def contains(self, i) -> bool:
        if i == INF:
            return self.cofinite
        return (i in self.points) != self.cofinite

    def complement(self) -> "Clopen":
        return Clopen(self.points, not self.cofinite)

    def intersect(self, other: "Clopen") -> "Clopen":
        a, b = self, other
        if not a.cofinite and not b.cofinite:
            return Clopen(a.points & b.points)
        if a.cofinite and b.cofinite:
            return Clopen(a.points | b.points, True)
        if a.cofinite:
            a, b = b, a
        return Clopen(a.points - b.points)

    def is_empty(self) -> bool:
        return not self.cofinite and not self.points


def glue(cover: list) -> Family:
    """Glue families given on the pieces of a clopen partition of N u {inf}."""
    pieces = [(c, f) for c, f in cover]
    for a in range(len(pieces)):
        for b in range(a + 1, len(pieces)):
            inter = pieces[a][0].intersect(pieces[b][0])
            if not inter.is_empty():
                ca, fa = pieces[a]
                cb, fb = pieces[b]
                pts = _witness_points(inter, [fa, fb])
                if any(fa.stalk(i) != fb.stalk(i) for i in pts):
                    raise ValueError("pieces overlap and disagree")
    cofinite = [(c, f) for c, f in pieces if c.cofinite]
    if not cofinite:
        raise ValueError("cover is not a partition: infinity is not covered")
    # the union must be everything: the complement of the union is finite, test it
    missing = set()
    for c, _ in cofinite:
        missing |= set(c.points)
    missing = {i for i in missing if not any(c.contains(i) for c, _ in pieces)}
    if missing:
        raise ValueError(f"cover is not a partition: {sorted(missing)} not covered")
    tail_piece, tail_family = cofinite[0]
    exc = {}
    for c, f in pieces:
        if c.cofinite:
            pts = set(f._exc) | set(c.points)
            for other_c, other_f in pieces:
                pts |= set(other_f._exc) | set(other_c.points)
            for i in pts:
                if c.contains(i):
                    exc[i] = f.stalk(i)
        else:
            for i in c.points:
                exc[i] = f.stalk(i)
    return Family(tail_family.tail, exc)


def _witness_points(c: Clopen, fams):
    pts = set(c.points) if not c.cofinite else set()
    if c.cofinite:
        cand = set(c.points)
        for f in fams:
            cand |= set(f._exc)
        gen = max(cand, default=-1) + 1
        pts = {i for i in cand if c.contains(i)} | {gen, INF}
    return pts


def zip_with(g: Callable, a: Family, b: Family) -> Family:
    keys = set(a._exc) | set(b._exc)
    return Family(g(a.tail, b.tail), {k: g(a.stalk(k), b.stalk(k)) for k in keys})


def fmap(g: Callable, a: Family) -> Family:
    return a.map(g)


def equal_indices(f: Family, indices) -> list:
    """Indices among ``indices`` where the stalk equals the tail."""
    return [i for i in indices if f.stalk(i) == f.tail]


__all__ = [
    "INF", "Family", "Clopen", "make_family", "stalk", "constant", "glue", "zip_with", "fmap",
    "equal_indices",
]
