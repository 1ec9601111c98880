"""Congruence-level Hecke algebras H(GL_r(E), K^n) with integer coefficients.

Matrices over O/pi^W are stored as flat row-major tuples of "digit integers":
an element sum_j [c_j] pi^j of O/pi^W is the integer whose base-q digits,
most significant first, are c_0, ..., c_{W-1}.  With this encoding integer
order is the digit-lexicographic order, reducing to O/pi^W' drops trailing
digits, and multiplying by pi^k is an integer shift.

A group element is pi^(-s) A with A an integral matrix over O/pi^W.  A double
coset K^n g K^n inside K diag(pi^nu) K is labelled by nu and the least pair
(k1, k2^(-1)) mod pi^n over all ways of writing g = k1 diag(pi^nu) k2.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .localfield import FieldDesc, PrecisionError

DEFAULT_BUDGET = 10 ** 6


class BudgetError(RuntimeError):
    """A finite enumeration would exceed the configured element budget."""


class HeckeError(ValueError):
    """Invalid Hecke-algebra input (level mismatch, non-dominant nu, ...)."""


# ---------------------------------------------------------------------------
# O/pi^W with digit-integer encoding

class DigitRing:
    """O/pi^W on digit integers; arithmetic is delegated to TruncRing and memoized."""

    def __init__(self, field: FieldDesc, W: int):
        self.field, self.W, self.q = field, W, field.q
        self.R = field.ring(W)
        self.size = self.q ** W
        self.zero = 0
        self.one = self.q ** (W - 1) if W > 0 else 0
        self.pi = self.q ** (W - 2) if W > 1 else 0
        self._to = {}
        self._from = {}
        self._mul = {}
        self._add = {}
        self._inv = {}

    def rep(self, x):
        r = self._to.get(x)
        if r is None:
            r = self.R.from_digits(self.digits(x))
            self._to[x] = r
            self._from[r] = x
        return r

    def from_rep(self, r):
        x = self._from.get(r)
        if x is None:
            x = self.from_digits(self.R.digits(r))
            self._from[r] = x
            self._to[x] = r
        return x

    def digits(self, x):
        out = []
        for _ in range(self.W):
            x, d = divmod(x, self.q)
            out.append(d)
        return out[::-1]

    def from_digits(self, ds):
        x = 0
        for d in ds:
            x = x * self.q + d
        return x

    def from_int(self, n):
        return self.from_rep(self.R.from_int(n))

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        key = (a, b) if a <= b else (b, a)
        v = self._add.get(key)
        if v is None:
            v = self.from_rep(self.R.add(self.rep(a), self.rep(b)))
            self._add[key] = v
        return v

    def neg(self, a):
        return self.from_rep(self.R.neg(self.rep(a))) if a else 0

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if a == self.one:
            return b
        if b == self.one:
            return a
        key = (a, b) if a <= b else (b, a)
        v = self._mul.get(key)
        if v is None:
            v = self.from_rep(self.R.mul(self.rep(a), self.rep(b)))
            self._mul[key] = v
        return v

    def val(self, a):
        if a == 0:
            return self.W
        v = self.W
        while a:
            a //= self.q
            v -= 1
        return v

    def is_unit(self, a):
        return a >= self.one and self.W > 0

    def inv(self, a):
        v = self._inv.get(a)
        if v is None:
            v = self.from_rep(self.R.inv(self.rep(a)))
            self._inv[a] = v
        return v

    def mulpi(self, a, k):
        return a // self.q ** k if k < self.W else 0

    def divpi(self, a, k):
        """a / pi^k (a must have valuation >= k); the last k digits become 0."""
        return (a * self.q ** k) % self.size

    def reduce(self, a, W2):
        return a // self.q ** (self.W - W2)

    def lift(self, a, W1):
        """Embed a digit integer of O/pi^W1 (W1 <= W) by zero padding."""
        return a * self.q ** (self.W - W1)

    def elements(self):
        return range(self.size)


@lru_cache(maxsize=None)
def digit_ring(field: FieldDesc, W: int) -> DigitRing:
    return DigitRing(field, W)


# ---------------------------------------------------------------------------
# matrices over a DigitRing (flat row-major tuples)

def mat_identity(D: DigitRing, r):
    return tuple(D.one if i == j else 0 for i in range(r) for j in range(r))


def mat_mul(D: DigitRing, a, b, r):
    out = []
    for i in range(r):
        row = a[i * r:(i + 1) * r]
        for j in range(r):
            acc = 0
            for k in range(r):
                x = row[k]
                if x:
                    y = b[k * r + j]
                    if y:
                        acc = D.add(acc, D.mul(x, y))
            out.append(acc)
    return tuple(out)


def mat_det(D: DigitRing, a, r):
    total = 0
    for perm in itertools.permutations(range(r)):
        term = D.one
        for i, j in enumerate(perm):
            term = D.mul(term, a[i * r + j])
            if term == 0:
                break
        if term:
            inversions = sum(1 for i in range(r) for j in range(i + 1, r) if perm[i] > perm[j])
            total = D.sub(total, term) if inversions % 2 else D.add(total, term)
    return total


def mat_inv(D: DigitRing, a, r):
    """Inverse of a matrix in GL_r(O/pi^W) by Gauss-Jordan with unit pivots."""
    m = [list(a[i * r:(i + 1) * r]) + [D.one if i == j else 0 for j in range(r)] for i in range(r)]
    for c in range(r):
        piv = next((i for i in range(c, r) if D.is_unit(m[i][c])), None)
        if piv is None:
            raise HeckeError("matrix is not invertible over O")
        m[c], m[piv] = m[piv], m[c]
        inv = D.inv(m[c][c])
        m[c] = [D.mul(inv, x) for x in m[c]]
        for i in range(r):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [D.sub(x, D.mul(f, y)) for x, y in zip(m[i], m[c])]
    return tuple(x for row in m for x in row[r:])


def mat_reduce(D: DigitRing, a, W2):
    return tuple(D.reduce(x, W2) for x in a)


def mat_lift(D: DigitRing, a, W1):
    return tuple(D.lift(x, W1) for x in a)


def diag_pi(D: DigitRing, exps):
    r = len(exps)
    out = [0] * (r * r)
    for i, e in enumerate(exps):
        if e < 0:
            raise ValueError("diag_pi needs nonnegative exponents")
        out[i * r + i] = D.mulpi(D.one, e)
    return tuple(out)


# ---------------------------------------------------------------------------
# group elements and the Cartan decomposition

@dataclass(frozen=True)
class GrpElt:
    """pi^(-shift) * A with A an integral r x r matrix known modulo pi^W."""

    field: FieldDesc
    r: int
    A: tuple
    shift: int
    W: int

    @property
    def ring(self):
        return digit_ring(self.field, self.W)

    def __mul__(self, other: "GrpElt") -> "GrpElt":
        if other.W != self.W or other.r != self.r or other.field != self.field:
            raise HeckeError("group elements must share field, rank and precision")
        return GrpElt(self.field, self.r, mat_mul(self.ring, self.A, other.A, self.r), self.shift + other.shift, self.W)

    def at_precision(self, W2):
        D2 = digit_ring(self.field, W2)
        if W2 <= self.W:
            return GrpElt(self.field, self.r, mat_reduce(self.ring, self.A, W2), self.shift, W2)
        return GrpElt(self.field, self.r, mat_lift(D2, self.A, self.W), self.shift, W2)

    def entries(self):
        """Entries as (digits of the integral numerator, shift)."""
        D = self.ring
        return [D.digits(x) for x in self.A], self.shift


def grp_elt(field: FieldDesc, rows, W: int = 8) -> GrpElt:
    """Build a group element from rows of entries; an entry is an int, or a
    pair (c, k) standing for c * pi^k with k possibly negative."""
    r = len(rows)
    parsed = []
    for row in rows:
        if len(row) != r:
            raise HeckeError("matrix must be square")
        for x in row:
            c, k = (x, 0) if isinstance(x, int) else (int(x[0]), int(x[1]))
            parsed.append((c, k))
    m = max(0, -min(k for c, k in parsed))
    D = digit_ring(field, W)
    A = []
    for c, k in parsed:
        A.append(D.mulpi(D.from_int(c), k + m))
    A = tuple(A)
    while m > 0 and all(D.val(x) >= 1 for x in A):
        A = tuple(D.divpi(x, 1) for x in A)
        m -= 1
    g = GrpElt(field, r, A, m, W)
    if D.val(mat_det(D, A, r)) >= W:
        raise PrecisionError("determinant vanishes at this working precision; increase W")
    return g


def smith(D: DigitRing, A, r):
    """Smith form A = K1 diag(pi^a) K2 over O/pi^W with a ascending.

    Raises PrecisionError if the matrix is singular modulo pi^W."""
    m = [list(A[i * r:(i + 1) * r]) for i in range(r)]
    K1 = [list(mat_identity(D, r)[i * r:(i + 1) * r]) for i in range(r)]
    K2 = [list(mat_identity(D, r)[i * r:(i + 1) * r]) for i in range(r)]
    exps = []
    for k in range(r):
        best, bi, bj = D.W, None, None
        for i in range(k, r):
            for j in range(k, r):
                v = D.val(m[i][j])
                if v < best:
                    best, bi, bj = v, i, j
        if bi is None:
            raise PrecisionError("matrix is singular at this working precision")
        if bi != k:
            m[k], m[bi] = m[bi], m[k]
            for row in K1:
                row[k], row[bi] = row[bi], row[k]
        if bj != k:
            for row in m:
                row[k], row[bj] = row[bj], row[k]
            K2[k], K2[bj] = K2[bj], K2[k]
        v = best
        u_inv = D.inv(D.divpi(m[k][k], v))
        for i in range(k + 1, r):
            if m[i][k]:
                c = D.mul(D.divpi(m[i][k], v), u_inv)
                m[i] = [D.sub(x, D.mul(c, y)) for x, y in zip(m[i], m[k])]
                for row in K1:
                    row[k] = D.add(row[k], D.mul(c, row[i]))
        for j in range(k + 1, r):
            if m[k][j]:
                c = D.mul(D.divpi(m[k][j], v), u_inv)
                for row in m:
                    row[j] = D.sub(row[j], D.mul(c, row[k]))
                K2[k] = [D.add(x, D.mul(c, y)) for x, y in zip(K2[k], K2[j])]
        u = D.divpi(m[k][k], v)
        for row in K1:
            row[k] = D.mul(row[k], u)
        m[k][k] = D.mulpi(D.one, v)
        exps.append(v)
    return exps, tuple(x for row in K1 for x in row), tuple(x for row in K2 for x in row)


def cartan_decompose(g: GrpElt):
    """g = k1 diag(pi^nu) k2 with nu dominant (descending) and k1, k2 in GL_r(O/pi^W)."""
    D, r = g.ring, g.r
    exps, K1, K2 = smith(D, g.A, r)
    order = list(range(r))[::-1]
    K1 = tuple(K1[i * r + order[j]] for i in range(r) for j in range(r))
    K2 = tuple(K2[order[i] * r + j] for i in range(r) for j in range(r))
    nu = tuple(exps[order[j]] - g.shift for j in range(r))
    return nu, K1, K2


# ---------------------------------------------------------------------------
# double cosets and Hecke elements

@dataclass(frozen=True, order=True)
class DoubleCoset:
    """nu (descending) and the canonical residue pair (k1, k2^(-1)) mod pi^n."""

    nu: tuple
    residue: tuple = ()

    def to_json(self, q: int, n: int) -> dict:
        def digs(x):
            out = []
            for _ in range(n):
                x, d = divmod(x, q)
                out.append(d)
            return out[::-1]
        return {"nu": list(self.nu), "residue": [[digs(x) for x in mat] for mat in self.residue]}

    @classmethod
    def from_json(cls, d: dict, q: int) -> "DoubleCoset":
        def und(ds):
            x = 0
            for c in ds:
                if not 0 <= int(c) < q:
                    raise HeckeError(f"digit {c} out of range")
                x = x * q + int(c)
            return x
        res = tuple(tuple(und(e) for e in mat) for mat in d.get("residue", []))
        return cls(tuple(int(v) for v in d["nu"]), res)

    @property
    def spread(self):
        return self.nu[0] - self.nu[-1]


@dataclass(frozen=True)
class HeckeElem:
    """Finitely supported integer combination of double-coset indicators at level n."""

    level: int
    support: tuple = dc_field(default=())

    @classmethod
    def make(cls, level: int, terms: dict) -> "HeckeElem":
        return cls(level, tuple(sorted((d, c) for d, c in terms.items() if c)))

    def as_dict(self) -> dict:
        return dict(self.support)

    def __add__(self, other):
        if other.level != self.level:
            raise HeckeError("level mismatch")
        out = Counter(self.as_dict())
        for d, c in other.support:
            out[d] += c
        return HeckeElem.make(self.level, out)

    def scale(self, c: int):
        return HeckeElem.make(self.level, {d: c * v for d, v in self.support})


def _dominant(nu):
    return all(nu[i] >= nu[i + 1] for i in range(len(nu) - 1))


def _gl_count(q, r):
    out = 1
    for i in range(r):
        out *= q ** r - q ** i
    return out


class HeckeAlgebra:
    """H(GL_r(E), K^n) for one field; all caches are private to the instance."""

    def __init__(self, field: FieldDesc, r: int, n: int, budget: int = DEFAULT_BUDGET):
        if r < 1 or n < 0:
            raise HeckeError("rank must be >= 1 and level >= 0")
        self.field, self.r, self.n, self.q = field, r, n, field.q
        self.budget = budget
        self.Dn = digit_ring(field, n)
        self._stab = {}
        self._transversal = {}
        self._label = {}
        self._products = {}
        self._classes = {}

    def _charge(self, size, what):
        if size > self.budget:
            raise BudgetError(f"{what} needs {size} group elements, budget is {self.budget}")

    # finite groups ------------------------------------------------------------
    def k_bar(self):
        """GL_r(O/pi^n) as digit-integer matrices in lexicographic order."""
        if "K" not in self._classes:
            r, D = self.r, self.Dn
            size = _gl_count(self.q, r) * self.q ** (r * r * (self.n - 1)) if self.n else 1
            self._charge(size, "GL_r(O/pi^n)")
            out = [m for m in itertools.product(D.elements(), repeat=r * r) if D.is_unit(mat_det(D, m, r))] if self.n else [()]
            self._classes["K"] = out
        return self._classes["K"]

    def stabilizer(self, nu):
        """Pairs (k, k') mod pi^n with k diag(pi^nu) = diag(pi^nu) k'."""
        diffs = tuple(nu[i] - nu[j] for i in range(self.r) for j in range(self.r))
        if diffs in self._stab:
            return self._stab[diffs]
        D, r, n = self.Dn, self.r, self.n
        self._charge(self.q ** (n * r * r), "stabilizer enumeration")
        out = set()
        for m in itertools.product(D.elements(), repeat=r * r):
            k, kp = [], []
            for idx, x in enumerate(m):
                d = diffs[idx]
                if d >= 0:
                    k.append(D.mulpi(x, d))
                    kp.append(x)
                else:
                    k.append(x)
                    kp.append(D.mulpi(x, -d))
            k, kp = tuple(k), tuple(kp)
            if D.is_unit(mat_det(D, k, r)) and D.is_unit(mat_det(D, kp, r)):
                out.add((k, kp))
        self._stab[diffs] = sorted(out)
        return self._stab[diffs]

    def canonical_residue(self, nu, k1, k2inv):
        D, r = self.Dn, self.r
        return min((mat_mul(D, k1, s, r), mat_mul(D, k2inv, t, r)) for s, t in self.stabilizer(nu))

    # labels -----------------------------------------------------------------
    def double_coset(self, g: GrpElt) -> DoubleCoset:
        """Canonical label of K^n g K^n."""
        if g.field != self.field or g.r != self.r:
            raise HeckeError("element does not belong to this group")
        key = (g.A, g.shift, g.W)
        hit = self._label.get(key)
        if hit is not None:
            return hit
        nu, K1, K2 = cartan_decompose(g)
        a_max = nu[0] + g.shift
        if g.W < self.n + a_max:
            raise PrecisionError(f"working precision {g.W} too small: need {self.n + a_max}")
        if self.n == 0:
            d = DoubleCoset(nu)
        else:
            D = g.ring
            k1 = mat_reduce(D, K1, self.n)
            k2inv = mat_inv(self.Dn, mat_reduce(D, K2, self.n), self.r)
            d = DoubleCoset(nu, self.canonical_residue(nu, k1, k2inv))
        self._label[key] = d
        return d

    def nabla(self, nu) -> DoubleCoset:
        nu = tuple(nu)
        if len(nu) != self.r or not _dominant(nu):
            raise HeckeError(f"nu must be a dominant vector of length {self.r}")
        if self.n == 0:
            return DoubleCoset(nu)
        I = mat_identity(self.Dn, self.r)
        return DoubleCoset(nu, self.canonical_residue(nu, I, I))

    def k_coset(self, k) -> DoubleCoset:
        """Label of K^n k K^n = k K^n for k in GL_r(O/pi^n) (digit integers)."""
        if self.n == 0:
            return DoubleCoset((0,) * self.r)
        return DoubleCoset((0,) * self.r, self.canonical_residue((0,) * self.r, tuple(k), mat_identity(self.Dn, self.r)))

    def validate(self, d: DoubleCoset):
        if len(d.nu) != self.r or not _dominant(d.nu):
            raise HeckeError(f"nu must be a dominant vector of length {self.r}")
        if self.n == 0:
            if d.residue:
                raise HeckeError("level-0 double cosets carry no residue")
            return d
        if len(d.residue) != 2 or any(len(m) != self.r ** 2 for m in d.residue):
            raise HeckeError("residue must be a pair of r x r matrices")
        D = self.Dn
        for m in d.residue:
            if any(not 0 <= x < D.size for x in m) or not D.is_unit(mat_det(D, m, self.r)):
                raise HeckeError("residue matrices must lie in GL_r(O/pi^n)")
        canon = DoubleCoset(d.nu, self.canonical_residue(d.nu, *d.residue))
        return canon

    def double_cosets(self, nu):
        """All level-n double cosets inside K diag(pi^nu) K, sorted."""
        nu = tuple(nu)
        if nu in self._classes:
            return self._classes[nu]
        if self.n == 0:
            out = [DoubleCoset(nu)]
        else:
            K = self.k_bar()
            self._charge(len(K) ** 2, "double-coset enumeration")
            stab = self.stabilizer(nu)
            D, r = self.Dn, self.r
            seen = set()
            out = []
            for a in K:
                for b in K:
                    if (a, b) in seen:
                        continue
                    orbit = {(mat_mul(D, a, s, r), mat_mul(D, b, t, r)) for s, t in stab}
                    seen |= orbit
                    out.append(DoubleCoset(nu, min(orbit)))
        out.sort()
        self._classes[nu] = out
        return out

    # left cosets ------------------------------------------------------------
    def left_count(self, d: DoubleCoset) -> int:
        """|K^n g K^n / K^n| from the box-counting formula."""
        nu, q, r = d.nu, self.q, self.r
        c = sum(max(0, nu[i] - nu[j]) for i in range(r) for j in range(r))
        if self.n >= 1:
            return q ** c
        blocks = [len(list(grp)) for _, grp in itertools.groupby(nu)]
        num = _gl_count(q, r) * q ** c
        den = q ** (r * r)
        for b in blocks:
            num *= q ** (b * b)
            den *= _gl_count(q, b)
        assert num % den == 0
        return num // den

    def transversal(self, nu):
        """Representatives w of K^n / (K^n cap diag(pi^nu) K^n diag(pi^-nu)) modulo pi^N, N = n + spread."""
        nu = tuple(nu)
        if nu in self._transversal:
            return self._transversal[nu]
        r, n = self.r, self.n
        spread = nu[0] - nu[-1]
        N = n + spread
        if N == 0:
            self._transversal[nu] = (0, [()])
            return self._transversal[nu]
        D = digit_ring(self.field, N)
        need = [n + max(0, nu[i] - nu[j]) for i in range(r) for j in range(r)]
        base = [n] * (r * r)
        choices = []
        for idx in range(r * r):
            diag = idx // r == idx % r
            choices.append(_congruent(D, base[idx], diag))
        total = 1
        for c in choices:
            total *= len(c)
        self._charge(total, "left-coset transversal")
        group = [m for m in itertools.product(*choices) if n >= 1 or D.is_unit(mat_det(D, m, r))]
        hchoices = []
        for idx in range(r * r):
            diag = idx // r == idx % r
            hchoices.append(_congruent(D, need[idx], diag))
        H = [m for m in itertools.product(*hchoices) if n >= 1 or D.is_unit(mat_det(D, m, r))]
        seen = set()
        reps = []
        for w in group:
            if w in seen:
                continue
            reps.append(w)
            for h in H:
                seen.add(mat_mul(D, w, h, r))
        self._transversal[nu] = (N, reps)
        return self._transversal[nu]

    def representative(self, d: DoubleCoset, W: int) -> GrpElt:
        """k1 diag(pi^nu) k2 at precision W."""
        D, r = digit_ring(self.field, W), self.r
        nu = d.nu
        low = nu[-1]
        nab = diag_pi(D, [x - low for x in nu])
        if self.n == 0:
            return GrpElt(self.field, r, nab, -low, W)
        k1 = mat_lift(D, d.residue[0], self.n)
        k2 = mat_inv(D, mat_lift(D, d.residue[1], self.n), r)
        return GrpElt(self.field, r, mat_mul(D, mat_mul(D, k1, nab, r), k2, r), -low, W)

    def left_cosets(self, d: DoubleCoset, W: int | None = None) -> list:
        """Representatives x of the left cosets x K^n contained in K^n g K^n."""
        d = self.validate(d)
        if W is None:
            W = self.n + d.spread + 1
        D, r = digit_ring(self.field, W), self.r
        nu, low = d.nu, d.nu[-1]
        nab = diag_pi(D, [x - low for x in nu])
        N, reps = self.transversal(nu)
        if self.n == 0:
            k1 = k2 = mat_identity(D, r)
        else:
            k1 = mat_lift(D, d.residue[0], self.n)
            k2 = mat_inv(D, mat_lift(D, d.residue[1], self.n), r)
        out = []
        for w in reps:
            wl = mat_lift(D, w, N) if N else mat_identity(D, r)
            A = mat_mul(D, mat_mul(D, mat_mul(D, k1, wl, r), nab, r), k2, r)
            out.append(GrpElt(self.field, r, A, -low, W))
        return out

    # convolution ------------------------------------------------------------
    def basis_product(self, a: DoubleCoset, b: DoubleCoset) -> dict:
        """Structure constants of h_a * h_b as {DoubleCoset: int}."""
        a, b = self.validate(a), self.validate(b)
        key = (a, b)
        if key in self._products:
            return self._products[key]
        W = self.n + a.spread + b.spread + 1
        X = self.left_cosets(a, W)
        Y = self.left_cosets(b, W)
        self._charge(len(X) * len(Y), "convolution pairs")
        counts = Counter()
        for x in X:
            for y in Y:
                counts[self.double_coset(x * y)] += 1
        out = {}
        for d in sorted(counts):
            size = self.left_count(d)
            if counts[d] % size:
                raise ArithmeticError(f"count {counts[d]} for {d} not divisible by coset size {size}")
            out[d] = counts[d] // size
        self._products[key] = out
        return out

    def convolve(self, h1: HeckeElem, h2: HeckeElem) -> HeckeElem:
        if h1.level != self.n or h2.level != self.n:
            raise HeckeError(f"level mismatch: {h1.level}, {h2.level} vs algebra level {self.n}")
        out = Counter()
        for a, ca in h1.support:
            for b, cb in h2.support:
                for d, c in self.basis_product(a, b).items():
                    out[d] += ca * cb * c
        return HeckeElem.make(self.n, out)

    def basis(self, d: DoubleCoset, coeff: int = 1) -> HeckeElem:
        return HeckeElem.make(self.n, {self.validate(d): coeff})

    def unit(self) -> HeckeElem:
        return self.basis(self.nabla((0,) * self.r))

    def mass_check(self, a, b) -> bool:
        """sum_d c_d |d/K^n| = |a/K^n| |b/K^n|."""
        terms = self.basis_product(a, b)
        lhs = sum(c * self.left_count(d) for d, c in terms.items())
        return lhs == self.left_count(self.validate(a)) * self.left_count(self.validate(b))

    def inverse_coset(self, d: DoubleCoset) -> DoubleCoset:
        """Label of K^n g^(-1) K^n."""
        d = self.validate(d)
        W = self.n + d.spread + 1
        D, r = digit_ring(self.field, W), self.r
        nu = d.nu
        top = nu[0]
        nab = diag_pi(D, [top - x for x in nu])
        if self.n == 0:
            k1inv = k2 = mat_identity(D, r)
        else:
            k1inv = mat_inv(D, mat_lift(D, d.residue[0], self.n), r)
            k2 = mat_inv(D, mat_lift(D, d.residue[1], self.n), r)
        k2inv = mat_inv(D, k2, r)
        A = mat_mul(D, mat_mul(D, k2inv, nab, r), k1inv, r)
        return self.double_coset(GrpElt(self.field, r, A, top, W))

    def generating_set(self, bound: int = 1) -> list:
        """All double cosets with |nu_j| <= bound."""
        out = []
        for nu in dominant_box(self.r, bound):
            out.extend(self.double_cosets(nu))
        return out

    def random_k_n(self, rng, W):
        """A random element of K^n at precision W (an element of K when n = 0)."""
        D, r = digit_ring(self.field, W), self.r
        while True:
            m = []
            for i in range(r):
                for j in range(r):
                    x = D.mulpi(rng.randrange(D.size), self.n)
                    m.append(D.add(x, D.one) if i == j else x)
            m = tuple(m)
            if D.is_unit(mat_det(D, m, r)):
                return GrpElt(self.field, r, m, 0, W)


def _congruent(D: DigitRing, k, diag):
    """Digit integers x with x - (1 if diag else 0) divisible by pi^k (at least k >= 0)."""
    if k <= 0:
        return list(D.elements())
    if k >= D.W:
        return [D.one if diag else 0]
    step = D.q ** (D.W - k)
    vals = range(step)  # multiples of pi^k are the integers below q^(W-k)
    return [D.add(v, D.one) if diag else v for v in vals]


def dominant_box(r: int, bound: int):
    """Dominant nu with every |nu_j| <= bound, in lexicographic order."""
    out = []
    for nu in itertools.product(range(bound, -bound - 1, -1), repeat=r):
        if _dominant(nu):
            out.append(nu)
    return sorted(out)


def spherical_count_brute(field: FieldDesc, r: int, nu) -> int:
    """|K diag(pi^nu) K / K| by enumerating the transversal (independent of the formula)."""
    return len(HeckeAlgebra(field, r, 0).transversal(tuple(nu))[1])
