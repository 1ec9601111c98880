"""Truncated arithmetic in rings of integers of local fields.

A field is described by its residue field F_q and either an Eisenstein
polynomial over the unramified ring W(F_q) (mixed characteristic) or the
keyword "laurent" for F_q((t)).  Elements of O/pi^N are stored in a canonical
coordinate form:

* mixed characteristic: a polynomial in the uniformizer x of degree
  < min(e, N); the coefficient of x^i lives in W(F_q)/p^k_i with
  k_i = ceil((N - i) / e), and W(F_q)/p^k is (Z/p^k)[y]/(lifted residue poly);
* equal characteristic: a polynomial in t of degree < N over F_q.

Residue field elements are small ints 0..q-1 encoding sum c_i p^i, i.e. the
coefficient vector of a polynomial in y.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib


class FieldError(ValueError):
    """Invalid field data."""


class PrecisionError(ArithmeticError):
    """Raised when an operation needs more precision than is available."""


class NotUnitError(ArithmeticError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, low degree first)

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polyrem_p(a, b, p):
    a = [c % p for c in a]
    b = _trim([c % p for c in b])
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if c:
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - c * b[i]) % p
    return _trim(a[:db])


def is_irreducible(poly, p: int) -> bool:
    """Brute-force irreducibility test over F_p (factor search up to deg/2)."""
    poly = _trim([c % p for c in poly])
    d = len(poly) - 1
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            if not _polyrem_p(poly, list(tail) + [1], p):
                return False
    return True


# Conway-style defaults; every entry is checked by is_irreducible on use.
DEFAULT_POLYS = {
    (2, 2): [1, 1, 1],
    (2, 3): [1, 1, 0, 1],
    (2, 4): [1, 1, 0, 0, 1],
    (2, 5): [1, 0, 1, 0, 0, 1],
    (2, 6): [1, 1, 0, 0, 0, 0, 1],
    (3, 2): [1, 0, 1],
    (3, 3): [1, 2, 0, 1],
    (5, 2): [2, 0, 1],
    (7, 2): [1, 0, 1],
}


def default_poly(p: int, f: int):
    if f == 1:
        return [0, 1]
    try:
        return list(DEFAULT_POLYS[(p, f)])
    except KeyError:
        raise FieldError(f"no default defining polynomial for p={p}, f={f}")


# ---------------------------------------------------------------------------
# residue field

class ResidueField:
    """The finite field F_q = F_p[y]/(defining_poly)."""

    def __init__(self, p: int, f: int = 1, defining_poly=None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if f < 1:
            raise FieldError("f must be positive")
        poly = default_poly(p, f) if defining_poly is None else [int(c) % p for c in defining_poly]
        poly = _trim(poly)
        if len(poly) != f + 1 or poly[-1] != 1:
            raise FieldError(f"defining polynomial must be monic of degree {f}")
        if not is_irreducible(poly, p):
            raise FieldError(f"defining polynomial {poly} is reducible over F_{p}")
        self.p, self.f, self.q = p, f, p ** f
        self.poly = tuple(poly)
        q = self.q
        self._add = [self._slow_add(a, b) for a in range(q) for b in range(q)]
        self._mul = [self._slow_mul(a, b) for a in range(q) for b in range(q)]
        self._neg = [self._add.index(0, a * q, a * q + q) - a * q for a in range(q)]
        self._inv = [None] + [self._mul.index(1, a * q, a * q + q) - a * q for a in range(1, q)]

    # conversions
    def coeffs(self, a: int):
        p = self.p
        return tuple((a // p ** i) % p for i in range(self.f))

    def from_coeffs(self, cs) -> int:
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(cs))

    def _slow_add(self, a, b):
        return self.from_coeffs([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def _slow_mul(self, a, b):
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(ca):
            for j, y in enumerate(cb):
                prod[i + j] += x * y
        return self.from_coeffs(_polyrem_p(prod, self.poly, self.p) if len(prod) > self.f else prod)

    # arithmetic
    def add(self, a, b):
        return self._add[a * self.q + b]

    def sub(self, a, b):
        return self._add[a * self.q + self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a * self.q + b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return self._inv[a]

    def pow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def qth_root(self, a, j=1):
        """The unique q^j-th root; x -> x^q is the identity on F_q."""
        return a

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return isinstance(other, ResidueField) and (self.p, self.f, self.poly) == (other.p, other.f, other.poly)

    def __hash__(self):
        return hash((self.p, self.f, self.poly))

    def __repr__(self):
        return f"ResidueField(p={self.p}, f={self.f}, poly={list(self.poly)})"


# ---------------------------------------------------------------------------
# W(F_q)/p^k: tuples of f integers, polynomial in y modulo the lifted poly

def _w_mul(a, b, mod, poly):
    f = len(poly) - 1
    if f == 1:
        return ((a[0] * b[0]) % mod,)
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(2 * f - 2, f - 1, -1):
        c = prod[d]
        if c:
            for i in range(f):
                prod[d - f + i] -= c * poly[i]
    return tuple(x % mod for x in prod[:f])


def _w_add(a, b, mod):
    return tuple((x + y) % mod for x, y in zip(a, b))


def _w_sub(a, b, mod):
    return tuple((x - y) % mod for x, y in zip(a, b))


def _w_val(a, p):
    """p-adic valuation of a W-element (None for zero)."""
    v = None
    for x in a:
        if x:
            k = 0
            while x % p == 0:
                x //= p
                k += 1
            v = k if v is None else min(v, k)
    return v


class FieldDesc:
    """A nonarchimedean local field, described by residue field and ramification data.

    ``eisenstein`` is a list of e+1 coefficients (low degree first, monic); each
    coefficient is an element of W(F_q) given as an int or a list of ints (a
    polynomial in y of degree < f).
    """

    def __init__(self, residue: ResidueField, eisenstein=None, name: str = ""):
        self.residue = residue
        self.p, self.f, self.q = residue.p, residue.f, residue.q
        self.name = name
        if eisenstein is None or eisenstein == "laurent":
            self.kind = "laurent"
            self.eisenstein = None
            self.e = math.inf
        else:
            self.kind = "mixed"
            coeffs = [self._w_from(c) for c in eisenstein]
            while len(coeffs) > 1 and not any(coeffs[-1]):
                coeffs.pop()
            if len(coeffs) < 2 or coeffs[-1] != (1,) + (0,) * (self.f - 1):
                raise FieldError("Eisenstein polynomial must be monic of degree >= 1")
            p = self.p
            for i, c in enumerate(coeffs[:-1]):
                v = _w_val(c, p)
                if v is not None and v < 1:
                    raise FieldError(f"coefficient {i} of the Eisenstein polynomial is not divisible by {p}")
            if _w_val(coeffs[0], p) != 1:
                raise FieldError(f"constant term of the Eisenstein polynomial is divisible by {p}^2")
            self.eisenstein = tuple(coeffs[:-1])
            self.e = len(coeffs) - 1
        self.lift_poly = residue.poly  # lift with coefficients in [0, p)

    def _w_from(self, c):
        if isinstance(c, int):
            c = [c]
        c = [int(x) for x in c]
        if len(c) > self.f:
            raise FieldError(f"unramified coefficient {c} has more than f={self.f} entries")
        return tuple(c + [0] * (self.f - len(c)))

    @property
    def is_mixed(self):
        return self.kind == "mixed"

    def key(self):
        return (self.residue.p, self.residue.f, self.residue.poly, self.kind, self.eisenstein)

    def __eq__(self, other):
        return isinstance(other, FieldDesc) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.name:
            return f"FieldDesc({self.name})"
        return f"FieldDesc(p={self.p}, f={self.f}, kind={self.kind}, e={self.e})"

    def ring(self, N: int) -> "TruncRing":
        return _ring(self, N)

    def describe(self) -> dict:
        d = {"p": self.p, "f": self.f, "defining_poly": list(self.residue.poly), "kind": self.kind}
        if self.is_mixed:
            d["eisenstein"] = [list(c) for c in self.eisenstein] + [[1] + [0] * (self.f - 1)]
            d["e"] = self.e
        return d


def make_field(p: int, f: int = 1, defining_poly=None, eisenstein="laurent", name: str = "") -> FieldDesc:
    """Validated field descriptor; ``eisenstein="laurent"`` gives F_q((t))."""
    return FieldDesc(ResidueField(p, f, defining_poly), eisenstein, name=name)


@lru_cache(maxsize=None)
def _ring(field, N):
    return TruncRing(field, N)


# ---------------------------------------------------------------------------
# O / pi^N

class TruncRing:
    """The finite ring O/pi^N.  Elements are handled as canonical reps (tuples);
    the TruncElem wrapper adds operators."""

    def __init__(self, field: FieldDesc, N: int):
        if N < 0:
            raise ValueError("precision must be nonnegative")
        self.field, self.N = field, N
        self.F = field.residue
        self.q = field.q
        if field.is_mixed:
            e = field.e
            self.D = min(e, N)
            self.mods = [field.p ** -(-(N - i) // e) for i in range(self.D)]
            self.M = self.mods[0] if self.D else 1
            self._wzero = (0,) * field.f
            self.zero = (self._wzero,) * self.D
            self.one = self._reduce([(1,) + (0,) * (field.f - 1)]) if N else self.zero
        else:
            self.D = N
            self.zero = (0,) * N
            self.one = (1,) + (0,) * (N - 1) if N else ()
        if field.is_mixed and field.f == 1:
            self._eis1 = [c[0] for c in field.eisenstein]
        self.pi = self._make_pi()
        self._teich = {}
        self._pipow = {}

    # -- construction ------------------------------------------------------
    def _reduce(self, coeffs):
        """Canonical form of a list of W-coefficients of powers of x (mixed case)."""
        f = self.field
        e, N, M = f.e, self.N, self.M
        c = list(coeffs)
        poly = f.lift_poly
        for k in range(len(c) - 1, e - 1, -1):
            if k >= N:
                continue
            ck = c[k]
            if any(ck):
                for i in range(e):
                    t = _w_mul(ck, f.eisenstein[i], M, poly)
                    c[k - e + i] = _w_sub(c[k - e + i], t, M)
                c[k] = self._wzero
        out = []
        for i in range(self.D):
            if i < len(c):
                m = self.mods[i]
                out.append(tuple(x % m for x in c[i]))
            else:
                out.append(self._wzero)
        return tuple(out)

    def _make_pi(self):
        if self.N == 0:
            return self.zero
        if self.field.is_mixed:
            return self._reduce([self._wzero, (1,) + (0,) * (self.field.f - 1)])
        return self.from_coeff_list([0, 1])

    def from_int(self, n: int):
        if self.field.is_mixed:
            return self._reduce([(n,) + (0,) * (self.field.f - 1)]) if self.N else self.zero
        return self.from_coeff_list([n % self.field.p])

    def from_coeff_list(self, cs):
        """Equal characteristic: F_q coefficients of t^i; mixed: W-coefficients of x^i."""
        if self.field.is_mixed:
            return self._reduce([self.field._w_from(c) for c in cs])
        out = [0] * self.N
        for i, c in enumerate(cs[: self.N]):
            out[i] = c % self.q if isinstance(c, int) else self.F.from_coeffs(c)
        return tuple(out)

    def elem(self, rep) -> "TruncElem":
        return TruncElem(self, rep)

    # -- arithmetic on reps -------------------------------------------------
    def add(self, a, b):
        if self.field.is_mixed:
            return tuple(tuple((x + y) % m for x, y in zip(u, v)) for u, v, m in zip(a, b, self.mods))
        F = self.F
        return tuple(F._add[x * F.q + y] for x, y in zip(a, b))

    def neg(self, a):
        if self.field.is_mixed:
            return tuple(tuple((-x) % m for x in u) for u, m in zip(a, self.mods))
        neg = self.F._neg
        return tuple(neg[x] for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        N = self.N
        if self.field.is_mixed:
            D, M, poly = self.D, self.M, self.field.lift_poly
            if self.field.f == 1:
                return self._mul_f1(a, b)
            prod = [self._wzero] * (2 * D - 1) if D else []
            for i, u in enumerate(a):
                if not any(u):
                    continue
                for j, v in enumerate(b):
                    if i + j >= N or not any(v):
                        continue
                    prod[i + j] = _w_add(prod[i + j], _w_mul(u, v, M, poly), M)
            return self._reduce(prod)
        F = self.F
        q, tab = F.q, F._mul
        out = [0] * N
        addt = F._add
        for i, x in enumerate(a):
            if x:
                row = x * q
                for j in range(N - i):
                    y = b[j]
                    if y:
                        out[i + j] = addt[out[i + j] * q + tab[row + y]]
        return tuple(out)

    def _mul_f1(self, a, b):
        """Mixed-characteristic product when W(F_q) = Z_p: plain integer convolution."""
        N, D, M, e = self.N, self.D, self.M, self.field.e
        prod = [0] * (2 * D - 1)
        for i, (u,) in enumerate(a):
            if u:
                for j in range(min(D, N - i)):
                    v = b[j][0]
                    if v:
                        prod[i + j] += u * v
        eis = self._eis1
        for k in range(min(len(prod), N) - 1, e - 1, -1):
            ck = prod[k] % M
            if ck:
                for i in range(e):
                    prod[k - e + i] -= ck * eis[i]
        return tuple((prod[i] % m,) for i, m in enumerate(self.mods))

    def pow(self, a, k: int):
        r = None
        while k:
            if k & 1:
                r = a if r is None else self.mul(r, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return self.one if r is None else r

    def val(self, a) -> int:
        """Valuation, capped at N."""
        if self.field.is_mixed:
            e, p = self.field.e, self.field.p
            best = self.N
            for i, u in enumerate(a):
                v = _w_val(u, p)
                if v is not None:
                    best = min(best, e * v + i)
            return best
        for i, x in enumerate(a):
            if x:
                return i
        return self.N

    def is_unit(self, a) -> bool:
        return self.val(a) == 0

    def residue(self, a) -> int:
        """Image in F_q."""
        if self.N == 0:
            return 0
        if self.field.is_mixed:
            return self.F.from_coeffs(a[0])
        return a[0]

    def inv(self, a):
        if not self.is_unit(a):
            raise NotUnitError("element is not a unit")
        if self.N == 0:
            return self.zero
        x = self.teich(self.F.inv(self.residue(a)))
        two = self.from_int(2)
        prec = 1
        while prec < self.N:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        assert self.mul(a, x) == self.one
        return x

    def lift_from(self, a, other: "TruncRing"):
        """Reinterpret canonical coordinates of a lower-precision ring here (a set-theoretic lift)."""
        if other.N > self.N:
            raise PrecisionError("cannot lift to a lower precision")
        if self.field.is_mixed:
            return tuple(a) + (self._wzero,) * (self.D - other.D)
        return tuple(a) + (0,) * (self.N - other.N)

    def reduce_from(self, a, other: "TruncRing"):
        """Canonical surjection from a higher-precision ring onto this one."""
        if other.N < self.N:
            raise PrecisionError("cannot reduce to a higher precision")
        if self.field.is_mixed:
            return self._reduce(list(a[: self.D]))
        return tuple(a[: self.N])

    def divpi(self, a, j: int = 1):
        """Exact division by pi^j; the result lives in O/pi^(N-j)."""
        if j == 0:
            return a
        if self.val(a) < j:
            raise PrecisionError(f"element is not divisible by pi^{j}")
        if not self.field.is_mixed:
            return tuple(a[j:])
        if self.field.e == 1 and self.field.f == 1:
            return ((a[0][0] // self.field.p ** j,),) if self.N > j else ()
        R, x = self, a
        for _ in range(j):
            x = R._divpi1(x)
            R = self.field.ring(R.N - 1)
        return x

    def _divpi1(self, a):
        field = self.field
        target = field.ring(self.N - 1)
        if not field.is_mixed:
            return tuple(a[1:])
        e, p, M = field.e, field.p, self.M
        poly = field.lift_poly
        c = [self._wzero] * e
        for i in range(1, self.D):
            c[i - 1] = a[i]
        a0 = a[0]
        if any(a0):
            eis = field.eisenstein
            u0 = tuple(x // p for x in eis[0])
            u0inv = _w_inv(u0, M, poly, p)
            top = _w_mul(tuple(x // p for x in a0), u0inv, M, poly)
            c[e - 1] = _w_sub(c[e - 1], top, M)
            for i in range(1, e):
                ci = tuple(x // p for x in eis[i])
                t = _w_mul(_w_mul(a0, ci, M, poly), u0inv, M, poly)
                c[i - 1] = _w_sub(c[i - 1], t, M)
        return target._reduce(c)

    def mulpi(self, a, j: int = 1):
        """Multiply by pi^j."""
        if j == 0:
            return a
        if j >= self.N:
            return self.zero
        if not self.field.is_mixed:
            return (0,) * j + tuple(a[: self.N - j])
        return self.mul(a, self.pi_power(j))

    def pi_power(self, j: int):
        try:
            return self._pipow[j]
        except KeyError:
            r = self.pow(self.pi, j)
            self._pipow[j] = r
            return r

    # -- Teichmueller digits ------------------------------------------------
    def teich(self, c: int):
        """Teichmueller lift of c in F_q (fixed point of x -> x^q)."""
        try:
            return self._teich[c]
        except KeyError:
            pass
        if self.field.is_mixed:
            x = self._reduce([self.F.coeffs(c)]) if self.N else self.zero
            for _ in range(self.N + 1):
                y = self.pow(x, self.q)
                if y == x:
                    break
                x = y
            else:  # pragma: no cover - would contradict the contraction property
                raise ArithmeticError("Teichmueller iteration did not stabilize")
        else:
            x = self.from_coeff_list([c])
        self._teich[c] = x
        return x

    def digits(self, a):
        """Teichmueller digits (c_0..c_{N-1}) with a = sum [c_j] pi^j."""
        out = []
        R, x = self, a
        while R.N > 0:
            c = R.residue(x)
            out.append(c)
            x = R.sub(x, R.teich(c))
            x = R._divpi1(x)
            R = self.field.ring(R.N - 1)
        return out

    def from_digits(self, ds):
        ds = list(ds)
        if len(ds) != self.N:
            raise ValueError(f"expected {self.N} digits, got {len(ds)}")
        acc = self.zero
        for c in reversed(ds):
            acc = self.add(self.mul(acc, self.pi), self.teich(c))
        return acc

    def elements(self):
        """All elements in digit-lexicographic order."""
        for ds in itertools.product(range(self.q), repeat=self.N):
            yield self.from_digits(ds)

    def size(self):
        return self.q ** self.N

    def __repr__(self):
        return f"TruncRing({self.field!r}, N={self.N})"


def _w_inv(u, M, poly, p):
    """Inverse of a unit of W(F_q)/M by Newton iteration."""
    f = len(poly) - 1
    F = None
    if f == 1:
        return (pow(u[0], -1, M),)
    # residue inverse by brute force in F_q, then Newton
    F = ResidueField(p, f, poly)
    r = F.from_coeffs([x % p for x in u])
    x = F.coeffs(F.inv(r))
    two = (2,) + (0,) * (f - 1)
    prec = 1
    while p ** prec < M:
        x = _w_mul(x, _w_sub(two, _w_mul(u, x, M, poly), M), M, poly)
        prec *= 2
    x = _w_mul(x, _w_sub(two, _w_mul(u, x, M, poly), M), M, poly)
    return x


class TruncElem:
    """An element of O/pi^N with operators."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring: TruncRing, rep):
        self.ring = ring
        self.rep = rep

    @classmethod
    def of(cls, field: FieldDesc, N: int, value) -> "TruncElem":
        R = field.ring(N)
        if isinstance(value, int):
            return cls(R, R.from_int(value))
        return cls(R, R.from_coeff_list(value))

    @classmethod
    def pi(cls, field, N):
        R = field.ring(N)
        return cls(R, R.pi)

    @classmethod
    def from_digits(cls, field, ds):
        R = field.ring(len(ds))
        return cls(R, R.from_digits(ds))

    @property
    def field(self):
        return self.ring.field

    @property
    def precision(self):
        return self.ring.N

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.from_int(other)
        if not isinstance(other, TruncElem):
            return NotImplemented
        if other.ring is not self.ring:
            raise ValueError("operands live in different rings (field or precision mismatch)")
        return other.rep

    def __add__(self, other):
        b = self._check(other)
        return b if b is NotImplemented else TruncElem(self.ring, self.ring.add(self.rep, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._check(other)
        return b if b is NotImplemented else TruncElem(self.ring, self.ring.sub(self.rep, b))

    def __rsub__(self, other):
        b = self._check(other)
        return b if b is NotImplemented else TruncElem(self.ring, self.ring.sub(b, self.rep))

    def __mul__(self, other):
        b = self._check(other)
        return b if b is NotImplemented else TruncElem(self.ring, self.ring.mul(self.rep, b))

    __rmul__ = __mul__

    def __neg__(self):
        return TruncElem(self.ring, self.ring.neg(self.rep))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return TruncElem(self.ring, self.ring.pow(self.rep, k))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.rep == self.ring.from_int(other)
        return isinstance(other, TruncElem) and other.ring is self.ring and other.rep == self.rep

    def __hash__(self):
        return hash((self.ring.field, self.ring.N, self.rep))

    def inverse(self):
        return TruncElem(self.ring, self.ring.inv(self.rep))

    def val(self):
        return self.ring.val(self.rep)

    def is_unit(self):
        return self.ring.is_unit(self.rep)

    def reduce(self, N2: int) -> "TruncElem":
        R2 = self.field.ring(N2)
        return TruncElem(R2, R2.reduce_from(self.rep, self.ring))

    def lift(self, N2: int) -> "TruncElem":
        R2 = self.field.ring(N2)
        return TruncElem(R2, R2.lift_from(self.rep, self.ring))

    def divide_by_pi(self, j: int = 1) -> "TruncElem":
        R2 = self.field.ring(self.ring.N - j)
        return TruncElem(R2, self.ring.divpi(self.rep, j))

    def digits(self):
        return self.ring.digits(self.rep)

    def residue(self):
        return self.ring.residue(self.rep)

    def __repr__(self):
        return f"TruncElem(digits={self.digits()}, N={self.precision})"


def teichmuller(field: FieldDesc, N: int, c: int) -> TruncElem:
    R = field.ring(N)
    return TruncElem(R, R.teich(c))


# ---------------------------------------------------------------------------
# close fields

class CloseFieldIso:
    """The digit-transport isomorphism O_E/pi^n -> F_q[t]/t^n (valid when e >= n)."""

    def __init__(self, E: FieldDesc, n: int, target: FieldDesc | None = None):
        if E.is_mixed and E.e < n:
            raise FieldError(f"close-field isomorphism needs e >= n, but e = {E.e} < n = {n}")
        if target is None:
            target = make_field(E.p, E.f, E.residue.poly, "laurent", name=f"F{E.q}((t))")
        if target.residue != E.residue:
            raise FieldError("residue fields differ")
        if target.is_mixed and target.e < n:
            raise FieldError(f"close-field isomorphism needs e >= n, but e = {target.e} < n = {n}")
        self.source, self.target, self.n = E, target, n
        self.R, self.S = E.ring(n), target.ring(n)

    def __call__(self, a: TruncElem) -> TruncElem:
        if a.ring is not self.R:
            raise ValueError("element not in the source ring")
        return TruncElem(self.S, self.S.from_digits(a.digits()))

    def inverse(self, b: TruncElem) -> TruncElem:
        if b.ring is not self.S:
            raise ValueError("element not in the target ring")
        return TruncElem(self.R, self.R.from_digits(b.digits()))

    def verify(self, exhaustive_limit: int = 512, samples: int = 2000, seed: int = 0) -> bool:
        """Check that the map is a ring isomorphism (all pairs when the ring is small)."""
        import random

        R, S = self.R, self.S
        if R.size() <= exhaustive_limit:
            elems = list(R.elements())
            image = {a: S.from_digits(R.digits(a)) for a in elems}
            if len(set(image.values())) != len(elems):
                return False
            pairs = itertools.product(elems, repeat=2)
        else:
            rng = random.Random(seed)
            image = {}

            def rand():
                return R.from_digits([rng.randrange(R.q) for _ in range(R.N)])

            pairs = [(rand(), rand()) for _ in range(samples)]

        def phi(a):
            if a not in image:
                image[a] = S.from_digits(R.digits(a))
            return image[a]

        for a, b in pairs:
            if phi(R.add(a, b)) != S.add(phi(a), phi(b)):
                return False
            if phi(R.mul(a, b)) != S.mul(phi(a), phi(b)):
                return False
        if self.n and phi(R.pi) != S.pi:
            return False
        return all(phi(R.teich(c)) == S.teich(c) for c in range(R.q))


def close_field_iso(E: FieldDesc, n: int, target: FieldDesc | None = None) -> CloseFieldIso:
    return CloseFieldIso(E, n, target)


def _berkowitz(mat, add, sub, mul, zero, one):
    """Characteristic polynomial det(X - A) by the division-free Berkowitz algorithm.

    Returns coefficients low degree first (monic)."""
    n = len(mat)
    # vectors of polynomial coefficients, high degree first, as in the usual presentation
    C = [one, sub(zero, mat[0][0])]
    for r in range(1, n):
        # A = [[a, R], [S, M]] with a = mat[r][r], M the leading r x r block
        Mblk = [row[:r] for row in mat[:r]]
        Rrow = mat[r][:r]
        Scol = [mat[i][r] for i in range(r)]
        a = mat[r][r]
        # Toeplitz column: 1, -a, -R S, -R M S, ..., -R M^{r-1} S
        col = [one, sub(zero, a)]
        v = Scol
        for _ in range(r):
            s = zero
            for x, y in zip(Rrow, v):
                s = add(s, mul(x, y))
            col.append(sub(zero, s))
            v = [_dot(row, v, add, mul, zero) for row in Mblk]
        newC = []
        for i in range(r + 2):
            s = zero
            for j in range(len(C)):
                k = i - j
                if 0 <= k < len(col):
                    s = add(s, mul(col[k], C[j]))
            newC.append(s)
        C = newC
    return list(reversed(C))


def _dot(row, v, add, mul, zero):
    s = zero
    for x, y in zip(row, v):
        s = add(s, mul(x, y))
    return s


def spread_extension(f_inf, E: FieldDesc, n: int, name: str = "") -> FieldDesc:
    """Spread a totally ramified extension of F_q((t)) to a mixed characteristic E.

    ``f_inf`` lists a_{0,inf}..a_{r-1,inf}, the coefficients of
    T^r + t (a_{r-1} T^{r-1} + ... + a_0); each a_j is a list of F_q digits
    (coefficients of t^i, low degree first).  The a_j are lifted to O_E through
    the inverse of the close-field isomorphism mod pi^n, and the returned field
    is E(rho) with rho a root of T^r + pi (a_{r-1} T^{r-1} + ... + a_0),
    presented by the Eisenstein minimal polynomial of rho over W(F_q).
    """
    if not E.is_mixed:
        raise FieldError("spread_extension needs a mixed characteristic base")
    if E.e < n:
        raise FieldError(f"spreading needs e >= n, but e = {E.e} < n = {n}")
    if n < 1:
        raise FieldError("spreading needs n >= 1")
    coeffs = relative_lift(f_inf, E, n)
    r = len(coeffs)
    if coeffs[0].residue() == 0:
        raise FieldError("a_0 must be a unit for the polynomial to be Eisenstein")
    e, fdeg, p = E.e, E.f, E.p
    # O_E[T]/(T^r + pi * A(T)) is free over W with basis x^i T^j; build mult-by-T
    # exact integer coordinates of pi * a_j as polynomials in x of degree < e
    pi_a = [_exact_reduce(E, [(0,) * fdeg] + list(c.rep)) for c in coeffs]
    dim = e * r
    zero = (0,) * fdeg
    one = (1,) + (0,) * (fdeg - 1)
    mat = [[zero] * dim for _ in range(dim)]
    # basis index i + e*j  <->  x^i T^j ; column = image of basis vector under T
    for j in range(r):
        for i in range(e):
            col = i + e * j
            if j + 1 < r:
                mat[i + e * (j + 1)][col] = one
            else:
                # x^i T^r = - x^i * sum_k pi a_k T^k
                for k in range(r):
                    prod = _exact_reduce(E, [(0,) * fdeg] * i + pi_a[k])
                    for ii, w in enumerate(prod):
                        mat[ii + e * k][col] = tuple(-x for x in w)

    poly = E.lift_poly

    def wmul(a, b):
        return _w_mul_exact(a, b, poly)

    def wadd(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def wsub(a, b):
        return tuple(x - y for x, y in zip(a, b))

    cp = _berkowitz(mat, wadd, wsub, wmul, zero, one)
    return FieldDesc(E.residue, [list(c) for c in cp], name=name)


def relative_lift(f_inf, E: FieldDesc, n: int):
    """Lift the coefficient digit lists of f_inf to O_E/pi^n via digit transport."""
    R = E.ring(n)
    out = []
    for a in f_inf:
        ds = list(a)[:n] + [0] * max(0, n - len(a))
        out.append(TruncElem(R, R.from_digits(ds)))
    return out


def _w_mul_exact(a, b, poly):
    f = len(poly) - 1
    if f == 1:
        return (a[0] * b[0],)
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    for d in range(2 * f - 2, f - 1, -1):
        c = prod[d]
        if c:
            for i in range(f):
                prod[d - f + i] -= c * poly[i]
    return tuple(prod[:f])


def _exact_reduce(E, coeffs):
    """Reduce an exact polynomial in x (W-coefficients) modulo the Eisenstein polynomial."""
    e, poly = E.e, E.lift_poly
    c = list(coeffs)
    f = E.f
    for k in range(len(c) - 1, e - 1, -1):
        ck = c[k]
        if any(ck):
            for i in range(e):
                t = _w_mul_exact(ck, E.eisenstein[i], poly)
                c[k - e + i] = tuple(x - y for x, y in zip(c[k - e + i], t))
    c = c[:e] + [(0,) * f] * (e - len(c))
    return c


# ---------------------------------------------------------------------------
# descriptor files

BUILTIN_FIELDS = {
    "Q2": dict(p=2, f=1, kind="mixed", eisenstein=[-2, 1]),
    "Q3": dict(p=3, f=1, kind="mixed", eisenstein=[-3, 1]),
    "Q5": dict(p=5, f=1, kind="mixed", eisenstein=[-5, 1]),
    "Q2_sqrt2": dict(p=2, f=1, kind="mixed", eisenstein=[-2, 0, 1]),
    "Q2_root4_2": dict(p=2, f=1, kind="mixed", eisenstein=[-2, 0, 0, 0, 1]),
    "Q3_sqrt3": dict(p=3, f=1, kind="mixed", eisenstein=[-3, 0, 1]),
    "Q4": dict(p=2, f=2, kind="mixed", eisenstein=[[-2], [1]]),
    "Q4_sqrt2": dict(p=2, f=2, kind="mixed", eisenstein=[[-2], [0], [1]]),
    "F2t": dict(p=2, f=1, kind="laurent"),
    "F3t": dict(p=3, f=1, kind="laurent"),
    "F4t": dict(p=2, f=2, kind="laurent"),
}


def field_from_dict(d: dict, name: str = "") -> FieldDesc:
    try:
        p = int(d["p"])
    except KeyError:
        raise FieldError("field descriptor needs key 'p'")
    f = int(d.get("f", 1))
    kind = d.get("kind", "mixed" if "eisenstein" in d else "laurent")
    poly = d.get("defining_poly")
    if kind == "laurent":
        return make_field(p, f, poly, "laurent", name=name)
    if kind != "mixed":
        raise FieldError(f"unknown field kind {kind!r}")
    if "eisenstein" not in d:
        raise FieldError("mixed characteristic descriptor needs 'eisenstein'")
    return make_field(p, f, poly, d["eisenstein"], name=name)


def load_field(spec: str) -> FieldDesc:
    """Load a field from a builtin name or a TOML/JSON descriptor file."""
    import json
    import os

    if spec in BUILTIN_FIELDS:
        return field_from_dict(BUILTIN_FIELDS[spec], name=spec)
    if not os.path.exists(spec):
        raise FileNotFoundError(f"no such field descriptor: {spec}")
    with open(spec, "rb") as fh:
        raw = fh.read()
    if spec.endswith(".json"):
        d = json.loads(raw.decode())
    else:
        d = tomllib.loads(raw.decode())
    return field_from_dict(d, name=os.path.splitext(os.path.basename(spec))[0])
