"""Lubin-Tate formal groups at joint (pi-adic, degree) precision.

Coefficients are "floating" local numbers pi^v * u with u a unit known modulo
pi^r, or zeros known modulo pi^A.  Every operation tracks absolute precision,
and converting a series to integral coefficients modulo pi^M raises
PrecisionError rather than guessing when the available precision is too low.

The canonical pair is log(X) = sum_r X^(q^r) / pi^r with exp its compositional
inverse, f_pi = exp(pi log X), F(X, Y) = exp(log X + log Y) and
[a](X) = exp(a log X).  A classical polynomial f = pi X + X^q gives an
independent source for the torsion tower.
"""

from __future__ import annotations

from .localfield import FieldDesc, PrecisionError, TruncElem

EXACT = 1 << 40  # absolute precision of an exact zero


class IntegralityError(ArithmeticError):
    """A series expected to be integral has a coefficient of negative valuation."""


class FloorError(ArithmeticError):
    """A coefficient fell below the declared valuation floor."""


class WeierstrassError(ArithmeticError):
    """Weierstrass preparation failed (the series is not distinguished)."""


# ---------------------------------------------------------------------------
# floating local numbers

class LN:
    """pi^v * u with u a unit of O/pi^r; ``u is None`` means a zero known mod pi^v."""

    __slots__ = ("v", "u", "r")

    def __init__(self, v, u=None, r=0):
        self.v, self.u, self.r = v, u, r

    def is_zero(self):
        return self.u is None

    def abs_prec(self):
        return self.v if self.u is None else self.v + self.r

    def __eq__(self, other):
        return isinstance(other, LN) and (self.v, self.u, self.r) == (other.v, other.u, other.r)

    def __repr__(self):
        if self.u is None:
            return f"O(pi^{self.v})"
        return f"pi^{self.v}*{self.u}[+O(pi^{self.r})]"


class LocalArith:
    """Arithmetic of LN values over a fixed field with relative precision cap ``prec``."""

    def __init__(self, field: FieldDesc, prec: int):
        self.field, self.prec = field, prec

    def ring(self, N):
        return self.field.ring(N)

    def zero(self, A=EXACT):
        return LN(A)

    def from_rep(self, rep, N):
        """Element of O/pi^N as an LN with absolute precision N."""
        R = self.ring(N)
        w = R.val(rep)
        if w >= N:
            return LN(N)
        u = R.divpi(rep, w)
        return LN(w, u, N - w)

    def from_trunc(self, a: TruncElem):
        return self.from_rep(a.rep, a.precision)

    def from_int(self, n: int):
        if n == 0 or (not self.field.is_mixed and n % self.field.p == 0):
            return LN(EXACT)
        e = 1 if not self.field.is_mixed else self.field.e
        extra = 0
        m = abs(n)
        while m % self.field.p == 0 and self.field.is_mixed:
            m //= self.field.p
            extra += e
        N = self.prec + extra
        x = self.from_rep(self.ring(N).from_int(n), N)
        return x

    def pi_pow(self, k: int):
        return LN(k, self.ring(self.prec).one, self.prec)

    def one(self):
        return self.pi_pow(0)

    def _unit_to(self, x, r):
        """x.u reduced to relative precision r <= x.r."""
        if r == x.r:
            return x.u
        return self.ring(r).reduce_from(x.u, self.ring(x.r))

    def mul(self, x, y):
        if x.u is None or y.u is None:
            if x.u is None and y.u is None:
                return LN(x.v + y.v) if x.v < EXACT and y.v < EXACT else LN(EXACT)
            z, o = (x, y) if x.u is None else (y, x)
            if z.v >= EXACT:
                return LN(EXACT)
            return LN(z.v + o.v)
        r = min(x.r, y.r)
        if r <= 0:
            return LN(x.v + y.v)
        R = self.ring(r)
        return LN(x.v + y.v, R.mul(self._unit_to(x, r), self._unit_to(y, r)), r)

    def neg(self, x):
        if x.u is None:
            return x
        return LN(x.v, self.ring(x.r).neg(x.u), x.r)

    def add(self, x, y):
        if x.u is None:
            if y.u is None:
                return LN(min(x.v, y.v))
            return self._absorb(y, x.v)
        if y.u is None:
            return self._absorb(x, y.v)
        A = min(x.v + x.r, y.v + y.r)
        v = min(x.v, y.v)
        N = A - v
        if N <= 0:
            return LN(A)
        R = self.ring(N)
        a = self._scaled(x, x.v - v, N)
        b = self._scaled(y, y.v - v, N)
        s = R.add(a, b)
        w = R.val(s)
        if w >= N:
            return LN(A)
        return LN(v + w, R.divpi(s, w), N - w)

    def _absorb(self, x, A):
        """x + O(pi^A)."""
        if A >= x.v + x.r:
            return x
        if A <= x.v:
            return LN(A)
        r = A - x.v
        return LN(x.v, self._unit_to(x, r), r)

    def _scaled(self, x, shift, N):
        """pi^shift * x.u as an element of O/pi^N (requires N - shift <= x.r)."""
        R = self.ring(N)
        if shift >= N:
            return R.zero
        inner = self.ring(N - shift)
        u = inner.reduce_from(x.u, self.ring(x.r))
        return R.mulpi(R.lift_from(u, inner), shift)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def inv(self, x):
        if x.u is None:
            raise ZeroDivisionError("inverse of a zero local number")
        return LN(-x.v, self.ring(x.r).inv(x.u), x.r)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def to_rep(self, x, M):
        """Integral reduction modulo pi^M."""
        if x.abs_prec() < M:
            raise PrecisionError(f"coefficient known only modulo pi^{x.abs_prec()}, need pi^{M}")
        R = self.ring(M)
        if x.u is None:
            return R.zero
        if x.v < 0:
            raise IntegralityError(f"coefficient has valuation {x.v} < 0")
        if x.v >= M:
            return R.zero
        return self._scaled(x, x.v, M)

    def is_zero_mod(self, x, M) -> bool:
        if x.u is None:
            if x.v < M:
                raise PrecisionError(f"zero known only modulo pi^{x.v}, need pi^{M}")
            return True
        if x.v >= M:
            return True
        if x.abs_prec() < M:
            raise PrecisionError(f"coefficient known only modulo pi^{x.abs_prec()}, need pi^{M}")
        return False

    def val(self, x):
        return x.v


# ---------------------------------------------------------------------------
# truncated power series in one or two variables

class TruncSeries:
    """Power series in ``nvars`` variables truncated above total degree D.

    ``coeffs`` maps exponent tuples to LN values (inexact zeros are kept so
    that their precision is tracked per coefficient); ``zp`` is the absolute
    precision of every coefficient not listed."""

    __slots__ = ("A", "nvars", "D", "coeffs", "zp")

    def __init__(self, arith: LocalArith, nvars: int, D: int, coeffs=None, zp=EXACT):
        self.A, self.nvars, self.D = arith, nvars, D
        self.coeffs = {}
        self.zp = zp
        for k, c in (coeffs or {}).items():
            if sum(k) > D or (c.u is None and c.v >= EXACT):
                continue
            self.coeffs[k] = c

    # constructors
    @classmethod
    def variable(cls, arith, nvars, D, i=0):
        e = [0] * nvars
        e[i] = 1
        return cls(arith, nvars, D, {tuple(e): arith.one()})

    @classmethod
    def from_int_coeffs(cls, arith, D, coeffs: dict, nvars=1):
        out = {}
        for k, c in coeffs.items():
            key = (k,) if isinstance(k, int) else tuple(k)
            out[key] = arith.from_int(c)
        return cls(arith, nvars, D, out)

    def copy_with(self, coeffs, zp):
        return TruncSeries(self.A, self.nvars, self.D, coeffs, zp)

    def coeff(self, k):
        if isinstance(k, int):
            k = (k,)
        return self.coeffs.get(tuple(k), LN(self.zp))

    def min_val(self):
        return min((c.v for c in self.coeffs.values()), default=self.zp)

    def add(self, other):
        A = self.A
        out = dict(self.coeffs)
        zp = min(self.zp, other.zp)
        for k, c in other.coeffs.items():
            out[k] = A.add(out[k], c) if k in out else c
        return self.copy_with(out, zp)

    def neg(self):
        A = self.A
        return self.copy_with({k: A.neg(c) for k, c in self.coeffs.items()}, self.zp)

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, c: LN):
        A = self.A
        zp = self.zp + c.v if self.zp < EXACT else EXACT
        if c.u is None:
            return self.copy_with({}, min(zp, c.v + self.min_val()))
        return self.copy_with({k: A.mul(v, c) for k, v in self.coeffs.items()}, zp)

    def mul(self, other):
        A, D = self.A, self.D
        out = {}
        items_b = sorted(other.coeffs.items(), key=lambda kv: sum(kv[0]))
        degs_b = [sum(k) for k, _ in items_b]
        for ka, ca in self.coeffs.items():
            da = sum(ka)
            for (kb, cb), db in zip(items_b, degs_b):
                if da + db > D:
                    break
                k = tuple(x + y for x, y in zip(ka, kb))
                p = A.mul(ca, cb)
                out[k] = A.add(out[k], p) if k in out else p
        zp = EXACT
        if self.zp < EXACT:
            zp = min(zp, self.zp + other.min_val())
        if other.zp < EXACT:
            zp = min(zp, other.zp + self.min_val())
        return self.copy_with(out, zp)

    def pow(self, k):
        result = TruncSeries(self.A, self.nvars, self.D, {(0,) * self.nvars: self.A.one()})
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return result

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """self(inner) for a one-variable self and inner without constant term."""
        if self.nvars != 1:
            raise ValueError("outer series must have one variable")
        if (0,) * inner.nvars in inner.coeffs:
            raise ValueError("inner series must have zero constant term")
        D = min(self.D, inner.D)
        acc = TruncSeries(self.A, inner.nvars, D, {}, EXACT)
        zero_k = (0,) * inner.nvars
        for k in range(D, 0, -1):
            c = self.coeffs.get((k,))
            if c is not None:
                acc = acc.add(TruncSeries(self.A, inner.nvars, D, {zero_k: c}))
            elif self.zp < EXACT:
                acc = acc.add(TruncSeries(self.A, inner.nvars, D, {}, self.zp))
            acc = acc.mul(inner)
        if (0,) in self.coeffs:
            acc = acc.add(TruncSeries(self.A, inner.nvars, D, {zero_k: self.coeffs[(0,)]}))
        return acc

    def substitute(self, values: list) -> "TruncSeries":
        """Substitute one-variable series (or None for zero) for each variable."""
        A = self.A
        nv = 1
        acc = TruncSeries(A, nv, self.D, {}, self.zp)
        powers = []
        for v in values:
            powers.append({0: TruncSeries(A, nv, self.D, {(0,): A.one()})})
        for k, c in self.coeffs.items():
            term = TruncSeries(A, nv, self.D, {(0,): c})
            zero = False
            for i, e in enumerate(k):
                if e == 0:
                    continue
                if values[i] is None:
                    zero = True
                    break
                if e not in powers[i]:
                    powers[i][e] = values[i].pow(e)
                term = term.mul(powers[i][e])
            if not zero:
                acc = acc.add(term)
        return acc

    def reduce_integral(self, M: int) -> dict:
        """Coefficients modulo pi^M as canonical reps (raises if not integral)."""
        A = self.A
        if self.zp < M:
            raise PrecisionError(f"omitted coefficients known only modulo pi^{self.zp}, need pi^{M}")
        R = A.ring(M)
        out = {}
        for k, c in sorted(self.coeffs.items()):
            rep = A.to_rep(c, M)
            if rep != R.zero:
                out[k] = rep
        return out

    def equal_mod(self, other, M: int) -> bool:
        diff = self.sub(other)
        if diff.zp < M:
            raise PrecisionError(f"comparison needs precision pi^{M}, have pi^{diff.zp}")
        return all(self.A.is_zero_mod(c, M) for c in diff.coeffs.values())

    def check_floor(self, v_floor):
        for k, c in self.coeffs.items():
            if c.v < v_floor:
                raise FloorError(f"coefficient of {k} has valuation {c.v} below the floor {v_floor}")
        return self

    def as_digits(self, M=None):
        """JSON-friendly view: monomial -> (valuation, unit digits) or digits mod pi^M."""
        out = {}
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            name = _mono_name(k)
            if M is None and c.u is None:
                out[name] = {"zero_mod_pi": c.v}
            elif M is None:
                out[name] = {"val": c.v, "unit_digits": self.A.ring(c.r).digits(c.u)}
            else:
                rep = self.A.to_rep(c, M)
                if rep != self.A.ring(M).zero:
                    out[name] = self.A.ring(M).digits(rep)
        return out


def _mono_name(k):
    names = ["X", "Y", "Z"]
    parts = []
    for n, e in zip(names, k):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# canonical Lubin-Tate data

class LubinTate:
    """Canonical logarithm, exponential, f_pi, [a] and group law for a field."""

    def __init__(self, field: FieldDesc, D: int, M: int = 4, prec: int | None = None, v_floor: int | None = None):
        self.field, self.D, self.M = field, D, M
        self.q = field.q
        self.prec = prec if prec is not None else M + 2 * D + 4
        self.v_floor = v_floor if v_floor is not None else -D
        self.A = LocalArith(field, self.prec)
        self._cache = {}

    def X(self, nvars=1, i=0):
        return TruncSeries.variable(self.A, nvars, self.D, i)

    def log(self, nvars=1, i=0) -> TruncSeries:
        key = ("log", nvars, i)
        if key not in self._cache:
            A, q = self.A, self.q
            coeffs = {}
            r = 0
            while q ** r <= self.D:
                e = [0] * nvars
                e[i] = q ** r
                coeffs[tuple(e)] = A.inv(A.pi_pow(r))
                r += 1
            self._cache[key] = TruncSeries(A, nvars, self.D, coeffs).check_floor(self.v_floor)
        return self._cache[key]

    def exp(self) -> TruncSeries:
        if "exp" not in self._cache:
            self._cache["exp"] = compositional_inverse(self.log()).check_floor(self.v_floor)
        return self._cache["exp"]

    def scalar(self, a):
        """Accepts an int, a TruncElem, an LN, or the string "pi"."""
        A = self.A
        if isinstance(a, LN):
            return a
        if isinstance(a, str) and a == "pi":
            return A.pi_pow(1)
        if isinstance(a, TruncElem):
            return A.from_trunc(a)
        return A.from_int(int(a))

    def mult(self, a) -> TruncSeries:
        """[a](X) = exp(a log X); integrality is asserted."""
        c = self.scalar(a)
        key = ("mult", c.v, c.u, c.r)
        if key not in self._cache:
            s = self.exp().compose(self.log().scale(c))
            s.reduce_integral(self.M)
            self._cache[key] = s
        return self._cache[key]

    def f_pi(self) -> TruncSeries:
        return self.mult("pi")

    def group_law(self) -> TruncSeries:
        if "F" not in self._cache:
            inner = self.log(2, 0).add(self.log(2, 1))
            F = self.exp().compose(inner)
            F.reduce_integral(self.M)
            self._cache["F"] = F.check_floor(0)
        return self._cache["F"]

    # identities -------------------------------------------------------------
    def check_log_f(self) -> bool:
        """log(f_pi(X)) = pi log X."""
        lhs = self.log().compose(self.f_pi())
        rhs = self.log().scale(self.A.pi_pow(1))
        return lhs.equal_mod(rhs, self.M)

    def check_exp_log(self) -> bool:
        X = self.X()
        return self.exp().compose(self.log()).equal_mod(X, self.M) and self.log().compose(self.exp()).equal_mod(X, self.M)

    def check_f_pi(self) -> dict:
        f = self.f_pi().reduce_integral(self.M)
        R = self.field.ring(self.M)
        mod_pi = {k: R.residue(v) for k, v in f.items() if R.residue(v)}
        lin = f.get((1,), R.zero)
        return {
            "integral": True,
            "congruent_to_X^q": mod_pi == {(self.q,): 1},
            "linear_term_is_pi": lin == R.pi,
        }

    def integral_group_law(self):
        """F reduced modulo pi^M as a dict (i, j) -> rep."""
        return self.group_law().reduce_integral(self.M)

    def check_group_law(self) -> dict:
        F = self.integral_group_law()
        R = self.field.ring(self.M)
        D = self.D
        unit = {k: v for k, v in F.items() if k[1] == 0} == {(1, 0): R.one}
        comm = all(F.get((j, i)) == v for (i, j), v in F.items())
        assoc = associativity_check(F, R, D)
        return {"unit": unit, "commutative": comm, "associative": assoc}

    def check_mult_composition(self, scalars=(1, -1, "pi")) -> dict:
        """[a]([b](X)) = [ab](X) for all pairs of scalars."""
        out = {}
        A = self.A
        for a in scalars:
            for b in scalars:
                ca, cb = self.scalar(a), self.scalar(b)
                lhs = self.mult(a).compose(self.mult(b))
                rhs = self.mult(A.mul(ca, cb))
                out[(str(a), str(b))] = lhs.equal_mod(rhs, self.M)
        return out

    def check_inverse(self) -> bool:
        """F(X, [-1](X)) = 0."""
        F = self.group_law()
        s = F.substitute([self.X(), self.mult(-1)])
        zero = TruncSeries(self.A, 1, self.D, {})
        return s.equal_mod(zero, self.M)

    def check_additivity(self, a, b) -> bool:
        """[a+b](X) = F([a](X), [b](X))."""
        A = self.A
        F = self.group_law()
        lhs = F.substitute([self.mult(a), self.mult(b)])
        rhs = self.mult(A.add(self.scalar(a), self.scalar(b)))
        return lhs.equal_mod(rhs, self.M)


def compositional_inverse(s: TruncSeries) -> TruncSeries:
    """Inverse of a one-variable series X + (higher terms) by fixed-point iteration."""
    A = s.A
    one = s.coeff(1)
    if one.u is None or one.v != 0 or one.u != A.ring(one.r).one:
        raise ValueError("series must have linear coefficient 1")
    X = TruncSeries.variable(A, 1, s.D)
    rest = s.sub(X)  # higher terms
    E = X
    for _ in range(s.D + 1):
        new = X.sub(rest.compose(E))
        if new.coeffs == E.coeffs and new.zp == E.zp:
            break
        E = new
    return E


def associativity_check(F: dict, R, D: int) -> bool:
    """F(F(X,Y),Z) = F(X,F(Y,Z)) modulo (pi^M, degree > D) for an integral
    two-variable series F given as (i, j) -> rep."""

    def pmul(a, b):
        out = {}
        for ka, va in a.items():
            da = sum(ka)
            for kb, vb in b.items():
                if da + sum(kb) > D:
                    continue
                k = tuple(x + y for x, y in zip(ka, kb))
                p = R.mul(va, vb)
                out[k] = R.add(out[k], p) if k in out else p
        return {k: v for k, v in out.items() if v != R.zero}

    def padd(a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = R.add(out[k], v) if k in out else v
        return {k: v for k, v in out.items() if v != R.zero}

    def embed(poly, idx):
        out = {}
        for (i, j), v in poly.items():
            e = [0, 0, 0]
            e[idx[0]] += i
            e[idx[1]] += j
            out[tuple(e)] = v
        return out

    def outer(inner, left_first):
        # sum_{i,j} c_ij inner^i W^j  (left_first) or  W^i inner^j
        maxdeg = D
        powers = [{(0, 0, 0): R.one}]
        for _ in range(maxdeg):
            powers.append(pmul(powers[-1], inner))
        acc = {}
        for (i, j), c in F.items():
            if left_first:
                base = powers[i]
                shift = (0, 0, j)
            else:
                base = powers[j]
                shift = (i, 0, 0)
            term = {}
            for k, v in base.items():
                kk = tuple(x + y for x, y in zip(k, shift))
                if sum(kk) <= D:
                    term[kk] = R.mul(v, c)
            acc = padd(acc, term)
        return acc

    left = outer(embed(F, (0, 1)), True)  # F(F(X,Y), Z)
    right = outer(embed(F, (1, 2)), False)  # F(X, F(Y,Z))
    return left == right


# ---------------------------------------------------------------------------
# classical Lubin-Tate series (polynomial) and commuting endomorphisms

class ClassicalLT:
    """A polynomial Lubin-Tate series f (default pi X + X^q) with exact coefficients."""

    def __init__(self, field: FieldDesc, D: int, M: int = 4, coeffs=None, prec=None):
        self.field, self.D, self.M, self.q = field, D, M, field.q
        self.prec = prec if prec is not None else M + 2 * D + 4
        self.A = LocalArith(field, self.prec)
        A = self.A
        if coeffs is None:
            coeffs = {1: A.pi_pow(1), field.q: A.one()}
        else:
            coeffs = {k: (v if isinstance(v, LN) else A.from_int(v)) for k, v in coeffs.items()}
        self.f = TruncSeries(A, 1, D, {(k,): v for k, v in coeffs.items()})
        self._check_lt()
        self._cache = {}

    def _check_lt(self):
        A, M = self.A, self.M
        lin = self.f.coeff(1)
        if lin.u is None or lin.v != 1:
            raise ValueError("f must have linear term pi times a unit")
        red = {k: self.field.ring(1).residue(A.to_rep(c, 1)) for k, c in self.f.coeffs.items() if c.v == 0}
        if {k: v for k, v in red.items() if v} != {(self.q,): 1}:
            raise ValueError("f must be congruent to X^q modulo pi")
        _ = M

    def integral_f(self):
        return self.f.reduce_integral(self.M)

    def mult(self, a) -> TruncSeries:
        """[a]: the unique series a X + ... commuting with f."""
        A = self.A
        c = a if isinstance(a, LN) else (A.pi_pow(1) if a == "pi" else A.from_int(int(a)))
        key = (c.v, c.u, c.r)
        if key not in self._cache:
            self._cache[key] = commuting_series(self.f, self.f, c)
        return self._cache[key]

    def log(self) -> TruncSeries:
        """log_f with log_f(f(X)) = pi log_f(X) and linear coefficient 1."""
        if "log" not in self._cache:
            piX = TruncSeries(self.A, 1, self.D, {(1,): self.A.pi_pow(1)})
            self._cache["log"] = commuting_series(piX, self.f, self.A.one())
        return self._cache["log"]


def commuting_series(Aser: TruncSeries, Bser: TruncSeries, a: LN) -> TruncSeries:
    """The series phi = a X + ... with Aser(phi) = phi(Bser), where both
    Aser and Bser have linear coefficient pi."""
    A = Aser.A
    D = Aser.D
    a1 = Aser.coeff(1)
    b1 = Bser.coeff(1)
    higherA = {k[0]: c for k, c in Aser.coeffs.items() if k[0] >= 2}
    # powers of B
    Bpow = [None, Bser]
    for _ in range(2, D + 1):
        Bpow.append(Bpow[-1].mul(Bser))
    phi = {(1,): a}
    for k in range(2, D + 1):
        cur = TruncSeries(A, 1, D, dict(phi))
        rhs = LN(EXACT)
        for j, cj in phi.items():
            rhs = A.add(rhs, A.mul(cj, Bpow[j[0]].coeff(k)))
        lhs_rest = LN(EXACT)
        for i, ci in higherA.items():
            lhs_rest = A.add(lhs_rest, A.mul(ci, cur.pow(i).coeff(k)))
        num = A.sub(rhs, lhs_rest)
        den = A.sub(a1, _ln_pow(A, b1, k))
        c = A.div(num, den) if num.u is not None else LN(num.v - den.v)
        phi[(k,)] = c
    return TruncSeries(A, 1, D, phi)


def _ln_pow(A, x, k):
    r = A.one()
    for _ in range(k):
        r = A.mul(r, x)
    return r


# ---------------------------------------------------------------------------
# tower rings

class BaseStage:
    """O/pi^M as stage 0 of a tower."""

    depth = 0

    def __init__(self, field: FieldDesc, M: int):
        self.field, self.M = field, M
        self.R = field.ring(M)
        self.zero, self.one = self.R.zero, self.R.one
        self.e = 1  # ramification over O

    def add(self, a, b):
        return self.R.add(a, b)

    def sub(self, a, b):
        return self.R.sub(a, b)

    def neg(self, a):
        return self.R.neg(a)

    def mul(self, a, b):
        return self.R.mul(a, b)

    def from_base(self, rep):
        return rep

    def is_unit(self, a):
        return self.R.is_unit(a)

    def inv(self, a):
        return self.R.inv(a)

    def val(self, a):
        """Normalized valuation (capped at M)."""
        return self.R.val(a)

    def cap(self):
        return self.M

    def flat(self, a):
        return {(): a} if a != self.zero else {}

    def min_pi_val(self, a):
        return self.R.val(a)


class Stage:
    """parent[t]/(h) for a monic h of degree d over the parent whose
    lower coefficients lie in the maximal ideal."""

    def __init__(self, parent, h):
        self.parent = parent
        self.depth = parent.depth + 1
        self.h = list(h)
        self.d = len(h) - 1
        if self.h[-1] != parent.one:
            raise ValueError("modulus must be monic")
        self.e = parent.e * self.d
        self.zero = (parent.zero,) * self.d
        self.one = (parent.one,) + (parent.zero,) * (self.d - 1)
        self.field, self.M = parent.field, parent.M

    def from_parent(self, a):
        return (a,) + (self.parent.zero,) * (self.d - 1)

    def from_base(self, rep):
        return self.from_parent(self.parent.from_base(rep))

    def gen(self):
        if self.d >= 2:
            return (self.parent.zero, self.parent.one) + (self.parent.zero,) * (self.d - 2)
        return (self.parent.neg(self.h[0]),)

    def add(self, a, b):
        P = self.parent
        return tuple(P.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        P = self.parent
        return tuple(P.neg(x) for x in a)

    def sub(self, a, b):
        P = self.parent
        return tuple(P.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        P, d = self.parent, self.d
        prod = [P.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == P.zero:
                continue
            for j, y in enumerate(b):
                if y == P.zero:
                    continue
                prod[i + j] = P.add(prod[i + j], P.mul(x, y))
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c != P.zero:
                for i in range(d):
                    prod[k - d + i] = P.sub(prod[k - d + i], P.mul(c, self.h[i]))
                prod[k] = P.zero
        return tuple(prod[:d])

    def is_unit(self, a):
        return self.parent.is_unit(a[0])

    def inv(self, a):
        if not self.is_unit(a):
            raise ArithmeticError("not a unit in the tower stage")
        y = self.from_parent(self.parent.inv(a[0]))
        two = self.add(self.one, self.one)
        for _ in range(64):
            nxt = self.mul(y, self.sub(two, self.mul(a, y)))
            if nxt == y:
                return y
            y = nxt
        raise ArithmeticError("inverse iteration did not stabilize")

    def cap(self):
        return self.parent.cap() * self.d

    def val(self, a):
        """Normalized valuation in this stage (t has valuation 1), capped."""
        best = self.cap()
        for i, x in enumerate(a):
            if x != self.parent.zero:
                best = min(best, self.d * self.parent.val(x) + i)
        return best

    def flat(self, a):
        out = {}
        for i, x in enumerate(a):
            for k, v in self.parent.flat(x).items():
                out[k + (i,)] = v
        return out

    def min_pi_val(self, a):
        R = self.field.ring(self.M)
        return min((R.val(v) for v in self.flat(a).values()), default=self.M)

    def pow(self, a, k):
        r = self.one
        while k:
            if k & 1:
                r = self.mul(r, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return r


def _series_mul(S, a, b, L):
    out = [S.zero] * (L + 1)
    for i, x in enumerate(a):
        if x == S.zero:
            continue
        for j in range(min(len(b), L + 1 - i)):
            y = b[j]
            if y != S.zero:
                out[i + j] = S.add(out[i + j], S.mul(x, y))
    return out


def _series_inv(S, a, L):
    c0inv = S.inv(a[0])
    out = [c0inv]
    for k in range(1, L + 1):
        s = S.zero
        for i in range(1, min(k, len(a) - 1) + 1):
            s = S.add(s, S.mul(a[i], out[k - i]))
        out.append(S.neg(S.mul(c0inv, s)))
    return out


def weierstrass(S, F: list, L: int | None = None):
    """Weierstrass preparation F = u * h over the local ring S (a tower stage).

    F is a list of S-elements (coefficients of X^k, k <= L).  Returns the monic
    distinguished polynomial h (coefficient list) and the unit series u."""
    L = len(F) - 1 if L is None else L
    F = list(F) + [S.zero] * (L + 1 - len(F))
    d = next((k for k, c in enumerate(F) if S.is_unit(c)), None)
    if d is None:
        raise WeierstrassError("series is not distinguished: no unit coefficient")
    P = F[:d]
    Qinv = _series_inv(S, F[d:], L)
    G = [S.zero] * d + [S.one] + [S.zero] * (L - d)
    Asum = [S.zero] * (L + 1)
    Rm = [S.zero] * d
    for _ in range(64 * (L + 2)):
        if all(g == S.zero for g in G):
            break
        lo, hi = G[:d], G[d:]
        Rm = [S.add(x, y) for x, y in zip(Rm, lo)]
        T = _series_mul(S, hi, Qinv, L - d)
        Asum = [S.add(x, y) for x, y in zip(Asum, T + [S.zero] * (L + 1 - len(T)))]
        G = [S.neg(x) for x in _series_mul(S, T, P, L)]
    else:
        raise WeierstrassError("Weierstrass iteration did not terminate")
    h = [S.neg(x) for x in Rm] + [S.one]
    u = _series_inv(S, Asum, L)
    return h, u


def eval_poly(S, coeffs, x):
    """Horner evaluation of a polynomial with S-coefficients at x in S."""
    acc = S.zero
    for c in reversed(coeffs):
        acc = S.add(S.mul(acc, x), c)
    return acc


class TorsionTower:
    """Torsion polynomials and the tower O/pi^M[t_1]/(h_1)[t_2]/(h_2)... for an
    integral Lubin-Tate series f given modulo pi^M.

    g_j (over O, degree q^(j-1)(q-1)) is the Weierstrass factor of
    f_{pi^j} / f_{pi^(j-1)} = (f/X) o f_{pi^(j-1)}; h_1 = g_1 and h_{j+1}
    (over stage j, degree q) is the Weierstrass factor of f - t_j."""

    def __init__(self, field: FieldDesc, f: dict, n: int, M: int, D: int):
        self.field, self.n, self.M, self.q = field, n, M, field.q
        self.base = BaseStage(field, M)
        B = self.base
        self.D = D
        fl = [B.zero] * (D + 1)
        for k, v in f.items():
            kk = k[0] if isinstance(k, tuple) else k
            if kk <= D:
                fl[kk] = v
        self.f = fl
        e_top = self.q ** (n - 1) * (self.q - 1) if n else 1
        self.needed_degree = M * e_top - 1
        # torsion polynomials over O
        self.g = []
        fj = [B.zero, B.one] + [B.zero] * (D - 1)  # f_{pi^0} = X
        f_over_X = fl[1:] + [B.zero]
        for j in range(1, n + 1):
            series = _compose_base(B, f_over_X, fj, D)
            h, _ = weierstrass(B, series)
            self.g.append(h)
            fj = _compose_base(B, fl, fj, D)
        # the tower
        self.stages = [B]
        self.h = []
        self.gens = []
        for j in range(1, n + 1):
            S = self.stages[-1]
            if j == 1:
                h = self.g[0]
            else:
                F = [S.from_base(c) for c in fl]
                F[0] = S.sub(F[0], self.gens[-1])
                h, _ = weierstrass(S, F)
            self.h.append(h)
            new = Stage(S, h)
            self.stages.append(new)
            self.gens = [new.from_parent(t) for t in self.gens] + [new.gen()]
        self.top = self.stages[-1]

    def t(self, j):
        """t_j in the top stage."""
        return self.gens[j - 1]

    def f_at(self, x):
        S = self.top
        return eval_poly(S, [S.from_base(c) for c in self.f], x)

    def base_poly_at(self, poly, x):
        S = self.top
        return eval_poly(S, [S.from_base(c) for c in poly], x)

    def degrees(self):
        return [len(g) - 1 for g in self.g]

    def torsion_count(self):
        return 1 + sum(self.degrees())

    def check(self) -> dict:
        """Tower identities: f(t_1) = 0, f(t_{j+1}) = t_j, g_j(t_j) = 0,
        Eisenstein shapes and the torsion count q^n."""
        S, q, n = self.top, self.q, self.n
        rep = {"n": n, "q": q}
        if n and self.D < self.needed_degree:
            raise PrecisionError(
                f"series degree {self.D} too small to evaluate at t_{n}; need {self.needed_degree}")
        ok = True
        if n:
            ok &= self.f_at(self.t(1)) == S.zero
        for j in range(1, n):
            ok &= self.f_at(self.t(j + 1)) == self.t(j)
        rep["f_relations"] = bool(ok)
        rep["g_roots"] = all(self.base_poly_at(g, self.t(j + 1)) == S.zero for j, g in enumerate(self.g))
        rep["g_degrees"] = self.degrees()
        rep["g_degrees_ok"] = self.degrees() == [q ** (j - 1) * (q - 1) for j in range(1, n + 1)]
        rep["g_eisenstein"] = all(_eisenstein(self.base, g) for g in self.g)
        rep["h_degrees"] = [len(h) - 1 for h in self.h]
        rep["h_eisenstein"] = all(_eisenstein(self.stages[j], h) for j, h in enumerate(self.h))
        rep["torsion_count"] = self.torsion_count()
        rep["torsion_count_ok"] = self.torsion_count() == q ** n
        rep["ok"] = all(rep[k] for k in ("f_relations", "g_roots", "g_degrees_ok", "g_eisenstein",
                                         "h_eisenstein", "torsion_count_ok"))
        return rep

    def limit_check(self) -> dict:
        """t_{j+1}^(q^(j+1)) = t_j^(q^j) modulo pi^(j+1) for j < n."""
        S, q = self.top, self.q
        results = []
        for j in range(1, self.n):
            diff = S.sub(S.pow(self.t(j + 1), q ** (j + 1)), S.pow(self.t(j), q ** j))
            v = S.min_pi_val(diff)
            results.append({"j": j, "pi_valuation": v, "ok": v >= j + 1})
        return {"checks": results, "ok": all(r["ok"] for r in results)}

    def unit_action(self, u_series: dict, u: TruncElem | int) -> dict:
        """[u](t_n) is again a root of g_n; and [u](t_n) = t_n iff u = 1 mod pi^n."""
        S, n = self.top, self.n
        ser = [self.base.zero] * (self.D + 1)
        for k, v in u_series.items():
            kk = k[0] if isinstance(k, tuple) else k
            if kk <= self.D:
                ser[kk] = v
        image = eval_poly(S, [S.from_base(c) for c in ser], self.t(n))
        root = self.base_poly_at(self.g[n - 1], image) == S.zero
        R = self.field.ring(self.M)
        uu = R.from_int(u) if isinstance(u, int) else R.reduce_from(u.rep, u.ring)
        if not R.is_unit(uu):
            raise ValueError("u must be a unit")
        trivial = R.val(R.sub(uu, R.one)) >= n
        fixed = image == self.t(n)
        return {"root_of_g_n": root, "u_is_1_mod_pi^n": trivial, "fixes_t_n": fixed,
                "ok": root and (trivial == fixed), "image": image}


def _eisenstein(S, h):
    if any(S.is_unit(c) for c in h[:-1]):
        return False
    return S.val(h[0]) == 1


def _compose_base(B, outer, inner, D):
    """outer(inner) over the base ring, truncated at degree D (inner(0) = 0)."""
    acc = [B.zero] * (D + 1)
    for c in reversed(outer):
        acc = _series_mul(B, acc, inner, D)
        acc[0] = B.add(acc[0], c)
    return acc


def torsion_tower(field: FieldDesc, n: int, M: int = 4, D: int | None = None, classical=True, lt=None):
    """Build the torsion tower for the classical f = pi X + X^q (default) or the
    canonical f_pi of a LubinTate context."""
    q = field.q
    e_top = q ** (n - 1) * (q - 1) if n else 1
    if D is None:
        D = max(M * e_top, q ** n)
    if classical:
        R = field.ring(M)
        f = {(1,): R.pi, (q,): R.one}
    else:
        lt = lt or LubinTate(field, D, M)
        f = lt.f_pi().reduce_integral(M)
    return TorsionTower(field, f, n, M, D)
