"""Polynomials over a small finite field, places, and rational functions.

A polynomial is a tuple of field-element indices, low degree first, with no
trailing zero.  The zero polynomial is the empty tuple and its degree is the
sentinel -1 (never used in arithmetic).  A PolyRing bundles the coefficient
field with a variable name ("t" for the scalar ring A, "s" for the base of
purely inseparable covers).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .fields import SmallField, FieldSpec, field_of, extension_field

ZERO_DEG = -1


class PolyRing:
    def __init__(self, field: SmallField, var: str = "t"):
        self.field = field
        self.var = var
        self.zero = ()
        self.one = (1,)
        self.gen = (0, 1)

    def __repr__(self):
        return f"PolyRing(order={self.field.order}, var={self.var!r})"

    # -- basic arithmetic ----------------------------------------------------

    def normalize(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    def degree(self, a):
        return len(a) - 1 if a else ZERO_DEG

    def add(self, a, b):
        F = self.field
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return self.normalize(out)

    def neg(self, a):
        F = self.field
        return tuple(F.neg(c) for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, c, a):
        F = self.field
        if c == 0:
            return ()
        return self.normalize(F.mul(c, x) for x in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        F = self.field
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            row = F.exp_table
            lx = F.log_table[x]
            n1 = F.order - 1
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], row[(lx + F.log_table[y]) % n1])
        return self.normalize(out)

    def pow(self, a, e):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        a = list(a)
        db, lb = len(b) - 1, b[-1]
        inv_lb = F.inv(lb)
        if len(a) - 1 < db:
            return (), tuple(a)
        q = [0] * (len(a) - db)
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k]
            if c == 0:
                continue
            f = F.mul(c, inv_lb)
            q[k - db] = f
            for j in range(db + 1):
                if b[j]:
                    a[k - db + j] = F.sub(a[k - db + j], F.mul(f, b[j]))
        return self.normalize(q), self.normalize(a)

    def mod(self, a, b):
        return self.divmod(a, b)[1]

    def gcd(self, a, b):
        while b:
            a, b = b, self.mod(a, b)
        return self.monic(a) if a else ()

    def monic(self, a):
        if not a:
            return ()
        lc = a[-1]
        if lc == 1:
            return tuple(a)
        return self.scale(self.field.inv(lc), a)

    def powmod(self, a, e, m):
        r = self.one
        a = self.mod(a, m)
        while e:
            if e & 1:
                r = self.mod(self.mul(r, a), m)
            a = self.mod(self.mul(a, a), m)
            e >>= 1
        return r

    def evaluate(self, a, x, ops=None):
        """Evaluate at x; ops defaults to the coefficient field (Horner)."""
        F = ops or self.field
        acc = 0
        for c in reversed(a):
            acc = F.add(F.mul(acc, x) if acc else 0, c)
        return acc

    def from_int_coeffs(self, coeffs):
        return self.normalize(int(c) % self.field.order if self.field.base is None
                              else int(c) for c in coeffs)

    # -- irreducibility and factorization -------------------------------------

    def is_irreducible(self, a):
        """Exact test: x^{q^d} == x mod a and x^{q^{d/l}} - x coprime to a for
        every prime l | d."""
        d = self.degree(a)
        if d <= 0:
            return False
        if d == 1:
            return True
        q = self.field.order
        x = self.gen
        xq = self.powmod(x, q ** d, a)
        if self.mod(self.sub(xq, x), a):
            return False
        for l in _prime_divisors(d):
            e = d // l
            g = self.sub(self.powmod(x, q ** e, a), x)
            if self.degree(self.gcd(g, a)) > 0:
                return False
        return True

    def monics_of_degree(self, d):
        """All monic polynomials of degree d, ascending lex on (c_0..c_{d-1})."""
        q = self.field.order
        for tail in itertools.product(range(q), repeat=d):
            yield tail + (1,)

    def irreducibles_of_degree(self, d):
        """Monic irreducibles of degree d, sorted ascending lex low-to-high."""
        return [f for f in self.monics_of_degree(d) if self.is_irreducible(f)]

    def irreducibles_up_to(self, dmax):
        out = []
        for d in range(1, dmax + 1):
            out.extend(self.irreducibles_of_degree(d))
        return out

    def factor(self, a):
        """Multiset factorization {monic irreducible: multiplicity} by trial
        division over enumerated irreducibles (desk scale, degree <= 12)."""
        if not a:
            raise ZeroDivisionError("cannot factor the zero polynomial")
        lc = a[-1]
        a = self.monic(a)
        out = {}
        d = 1
        while self.degree(a) > 0:
            if 2 * d > self.degree(a):
                out[a] = out.get(a, 0) + 1
                break
            for p in self.irreducibles_of_degree(d):
                while True:
                    q, r = self.divmod(a, p)
                    if r:
                        break
                    out[p] = out.get(p, 0) + 1
                    a = q
            d += 1
        return lc, out

    def squarefree_part(self, a):
        """Product of the distinct monic irreducible factors."""
        _, fac = self.factor(a)
        out = self.one
        for p in fac:
            out = self.mul(out, p)
        return out

    def roots(self, a, ops=None, domain=None):
        """Roots (with multiplicity) of a in a finite domain, by scanning.

        ops/domain default to the coefficient field; domain must be iterable
        of element indices."""
        F = ops or self.field
        dom = domain if domain is not None else range(F.order)
        out = []
        for x in dom:
            if self.evaluate(a, x, ops=F) == 0:
                m = 1
                b = self.divmod(a, (F.neg(x), 1))[0]
                while True:
                    q, r = self.divmod(b, (F.neg(x), 1))
                    if r:
                        break
                    m += 1
                    b = q
                out.append((x, m))
        return out

    def format(self, a):
        """ASCII form like t^2+t+1 (descending); indices as coefficients."""
        if not a:
            return "0"
        parts = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}{self.var}" + (f"^{i}" if i > 1 else ""))
        return "+".join(parts)

    def parse(self, text):
        """Parse c0+c1*t+... or compact forms like t^2+t+1.

        Grammar: poly := term ("+" term)*; term := coeff | coeff "*" var_pow
                 | var_pow; var_pow := VAR ("^" INT)?; coeff := INT (an
                 element index in [0, q)).  Whitespace is ignored.
        """
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty polynomial")
        if text == "0":
            return ()
        coeffs = {}
        for term in text.split("+"):
            if not term:
                raise ValueError(f"malformed polynomial {text!r}")
            c, e = 1, 0
            if "*" in term:
                cs, vs = term.split("*", 1)
                c = int(cs)
                e = self._parse_varpow(vs)
            elif term.startswith(self.var):
                e = self._parse_varpow(term)
            else:
                c = int(term)
            if not 0 <= c < self.field.order:
                raise ValueError(f"coefficient {c} out of range")
            coeffs[e] = self.field.add(coeffs.get(e, 0), c)
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return self.normalize(out)

    def _parse_varpow(self, text):
        if text == self.var:
            return 1
        if not text.startswith(self.var + "^"):
            raise ValueError(f"malformed term {text!r}")
        e = int(text[len(self.var) + 1:])
        if e < 0:
            raise ValueError("negative exponent")
        return e


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# places and residue fields


class Place:
    """A place of the rational function field: Finite(monic irreducible) or
    Infinite.  Finite places carry the defining polynomial of their ring."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring: PolyRing, poly=None):
        self.ring = ring
        self.poly = None if poly is None else tuple(poly)
        if self.poly is not None:
            if self.poly[-1] != 1 or not ring.is_irreducible(self.poly):
                raise ValueError("finite place needs a monic irreducible")

    @property
    def is_finite(self):
        return self.poly is not None

    @property
    def degree(self):
        return 1 if self.poly is None else len(self.poly) - 1

    @property
    def residue_order(self):
        if self.poly is None:
            raise ValueError("infinite place has no residue polynomial here")
        return self.ring.field.order ** self.degree

    def __eq__(self, other):
        return (isinstance(other, Place) and self.poly == other.poly
                and self.ring.var == other.ring.var
                and self.ring.field is other.ring.field)

    def __hash__(self):
        return hash((self.ring.var, id(self.ring.field), self.poly))

    def __repr__(self):
        if self.poly is None:
            return "Place(infinity)"
        return f"Place({self.ring.format(self.poly)})"

    def to_json(self):
        if self.poly is None:
            return "infinity"
        return {"finite": [list(_index_digits(self.ring.field, c)) for c in self.poly]}


def _index_digits(field, idx):
    """Vector encoding of a field element index over the prime field."""
    if field.base is None:
        return (idx,)
    return field.element_digits(idx)


class ResidueField:
    """F_pi = A/(pi) for a finite place pi, with the reduction map."""

    def __init__(self, place: Place):
        if not place.is_finite:
            raise ValueError("residue field of the infinite place is not supported")
        self.place = place
        self.ring = place.ring
        if place.degree == 1:
            self.field = place.ring.field
            self._root = place.ring.field.neg(place.poly[0])
        else:
            self.field = extension_field(place.ring.field, place.poly)
            self._root = self.field.element_from_digits(
                (0, 1) + (0,) * (place.degree - 2))

    @property
    def order(self):
        return self.place.residue_order

    def reduce_poly(self, a):
        """Image of a polynomial in the residue field."""
        rem = self.ring.mod(a, self.place.poly)
        if self.place.degree == 1:
            return self.ring.evaluate(rem, self._root)
        digits = list(rem) + [0] * (self.place.degree - len(rem))
        return self.field.element_from_digits(digits)

    def reduce_rational(self, x):
        """Image of a rational function with nonnegative valuation."""
        num = self.reduce_poly(x.num)
        den = self.reduce_poly(x.den)
        if den == 0:
            raise ZeroDivisionError("rational function has a pole at this place")
        return self.field.div(num, den)

    def generator_image(self):
        """Residue of the ring variable."""
        return self._root


@lru_cache(maxsize=None)
def _residue_cache(place):
    return ResidueField(place)


def residue_field(place):
    return _residue_cache(place)


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """num/den over F_q in one variable, stored in lowest terms with monic
    denominator so equality is structural."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: PolyRing, num, den=None, _normalized=False):
        self.ring = ring
        if den is None:
            den = ring.one
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            num, den = self._reduce(ring, tuple(num), tuple(den))
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(ring, num, den):
        if not num:
            return (), ring.one
        if den != ring.one:
            g = ring.gcd(num, den)
            if ring.degree(g) > 0:
                num = ring.divmod(num, g)[0]
                den = ring.divmod(den, g)[0]
            lc = den[-1]
            if lc != 1:
                inv = ring.field.inv(lc)
                num = ring.scale(inv, num)
                den = ring.scale(inv, den)
        return num, den

    # arithmetic -------------------------------------------------------------

    def _wrap(self, num, den):
        return RationalFunction(self.ring, num, den)

    def __add__(self, other):
        R = self.ring
        if self.den == R.one and other.den == R.one:
            return RationalFunction(R, R.add(self.num, other.num), None, _normalized=True)
        num = R.add(R.mul(self.num, other.den), R.mul(other.num, self.den))
        return self._wrap(num, R.mul(self.den, other.den))

    def __neg__(self):
        return RationalFunction(self.ring, self.ring.neg(self.num), self.den,
                                _normalized=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        R = self.ring
        if self.den == R.one and other.den == R.one:
            return RationalFunction(R, R.mul(self.num, other.num), None, _normalized=True)
        return self._wrap(R.mul(self.num, other.num), R.mul(self.den, other.den))

    def __truediv__(self, other):
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        R = self.ring
        return self._wrap(R.mul(self.num, other.den), R.mul(self.den, other.num))

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        R = self.ring
        num, den = self.den, self.num
        lc = den[-1]
        if lc != 1:
            inv = R.field.inv(lc)
            num, den = R.scale(inv, num), R.scale(inv, den)
        return RationalFunction(R, num, den, _normalized=True)

    def pow(self, e):
        if e < 0:
            return self.inverse().pow(-e)
        R = self.ring
        return RationalFunction(R, R.pow(self.num, e), R.pow(self.den, e),
                                _normalized=True)

    def qpow(self, e):
        """Coefficientwise-compatible power x**e (alias used by skew code)."""
        return self.pow(e)

    @property
    def is_zero(self):
        return not self.num

    @property
    def is_polynomial(self):
        return self.den == self.ring.one

    def __eq__(self, other):
        return (isinstance(other, RationalFunction) and self.num == other.num
                and self.den == other.den and self.ring.var == other.ring.var)

    def __hash__(self):
        return hash((self.ring.var, self.num, self.den))

    def __repr__(self):
        R = self.ring
        if self.den == R.one:
            return R.format(self.num)
        return f"({R.format(self.num)})/({R.format(self.den)})"

    def valuation(self, place: Place):
        """Normalized valuation; at infinity v(a/b) = deg b - deg a."""
        if self.is_zero:
            raise ZeroDivisionError("valuation of zero")
        R = self.ring
        if not place.is_finite:
            return R.degree(self.den) - R.degree(self.num)
        return (_finite_valuation(R, self.num, place.poly)
                - _finite_valuation(R, self.den, place.poly))

    def support(self):
        """Finite places where the valuation is nonzero."""
        R = self.ring
        out = []
        for part in (self.num, self.den):
            if R.degree(part) > 0:
                _, fac = R.factor(part)
                out.extend(Place(R, p) for p in fac)
        return sorted(set(out), key=lambda v: (v.degree, v.poly))

    def to_json(self):
        enc = lambda poly: [list(_index_digits(self.ring.field, c)) for c in poly]
        return {"num": enc(self.num), "den": enc(self.den)}


def _finite_valuation(ring, a, pi):
    v = 0
    while True:
        q, r = ring.divmod(a, pi)
        if r:
            return v
        v += 1
        a = q


def rational(ring, poly):
    return RationalFunction(ring, poly, None, _normalized=True)


def rational_const(ring, c):
    return RationalFunction(ring, (c,) if c else (), None, _normalized=True)


# ---------------------------------------------------------------------------
# spec-level operations


def irreducibles_of_degree(spec: FieldSpec, d: int, var="t"):
    if d < 1:
        raise ValueError("degree must be >= 1")
    return PolyRing(field_of(spec), var).irreducibles_of_degree(d)


def multiplicative_order(field: SmallField, a):
    return field.mult_order(a)
