"""Twisted polynomial rings L{tau} with tau*c = c^q*tau.

An AField fixes the coefficient field L together with the structure map
iota: A -> L.  Supported bases: L = F_q(t) with iota the inclusion,
L = F_q(s) with iota(t) = s^r (r a p-power), and finite residue fields with
iota(t) a given element.  SkewPoly coefficients are RationalFunction values
over rational bases and field-element indices over finite bases.
"""

from __future__ import annotations

from .fields import FieldSpec, field_of, SmallField
from .polys import PolyRing, RationalFunction, rational, rational_const


class RationalDomain:
    """Coefficient operations for L = F_q(var)."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.q = ring.field.order
        self.zero = rational_const(ring, 0)
        self.one = rational_const(ring, 1)

    def is_zero(self, x):
        return x.is_zero

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def pow(self, x, e):
        return x.pow(e)

    def qpow(self, x, times=1):
        return x.pow(self.q ** times)

    def eq(self, x, y):
        return x == y


class FieldDomain:
    """Coefficient operations for a finite L (a SmallField); elements are
    integer indices.  q is the order of the scalar field F_q."""

    def __init__(self, field: SmallField, q: int):
        self.field = field
        self.q = q
        self.zero = 0
        self.one = 1

    def is_zero(self, x):
        return x == 0

    def add(self, x, y):
        return self.field.add(x, y)

    def neg(self, x):
        return self.field.neg(x)

    def mul(self, x, y):
        return self.field.mul(x, y)

    def pow(self, x, e):
        return self.field.pow(x, e)

    def qpow(self, x, times=1):
        return self.field.frobenius(x, self.q, times)

    def eq(self, x, y):
        return x == y


class ExtDomain:
    """Coefficient operations for a big ExtField over F_q."""

    def __init__(self, ext):
        self.ext = ext
        self.q = ext.q
        self.zero = ext.zero
        self.one = ext.one

    def is_zero(self, x):
        return x == self.ext.zero

    def add(self, x, y):
        return self.ext.add(x, y)

    def neg(self, x):
        return self.ext.neg(x)

    def mul(self, x, y):
        return self.ext.mul(x, y)

    def pow(self, x, e):
        return self.ext.pow(x, e)

    def qpow(self, x, times=1):
        return self.ext.qpow(x, times)

    def eq(self, x, y):
        return x == y


class AField:
    """Base for the supported A-field structures."""

    spec: FieldSpec

    @property
    def q(self):
        return self.spec.q


class RationalAField(AField):
    """L = F_q(var) with iota(t) = var**power; power is a p-power (1 for the
    plain scalar field F_q(t))."""

    def __init__(self, spec: FieldSpec, var: str = "t", power: int = 1):
        self.spec = spec
        self.var = var
        p = spec.p
        w = power
        while w % p == 0:
            w //= p
        if w != 1:
            raise ValueError("power must be a power of p")
        self.power = power
        self.ring = PolyRing(field_of(spec), var)
        self.scalar_ring = self.ring if var == "t" else PolyRing(field_of(spec), "t")
        self.dom = RationalDomain(self.ring)

    def iota(self, a):
        """Image of a in A = F_q[t]: substitute t -> var**power (Horner)."""
        R = self.ring
        step = R.pow(R.gen, self.power)
        out = ()
        for i in range(len(a) - 1, -1, -1):
            out = R.add(R.mul(out, step), (a[i],) if a[i] else ())
        return rational(R, out)

    def iota_t(self):
        return self.iota((0, 1))

    def __eq__(self, other):
        return (isinstance(other, RationalAField) and self.spec == other.spec
                and self.var == other.var and self.power == other.power)

    def __hash__(self):
        return hash((self.spec, self.var, self.power))

    def __repr__(self):
        im = self.var if self.power == 1 else f"{self.var}^{self.power}"
        return f"RationalAField(F_{self.q}({self.var}), t->{im})"

    def to_json(self):
        return {"kind": "rational", "spec": self.spec.to_json(),
                "var": self.var, "power": self.power}


class FiniteAField(AField):
    """A finite A-field: a residue field with iota(t) = theta."""

    def __init__(self, spec: FieldSpec, field: SmallField, theta: int):
        self.spec = spec
        self.field = field
        self.theta = theta
        self.dom = FieldDomain(field, spec.q)
        # A-characteristic: the monic irreducible generating ker(iota)
        self.char_poly = field.minimal_polynomial(theta, spec.q)

    def iota(self, a):
        F = self.field
        acc = 0
        for c in reversed(a):
            acc = F.add(F.mul(acc, self.theta), c)
        return acc

    def iota_t(self):
        return self.theta

    def __eq__(self, other):
        return (isinstance(other, FiniteAField) and self.spec == other.spec
                and self.field is other.field and self.theta == other.theta)

    def __hash__(self):
        return hash((self.spec, id(self.field), self.theta))

    def __repr__(self):
        return f"FiniteAField(order={self.field.order})"

    def to_json(self):
        return {"kind": "finite", "spec": self.spec.to_json(),
                "char": list(self.char_poly),
                "theta": list(self.field.element_digits(self.theta))}


class SkewPoly:
    """Sum c_i tau^i over an AField; no trailing zero coefficient; the
    tau-degree of 0 is the sentinel -1."""

    __slots__ = ("afield", "coeffs")

    def __init__(self, afield, coeffs, _normalized=False):
        self.afield = afield
        if _normalized:
            self.coeffs = tuple(coeffs)
            return
        dom = afield.dom
        cs = list(coeffs)
        while cs and dom.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def deg(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def coeff(self, i):
        dom = self.afield.dom
        return self.coeffs[i] if i < len(self.coeffs) else dom.zero

    def _check(self, other):
        if self.afield is not other.afield and self.afield != other.afield:
            raise ValueError("skew polynomials over different A-fields")

    def __add__(self, other):
        self._check(other)
        dom = self.afield.dom
        n = max(len(self.coeffs), len(other.coeffs))
        out = [dom.add(self.coeff(i), other.coeff(i)) for i in range(n)]
        return SkewPoly(self.afield, out)

    def __neg__(self):
        dom = self.afield.dom
        return SkewPoly(self.afield, [dom.neg(c) for c in self.coeffs], _normalized=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        dom = self.afield.dom
        if self.is_zero or other.is_zero:
            return SkewPoly(self.afield, ())
        out = [dom.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, c in enumerate(self.coeffs):
            if dom.is_zero(c):
                continue
            for j, d in enumerate(other.coeffs):
                if dom.is_zero(d):
                    continue
                out[i + j] = dom.add(out[i + j], dom.mul(c, dom.qpow(d, i)))
        return SkewPoly(self.afield, out)

    def scale(self, c):
        """Left multiplication by a constant coefficient."""
        dom = self.afield.dom
        return SkewPoly(self.afield, [dom.mul(c, x) for x in self.coeffs])

    def pow(self, e):
        r = SkewPoly(self.afield, [self.afield.dom.one], _normalized=True)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        dom = self.afield.dom
        return all(dom.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "SkewPoly(0)"
        parts = []
        for i in range(self.deg, -1, -1):
            c = self.coeffs[i]
            if self.afield.dom.is_zero(c):
                continue
            if i == 0:
                parts.append(f"({c!r})")
            else:
                parts.append(f"({c!r})*tau" + (f"^{i}" if i > 1 else ""))
        return "SkewPoly(" + " + ".join(parts) + ")"

    def to_json(self):
        enc = (lambda c: c.to_json()) if isinstance(self.afield, RationalAField) \
            else (lambda c: list(self.afield.field.element_digits(c)))
        return {"afield": self.afield.to_json(), "coeffs": [enc(c) for c in self.coeffs]}


def skew_constant(afield, c):
    return SkewPoly(afield, [c])


def skew_tau(afield, i=1, c=None):
    dom = afield.dom
    coeffs = [dom.zero] * i + [dom.one if c is None else c]
    return SkewPoly(afield, coeffs)


def additive_eval(f: SkewPoly, x, dom=None, embed=None):
    """Evaluate sum c_i x^(q^i); dom defaults to the coefficient domain,
    embed maps coefficients into dom's elements."""
    dom = dom or f.afield.dom
    embed = embed or (lambda c: c)
    acc = dom.zero
    xp = x
    for i, c in enumerate(f.coeffs):
        if not f.afield.dom.is_zero(c):
            acc = dom.add(acc, dom.mul(embed(c), xp))
        if i < len(f.coeffs) - 1:
            xp = dom.qpow(xp, 1)
    return acc


def rth_power_twist(f: SkewPoly, r: int):
    """Coefficientwise c -> c^r for a p-power r; a ring homomorphism."""
    p = f.afield.spec.p
    w = r
    while w % p == 0:
        w //= p
    if w != 1 or r < 1:
        raise ValueError("r must be a power of p")
    dom = f.afield.dom
    return SkewPoly(f.afield, [dom.pow(c, r) for c in f.coeffs], _normalized=True)
