"""Drinfeld modules over the supported A-fields: phi_a, rank, morphism and
isomorphism tests, reduction types at finite places, and reduction to finite
A-fields."""

from __future__ import annotations

from fractions import Fraction

from .polys import Place, RationalFunction, rational, residue_field
from .skew import (AField, RationalAField, FiniteAField, SkewPoly,
                   skew_constant, additive_eval)


class DrinfeldModule:
    """phi determined by phi_t = iota(t) + c_1 tau + ... + c_r tau^r."""

    def __init__(self, afield: AField, phi_t: SkewPoly):
        if phi_t.afield is not afield and phi_t.afield != afield:
            raise ValueError("phi_t defined over a different A-field")
        if phi_t.deg < 1:
            raise ValueError("rank must be at least 1")
        dom = afield.dom
        if not dom.eq(phi_t.coeffs[0], _iota_elem(afield)):
            raise ValueError("constant coefficient of phi_t must equal iota(t)")
        if dom.is_zero(phi_t.coeffs[-1]):
            raise ValueError("leading coefficient vanishes")
        self.afield = afield
        self.phi_t = phi_t
        self.rank = phi_t.deg
        self._apply_cache = {(0, 1): phi_t}

    def __repr__(self):
        return f"DrinfeldModule(rank={self.rank}, over {self.afield!r})"

    def __eq__(self, other):
        return (isinstance(other, DrinfeldModule) and self.afield == other.afield
                and self.phi_t == other.phi_t)

    def __hash__(self):
        return hash((self.afield, self.phi_t))

    def coefficients(self):
        """c_0..c_r of phi_t."""
        return self.phi_t.coeffs

    def apply(self, a):
        """phi_a for a in A = F_q[t] (coefficients F_q indices, low first)."""
        a = tuple(a)
        got = self._apply_cache.get(a)
        if got is not None:
            return got
        dom = self.afield.dom
        out = SkewPoly(self.afield, ())
        for c in reversed(a):
            out = self.phi_t * out
            if c:
                out = out + skew_constant(self.afield, _const_elem(self.afield, c))
        self._apply_cache[a] = out
        return out

    def to_json(self):
        return {"afield": self.afield.to_json(), "phi_t": self.phi_t.to_json()}


def _iota_elem(afield):
    return afield.iota((0, 1))


def _const_elem(afield, c):
    """The F_q constant c as a coefficient element."""
    if isinstance(afield, RationalAField):
        from .polys import rational_const

        return rational_const(afield.ring, c)
    return c


def phi_apply(phi: DrinfeldModule, a):
    return phi.apply(a)


def is_morphism(f: SkewPoly, phi: DrinfeldModule, psi: DrinfeldModule) -> bool:
    """f is a morphism phi -> psi iff f*phi_t = psi_t*f; t generates A, and a
    random a guards the implementation."""
    if phi.afield != psi.afield or f.afield != phi.afield:
        raise ValueError("mismatched A-fields")
    if not (f * phi.phi_t == psi.phi_t * f):
        return False
    guard = (0, 1, 1)  # a = t^2 + t
    return f * phi.apply(guard) == psi.apply(guard) * f


def is_isomorphic(phi: DrinfeldModule, psi: DrinfeldModule):
    """A scaling witness c in L^x with c*phi_t = psi_t*c, or None.

    The constraint from coefficient s reads c^(q^s-1)*c_s(phi) = c_s(psi);
    the highest one pins div(c) = div(u)/(q^r-1) for u the leading ratio,
    leaving an F_q^x ambiguity that is searched exhaustively."""
    if phi.afield != psi.afield or phi.rank != psi.rank:
        return None
    afield = phi.afield
    if isinstance(afield, FiniteAField):
        F = afield.field
        for idx in range(1, F.order):
            c = skew_constant(afield, idx)
            if c * phi.phi_t == psi.phi_t * c:
                return idx
        return None
    ring = afield.ring
    q, r = afield.q, phi.rank
    u = psi.phi_t.coeffs[-1] / phi.phi_t.coeffs[-1]
    e = q ** r - 1
    c0_num, c0_den = ring.one, ring.one
    for part, carrier in ((u.num, "num"), (u.den, "den")):
        if ring.degree(part) > 0:
            lc, fac = ring.factor(part)
            for p, mult in fac.items():
                if mult % e:
                    return None
                piece = ring.pow(p, mult // e)
                if carrier == "num":
                    c0_num = ring.mul(c0_num, piece)
                else:
                    c0_den = ring.mul(c0_den, piece)
    if u.num and u.num[-1] != 1:
        # leading coefficient of u must be a (q^r-1)-st power in F_q^x, i.e. 1
        return None
    c0 = RationalFunction(ring, c0_num, c0_den)
    check = c0.pow(e)
    if check != u:
        return None
    for x in range(1, q):
        from .polys import rational_const

        cand = rational_const(ring, x) * c0
        cw = skew_constant(afield, cand)
        if cw * phi.phi_t == psi.phi_t * cw:
            return cand
    return None


class ReductionType:
    """Classification of phi at a finite place of the base field.

    kind is "good", "stable" (stable but not good, with the unit index
    r_prime), or "unstable" (not stable over the base completion itself).
    R = min_s v(c_s)/(q^s - 1) is recorded exactly."""

    __slots__ = ("place", "kind", "r_prime", "R")

    def __init__(self, place, kind, r_prime, R):
        self.place = place
        self.kind = kind
        self.r_prime = r_prime
        self.R = R

    @property
    def is_good(self):
        return self.kind == "good"

    def __repr__(self):
        return f"ReductionType({self.place!r}, {self.kind}, R={self.R})"

    def to_json(self):
        out = {"place": self.place.to_json(), "kind": self.kind,
               "R": [self.R.numerator, self.R.denominator]}
        if self.kind == "stable":
            out["r_prime"] = self.r_prime
        return out


def reduction_type_at(phi: DrinfeldModule, v: Place) -> ReductionType:
    if not isinstance(phi.afield, RationalAField):
        raise ValueError("reduction types are for modules over rational bases")
    if not v.is_finite:
        raise ValueError("reduction is only defined at finite places")
    q = phi.afield.q
    vals = {}
    for s in range(1, phi.rank + 1):
        c = phi.phi_t.coeffs[s]
        if not c.is_zero:
            vals[s] = Fraction(c.valuation(v), q ** s - 1)
    R = min(vals.values())
    if R.denominator != 1:
        return ReductionType(v, "unstable", None, R)
    unit_indices = [s for s, x in vals.items() if x == R]
    r_prime = max(unit_indices)
    if r_prime == phi.rank:
        return ReductionType(v, "good", phi.rank, R)
    return ReductionType(v, "stable", r_prime, R)


def reduce_at(phi: DrinfeldModule, v: Place) -> DrinfeldModule:
    """Reduction of phi at a good place, after the optimal rescaling by the
    R-th power of the place polynomial."""
    rt = reduction_type_at(phi, v)
    if not rt.is_good:
        raise ValueError(f"no good reduction at {v!r}: {rt.kind}")
    afield = phi.afield
    ring = afield.ring
    q = afield.q
    k = int(rt.R)
    rf = residue_field(v)
    pi_v = rational(ring, v.poly)
    theta = rf.reduce_rational(afield.iota_t())
    fin = FiniteAField(afield.spec, rf.field, theta)
    coeffs = [theta]
    for s in range(1, phi.rank + 1):
        c = phi.phi_t.coeffs[s]
        if c.is_zero:
            coeffs.append(0)
            continue
        scaled = c * pi_v.pow(-k * (q ** s - 1)) if k else c
        coeffs.append(rf.reduce_rational(scaled))
    return DrinfeldModule(fin, SkewPoly(fin, coeffs))


def has_good_reduction_outside(phi: DrinfeldModule, pi) -> bool:
    """Condition: good reduction at every finite place of the base field not
    lying above the A-prime pi (a monic irreducible polynomial in t)."""
    afield = phi.afield
    if not isinstance(afield, RationalAField):
        raise ValueError("defined for modules over rational bases")
    excluded = place_above_char(afield, pi)
    support = set()
    for s in range(1, phi.rank + 1):
        c = phi.phi_t.coeffs[s]
        if not c.is_zero:
            support.update(c.support())
    for v in sorted(support, key=lambda w: (w.degree, w.poly)):
        if v == excluded:
            continue
        if not reduction_type_at(phi, v).is_good:
            return False
    return True


def place_above_char(afield: RationalAField, pi) -> Place:
    """The unique place of L above the A-prime pi."""
    if afield.power == 1:
        return Place(afield.ring, pi)
    from .families import place_above

    return place_above(pi, afield)[0]


def good_places_up_to(phi: DrinfeldModule, max_degree: int, exclude=None):
    """Finite places of the base with degree <= max_degree where phi has good
    reduction, in (degree, lex) order; exclude is an optional A-prime."""
    afield = phi.afield
    excluded = place_above_char(afield, exclude) if exclude is not None else None
    out = []
    for d in range(1, max_degree + 1):
        for poly in afield.ring.irreducibles_of_degree(d):
            v = Place(afield.ring, poly)
            if excluded is not None and v == excluded:
                continue
            if reduction_type_at(phi, v).is_good:
                out.append(v)
    return out
