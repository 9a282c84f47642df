"""Character evaluations in residue fields: values of the cyclotomic-style
rank-one character at Frobenius, m-th power residue symbols, order-(q-1)
Kummer symbols, and kernel polynomials of one-dimensional F_q-lines.

The Kummer identification K^x/(K^x)^(q-1) ~ Hom(G_K, F_q^x) is normalized
so that the symbol is evaluated directly as c -> (c mod pi_0)^((q_pi0-1)/(q-1));
with this orientation the value of kappa_(-t) at the Frobenius of pi_0
equals pi_0(0), matching the rank-one torsion character of t + tau.  The
test suite pins this orientation."""

from __future__ import annotations

from .polys import Place, PolyRing, RationalFunction, residue_field


class CharValue:
    """A value of a residue character: a nonzero element of F_pi."""

    __slots__ = ("pi", "value")

    def __init__(self, pi: Place, value: int):
        if value == 0:
            raise ValueError("character values are nonzero")
        self.pi = pi
        self.value = value

    def __eq__(self, other):
        return isinstance(other, CharValue) and (self.pi, self.value) == \
            (other.pi, other.value)

    def __repr__(self):
        return f"CharValue({self.pi!r}, {self.value})"


def carlitz_frobenius(pi: Place, pi0: Place, f: int) -> CharValue:
    """Value (pi_0^f mod pi) of the rank-one torsion character at a
    Frobenius above pi_0 with residue degree f."""
    if not (pi.is_finite and pi0.is_finite):
        raise ValueError("both places must be finite")
    if pi == pi0:
        raise ValueError("the character is ramified at its own place")
    if f < 1:
        raise ValueError("residue degree must be positive")
    rf = residue_field(pi)
    val = rf.reduce_poly(pi0.poly)
    return CharValue(pi, rf.field.pow(val, f))


def power_residue_test(a, pi: Place, m: int) -> bool:
    """Whether a mod pi lies in (F_pi^x)^m, for m | q_pi - 1."""
    qpi = pi.residue_order
    if m < 1 or (qpi - 1) % m:
        raise ValueError(f"m = {m} must divide q_pi - 1 = {qpi - 1}")
    rf = residue_field(pi)
    val = rf.reduce_poly(a)
    if val == 0:
        raise ValueError("a is divisible by pi")
    return rf.field.pow(val, (qpi - 1) // m) == 1


def kummer_frobenius(c: RationalFunction, pi0: Place) -> int:
    """The (q-1)-st power residue symbol of c at pi_0, an element of F_q^x
    returned as a scalar index."""
    if c.is_zero or c.valuation(pi0) != 0:
        raise ValueError("c must be a unit at pi_0")
    rf = residue_field(pi0)
    q = pi0.ring.field.order
    val = rf.reduce_rational(c)
    out = rf.field.pow(val, (pi0.residue_order - 1) // (q - 1))
    if out >= q:
        raise AssertionError("symbol value escaped the scalar field")
    return out


class ResidueClass:
    """The class of a character value in F_pi^x/(F_pi^x)^m, encoded by the
    fingerprint value^((q_pi-1)/m) inside the order-m subgroup."""

    __slots__ = ("pi", "m", "fingerprint")

    def __init__(self, pi: Place, m: int, fingerprint: int):
        self.pi = pi
        self.m = m
        self.fingerprint = fingerprint

    @property
    def is_identity(self):
        return self.fingerprint == 1

    def __eq__(self, other):
        return isinstance(other, ResidueClass) and \
            (self.pi, self.m, self.fingerprint) == (other.pi, other.m, other.fingerprint)

    def __repr__(self):
        return f"ResidueClass({self.pi!r}, m={self.m}, fp={self.fingerprint})"


def chi_m_value(pi: Place, m: int, pi0: Place, f: int = 1) -> ResidueClass:
    """Class of the rank-one character value in F_pi^x/(F_pi^x)^m."""
    qpi = pi.residue_order
    if m < 1 or (qpi - 1) % m:
        raise ValueError(f"m = {m} must divide q_pi - 1 = {qpi - 1}")
    cv = carlitz_frobenius(pi, pi0, f)
    rf = residue_field(pi)
    return ResidueClass(pi, m, rf.field.pow(cv.value, (qpi - 1) // m))


def kernel_polynomial(field, generator, q=None):
    """For the F_q-line W spanned by a nonzero generator: the coefficient
    c_W with prod_{w in W} (T - w) = T^q + c_W T, namely -generator^(q-1).

    field is the SmallField or ExtField containing the generator; q is the
    scalar field order (inferred for ExtField).  Returns (skew_coeffs, c_W)
    with skew_coeffs = (c_W, 1) low-tau-first; the product identity is
    verified by full expansion over the line."""
    from .extensions import ExtField

    if isinstance(field, ExtField):
        q = q or field.q
        zero, one = field.zero, field.one
        add, mul, neg, pw = field.add, field.mul, field.neg, field.pow
        smul = field.scalar_mul
    else:
        if q is None:
            raise ValueError("q is required for table fields")
        zero, one = 0, 1
        add, mul, neg, pw = field.add, field.mul, field.neg, field.pow
        smul = field.mul
    if generator == zero:
        raise ValueError("generator must be nonzero")
    c_w = neg(pw(generator, q - 1))
    poly = [one]
    for x in range(q):
        w = smul(x, generator) if x else zero
        out = [zero] * (len(poly) + 1)
        for i, c in enumerate(poly):
            out[i + 1] = add(out[i + 1], c)
            out[i] = add(out[i], mul(neg(w), c))
        poly = out
    expected = [zero] * (q + 1)
    expected[1] = c_w
    expected[q] = one
    if poly != expected:
        raise AssertionError("kernel polynomial expansion mismatch")
    return (c_w, one), c_w
