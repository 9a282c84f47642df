"""Construction and desk-scale verification of the explicit module
families: the coefficientwise inverse-Frobenius hat map and the rank-r
module Phi_t = (t^{1/r} + tau)^r over F_q(s) with t = s^r, the rank-2
everywhere-good family t + a*tau + tau^2, and the family built from
products of (tau - (-t)^{k_s}) with good reduction outside t."""

from __future__ import annotations

from .fields import FieldSpec, field_of
from .polys import PolyRing, Place, RationalFunction, rational, rational_const
from .skew import RationalAField, SkewPoly, skew_constant, rth_power_twist
from .drinfeld import DrinfeldModule, has_good_reduction_outside, is_isomorphic
from .audits import d2_fingerprint, FingerprintReport
from .frobenius import DEFAULT_SPLIT_CAP, MAX_AUX_DEGREE


def _check_p_power(p, r):
    w = r
    while w > 1 and w % p == 0:
        w //= p
    if w != 1:
        raise ValueError(f"r = {r} must be a power of p = {p}")


def hat(ring: PolyRing, a, r: int):
    """Coefficientwise inverse r-th Frobenius: sum x_n t^n -> sum x_n^{1/r} t^n.

    A ring automorphism of A; hat(a)(s)^r = a(s^r)."""
    F = ring.field
    _check_p_power(F.p, r)
    w, nu = r, 0
    while w > 1:
        w //= F.p
        nu += 1
    root_exp = F.order // F.p  # x -> x^(order/p) inverts the p-Frobenius
    out = []
    for c in a:
        x = c
        for _ in range(nu):
            x = F.pow(x, root_exp)
        out.append(x)
    return ring.normalize(out)


def build_carlitz_prime(spec: FieldSpec, r: int) -> DrinfeldModule:
    """The rank-one module with phi_t = s + tau over F_q(s), iota(t) = s:
    the auxiliary structure whose r-th twist recovers t + tau."""
    _check_p_power(spec.p, r)
    afield = RationalAField(spec, "s", 1)
    R = afield.ring
    return DrinfeldModule(afield, SkewPoly(afield, [rational(R, R.gen),
                                                    rational_const(R, 1)]))


def carlitz_module(afield: RationalAField) -> DrinfeldModule:
    """iota(t) + tau over the given rational A-field."""
    return DrinfeldModule(afield, SkewPoly(
        afield, [afield.iota_t(), rational_const(afield.ring, 1)]))


def build_phi_hat(spec: FieldSpec, r: int) -> DrinfeldModule:
    """The rank-r module Phi_t = (s + tau)^r over F_q(s) with iota(t) = s^r."""
    _check_p_power(spec.p, r)
    afield = RationalAField(spec, "s", r)
    R = afield.ring
    base = SkewPoly(afield, [rational(R, R.gen), rational_const(R, 1)])
    phi_t = base.pow(r)
    mod = DrinfeldModule(afield, phi_t)
    if mod.rank != r:
        raise AssertionError("rank mismatch in the twisted construction")
    return mod


def place_above(pi0, afield: RationalAField):
    """The place of F_q(s), iota(t) = s^r, above the A-prime pi0, with its
    ramification index r and residue degree 1; hat(pi0)(s)^r = pi0(s^r)."""
    if afield.power == 1:
        return Place(afield.ring, pi0), 1, 1
    R = afield.ring
    r = afield.power
    hat_poly = hat(R, pi0, r)
    lifted = R.pow(hat_poly, r)
    subst = _substitute_power(R, pi0, r)
    if lifted != subst:
        raise AssertionError("hat place identity failed")
    return Place(R, hat_poly), r, 1


def _substitute_power(ring, a, r):
    out = []
    for c in a:
        out.append(c)
        if c is not a[-1]:
            pass
    expanded = []
    for i, c in enumerate(a):
        while len(expanded) < i * r:
            expanded.append(0)
        expanded.append(c)
        expanded.extend([0] * (r - 1))
    return ring.normalize(expanded[: (len(a) - 1) * r + 1])


def verify_phi_hat(spec: FieldSpec, r: int, pi, max_deg: int,
                   max_split_deg=DEFAULT_SPLIT_CAP,
                   max_aux_deg=MAX_AUX_DEGREE):
    """Fingerprint the twisted power family at pi and check the survivors
    contain the constant multiset (i, ..., i) with i*r = 1 mod q_pi - 1."""
    phi = build_phi_hat(spec, r)
    A = PolyRing(field_of(spec), "t")
    pi_place = Place(A, pi)
    report = d2_fingerprint(phi, pi_place, max_deg,
                            max_split_deg=max_split_deg, max_aux_deg=max_aux_deg)
    M = max(pi_place.residue_order - 1, 1)
    i_exp = pow(r, -1, M) % M if M > 1 else 0
    expected = tuple([i_exp] * r)
    contains = report.is_consistent and expected in report.surviving
    return report, i_exp, contains


def build_phi_a(spec: FieldSpec, a) -> DrinfeldModule:
    """The rank-2 module t + a*tau + tau^2 over F_q(t); everywhere good."""
    afield = RationalAField(spec, "t", 1)
    R = afield.ring
    return DrinfeldModule(afield, SkewPoly(
        afield, [rational(R, R.gen), rational(R, a), rational_const(R, 1)]))


def pairwise_noniso(modules) -> bool:
    mods = list(modules)
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            if is_isomorphic(mods[i], mods[j]) is not None:
                return False
    return True


class PhiMSpec:
    """Data for the product family: exponents i (summing to 1) and twists m
    (summing to 0); k_s = i_s + m_s(q-1)."""

    def __init__(self, spec: FieldSpec, i_exps, m_twists):
        if len(i_exps) != len(m_twists):
            raise ValueError("i and m must have the same length")
        if sum(i_exps) != 1:
            raise ValueError("the i_s must sum to 1")
        if sum(m_twists) != 0:
            raise ValueError("the m_s must sum to 0")
        self.spec = spec
        self.r = len(i_exps)
        self.i_exps = tuple(i_exps)
        self.m_twists = tuple(m_twists)
        q = spec.q
        self.k_exps = tuple(i + m * (q - 1) for i, m in zip(i_exps, m_twists))


def build_phi_m(pmspec: PhiMSpec) -> DrinfeldModule:
    """(-1)^(r-1) * (tau - (-t)^{k_r}) ... (tau - (-t)^{k_1}), the factor
    for s = 1 rightmost; the constant term is t by construction."""
    afield = RationalAField(pmspec.spec, "t", 1)
    R = afield.ring
    q = pmspec.spec.q
    minus_t = rational(R, R.scale(R.field.neg(1), R.gen))
    acc = SkewPoly(afield, [rational_const(R, 1)])
    for s in range(pmspec.r, 0, -1):
        k = pmspec.k_exps[s - 1]
        factor = SkewPoly(afield, [-(minus_t.pow(k)), rational_const(R, 1)])
        acc = acc * factor
    sign = R.field.neg(1) if pmspec.r % 2 == 0 else 1
    acc = acc.scale(rational_const(R, sign))
    mod = DrinfeldModule(afield, acc)
    if mod.phi_t.coeffs[0] != rational(R, R.gen):
        raise AssertionError("constant term of the product family is not t")
    return mod


def verify_phi_m(pmspec: PhiMSpec, max_deg: int,
                 max_split_deg=DEFAULT_SPLIT_CAP,
                 max_aux_deg=MAX_AUX_DEGREE):
    """Good reduction outside t plus the mod-t fingerprint; survivors must
    contain the multiset {i_s mod (q-1)}."""
    phi = build_phi_m(pmspec)
    A = phi.afield.ring
    t_place = Place(A, A.gen)
    if not has_good_reduction_outside(phi, A.gen):
        raise AssertionError("product family fails good reduction outside t")
    report = d2_fingerprint(phi, t_place, max_deg,
                            max_split_deg=max_split_deg, max_aux_deg=max_aux_deg)
    M = max(pmspec.spec.q - 1, 1)
    expected = tuple(sorted(i % M for i in pmspec.i_exps))
    contains = report.is_consistent and expected in report.surviving
    return report, expected, contains


def infinite_family_modules(spec: FieldSpec, r: int, i_exps, m_range):
    """phi^m for twists (-m, 0, ..., 0, m); m_range iterable of integers."""
    out = []
    for m in m_range:
        twists = [-m] + [0] * (r - 2) + [m] if r >= 2 else None
        if twists is None:
            raise ValueError("need rank >= 2")
        out.append((m, build_phi_m(PhiMSpec(spec, i_exps, twists))))
    return out


def infinite_family_check(spec: FieldSpec, r: int, i_exps, m_range) -> dict:
    """Valuation divergence of c_{r-1} at t plus pairwise non-isomorphy."""
    mods = infinite_family_modules(spec, r, i_exps, m_range)
    A = mods[0][1].afield.ring
    t_place = Place(A, A.gen)
    vals = []
    for m, phi in mods:
        c = phi.phi_t.coeffs[r - 1]
        vals.append(None if c.is_zero else c.valuation(t_place))
        if not has_good_reduction_outside(phi, A.gen):
            return {"ok": False, "reason": f"bad reduction at m={m}"}
    noniso = pairwise_noniso([phi for _, phi in mods])
    distinct = len(set(vals)) == len(vals)
    diverges = all(
        v is not None and v2 is not None and v2 < v
        for v, v2 in zip(vals[:-1], vals[1:])
    ) if len(vals) > 1 else True
    return {"ok": noniso and distinct, "valuations": vals,
            "pairwise_noniso": noniso, "valuations_distinct": distinct,
            "valuations_decreasing": diverges}
