"""Explicit constants and degree bookkeeping: the obstruction constants
C1, C2, divisor degrees and conorms for the supported towers, the
Chebotarev-style bound specialized to the rational base field, the derived
scan threshold, and the exhaustive search for small power residues.

All inequalities involving logarithms are decided by exact integer
cross-multiplication of q-powers; no floating point."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .fields import FieldSpec, field_of
from .polys import PolyRing, Place, residue_field
from .characters import power_residue_test


class ConstantsTable:
    """C1 = (q^r - 1) * prod_{s<r} (q^s - 1)^2 and C2 = r * n_K^2 * C1."""

    def __init__(self, q: int, r: int, n_k: int):
        if r < 1 or n_k < 1:
            raise ValueError("r and n_K must be positive")
        self.q = q
        self.r = r
        self.n_k = n_k
        c1 = q ** r - 1
        for s in range(1, r):
            c1 *= (q ** s - 1) ** 2
        self.c1 = c1
        self.c2 = r * n_k * n_k * c1

    def to_json(self):
        return {"q": self.q, "r": self.r, "nk": self.n_k,
                "C1": self.c1, "C2": self.c2}


def constants(q: int, r: int, n_k: int) -> ConstantsTable:
    return ConstantsTable(q, r, n_k)


# ---------------------------------------------------------------------------
# divisors and the two supported towers


class Divisor:
    """A finite formal sum of places with integer multiplicities; entries
    are (token, multiplicity, degree) with hashable tokens."""

    def __init__(self, entries=()):
        self._entries = {}
        for token, mult, deg in entries:
            self.add(token, mult, deg)

    def add(self, token, mult, deg):
        if token in self._entries:
            old_m, old_d = self._entries[token]
            if old_d != deg:
                raise ValueError("conflicting degrees for one place")
            mult += old_m
        if mult:
            self._entries[token] = (mult, deg)
        else:
            self._entries.pop(token, None)
        return self

    def __iter__(self):
        return iter((t, m, d) for t, (m, d) in self._entries.items())

    def degree(self):
        return sum(m * d for _, (m, d) in self._entries.items())

    def __add__(self, other):
        out = Divisor(list(self))
        for token, m, d in other:
            out.add(token, m, d)
        return out

    @staticmethod
    def of_places(places):
        return Divisor([(v, 1, v.degree) for v in places])


class ConstantFieldTower:
    """The constant-field extension of F_q(t) of degree n: unramified
    everywhere, geometric degree 1."""

    def __init__(self, n: int):
        self.n = n

    @property
    def geometric_degree(self):
        return 1

    def conorm_place(self, v: Place):
        """[(token, e_w, deg_L w)] above v: gcd(n, deg v) places, e = 1."""
        d = v.degree
        g = gcd(self.n, d)
        return [((v, j), 1, d // g) for j in range(g)]

    def conorm(self, D: Divisor) -> Divisor:
        out = Divisor()
        for token, mult, deg in D:
            if not isinstance(token, Place):
                raise ValueError("base divisor must be supported on places")
            for w, e, dw in self.conorm_place(token):
                out.add(w, mult * e, dw)
        return out


class CyclotomicSubfieldTower:
    """The degree-m subfield of the pi-torsion field of the rank-one module
    t + tau over F = F_q(t); m must divide q_pi - 1.

    Splitting data: pi is totally ramified (one place, e = m, f = 1); a
    finite v != pi is unramified with residue order equal to the order of
    (v mod pi) in F_pi^x/(F_pi^x)^m; the infinite place has f = 1 and
    ramification index (q-1)/#(F_q^x intersect (F_pi^x)^m)."""

    def __init__(self, pi: Place, m: int):
        qpi = pi.residue_order
        if m < 1 or (qpi - 1) % m:
            raise ValueError("m must divide q_pi - 1")
        self.pi = pi
        self.m = m
        self.q = pi.ring.field.order

    @property
    def geometric_degree(self):
        return self.m

    def infinite_ramification(self):
        """(e_inf, number of places above infinity)."""
        if self.m == 1:
            return 1, 1
        qpi = self.pi.residue_order
        sub = (qpi - 1) // self.m
        # the scalar unit group meets the m-th powers in gcd(q-1, (q_pi-1)/m)
        # elements; the inertia image has the complementary order
        inter = gcd(self.q - 1, sub)
        e_inf = (self.q - 1) // inter
        return e_inf, self.m // e_inf

    def conorm_place(self, v):
        if isinstance(v, Place) and not v.is_finite:
            e_inf, count = self.infinite_ramification()
            return [(("inf", j), e_inf, 1) for j in range(count)]
        if v == self.pi:
            return [((self.pi, "ram"), self.m, self.pi.degree)]
        qpi = self.pi.residue_order
        rf = residue_field(self.pi)
        val = rf.reduce_poly(v.poly)
        if val == 0:
            raise ValueError("place divides pi")
        # order of the class of val in F_pi^x/(F_pi^x)^m
        f = 1
        cur = rf.field.pow(val, (qpi - 1) // self.m)
        acc = cur
        while acc != 1:
            f += 1
            acc = rf.field.mul(acc, cur)
        count = self.m // f
        return [((v, j), 1, f * v.degree) for j in range(count)]

    def conorm(self, D: Divisor) -> Divisor:
        out = Divisor()
        for token, mult, deg in D:
            for w, e, dw in self.conorm_place(token):
                out.add(w, mult * e, dw)
        return out

    def ramified_base_divisor(self) -> Divisor:
        """Sum of the base places ramified in the tower."""
        out = Divisor()
        if self.m > 1:
            out.add(self.pi, 1, self.pi.degree)
        e_inf, _ = self.infinite_ramification()
        if e_inf > 1:
            out.add(Place(self.pi.ring), 1, 1)
        return out


def divisor_degree(D: Divisor) -> int:
    return D.degree()


def conorm(D: Divisor, tower) -> Divisor:
    return tower.conorm(D)


# ---------------------------------------------------------------------------
# the bound chain for the rational base field


def b_bound(q: int, m: int, deg_pi: int) -> int:
    """Upper bound for the Chebotarev input constant when the base is the
    rational function field itself: max of the ramified-locus degree bound
    2*deg(pi) + 2, the different-degree bound m*(q - 2 + deg(pi)), the
    genus-free term 2m - 2, and 1."""
    if deg_pi < 1 or m < 1:
        raise ValueError("bad arguments")
    return max(2 * deg_pi + 2, m * (q - 2 + deg_pi), 2 * m - 2, 1)


def _threshold_holds(q: int, m: int, n: int, d: int) -> bool:
    """4*log_q((4/3)(B+3)) + 1 < d/n, decided exactly:
    (4(B+3))^(4n) * q^n < 3^(4n) * q^d."""
    B = b_bound(q, m, d)
    lhs = (4 * (B + 3)) ** (4 * n) * q ** n
    rhs = 3 ** (4 * n) * q ** d
    return lhs < rhs


def _growth_ok(q: int, m: int, n: int, d: int) -> bool:
    """Whether the exact inequality, once true at d, propagates to d+1:
    q * (B(d)+3)^(4n) >= (B(d+1)+3)^(4n)."""
    Bd = b_bound(q, m, d)
    Bd1 = b_bound(q, m, d + 1)
    return q * (Bd + 3) ** (4 * n) >= (Bd1 + 3) ** (4 * n)


def c5_threshold(q: int, m: int, n: int, scan_limit: int = 100000) -> int:
    """Least degree d0 such that the threshold inequality holds for every
    d >= d0, found by exact upward scan with an induction certificate."""
    if n < 1:
        raise ValueError("n must be positive")
    d = 1
    last_fail = 0
    while d <= scan_limit:
        ok = _threshold_holds(q, m, n, d)
        if not ok:
            last_fail = d
        elif _growth_ok(q, m, n, d) and _all_growth_beyond(q, m, n, d):
            return last_fail + 1
        d += 1
    raise RuntimeError("threshold scan limit exceeded")


def _all_growth_beyond(q: int, m: int, n: int, d: int) -> bool:
    """Certificate that growth_ok holds for every d' >= d.  B is a max of
    linear branches; past the last branch crossover B is a single linear
    function and the growth ratio is nonincreasing, so checking up to the
    crossover point plus one suffices."""
    knee = max(_branch_knee(q, m), d)
    return all(_growth_ok(q, m, n, dd) for dd in range(d, knee + 2))


def _branch_knee(q: int, m: int) -> int:
    """A degree beyond which a single linear branch realizes b_bound."""
    # branches: 2d+2 and m(q-2+d); constants 2m-2, 1 are dominated for
    # d >= 2m.  The linear branches cross at most once.
    knee = 2 * m + 2
    if m != 2:
        cross = Fraction(m * (q - 2) - 2, 2 - m)
        if cross > 0:
            knee = max(knee, int(cross) + 2)
    return knee


# ---------------------------------------------------------------------------
# exhaustive power-residue search


class ResidueSearchResult:
    def __init__(self, pi, m, n, found, certificate, scanned):
        self.pi = pi
        self.m = m
        self.n = n
        self.found = found
        self.certificate = certificate
        self.scanned = scanned

    def to_json(self):
        ring = self.pi.ring
        out = {"pi": ring.format(self.pi.poly), "m": self.m, "n": self.n,
               "scanned": self.scanned}
        if self.found is not None:
            out["pi0"] = ring.format(self.found.poly)
            out["certificate"] = self.certificate
        else:
            out["pi0"] = None
        return out


def mth_residue_search(pi: Place, m: int, n: int = 1) -> ResidueSearchResult:
    """First monic irreducible pi_0 with deg(pi_0) < deg(pi)/n that is an
    m-th power residue modulo pi, scanning by (degree, lex).  Absence in
    range is a normal, reportable outcome."""
    qpi = pi.residue_order
    if m < 1 or (qpi - 1) % m:
        raise ValueError(f"m = {m} must divide q_pi - 1 = {qpi - 1}")
    ring = pi.ring
    max_deg = (pi.degree + n - 1) // n - 1  # largest degree strictly below deg/n
    scanned = 0
    for d in range(1, max_deg + 1):
        for poly in ring.irreducibles_of_degree(d):
            if poly == pi.poly:
                continue
            scanned += 1
            if power_residue_test(poly, pi, m):
                rf = residue_field(pi)
                val = rf.reduce_poly(poly)
                cert = {
                    "residue_index": val,
                    "power": (qpi - 1) // m,
                    "value": rf.field.pow(val, (qpi - 1) // m),
                }
                return ResidueSearchResult(pi, m, n, Place(ring, poly), cert, scanned)
    return ResidueSearchResult(pi, m, n, None, None, scanned)
