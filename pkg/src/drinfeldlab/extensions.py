"""Extension fields F_{q^N} for torsion computations.

An ExtField is F_q[y]/(g) with g the lexicographically smallest monic
irreducible of degree N over F_q (same low-to-high tail comparison as the
base field spec).  Elements are length-N tuples of F_q indices, which is
also their canonical encoding for ordering and golden files.  Prime base
fields get numpy-backed multiplication; non-prime bases fall back to the
table-driven schoolbook path.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg
from .fields import SmallField
from .polys import PolyRing


# ---------------------------------------------------------------------------
# canonical modulus search


_MODULUS_CACHE = {}


def canonical_modulus(field: SmallField, N: int):
    """Lex-smallest monic irreducible of degree N over the field (cached)."""
    key = (id(field), N)
    got = _MODULUS_CACHE.get(key)
    if got is not None:
        return got
    if field.base is None:
        mod = _search_modulus_np(field.p, N)
    else:
        mod = _search_modulus_generic(field, N)
    _MODULUS_CACHE[key] = mod
    return mod


def _search_modulus_generic(field, N):
    ring = PolyRing(field, "y")
    for cand in ring.monics_of_degree(N):
        if N >= 2 and cand[0] == 0:
            continue
        if ring.is_irreducible(cand):
            return cand
    raise AssertionError("unreachable")


def _search_modulus_np(p, N):
    if N == 1:
        return (0, 1)
    # ascending lex tail enumeration; c_0 = 0 would be divisible by y, so the
    # scan starts at c_0 = 1
    idx = [0] * N
    idx[0] = 1
    while True:
        cand = np.array(idx + [1], dtype=np.int64)
        if _irreducible_np(p, cand, N):
            return tuple(int(c) for c in cand)
        k = N - 1
        while k >= 1 and idx[k] == p - 1:
            idx[k] = 0
            k -= 1
        if k == 0:
            if idx[0] == p - 1:
                raise AssertionError("unreachable")
            idx[0] += 1
        else:
            idx[k] += 1


def _np_mod(p, a, g):
    """a mod g for numpy coefficient arrays, g monic."""
    a = a % p
    dg = len(g) - 1
    while len(a) and a[-1] == 0:
        a = a[:-1]
    while len(a) - 1 >= dg:
        c = a[-1]
        if c:
            a[-dg - 1:] = (a[-dg - 1:] - c * g) % p
        a = a[:-1]
        while len(a) and a[-1] == 0:
            a = a[:-1]
    return a


def _np_mulmod(p, a, b, g):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    return _np_mod(p, np.convolve(a, b), g)


def _np_gcd_deg(p, a, b):
    """Degree of gcd(a, b) over F_p."""
    a, b = a.copy(), b.copy()
    while len(b):
        bm = (b * pow(int(b[-1]), p - 2, p)) % p
        r = _np_mod(p, a, bm)
        a, b = b, r
    return len(a) - 1


def _irreducible_np(p, g, N):
    x = np.array([0, 1], dtype=np.int64)
    # chain x^(p^k) mod g for k = 1..N, checking at proper-divisor checkpoints
    checkpoints = {N // l for l in _prime_divisors(N)}
    cur = x.copy()
    for k in range(1, N + 1):
        cur = _np_frob_step(p, cur, g)
        if k in checkpoints:
            diff = _np_sub(p, cur, x)
            if len(diff) == 0:
                return False
            if _np_gcd_deg(p, g.astype(np.int64), diff) > 0:
                return False
        if k == N:
            return len(_np_sub(p, cur, x)) == 0
    return False


def _np_frob_step(p, a, g):
    """a^p mod g."""
    r = np.ones(1, dtype=np.int64)
    base = a
    e = p
    while e:
        if e & 1:
            r = _np_mulmod(p, r, base, g)
        base = _np_mulmod(p, base, base, g)
        e >>= 1
    return r


def _np_sub(p, a, b):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] -= b
    out %= p
    while len(out) and out[-1] == 0:
        out = out[:-1]
    return out


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
# the extension field


class ExtField:
    """F_{q^N} over a small base field, elements as length-N index tuples."""

    def __init__(self, base: SmallField, N: int, modulus=None):
        self.base = base
        self.N = N
        self.q = base.order
        self.modulus = tuple(modulus) if modulus else canonical_modulus(base, N)
        if len(self.modulus) != N + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree N")
        self.zero = (0,) * N
        self.one = ((1,) + (0,) * (N - 1)) if N else ()
        self._np = base.base is None
        if self._np:
            g = np.array(self.modulus, dtype=np.int64)
            # reduction rows: y^(N+j) mod g for j = 0..N-2
            rows = []
            cur = np.zeros(N + 1, dtype=np.int64)
            cur[N] = 1
            cur = _np_mod(base.order, cur, g)
            for _ in range(N - 1):
                row = np.zeros(N, dtype=np.int64)
                row[: len(cur)] = cur
                rows.append(row)
                cur = np.concatenate(([0], cur))
                cur = _np_mod(base.order, cur, g)
            self._red = np.array(rows, dtype=np.int64) if rows else None
        self._frob_matrix_cache = {}
        self._embed_cache = {}

    def __repr__(self):
        return f"ExtField(q={self.q}, N={self.N})"

    def element(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) < self.N:
            coeffs = coeffs + (0,) * (self.N - len(coeffs))
        return coeffs[: self.N]

    def scalar(self, c):
        """Embed an F_q index."""
        return (c,) + (0,) * (self.N - 1)

    @property
    def gen(self):
        return self.element((0, 1))

    def add(self, a, b):
        F = self.base
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        F = self.base
        return tuple(F.neg(x) for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scalar_mul(self, c, a):
        F = self.base
        if c == 0:
            return self.zero
        return tuple(F.mul(c, x) for x in a)

    def mul(self, a, b):
        if self._np:
            p = self.q
            prod = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % p
            low = prod[: self.N].copy()
            if len(prod) > self.N and self._red is not None:
                high = prod[self.N:]
                low = (low + high @ self._red) % p
            out = np.zeros(self.N, dtype=np.int64)
            out[: len(low)] = low
            return tuple(int(x) for x in out)
        F = self.base
        n = self.N
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = F.add(prod[i + j], F.mul(x, y))
        mod = self.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = 0
            for j in range(n):
                if mod[j]:
                    prod[k - n + j] = F.sub(prod[k - n + j], F.mul(c, mod[j]))
        return tuple(prod[:n])

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in base[y]
        ring = PolyRing(self.base, "y")
        r0, r1 = self.modulus, ring.normalize(a)
        s0, s1 = ring.zero, ring.one
        while r1:
            q, r = ring.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, ring.sub(s0, ring.mul(q, s1))
        lc_inv = self.base.inv(r0[-1])
        return self.element(ring.scale(lc_inv, s0))

    def qpow(self, a, times=1):
        """a ** (q ** times) via the cached Frobenius matrix."""
        M = self.frob_matrix(times)
        return linalg.mat_vec(self.base, M, a)

    def frob_matrix(self, times=1):
        """Matrix of x -> x^(q^times) as an F_q-linear map (columns-as-rows:
        result = M @ coords)."""
        times %= self.N
        got = self._frob_matrix_cache.get(times)
        if got is not None:
            return got
        if times == 0:
            M = [tuple(1 if i == j else 0 for j in range(self.N)) for i in range(self.N)]
        elif times == 1:
            gq = self._pow_plain(self.gen, self.q)
            cols = []
            cur = self.one
            for _ in range(self.N):
                cols.append(cur)
                cur = self.mul(cur, gq)
            M = [tuple(col[i] for col in cols) for i in range(self.N)]
        else:
            M1 = self.frob_matrix(1)
            M = self.frob_matrix(times - 1)
            M = linalg.mat_mul(self.base, M1, M)
        self._frob_matrix_cache[times] = M
        return M

    def _pow_plain(self, a, e):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def mult_order(self, a):
        if not any(a):
            raise ZeroDivisionError("order of zero")
        n = self.q ** self.N - 1
        import sympy

        order = n
        for prime, e in sympy.factorint(n).items():
            for _ in range(e):
                if self.pow(a, order // prime) == self.one:
                    order //= prime
                else:
                    break
        return order

    # -- canonical subfield embeddings ----------------------------------------

    def embed_small(self, small: SmallField):
        """Canonical embedding of an extension of F_q into this field.

        `small` must be F_q itself or a SmallField built over the same base
        F_q with some modulus pi of degree d | N.  The image of its generator
        is the lexicographically smallest root of pi here.  Returns a map
        index -> element."""
        if small is self.base:
            return self.scalar
        if small.base is not self.base:
            raise ValueError("field is not an extension of the base")
        key = id(small)
        got = self._embed_cache.get(key)
        if got is not None:
            return got
        d = small.deg
        if self.N % d:
            raise ValueError("degree does not divide extension degree")
        root = self._smallest_root(small.modulus, d)
        powers = [self.one]
        for _ in range(d - 1):
            powers.append(self.mul(powers[-1], root))

        def embed(idx):
            digits = small.element_digits(idx)
            acc = self.zero
            for c, pw in zip(digits, powers):
                if c:
                    acc = self.add(acc, self.scalar_mul(c, pw))
            return acc

        self._embed_cache[key] = embed
        return embed

    def _smallest_root(self, pi, d):
        # subfield of order q^d = kernel of Frob^d - id
        M = self.frob_matrix(d)
        rows = [tuple(self.base.sub(x, 1 if i == j else 0) for j, x in enumerate(row))
                for i, row in enumerate(M)]
        basis = linalg.kernel_basis(self.base, rows)
        if len(basis) != d:
            raise AssertionError("subfield dimension mismatch")
        best = None
        for combo in _all_combinations(self.base, basis):
            if not any(combo):
                continue
            if self._eval_poly(pi, combo) == self.zero:
                if best is None or combo < best:
                    best = combo
        if best is None:
            raise AssertionError("modulus has no root in subfield")
        return best

    def _eval_poly(self, coeffs, x):
        """Evaluate a base-field polynomial at an element here."""
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.mul(acc, x)
            if c:
                acc = self.add(acc, self.scalar(c))
        return acc


def _all_combinations(field, basis):
    """All F_q-linear combinations of the basis vectors."""
    if not basis:
        yield ()
        return
    n = len(basis[0])
    q = field.order
    for digits in itertools.product(range(q), repeat=len(basis)):
        acc = [0] * n
        for c, vec in zip(digits, basis):
            if c:
                for i, x in enumerate(vec):
                    if x:
                        acc[i] = field.add(acc[i], field.mul(c, x))
        yield tuple(acc)


_EXTFIELD_CACHE = {}


def ext_field(base: SmallField, N: int) -> ExtField:
    key = (id(base), N)
    got = _EXTFIELD_CACHE.get(key)
    if got is None:
        got = ExtField(base, N)
        _EXTFIELD_CACHE[key] = got
    return got
