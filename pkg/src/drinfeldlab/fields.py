"""Exact arithmetic for small finite fields.

Every field element is an integer index.  For a field of order n = b^k built
on a base field of order b, the index of the element with coordinate vector
(c_0, ..., c_{k-1}) (low degree first, c_i base-field indices) is
sum(c_i * b**i).  Prime fields use the value itself as index.  Arithmetic is
table driven: discrete log/exp tables for multiplication, full addition
tables for small orders.  All values are immutable after construction.
"""

from __future__ import annotations

from functools import lru_cache

ADD_TABLE_LIMIT = 1 << 11   # full q*q addition table below this order
ORDER_LIMIT = 1 << 17       # refuse to build tables above this order


def _factorize(n):
    """Prime factorization of a small positive integer as {p: e}."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n):
    return n >= 2 and _factorize(n) == {n: 1}


class SmallField:
    """A finite field with table-backed arithmetic and int-indexed elements.

    Constructed either as a prime field F_p or as an extension of another
    SmallField by a monic irreducible polynomial (coefficient tuple of base
    indices, low first, including the leading 1).
    """

    def __init__(self, p, base=None, modulus=None):
        if base is None:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            self.p = p
            self.base = None
            self.modulus = None
            self.deg = 1
            self.order = p
        else:
            self.p = base.p
            self.base = base
            mod = tuple(modulus)
            if mod[-1] != 1:
                raise ValueError("modulus must be monic")
            self.modulus = mod
            self.deg = len(mod) - 1
            self.order = base.order ** self.deg
        if self.order > ORDER_LIMIT:
            raise ValueError(f"field order {self.order} too large for tables")
        self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _digits(self, idx):
        """Base-field coordinate vector of an element, low degree first."""
        if self.base is None:
            return (idx,)
        b = self.base.order
        out = []
        for _ in range(self.deg):
            out.append(idx % b)
            idx //= b
        return tuple(out)

    def _from_digits(self, digits):
        if self.base is None:
            return digits[0] % self.p
        b = self.base.order
        idx = 0
        for c in reversed(digits):
            idx = idx * b + c
        return idx

    def _raw_add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        bb = self.base
        da, db = self._digits(a), self._digits(b)
        return self._from_digits(tuple(bb.add(x, y) for x, y in zip(da, db)))

    def _raw_mul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        bb = self.base
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.deg - 1)
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j, y in enumerate(db):
                if y:
                    prod[i + j] = bb.add(prod[i + j], bb._raw_mul(x, y))
        # reduce modulo the monic modulus
        mod = self.modulus
        for k in range(len(prod) - 1, self.deg - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = 0
            for j in range(self.deg):
                if mod[j]:
                    prod[k - self.deg + j] = bb.add(
                        prod[k - self.deg + j], bb.neg(bb.mul(c, mod[j])))
        return self._from_digits(tuple(prod[: self.deg]))

    def _build_tables(self):
        n = self.order
        self.neg_table = [self._raw_add_inverse(a) for a in range(n)]
        # discrete log tables on a generator of the unit group
        gen = self._find_generator()
        self.generator = gen
        exp = [1] * (n - 1)
        log = [0] * n
        cur = 1
        for i in range(n - 1):
            exp[i] = cur
            log[cur] = i
            cur = self._raw_mul(cur, gen)
        if cur != 1:
            raise AssertionError("generator order mismatch")
        self.exp_table = exp
        self.log_table = log
        self.add_table = None
        if n <= ADD_TABLE_LIMIT:
            self.add_table = [
                [self._raw_add(a, b) for b in range(n)] for a in range(n)
            ]

    def _raw_add_inverse(self, a):
        if self.base is None:
            return (-a) % self.p
        digs = self._digits(a)
        return self._from_digits(tuple(self.base.neg(x) for x in digs))

    def _find_generator(self):
        n = self.order
        fac = _factorize(n - 1) if n > 2 else {}
        for g in range(1, n):
            if all(self._raw_pow(g, (n - 1) // f) != 1 for f in fac):
                return g
        raise AssertionError("no generator found")

    def _raw_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    # -- public arithmetic ---------------------------------------------------

    def add(self, a, b):
        if self.add_table is not None:
            return self.add_table[a][b]
        return self._raw_add(a, b)

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg_table[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        n1 = self.order - 1
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % n1]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        n1 = self.order - 1
        return self.exp_table[(-self.log_table[a]) % n1]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        n1 = self.order - 1
        return self.exp_table[(self.log_table[a] * e) % n1]

    def frobenius(self, a, q, times=1):
        """a ** (q ** times); q must be a power of p."""
        if a == 0:
            return 0
        return self.pow(a, pow(q, times, self.order - 1))

    def mult_order(self, a):
        """Least n >= 1 with a**n == 1."""
        if a == 0:
            raise ZeroDivisionError("order of zero")
        n1 = self.order - 1
        d = n1 // _gcd(self.log_table[a], n1) if a != 1 else 1
        return d

    def element_digits(self, a):
        return self._digits(a)

    def element_from_digits(self, digits):
        return self._from_digits(tuple(digits))

    def minimal_polynomial(self, a, q):
        """Monic minimal polynomial over the order-q subfield, as a tuple of
        subfield indices (low first).  The subfield must be the canonical
        bottom copy: indices < q closed under the arithmetic."""
        conj = []
        x = a
        while True:
            conj.append(x)
            x = self.frobenius(x, q)
            if x == a:
                break
        # expand prod (X - c) with coefficients in self, then verify they are
        # subfield indices
        coeffs = [1]
        for c in conj:
            nxt = [0] * (len(coeffs) + 1)
            for i, v in enumerate(coeffs):
                nxt[i + 1] = self.add(nxt[i + 1], v)
                nxt[i] = self.add(nxt[i], self.mul(self.neg(c), v))
            coeffs = nxt
        for v in coeffs:
            if v >= q:
                raise AssertionError("minimal polynomial not over subfield")
        return tuple(coeffs)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# canonical field specs


def smallest_irreducible(p, m):
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Candidate tails (c_0, ..., c_{m-1}) are compared low-to-high as integer
    tuples; the leading coefficient is 1.
    """
    fp = prime_field(p)
    from . import polys  # local import; polys depends on fields

    ring = polys.PolyRing(fp)
    for tail in _tuples_ascending(p, m):
        cand = tail + (1,)
        if ring.is_irreducible(cand):
            return cand
    raise AssertionError("unreachable")


def _tuples_ascending(p, m):
    idx = [0] * m
    while True:
        yield tuple(idx)
        k = m - 1
        while k >= 0 and idx[k] == p - 1:
            idx[k] = 0
            k -= 1
        if k < 0:
            return
        idx[k] += 1


class FieldSpec:
    """Definition of F_q, q = p^m: a prime p and a monic irreducible modulus
    of degree m over F_p (coefficients low first, integers in [0, p))."""

    def __init__(self, p, m, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} must be prime")
        if m < 1:
            raise ValueError("m must be positive")
        self.p = p
        self.m = m
        self.q = p ** m
        if modulus is None:
            modulus = (0, 1) if m == 1 else smallest_irreducible(p, m)
        self.modulus = tuple(int(c) % p for c in modulus)
        if len(self.modulus) != m + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if m > 1:
            from . import polys

            if not polys.PolyRing(prime_field(p)).is_irreducible(self.modulus):
                raise ValueError("modulus is reducible")

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m})"

    def field(self):
        return field_of(self)

    def to_json(self):
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj):
        return FieldSpec(obj["p"], obj["m"], obj.get("modulus"))


@lru_cache(maxsize=None)
def prime_field(p):
    return SmallField(p)


_FIELD_CACHE = {}


def field_of(spec):
    """The SmallField realizing a FieldSpec (cached)."""
    key = (spec.p, spec.m, spec.modulus)
    got = _FIELD_CACHE.get(key)
    if got is None:
        if spec.m == 1:
            got = prime_field(spec.p)
        else:
            got = SmallField(spec.p, base=prime_field(spec.p), modulus=spec.modulus)
        _FIELD_CACHE[key] = got
    return got


_EXT_CACHE = {}


def extension_field(base_field, modulus):
    """Extension of a SmallField by a monic irreducible (cached)."""
    key = (id(base_field), tuple(modulus))
    got = _EXT_CACHE.get(key)
    if got is None:
        got = SmallField(base_field.p, base=base_field, modulus=tuple(modulus))
        _EXT_CACHE[key] = got
    return got
