"""Exact arithmetic in prime fields, extension fields and Galois rings.

Field elements are encoded as plain Python integers: the element
``c_0 + c_1*w + ... + c_{e-1}*w^{e-1}`` of GF(p^e) (``w`` the class of T
modulo the defining polynomial) is stored as the base-p integer
``c_0 + c_1*p + ... + c_{e-1}*p^{e-1}``.  Galois ring elements use the
same scheme with base p^2 digits.  Encodings are dense, hashable and
cheap to compare, which keeps exhaustive desk-scale scans fast.

Fields with at most 2^16 elements get exp/log tables (multiplication by
table lookup); larger fields, capped at 2^24 elements, fall back to
polynomial arithmetic.
"""

from __future__ import annotations

from functools import lru_cache

FIELD_SIZE_CAP = 1 << 24
TABLE_SIZE_CAP = 1 << 16

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ----------------------------------------------------------------------
# Dense polynomials over Z/m, little-endian coefficient lists.

def poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(a, b, m):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % m
    return poly_trim(out)


def poly_sub(a, b, m):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % m
    return poly_trim(out)


def poly_mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % m
    return poly_trim(out)


def poly_divmod(a, b, m):
    """Quotient and remainder of a by b over Z/m; lc(b) must be a unit."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    inv_lead = pow(b[-1], -1, m)
    rem = list(a)
    db = len(b) - 1
    quo = [0] * max(0, len(rem) - db)
    while len(rem) - 1 >= db and rem:
        c = rem[-1] * inv_lead % m
        k = len(rem) - 1 - db
        quo[k] = c
        for i, cb in enumerate(b):
            rem[i + k] = (rem[i + k] - c * cb) % m
        poly_trim(rem)
    return poly_trim(quo), rem


def poly_mod(a, b, m):
    return poly_divmod(a, b, m)[1]


def poly_gcd(a, b, p):
    """Monic gcd over the field Z/p."""
    a, b = list(a), list(b)
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod(base, k, mod, p):
    result = [1]
    base = poly_mod(base, mod, p)
    while k:
        if k & 1:
            result = poly_mod(poly_mul(result, base, p), mod, p)
        base = poly_mod(poly_mul(base, base, p), mod, p)
        k >>= 1
    return result


def poly_eval(a, x, m):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % m
    return acc


def poly_derivative(a, m):
    return poly_trim([i * c % m for i, c in enumerate(a)][1:])


def _prime_factors(n):
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


def _gf2_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _gf2_mulmod(a: int, b: int, m: int) -> int:
    top = 1 << (m.bit_length() - 1)
    acc = 0
    a = _gf2_mod(a, m)
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= m
    return acc


def _gf2_powmod(base: int, k: int, m: int) -> int:
    acc = _gf2_mod(1, m)
    base = _gf2_mod(base, m)
    while k:
        if k & 1:
            acc = _gf2_mulmod(acc, base, m)
        base = _gf2_mulmod(base, base, m)
        k >>= 1
    return acc


def _gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_mod(a, b)
    return a


def poly_is_irreducible(f, p) -> bool:
    """Rabin irreducibility test for a monic polynomial over Z/p."""
    e = len(f) - 1
    if e <= 0:
        return False
    if p == 2:
        fi = sum(c << i for i, c in enumerate(f))
        if _gf2_powmod(2, 2 ** e, fi) != _gf2_mod(2, fi):
            return False
        for ell in _prime_factors(e):
            xr = _gf2_powmod(2, 2 ** (e // ell), fi)
            if _gf2_gcd(xr ^ _gf2_mod(2, fi), fi) != 1:
                return False
        return True
    x = [0, 1]
    xq = poly_powmod(x, p ** e, f, p)
    if poly_sub(xq, x, p):
        return False
    for ell in _prime_factors(e):
        xr = poly_powmod(x, p ** (e // ell), f, p)
        if len(poly_gcd(poly_sub(xr, x, p), f, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(p: int, e: int) -> tuple:
    """Smallest monic irreducible of degree e over Z/p.

    Smallest in lexicographic order on the coefficient tuple
    (c_0, ..., c_{e-1}), constant term first.  Deterministic, so field
    constructions are reproducible across runs.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if e < 1:
        raise ValueError("degree must be >= 1")
    if p ** e > FIELD_SIZE_CAP:
        raise ValueError(f"field size {p}^{e} exceeds the 2^24 cap")
    if e == 1:
        return (0, 1)

    def step(tup):
        # increment (c_0,...,c_{e-1}) in lexicographic order, skipping
        # c_0 = 0 (T divides those, so none is irreducible for e >= 2)
        lst = list(tup)
        i = e - 1
        while i >= 0:
            lst[i] += 1
            if lst[i] < p:
                return tuple(lst)
            lst[i] = 1 if i == 0 else 0
            i -= 1
        return None

    tup = (1,) + (0,) * (e - 1)
    while tup is not None:
        f = list(tup) + [1]
        if poly_is_irreducible(f, p):
            return tuple(f)
        tup = step(tup)
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


# ----------------------------------------------------------------------


class GF:
    """The finite field GF(p^e), elements encoded as ints in [0, p^e)."""

    def __init__(self, p: int, e: int = 1, modulus: tuple | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** e
        if q > FIELD_SIZE_CAP:
            raise ValueError(f"field size {p}^{e} exceeds the 2^24 cap")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = tuple(modulus) if modulus is not None else find_irreducible(p, e)
        if len(self.modulus) != e + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree e")
        if e > 1 and not poly_is_irreducible(list(self.modulus), p):
            raise ValueError("modulus is reducible")
        self._log = None
        self._exp = None
        self._frob = None
        self._mod_int = None
        if p == 2 and e > 1:
            # bit encoding doubles as the GF(2)[T] representation
            self._mod_int = sum(c << i for i, c in enumerate(self.modulus))
        if e > 1 and q <= TABLE_SIZE_CAP:
            self._build_tables()

    # -- encoding helpers

    def encode(self, coeffs) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + (c % self.p)
        return x

    def decode(self, x: int) -> list:
        p, out = self.p, []
        for _ in range(self.e):
            out.append(x % p)
            x //= p
        return out

    def elements(self):
        return range(self.q)

    def _mul_poly(self, a: int, b: int) -> int:
        if self._mod_int is not None:
            # carry-less multiplication and reduction on the bit encoding
            acc = 0
            while b:
                if b & 1:
                    acc ^= a
                a <<= 1
                b >>= 1
            mod = self._mod_int
            top = self.e
            for shift in range(acc.bit_length() - 1 - top, -1, -1):
                if acc >> (shift + top) & 1:
                    acc ^= mod << shift
            return acc
        prod = poly_mul(self.decode(a), self.decode(b), self.p)
        return self.encode(poly_mod(prod, list(self.modulus), self.p))

    def _build_tables(self):
        q = self.q
        # find a multiplicative generator by order testing
        factors = _prime_factors(q - 1)
        g = None
        for cand in range(2, q):
            if all(self._pow_poly(cand, (q - 1) // f) != 1 for f in factors):
                g = cand
                break
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        acc = 1
        for k in range(q - 1):
            exp[k] = acc
            exp[k + q - 1] = acc
            log[acc] = k
            acc = self._mul_poly(acc, g)
        self._exp, self._log = exp, log
        self._frob = [self.pow(x, self.p) for x in range(q)]

    def _pow_poly(self, x: int, k: int) -> int:
        acc = 1
        while k:
            if k & 1:
                acc = self._mul_poly(acc, x)
            x = self._mul_poly(x, x)
            k >>= 1
        return acc

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.encode(c1 + c2 for c1, c2 in zip(self.decode(a), self.decode(b)))

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self.encode(c1 - c2 for c1, c2 in zip(self.decode(a), self.decode(b)))

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, -1, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._pow_poly(a, self.q - 2)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        if self._log is not None and a != 0:
            return self._exp[self._log[a] * k % (self.q - 1)]
        return self._pow_poly(a, k)

    def frobenius(self, a: int) -> int:
        """The field automorphism x -> x^p."""
        if self.e == 1:
            return a
        if self._frob is not None:
            return self._frob[a]
        return self._pow_poly(a, self.p)

    def embed_prime(self, c: int) -> int:
        """Image of c in Z/p under the canonical inclusion into GF(p^e)."""
        return c % self.p

    def __repr__(self):
        return f"GF({self.p}^{self.e})"

    def __eq__(self, other):
        return (isinstance(other, GF)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))


class GaloisRing:
    """The Galois ring GR(p^2, e) = (Z/p^2)[T] / (lift of the GF(p^e) modulus).

    Elements are tuples of e digits in [0, p^2).  An element is a unit
    exactly when its digit-wise reduction mod p is nonzero in GF(p^e).
    """

    def __init__(self, p: int, e: int = 1, field: GF | None = None):
        self.field = field if field is not None else GF(p, e)
        if (self.field.p, self.field.e) != (p, e):
            raise ValueError("field does not match (p, e)")
        if p ** (2 * e) > FIELD_SIZE_CAP:
            raise ValueError(f"ring size {p}^{2 * e} exceeds the 2^24 cap")
        self.p = p
        self.e = e
        self.p2 = p * p
        self.size = self.p2 ** e
        self.modulus = tuple(c % self.p2 for c in self.field.modulus)

    def zero(self):
        return (0,) * self.e

    def one(self):
        return (1,) + (0,) * (self.e - 1)

    def from_int(self, c: int):
        return (c % self.p2,) + (0,) * (self.e - 1)

    def lift(self, x: int):
        """Coefficient-wise lift of a field element, digits kept in [0, p)."""
        return tuple(self.field.decode(x))

    def reduce_mod_p(self, a) -> int:
        return self.field.encode(c % self.p for c in a)

    def is_unit(self, a) -> bool:
        return self.reduce_mod_p(a) != 0

    def add(self, a, b):
        return tuple((x + y) % self.p2 for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p2 for x, y in zip(a, b))

    def mul(self, a, b):
        prod = poly_mul(list(a), list(b), self.p2)
        rem = poly_mod(prod, list(self.modulus), self.p2)
        rem += [0] * (self.e - len(rem))
        return tuple(rem)

    def mul_int(self, a, c: int):
        return tuple(x * c % self.p2 for x in a)

    def pow(self, a, k: int):
        acc = self.one()
        while k:
            if k & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            k >>= 1
        return acc

    def divisible_by_p(self, a) -> bool:
        return all(c % self.p == 0 for c in a)

    def divide_by_p(self, a) -> int:
        """(1/p) * a as an element of the residue field; a must be in p*GR."""
        if not self.divisible_by_p(a):
            raise ValueError("element is not divisible by p")
        return self.field.encode(c // self.p for c in a)

    def elements(self):
        from itertools import product
        return product(range(self.p2), repeat=self.e)

    def __repr__(self):
        return f"GR({self.p}^2, {self.e})"


# ----------------------------------------------------------------------
# Linear algebra: rank over a field, exact kernel counting over Z/p^2.


def matrix_rank(rows, field: GF) -> int:
    """Rank of a matrix with entries encoded in the given field."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, c) for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [field.sub(c, field.mul(factor, d))
                           for c, d in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def kernel_size_mod_p2(rows, ncols: int, p: int) -> int:
    """Exact number of solutions of Mx = 0 over Z/p^2.

    Reduction to a Smith-like diagonal with unit pivots first, then
    pivots divisible by p; row operations preserve the kernel and the
    (unimodular) column operations reparametrize it bijectively.
    """
    p2 = p * p
    rows = [[c % p2 for c in r] for r in rows if any(c % p2 for c in r)]
    unit_pivots = 0
    p_pivots = 0
    while rows:
        pos = next(((i, j) for i, r in enumerate(rows)
                    for j in range(len(r)) if r[j] % p != 0), None)
        if pos is None:
            break
        i, j = pos
        rows[0], rows[i] = rows[i], rows[0]
        inv = pow(rows[0][j], -1, p2)
        rows[0] = [c * inv % p2 for c in rows[0]]
        head = rows[0]
        reduced = []
        for r in rows[1:]:
            f = r[j]
            if f:
                r = [(c - f * d) % p2 for c, d in zip(r, head)]
            r[j] = 0  # column cleared by the implicit column operation
            if any(r):
                reduced.append(r)
        for r in reduced:
            del r[j]
        rows = reduced
        unit_pivots += 1
        ncols -= 1
    # remaining entries all divisible by p: M = p * M', kernel condition
    # becomes M' x = 0 over Z/p, each independent row a pivot p
    if rows:
        fp_rows = [[(c // p) % p for c in r] for r in rows]
        field = GF(p)
        p_pivots = matrix_rank(fp_rows, field)
    free = ncols - p_pivots
    return (p ** p_pivots) * (p2 ** free)


def image_size_mod_p2(rows, ncols: int, p: int) -> int:
    """Size of the image of x -> Mx over Z/p^2 (domain size / kernel size)."""
    p2 = p * p
    return p2 ** ncols // kernel_size_mod_p2(rows, ncols, p)
