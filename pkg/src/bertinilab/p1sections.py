"""Fast classification of binary-form sections on fibers of the projective line.

A closed point of P^1 over F_p is either the point at infinity [1:0] or
corresponds to a monic irreducible polynomial g over F_p (the minimal
polynomial of its affine coordinate).  For a section sigma mod p^2 with
affine chart polynomial f:

* the fiber divisor is singular at the g-point iff g^2 divides the
  reduction of f mod p (equivalently g divides gcd(fbar, fbar'));
* writing f = A*g~ + R over Z/p^2 (g~ a lift of g), such a point is
  arithmetically singular iff R vanishes mod p^2 at the point, i.e.
  g divides R/p over F_p.

Grouping the repeated irreducible factors by degree (distinct-degree
splitting of the radical) answers "is any point of degree <= r singular"
with gcd computations only, never factoring into individual points; the
counts deg/k per degree k recover the number of affected points.  This
is what makes 10^5-sample experiments over several fibers cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ffield import (poly_derivative, poly_divmod, poly_gcd, poly_mod,
                     poly_powmod, poly_trim)
from .zetas import closed_point_counts, projective_counts


def affine_poly(coeffs, d: int, modulus: int):
    """Chart Y=1 polynomial of a binary form, little-endian in t = X/Y."""
    return poly_trim([coeffs[d - i] % modulus for i in range(d + 1)])


def radical_fp(f, p: int):
    """Product of the distinct monic irreducible factors of f over F_p."""
    f = poly_trim([c % p for c in f])
    if len(f) <= 1:
        return [1]
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    deriv = poly_derivative(f, p)
    if not deriv:
        # f = z(x^p); p-th roots of coefficients over F_p are themselves
        z = [f[i] for i in range(0, len(f), p)]
        return radical_fp(z, p)
    sep = poly_divmod(f, poly_gcd(f, deriv, p), p)[0]
    rest = f
    g = poly_gcd(rest, sep, p)
    while len(g) > 1:
        rest = poly_divmod(rest, g, p)[0]
        g = poly_gcd(rest, sep, p)
    if len(rest) > 1:
        # rest is a p-th power holding the factors with multiplicity p | e
        z = [rest[i] for i in range(0, len(rest), p)]
        tail = radical_fp(z, p)
        return poly_trim([c % p for c in _mul(sep, tail, p)])
    return sep


def _mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return out


def distinct_degree_split(v, p: int, r: int):
    """[(k, product of the degree-k irreducible factors)] for k <= r.

    v must be squarefree.  Standard split by gcd with x^{p^k} - x.
    """
    out = []
    v = list(v)
    t = [0, 1]
    for k in range(1, r + 1):
        if len(v) - 1 < k:
            break
        t = poly_powmod(t, p, v, p)
        diff = poly_trim([(c1 - c2) % p for c1, c2
                          in _pad(t, [0, 1])])
        hk = poly_gcd(v, diff, p)
        if len(hk) > 1:
            out.append((k, hk))
            v = poly_divmod(v, hk, p)[0]
            t = poly_mod(t, v, p) if len(v) > 1 else [0]
    return out


def _pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


@lru_cache(maxsize=None)
def _p1_closed_point_count(p: int, r: int) -> int:
    a = closed_point_counts(projective_counts(p, 1, max(r, 1)))
    return sum(a[:r])


@dataclass
class FiberReport:
    """Point-level summary of one section on one fiber, degrees <= r."""

    p: int
    r: int
    fiber_singular: int      # points where the reduced divisor is singular
    arith_singular: int      # points singular in the mod-p^2 sense

    @property
    def any_fiber(self):
        return self.fiber_singular > 0

    @property
    def any_arith(self):
        return self.arith_singular > 0

    @property
    def rescued(self):
        return self.fiber_singular - self.arith_singular


def binary_section_report(coeffs, d: int, p: int, r: int) -> FiberReport:
    """Classify a binary-form section (integer or mod-p^2 coefficients) on
    the fiber at p, over all closed points of degree <= r."""
    if len(coeffs) != d + 1:
        raise ValueError("binary form of degree d needs d+1 coefficients")
    if r < 1:
        return FiberReport(p, r, 0, 0)
    p2 = p * p
    fbar = affine_poly(coeffs, d, p)
    fiber_ct = 0
    arith_ct = 0

    if not fbar and all(c % p == 0 for c in coeffs):
        # sigma = p * tau: every point of the fiber is on the reduced divisor
        fiber_ct = _p1_closed_point_count(p, r)
        tau = [(c % p2) // p for c in coeffs]
        if all(c % p == 0 for c in tau):
            return FiberReport(p, r, fiber_ct, fiber_ct)   # the zero section
        tbar = affine_poly(tau, d, p)
        # arithmetically singular exactly where tau vanishes
        if len(tbar) > 1:
            for k, hk in distinct_degree_split(radical_fp(tbar, p), p, r):
                arith_ct += (len(hk) - 1) // k
        if tau[0] % p == 0:
            arith_ct += 1        # the point at infinity
        return FiberReport(p, r, fiber_ct, arith_ct)

    # affine points: repeated irreducible factors of fbar
    deriv = poly_derivative(fbar, p)
    if len(fbar) > 1:
        w = fbar if not deriv else poly_gcd(fbar, deriv, p)
        if len(w) > 1:
            f2 = affine_poly(coeffs, d, p2)
            for k, hk in distinct_degree_split(radical_fp(w, p), p, r):
                npts = (len(hk) - 1) // k
                fiber_ct += npts
                hk2 = [c % p2 for c in hk]
                rem = poly_mod(f2, hk2, p2)
                quot = poly_trim([(c % p2) // p for c in rem])  # rem is 0 mod p
                g = poly_gcd(quot, hk, p)
                arith_ct += (len(g) - 1) // k
    # the point at infinity, reverse chart u = Y/X at u = 0
    a0, a1 = coeffs[0], coeffs[1] if d >= 1 else 0
    if a0 % p == 0 and a1 % p == 0:
        fiber_ct += 1
        if a0 % p2 == 0:
            arith_ct += 1
    return FiberReport(p, r, fiber_ct, arith_ct)


def binary_form_squarefree(coeffs, d: int, p: int) -> bool:
    """Is the divisor of the binary form smooth (squarefree) over F_p?"""
    fbar = affine_poly(coeffs, d, p)
    if not fbar:
        return False                      # the zero section
    if d - (len(fbar) - 1) >= 2:
        return False                      # infinity with multiplicity >= 2
    if len(fbar) == 1:
        return True                       # constant chart polynomial: only infinity
    deriv = poly_derivative(fbar, p)
    if not deriv:
        return False                      # a p-th power
    return len(poly_gcd(fbar, deriv, p)) == 1


def squarefree_binary_census(p: int, d: int):
    """Exact count of degree-d binary forms over F_p with squarefree divisor."""
    total = p ** (d + 1)
    if total > (1 << 26):
        raise ValueError("census too large")
    hits = 0
    coeffs = [0] * (d + 1)
    while True:
        if binary_form_squarefree(coeffs, d, p):
            hits += 1
        i = 0
        while i <= d:
            coeffs[i] += 1
            if coeffs[i] < p:
                break
            coeffs[i] = 0
            i += 1
        if i > d:
            break
    return hits, total
