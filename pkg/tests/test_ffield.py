"""Field, Galois-ring and linear-algebra core."""

import itertools
import random

import pytest

from bertinilab.ffield import (GF, GaloisRing, find_irreducible, is_prime,
                               image_size_mod_p2, kernel_size_mod_p2,
                               matrix_rank, poly_is_irreducible, poly_mul,
                               poly_mod)


def brute_force_irreducible(f, p):
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    e = len(f) - 1
    for k in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if not poly_mod(list(f), g, p):
                return False
    return e >= 1


def test_find_irreducible_examples():
    assert find_irreducible(2, 1) == (0, 1)        # T
    assert find_irreducible(2, 2) == (1, 1, 1)     # T^2 + T + 1
    assert find_irreducible(5, 1) == (0, 1)


def test_find_irreducible_is_smallest_and_irreducible():
    for p, e in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)]:
        f = find_irreducible(p, e)
        assert brute_force_irreducible(f, p)
        # itertools.product emits coefficient tuples in lexicographic order
        for tail in itertools.product(range(p), repeat=e):
            if tail == f[:-1]:
                break
            assert not brute_force_irreducible(list(tail) + [1], p), (tail, f)


def test_find_irreducible_rejects_bad_input():
    with pytest.raises(ValueError):
        find_irreducible(4, 2)
    with pytest.raises(ValueError):
        find_irreducible(2, 0)
    with pytest.raises(ValueError):
        find_irreducible(2, 30)     # 2^30 over the size cap


def test_rabin_test_agrees_with_brute_force():
    rng = random.Random(0)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        e = rng.randint(2, 4)
        f = [rng.randrange(p) for _ in range(e)] + [1]
        assert poly_is_irreducible(f, p) == brute_force_irreducible(f, p)


def test_frobenius_examples():
    F4 = GF(2, 2)
    assert F4.frobenius(0) == 0
    assert F4.frobenius(1) == 1
    T = F4.encode([0, 1])
    # direct squaring: T^2 = T + 1 modulo T^2 + T + 1
    assert F4.frobenius(T) == F4.encode([1, 1])
    assert F4.mul(T, T) == F4.encode([1, 1])


@pytest.mark.parametrize("p,e", [(2, 4), (2, 16), (3, 4), (3, 8), (5, 6),
                                 (7, 5), (13, 4), (251, 2)])
def test_power_q_is_identity_exhaustive(p, e):
    field = GF(p, e)
    assert field.q <= 1 << 16
    for x in field.elements():
        acc = x
        for _ in range(e):
            acc = field.frobenius(acc)
        assert acc == x


def test_frobenius_is_ring_homomorphism():
    rng = random.Random(1)
    for p, e in [(2, 5), (3, 3), (5, 3), (7, 2)]:
        field = GF(p, e)
        for _ in range(200):
            x = rng.randrange(field.q)
            y = rng.randrange(field.q)
            assert field.frobenius(field.add(x, y)) == \
                field.add(field.frobenius(x), field.frobenius(y))
            assert field.frobenius(field.mul(x, y)) == \
                field.mul(field.frobenius(x), field.frobenius(y))


def test_field_axioms_random():
    rng = random.Random(2)
    for p, e in [(2, 6), (3, 4), (5, 3), (11, 2), (2, 21)]:
        field = GF(p, e)
        for _ in range(100):
            x, y, z = (rng.randrange(field.q) for _ in range(3))
            assert field.mul(x, field.add(y, z)) == \
                field.add(field.mul(x, y), field.mul(x, z))
            if x:
                assert field.mul(x, field.inv(x)) == 1
        # large fields run without tables
        if field.q > 1 << 16:
            assert field._log is None


@pytest.mark.parametrize("p,e", [(2, 4), (2, 8), (3, 3), (5, 2), (7, 2)])
def test_galois_ring_units_exhaustive(p, e):
    ring = GaloisRing(p, e)
    assert ring.size <= 1 << 16
    units = 0
    for a in ring.elements():
        if ring.is_unit(a):
            units += 1
            assert ring.reduce_mod_p(a) != 0
        else:
            assert ring.reduce_mod_p(a) == 0
    assert units == p ** (2 * e) - p ** e


def test_galois_ring_reduction_and_lift():
    ring = GaloisRing(3, 2)
    field = ring.field
    for x in field.elements():
        assert ring.reduce_mod_p(ring.lift(x)) == x
    # reduction is a ring homomorphism
    rng = random.Random(3)
    for _ in range(200):
        a = tuple(rng.randrange(9) for _ in range(2))
        b = tuple(rng.randrange(9) for _ in range(2))
        assert ring.reduce_mod_p(ring.mul(a, b)) == \
            field.mul(ring.reduce_mod_p(a), ring.reduce_mod_p(b))


def test_divide_by_p():
    ring = GaloisRing(2, 2)
    two = ring.from_int(2)
    assert ring.divisible_by_p(two)
    assert ring.divide_by_p(two) == 1
    with pytest.raises(ValueError):
        ring.divide_by_p(ring.one())


def test_matrix_rank_examples():
    F2 = GF(2)
    assert matrix_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]], F2) == 3
    assert matrix_rank([[0] * 5, [0] * 5], F2) == 0
    assert matrix_rank([[1, 1], [1, 1]], F2) == 1


def test_matrix_rank_extension_field():
    F4 = GF(2, 2)
    T = F4.encode([0, 1])
    assert matrix_rank([[T, 1], [F4.mul(T, T), T]], F4) == 1
    assert matrix_rank([[T, 1], [1, T]], F4) == 2


def test_kernel_size_examples():
    assert kernel_size_mod_p2([[0]], 1, 2) == 4
    assert kernel_size_mod_p2([[2]], 1, 2) == 2          # solutions {0, 2}
    # unit entries pin the coordinates completely: 2 is invertible mod 9
    assert kernel_size_mod_p2([[1, 0], [0, 2]], 2, 3) == 1
    # the p-divisible pivot analogue over Z/9
    assert kernel_size_mod_p2([[1, 0], [0, 3]], 2, 3) == 3


def test_kernel_size_against_brute_force():
    rng = random.Random(4)
    cases = 0
    while cases < 1000:
        p = rng.choice([2, 3])
        p2 = p * p
        k = rng.randint(1, 3)
        h = rng.randint(1, 3)
        M = [[rng.randrange(p2) for _ in range(h)] for _ in range(k)]
        brute = sum(
            1 for v in itertools.product(range(p2), repeat=h)
            if all(sum(M[i][j] * v[j] for j in range(h)) % p2 == 0
                   for i in range(k)))
        assert kernel_size_mod_p2(M, h, p) == brute, (M, p)
        assert kernel_size_mod_p2(M, h, p) * image_size_mod_p2(M, h, p) == p2 ** h
        cases += 1


def test_is_prime():
    assert [n for n in range(60) if is_prime(n)] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 61 + 1)


def test_poly_mul_mod_consistency():
    rng = random.Random(5)
    for _ in range(100):
        p = rng.choice([2, 3, 5])
        a = [rng.randrange(p) for _ in range(rng.randint(1, 6))]
        b = [rng.randrange(p) for _ in range(rng.randint(1, 6))]
        m = [rng.randrange(p) for _ in range(3)] + [1]
        prod = poly_mul(a, b, p)
        assert poly_mod(prod, m, p) == poly_mod(poly_mod(prod, m, p), m, p)
