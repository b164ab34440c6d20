import cmath
import math

import pytest

from twistcensus.arith import primes_up_to
from twistcensus.characters import NotSquarefree
from twistcensus.rings import (
    EisensteinInt,
    GaussianInt,
    RamifiedElement,
    cubic_residue_symbol,
    eisenstein_gcd,
    factor_eisenstein_squarefree,
    factor_gaussian_odd_squarefree,
    gaussian_gcd,
    quartic_residue_symbol,
    split_prime_gaussian,
    split_prime_eisenstein,
)


def test_gaussian_basic_arithmetic():
    a = GaussianInt(3, 2)
    b = GaussianInt(1, -1)
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a + b - b) == a
    assert a.conj().norm() == a.norm()
    assert a.to_complex() == 3 + 2j


def test_gaussian_primary_associate():
    # exactly one associate of an odd element is primary (== 1 mod (1+i)^3)
    for z in (GaussianInt(3, 2), GaussianInt(1, 4), GaussianInt(-5, 2), GaussianInt(7, 0)):
        primaries = [w for w in z.associates() if w.is_primary()]
        assert len(primaries) == 1
        w, k = z.primary_associate()
        assert w in primaries
        # unit relation: i^k * z == w
        u = z
        for _ in range(k % 4):
            u = u.times_i()
        assert u == w


def test_gaussian_divmod_euclidean():
    a, b = GaussianInt(27, 23), GaussianInt(8, 1)
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.norm() < b.norm()


def test_gaussian_gcd():
    a = GaussianInt(3, 2) * GaussianInt(5, 4)
    b = GaussianInt(3, 2) * GaussianInt(1, 6)
    g = gaussian_gcd(a, b)
    assert g.norm() == 13  # N(3+2i)


def test_split_prime_gaussian():
    for p in [int(x) for x in primes_up_to(500) if x % 4 == 1]:
        pi, pibar = split_prime_gaussian(p)
        assert pi.norm() == p and pibar.norm() == p
        assert pi.is_primary() and pibar.is_primary()
        assert pi.im > 0 or (pi.im == 0 and pibar.im == 0)
        prod = pi * pibar
        assert prod.re in (p, -p) and prod.im == 0


def test_split_prime_eisenstein():
    for p in [int(x) for x in primes_up_to(500) if x % 3 == 1]:
        pi, pibar = split_prime_eisenstein(p)
        assert pi.norm() == p and pibar.norm() == p
        assert pi.is_primary() and pibar.is_primary()


def test_eisenstein_primary_associate():
    for z in (EisensteinInt(3, 1), EisensteinInt(2, 0), EisensteinInt(-1, 3)):
        if z.norm() % 3 == 0:
            continue
        primaries = [w for w in z.associates() if w.is_primary()]
        assert len(primaries) == 1


def test_eisenstein_gcd():
    pi, _ = split_prime_eisenstein(7)
    rho, _ = split_prime_eisenstein(13)
    g = eisenstein_gcd(pi * rho, pi * EisensteinInt(5, 0))
    assert g.norm() == 7


def test_quartic_symbol_is_power_residue_character():
    # [a/pi] = 1 iff a is a fourth power mod p, for split p
    for p in (5, 13, 17, 29):
        pi, _ = split_prime_gaussian(p)
        fourth = {pow(x, 4, p) for x in range(1, p)}
        for a in range(1, p):
            sym = quartic_residue_symbol(a, pi)
            assert (sym.exponent == 0) == (a in fourth)
    # multiplicativity
    pi, _ = split_prime_gaussian(37)
    s = quartic_residue_symbol(6, pi)
    t = quartic_residue_symbol(2, pi) * quartic_residue_symbol(3, pi)
    assert s.exponent == t.exponent


def test_quartic_symbol_ramified():
    pi, _ = split_prime_gaussian(13)
    assert quartic_residue_symbol(13, pi).is_zero
    assert quartic_residue_symbol(26, pi).is_zero


def test_cubic_symbol_is_power_residue_character():
    for p in (7, 13, 19, 31):
        pi, _ = split_prime_eisenstein(p)
        cubes = {pow(x, 3, p) for x in range(1, p)}
        for a in range(1, p):
            sym = cubic_residue_symbol(a, pi)
            assert (sym.exponent == 0) == (a in cubes)


def test_quartic_reciprocity_instance():
    # primary pi, rho: [rho/pi][pi/rho]^-1 = (-1)^((N(pi)-1)/4 * (N(rho)-1)/4)
    for p, q in ((5, 13), (13, 17), (5, 29), (17, 29)):
        pi, _ = split_prime_gaussian(p)
        rho, _ = split_prime_gaussian(q)
        lhs = quartic_residue_symbol(rho, pi).exponent - quartic_residue_symbol(pi, rho).exponent
        rhs = 2 * (((p - 1) // 4) * ((q - 1) // 4) % 2)
        assert (lhs - rhs) % 4 == 0


def test_factor_gaussian_odd_squarefree():
    pi5, _ = split_prime_gaussian(5)
    pi13, bar13 = split_prime_gaussian(13)
    beta = pi5 * pi13
    fac = factor_gaussian_odd_squarefree(beta)
    assert sorted(f.norm() for f in fac) == [5, 13]
    with pytest.raises(NotSquarefree):
        factor_gaussian_odd_squarefree(pi5 * pi5)
    # conjugate pair multiplies to a rational prime: not squarefree as a
    # conductor (norm not squarefree)
    with pytest.raises(Exception):
        factor_gaussian_odd_squarefree(pi13 * bar13)


def test_factor_eisenstein_squarefree():
    pi7, _ = split_prime_eisenstein(7)
    pi13, _ = split_prime_eisenstein(13)
    fac = factor_eisenstein_squarefree(pi7 * pi13)
    assert sorted(f.norm() for f in fac) == [7, 13]
