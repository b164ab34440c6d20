"""Elementary number theory helpers shared across the package.

Everything here is standard: sieves, Jacobi symbols, CRT, primitive
roots, Pohlig-Hellman discrete logs, and a vectorised square-and-multiply
powmod for int64 numpy arrays.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# int64 products a*b with a, b < _POWMOD_LIMIT stay below 2**63.
_POWMOD_LIMIT = 3_037_000_499


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (simple sieve)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def spf_sieve(n: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..n (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    if n >= 2:
        spf[2::2] = 2
        for p in range(3, int(math.isqrt(n)) + 1, 2):
            if spf[p] == 0:
                block = spf[p * p :: 2 * p]
                block[block == 0] = p
                spf[p * p :: 2 * p] = block
        rest = np.arange(n + 1, dtype=np.int64)
        spf[spf == 0] = rest[spf == 0]
        spf[0] = spf[1] = 0
    return spf


def factorize(n: int, spf: np.ndarray | None = None) -> list[tuple[int, int]]:
    """Prime factorisation [(p, e), ...] with p ascending."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: list[tuple[int, int]] = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the ranges used here."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi requires odd positive n")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def crt_combine(pairs: list[tuple[int, int]]) -> int:
    """Solve x = r_i (mod m_i) for pairwise coprime moduli; x mod prod."""
    x, m = 0, 1
    for r, mi in pairs:
        g = math.gcd(m, mi)
        if g != 1:
            raise ValueError("crt_combine needs pairwise coprime moduli")
        # x' = x + m * t with t = (r - x)/m mod mi
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least primitive root modulo an odd prime p."""
    if p == 2:
        return 1
    fac = [q for q, _ in factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
        g += 1


@lru_cache(maxsize=None)
def conrey_generator(p: int) -> int:
    """Least g that generates (Z/p^k)^* for every k >= 1.

    This is the least primitive root mod p that also has full order mod
    p^2 (the Conrey-numbering generator choice).
    """
    fac = [q for q, _ in factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            if pow(g, p - 1, p * p) != 1:
                return g
        g += 1


def _bsgs(g: int, h: int, order: int, mod: int) -> int:
    """x with g^x = h (mod mod), 0 <= x < order; g has the given order."""
    m = math.isqrt(order) + 1
    table = {}
    e = 1
    for j in range(m):
        table.setdefault(e, j)
        e = e * g % mod
    gm_inv = pow(pow(g, m, mod), -1, mod)
    gamma = h % mod
    for i in range(m + 1):
        if gamma in table:
            return (i * m + table[gamma]) % order
        gamma = gamma * gm_inv % mod
    raise ValueError("discrete log does not exist")


def discrete_log(g: int, h: int, order: int, mod: int) -> int:
    """Pohlig-Hellman discrete log of h base g in a cyclic group."""
    parts = []
    for q, e in factorize(order):
        qe = q**e
        g_i = pow(g, order // qe, mod)
        h_i = pow(h, order // qe, mod)
        # lift digit by digit in the q-adic expansion
        x = 0
        gamma = pow(g_i, qe // q, mod)  # order q
        for k in range(e):
            rhs = pow(h_i * pow(g_i, -x % qe, mod) % mod, qe // q ** (k + 1), mod)
            d = _bsgs(gamma, rhs, q, mod)
            x += d * q**k
        parts.append((x, qe))
    return crt_combine(parts)


def powmod_vec(base: np.ndarray, exp: int, mod: int) -> np.ndarray:
    """Elementwise base**exp % mod for an int64 array, overflow safe."""
    if mod >= _POWMOD_LIMIT:
        raise ValueError("modulus too large for int64 powmod")
    if exp < 0:
        raise ValueError("powmod_vec requires exp >= 0")
    b = np.asarray(base, dtype=np.int64) % mod
    r = np.ones_like(b)
    while exp:
        if exp & 1:
            r = r * b % mod
        b = b * b % mod
        exp >>= 1
    return r
