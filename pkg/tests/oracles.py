"""Independent reference implementations for cross-checking.

Everything here is written from first principles on purpose: character
groups by explicit generators and brute-force discrete logs, modular
coefficients from an eta-product expansion, periods by numerical
quadrature, moments by direct Gamma products.  None of it shares code
with the package, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
from scipy.integrate import quad


# ---------------------------------------------------------------------------
# brute-force character groups


def _factor(m: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


def _multiplicative_order(a: int, m: int) -> int:
    x, k = a % m, 1
    while x != 1:
        x = x * a % m
        k += 1
    return k


def _cyclic_generator(p: int, e: int) -> int:
    """A generator of (Z/p^e)* for odd p, by exhaustive order testing."""
    mod = p**e
    phi = (p - 1) * p ** (e - 1)
    for g in range(2, mod):
        if math.gcd(g, p) == 1 and _multiplicative_order(g, mod) == phi:
            return g
    raise AssertionError("no generator found")


class BruteCharacterGroup:
    """All Dirichlet characters mod m as exponent vectors over explicit generators."""

    def __init__(self, m: int):
        self.modulus = m
        # each component: (cyclic order d, residue modulus, dlog table)
        self.components: list[tuple[int, int, dict[int, int]]] = []
        for p, e in _factor(m):
            mod = p**e
            if p == 2:
                if e == 1:
                    continue
                half = 2 ** (e - 2) if e >= 3 else 1
                minus_log, five_log = {}, {}
                for s in range(2):
                    for t in range(half):
                        n = (-1) ** s * pow(5, t, mod) % mod
                        minus_log[n] = s
                        five_log[n] = t
                self.components.append((2, mod, minus_log))
                if e >= 3:
                    self.components.append((half, mod, five_log))
            else:
                g = _cyclic_generator(p, e)
                phi = (p - 1) * p ** (e - 1)
                dlog = {}
                x = 1
                for k in range(phi):
                    dlog[x] = k
                    x = x * g % mod
                self.components.append((phi, mod, dlog))
        self.orders = [d for d, _, _ in self.components]

    def value_exponent(self, exps: tuple[int, ...], n: int) -> Fraction | None:
        """chi(n) as an exponent in Q/Z, or None when gcd(n, m) > 1."""
        if math.gcd(n, self.modulus) != 1:
            return None
        total = Fraction(0)
        for (d, mod, dlog), c in zip(self.components, exps):
            total += Fraction(c * dlog[n % mod], d)
        return total % 1

    def characters(self):
        """Iterate all exponent tuples."""
        def rec(i):
            if i == len(self.orders):
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(self.orders[i]):
                    yield (c,) + rest
        return rec(0)

    def characters_of_order_dividing(self, ell: int):
        """Exponent tuples whose character order divides ell."""
        choices = []
        for d in self.orders:
            g = math.gcd(d, ell)
            choices.append([k * (d // g) for k in range(g)])
        def rec(i):
            if i == len(choices):
                yield ()
                return
            for rest in rec(i + 1):
                for c in choices[i]:
                    yield (c,) + rest
        return rec(0)

    def is_primitive(self, exps: tuple[int, ...]) -> bool:
        """Not induced from m/p for any prime p | m."""
        m = self.modulus
        for p, _ in _factor(m):
            d = m // p
            induced = True
            for n in range(1 + d, m, d) if d > 1 else range(2, m):
                if math.gcd(n, m) == 1 and self.value_exponent(exps, n) != 0:
                    induced = False
                    break
            if induced:
                return False
        return True

    def order_of(self, exps: tuple[int, ...]) -> int:
        out = 1
        for d, c in zip(self.orders, exps):
            out = math.lcm(out, d // math.gcd(d, c))
        return out

    def conductor_of(self, exps: tuple[int, ...]) -> int:
        """Smallest d | m with chi trivial on units congruent to 1 mod d."""
        m = self.modulus
        for d in sorted(k for k in range(1, m + 1) if m % k == 0):
            trivial = True
            for n in range(1, m + 1):
                if math.gcd(n, m) == 1 and n % d == 1 % d:
                    if self.value_exponent(exps, n) != 0:
                        trivial = False
                        break
            if trivial:
                return d
        return m


def brute_primitive_value_tables(m: int, order: int) -> set[tuple]:
    """Value tables (as exponent tuples over 0..m-1) of primitive characters
    mod m of exact multiplicative order `order`."""
    return brute_primitive_tables_by_order(m, (order,))[order]


def brute_primitive_tables_by_order(m: int, orders: tuple[int, ...]) -> dict[int, set[tuple]]:
    """Like brute_primitive_value_tables for several orders, sharing one group."""
    group = BruteCharacterGroup(m)
    out: dict[int, set[tuple]] = {order: set() for order in orders}
    for order in orders:
        for exps in group.characters_of_order_dividing(order):
            if group.order_of(exps) != order:
                continue
            if not group.is_primitive(exps):
                continue
            tbl = tuple(group.value_exponent(exps, n) for n in range(m))
            out[order].add(tbl)
    return out


# ---------------------------------------------------------------------------
# modular coefficients for conductor 11


def eta_product_coefficients_11(n_max: int) -> list[int]:
    """Coefficients of q prod (1-q^k)^2 (1-q^(11k))^2 up to n_max.

    This is the weight-2 newform of level 11; its Fourier coefficients
    are the a_n of any curve in isogeny class 11.a.
    """
    def euler_factor(scale: int) -> np.ndarray:
        # prod (1 - q^(scale*k)) via pentagonal number theorem, dense array
        e = np.zeros(n_max + 1, dtype=np.int64)
        e[0] = 1
        j = 1
        while True:
            g1 = scale * j * (3 * j - 1) // 2
            g2 = scale * j * (3 * j + 1) // 2
            if g1 > n_max and g2 > n_max:
                break
            s = 1 if j % 2 == 0 else -1
            if g1 <= n_max:
                e[g1] += s
            if g2 <= n_max:
                e[g2] += s
            j += 1
        return e

    def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.convolve(a, b)[: n_max + 1]

    e1 = euler_factor(1)
    e11 = euler_factor(11)
    series = mul(mul(e1, e1), mul(e11, e11))
    shifted = np.zeros(n_max + 1, dtype=np.int64)
    shifted[1:] = series[: n_max]
    return shifted.tolist()


# ---------------------------------------------------------------------------
# periods by quadrature


def quadrature_periods(a_inv: tuple[int, int, int, int, int]) -> tuple[float, float]:
    """(real lattice period, imaginary lattice period magnitude) by direct
    integration of dx/y on the Weierstrass model y^2 = 4x^3+b2x^2+2b4x+b6."""
    a1, a2, a3, a4, a6 = a_inv
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6

    def f(x: float) -> float:
        return ((4 * x + b2) * x + 2 * b4) * x + b6

    roots = sorted(np.roots([4.0, float(b2), 2.0 * float(b4), float(b6)]), key=lambda z: z.real)
    reals = [r.real for r in roots if abs(r.imag) < 1e-9]
    if len(reals) == 3:
        e3, e2, e1 = reals
        om = 2.0 * quad(lambda x: 1.0 / math.sqrt(f(x)), e1, math.inf, limit=300)[0]
        nu = 2.0 * quad(lambda x: 1.0 / math.sqrt(-f(x)), e2, e1, limit=300)[0]
    else:
        r1 = reals[0]
        om = 2.0 * quad(lambda x: 1.0 / math.sqrt(f(x)), r1, math.inf, limit=300)[0]
        nu = 2.0 * quad(lambda x: 1.0 / math.sqrt(-f(x)), -math.inf, r1, limit=300)[0]
    return om, nu


# ---------------------------------------------------------------------------
# special functions


def direct_moment(s: complex, n: int) -> complex:
    """M_U(s, n) as a plain product of mpmath Gammas (no log accumulation)."""
    with mpmath.workdps(40):
        acc = mpmath.mpc(1)
        for j in range(1, n + 1):
            acc *= mpmath.gamma(j) * mpmath.gamma(j + s) / mpmath.gamma(j + s / 2) ** 2
        return complex(acc)


def highprec_gauss_sum(modulus: int, value_exponents: dict[int, Fraction]) -> complex:
    """tau(chi) summed at 30 digits from an explicit value table."""
    with mpmath.workdps(30):
        acc = mpmath.mpc(0)
        for n, ex in value_exponents.items():
            acc += mpmath.e ** (2j * mpmath.pi * ex) * mpmath.e ** (
                2j * mpmath.pi * mpmath.mpf(n) / modulus
            )
        return complex(acc)
