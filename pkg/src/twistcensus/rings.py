"""Exact arithmetic in Z[i] and Z[w], w = exp(2*pi*i/3).

Both rings are norm-Euclidean, so gcds exist and rational primes split
explicitly:

* in Z[i], a prime p = 1 (mod 4) factors as pi * conj(pi) with
  N(pi) = p, while p = 3 (mod 4) stays inert and 2 = -i*(1+i)^2 ramifies;
* in Z[w], a prime p = 1 (mod 3) factors as pi * conj(pi), p = 2 (mod 3)
  stays inert and 3 = -w^2*(1-w)^2 ramifies.

"Primary" pins down a canonical associate among units:

* z in Z[i] is primary when z = 1 (mod (1+i)^3); every odd z has exactly
  one primary associate among z, iz, -z, -iz.
* z in Z[w] is primary when z = 1 (mod 3); every z coprime to 3 has
  exactly one primary associate among the six unit multiples.

The quartic residue symbol [a/pi] is the unique power of i congruent to
a^((p-1)/4) mod pi; the cubic symbol (a/pi) is the power of w congruent
to a^((p-1)/3) mod pi.  Both are computed through the field isomorphism
Z[i]/(pi) = F_p (resp. Z[w]/(pi) = F_p), which sends i (resp. w) to an
explicit root of x^2+1 (resp. x^2+x+1) in F_p determined by pi.  Symbols
are returned as exponents, never as floating-point numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import is_prime, jacobi


class RingError(ValueError):
    pass


class ZeroElement(RingError):
    """Operation undefined at zero."""


class EvenElement(RingError):
    """Element is divisible by the ramified prime over 2."""


class RamifiedElement(RingError):
    """Element is divisible by the ramified prime over 3."""


class NonSplitPrime(RingError):
    """Rational prime does not split in the requested ring."""


class BadModulus(RingError):
    """Residue-symbol modulus is not a prime of split norm."""


@dataclass(frozen=True)
class GaussianInt:
    """Element re + im*i of Z[i]."""

    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianInt(a * c - b * d, a * d + b * c)

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_odd(self) -> bool:
        """Odd means coprime to 1+i, i.e. norm is odd."""
        return self.norm() % 2 == 1

    def times_i(self) -> "GaussianInt":
        return GaussianInt(-self.im, self.re)

    def associates(self) -> list["GaussianInt"]:
        z = self
        return [z, z.times_i(), -z, (-z).times_i()]

    def is_primary(self) -> bool:
        """z = 1 mod (1+i)^3.  Only odd elements can be primary."""
        x, y = self.re - 1, self.im
        # divisibility by (1+i)^3 = -2+2i: (y-x) and (x+y) both = 0 mod 4
        return (y - x) % 4 == 0 and (x + y) % 4 == 0

    def primary_associate(self) -> tuple["GaussianInt", int]:
        """The primary associate and k such that i^k * self is primary."""
        if self.is_zero():
            raise ZeroElement("zero has no primary associate")
        if not self.is_odd():
            raise EvenElement("even Gaussian integers have no primary associate")
        z = self
        for k in range(4):
            if z.is_primary():
                return z, k
            z = z.times_i()
        raise AssertionError("unreachable: one associate of an odd element is primary")

    def divides(self, other: "GaussianInt") -> bool:
        n = self.norm()
        if n == 0:
            raise ZeroElement("division by zero")
        t = other * self.conj()
        return t.re % n == 0 and t.im % n == 0

    def divmod(self, other: "GaussianInt") -> tuple["GaussianInt", "GaussianInt"]:
        """Euclidean quotient and remainder with N(r) <= N(other)/2."""
        n = other.norm()
        if n == 0:
            raise ZeroElement("division by zero")
        t = self * other.conj()
        q = GaussianInt(_round_div(t.re, n), _round_div(t.im, n))
        return q, self - q * other

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return f"({self.re}{self.im:+d}i)"


def _round_div(a: int, b: int) -> int:
    """Round a/b to the nearest integer (b > 0), halves away from zero."""
    if a >= 0:
        return (2 * a + b) // (2 * b)
    return -((-2 * a + b) // (2 * b))


def gaussian_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a


@lru_cache(maxsize=None)
def split_prime_gaussian(p: int) -> tuple[GaussianInt, GaussianInt]:
    """Primary pi, conj(pi) over p = 1 (mod 4), with Im(pi) > 0.

    pi * conj(pi) = p exactly.
    """
    p = int(p)
    if not is_prime(p) or p % 4 != 1:
        raise NonSplitPrime(f"{p} does not split in Z[i]")
    # sqrt(-1) mod p from a quadratic non-residue
    n = 2
    while jacobi(n, p) != -1:
        n += 1
    x = pow(n, (p - 1) // 4, p)
    pi = gaussian_gcd(GaussianInt(p, 0), GaussianInt(x, 1))
    assert pi.norm() == p
    pi, _ = pi.primary_associate()
    if pi.im < 0:
        pi = pi.conj()
    assert pi.is_primary() and pi.conj().is_primary()
    return pi, pi.conj()


@dataclass(frozen=True)
class EisensteinInt:
    """Element a + b*w of Z[w], with w^2 + w + 1 = 0."""

    a: int
    b: int

    def __add__(self, other: "EisensteinInt") -> "EisensteinInt":
        return EisensteinInt(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "EisensteinInt") -> "EisensteinInt":
        return EisensteinInt(self.a - other.a, self.b - other.b)

    def __mul__(self, other: "EisensteinInt") -> "EisensteinInt":
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a+bw)(c+dw) = ac - bd + (ad + bc - bd) w
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    def __neg__(self) -> "EisensteinInt":
        return EisensteinInt(-self.a, -self.b)

    def conj(self) -> "EisensteinInt":
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def times_w(self) -> "EisensteinInt":
        # w * (a + bw) = -b + (a-b) w
        return EisensteinInt(-self.b, self.a - self.b)

    def associates(self) -> list["EisensteinInt"]:
        out = []
        z = self
        for _ in range(3):
            out.extend([z, -z])
            z = z.times_w()
        return out

    def is_primary(self) -> bool:
        """z = 1 (mod 3)."""
        return self.a % 3 == 1 and self.b % 3 == 0

    def primary_associate(self) -> tuple["EisensteinInt", int]:
        """The primary associate and the index 0..5 of the unit applied."""
        if self.is_zero():
            raise ZeroElement("zero has no primary associate")
        if self.norm() % 3 == 0:
            raise RamifiedElement("elements divisible by 1-w have no primary associate")
        for k, u in enumerate(self.associates()):
            if u.is_primary():
                return u, k
        raise AssertionError("unreachable: one of six associates is primary")

    def divides(self, other: "EisensteinInt") -> bool:
        n = self.norm()
        if n == 0:
            raise ZeroElement("division by zero")
        t = other * self.conj()
        return t.a % n == 0 and t.b % n == 0

    def divmod(self, other: "EisensteinInt") -> tuple["EisensteinInt", "EisensteinInt"]:
        n = other.norm()
        if n == 0:
            raise ZeroElement("division by zero")
        t = self * other.conj()
        q = EisensteinInt(_round_div(t.a, n), _round_div(t.b, n))
        return q, self - q * other

    def to_complex(self) -> complex:
        return complex(self.a - self.b / 2.0, self.b * math.sqrt(3) / 2.0)

    def __str__(self) -> str:
        return f"({self.a}{self.b:+d}w)"


def eisenstein_gcd(a: EisensteinInt, b: EisensteinInt) -> EisensteinInt:
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a


@lru_cache(maxsize=None)
def split_prime_eisenstein(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """Primary pi, conj(pi) over p = 1 (mod 3), with positive w-coefficient.

    pi * conj(pi) = p exactly.
    """
    p = int(p)
    if not is_prime(p) or p % 3 != 1:
        raise NonSplitPrime(f"{p} does not split in Z[w]")
    # nontrivial cube root of unity mod p
    g = 2
    while True:
        r = pow(g, (p - 1) // 3, p)
        if r != 1:
            break
        g += 1
    pi = eisenstein_gcd(EisensteinInt(p, 0), EisensteinInt(r, -1))
    assert pi.norm() == p
    pi, _ = pi.primary_associate()
    if pi.b < 0:
        pi = pi.conj()
    assert pi.is_primary() and pi.conj().is_primary()
    return pi, pi.conj()


@dataclass(frozen=True)
class ResidueSymbolExponent:
    """A root of unity i^exponent or w^exponent, or the value 0.

    modulus_order is 4 for quartic symbols and 3 for cubic symbols.
    exponent is None exactly when the symbol value is 0.
    """

    modulus_order: int
    exponent: int | None

    def __post_init__(self) -> None:
        if self.modulus_order not in (3, 4):
            raise ValueError("modulus_order must be 3 or 4")
        if self.exponent is not None and not 0 <= self.exponent < self.modulus_order:
            raise ValueError("exponent out of range")

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def to_complex(self) -> complex:
        if self.exponent is None:
            return 0j
        ang = 2 * math.pi * self.exponent / self.modulus_order
        return complex(math.cos(ang), math.sin(ang))

    def __mul__(self, other: "ResidueSymbolExponent") -> "ResidueSymbolExponent":
        if self.modulus_order != other.modulus_order:
            raise ValueError("mixed symbol orders")
        if self.exponent is None or other.exponent is None:
            return ResidueSymbolExponent(self.modulus_order, None)
        return ResidueSymbolExponent(
            self.modulus_order, (self.exponent + other.exponent) % self.modulus_order
        )


def _embed_gaussian(alpha: GaussianInt | int, pi: GaussianInt, p: int) -> tuple[int, int]:
    """Image of alpha in F_p = Z[i]/(pi) and the image u of i."""
    c, d = pi.re, pi.im
    if d % p == 0:
        raise BadModulus("pi must have split norm")
    u = (-c * pow(d, -1, p)) % p
    if isinstance(alpha, GaussianInt):
        t = (alpha.re + alpha.im * u) % p
    else:
        t = alpha % p
    return t, u


def quartic_residue_symbol(alpha: GaussianInt | int, pi: GaussianInt) -> ResidueSymbolExponent:
    """[alpha/pi] as i^e, or 0 when pi divides alpha.

    pi must be a Gaussian prime of norm p = 1 (mod 4).
    """
    p = pi.norm()
    if p % 4 != 1 or not is_prime(p):
        raise BadModulus(f"norm {p} is not a split prime")
    t, u = _embed_gaussian(alpha, pi, p)
    if t == 0:
        return ResidueSymbolExponent(4, None)
    s = pow(t, (p - 1) // 4, p)
    for e, val in enumerate((1, u, p - 1, p - u)):
        if s == val:
            return ResidueSymbolExponent(4, e)
    raise AssertionError("quartic symbol value is not a 4th root of unity")


def _embed_eisenstein(alpha: EisensteinInt | int, pi: EisensteinInt, p: int) -> tuple[int, int]:
    """Image of alpha in F_p = Z[w]/(pi) and the image r of w."""
    c, d = pi.a, pi.b
    if d % p == 0:
        raise BadModulus("pi must have split norm")
    r = (-c * pow(d, -1, p)) % p
    if isinstance(alpha, EisensteinInt):
        t = (alpha.a + alpha.b * r) % p
    else:
        t = alpha % p
    return t, r


def cubic_residue_symbol(alpha: EisensteinInt | int, pi: EisensteinInt) -> ResidueSymbolExponent:
    """(alpha/pi)_3 as w^e, or 0 when pi divides alpha.

    pi must be an Eisenstein prime of norm p = 1 (mod 3).  The symbol
    depends only on the ideal (pi), so pi and -pi give the same result.
    """
    p = pi.norm()
    if p % 3 != 1 or not is_prime(p):
        raise BadModulus(f"norm {p} is not a split prime")
    t, r = _embed_eisenstein(alpha, pi, p)
    if t == 0:
        return ResidueSymbolExponent(3, None)
    s = pow(t, (p - 1) // 3, p)
    for e, val in enumerate((1, r, r * r % p)):
        if s == val:
            return ResidueSymbolExponent(3, e)
    raise AssertionError("cubic symbol value is not a cube root of unity")


def factor_gaussian_odd_squarefree(beta: GaussianInt) -> list[GaussianInt]:
    """Factor beta = product of distinct primary split primes.

    Returns the primary prime factors.  Raises if beta is not primary,
    has even or non-squarefree norm, or shares a prime with its
    conjugate (a rational prime divides it).
    """
    from .characters import ConjugateOverlap, NotPrimary, NotSquarefree  # local import

    if beta.is_zero():
        raise ZeroElement("zero is not factorable")
    if not beta.is_primary():
        raise NotPrimary(f"{beta} is not primary")
    n = beta.norm()
    if n == 1:
        return []
    factors = []
    for p, e in _factor_int(n):
        if p == 2:
            raise NotSquarefree("even norm")
        if p % 4 == 3:
            # inert prime divides beta, hence also conj(beta)
            raise ConjugateOverlap(f"inert prime {p} divides beta")
        if e >= 2:
            if GaussianInt(p, 0).divides(beta):
                raise ConjugateOverlap(f"both primes over {p} divide beta")
            raise NotSquarefree(f"{p}^2 divides the norm")
        pi, pibar = split_prime_gaussian(p)
        factors.append(pi if pi.divides(beta) else pibar)
    return factors


def factor_eisenstein_squarefree(beta: EisensteinInt) -> list[EisensteinInt]:
    """Factor primary beta into distinct primary split primes over p = 1 mod 3."""
    from .characters import ConjugateOverlap, NotPrimary, NotSquarefree  # local import

    if beta.is_zero():
        raise ZeroElement("zero is not factorable")
    if not beta.is_primary():
        raise NotPrimary(f"{beta} is not primary")
    n = beta.norm()
    if n == 1:
        return []
    factors = []
    for p, e in _factor_int(n):
        if p == 3:
            raise RamifiedElement("1-w divides beta")
        if p % 3 == 2:
            raise ConjugateOverlap(f"inert prime {p} divides beta")
        if e >= 2:
            if EisensteinInt(p, 0).divides(beta):
                raise ConjugateOverlap(f"both primes over {p} divide beta")
            raise NotSquarefree(f"{p}^2 divides the norm")
        pi, pibar = split_prime_eisenstein(p)
        factors.append(pi if pi.divides(beta) else pibar)
    return factors


def _factor_int(n: int) -> list[tuple[int, int]]:
    from .arith import factorize

    return factorize(n)
