"""Primitive Dirichlet characters of order 4 and 6 in factored form.

A primitive character of conductor q = prod p^e is stored as its local
components, one per prime power.  For odd p the component is pinned by
its value on a fixed generator g of (Z/p^e)^*; at p = 2 the group is
{+-1} x <5> and the component is pinned by its values on -1 and 5.  The
generator at odd p is the least g that generates (Z/p^k)^* for every k,
which makes our labels agree with the Conrey numbering.

Classification facts used throughout (ell = 4 or 6):

* a local component of exact order 4 exists only at p = 1 (mod 4) with
  modulus p (two of them), and at modulus 16 (four of them);
* exact order 3: modulus p with p = 1 (mod 3) (two), and modulus 9 (two);
* exact order 6: modulus p with p = 1 (mod 6) (two), and modulus 9 (two);
* exact order 2: modulus p odd (one), modulus 4 (one), modulus 8 (two).

A character is "totally order ell" when every local component has exact
order ell.  Totally quartic characters of odd conductor are exactly the
quartic residue symbols chi_beta = [./beta] for primary squarefree
beta in Z[i] coprime to 2*conj(beta); totally sextic characters coprime
to 3 are cubic residue symbols times the Jacobi symbol of the same
modulus.  Families:

* ALL: every primitive character of exact order ell;
* TOTALLY: the totally-order-ell ones;
* PRIME_CONDUCTOR: prime conductor (these are automatically totally).
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .arith import (
    conrey_generator,
    crt_combine,
    discrete_log,
    factorize,
    is_prime,
    powmod_vec,
    primes_up_to,
    spf_sieve,
)
from .rings import (
    EisensteinInt,
    GaussianInt,
    cubic_residue_symbol,
    factor_eisenstein_squarefree,
    factor_gaussian_odd_squarefree,
    quartic_residue_symbol,
    split_prime_eisenstein,
    split_prime_gaussian,
)


class CharacterError(ValueError):
    pass


class NotPrimary(CharacterError):
    """beta is not a primary element."""


class NotSquarefree(CharacterError):
    """beta has a repeated prime factor."""


class ConjugateOverlap(CharacterError):
    """beta shares a prime with its conjugate (a rational prime divides it)."""


class NotCoprime(CharacterError):
    """Conrey index not coprime to the modulus."""


class UnsupportedOrder(CharacterError):
    """Character order outside {1, 2, 3, 4, 6}."""


SUPPORTED_ORDERS = (1, 2, 3, 4, 6)


@dataclass(frozen=True)
class CharacterValue:
    """A root of unity zeta_order^exponent, or 0 (exponent None)."""

    order: int
    exponent: int | None

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def to_complex(self) -> complex:
        if self.exponent is None:
            return 0j
        ang = 2.0 * math.pi * self.exponent / self.order
        return complex(math.cos(ang), math.sin(ang))


# ---------------------------------------------------------------------------
# local components


@dataclass(frozen=True)
class LocalCharacter:
    """Primitive character of modulus prime**exponent.

    For odd primes the character sends the Conrey generator g to
    zeta_order^value_exp (gcd(value_exp, order) = 1).  For prime 2 the
    fields are value_exp = exponent on 5 in units of zeta_{2^(e-2)}
    (0 when modulus is 4) and minus_exp = exponent on -1 in units of -1.
    """

    prime: int
    exponent: int
    order: int
    value_exp: int
    minus_exp: int = 0

    def __post_init__(self) -> None:
        p, e, n0 = self.prime, self.exponent, self.order
        if e < 1:
            raise CharacterError("exponent must be >= 1")
        if p == 2:
            if e == 2:
                ok = n0 == 2 and self.value_exp == 0 and self.minus_exp == 1
            elif e == 3:
                ok = n0 == 2 and self.value_exp == 1 and self.minus_exp in (0, 1)
            elif e == 4:
                ok = n0 == 4 and self.value_exp in (1, 3) and self.minus_exp in (0, 1)
            else:
                ok = False
            if not ok:
                raise CharacterError(f"no such primitive local character at 2^{e}")
            return
        if not is_prime(p):
            raise CharacterError(f"{p} is not prime")
        m = p ** (e - 1) * (p - 1)
        if n0 < 2 or m % n0 != 0 or math.gcd(self.value_exp, n0) != 1:
            raise CharacterError("value must be a primitive order-th root of unity")
        if not 0 <= self.value_exp < n0 or self.minus_exp != 0:
            raise CharacterError("bad local character data")
        if e >= 2 and (p ** (e - 2) * (p - 1)) % n0 == 0:
            raise CharacterError(f"order {n0} is not primitive at modulus {p}^{e}")

    @property
    def modulus(self) -> int:
        return self.prime**self.exponent

    def parity(self) -> int:
        """chi(-1), as +1 or -1."""
        if self.prime == 2:
            if self.exponent == 2:
                return -1
            return -1 if self.minus_exp else 1
        m = self.modulus - self.modulus // self.prime
        s = (self.value_exp * ((m // 2) % self.order)) % self.order
        if s == 0:
            return 1
        assert 2 * s == self.order, "chi(-1) must be +-1"
        return -1

    def exponent_at(self, n: int) -> int | None:
        """Exponent of chi(n) in units of zeta_order, or None when 0."""
        pe = self.modulus
        n %= pe
        if math.gcd(n, pe) != 1:
            return None
        if self.prime == 2:
            a, b = _two_adic_coords(n, self.exponent)
            if self.exponent == 2:
                return (self.minus_exp * a) % 2
            if self.exponent == 3:
                return (self.minus_exp * a + self.value_exp * b) % 2
            return (2 * self.minus_exp * a + self.value_exp * b) % 4
        m = pe - pe // self.prime
        g = conrey_generator(self.prime)
        h = pow(g, m // self.order, pe)
        t = pow(n, m // self.order, pe)
        val = 1
        for j in range(self.order):
            if t == val:
                return (self.value_exp * j) % self.order
            val = val * h % pe
        raise AssertionError("element not matched in cyclic subgroup")

    def exponent_table(self) -> np.ndarray:
        """int16 array of length modulus; entry -1 where chi is 0."""
        pe = self.modulus
        if self.prime == 2:
            tbl = np.full(pe, -1, dtype=np.int16)
            for n in range(1, pe, 2):
                tbl[n] = self.exponent_at(n)
            return tbl
        m = pe - pe // self.prime
        g = conrey_generator(self.prime)
        h = pow(g, m // self.order, pe)
        t = powmod_vec(np.arange(pe, dtype=np.int64), m // self.order, pe)
        tbl = np.full(pe, -1, dtype=np.int16)
        val = 1
        for j in range(self.order):
            tbl[t == val] = (self.value_exp * j) % self.order
            val = val * h % pe
        return tbl

    def conjugate(self) -> "LocalCharacter":
        if self.prime == 2:
            if self.exponent <= 3:
                return self
            return LocalCharacter(2, 4, 4, (-self.value_exp) % 4, self.minus_exp)
        return LocalCharacter(
            self.prime, self.exponent, self.order, (-self.value_exp) % self.order
        )

    def conrey_local_index(self) -> int:
        pe = self.modulus
        if self.prime == 2:
            if self.exponent == 2:
                return 3
            n = pow(5, self.value_exp, pe)
            if self.minus_exp:
                n = (-n) % pe
            return n
        m = pe - pe // self.prime
        g = conrey_generator(self.prime)
        return pow(g, (self.value_exp * (m // self.order)) % m, pe)


def _two_adic_coords(n: int, e: int) -> tuple[int, int]:
    """Write odd n = (-1)^a 5^b mod 2^e; returns (a, b)."""
    pe = 1 << e
    a = 0 if n % 4 == 1 else 1
    if a:
        n = (-n) % pe
    b, val = 0, 1
    while val != n:
        val = val * 5 % pe
        b += 1
        if b >= pe:  # pragma: no cover
            raise AssertionError("5 failed to generate")
    return a, b


# ---------------------------------------------------------------------------
# global characters


@dataclass(frozen=True)
class DirichletCharacter:
    """Primitive character, product of its local components."""

    locals: tuple[LocalCharacter, ...]
    conductor: int
    order: int

    @staticmethod
    def from_locals(components: tuple[LocalCharacter, ...] | list[LocalCharacter]) -> "DirichletCharacter":
        comps = tuple(sorted(components, key=lambda c: c.prime))
        primes = [c.prime for c in comps]
        if len(set(primes)) != len(primes):
            raise CharacterError("duplicate primes among local components")
        q = math.prod(c.modulus for c in comps)
        ell = math.lcm(*(c.order for c in comps)) if comps else 1
        if ell not in SUPPORTED_ORDERS:
            raise UnsupportedOrder(f"order {ell} not supported")
        return DirichletCharacter(comps, q, ell)

    @staticmethod
    def trivial() -> "DirichletCharacter":
        return DirichletCharacter((), 1, 1)

    def evaluate(self, n: int) -> CharacterValue:
        if self.conductor == 1:
            return CharacterValue(1, 0)
        total = 0
        for loc in self.locals:
            ex = loc.exponent_at(n)
            if ex is None:
                return CharacterValue(self.order, None)
            total += (self.order // loc.order) * ex
        return CharacterValue(self.order, total % self.order)

    def parity(self) -> int:
        sign = 1
        for loc in self.locals:
            sign *= loc.parity()
        return sign

    def is_odd(self) -> bool:
        return self.parity() == -1

    def exponent_table(self) -> np.ndarray:
        """int16 array t of length conductor: chi(n) = zeta_order^t[n mod q].

        Entries equal to `order` mark chi(n) = 0 (the extra class), so the
        table is bincount-friendly with order+1 classes.
        """
        q, ell = self.conductor, self.order
        if q == 1:
            return np.zeros(1, dtype=np.int16)
        idx = np.arange(q, dtype=np.int64)
        total = np.zeros(q, dtype=np.int64)
        zero = np.zeros(q, dtype=bool)
        for loc in self.locals:
            vals = loc.exponent_table()[idx % loc.modulus]
            zero |= vals < 0
            total += (ell // loc.order) * np.where(vals < 0, 0, vals)
        total %= ell
        total[zero] = ell
        return total.astype(np.int16)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            tuple(c.conjugate() for c in self.locals), self.conductor, self.order
        )

    def is_totally(self) -> bool:
        """Every local component has exact order = global order."""
        return self.order > 1 and all(c.order == self.order for c in self.locals)

    def has_prime_conductor(self) -> bool:
        return is_prime(self.conductor)

    def conrey_index(self) -> int:
        if self.conductor == 1:
            return 1
        pairs = [(c.conrey_local_index(), c.modulus) for c in self.locals]
        return crt_combine(pairs)

    def label(self) -> str:
        return f"{self.conductor}.{self.conrey_index()}"

    def roots_of_unity(self) -> np.ndarray:
        """complex128 lookup of length order+1: zeta^j, last entry 0."""
        ell = self.order
        ang = 2.0 * np.pi * np.arange(ell + 1) / ell
        out = np.exp(1j * ang)
        out[ell] = 0.0
        return out


# ---------------------------------------------------------------------------
# residue-symbol constructors


def quartic_from_beta(beta: GaussianInt) -> DirichletCharacter:
    """The quartic residue symbol character chi_beta(n) = [n/beta].

    beta must be primary and squarefree with odd norm, coprime to its
    conjugate.  beta = 1 gives the trivial character (by convention it
    counts as totally quartic).  The conductor is N(beta).
    """
    factors = factor_gaussian_odd_squarefree(beta)
    comps = []
    for pi in factors:
        p = pi.norm()
        v = quartic_residue_symbol(conrey_generator(p), pi).exponent
        assert v is not None and v % 2 == 1
        comps.append(LocalCharacter(p, 1, 4, v))
    return DirichletCharacter.from_locals(comps)


def cubic_from_beta(beta: EisensteinInt) -> DirichletCharacter:
    """The cubic residue symbol character chi_beta(n) = (n/beta)_3."""
    factors = factor_eisenstein_squarefree(beta)
    comps = []
    for pi in factors:
        p = pi.norm()
        v = cubic_residue_symbol(conrey_generator(p), pi).exponent
        assert v in (1, 2)
        comps.append(LocalCharacter(p, 1, 3, v))
    return DirichletCharacter.from_locals(comps)


def sextic_from_beta(beta: EisensteinInt) -> DirichletCharacter:
    """Totally sextic character: cubic chi_beta times the Jacobi symbol mod N(beta).

    For each prime p | N(beta) the local factor is the order-6 character
    (n/p) * (n/pi)_3.  beta = 1 gives the trivial character.
    """
    factors = factor_eisenstein_squarefree(beta)
    comps = []
    for pi in factors:
        p = pi.norm()
        c = cubic_residue_symbol(conrey_generator(p), pi).exponent
        assert c in (1, 2)
        # zeta_6 exponent of zeta_3^c * (-1): 2c + 3 mod 6
        comps.append(LocalCharacter(p, 1, 6, (2 * c + 3) % 6))
    return DirichletCharacter.from_locals(comps)


@lru_cache(maxsize=None)
def _canonical_quartic_exp(p: int) -> int:
    """Exponent of [g/pi] for the canonical primary pi over p (Im > 0)."""
    pi, _ = split_prime_gaussian(p)
    e = quartic_residue_symbol(conrey_generator(p), pi).exponent
    assert e is not None
    return e


@lru_cache(maxsize=None)
def _canonical_cubic_exp(p: int) -> int:
    """Exponent of (g/pi)_3 for the canonical primary pi over p (b > 0)."""
    pi, _ = split_prime_eisenstein(p)
    e = cubic_residue_symbol(conrey_generator(p), pi).exponent
    assert e is not None
    return e


def quartic_beta_of(chi: DirichletCharacter) -> GaussianInt:
    """Recover primary squarefree beta with chi = chi_beta on the odd
    order-4 part of chi.  Requires every odd local of chi to have order 4."""
    beta = GaussianInt(1, 0)
    for loc in chi.locals:
        if loc.prime == 2:
            continue
        if loc.order != 4:
            raise CharacterError("character is not totally quartic away from 2")
        pi, pibar = split_prime_gaussian(loc.prime)
        beta = beta * (pi if loc.value_exp == _canonical_quartic_exp(loc.prime) else pibar)
    return beta


def sextic_beta_of(chi: DirichletCharacter) -> EisensteinInt:
    """Recover beta for a totally sextic chi with conductor coprime to 3."""
    beta = EisensteinInt(1, 0)
    for loc in chi.locals:
        if loc.prime == 3:
            raise CharacterError("conductor divisible by 9 has no beta form")
        if loc.order != 6:
            raise CharacterError("character is not totally sextic")
        c = ((loc.value_exp + 3) // 2) % 3
        pi, pibar = split_prime_eisenstein(loc.prime)
        beta = beta * (pi if c == _canonical_cubic_exp(loc.prime) else pibar)
    return beta


def cubic_beta_of(chi: DirichletCharacter) -> EisensteinInt:
    """Recover beta for a cubic character with conductor coprime to 3."""
    beta = EisensteinInt(1, 0)
    for loc in chi.locals:
        if loc.prime == 3:
            raise CharacterError("conductor divisible by 9 has no beta form")
        if loc.order != 3:
            raise CharacterError("character is not cubic")
        pi, pibar = split_prime_eisenstein(loc.prime)
        beta = beta * (pi if loc.value_exp == _canonical_cubic_exp(loc.prime) else pibar)
    return beta


# ---------------------------------------------------------------------------
# Conrey labels


def conrey_index(chi: DirichletCharacter) -> int:
    return chi.conrey_index()


def from_conrey(modulus: int, index: int) -> DirichletCharacter:
    """The primitive character attached to the Conrey label (modulus, index).

    When the label is imprimitive the inducing primitive character is
    returned (its conductor divides the modulus).  Orders outside
    {1, 2, 3, 4, 6} raise UnsupportedOrder.
    """
    if modulus < 1:
        raise CharacterError("modulus must be >= 1")
    index %= max(modulus, 1)
    if math.gcd(index, modulus) != 1:
        raise NotCoprime(f"index {index} is not coprime to {modulus}")
    comps = []
    for p, e in factorize(modulus):
        if p == 2:
            if e == 1:
                continue
            a, b = _two_adic_coords(index % (1 << e), e)
            half_order = (1 << (e - 2)) if e >= 3 else 1
            n5 = half_order // math.gcd(b, half_order) if b else 1
            if n5 > 4:
                raise UnsupportedOrder("2-adic order exceeds 4")
            if n5 == 4:
                comps.append(LocalCharacter(2, 4, 4, (b * 4 // half_order) % 4, a))
            elif n5 == 2:
                comps.append(LocalCharacter(2, 3, 2, 1, a))
            elif a:
                comps.append(LocalCharacter(2, 2, 2, 0, 1))
            continue
        pe = p**e
        m = pe - pe // p
        g = conrey_generator(p)
        aa = discrete_log(g % pe, index % pe, m, pe)
        if aa == 0:
            continue
        n0 = m // math.gcd(aa, m)
        if n0 not in (2, 3, 4, 6):
            raise UnsupportedOrder(f"local order {n0} at {p} not supported")
        v = (aa * n0 // m) % n0
        # minimal modulus where an order-n0 character lives: e = v_p(n0) + 1
        e_min = 1
        t = n0
        while t % p == 0:
            t //= p
            e_min += 1
        comps.append(LocalCharacter(p, e_min, n0, v))
    return DirichletCharacter.from_locals(comps)


# ---------------------------------------------------------------------------
# families


class Variant(Enum):
    ALL = "all"
    TOTALLY = "tot"
    PRIME_CONDUCTOR = "prime"

    @staticmethod
    def parse(text: str) -> "Variant":
        t = text.strip().lower()
        for v in Variant:
            if t in (v.value, v.name.lower()):
                return v
        if t in ("totally", "total"):
            return Variant.TOTALLY
        if t in ("prime_conductor", "prime-conductor"):
            return Variant.PRIME_CONDUCTOR
        raise ValueError(f"unknown family variant {text!r}")


@dataclass(frozen=True)
class FamilySpec:
    """A family of primitive characters: order 4 or 6, one of three variants.

    coprime_to: emit only conductors coprime to this integer (use the
    twisted curve's conductor).  sextic_include_nine widens TOTALLY
    sextic to conductors divisible by 9 (the ALL variant always includes
    them).
    """

    order: int
    variant: Variant
    coprime_to: int = 1
    sextic_include_nine: bool = False

    def __post_init__(self) -> None:
        if self.order not in (4, 6):
            raise ValueError("family order must be 4 or 6")
        if self.coprime_to < 1:
            raise ValueError("coprime_to must be >= 1")

    def tag(self) -> str:
        name = "quartic" if self.order == 4 else "sextic"
        return f"{name}-{self.variant.value}"


def _local_options(p: int, e: int, ell: int) -> list[LocalCharacter]:
    """All primitive local characters at p^e of order dividing ell (> 1)."""
    out: list[LocalCharacter] = []
    if p == 2:
        if e == 2:
            out.append(LocalCharacter(2, 2, 2, 0, 1))
        elif e == 3:
            out.extend(LocalCharacter(2, 3, 2, 1, a) for a in (0, 1))
        elif e == 4 and ell % 4 == 0:
            out.extend(
                LocalCharacter(2, 4, 4, w, a) for a in (0, 1) for w in (1, 3)
            )
        return out
    orders = [d for d in (2, 3, 4, 6) if ell % d == 0]
    for n0 in orders:
        if e == 1:
            if (p - 1) % n0 != 0:
                continue
        elif e == 2 and p == 3 and n0 in (3, 6):
            pass  # modulus 9 carries cubic and sextic components
        else:
            continue
        for v in range(1, n0):
            if math.gcd(v, n0) == 1:
                out.append(LocalCharacter(p, e, n0, v))
    return out


def _admissible(spec: FamilySpec, factorization: list[tuple[int, int]]) -> list[list[LocalCharacter]]:
    """Option lists per prime power, or [] if the conductor is impossible."""
    option_lists = []
    for p, e in factorization:
        opts = _local_options(p, e, spec.order)
        if spec.variant is not Variant.ALL:
            opts = [o for o in opts if o.order == spec.order]
            if p == 3 and spec.order == 6 and not spec.sextic_include_nine:
                opts = []
        if not opts:
            return []
        option_lists.append(opts)
    return option_lists


def characters_of_conductor(spec: FamilySpec, q: int, spf: np.ndarray | None = None) -> list[DirichletCharacter]:
    """Family members of conductor exactly q, sorted by Conrey index."""
    if q < 3:
        return []
    if math.gcd(q, spec.coprime_to) != 1:
        return []
    fac = factorize(q, spf)
    if spec.variant is Variant.PRIME_CONDUCTOR and (len(fac) != 1 or fac[0][1] != 1):
        return []
    option_lists = _admissible(spec, fac)
    if not option_lists:
        return []
    found = []
    for combo in itertools.product(*option_lists):
        if math.lcm(*(c.order for c in combo)) != spec.order:
            continue
        found.append(DirichletCharacter.from_locals(combo))
    found.sort(key=lambda c: c.conrey_index())
    return found


def enumerate_family(spec: FamilySpec, x_max: int):
    """Yield family members with conductor <= x_max.

    Deterministic order: nondecreasing conductor, then increasing Conrey
    index within a conductor.
    """
    if x_max < 3:
        return
    spf = spf_sieve(x_max)
    if spec.variant is Variant.PRIME_CONDUCTOR:
        step = spec.order  # conductors are primes = 1 mod order
        for p in primes_up_to(x_max):
            p = int(p)
            if p % step == 1:
                yield from characters_of_conductor(spec, p, spf)
        return
    for q in range(3, x_max + 1):
        yield from characters_of_conductor(spec, q, spf)


def _count_composition(spec: FamilySpec, fac: list[tuple[int, int]]) -> int:
    """Number of family members of this exact conductor, without building them."""
    if spec.variant is Variant.PRIME_CONDUCTOR and (len(fac) != 1 or fac[0][1] != 1):
        return 0
    per_order: list[dict[int, int]] = []
    for p, e in fac:
        counts: dict[int, int] = {}
        for o in _local_options(p, e, spec.order):
            counts[o.order] = counts.get(o.order, 0) + 1
        if spec.variant is not Variant.ALL:
            counts = {spec.order: counts.get(spec.order, 0)}
            if p == 3 and spec.order == 6 and not spec.sextic_include_nine:
                counts = {spec.order: 0}
        if sum(counts.values()) == 0:
            return 0
        per_order.append(counts)
    if spec.variant is not Variant.ALL:
        return math.prod(c[spec.order] for c in per_order)
    total = math.prod(sum(c.values()) for c in per_order)
    # remove lcm < order: all-quadratic, and for sextic all-cubic
    total -= math.prod(c.get(2, 0) for c in per_order)
    if spec.order == 6:
        total -= math.prod(c.get(3, 0) for c in per_order)
    return total


def conductor_counts(spec: FamilySpec, x_max: int) -> np.ndarray:
    """counts[q] = number of family members of conductor exactly q."""
    counts = np.zeros(x_max + 1, dtype=np.int64)
    if x_max < 3:
        return counts
    spf = spf_sieve(x_max)
    for q in range(3, x_max + 1):
        if math.gcd(q, spec.coprime_to) != 1:
            continue
        counts[q] = _count_composition(spec, factorize(q, spf))
    return counts


def count_family(spec: FamilySpec, grid: list[int]) -> list[int]:
    """|family(X)| for each X in grid (any order); one sieve pass."""
    if not grid:
        return []
    x_max = max(grid)
    csum = np.cumsum(conductor_counts(spec, x_max))
    return [int(csum[x]) for x in grid]


def sum_inverse_sqrt_conductor(spec: FamilySpec, x_max: int) -> float:
    """Sum of conductor^(-1/2) over the family up to x_max."""
    counts = conductor_counts(spec, x_max)
    q = np.arange(x_max + 1, dtype=np.float64)
    q[0] = 1.0
    return float(np.sum(counts / np.sqrt(q)))


def write_family_csv(spec: FamilySpec, x_max: int, path: str) -> int:
    """Stream the family to CSV (conductor, conrey_index, order, variant, parity)."""
    n = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["conductor", "conrey_index", "order", "variant", "parity"])
        for chi in enumerate_family(spec, x_max):
            w.writerow(
                [chi.conductor, chi.conrey_index(), chi.order, spec.variant.value, chi.parity()]
            )
            n += 1
    return n
