"""Gauss sums three ways, the Hecke character lambda, and family statistics.

tau(chi) = sum_r chi(r) e(r/q).  Routes:

* DIRECT: O(q) summation from the value table (reference oracle).
* FACTORED: tau(chi1 chi2) = chi1(q2) chi2(q1) tau(chi1) tau(chi2) over the
  local components, with each local sum computed directly (O(p), cached).
* CLOSED_FORM: for quartic chi of odd conductor q = q2*q4,
      tau(chi)^2 = (-q4 | q2) q2 tau(chi_beta)^2,
      tau(chi_beta)^2 = mu(beta) chi_beta(-1) sqrt(N(beta)) beta,
  and for totally sextic chi of conductor q coprime to 6,
      tau(chi)   = mu(q) chi3(2) tau(chi2) tau(chi3) conj(beta)/q,
      tau(chi)^2 = q * chi3(4) (-1 | q) tau(chi3)^2 conj(beta)^2 / q^2,
  where chi2, chi3 are the quadratic and cubic parts modulo the same q and
  beta is the Gaussian/Eisenstein modulus element.  Quadratic characters
  have the classical tau(chi)^2 = chi(-1) q.

Only the square tau^2 has a closed form in the quartic case; tau itself is
pinned just up to sign, which is all the functional equation needs.  Even
quartic conductors have no published closed form for the odd*even cross, so
they go through the FACTORED route (tiny direct sums at 4, 8, 16 composed
with closed odd-part squares).
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .arith import factorize, jacobi
from .characters import (
    CharacterError,
    DirichletCharacter,
    FamilySpec,
    LocalCharacter,
    enumerate_family,
    quartic_beta_of,
    sextic_beta_of,
)
from .rings import GaussianInt, RamifiedElement, factor_gaussian_odd_squarefree

_EPS = float(np.finfo(np.float64).eps)


class ConductorNotCoprime(ValueError):
    """Twisting character conductor shares a factor with the curve conductor."""


class EvenConductor(ValueError):
    """Closed form stated for odd conductors only."""


class GaussMethod(Enum):
    DIRECT = "direct"
    FACTORED = "factored"
    CLOSED_FORM = "closed"


@dataclass(frozen=True)
class GaussSumValue:
    """tau(chi), or tau(chi)^2 when is_squared; |tau| = sqrt(conductor)."""

    value: complex
    conductor: int
    method: GaussMethod
    abs_error_bound: float
    is_squared: bool = False


def _phase(num: int, den: int) -> complex:
    return cmath.exp(2j * math.pi * num / den)


# ---------------------------------------------------------------------------
# direct and factored routes


def gauss_sum_direct(chi: DirichletCharacter) -> GaussSumValue:
    """Reference O(q) summation in double precision."""
    q = chi.conductor
    if q == 1:
        return GaussSumValue(1.0 + 0j, 1, GaussMethod.DIRECT, _EPS)
    tbl = chi.exponent_table()
    vals = chi.roots_of_unity()[tbl]
    vals *= np.exp((2j * np.pi / q) * np.arange(q))
    total = complex(np.sum(vals))
    return GaussSumValue(total, q, GaussMethod.DIRECT, 8.0 * _EPS * q)


@lru_cache(maxsize=None)
def local_tau(loc: LocalCharacter) -> complex:
    """Direct Gauss sum of one local component, cached per component."""
    conj = loc.conjugate()
    if conj.value_exp < loc.value_exp:
        # compute the conjugate once: tau(conj chi) = chi(-1) conj(tau(chi))
        return loc.parity() * local_tau(conj).conjugate()
    pe = loc.modulus
    tbl = loc.exponent_table()
    n = np.nonzero(tbl >= 0)[0]
    angles = tbl[n].astype(np.float64) / loc.order + n.astype(np.float64) / pe
    return complex(np.sum(np.exp(2j * np.pi * angles)))


def _cross_factor(a: LocalCharacter, b: LocalCharacter) -> complex:
    """chi_a(m_b) * chi_b(m_a)."""
    ea = a.exponent_at(b.modulus)
    eb = b.exponent_at(a.modulus)
    assert ea is not None and eb is not None
    return _phase(ea, a.order) * _phase(eb, b.order)


def gauss_sum_factored(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi) from local sums and pairwise cross factors."""
    q = chi.conductor
    if q == 1:
        return GaussSumValue(1.0 + 0j, 1, GaussMethod.FACTORED, _EPS)
    total = 1.0 + 0j
    comps = chi.locals
    for i, loc in enumerate(comps):
        total *= local_tau(loc)
        for other in comps[i + 1 :]:
            total *= _cross_factor(loc, other)
    bound = 8.0 * _EPS * max(loc.modulus for loc in comps) * len(comps)
    return GaussSumValue(total, q, GaussMethod.FACTORED, bound)


# ---------------------------------------------------------------------------
# closed forms


def _chi_beta_parity(factors: list[GaussianInt]) -> int:
    """chi_beta(-1) = prod (-1)^((p-1)/4) over the primes of beta."""
    sign = 1
    for pi in factors:
        if (pi.norm() - 1) // 4 % 2:
            sign = -sign
    return sign


def tau_sq_closed_totally_quartic(beta: GaussianInt) -> GaussSumValue:
    """tau(chi_beta)^2 = mu(beta) chi_beta(-1) sqrt(N(beta)) beta."""
    factors = factor_gaussian_odd_squarefree(beta)
    n = beta.norm()
    mu = -1 if len(factors) % 2 else 1
    value = mu * _chi_beta_parity(factors) * math.sqrt(n) * beta.to_complex()
    return GaussSumValue(value, n, GaussMethod.CLOSED_FORM, 8.0 * _EPS * n, True)


def tau_sq_all_quartic(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi)^2 for quartic chi of odd conductor q = q2 * q4.

    Splits chi into its totally quartic part (conductor q4, beta form) and
    quadratic part (conductor q2); tau(chi)^2 = (-q4 | q2) q2 tau(chi_beta)^2.
    """
    if chi.order != 4:
        raise CharacterError("character is not quartic")
    if chi.conductor % 2 == 0:
        raise EvenConductor("closed form requires odd conductor")
    quartic = [c for c in chi.locals if c.order == 4]
    quad = [c for c in chi.locals if c.order == 2]
    q4 = math.prod(c.modulus for c in quartic)
    q2 = math.prod(c.modulus for c in quad)
    beta = quartic_beta_of(DirichletCharacter.from_locals(quartic))
    inner = tau_sq_closed_totally_quartic(beta)
    value = jacobi(-q4, q2) * q2 * inner.value
    q = chi.conductor
    return GaussSumValue(value, q, GaussMethod.CLOSED_FORM, 8.0 * _EPS * q, True)


def _quadratic_tau(q: int) -> complex:
    """Classical tau of the Jacobi symbol mod odd squarefree q: eps_q sqrt(q)."""
    root = math.sqrt(q)
    return complex(root, 0.0) if q % 4 == 1 else complex(0.0, root)


def _sextic_parts(chi: DirichletCharacter) -> tuple[DirichletCharacter, int]:
    """(cubic part chi3 modulo the same conductor, conductor q); checks domain."""
    q = chi.conductor
    if chi.order != 6 or not chi.is_totally():
        raise CharacterError("character is not totally sextic")
    if q % 2 == 0 or q % 3 == 0:
        raise CharacterError("closed form requires conductor coprime to 6")
    cubic = []
    for loc in chi.locals:
        c = ((loc.value_exp + 3) // 2) % 3
        cubic.append(LocalCharacter(loc.prime, 1, 3, c))
    return DirichletCharacter.from_locals(cubic), q


def tau_sextic_closed(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi) = mu(q) chi3(2) tau(chi2) tau(chi3) conj(beta) / q."""
    chi3, q = _sextic_parts(chi)
    beta = sextic_beta_of(chi)
    mu = -1 if len(chi.locals) % 2 else 1
    chi3_two = chi3.evaluate(2).to_complex()
    tau3 = gauss_sum_factored(chi3).value
    value = mu * chi3_two * _quadratic_tau(q) * tau3 * beta.to_complex().conjugate() / q
    return GaussSumValue(value, q, GaussMethod.CLOSED_FORM, 16.0 * _EPS * q)


def tau_sq_sextic_closed(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi)^2 = q * chi3(4) (-1 | q) tau(chi3)^2 conj(beta)^2 / q^2."""
    chi3, q = _sextic_parts(chi)
    beta = sextic_beta_of(chi)
    chi3_four = chi3.evaluate(4).to_complex()
    tau3 = gauss_sum_factored(chi3).value
    value = chi3_four * jacobi(-1, q) * tau3 * tau3 * beta.to_complex().conjugate() ** 2 / q
    return GaussSumValue(value, q, GaussMethod.CLOSED_FORM, 16.0 * _EPS * q, True)


def _local_tau_squared(loc: LocalCharacter) -> complex:
    """tau(loc)^2 by the cheapest honest route."""
    if loc.prime == 2 or (loc.prime == 3 and loc.exponent == 2) or loc.order in (3, 6):
        t = local_tau(loc)
        return t * t
    if loc.order == 2:
        return complex(loc.parity() * loc.modulus)
    if loc.order == 4:
        from .characters import _canonical_quartic_exp
        from .rings import split_prime_gaussian

        p = loc.prime
        pi, pibar = split_prime_gaussian(p)
        beta = pi if loc.value_exp == _canonical_quartic_exp(p) else pibar
        sign = -1 if (p - 1) // 4 % 2 else 1
        return -sign * math.sqrt(p) * beta.to_complex()
    raise CharacterError(f"unsupported local order {loc.order}")


def tau_squared(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi)^2 without any O(q) sum over the full modulus.

    Dispatches to the odd-conductor closed forms when they apply; otherwise
    multiplies local squares with squared cross factors, which only ever
    sums over single prime-power moduli (cached).
    """
    q = chi.conductor
    if q == 1:
        return GaussSumValue(1.0 + 0j, 1, GaussMethod.CLOSED_FORM, _EPS, True)
    if chi.order == 2:
        value = complex(chi.parity() * q)
        return GaussSumValue(value, q, GaussMethod.CLOSED_FORM, _EPS * q, True)
    if chi.order == 4 and q % 2 == 1:
        return tau_sq_all_quartic(chi)
    if chi.order == 6 and chi.is_totally() and math.gcd(q, 6) == 1:
        return tau_sq_sextic_closed(chi)
    total = 1.0 + 0j
    comps = chi.locals
    for i, loc in enumerate(comps):
        total *= _local_tau_squared(loc)
        for other in comps[i + 1 :]:
            c = _cross_factor(loc, other)
            total *= c * c
    bound = 16.0 * _EPS * q * max(len(comps), 1)
    return GaussSumValue(total, q, GaussMethod.FACTORED, bound, True)


def tau_sq_ratio(chi: DirichletCharacter) -> complex:
    """tau(chi)^2 / q, a point on the unit circle."""
    return tau_squared(chi).value / chi.conductor


# ---------------------------------------------------------------------------
# Hecke character and functional-equation sign


def hecke_lambda(alpha: GaussianInt) -> complex:
    """lambda((alpha)) = alpha0/|alpha0| for the primary associate alpha0.

    Splits as the (1+i)-adic unit character times alpha/|alpha|; the product
    depends only on the ideal.  Requires alpha odd.
    """
    if alpha.norm() == 0 or not alpha.is_odd():
        raise RamifiedElement("lambda is defined on ideals coprime to 1+i")
    primary, _ = alpha.primary_associate()
    return primary.to_complex() / math.sqrt(alpha.norm())


def functional_equation_sign(curve, chi: DirichletCharacter, tau_sq: GaussSumValue | None = None) -> complex:
    """Sign of the twisted functional equation: w_E chi(N_E) tau(chi)^2 / q."""
    q = chi.conductor
    if math.gcd(q, curve.conductor) != 1:
        raise ConductorNotCoprime(
            f"twist conductor {q} shares a factor with curve conductor {curve.conductor}"
        )
    if tau_sq is None:
        tau_sq = tau_squared(chi)
    chi_n = chi.evaluate(curve.conductor).to_complex()
    return curve.root_number * chi_n * tau_sq.value / q


# ---------------------------------------------------------------------------
# family statistics


@dataclass(frozen=True)
class WeylStatistic:
    """Normalized Weyl sums of arg(tau^2/q) at exponent k along an X grid."""

    k: int
    grid: tuple[int, ...]
    normalized_sum: tuple[complex, ...]
    family_size: tuple[int, ...]


@dataclass(frozen=True)
class HistogramData:
    """Histogram of arg(tau(chi)^2/q) over family(X) on [-pi, pi]."""

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    family: FamilySpec
    x_max: int


def family_gauss_ratios(spec: FamilySpec, x_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(conductors, tau^2/q values) over the family, in enumeration order."""
    conductors: list[int] = []
    ratios: list[complex] = []
    for chi in enumerate_family(spec, x_max):
        conductors.append(chi.conductor)
        ratios.append(tau_sq_ratio(chi))
    return (
        np.asarray(conductors, dtype=np.int64),
        np.asarray(ratios, dtype=np.complex128),
    )


def default_grid(x_max: int, floor: int = 100) -> list[int]:
    """Halving grid ..., x/4, x/2, x with points >= floor."""
    grid = []
    x = x_max
    while x >= max(floor, 3):
        grid.append(x)
        x //= 2
    return sorted(grid)


def weyl_sums(
    spec: FamilySpec,
    x_max: int,
    k_max: int,
    grid: list[int] | None = None,
    ratios: tuple[np.ndarray, np.ndarray] | None = None,
) -> list[WeylStatistic]:
    """Normalized Weyl sums sum (tau^2/q)^k / |family| for 1 <= k <= k_max."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if grid is None:
        grid = default_grid(x_max)
    grid = sorted(set(grid))
    conductors, vals = ratios if ratios is not None else family_gauss_ratios(spec, x_max)
    cuts = np.searchsorted(conductors, np.asarray(grid, dtype=np.int64), side="right")
    out = []
    powers = np.ones_like(vals)
    for k in range(1, k_max + 1):
        powers = powers * vals
        csum = np.concatenate(([0j], np.cumsum(powers)))
        sums = csum[cuts]
        sizes = cuts.astype(np.int64)
        norm = tuple(
            complex(s / n) if n else 0j for s, n in zip(sums, sizes)
        )
        out.append(WeylStatistic(k, tuple(grid), norm, tuple(int(n) for n in sizes)))
    return out


def histogram_args(
    spec: FamilySpec,
    x_max: int,
    bins: int = 100,
    ratios: tuple[np.ndarray, np.ndarray] | None = None,
) -> HistogramData:
    """Bin arg(tau^2/q) over the family into `bins` equal bins on [-pi, pi]."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    _, vals = ratios if ratios is not None else family_gauss_ratios(spec, x_max)
    args = np.angle(vals)
    counts, edges = np.histogram(args, bins=bins, range=(-math.pi, math.pi))
    return HistogramData(tuple(edges), tuple(int(c) for c in counts), spec, x_max)


def write_weyl_csv(stats: list[WeylStatistic], spec: FamilySpec, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["family", "k", "X", "re", "im", "family_size"])
        for st in stats:
            for x, val, size in zip(st.grid, st.normalized_sum, st.family_size):
                w.writerow([spec.tag(), st.k, x, f"{val.real:.12g}", f"{val.imag:.12g}", size])


def write_histogram_csv(hist: HistogramData, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["family", "X", "bin_lo", "bin_hi", "count"])
        for lo, hi, c in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts):
            w.writerow([hist.family.tag(), hist.x_max, f"{lo:.12g}", f"{hi:.12g}", c])
