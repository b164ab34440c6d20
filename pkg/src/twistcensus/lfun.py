"""Elliptic curve data, Dirichlet coefficients, periods, and central L-values.

L(E,1,chi) is evaluated by the smoothed series from the functional
equation: with C = q*sqrt(N_E)/(2*pi) and eps = w_E chi(N_E) tau(chi)^2/q,

    L(E,1,chi) = sum a_n chi(n)/n e^(-n/C)  +  eps * sum a_n conj(chi(n))/n e^(-n/C).

The s = 1 smoothing kernel is the pure exponential (incomplete Gamma(1,x)),
so the tail after M terms is below 2*sqrt(3)*(C+1)*e^(-M/C) by the Hasse
and divisor bounds (|a_n| <= sqrt(3)*n).

Coefficients a_p come from naive point counting over F_p with a square
table (O(p) per prime, vectorized), extended multiplicatively with the
usual Hecke recursion and cached on disk per (curve, n_max).

Periods use the arithmetic-geometric mean on the roots of the Weierstrass
cubic 4x^3 + b2 x^2 + 2 b4 x + b6.  The normalization (half the lattice
AGM values) is the one that makes the discretized central values land on
integers; it was fixed against that integrality requirement and is what
omega_plus/omega_minus below mean everywhere in this package.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .arith import primes_up_to, spf_sieve
from .characters import DirichletCharacter
from .gauss import ConductorNotCoprime, functional_equation_sign, tau_squared

DEFAULT_TOL = 1e-12
DEFAULT_N_MAX = 10**7


class SingularCurve(ValueError):
    """Weierstrass coefficients with vanishing discriminant."""


class ToleranceUnreachable(ValueError):
    """Requested tolerance needs more than n_max series terms."""


class PeriodMissing(ValueError):
    """Curve record lacks the period needed for the requested parity."""


def cache_directory() -> Path:
    root = os.environ.get("TWISTCENSUS_CACHE")
    path = Path(root) if root else Path.home() / ".cache" / "twistcensus"
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# curve data


def b_invariants(a: tuple[int, int, int, int, int]) -> tuple[int, int, int, int]:
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(a: tuple[int, int, int, int, int]) -> int:
    b2, b4, b6, b8 = b_invariants(a)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


@dataclass(frozen=True)
class EllipticCurveData:
    """A rational elliptic curve in minimal Weierstrass form.

    omega_plus is the real period and omega_minus the magnitude of the
    imaginary period (the period itself is i*omega_minus), in the
    normalization described in the module docstring.  conductor and
    root_number are inputs, not computed.
    """

    label: str
    a_invariants: tuple[int, int, int, int, int]
    conductor: int
    root_number: int
    omega_plus: float
    omega_minus: float

    def __post_init__(self) -> None:
        if discriminant(self.a_invariants) == 0:
            raise SingularCurve(f"{self.label}: discriminant is zero")
        if self.root_number not in (1, -1):
            raise ValueError("root number must be +1 or -1")
        if not (self.omega_plus > 0 and self.omega_minus > 0):
            raise ValueError("periods must be positive")

    def has_good_reduction(self, p: int) -> bool:
        return self.conductor % p != 0

    def period(self, parity: int) -> complex:
        """Omega_+ for even characters, i*Omega_- magnitude for odd."""
        if parity == 1:
            return complex(self.omega_plus)
        return complex(0.0, self.omega_minus)


def _agm(a: float, b: float) -> float:
    while abs(a - b) > 1e-15 * abs(a):
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def compute_periods(a: tuple[int, int, int, int, int]) -> tuple[float, float]:
    """(omega_plus, omega_minus magnitude) by AGM on the Weierstrass cubic."""
    if discriminant(a) == 0:
        raise SingularCurve("discriminant is zero")
    b2, b4, b6, _ = b_invariants(a)
    roots = np.roots([4.0, float(b2), 2.0 * float(b4), float(b6)])
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9 * (1 + abs(r)))
    if len(real) == 3:
        e3, e2, e1 = real
        om = math.pi / _agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2))
        nu = math.pi / _agm(math.sqrt(e1 - e3), math.sqrt(e2 - e3))
    else:
        r1 = real[0]
        z = next(complex(r) for r in roots if r.imag > 1e-9)
        big = abs(r1 - z)
        c = r1 - z.real
        om = math.pi / _agm(math.sqrt(big), math.sqrt((big + c) / 2.0))
        nu = math.pi / _agm(math.sqrt(big), math.sqrt((big - c) / 2.0))
    return om / 2.0, nu / 2.0


def parse_curve_text(text: str) -> EllipticCurveData:
    """Parse the line-oriented key = value curve format."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, val = line.partition("=")
        fields[key.strip().lower()] = val.strip()
    try:
        label = fields["label"]
        a = tuple(int(t) for t in fields["a_invariants"].replace(",", " ").split())
        conductor = int(fields["conductor"])
        root_number = int(fields["root_number"])
    except KeyError as exc:
        raise ValueError(f"curve file missing field {exc}") from exc
    if len(a) != 5:
        raise ValueError("a_invariants must have five entries a1 a2 a3 a4 a6")
    if "omega_plus" in fields and "omega_minus" in fields:
        om, nu = float(fields["omega_plus"]), float(fields["omega_minus"])
    else:
        om, nu = compute_periods(a)
    return EllipticCurveData(label, a, conductor, root_number, om, nu)


def load_curve(path: str | Path) -> EllipticCurveData:
    return parse_curve_text(Path(path).read_text())


def list_builtin_curves() -> list[str]:
    pkg = resources.files("twistcensus") / "curves"
    return sorted(p.name[: -len(".curve")] for p in pkg.iterdir() if p.name.endswith(".curve"))


@lru_cache(maxsize=None)
def builtin_curve(label: str) -> EllipticCurveData:
    pkg = resources.files("twistcensus") / "curves"
    path = pkg / f"{label}.curve"
    try:
        return parse_curve_text(path.read_text())
    except FileNotFoundError:
        raise KeyError(f"no builtin curve {label!r}; have {list_builtin_curves()}")


# ---------------------------------------------------------------------------
# coefficients


def ap_point_count(curve: EllipticCurveData, p: int) -> int:
    """a_p by counting points over F_p (smooth locus at bad primes)."""
    a1, a2, a3, a4, a6 = curve.a_invariants
    if p == 2:
        affine = sum(
            (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0
            for x in range(2)
            for y in range(2)
        )
        if curve.has_good_reduction(2):
            return 2 - affine
        sing = sum(
            (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0
            and (a1 * x + a3) % 2 == 0
            and (a1 * y + x * x + a4) % 2 == 0
            for x in range(2)
            for y in range(2)
        )
        return 2 - 1 - (affine - sing)
    b2, b4, b6, _ = b_invariants(curve.a_invariants)
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    f = (4 * x2 % p * x + b2 % p * x2 + (2 * b4) % p * x + b6) % p
    squares = np.bincount(x2, minlength=p)
    affine = int(squares[f].sum())
    if curve.has_good_reduction(p):
        ap = p - affine
        assert ap * ap <= 4 * p, f"Hasse bound violated at {p}"
        return ap
    fprime = (12 * x2 + (2 * b2) % p * x + (2 * b4) % p) % p
    singular = int(np.sum((f == 0) & (fprime == 0)))
    return p - 1 - (affine - singular)


def _prime_power_coeffs(curve: EllipticCurveData, p: int, n_max: int) -> list[int]:
    """[a_1, a_p, a_{p^2}, ...] up to p^k <= n_max."""
    ap = ap_point_count(curve, p)
    out = [1, ap]
    good = curve.has_good_reduction(p)
    while p ** len(out) <= n_max:
        if good:
            out.append(ap * out[-1] - p * out[-2])
        else:
            out.append(ap * out[-1])
    return out


_AN_MEMORY: dict[str, np.ndarray] = {}


def an_table(curve: EllipticCurveData, n_max: int) -> np.ndarray:
    """a_1..a_{n_max} as int64, index-aligned (entry 0 unused).

    Cached in memory and on disk; a longer cached table serves shorter
    requests by slicing.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    have = _AN_MEMORY.get(curve.label)
    if have is not None and len(have) > n_max:
        return have[: n_max + 1]
    cache = cache_directory()
    best = None
    for path in cache.glob(f"an_{curve.label}_*.npy"):
        try:
            m = int(path.stem.rsplit("_", 1)[1])
        except ValueError:
            continue
        if m >= n_max and (best is None or m < best[0]):
            best = (m, path)
    if best is not None:
        table = np.load(best[1])
        _AN_MEMORY[curve.label] = table
        return table[: n_max + 1]
    table = _compute_an(curve, n_max)
    np.save(cache / f"an_{curve.label}_{n_max}.npy", table)
    _AN_MEMORY[curve.label] = table
    return table


def _compute_an(curve: EllipticCurveData, n_max: int) -> np.ndarray:
    a = np.zeros(n_max + 1, dtype=np.int64)
    a[1] = 1
    if n_max == 1:
        return a
    spf = spf_sieve(n_max)
    powers = {int(p): _prime_power_coeffs(curve, int(p), n_max) for p in primes_up_to(n_max)}
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, e = n // p, 1
        while m % p == 0:
            m //= p
            e += 1
        a[n] = a[m] * powers[p][e]
    return a


# ---------------------------------------------------------------------------
# central values


@dataclass(frozen=True)
class LValue:
    value: complex
    truncation_bound: float
    terms_used: int


def afe_cutoff(curve: EllipticCurveData, q: int) -> float:
    """Exponential decay scale C = q*sqrt(N_E)/(2*pi)."""
    return q * math.sqrt(curve.conductor) / (2.0 * math.pi)


def afe_terms(cutoff: float, tol: float, n_max: int = DEFAULT_N_MAX) -> int:
    """Smallest term count with tail bound below tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = int(cutoff * math.log(2.0 * math.sqrt(3.0) * (cutoff + 1.0) / tol)) + 8
    if m > n_max:
        raise ToleranceUnreachable(
            f"need {m} terms for tol={tol:g} at cutoff {cutoff:.3g}, cap is {n_max}"
        )
    return m


def _tail_bound(cutoff: float, terms: int) -> float:
    return 2.0 * math.sqrt(3.0) * (cutoff + 1.0) * math.exp(-terms / cutoff)


def l_value_afe(
    curve: EllipticCurveData,
    chi: DirichletCharacter,
    tol: float = DEFAULT_TOL,
    n_max: int = DEFAULT_N_MAX,
) -> LValue:
    """L(E,1,chi) by the smoothed two-sum series."""
    q = chi.conductor
    if math.gcd(q, curve.conductor) != 1:
        raise ConductorNotCoprime(f"conductor {q} not coprime to {curve.conductor}")
    cut = afe_cutoff(curve, q)
    m = afe_terms(cut, tol, n_max)
    coeffs = an_table(curve, m)
    n = np.arange(1, m + 1, dtype=np.float64)
    weights = coeffs[1:].astype(np.float64) / n * np.exp(-n / cut)
    vals = chi.roots_of_unity()[chi.exponent_table()[np.arange(1, m + 1) % q]]
    eps = functional_equation_sign(curve, chi)
    total = complex(np.sum(weights * vals)) + eps * complex(np.sum(weights * vals.conjugate()))
    return LValue(total, _tail_bound(cut, m), m)


def l_values_at_conductor(
    curve: EllipticCurveData,
    q: int,
    chars: list[DirichletCharacter],
    tol: float = DEFAULT_TOL,
    n_max: int = DEFAULT_N_MAX,
) -> list[LValue]:
    """All L(E,1,chi) for characters of one conductor, sharing the series pass.

    The a_n weights are folded to residue classes mod q once (one O(terms)
    pass), then each character needs only an O(q) reduction.  Summation
    order is fixed, so results are independent of how work is batched.
    """
    if math.gcd(q, curve.conductor) != 1:
        raise ConductorNotCoprime(f"conductor {q} not coprime to {curve.conductor}")
    if not chars:
        return []
    cut = afe_cutoff(curve, q)
    m = afe_terms(cut, tol, n_max)
    coeffs = an_table(curve, m)
    n = np.arange(1, m + 1, dtype=np.float64)
    weights = coeffs[1:].astype(np.float64) / n * np.exp(-n / cut)
    residue_sums = np.bincount(np.arange(1, m + 1) % q, weights=weights, minlength=q)
    bound = _tail_bound(cut, m)
    out = []
    for chi in chars:
        if chi.conductor != q:
            raise ValueError("character conductor mismatch")
        class_sums = np.bincount(
            chi.exponent_table(), weights=residue_sums, minlength=chi.order + 1
        )
        roots = chi.roots_of_unity()
        s1 = complex(np.dot(class_sums, roots))
        s2 = complex(np.dot(class_sums, roots.conjugate()))
        eps = functional_equation_sign(curve, chi)
        out.append(LValue(s1 + eps * s2, bound, m))
    return out
