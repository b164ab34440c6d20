"""Random-matrix moments and predicted vanishing counts.

The discretized central values live on a scale of q^(-1/2), so the
probability that a twist of conductor q vanishes is modeled by the
unitary-group moment density at the origin, giving a per-character
probability proportional to (log X)^(1/4)/sqrt(q).  Summed over a family
up to X this yields counts of the shape b * sqrt(X) * (log X)^e with a
family-dependent exponent e; the arithmetic constant in b is not pinned
down here and is always fitted.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .characters import FamilySpec, Variant

# exponent e in |V(X)| ~ b sqrt(X) (log X)^e, per (order, variant)
LOG_EXPONENTS: dict[tuple[int, Variant], Fraction] = {
    (4, Variant.ALL): Fraction(5, 4),
    (6, Variant.ALL): Fraction(9, 4),
    (4, Variant.TOTALLY): Fraction(1, 4),
    (6, Variant.TOTALLY): Fraction(1, 4),
    (4, Variant.PRIME_CONDUCTOR): Fraction(-3, 4),
    (6, Variant.PRIME_CONDUCTOR): Fraction(-3, 4),
}

# G(1/2) = exp(3/2 zeta'(-1) - 1/4 log pi + 1/24 log 2); frozen against a
# 40-digit evaluation (zeta'(-1) = 1/12 - log(Glaisher))
BARNES_G_HALF = 0.6032442812094462


class PoleRegion(ValueError):
    """Moment requested at or beyond the first pole (Re(s) <= -1)."""


class InsufficientData(ValueError):
    """Too few tail points to fit a family constant."""


@dataclass(frozen=True)
class MomentValue:
    s: complex
    n: int
    value: complex


@dataclass(frozen=True)
class PredictionCurve:
    """Fitted prediction for one family: grid rows are (X, predicted, empirical, ratio)."""

    family: FamilySpec
    log_exponent: Fraction
    fitted_b: float
    grid: list[tuple[float, float, float, float]]


def m_u(s: complex, n: int) -> complex:
    """Keating-Snaith moment of |det(A - I)|^s over U(n), via log-Gamma."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = complex(s)
    if s.real <= -1.0:
        raise PoleRegion(f"M_U undefined for Re(s) <= -1, got {s}")
    if s.imag == 0.0:
        x = s.real
        acc = 0.0
        for j in range(1, n + 1):
            acc += math.lgamma(j) + math.lgamma(j + x) - 2.0 * math.lgamma(j + x / 2.0)
        return complex(math.exp(acc))
    acc_c = mpmath.mpc(0)
    for j in range(1, n + 1):
        acc_c += (
            mpmath.loggamma(j)
            + mpmath.loggamma(j + s)
            - 2 * mpmath.loggamma(j + s / 2)
        )
    return complex(mpmath.e**acc_c)


def barnes_g_half() -> float:
    """G(1/2), from its closed form in zeta'(-1), pi and log 2."""
    zeta_prime = 1.0 / 12.0 - math.log(float(mpmath.glaisher))
    value = math.exp(1.5 * zeta_prime - 0.25 * math.log(math.pi) + math.log(2.0) / 24.0)
    assert abs(value - BARNES_G_HALF) < 1e-12
    return value


def log_exponent(family: FamilySpec) -> Fraction:
    try:
        return LOG_EXPONENTS[(family.order, family.variant)]
    except KeyError:
        raise KeyError(f"no vanishing asymptotic for {family.tag()}")


def predicted_vanishings(family: FamilySpec, x: float, b: float = 1.0) -> float:
    """b * sqrt(X) * (log X)^e for the family's exponent e."""
    if x < 3:
        raise ValueError("X must be >= 3")
    e = float(log_exponent(family))
    return b * math.sqrt(x) * math.log(x) ** e


def vanishing_probability(a_curve: float, q: int, x: float, c: float = 1.0) -> float:
    """Per-character vanishing probability 2^(1/4) a_E G(1/2)^2 (log X)^(1/4) c/sqrt(q).

    a_curve is the free arithmetic factor of the curve; it is not
    computable here and in practice gets folded into a fitted constant.
    """
    p = 2.0 ** 0.25 * a_curve * BARNES_G_HALF**2 * math.log(x) ** 0.25 * c / math.sqrt(q)
    if p < 0.0 or p > 1.0:
        warnings.warn(f"vanishing probability {p:.3g} clamped to [0,1]", stacklevel=2)
        p = min(1.0, max(0.0, p))
    return p


def fit_constant(
    empirical: list[tuple[float, float]], family: FamilySpec
) -> PredictionCurve:
    """Least-squares b on the tail half of an empirical (X, count) grid.

    The ratio column uses the unit-constant shape sqrt(X)(log X)^e over
    the empirical count, so a correct asymptotic shows up as the ratio
    flattening to 1/b.
    """
    e = float(log_exponent(family))
    pts = sorted((float(x), float(cnt)) for x, cnt in empirical if x >= 3)
    tail = pts[len(pts) // 2 :]
    if len(tail) < 5:
        raise InsufficientData(f"need >= 5 tail points, have {len(tail)}")
    shapes = [math.sqrt(x) * math.log(x) ** e for x, _ in tail]
    counts = [cnt for _, cnt in tail]
    denom = sum(s * s for s in shapes)
    b = sum(s * c for s, c in zip(shapes, counts)) / denom
    grid = []
    for x, cnt in pts:
        shape = math.sqrt(x) * math.log(x) ** e
        ratio = shape / cnt if cnt > 0 else math.inf
        grid.append((x, b * shape, cnt, ratio))
    return PredictionCurve(family=family, log_exponent=log_exponent(family), fitted_b=b, grid=grid)
