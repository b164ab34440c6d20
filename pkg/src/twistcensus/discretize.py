"""Discretization of twisted central values into integer invariants.

For a primitive chi of conductor q coprime to N_E, the normalized value

    L_alg = L(E,1,chi) * q / (tau(chi) * Omega)

(Omega = Omega_+ for even chi, i*Omega_- for odd) satisfies
L_alg = rho * conj(L_alg) with rho = w_E * chi(-1) * chi(N_E), a root of
unity of the same order ell as chi.  Dividing by

    k = 1 + rho                   if rho != -1,
    k = zeta_ell^(ell/4)          if rho == -1 and 4 | ell,
    k = zeta_ell - zeta_ell^(-1)  if rho == -1 and 4 does not divide ell

rotates L_alg onto the real axis, where it lands on an integer n_E(chi).
|k| is bounded below by 1 for the orders supported here, so the map never
degenerates.  The quality of a discretization is the distance from the
nearest integer plus the residual imaginary part; values above 0.05
trigger one re-evaluation at a hundredfold tighter tolerance before the
failure is surfaced.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .characters import DirichletCharacter
from .gauss import gauss_sum_factored, functional_equation_sign
from .lfun import EllipticCurveData, LValue, l_value_afe

QUALITY_LIMIT = 0.05
ESCALATION_FACTOR = 100.0


class DiscretizeError(ValueError):
    pass


class DegenerateK(DiscretizeError):
    """|k| below tolerance; the discretization constant is unusable."""


class IntegralityFailure(DiscretizeError):
    """Normalized value stayed far from an integer after escalation."""


def sign_root_of_unity(curve: EllipticCurveData, chi: DirichletCharacter) -> complex:
    """rho = w_E * chi(-1) * chi(N_E), the phase governing L_alg."""
    return curve.root_number * chi.parity() * chi.evaluate(curve.conductor).to_complex()


def k_constant(curve: EllipticCurveData, chi: DirichletCharacter) -> complex:
    """Discretization constant k for the twist (see module docstring)."""
    rho = sign_root_of_unity(curve, chi)
    ell = chi.order
    if abs(rho + 1.0) < 1e-9:
        if ell % 4 == 0:
            k = 1j
        else:
            z = cmath.exp(2j * math.pi / ell)
            k = z - 1.0 / z
    else:
        k = 1.0 + rho
    if abs(k) < 1e-9:
        raise DegenerateK(f"|k| = {abs(k):.2e} for {chi.label()}")
    assert abs(k) <= 2.0 + 1e-12
    return k


def algebraic_l_value(
    curve: EllipticCurveData,
    chi: DirichletCharacter,
    l_central: complex,
    check: bool = True,
) -> complex:
    """L_alg = L * q / (tau(chi) * Omega_parity).

    With check=True the value is recomputed through the conjugate route
    L * chi(-1) * tau(conj chi) / Omega, which uses an independently
    evaluated Gauss sum; disagreement beyond 1e-6 raises.
    """
    q = chi.conductor
    tau = gauss_sum_factored(chi).value
    omega = curve.period(chi.parity())
    value = l_central * q / (tau * omega)
    if check:
        tau_bar = gauss_sum_factored(chi.conjugate()).value
        alt = l_central * chi.parity() * tau_bar / omega
        if abs(value - alt) > 1e-8 * (1.0 + abs(value)):
            raise DiscretizeError(
                f"Gauss-sum routes disagree for {chi.label()}: {value} vs {alt}"
            )
    return value


def discretize(
    curve: EllipticCurveData, chi: DirichletCharacter, l_central: complex
) -> tuple[float, int, float]:
    """(n_real, nearest integer, quality) for one twist."""
    z = algebraic_l_value(curve, chi, l_central) / k_constant(curve, chi)
    n_int = round(z.real)
    quality = abs(z.real - n_int) + abs(z.imag)
    return z.real, int(n_int), quality


def vanishing_threshold(curve: EllipticCurveData, chi: DirichletCharacter) -> float:
    """Half the magnitude the smallest nonzero n_E forces on |L|."""
    k = k_constant(curve, chi)
    omega = curve.period(chi.parity())
    return 0.5 * abs(k * omega) / math.sqrt(chi.conductor)


@dataclass(frozen=True)
class TwistRecord:
    """One discretized twist, as stored by the census."""

    curve_label: str
    conductor: int
    conrey_index: int
    order: int
    is_totally: bool
    prime_conductor: bool
    parity: int
    l_value: complex
    epsilon: complex
    l_algebraic: complex
    k: complex
    n_real: float
    n_int: int
    vanished: bool
    quality: float
    truncation_bound: float

    def to_dict(self) -> dict:
        d = {
            "curve": self.curve_label,
            "conductor": self.conductor,
            "conrey_index": self.conrey_index,
            "order": self.order,
            "is_totally": self.is_totally,
            "prime_conductor": self.prime_conductor,
            "parity": self.parity,
            "l_re": self.l_value.real,
            "l_im": self.l_value.imag,
            "eps_re": self.epsilon.real,
            "eps_im": self.epsilon.imag,
            "lalg_re": self.l_algebraic.real,
            "lalg_im": self.l_algebraic.imag,
            "k_re": self.k.real,
            "k_im": self.k.imag,
            "n_real": self.n_real,
            "n_int": self.n_int,
            "vanished": self.vanished,
            "quality": self.quality,
            "truncation_bound": self.truncation_bound,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TwistRecord":
        return cls(
            curve_label=d["curve"],
            conductor=d["conductor"],
            conrey_index=d["conrey_index"],
            order=d["order"],
            is_totally=d["is_totally"],
            prime_conductor=d["prime_conductor"],
            parity=d["parity"],
            l_value=complex(d["l_re"], d["l_im"]),
            epsilon=complex(d["eps_re"], d["eps_im"]),
            l_algebraic=complex(d["lalg_re"], d["lalg_im"]),
            k=complex(d["k_re"], d["k_im"]),
            n_real=d["n_real"],
            n_int=d["n_int"],
            vanished=d["vanished"],
            quality=d["quality"],
            truncation_bound=d["truncation_bound"],
        )


def build_twist_record(
    curve: EllipticCurveData,
    chi: DirichletCharacter,
    l_value: LValue | None = None,
    tol: float = 1e-8,
) -> TwistRecord:
    """Discretize one twist, escalating tolerance once if integrality fails.

    The vanishing decision n_int == 0 is cross-checked against the direct
    magnitude bound |L| < threshold; a contradiction raises
    IntegralityFailure rather than recording a doubtful zero.
    """
    if l_value is None:
        l_value = l_value_afe(curve, chi, tol=tol)
    n_real, n_int, quality = discretize(curve, chi, l_value.value)
    if quality > QUALITY_LIMIT:
        l_value = l_value_afe(curve, chi, tol=tol / ESCALATION_FACTOR)
        n_real, n_int, quality = discretize(curve, chi, l_value.value)
        if quality > QUALITY_LIMIT:
            raise IntegralityFailure(
                f"{curve.label} twisted by {chi.label()}: n = {n_real:.6f}, "
                f"quality {quality:.3g} after escalation"
            )
    vanished = n_int == 0
    if vanished != (abs(l_value.value) < vanishing_threshold(curve, chi)):
        raise IntegralityFailure(
            f"{curve.label} twisted by {chi.label()}: vanishing decision "
            f"n={n_int} contradicts |L|={abs(l_value.value):.3e}"
        )
    return TwistRecord(
        curve_label=curve.label,
        conductor=chi.conductor,
        conrey_index=chi.conrey_index(),
        order=chi.order,
        is_totally=chi.is_totally(),
        prime_conductor=chi.has_prime_conductor(),
        parity=chi.parity(),
        l_value=l_value.value,
        epsilon=functional_equation_sign(curve, chi),
        l_algebraic=algebraic_l_value(curve, chi, l_value.value, check=False),
        k=k_constant(curve, chi),
        n_real=n_real,
        n_int=n_int,
        vanished=vanished,
        quality=quality,
        truncation_bound=l_value.truncation_bound,
    )
