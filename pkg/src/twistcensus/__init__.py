"""Census of twisted elliptic curve L-values over quartic and sextic characters.

The pipeline: enumerate primitive characters in factored local form,
evaluate Gauss sums exactly through prime splitting in Z[i] and Z[w],
compute central twisted L-values by a smoothed series, discretize them
to integers n_E(chi), and compare vanishing counts against random-matrix
predictions.
"""

from .arith import factorize, is_prime, jacobi, primes_up_to
from .characters import (
    DirichletCharacter,
    FamilySpec,
    LocalCharacter,
    Variant,
    characters_of_conductor,
    count_family,
    enumerate_family,
    from_conrey,
)
from .census import CensusConfig, CensusSummary, run_census
from .discretize import TwistRecord, build_twist_record, discretize, k_constant
from .gauss import (
    GaussSumValue,
    gauss_sum_direct,
    gauss_sum_factored,
    hecke_lambda,
    tau_squared,
)
from .lfun import (
    EllipticCurveData,
    LValue,
    an_table,
    builtin_curve,
    compute_periods,
    l_value_afe,
    l_values_at_conductor,
    load_curve,
)
from .rings import EisensteinInt, GaussianInt, cubic_residue_symbol, quartic_residue_symbol
from .rmt import barnes_g_half, fit_constant, m_u, predicted_vanishings

__version__ = "0.1.0"

__all__ = [
    "CensusConfig",
    "CensusSummary",
    "DirichletCharacter",
    "EisensteinInt",
    "EllipticCurveData",
    "FamilySpec",
    "GaussSumValue",
    "GaussianInt",
    "LValue",
    "LocalCharacter",
    "TwistRecord",
    "Variant",
    "an_table",
    "barnes_g_half",
    "build_twist_record",
    "builtin_curve",
    "characters_of_conductor",
    "compute_periods",
    "count_family",
    "cubic_residue_symbol",
    "discretize",
    "enumerate_family",
    "factorize",
    "fit_constant",
    "from_conrey",
    "gauss_sum_direct",
    "gauss_sum_factored",
    "hecke_lambda",
    "is_prime",
    "jacobi",
    "k_constant",
    "l_value_afe",
    "l_values_at_conductor",
    "load_curve",
    "m_u",
    "predicted_vanishings",
    "primes_up_to",
    "quartic_residue_symbol",
    "run_census",
    "tau_squared",
    "__version__",
]
