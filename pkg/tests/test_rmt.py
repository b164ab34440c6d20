import math
from fractions import Fraction

import mpmath
import pytest

from oracles import direct_moment
from twistcensus.characters import FamilySpec, Variant
from twistcensus.rmt import (
    BARNES_G_HALF,
    LOG_EXPONENTS,
    InsufficientData,
    PoleRegion,
    barnes_g_half,
    fit_constant,
    log_exponent,
    m_u,
    predicted_vanishings,
    vanishing_probability,
)


def test_moment_closed_values():
    # M_U(0, n) = 1 and M_U(2, n) = n + 1 exactly (telescoping Gammas)
    for n in (1, 2, 5, 20, 100):
        assert m_u(0.0, n) == pytest.approx(1.0, abs=1e-12)
        assert m_u(2.0, n) == pytest.approx(n + 1, rel=1e-12)


def test_moment_against_direct_gamma_product():
    for s in (0.5, 1.0, -0.5, 1.7):
        for n in (1, 3, 10):
            assert m_u(s, n) == pytest.approx(direct_moment(s, n), rel=1e-10)


def test_moment_complex_path():
    for s in (0.3 + 0.2j, -0.4 + 1.0j, 1.0 + 0.5j):
        for n in (2, 7):
            got = m_u(s, n)
            want = direct_moment(s, n)
            assert abs(got - want) < 1e-9 * abs(want)
    # the two code paths agree where they overlap
    assert m_u(0.7 + 0j, 9) == pytest.approx(m_u(0.7, 9), rel=1e-12)


def test_moment_positive_on_real_axis():
    for s in (-0.9, -0.2, 0.4, 2.5):
        for n in (1, 4, 30):
            v = m_u(s, n)
            assert v.imag == 0 and v.real > 0


def test_moment_pole_region():
    with pytest.raises(PoleRegion):
        m_u(-1.0, 5)
    with pytest.raises(PoleRegion):
        m_u(-2.3 + 1j, 5)
    with pytest.raises(ValueError):
        m_u(0.5, 0)


def test_barnes_g_half_frozen_value():
    assert barnes_g_half() == pytest.approx(BARNES_G_HALF, abs=1e-14)
    with mpmath.workdps(30):
        oracle = float(mpmath.barnesg(mpmath.mpf(1) / 2))
    assert abs(BARNES_G_HALF - oracle) < 1e-12


def test_log_exponent_table():
    want = {
        (4, Variant.ALL): Fraction(5, 4),
        (6, Variant.ALL): Fraction(9, 4),
        (4, Variant.TOTALLY): Fraction(1, 4),
        (6, Variant.TOTALLY): Fraction(1, 4),
        (4, Variant.PRIME_CONDUCTOR): Fraction(-3, 4),
        (6, Variant.PRIME_CONDUCTOR): Fraction(-3, 4),
    }
    assert LOG_EXPONENTS == want
    for (order, variant), e in want.items():
        assert log_exponent(FamilySpec(order, variant)) == e


def test_predicted_vanishings_shape():
    fam = FamilySpec(4, Variant.TOTALLY)
    x = 1e5
    want = 2.0 * math.sqrt(x) * math.log(x) ** 0.25
    assert predicted_vanishings(fam, x, b=2.0) == pytest.approx(want)
    with pytest.raises(ValueError):
        predicted_vanishings(fam, 2.0)


def test_vanishing_probability_scale_and_clamp():
    p1 = vanishing_probability(1.0, 100, 1e5)
    p2 = vanishing_probability(1.0, 400, 1e5)
    assert p1 == pytest.approx(2.0 * p2)  # 1/sqrt(q) scaling
    assert 0.0 < p2 < p1 < 1.0
    with pytest.warns(UserWarning):
        assert vanishing_probability(100.0, 2, 1e5) == 1.0
    with pytest.warns(UserWarning):
        assert vanishing_probability(-1.0, 2, 1e5) == 0.0


def test_fit_recovers_synthetic_constant():
    fam = FamilySpec(6, Variant.ALL)
    e = float(log_exponent(fam))
    b_true = 0.0375
    grid = [(x, b_true * math.sqrt(x) * math.log(x) ** e) for x in
            [1000 * 2**k for k in range(12)]]
    fit = fit_constant(grid, fam)
    assert fit.fitted_b == pytest.approx(b_true, rel=1e-9)
    for x, predicted, empirical, ratio in fit.grid:
        assert predicted == pytest.approx(empirical, rel=1e-9)
        assert ratio == pytest.approx(1.0 / b_true, rel=1e-9)


def test_fit_scale_equivariance():
    fam = FamilySpec(4, Variant.ALL)
    e = float(log_exponent(fam))
    pts = [(x, math.sqrt(x) * math.log(x) ** e * 0.2 + 5.0) for x in
           [500 * 3**k for k in range(10)]]
    base = fit_constant(pts, fam).fitted_b
    doubled = fit_constant([(x, 2 * c) for x, c in pts], fam).fitted_b
    assert doubled == pytest.approx(2.0 * base, rel=1e-12)


def test_fit_insufficient_data():
    fam = FamilySpec(4, Variant.ALL)
    with pytest.raises(InsufficientData):
        fit_constant([(10.0, 1.0), (20.0, 2.0), (40.0, 3.0)], fam)
