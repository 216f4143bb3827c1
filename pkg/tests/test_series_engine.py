from fractions import Fraction

import pytest

from modules.diagnostics_engine import RejectedInput
from modules.series_engine import (
    SYMBOLIC,
    IntegerSeries,
    QPolySeries,
    RationalSeries,
    complementary_period_series,
    family_solution,
    growth_estimate,
    hypergeometric_series,
    integrality_check,
    normalized_series,
    polynomial_solutions,
    ratio_series,
    scaled_family,
    tutte_series,
)

H4_HEAD = [0, 0, 12, 24, 168, 1656, 19296, 248832, 3437424, 49923288, 753269856]
S_HEAD = [1, 2, 14, 138, 1608, 20736, 286452, 4160274]


# ------------------------------------------------------------
# Tutte q-series
# ------------------------------------------------------------
def test_tutte_series_q4_head():
    H = tutte_series(4, 10)
    assert isinstance(H, IntegerSeries)
    assert H.tolist() == H4_HEAD


def test_normalized_series_head(S):
    assert S.tolist()[:len(S_HEAD)] == S_HEAD
    assert S.n == 600


def test_normalized_series_needs_divisible_coefficients():
    H = IntegerSeries([0, 0, 12, 25, 1])
    with pytest.raises(RejectedInput):
        normalized_series(H, 12)


def test_tutte_series_rejects_short_order():
    with pytest.raises(RejectedInput):
        tutte_series(4, 1)


def test_tutte_series_symbolic_q_specialises():
    H = tutte_series(SYMBOLIC, 8)
    assert isinstance(H, QPolySeries)
    for q in (3, 4, 5, 7):
        specialised = H.evaluate(q)
        assert [int(c) for c in specialised.tolist()] == tutte_series(q, 8).tolist()


def test_tutte_series_symbolic_w6_factorisation():
    H = tutte_series(SYMBOLIC, 8)
    c6 = H.coefficient(6)
    for q in (2, 3, 5, 6, 11):
        expected = q * (q - 1) * (q - 2) * (176 * q ** 3 - 1245 * q ** 2 + 2951 * q - 2344)
        assert int(c6.eval(q)) == expected


def test_family_solution_matches_tutte_at_h1_zero():
    F = family_solution(5, 0, 6)
    H = tutte_series(5, 6)
    assert [Fraction(c) for c in F.tolist()] == [Fraction(c) for c in H.tolist()]


def test_polynomial_solutions_are_quadratic():
    sols = polynomial_solutions(5, 8)
    assert len(sols) == 2
    for s in sols:
        assert isinstance(s, RationalSeries)
        assert all(c == 0 for c in s.tolist()[3:])


def test_scaled_family_rescales_coefficients():
    F = RationalSeries([0, 1, 2, 3])
    G = scaled_family(F, 2)
    assert G.n == F.n
    assert G != F


# ------------------------------------------------------------
# Hypergeometric and Period Series
# ------------------------------------------------------------
def test_hypergeometric_4f3_head():
    F = hypergeometric_series([Fraction(1, 2)] * 4, [1, 1, 1], 256, 4)
    assert [int(c) for c in F.tolist()] == [1, 16, 1296, 160000, 24010000]


def test_christol_3f2_head():
    F = hypergeometric_series([Fraction(1, 9), Fraction(4, 9), Fraction(5, 9)], [Fraction(1, 3), 1], 729, 3)
    assert [int(c) for c in F.tolist()] == [1, 60, 20475, 9373650]


def test_hypergeometric_rejects_nonpositive_lower_parameter():
    with pytest.raises(RejectedInput):
        hypergeometric_series([Fraction(1, 2)], [0], 1, 4)


def test_ratio_of_2f1_is_integral():
    half, third = Fraction(1, 2), Fraction(1, 3)
    num = hypergeometric_series([third, third], [1], 27, 10)
    den = hypergeometric_series([half, half], [1], 16, 10)
    R = ratio_series(num, den).as_integer_series()
    assert R.tolist() == [1, -1, 4, 208, 5549, 133699, 3142224, 73623828,
                          1733029548, 41095725700, 982470703424]


def test_complementary_period_series_even_coefficients():
    y0 = complementary_period_series(18)
    assert y0.coefficient(2) == Fraction(1, 4)
    assert y0.coefficient(4) == Fraction(21, 128)
    assert y0.coefficient(6) == Fraction(185, 1536)
    assert y0.coefficient(8) == Fraction(18655, 196608)
    assert y0.coefficient(18) == Fraction(99205524275, 2164663517184)
    assert all(y0.coefficient(k) == 0 for k in range(1, 19, 2))


# ------------------------------------------------------------
# Diagnostics on Series
# ------------------------------------------------------------
def test_growth_estimate_exact_on_geometric_series():
    est = growth_estimate(IntegerSeries([2 ** k for k in range(41)]))
    assert est.lambda_ == pytest.approx(2.0)
    assert est.radius == pytest.approx(0.5)
    assert est.window == (20, 40)


def test_growth_estimate_is_geometric_mean_of_ratios():
    s = IntegerSeries([1, 1, 2, 4, 32, 64, 1024])
    est = growth_estimate(s, window=(2, 6))
    assert est.lambda_ == pytest.approx(512 ** 0.25)
    assert est.exponent is None


def test_growth_estimate_rejects_zero_in_window():
    with pytest.raises(RejectedInput):
        growth_estimate(IntegerSeries([1, 2, 0, 8, 16, 32]), window=(1, 5))
    with pytest.raises(RejectedInput):
        growth_estimate(IntegerSeries([1, 2, 4, 8]), method="median")


def test_growth_estimate_of_tutte_series(S):
    est = growth_estimate(S)
    assert 19.9 < est.lambda_ < 20.1378
    assert est.lambda_ * est.radius == pytest.approx(1.0)


def test_growth_regression_reports_exponent(central_binomial):
    est = growth_estimate(central_binomial, method="regression")
    assert est.lambda_ == pytest.approx(4.0, rel=1e-3)
    assert est.exponent == pytest.approx(-0.5, abs=0.05)


@pytest.mark.slow
def test_growth_estimate_of_tutte_series_deep_window(tutte_q4_deep):
    est = growth_estimate(tutte_q4_deep, window=(2000, 3000))
    assert est.lambda_ == pytest.approx(20.1378, abs=0.05)
    assert abs(est.radius - 0.04966) < 1e-3


def test_integrality_of_period_series_fails():
    report = integrality_check(complementary_period_series(10))
    assert not report.bounded_so_far
    assert {2, 3, 5} <= set(report.denominator_primes)


def test_integrality_of_elliptic_2f1_needs_sixteen():
    half = Fraction(1, 2)
    report = integrality_check(hypergeometric_series([half, half], [1], 1, 50), rescale_bound=16)
    assert report.bounded_so_far
    assert report.clearing_factor == 16


# ------------------------------------------------------------
# Arithmetic
# ------------------------------------------------------------
def test_inverse_and_product(rng):
    coeffs = [1] + [rng.randint(-50, 50) for _ in range(30)]
    s = IntegerSeries(coeffs)
    one = s * s.inverse()
    assert one.tolist() == [1] + [0] * 30


def test_substitute_scales_and_spreads():
    s = RationalSeries([1, 1, 1, 1, 1, 1])
    t = s.substitute(2, 2)
    assert t.coefficient(2) == 2
    assert t.coefficient(4) == 4
    assert t.coefficient(1) == 0
