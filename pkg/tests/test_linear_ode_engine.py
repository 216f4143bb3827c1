import pytest

from modules.catalog_engine import load_operator
from modules.diagnostics_engine import RejectedInput, UnsupportedModulus
from modules.linear_ode_engine import (
    LinearDiffOperator,
    apply_operator,
    guess_ode_modp,
    hermite_pade_ode,
    holonomy_rejection_test,
    search_ode_modp,
    singularity_report,
    spurious_operator,
)
from modules.modular_engine import ModSeries, reduce
from modules.series_engine import tutte_series

THETA = [[], [1]]
BINOMIAL_OP = [[0, -2], [1, -4]]  # (1 - 4w)θ - 2w
LEGENDRE_OP = [[0, -4], [0, -16], [1, -16]]  # θ² - 16w(θ + 1/2)²


# ------------------------------------------------------------
# Operators
# ------------------------------------------------------------
def test_operator_shape_and_normalisation():
    L = LinearDiffOperator([[0, 2], [4, 2]], 5)
    assert (L.order, L.degree) == (1, 1)
    assert L.normalized().coeffs == ((0, 1), (2, 1))
    assert L.equivalent(L.scaled(3))


def test_zero_operator_is_rejected():
    with pytest.raises(RejectedInput):
        LinearDiffOperator([[0], [0]], 5)


def test_theta_to_d_form():
    L = LinearDiffOperator(THETA)
    assert L.to_d_form().form == "D"
    assert L.to_d_form().coeffs == ((), (0, 1))


def test_d_to_theta_form_premultiplies():
    D = LinearDiffOperator(THETA, form="D")
    back = D.to_theta_form()
    assert back.meta["premultiplied"] == 1
    assert back.coeffs == ((), (1,))


def test_compose_theta_powers():
    L = LinearDiffOperator(THETA, 7)
    assert L.compose(L).coeffs == ((), (), (1,))


def test_operator_json_codec():
    L = LinearDiffOperator(BINOMIAL_OP)
    payload = L.to_json()
    assert payload["domain"] == "rational"
    assert payload["coeffs"] == [["0", "-2"], ["1", "-4"]]
    assert LinearDiffOperator.from_json(payload) == L


def test_spurious_operator_kills_every_series(rng):
    for p in (3, 5, 7):
        s = ModSeries([rng.randrange(p) for _ in range(60)], p)
        assert apply_operator(spurious_operator(p), s).is_zero()
    with pytest.raises(UnsupportedModulus):
        spurious_operator(9)


def test_apply_rational_operator(central_binomial):
    out = apply_operator(LinearDiffOperator(BINOMIAL_OP), central_binomial)
    assert out.is_zero()
    assert out.n == central_binomial.n - 1


def test_catalogued_operators_annihilate_tutte_series(S):
    for name in ("L3", "L5", "L7", "L11", "L13", "L17"):
        L = load_operator(name)
        assert apply_operator(L, reduce(S, L.modulus)).is_zero(), name


def test_l7_carries_theta_squared_term(S):
    L = load_operator("L7")
    assert L.coefficient(2, 0) == 2
    without = LinearDiffOperator([[0, 0, 0, 3], [4, 0, 0, 1], [], [3, 0, 0, 3], [5, 0, 0, 1]], 7)
    assert not apply_operator(without, reduce(S, 7)).is_zero()


# ------------------------------------------------------------
# Guessing over F_p
# ------------------------------------------------------------
def test_guess_constant_series_gives_theta():
    s = ModSeries([1] + [0] * 30, 5)
    L = guess_ode_modp(s, 1, 0, guard=10)
    assert L is not None
    assert L.equivalent(LinearDiffOperator(THETA, 5))


def test_guess_geometric_series():
    s = ModSeries([1] * 61, 5)
    L = guess_ode_modp(s, 1, 1, guard=20)
    assert L.equivalent(LinearDiffOperator([[0, -1], [1, -1]], 5))
    assert L.meta["nullity"] == 1


def test_guess_refuses_order_at_least_p():
    s = ModSeries([1, 2, 0, 1] * 20, 3)
    assert guess_ode_modp(s, 3, 0, guard=10) is None


def test_guess_rejects_composite_modulus_and_short_series():
    with pytest.raises(UnsupportedModulus):
        guess_ode_modp(ModSeries([1] * 50, 9), 1, 1, guard=10)
    with pytest.raises(RejectedInput):
        guess_ode_modp(ModSeries([1] * 10, 5), 2, 2, guard=10)


def test_guess_recovers_catalogued_mod3_operator(S):
    L = guess_ode_modp(reduce(S, 3), 2, 1)
    assert L is not None
    assert L.equivalent(load_operator("L3"))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["L5", "L7", "L11", "L13", "L17"])
def test_guess_recovers_catalogued_operators_from_deep_series(S_deep, name):
    expected = load_operator(name)
    L = guess_ode_modp(reduce(S_deep, expected.modulus), expected.order, expected.degree)
    assert L is not None
    assert L.equivalent(expected)


def test_search_finds_an_annihilator_mod3(S):
    s3 = reduce(S, 3)
    L = search_ode_modp(s3, 4, 4)
    assert L is not None
    assert L.order <= 2
    assert apply_operator(L, s3).is_zero()


# ------------------------------------------------------------
# Exact Fits and Holonomy Rejection
# ------------------------------------------------------------
def test_hermite_pade_recovers_binomial_operator(central_binomial):
    L = hermite_pade_ode(central_binomial, 1, 1, n_use=20)
    assert L is not None
    assert L.modulus is None
    assert L.equivalent(LinearDiffOperator(BINOMIAL_OP))
    assert L.meta["n_use"] == 20


def test_hermite_pade_recovers_legendre_operator(elliptic_2f1):
    L = hermite_pade_ode(elliptic_2f1, 2, 1, n_use=40)
    assert L.equivalent(LinearDiffOperator(LEGENDRE_OP))


def test_hermite_pade_rejects_bad_n_use(central_binomial):
    with pytest.raises(RejectedInput):
        hermite_pade_ode(central_binomial, 1, 1, n_use=central_binomial.n + 1)
    with pytest.raises(RejectedInput):
        hermite_pade_ode(central_binomial, 1, 1, n_use=2)


def test_hermite_pade_default_n_use_is_unknowns_minus_one(central_binomial):
    L = hermite_pade_ode(central_binomial, 1, 1)
    assert L.meta["n_use"] == 3
    assert L.equivalent(LinearDiffOperator(BINOMIAL_OP))


def test_holonomy_passes_for_holonomic_series(central_binomial):
    report = holonomy_rejection_test(central_binomial, budgets=[(1, 1)], n_use=40, holdout=60)
    assert report[0]["verdict"] == "PASS"
    assert report[0]["fit_found"]


def test_holonomy_rejects_tutte_series(S):
    report = holonomy_rejection_test(S, budgets=[(1, 10), (2, 10)], n_use=200, holdout=200)
    assert [r["verdict"] for r in report] == ["REJECTED", "REJECTED"]
    assert all(r["failing_index"] is not None for r in report)


def test_holonomy_needs_enough_coefficients(central_binomial):
    with pytest.raises(RejectedInput):
        holonomy_rejection_test(central_binomial, budgets=[(1, 1)], n_use=100, holdout=100)


# ------------------------------------------------------------
# Singularity Reports
# ------------------------------------------------------------
def test_singularity_report_of_binomial_operator(central_binomial):
    report = singularity_report(LinearDiffOperator(BINOMIAL_OP), central_binomial)
    nearest = report.nearest()
    assert abs(nearest.location - 0.25) < 1e-9
    assert nearest.multiplicity == 1
    assert nearest.exponents[0] == pytest.approx(-0.5)
    assert report.radius == pytest.approx(0.25)
    assert report.growth.lambda_ == pytest.approx(4.0, rel=0.05)
    assert report.origin_exponents[0] == pytest.approx(0.0)


def test_singularity_report_constant_leading_coefficient():
    report = singularity_report(LinearDiffOperator([[0, 1], [1]]))
    assert report.entries == []
    assert report.radius is None


def test_singularity_report_needs_rational_operator():
    with pytest.raises(RejectedInput):
        singularity_report(LinearDiffOperator(THETA, 5))


def test_singularity_report_with_repeated_exponents():
    report = singularity_report(LinearDiffOperator(LEGENDRE_OP))
    assert report.radius == pytest.approx(1 / 16)
    at_sixteenth = next(e for e in report.entries if abs(e.location - 1 / 16) < 1e-9)
    assert len(at_sixteenth.exponents) == 2
    assert all(abs(x) < 1e-9 for x in at_sixteenth.exponents)
    assert report.origin_exponents == pytest.approx((0.0, 0.0))
    assert report.infinity_exponents == pytest.approx((0.5, 0.5))


@pytest.mark.slow
def test_singularity_report_of_fitted_tutte_operator():
    H = tutte_series(4, 1300)
    L = hermite_pade_ode(H, 10, 24)
    assert L is not None
    assert L.meta["n_use"] == 11 * 25 - 1
    report = singularity_report(L, H)
    assert abs(report.radius - 0.04965) < 5e-4
    nearest = min((e for e in report.entries if abs(e.location) > 1e-9), key=lambda e: abs(e.location))
    assert any(abs(x - 1.5) < 0.05 for x in nearest.exponents)
    locations = [e.location for e in report.entries]
    pair = complex(0.202837, 0.0964358)
    assert any(abs(z - pair) < 1e-2 for z in locations)
    assert any(abs(z - pair.conjugate()) < 1e-2 for z in locations)
    assert abs(1 / report.growth.lambda_ - report.radius) < 1e-3
