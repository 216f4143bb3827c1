import pytest

from modules.diagnostics_engine import RejectedInput
from modules.nonlinear_engine import (
    RATIO_2F1,
    TUTTE_Q,
    TUTTE_Q4_REDUCED,
    NonlinearODE,
    make_ode,
    ratio_2f1_series,
    residual,
    residual_vanishes,
    schwarzian_residual,
    shifted_by_var,
    verify_autonomous_q4,
)
from modules.series_engine import SYMBOLIC, IntegerSeries, family_solution, scaled_family, tutte_series


# ------------------------------------------------------------
# Tutte q-Equation
# ------------------------------------------------------------
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_tutte_series_solves_q_equation(q):
    ode = make_ode(TUTTE_Q, q)
    vanishes, order = residual_vanishes(ode, tutte_series(q, 40))
    assert vanishes
    assert order == 40 - (ode.max_derivative + ode.max_wexp)
    assert order == 37


def test_symbolic_tutte_series_solves_q_equation():
    H = tutte_series(SYMBOLIC, 14)
    assert residual(make_ode(TUTTE_Q, SYMBOLIC), H).is_zero()


def test_family_solution_solves_q_equation():
    F = family_solution(3, 2, 30)
    assert residual(make_ode(TUTTE_Q, 3), F).is_zero()


def test_perturbed_series_leaves_residual():
    H = tutte_series(5, 20)
    coeffs = H.tolist()
    coeffs[6] += 1
    assert not residual(make_ode(TUTTE_Q, 5), IntegerSeries(coeffs)).is_zero()


def test_q_equation_needs_a_value_of_q():
    with pytest.raises(RejectedInput):
        make_ode(TUTTE_Q)
    with pytest.raises(RejectedInput):
        make_ode("NOT_AN_ODE")


# ------------------------------------------------------------
# Reduced and Autonomous Forms at q = 4
# ------------------------------------------------------------
def test_shifted_series_solves_reduced_equation():
    F = shifted_by_var(tutte_series(4, 40))
    assert F.coefficient(1) == 1
    assert residual(make_ode(TUTTE_Q4_REDUCED), F).is_zero()


def test_reduced_equation_residual_on_monomial():
    F = IntegerSeries([0, 1, 0, 0, 0, 0, 0, 0])
    r = residual(make_ode(TUTTE_Q4_REDUCED), F)
    assert r.coefficient(1) == 48
    assert [r.coefficient(k) for k in range(r.n + 1) if k != 1] == [0] * r.n


def test_scaling_symmetry_of_reduced_equation():
    F = shifted_by_var(tutte_series(4, 30))
    for A in (2, 3, -1):
        assert residual(make_ode(TUTTE_Q4_REDUCED), scaled_family(F, A)).is_zero()


def test_autonomous_form():
    assert verify_autonomous_q4(shifted_by_var(tutte_series(4, 40)))


def test_autonomous_form_detects_wrong_series():
    F = shifted_by_var(tutte_series(4, 20))
    coeffs = F.tolist()
    coeffs[5] += 1
    assert not verify_autonomous_q4(IntegerSeries(coeffs))


def test_autonomous_form_needs_leading_monomial():
    with pytest.raises(RejectedInput):
        verify_autonomous_q4(tutte_series(4, 20))


# ------------------------------------------------------------
# Ratio of 2F1 Series
# ------------------------------------------------------------
def test_ratio_series_solves_its_equation():
    R = ratio_2f1_series(40)
    assert R.tolist()[:5] == [1, -1, 4, 208, 5549]
    assert residual(make_ode(RATIO_2F1), R).is_zero()


def test_ratio_equation_is_third_order():
    ode = make_ode(RATIO_2F1)
    assert ode.max_derivative == 3
    assert ode.var == "x"


def test_ode_json_codec():
    ode = make_ode(TUTTE_Q4_REDUCED)
    back = NonlinearODE.from_json(ode.to_json())
    assert back.term_set() == ode.term_set()


# ------------------------------------------------------------
# Schwarzian Check
# ------------------------------------------------------------
def test_schwarzian_residual_vanishes():
    assert schwarzian_residual(24).is_zero()


def test_schwarzian_residual_needs_order():
    with pytest.raises(RejectedInput):
        schwarzian_residual(4)
