import pytest

from modules.catalog_engine import load_operator
from modules.diagnostics_engine import RejectedInput, UnsupportedModulus
from modules.linear_ode_engine import LinearDiffOperator
from modules.p_curvature_engine import (
    NILPOTENT,
    OTHER,
    ZERO,
    classify_p_curvature,
    p_curvature,
    p_curvature_summary,
)

LEGENDRE_OP = [[0, -4], [0, -16], [1, -16]]


def test_derivation_has_zero_p_curvature():
    D = LinearDiffOperator([[], [1]], 5, form="D")
    assert p_curvature(D).is_zero()
    assert classify_p_curvature(D) == ZERO


def test_shifted_derivation_is_other():
    L = LinearDiffOperator([[-1], [1]], 5, form="D")
    result = p_curvature(L)
    assert not result.is_zero()
    assert classify_p_curvature(L, result) == OTHER


@pytest.mark.parametrize("name", ["L3", "L5", "L7"])
def test_small_catalogued_operators_have_zero_p_curvature(name):
    assert classify_p_curvature(load_operator(name)) == ZERO


@pytest.mark.slow
@pytest.mark.parametrize("name", ["L11", "L13", "L17"])
def test_large_catalogued_operators_have_zero_p_curvature(name):
    assert classify_p_curvature(load_operator(name)) == ZERO


def test_legendre_operator_is_nilpotent_mod7():
    L = LinearDiffOperator(LEGENDRE_OP, 7)
    assert classify_p_curvature(L) == NILPOTENT


def test_reduced_recursion_agrees():
    L = LinearDiffOperator(LEGENDRE_OP, 7)
    assert p_curvature(L).entries() == p_curvature(L, reduce_steps=True).entries()


def test_summary_reports_entry_degree():
    summary = p_curvature_summary(LinearDiffOperator(LEGENDRE_OP, 7))
    assert summary["classification"] == NILPOTENT
    assert summary["max_entry_degree"] > 0


def test_p_curvature_json_shape():
    L = LinearDiffOperator([[-1], [1]], 5, form="D")
    payload = p_curvature(L).to_json()
    assert payload["p"] == 5
    assert payload["entries"] == [[{"num": [1], "den": [1]}]]


def test_p_curvature_needs_prime_field():
    with pytest.raises(UnsupportedModulus):
        p_curvature(LinearDiffOperator([[], [1]], 9, form="D"))
    with pytest.raises(UnsupportedModulus):
        p_curvature(LinearDiffOperator([[], [1]], form="D"))


def test_p_curvature_needs_positive_order():
    with pytest.raises(RejectedInput):
        p_curvature(LinearDiffOperator([[1]], 5))
