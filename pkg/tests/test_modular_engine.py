from fractions import Fraction

import pytest

from modules.catalog_engine import load_lacunary_identity
from modules.diagnostics_engine import NonIntegralError, RejectedInput, UnsupportedModulus
from modules.hypergeom_engine import christol_mod
from modules.modular_engine import (
    LacunaryAnsatz,
    LacunaryExpr,
    LacunaryTerm,
    ModSeries,
    fit_lacunary,
    frobenius_identity_holds,
    lacunary_series,
    lacunary_target,
    polynomial_mod,
    power_identity_check,
    reduce,
    support_check,
    verify_lacunary_identity,
)
from modules.series_engine import IntegerSeries, RationalSeries


# ------------------------------------------------------------
# Reduction
# ------------------------------------------------------------
def test_reduce_mod9_prefix(S):
    assert reduce(S, 9).tolist()[:9] == [1, 2, 5, 3, 6, 0, 0, 6, 8]


def test_reduce_mod6_is_sparse(S):
    s6 = reduce(S, 6).truncate(30)
    assert s6.nonzero_exponents() == [0, 1, 2, 8, 26]
    assert all(s6.coefficient(k) == 2 for k in (1, 2, 8, 26))


def test_reduce_mod2_is_constant(S):
    assert reduce(S, 2).nonzero_exponents() == [0]


def test_reduce_is_a_ring_morphism(rng):
    for m in (2, 3, 5, 7, 9, 12):
        a = IntegerSeries([rng.randint(-10 ** 6, 10 ** 6) for _ in range(40)])
        b = IntegerSeries([rng.randint(-10 ** 6, 10 ** 6) for _ in range(40)])
        assert reduce(a * b, m) == reduce(a, m) * reduce(b, m)
        assert reduce(a + b, m) == reduce(a, m) + reduce(b, m)


def test_reduce_rational_needs_invertible_denominators():
    s = RationalSeries([1, Fraction(1, 2), Fraction(1, 3)])
    assert reduce(s, 5).tolist() == [1, 3, 2]
    with pytest.raises(RejectedInput):
        reduce(s, 3)


def test_reduce_between_moduli(S):
    assert reduce(reduce(S, 9), 3) == reduce(S, 3)
    with pytest.raises(UnsupportedModulus):
        reduce(reduce(S, 9), 2)


def test_frobenius_identity_on_random_series(rng):
    for p in (2, 3, 5, 7):
        for _ in range(100):
            s = ModSeries([rng.randrange(p) for _ in range(31)], p)
            assert frobenius_identity_holds(s, p)


def test_modular_inverse():
    s = ModSeries([1, 3, 4, 1], 7)
    assert (s * s.inverse()).tolist() == [1, 0, 0, 0]


# ------------------------------------------------------------
# Lacunary Series
# ------------------------------------------------------------
def test_lacunary_series_supports():
    assert lacunary_series("L3", 3, 10).nonzero_exponents() == [1, 3, 9]
    assert lacunary_series("L6", 9, 20).nonzero_exponents() == [2, 6, 18]
    assert lacunary_series("L2", 2, 20).nonzero_exponents() == [1, 2, 4, 8, 16]


def test_lacunary_term_rejects_odd_denominators():
    with pytest.raises(RejectedInput):
        LacunaryTerm(Fraction(1, 3), "L3")


@pytest.mark.parametrize("name", ["mod2", "mod4", "mod8", "mod16", "mod32", "mod3", "mod6", "mod9"])
def test_catalogued_lacunary_identities_hold(S, name):
    identity = load_lacunary_identity(name)
    assert identity.certify(S)


def test_printed_mod9_identity_is_not_integral(S):
    identity = load_lacunary_identity("mod9_printed")
    with pytest.raises(NonIntegralError):
        identity.certify(S)


def test_printed_mod32_identity_fails_at_first_coefficient(S):
    printed = load_lacunary_identity("mod32_printed")
    target = printed.target(S)
    assert target.coefficient(1) == 0
    assert printed.expr.exact_coefficients(1)[1] % 32 == 29
    assert not printed.certify(S)
    assert printed.meta["printed"]


def test_lacunary_target_rejects_fractions():
    with pytest.raises(NonIntegralError):
        lacunary_target(IntegerSeries([1, 1, 2]), 3, scale=Fraction(1, 2))


def test_residue_reading_halves_mod6_representatives(S):
    exact = lacunary_target(S, 6, Fraction(1, 2), 1, 1)
    halved = lacunary_target(S, 6, Fraction(1, 2), 1, 1, reading="residues")
    assert exact.coefficient(4) == 69 % 6
    assert halved.coefficient(4) == 0
    assert halved.nonzero_exponents() == [1, 2, 3, 9, 27, 81, 243]
    assert load_lacunary_identity("mod6").reading == "residues"


def test_residue_reading_needs_divisible_residues():
    with pytest.raises(NonIntegralError):
        lacunary_target(IntegerSeries([1, 3]), 6, Fraction(1, 2), reading="residues")
    with pytest.raises(RejectedInput):
        lacunary_target(IntegerSeries([2, 4]), 6, Fraction(1, 2), reading="nearest")


def test_fit_lacunary_recovers_mod3_identity(S):
    target = lacunary_target(S, 3, Fraction(1, 2), 1, -1)
    expr = fit_lacunary(target, LacunaryAnsatz(max_degree=2))
    assert expr is not None
    assert verify_lacunary_identity(expr, target)
    assert verify_lacunary_identity(load_lacunary_identity("mod3").expr, target)


def test_fit_lacunary_rejects_short_targets():
    target = ModSeries([0, 1, 0, 1], 3)
    with pytest.raises(RejectedInput):
        fit_lacunary(target, LacunaryAnsatz(max_degree=2))


def test_lacunary_expr_json_shape():
    expr = load_lacunary_identity("mod6").expr
    payload = expr.to_json()
    assert payload["prefactor_exp"] == 0
    assert [t["basis"] for t in payload["terms"]] == ["L3", "POLY"]
    assert LacunaryExpr.from_json(payload) == expr


# ------------------------------------------------------------
# Power and Support Checks
# ------------------------------------------------------------
def test_power_identity_on_geometric_series():
    s = ModSeries([1] * 30, 5)
    assert power_identity_check(s, 1, [1], [1, 4])
    assert not power_identity_check(s, 2, [1], [1, 4])


def test_christol_support_mod5():
    assert support_check(christol_mod(1000, 5), 5)


def test_tutte_support_mod3_is_dense(S):
    assert not support_check(reduce(S, 3), 3)


def test_polynomial_mod_truncates():
    assert polynomial_mod([1, 2, 3, 4], 5, 2).tolist() == [1, 2, 3]
