import pytest

from modules.catalog_engine import catalog_names, load_relation, subject_series
from modules.diagnostics_engine import RejectedInput, UnsupportedModulus
from modules.hypergeom_engine import christol_mod
from modules.modular_engine import ModSeries, lacunary_series, reduce
from modules.relation_engine import (
    BivariateRelation,
    FrobeniusRelation,
    evaluate_relation,
    guess_frobenius,
    guess_relation,
    search_relation,
    verify_frobenius,
    verify_relation,
)


# ------------------------------------------------------------
# Bivariate Relations
# ------------------------------------------------------------
def test_relation_normalisation_and_degrees():
    P = BivariateRelation(5, {(0, 0): 2, (1, 1): 3, (2, 2): 2})
    assert (P.degS, P.degW) == (2, 2)
    N = P.normalized()
    assert N.terms[(2, 2)] == 1
    assert P.equivalent(N)


def test_relation_needs_unknown():
    with pytest.raises(RejectedInput):
        BivariateRelation(5, {(3, 0): 1})


def test_relation_json_codec():
    P = load_relation("p5")
    payload = P.to_json()
    assert payload["degS"] == 2
    assert payload["modulus"] == 5
    assert BivariateRelation.from_json(payload).terms == P.terms


def test_relation_text():
    P = BivariateRelation.from_polys(3, {0: [0, 1], 1: [2], 3: [1]})
    assert str(P) == "S^3 + 2·S + w ≡ 0 (mod 3)"


@pytest.mark.parametrize("name", ["p3", "p5", "p7", "p9", "p11"])
def test_catalogued_tutte_relations_hold(S, name):
    P = load_relation(name)
    assert verify_relation(P, reduce(S, P.modulus))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["p13", "p17", "p19"])
def test_catalogued_large_prime_relations_hold(S, name):
    P = load_relation(name)
    assert verify_relation(P, reduce(S, P.modulus))


def test_catalogued_auxiliary_relations_hold():
    for name in ("L3_mod3", "L6_mod3", "L3_mod9", "L6_mod9", "4F3_mod9"):
        P = load_relation(name)
        s = subject_series(P.meta["subject"], P.modulus, 300)
        assert verify_relation(P, s), name


def test_catalog_lists_every_relation():
    assert {"p3", "p5", "p19", "4F3_mod9"} <= set(catalog_names("relation"))


def test_wrong_relation_is_falsified(S):
    P = BivariateRelation(5, {(0, 1): 1, (0, 0): 1})
    s5 = reduce(S, 5)
    assert not verify_relation(P, s5)
    assert not evaluate_relation(P, s5).is_zero()


def test_relation_modulus_mismatch(S):
    with pytest.raises(RejectedInput):
        verify_relation(load_relation("p5"), reduce(S, 7))


# ------------------------------------------------------------
# Guessing
# ------------------------------------------------------------
def test_guess_relation_recovers_mod5_relation(S):
    P = guess_relation(reduce(S, 5), 2, 2, guard=200)
    assert P is not None
    assert P.equivalent(load_relation("p5"))
    assert P.meta["nullity"] == 1


def test_guess_relation_finds_nothing_below_minimal_degree(S):
    assert guess_relation(reduce(S, 5), 1, 20, guard=200) is None


def test_guess_relation_constant_series():
    s = ModSeries([1] + [0] * 60, 5)
    P = guess_relation(s, 1, 0, guard=10)
    assert P is not None
    assert P.equivalent(BivariateRelation(5, {(0, 1): 1, (0, 0): -1}))


def test_search_relation_geometric_series():
    geometric = ModSeries([1] * 81, 3)
    P = search_relation(geometric, guard=20)
    assert P is not None
    assert P.equivalent(BivariateRelation(3, {(0, 1): 1, (1, 1): -1, (0, 0): -1}))
    assert P.meta["budget"] == (1, 1)


def test_search_relation_mod5_minimal_budget(S):
    P = search_relation(reduce(S, 5), guard=200)
    assert P.equivalent(load_relation("p5"))
    assert P.meta["budget"] == (2, 2)


@pytest.mark.slow
@pytest.mark.parametrize("p, budget", [(3, (3, 5)), (7, (4, 4)), (11, (10, 14)), (13, (14, 21))])
def test_search_relation_minimal_budgets(S_deep, p, budget):
    s = reduce(S_deep, p)
    P = search_relation(s, guard=500)
    assert P is not None
    assert P.meta["budget"] == budget
    assert verify_relation(P, s)


def test_guess_relation_over_prime_power():
    s = lacunary_series("L3", 9, 200)
    P = guess_relation(s, 6, 2, guard=60)
    assert P is not None
    assert verify_relation(P, s)


def test_guess_relation_rejects_composite_modulus(S):
    with pytest.raises(UnsupportedModulus):
        guess_relation(reduce(S, 6), 1, 1, guard=10)


def test_guess_relation_rejects_short_series():
    with pytest.raises(RejectedInput):
        guess_relation(lacunary_series("L3", 3, 20), 3, 3, guard=10)


# ------------------------------------------------------------
# Frobenius Relations
# ------------------------------------------------------------
def test_guess_frobenius_for_lacunary_series():
    s = lacunary_series("L3", 3, 200)
    R = guess_frobenius(s, 1, 1, guard=20)
    assert R is not None
    assert R.terms == {0: [0, 1], 1: [2], 3: [1]}


def test_christol_mod2_frobenius_relation():
    R = FrobeniusRelation(2, {0: [], 1: [1], 64: [1, 0, 1]}, "x")
    assert verify_frobenius(R, christol_mod(500, 2))


def test_frobenius_relation_exponents_must_be_powers():
    with pytest.raises(RejectedInput):
        FrobeniusRelation(3, {1: [1], 6: [1]})


def test_frobenius_json_indices():
    R = FrobeniusRelation(3, {0: [0, 1], 1: [2], 3: [1]})
    payload = R.to_json()
    assert [t["i"] for t in payload["terms"]] == [-1, 0, 1]
    assert FrobeniusRelation.from_json(payload).terms == R.terms
