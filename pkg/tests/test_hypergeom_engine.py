from fractions import Fraction

import pytest

from modules.catalog_engine import catalog_names, load_power_identity, subject_series
from modules.diagnostics_engine import InconclusiveError, RejectedInput
from modules.hypergeom_engine import (
    christol_lacunary_check,
    christol_mod,
    christol_series,
    christol_transform_mod3,
    family_mod,
    family_series,
    finding_json,
    frobenius_truncation_check,
    hypergeometric_mod,
    power_pattern,
    power_pattern_check,
    truncation_polynomial,
)
from modules.modular_engine import ModSeries, power_identity_check, reduce
from modules.series_engine import hypergeometric_series


# ------------------------------------------------------------
# Coefficients mod m
# ------------------------------------------------------------
@pytest.mark.parametrize("m", [2, 3, 7, 9, 45, 23])
def test_hypergeometric_mod_matches_exact_reduction(m):
    exact = family_series("4f3", 60)
    assert family_mod("4f3", 60, m) == reduce(exact, m)


def test_christol_mod_matches_exact_reduction():
    assert christol_mod(80, 45) == reduce(christol_series(80), 45)


def test_hypergeometric_mod_rejects_bad_denominators():
    with pytest.raises(RejectedInput):
        hypergeometric_mod([Fraction(1, 3)], [Fraction(1, 2)], 1, 10, 3)


def test_unknown_family():
    with pytest.raises(RejectedInput):
        family_series("7f6", 10)


def test_elliptic_2f1_mod7_head():
    s = hypergeometric_mod([Fraction(1, 2), Fraction(1, 2)], [1], 16, 4, 7)
    exact = hypergeometric_series([Fraction(1, 2), Fraction(1, 2)], [1], 16, 4)
    assert s == reduce(exact, 7)


# ------------------------------------------------------------
# Truncation Polynomials
# ------------------------------------------------------------
def test_truncation_polynomial_4f3_mod23():
    found = truncation_polynomial(family_mod("4f3", 120, 23), 23)
    assert found.e == 22
    assert found.poly == [1, 16, 8, 12, 1, 1, 3, 4, 18, 16, 12, 1]


def test_truncation_polynomial_5f4_mod5():
    found = truncation_polynomial(family_mod("5f4", 60, 5), 5)
    assert (found.e, found.poly) == (4, [1, 2, 1])


def test_truncation_polynomial_mixed_5f4_mod5():
    found = truncation_polynomial(family_mod("5f4-mixed", 100, 5), 5)
    assert (found.e, found.poly) == (24, [1, 2, 4, 0, 0, 3, 1, 2])


def test_truncation_polynomial_of_polynomial_inverse():
    s = ModSeries([1, 1, 1, 1, 1] + [0] * 100, 5).inverse()
    found = truncation_polynomial(s, 5)
    assert found.e == 4


def test_truncation_polynomial_inconclusive_margin():
    with pytest.raises(InconclusiveError):
        truncation_polynomial(family_mod("4f3", 30, 23), 23)


def test_truncation_polynomial_needs_prime_and_unit_constant():
    with pytest.raises(RejectedInput):
        truncation_polynomial(family_mod("4f3", 60, 9), 9)
    with pytest.raises(RejectedInput):
        truncation_polynomial(ModSeries([2, 1, 0, 0], 5), 5)


def test_finding_json_records():
    found = truncation_polynomial(family_mod("5f4", 60, 5), 5)
    record = finding_json("5f4", 5, found)
    assert record["verdict"] == "FOUND"
    assert record["poly"] == [1, 2, 1]
    assert finding_json("5f4", 7, None)["verdict"] == "NONE"


# ------------------------------------------------------------
# Frobenius and Power Patterns
# ------------------------------------------------------------
def test_frobenius_truncation_head_mod23():
    result = frobenius_truncation_check(family_mod("4f3", 120, 23), 23)
    assert result["identity_holds"]
    assert result["head"] == [(23, 16), (46, 8), (69, 12), (92, 1)]


def test_power_pattern_values():
    assert power_pattern(1) == (16, 1296, 160000)


def test_power_pattern_holds_for_small_powers():
    assert power_pattern_check(family_series("4f3", 10), range(1, 6))


def test_power_pattern_rejects_nonpositive_power():
    with pytest.raises(RejectedInput):
        power_pattern_check(family_series("4f3", 10), [0])


@pytest.mark.parametrize("name", ["ratio_2f1_mod7", "2f1_16x_mod7", "2f1_27x_mod7", "2f1_16x2_mod7"])
def test_catalogued_power_identities(name):
    identity = load_power_identity(name)
    s = subject_series(identity.series, identity.modulus, 300)
    assert identity.certify(s)


def test_power_identity_catalog_complete():
    assert len(catalog_names("power")) == 4


# ------------------------------------------------------------
# Christol 3F2
# ------------------------------------------------------------
def test_christol_transform_head():
    assert christol_transform_mod3(10).tolist()[:4] == [1, 1, 0, 1]


def test_christol_transform_reads_division_by_15_rationally():
    exact = christol_series(40)
    image = christol_transform_mod3(40).tolist()
    assert any(exact.coefficient(k) % 15 for k in range(1, 41))
    for k in range(1, 41):
        v = Fraction(int(exact.coefficient(k)), 15)
        assert image[k] == v.numerator * pow(v.denominator, -1, 3) % 3


def test_christol_transform_is_lacunary():
    assert christol_lacunary_check(400)


def test_christol_mod2_power_identity():
    assert power_identity_check(christol_mod(400, 2), 63, [1], [1, 0, 1])
