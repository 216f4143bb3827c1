import json
from fractions import Fraction

import pytest

from modules.catalog_engine import (
    PowerIdentity,
    catalog_names,
    load_lacunary_identity,
    load_operator,
    load_relation,
    polynomial_coefficients,
    resolve_reference,
    subject_series,
)
from modules.diagnostics_engine import ConsistencyError, RejectedInput
from modules.format_engine import (
    dump_object,
    load_object,
    parse_series_text,
    read_json,
    read_series,
    series_text,
    write_json,
    write_series,
)
from modules.linear_ode_engine import LinearDiffOperator
from modules.modular_engine import ModSeries, reduce
from modules.relation_engine import BivariateRelation
from modules.series_engine import SYMBOLIC, LaurentRationalSeries, RationalSeries, tutte_series


# ------------------------------------------------------------
# Series Files
# ------------------------------------------------------------
def test_integer_series_file(tmp_path):
    H = tutte_series(4, 30)
    path = tmp_path / "h4.series"
    write_series(H, str(path))
    assert read_series(str(path)) == H


def test_modular_series_file(tmp_path, S):
    s = reduce(S, 9)
    path = tmp_path / "s9.mseries"
    write_series(s, str(path))
    back = read_series(str(path))
    assert back == s
    assert back.m == 9


def test_rational_and_laurent_series_text():
    r = RationalSeries([Fraction(1), Fraction(-1, 3), Fraction(5, 7)])
    assert parse_series_text(series_text(r)) == r
    laurent = LaurentRationalSeries([Fraction(2), Fraction(0), Fraction(1, 2)], "w", -1)
    back = parse_series_text(series_text(laurent))
    assert back.lead == -1
    assert back == laurent


def test_symbolic_series_text():
    H = tutte_series(SYMBOLIC, 6)
    assert parse_series_text(series_text(H)) == H


def test_series_text_header():
    text = series_text(ModSeries([1, 2, 0], 3))
    assert text.splitlines()[:2] == ["# format=modseries/1", "# var=w"]
    assert text.endswith("1\n2\n0\n")


def test_bad_series_files_are_rejected(tmp_path):
    with pytest.raises(RejectedInput):
        parse_series_text("# format=other\n1\n")
    with pytest.raises(RejectedInput):
        parse_series_text("# format=modseries/1\n# n=3\n1\n2\n")
    with pytest.raises(RejectedInput):
        parse_series_text("# format=modseries/1\n# n=1\n1\nx\n")
    with pytest.raises(RejectedInput):
        read_series(str(tmp_path / "missing.series"))


# ------------------------------------------------------------
# JSON Objects
# ------------------------------------------------------------
def test_operator_object_codec():
    L = load_operator("L3")
    payload = dump_object(L)
    assert payload["kind"] == "operator"
    assert load_object(payload) == L


def test_relation_object_codec(tmp_path):
    P = load_relation("p7")
    path = tmp_path / "p7.json"
    write_json(dump_object(P), str(path))
    back = load_object(read_json(str(path)))
    assert back.terms == P.terms


def test_unknown_object_kind():
    with pytest.raises(RejectedInput):
        load_object({"kind": "matrix"})
    with pytest.raises(RejectedInput):
        dump_object(3)


def test_invalid_json_is_rejected(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json", encoding="utf-8")
    with pytest.raises(RejectedInput):
        read_json(str(path))


# ------------------------------------------------------------
# Catalog
# ------------------------------------------------------------
def test_catalog_lists_operators():
    assert catalog_names("operator") == ["L11", "L13", "L17", "L3", "L5", "L7"]


def test_unknown_catalog_entries():
    with pytest.raises(RejectedInput):
        load_operator("L4")
    with pytest.raises(RejectedInput):
        catalog_names("matrix")


def test_polynomial_coefficients():
    assert polynomial_coefficients("1 + 4*x + x**3", "x") == [1, 4, 0, 1]
    assert polynomial_coefficients("-1 + 3*w", "w", 5) == [4, 3]
    with pytest.raises(ConsistencyError):
        polynomial_coefficients("x/2", "x")


def test_resolve_catalog_reference():
    L = resolve_reference("catalog:L3", "operator")
    assert isinstance(L, LinearDiffOperator)
    assert L.modulus == 3


def test_resolve_json_reference(tmp_path):
    path = tmp_path / "rel.json"
    path.write_text(json.dumps(dump_object(BivariateRelation(3, {(0, 1): 1, (0, 0): -1}))), encoding="utf-8")
    P = resolve_reference(str(path), "relation")
    assert P.terms == {(0, 1): 1, (0, 0): 2}


def test_resolve_power_reference(tmp_path):
    path = tmp_path / "power.json"
    path.write_text(json.dumps({"modulus": 7, "power": 6, "num": [1], "den": [1, 4, 1, 1]}), encoding="utf-8")
    identity = resolve_reference(str(path), "power")
    assert isinstance(identity, PowerIdentity)
    assert identity.certify(subject_series("2f1-16x", 7, 200))


def test_lacunary_identity_metadata():
    assert load_lacunary_identity("mod9_printed").meta["printed"]
    assert not load_lacunary_identity("mod9").meta["printed"]


def test_subject_series_of_h_and_s(S):
    assert subject_series("H", 5, 20) == reduce(tutte_series(4, 20), 5)
    assert subject_series("S", 7, 100) == reduce(S, 7).truncate(100)
    with pytest.raises(RejectedInput):
        subject_series("Z", 5, 10)


def test_catalog_directory_override(tmp_path, monkeypatch):
    (tmp_path / "operators.json").write_text(
        json.dumps({"Dmod5": {"modulus": 5, "coeffs": {"1": "1"}}}), encoding="utf-8"
    )
    monkeypatch.setenv("MODSERIES_CATALOG", str(tmp_path))
    assert catalog_names("operator") == ["Dmod5"]
