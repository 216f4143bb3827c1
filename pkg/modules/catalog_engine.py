# ============================================================
# 🛠 Modular Series Engine — Catalog Engine Module
# v1.0 | Transcribed Operators, Relations and Identities (data/catalog)
# ============================================================

import os
from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly, Symbol, sympify
from sympy.core.sympify import SympifyError

from modules.diagnostics_engine import ConsistencyError, RejectedInput, log_event
from modules.format_engine import load_object, read_json
from modules.hypergeom_engine import family_mod, hypergeometric_mod
from modules.linear_ode_engine import LinearDiffOperator
from modules.modular_engine import (
    LacunaryExpr,
    LacunaryIdentity,
    lacunary_series,
    power_identity_check,
    reduce,
)
from modules.relation_engine import BivariateRelation
from modules.series_engine import normalized_series, tutte_series

# === CONFIGURATION ===
CATALOG_ENV = "MODSERIES_CATALOG"
DEFAULT_CATALOG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "catalog")
CATALOG_PREFIX = "catalog:"

CATALOG_FILES = {
    "operator": "operators.json",
    "relation": "relations.json",
    "lacunary": "lacunary.json",
    "power": "power_identities.json",
}

_cache = {}


# ------------------------------------------------------------
# Catalog Files
# ------------------------------------------------------------
def catalog_dir():
    return os.getenv(CATALOG_ENV) or DEFAULT_CATALOG_DIR


def _entries(kind):
    if kind not in CATALOG_FILES:
        raise RejectedInput(f"unknown catalog kind {kind!r}")
    path = os.path.join(catalog_dir(), CATALOG_FILES[kind])
    if path not in _cache:
        _cache[path] = read_json(path)
        log_event("CATALOG", f"loaded {len(_cache[path])} {kind} entries from {path}", "DEBUG")
    return _cache[path]


def _entry(kind, name):
    entries = _entries(kind)
    if name not in entries:
        raise RejectedInput(f"no {kind} named {name!r} in the catalog")
    return entries[name]


def catalog_names(kind):
    return sorted(_entries(kind))


def polynomial_coefficients(text, var, modulus=None):
    """Ascending integer coefficients of a polynomial written as a sympy expression."""
    x = Symbol(var)
    try:
        poly = Poly(sympify(text, locals={var: x}), x)
    except (SympifyError, TypeError) as e:
        raise ConsistencyError(f"unparseable catalog polynomial {text!r}") from e
    coeffs = []
    for c in reversed(poly.all_coeffs()):
        if not c.is_Integer:
            raise ConsistencyError(f"non-integer coefficient {c} in {text!r}")
        coeffs.append(int(c) % modulus if modulus else int(c))
    return coeffs


# ------------------------------------------------------------
# Loaders
# ------------------------------------------------------------
def load_operator(name):
    e = _entry("operator", name)
    p = int(e["modulus"])
    order = max(int(i) for i in e["coeffs"])
    coeffs = [polynomial_coefficients(e["coeffs"].get(str(i), "0"), "w", p) for i in range(order + 1)]
    return LinearDiffOperator(coeffs, p, e.get("form", "theta"), "w", {"name": name})


def load_relation(name):
    e = _entry("relation", name)
    m = int(e["modulus"])
    var = e.get("var", "w")
    polys = {int(b): polynomial_coefficients(text, var, m) for b, text in e["polys"].items()}
    return BivariateRelation.from_polys(m, polys, var, "S", {"name": name, "subject": e.get("subject", "S")})


def load_lacunary_identity(name):
    e = _entry("lacunary", name)
    target = e.get("target", {})
    return LacunaryIdentity(
        name,
        int(e["modulus"]),
        LacunaryExpr.from_json(e["expr"]),
        Fraction(str(target.get("scale", "1"))),
        int(target.get("wexp", 0)),
        int(target.get("offset", 0)),
        target.get("reading", "exact"),
        {"printed": name.endswith("_printed")},
    )


@dataclass(frozen=True)
class PowerIdentity:
    """series^power · den ≡ num mod modulus."""

    name: str
    modulus: int
    series: str
    power: int
    num: tuple
    den: tuple

    def certify(self, s):
        return power_identity_check(s, self.power, list(self.num), list(self.den))


def load_power_identity(name):
    e = _entry("power", name)
    m = int(e["modulus"])
    return PowerIdentity(
        name,
        m,
        e["series"],
        int(e["power"]),
        tuple(polynomial_coefficients(e["num"], "x", m)),
        tuple(polynomial_coefficients(e["den"], "x", m)),
    )


# ------------------------------------------------------------
# Subject Series
# ------------------------------------------------------------
_HALF = Fraction(1, 2)
_THIRD = Fraction(1, 3)


def subject_series(subject, m, n):
    """The series a catalogued object speaks about, reduced mod m through order n."""
    if subject == "S":
        return reduce(normalized_series(tutte_series(4, n + 2)), m)
    if subject == "H":
        return reduce(tutte_series(4, n), m)
    if subject in ("L2", "L3", "L6"):
        return lacunary_series(subject, m, n)
    if subject == "4F3":
        return family_mod("4f3", n, m)
    if subject == "christol":
        return family_mod("christol", n, m)
    if subject == "2f1-16x":
        return hypergeometric_mod([_HALF, _HALF], [1], 16, n, m)
    if subject == "2f1-27x":
        return hypergeometric_mod([_THIRD, _THIRD], [1], 27, n, m)
    if subject == "2f1-16x2":
        return hypergeometric_mod([_HALF, _HALF], [1], 16, n // 2, m).substitute(2).truncate(n)
    if subject == "ratio-2f1":
        num = hypergeometric_mod([_THIRD, _THIRD], [1], 27, n, m)
        return num * hypergeometric_mod([_HALF, _HALF], [1], 16, n, m).inverse()
    raise RejectedInput(f"unknown subject series {subject!r}")


# ------------------------------------------------------------
# References (catalog:NAME or a JSON file)
# ------------------------------------------------------------
_LOADERS = {
    "operator": load_operator,
    "relation": load_relation,
    "lacunary": load_lacunary_identity,
    "power": load_power_identity,
}


def resolve_reference(ref, kind):
    """`catalog:NAME` loads a catalogued object; anything else is read as a JSON file."""
    if ref.startswith(CATALOG_PREFIX):
        return _LOADERS[kind](ref[len(CATALOG_PREFIX):])
    payload = read_json(ref)
    if kind == "lacunary" and "expr" in payload:
        target = payload.get("target", {})
        return LacunaryIdentity(
            os.path.basename(ref),
            int(payload["modulus"]),
            LacunaryExpr.from_json(payload["expr"]),
            Fraction(str(target.get("scale", "1"))),
            int(target.get("wexp", 0)),
            int(target.get("offset", 0)),
            target.get("reading", "exact"),
        )
    if kind == "power":
        m = int(payload["modulus"])
        return PowerIdentity(
            os.path.basename(ref),
            m,
            payload.get("series", "custom"),
            int(payload["power"]),
            tuple(int(c) % m for c in payload["num"]),
            tuple(int(c) % m for c in payload["den"]),
        )
    return load_object(payload, kind)
