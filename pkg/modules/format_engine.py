# ============================================================
# 🛠 Modular Series Engine — Format Engine Module
# v1.0 | modseries/1 Series Files, JSON Objects, Atomic Writes
# ============================================================

import json
import os
import tempfile
from fractions import Fraction

from sympy import Poly

from modules.diagnostics_engine import RejectedInput, log_event
from modules.linear_ode_engine import LinearDiffOperator
from modules.modular_engine import LacunaryExpr, ModSeries
from modules.nonlinear_engine import NonlinearODE
from modules.relation_engine import BivariateRelation, FrobeniusRelation
from modules.series_engine import (
    Q,
    IntegerSeries,
    LaurentRationalSeries,
    QPolySeries,
    RationalSeries,
    as_fraction,
    as_int,
)

# === CONFIGURATION ===
FORMAT_TAG = "modseries/1"
SERIES_SUFFIXES = (".series", ".mseries")

_DOMAINS = {
    IntegerSeries: "int",
    RationalSeries: "rat",
    LaurentRationalSeries: "laurent",
    QPolySeries: "qpoly",
}

OBJECT_KINDS = ("operator", "relation", "frobenius", "lacunary", "nonlinear")


# ------------------------------------------------------------
# Atomic Writes
# ------------------------------------------------------------
def atomic_write_text(path, text):
    """Write through a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".modseries-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    log_event("FORMAT", f"wrote {path}", "DEBUG")


# ------------------------------------------------------------
# Series Files
# ------------------------------------------------------------
def _coefficient_text(c):
    if isinstance(c, Poly):
        coeffs = [int(x) for x in reversed(c.all_coeffs())] if not c.is_zero else [0]
        return ",".join(str(x) for x in coeffs)
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(int(c))


def series_text(s):
    """modseries/1 text of an exact series or a ModSeries."""
    if isinstance(s, ModSeries):
        header = {"format": FORMAT_TAG, "var": s.var, "domain": "int", "modulus": s.m, "n": s.n}
        body = [str(c) for c in s.tolist()]
    else:
        domain = _DOMAINS.get(type(s))
        if domain is None:
            raise RejectedInput(f"cannot serialise {type(s).__name__}")
        header = {"format": FORMAT_TAG, "var": s.var, "domain": domain, "modulus": 0, "n": s.n}
        lo = s.lead if isinstance(s, LaurentRationalSeries) else 0
        if domain == "laurent":
            header["lead"] = lo
        body = [_coefficient_text(s.coefficient(k)) for k in range(lo, s.n + 1)]
    lines = [f"# {k}={v}" for k, v in header.items()]
    return "\n".join(lines + body) + "\n"


def parse_series_text(text, source="<text>"):
    header = {}
    body = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                header[key.strip()] = value.strip()
            continue
        body.append(line)
    if header.get("format") != FORMAT_TAG:
        raise RejectedInput(f"{source}: not a {FORMAT_TAG} file")
    try:
        n = int(header["n"])
        modulus = int(header.get("modulus", 0))
        lead = int(header.get("lead", 0))
    except (KeyError, ValueError) as e:
        raise RejectedInput(f"{source}: malformed header ({e})") from e
    var = header.get("var", "w")
    domain = header.get("domain", "int")
    if len(body) != n - lead + 1:
        raise RejectedInput(f"{source}: header says n={n} but {len(body)} coefficients follow")
    try:
        if modulus:
            return ModSeries([as_int(c) for c in body], modulus, var)
        if domain == "int":
            return IntegerSeries([as_int(c) for c in body], var)
        if domain == "rat":
            return RationalSeries([as_fraction(c) for c in body], var)
        if domain == "laurent":
            return LaurentRationalSeries([as_fraction(c) for c in body], var, lead)
        if domain == "qpoly":
            return QPolySeries([Poly(list(reversed([int(x) for x in c.split(",")])), Q, domain="ZZ") for c in body], var)
    except ValueError as e:
        raise RejectedInput(f"{source}: bad coefficient ({e})") from e
    raise RejectedInput(f"{source}: unknown domain {domain!r}")


def write_series(s, path):
    atomic_write_text(path, series_text(s))


def read_series(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise RejectedInput(f"cannot read {path}: {e.strerror}") from e
    s = parse_series_text(text, os.path.basename(path))
    log_event("FORMAT", f"loaded {os.path.basename(path)} (order {s.n})", "DEBUG")
    return s


# ------------------------------------------------------------
# JSON Objects
# ------------------------------------------------------------
def json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(obj, path):
    atomic_write_text(path, json_text(obj))


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise RejectedInput(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise RejectedInput(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def dump_object(obj):
    """Tagged JSON payload {"kind": ..., ...} of an operator, relation or identity."""
    if isinstance(obj, LinearDiffOperator):
        return dict(obj.to_json(), kind="operator")
    if isinstance(obj, BivariateRelation):
        return dict(obj.to_json(), kind="relation")
    if isinstance(obj, FrobeniusRelation):
        return dict(obj.to_json(), kind="frobenius")
    if isinstance(obj, LacunaryExpr):
        return dict(obj.to_json(), kind="lacunary")
    if isinstance(obj, NonlinearODE):
        return dict(obj.to_json(), kind="nonlinear")
    raise RejectedInput(f"no JSON codec for {type(obj).__name__}")


def load_object(payload, kind=None):
    kind = kind or payload.get("kind")
    if kind == "operator":
        return LinearDiffOperator.from_json(payload)
    if kind == "relation":
        return BivariateRelation.from_json(payload)
    if kind == "frobenius":
        return FrobeniusRelation.from_json(payload)
    if kind == "lacunary":
        return LacunaryExpr.from_json(payload)
    if kind == "nonlinear":
        return NonlinearODE.from_json(payload)
    raise RejectedInput(f"unknown object kind {kind!r}; expected one of {', '.join(OBJECT_KINDS)}")
