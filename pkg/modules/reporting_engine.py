"""
Modular Series Engine — Reporting Engine Module
Version: v1.0
Purpose:
    • Run every catalogued certification against freshly generated series
    • Collect one verdict row per check into a pandas DataFrame
    • Print console tables, export CSV + PDF for review
    • Fill the certification brief template
"""

import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from functools import lru_cache

import pandas as pd
from reportlab.lib import colors
from reportlab.lib.pagesizes import letter
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle
from tabulate import tabulate

from modules.catalog_engine import (
    catalog_names,
    load_lacunary_identity,
    load_operator,
    load_power_identity,
    load_relation,
    subject_series,
)
from modules.diagnostics_engine import ModSeriesError, NonIntegralError, event_log_frame, log_event
from modules.format_engine import atomic_write_text
from modules.hypergeom_engine import christol_lacunary_check, christol_mod, family_mod, truncation_polynomial
from modules.linear_ode_engine import apply_operator
from modules.modular_engine import power_identity_check, reduce
from modules.p_curvature_engine import classify_p_curvature
from modules.relation_engine import verify_relation
from modules.series_engine import normalized_series, tutte_series

# === CONFIGURATION ===
THREADS_ENV = "MODSERIES_THREADS"
REPORT_COLUMNS = ["Check", "Modulus", "Order", "Verdict", "Seconds"]
DEFAULT_CSV = "certification_report.csv"
DEFAULT_PDF = "certification_report.pdf"
DEFAULT_BRIEF = "certification_brief.md"
BRIEF_TEMPLATE = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "Certification_Brief_Template.md")

# family -> (prime, exponent, truncation polynomial)
TRUNCATION_EXPECTATIONS = {
    "4f3": (23, 22, [1, 16, 8, 12, 1, 1, 3, 4, 18, 16, 12, 1]),
    "5f4": (5, 4, [1, 2, 1]),
    "5f4-mixed": (5, 24, [1, 2, 4, 0, 0, 3, 1, 2]),
}


def worker_count():
    try:
        return max(1, int(os.getenv(THREADS_ENV, "1")))
    except ValueError:
        return 1


# ------------------------------------------------------------
# Individual Checks (top-level so worker processes can pickle them)
# ------------------------------------------------------------
@lru_cache(maxsize=4)
def _normalized(order):
    return normalized_series(tutte_series(4, order + 2))


def _verdict(flag):
    return "PASS" if flag else "FAIL"


def _check_relation(name, order):
    P = load_relation(name)
    s = subject_series(P.meta["subject"], P.modulus, order)
    return P.modulus, _verdict(verify_relation(P, s))


def _check_operator(name, order):
    L = load_operator(name)
    s = reduce(_normalized(order), L.modulus)
    return L.modulus, _verdict(apply_operator(L, s).is_zero())


def _check_pcurv(name, order):
    L = load_operator(name)
    return L.modulus, classify_p_curvature(L)


def _check_lacunary(name, order):
    identity = load_lacunary_identity(name)
    try:
        return identity.modulus, _verdict(identity.certify(_normalized(order)))
    except NonIntegralError:
        return identity.modulus, "FAIL"


def _check_power(name, order):
    identity = load_power_identity(name)
    s = subject_series(identity.series, identity.modulus, order)
    return identity.modulus, _verdict(identity.certify(s))


def _check_truncation(name, order):
    p, e, poly = TRUNCATION_EXPECTATIONS[name]
    found = truncation_polynomial(family_mod(name, order, p), p)
    return p, _verdict(found is not None and found.e == e and list(found.poly) == poly)


def _check_christol(name, order):
    if name == "lacunary-mod3":
        return 3, _verdict(christol_lacunary_check(order))
    # (1 + x^2)·S^63 ≡ 1 mod 2
    return 2, _verdict(power_identity_check(christol_mod(order, 2), 63, [1], [1, 0, 1]))


_CHECKS = {
    "relation": _check_relation,
    "operator": _check_operator,
    "pcurv": _check_pcurv,
    "lacunary": _check_lacunary,
    "power": _check_power,
    "truncation": _check_truncation,
    "christol": _check_christol,
}


def run_check(kind, name, order):
    """One report row; library failures become an ERROR verdict."""
    start = time.perf_counter()
    try:
        modulus, verdict = _CHECKS[kind](name, order)
    except ModSeriesError as e:
        log_event("REPORT", f"{kind}:{name} failed: {e}", "ERROR")
        modulus, verdict = None, "ERROR"
    return {
        "Check": f"{kind}:{name}",
        "Modulus": modulus,
        "Order": order,
        "Verdict": verdict,
        "Seconds": round(time.perf_counter() - start, 3),
    }


def check_plan():
    plan = [("relation", n) for n in catalog_names("relation")]
    plan += [("operator", n) for n in catalog_names("operator")]
    plan += [("pcurv", n) for n in catalog_names("operator")]
    plan += [("lacunary", n) for n in catalog_names("lacunary")]
    plan += [("power", n) for n in catalog_names("power")]
    plan += [("truncation", n) for n in TRUNCATION_EXPECTATIONS]
    plan += [("christol", "lacunary-mod3"), ("christol", "frobenius-mod2")]
    return plan


def certification_suite(order, workers=None):
    """Run every catalogued check at truncation `order`; one row per check, in plan order."""
    workers = worker_count() if workers is None else max(1, workers)
    plan = check_plan()
    log_event("REPORT", f"certification suite: {len(plan)} checks at order {order}, {workers} worker(s)")
    if workers == 1:
        rows = [run_check(kind, name, order) for kind, name in plan]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_check, kind, name, order) for kind, name in plan]
            rows = [f.result() for f in futures]
    df = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    log_event("REPORT", f"suite finished: {int((df['Verdict'] == 'FAIL').sum())} FAIL, {int((df['Verdict'] == 'ERROR').sum())} ERROR")
    return df


# ------------------------------------------------------------
# Console Output
# ------------------------------------------------------------
def print_report(df: pd.DataFrame):
    print("\n📊 Certification Results")
    print(tabulate(df, headers="keys", tablefmt="github", showindex=False, floatfmt=".3f"))
    counts = df["Verdict"].value_counts()
    print("\n🧮 Verdicts: " + ", ".join(f"{k} {v}" for k, v in counts.items()))


def verdict_table(rows):
    """Small key/value table for single-command output."""
    return tabulate(list(rows), headers=["Field", "Value"], tablefmt="github")


# ------------------------------------------------------------
# Exports
# ------------------------------------------------------------
def export_to_csv(df: pd.DataFrame, filename: str = DEFAULT_CSV):
    atomic_write_text(filename, df.to_csv(index=False))
    print(f"📁 CSV Exported: {filename}")


def export_event_log(filename):
    """Event log of this run as CSV."""
    atomic_write_text(filename, event_log_frame().to_csv(index=False))
    print(f"📁 Event Log Exported: {filename}")


def export_to_pdf(df: pd.DataFrame, filename: str = DEFAULT_PDF, title="Modular Series Engine — Certification Report"):
    """Certification table as a one-section PDF."""
    styles = getSampleStyleSheet()
    directory = os.path.dirname(os.path.abspath(filename))
    fd, tmp = tempfile.mkstemp(prefix=".modseries-", suffix=".pdf", dir=directory)
    os.close(fd)
    doc = SimpleDocTemplate(tmp, pagesize=letter)
    story = [
        Paragraph(title, styles["Title"]),
        Spacer(1, 12),
        Paragraph(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M')}", styles["Normal"]),
        Spacer(1, 12),
    ]
    data = [REPORT_COLUMNS] + df[REPORT_COLUMNS].astype(str).values.tolist()
    table = Table(data, repeatRows=1)
    table.setStyle(TableStyle([
        ("BACKGROUND", (0, 0), (-1, 0), colors.darkblue),
        ("TEXTCOLOR", (0, 0), (-1, 0), colors.whitesmoke),
        ("GRID", (0, 0), (-1, -1), 0.5, colors.black),
        ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
        ("FONTSIZE", (0, 0), (-1, -1), 8),
        ("ROWBACKGROUNDS", (0, 1), (-1, -1), [colors.lightgrey, colors.whitesmoke]),
    ]))
    story.append(table)
    try:
        doc.build(story)
        os.replace(tmp, filename)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)
    print(f"📄 PDF Exported: {filename}")


def fill_brief(df: pd.DataFrame, filename: str = DEFAULT_BRIEF, template: str = BRIEF_TEMPLATE, order=None):
    """Replace the {{ ... }} fields of the brief template and write the result."""
    with open(template, encoding="utf-8") as fh:
        text = fh.read()
    failing = df[df["Verdict"].isin(["FAIL", "ERROR"])]
    fields = {
        "date": datetime.now().strftime("%Y-%m-%d"),
        "order": str(order if order is not None else int(df["Order"].max())),
        "total_checks": str(len(df)),
        "pass_count": str(int((df["Verdict"] == "PASS").sum())),
        "fail_count": str(int((df["Verdict"] == "FAIL").sum())),
        "error_count": str(int((df["Verdict"] == "ERROR").sum())),
        "results_table": tabulate(df, headers="keys", tablefmt="github", showindex=False, floatfmt=".3f"),
        "failing_checks": ", ".join(failing["Check"]) if not failing.empty else "none",
    }
    for key, value in fields.items():
        text = text.replace("{{ " + key + " }}", value)
    atomic_write_text(filename, text)
    print(f"📝 Brief Written: {filename}")
