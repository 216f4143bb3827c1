# ============================================================
# 🛠 Modular Series Engine — Console Driver
# v1.0 | gen · reduce · guess · verify · pcurv · diffpade · holonomy · report
# ============================================================

import argparse
import json
import os
import sys
from contextlib import redirect_stdout
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Optional

from tabulate import tabulate

from modules.catalog_engine import PowerIdentity, resolve_reference
from modules.diagnostics_engine import (
    InconclusiveError,
    ModSeriesError,
    RejectedInput,
    configure_console_logging,
    log_event,
)
from modules.format_engine import dump_object, json_text, read_series, series_text, write_json, write_series
from modules.hypergeom_engine import (
    christol_mod,
    christol_series,
    finding_json,
    frobenius_truncation_check,
    hypergeometric_mod,
    truncation_polynomial,
)
from modules.linear_ode_engine import (
    DEFAULT_GUARD_ODE,
    apply_operator,
    guess_ode_modp,
    hermite_pade_ode,
    holonomy_rejection_test,
    search_ode_modp,
    singularity_report,
)
from modules.modular_engine import (
    TARGET_READINGS,
    LacunaryAnsatz,
    LacunaryExpr,
    LacunaryIdentity,
    ModSeries,
    fit_lacunary,
    lacunary_target,
    reduce,
    verify_lacunary_identity,
)
from modules.nonlinear_engine import (
    RATIO_2F1,
    TUTTE_Q,
    TUTTE_Q4_REDUCED,
    make_ode,
    ratio_2f1_series,
    residual,
    schwarzian_residual,
    shifted_by_var,
    verify_autonomous_q4,
)
from modules.p_curvature_engine import p_curvature_summary
from modules.relation_engine import (
    DEFAULT_GUARD_REL,
    DEFAULT_RELATION_BUDGET,
    FrobeniusRelation,
    guess_frobenius,
    guess_relation,
    search_relation,
    verify_frobenius,
    verify_relation,
)
from modules.reporting_engine import (
    certification_suite,
    export_event_log,
    export_to_csv,
    export_to_pdf,
    fill_brief,
    print_report,
    verdict_table,
)
from modules.series_engine import (
    DEFAULT_ORDER,
    SYMBOLIC,
    complementary_period_series,
    family_solution,
    hypergeometric_series,
    normalized_series,
    tutte_series,
)

# === CONFIGURATION ===
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

NODE_ODES = ("tutte", "tutte-q4", "ratio-2f1", "autonomous-q4")


# ------------------------------------------------------------
# Job Configuration
# ------------------------------------------------------------
def _parse_rational(text, label):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise RejectedInput(f"{label}: {text!r} is not an exact rational") from e


def _parse_list(text, label):
    if text is None or not text.strip():
        return []
    return [_parse_rational(t, label) for t in text.split(",")]


@dataclass
class JobConfig:
    """Validated parameters of one command-line job."""

    command: str
    action: Optional[str] = None
    inputs: list = field(default_factory=list)
    output: Optional[str] = None
    q: object = None
    h1: Optional[Fraction] = None
    n: int = DEFAULT_ORDER
    modulus: Optional[int] = None
    order: Optional[int] = None
    degree: Optional[int] = None
    max_order: Optional[int] = None
    max_degree: Optional[int] = None
    deg_s: Optional[int] = None
    deg_w: Optional[int] = None
    guard: Optional[int] = None
    budget: Optional[int] = None
    n_use: Optional[int] = None
    holdout: int = 500
    i_max: int = 2
    e_max: Optional[int] = None
    upper: list = field(default_factory=list)
    lower: list = field(default_factory=list)
    scale: Fraction = Fraction(1)
    wexp: int = 0
    offset: int = 0
    reading: str = "exact"
    prefactor: int = 0
    kinds: tuple = ("L3",)
    ode: Optional[str] = None
    from_h: bool = False
    normalized: bool = False
    csv: Optional[str] = None
    pdf: Optional[str] = None
    brief: Optional[str] = None
    workers: Optional[int] = None
    json: bool = False
    verbose: bool = False

    @classmethod
    def from_args(cls, ns):
        q = getattr(ns, "q", None)
        if q is not None:
            q = SYMBOLIC if q.lower() == "symbolic" else _parse_rational(q, "--q")
        h1 = getattr(ns, "h1", None)
        config = cls(
            command=ns.command,
            action=getattr(ns, "action", None),
            inputs=list(getattr(ns, "inputs", []) or []),
            output=getattr(ns, "output", None),
            q=q,
            h1=None if h1 is None else _parse_rational(h1, "--h1"),
            n=getattr(ns, "n", None) or DEFAULT_ORDER,
            modulus=getattr(ns, "mod", None),
            order=getattr(ns, "order", None),
            degree=getattr(ns, "degree", None),
            max_order=getattr(ns, "max_order", None),
            max_degree=getattr(ns, "max_degree", None),
            deg_s=getattr(ns, "deg_s", None),
            deg_w=getattr(ns, "deg_w", None),
            guard=getattr(ns, "guard", None),
            budget=getattr(ns, "budget", None),
            n_use=getattr(ns, "n_use", None),
            holdout=getattr(ns, "holdout", None) or 500,
            i_max=getattr(ns, "i_max", None) or 2,
            e_max=getattr(ns, "e_max", None),
            upper=_parse_list(getattr(ns, "upper", None), "--upper"),
            lower=_parse_list(getattr(ns, "lower", None), "--lower"),
            scale=_parse_rational(getattr(ns, "scale", None) or "1", "--scale"),
            wexp=getattr(ns, "wexp", None) or 0,
            offset=getattr(ns, "offset", None) or 0,
            reading=getattr(ns, "reading", None) or "exact",
            prefactor=getattr(ns, "prefactor", None) or 0,
            kinds=tuple(k.strip() for k in (getattr(ns, "kinds", None) or "L3").split(",") if k.strip()),
            ode=getattr(ns, "ode", None),
            from_h=bool(getattr(ns, "from_h", False)),
            normalized=bool(getattr(ns, "normalized", False)),
            csv=getattr(ns, "csv", None),
            pdf=getattr(ns, "pdf", None),
            brief=getattr(ns, "brief", None),
            workers=getattr(ns, "workers", None),
            json=bool(ns.json),
            verbose=bool(ns.verbose),
        )
        config.validate()
        return config

    def validate(self):
        if self.n < 0:
            raise RejectedInput("--n must be nonnegative")
        if self.modulus is not None and self.modulus < 2:
            raise RejectedInput("--mod must be at least 2")
        for label in ("order", "degree", "max_order", "max_degree", "deg_w", "guard", "budget", "holdout", "e_max", "i_max"):
            value = getattr(self, label)
            if value is not None and value < 0:
                raise RejectedInput(f"--{label.replace('_', '-')} must be nonnegative")
        if self.deg_s is not None and self.deg_s < 1:
            raise RejectedInput("--deg-s must be at least 1")
        if self.n_use is not None and self.n_use < 1:
            raise RejectedInput("--n-use must be positive")
        if self.workers is not None and self.workers < 1:
            raise RejectedInput("--workers must be positive")
        if self.q is not None and self.q is not SYMBOLIC and self.q == 0:
            raise RejectedInput("--q must be nonzero")


# ------------------------------------------------------------
# Output Helpers
# ------------------------------------------------------------
def _emit(config, payload, rows=None, headline=None):
    if config.json:
        print(json_text(payload), end="")
        return
    if headline:
        print(headline)
    if rows:
        print(verdict_table(rows))


def _series_out(config, s):
    if config.output:
        write_series(s, config.output)
        _emit(config, {"written": config.output, "n": s.n}, headline=f"📁 Series written: {config.output} (order {s.n})")
    else:
        print(series_text(s), end="")
    return EXIT_OK


def _object_out(config, obj):
    if config.output and obj is not None:
        write_json(dump_object(obj), config.output)


def _input(config, index=0):
    if len(config.inputs) <= index:
        raise RejectedInput(f"missing input file #{index + 1}")
    return config.inputs[index]


def _residue_input(config, index=0):
    s = read_series(_input(config, index))
    if not isinstance(s, ModSeries):
        if config.modulus is None:
            raise RejectedInput("input is an exact series; pass --mod to reduce it")
        s = reduce(s, config.modulus)
    elif config.modulus is not None and config.modulus != s.m:
        s = reduce(s, config.modulus)
    return s


# ------------------------------------------------------------
# gen
# ------------------------------------------------------------
def run_gen(config):
    n = config.n
    if config.action == "tutte":
        if config.q is None:
            raise RejectedInput("gen tutte needs --q")
        s = tutte_series(config.q, n)
        if config.normalized:
            s = normalized_series(s)
    elif config.action == "family":
        if config.q is None or config.h1 is None:
            raise RejectedInput("gen family needs --q and --h1")
        s = family_solution(config.q, config.h1, n)
    elif config.action == "hypergeom":
        if not config.upper:
            raise RejectedInput("gen hypergeom needs --upper")
        if config.modulus:
            s = hypergeometric_mod(config.upper, config.lower, config.scale, n, config.modulus)
        else:
            s = hypergeometric_series(config.upper, config.lower, config.scale, n)
    elif config.action == "christol":
        s = christol_mod(n, config.modulus) if config.modulus else christol_series(n)
    elif config.action == "ratio-2f1":
        s = ratio_2f1_series(n)
    elif config.action == "period-y0":
        s = complementary_period_series(n)
    else:
        raise RejectedInput(f"unknown generator {config.action!r}")
    log_event("CLI", f"gen {config.action} to order {s.n}")
    if config.modulus and not isinstance(s, ModSeries):
        s = reduce(s, config.modulus)
    return _series_out(config, s)


# ------------------------------------------------------------
# reduce
# ------------------------------------------------------------
def run_reduce(config):
    if config.modulus is None:
        raise RejectedInput("reduce needs --mod")
    s = reduce(read_series(_input(config)), config.modulus)
    if len(config.inputs) > 1:
        config.output = config.inputs[1]
    return _series_out(config, s)


# ------------------------------------------------------------
# guess
# ------------------------------------------------------------
def _found(config, obj, label, extra=None):
    if obj is None:
        _emit(config, {"found": False, "kind": label}, headline=f"📭 No {label} found.")
        return EXIT_NEGATIVE
    _object_out(config, obj)
    payload = dict(dump_object(obj), found=True)
    if extra:
        payload.update(extra)
    _emit(config, payload, headline=f"🧭 {label.capitalize()} found:\n{obj}")
    return EXIT_OK


def run_guess(config):
    if config.action == "ode":
        s = _residue_input(config)
        guard = DEFAULT_GUARD_ODE if config.guard is None else config.guard
        if config.order is not None and config.degree is not None:
            op = guess_ode_modp(s, config.order, config.degree, guard)
        elif config.max_order is not None and config.max_degree is not None:
            op = search_ode_modp(s, config.max_order, config.max_degree, guard)
        else:
            raise RejectedInput("guess ode needs --order/--degree or --max-order/--max-degree")
        return _found(config, op, "operator")
    if config.action == "rel":
        s = _residue_input(config)
        guard = DEFAULT_GUARD_REL if config.guard is None else config.guard
        if config.deg_s is not None and config.deg_w is not None:
            P = guess_relation(s, config.deg_s, config.deg_w, guard)
        else:
            P = search_relation(s, config.budget or DEFAULT_RELATION_BUDGET, guard)
        return _found(config, P, "relation")
    if config.action == "frobenius":
        s = _residue_input(config)
        guard = DEFAULT_GUARD_REL if config.guard is None else config.guard
        R = guess_frobenius(s, config.i_max, config.degree or 0, guard)
        return _found(config, R, "Frobenius relation")
    if config.action == "lacunary":
        if config.modulus is None:
            raise RejectedInput("guess lacunary needs --mod")
        S = read_series(_input(config))
        target = lacunary_target(S, config.modulus, config.scale, config.wexp, config.offset, config.reading)
        ansatz = LacunaryAnsatz(config.max_degree or 0, tuple((k, 1) for k in config.kinds), config.prefactor)
        return _found(config, fit_lacunary(target, ansatz), "lacunary identity")
    if config.action == "truncation":
        if config.modulus is None:
            raise RejectedInput("guess truncation needs --mod (a prime)")
        s = read_series(_input(config))
        found = truncation_polynomial(s, config.modulus, config.e_max)
        payload = finding_json(_input(config), config.modulus, found)
        if found is None:
            _emit(config, payload, headline="📭 No truncation polynomial within the exponent ceiling.")
            return EXIT_NEGATIVE
        frob = frobenius_truncation_check(s, config.modulus)
        payload["frobenius_head"] = frob["head"]
        _emit(config, payload, [("e", found.e), ("degree", len(found.poly) - 1), ("P", found.poly),
                                ("s^p − 1 head", frob["head"])], headline=f"🧮 Truncation polynomial mod {config.modulus}:")
        return EXIT_OK
    raise RejectedInput(f"unknown guess target {config.action!r}")


# ------------------------------------------------------------
# verify
# ------------------------------------------------------------
def _verdict(config, ok, label, order=None, extra=None):
    payload = {"check": label, "verified": bool(ok)}
    if order is not None:
        payload["order"] = order
    if extra:
        payload.update(extra)
    mark = "✅" if ok else "❌"
    rows = [("check", label), ("verdict", "PASS" if ok else "FAIL")]
    if order is not None:
        rows.append(("order", order))
    _emit(config, payload, rows, headline=f"{mark} {label}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def _verify_node(config):
    s = read_series(_input(config))
    ode = config.ode or "tutte"
    if ode not in NODE_ODES:
        raise RejectedInput(f"--ode must be one of {', '.join(NODE_ODES)}")
    if config.from_h:
        s = shifted_by_var(s)
    if ode == "autonomous-q4":
        return _verdict(config, verify_autonomous_q4(s), "autonomous q=4 form", s.n)
    if ode == "tutte":
        if config.q is None:
            raise RejectedInput("--ode tutte needs --q")
        eq = make_ode(TUTTE_Q, config.q)
    elif ode == "tutte-q4":
        eq = make_ode(TUTTE_Q4_REDUCED)
    else:
        eq = make_ode(RATIO_2F1)
    r = residual(eq, s)
    return _verdict(config, r.is_zero(), f"{eq.name} residual", r.n)


def run_verify(config):
    if config.action == "rel":
        P = resolve_reference(_input(config), "relation")
        config.modulus = config.modulus or P.modulus
        s = _residue_input(config, 1)
        return _verdict(config, verify_relation(P, s), f"relation mod {P.modulus}", s.n)
    if config.action == "frobenius":
        R = resolve_reference(_input(config), "frobenius")
        if not isinstance(R, FrobeniusRelation):
            raise RejectedInput("expected a Frobenius relation")
        config.modulus = config.modulus or R.p
        s = _residue_input(config, 1)
        return _verdict(config, verify_frobenius(R, s), f"Frobenius relation mod {R.p}", s.n)
    if config.action == "ode-linear":
        L = resolve_reference(_input(config), "operator")
        s = read_series(_input(config, 1))
        return _verdict(config, apply_operator(L, s).is_zero(), "operator annihilates series", s.n)
    if config.action == "node":
        return _verify_node(config)
    if config.action == "schwarzian":
        r = schwarzian_residual(config.n)
        return _verdict(config, r.is_zero(), "Schwarzian residual", r.n)
    if config.action == "lacunary":
        identity = resolve_reference(_input(config), "lacunary")
        S = read_series(_input(config, 1))
        if isinstance(identity, LacunaryIdentity):
            return _verdict(config, identity.certify(S), f"lacunary identity {identity.name} mod {identity.modulus}", S.n)
        if not isinstance(identity, LacunaryExpr) or config.modulus is None:
            raise RejectedInput("a bare lacunary expression needs --mod")
        target = lacunary_target(S, config.modulus, config.scale, config.wexp, config.offset, config.reading)
        return _verdict(config, verify_lacunary_identity(identity, target), f"lacunary expression mod {config.modulus}", target.n)
    if config.action == "power-identity":
        identity = resolve_reference(_input(config), "power")
        if not isinstance(identity, PowerIdentity):
            raise RejectedInput("expected a power identity")
        config.modulus = config.modulus or identity.modulus
        s = _residue_input(config, 1)
        return _verdict(config, identity.certify(s), f"power identity {identity.name}", s.n)
    raise RejectedInput(f"unknown verify target {config.action!r}")


# ------------------------------------------------------------
# pcurv · diffpade · holonomy
# ------------------------------------------------------------
def run_pcurv(config):
    L = resolve_reference(_input(config), "operator")
    summary = p_curvature_summary(L)
    payload = {"p": L.modulus, "order": L.order, **summary}
    _emit(config, payload, [("p", L.modulus), ("order", L.order), ("classification", summary["classification"]),
                            ("max entry degree", summary["max_entry_degree"])], headline="🧮 p-curvature")
    return EXIT_OK


def run_diffpade(config):
    if config.order is None or config.degree is None:
        raise RejectedInput("diffpade needs --order and --degree")
    s = read_series(_input(config))
    L = hermite_pade_ode(s, config.order, config.degree, config.n_use)
    if L is None:
        _emit(config, {"found": False}, headline="📭 No exact operator at this budget.")
        return EXIT_NEGATIVE
    report = singularity_report(L, s)
    _object_out(config, L)
    payload = {"operator": L.to_json(), "report": report.to_json()}
    if config.json:
        _emit(config, payload)
        return EXIT_OK
    print(f"🧭 Operator of order {L.order}, degree {L.degree} (n_use = {L.meta.get('n_use')})")
    rows = [(f"{e.location:.6g}", e.multiplicity, ", ".join(f"{x:.4g}" for x in e.exponents)) for e in report.entries]
    print(tabulate(rows, headers=["Singularity", "Multiplicity", "Exponents"], tablefmt="github"))
    if report.growth is not None:
        print(f"\n📈 Growth λ ≈ {report.growth.lambda_:.6f}, radius ≈ {report.radius}")
    return EXIT_OK


def run_holonomy(config):
    s = read_series(_input(config))
    n_use = config.n_use or 2000
    max_order = config.max_order or 12
    budgets = []
    for Q in range(1, max_order + 1):
        D = min(config.max_degree or n_use, n_use // (Q + 1) - 1)
        if D >= 0:
            budgets.append((Q, D))
    report = holonomy_rejection_test(s, budgets, n_use, config.holdout)
    rejected = all(e["verdict"] == "REJECTED" for e in report)
    if config.json:
        _emit(config, {"entries": report, "all_rejected": rejected})
    else:
        print("🧪 Holonomy rejection")
        print(tabulate(report, headers="keys", tablefmt="github"))
    return EXIT_OK if rejected else EXIT_NEGATIVE


# ------------------------------------------------------------
# report
# ------------------------------------------------------------
def run_report(config):
    if not config.json:
        print(f"\n🛠 Modular Series Engine — Certification Run ({datetime.now().strftime('%Y-%m-%d %H:%M:%S')})")
    df = certification_suite(config.n, config.workers)
    # export notices go to stderr so --json output stays parseable
    with redirect_stdout(sys.stderr if config.json else sys.stdout):
        if not config.json:
            print_report(df)
        if config.csv:
            export_to_csv(df, config.csv)
            export_event_log(os.path.splitext(config.csv)[0] + "_events.csv")
        if config.pdf:
            export_to_pdf(df, config.pdf)
        if config.brief:
            fill_brief(df, config.brief, order=config.n)
    if config.json:
        _emit(config, {"rows": json.loads(df.to_json(orient="records"))})
    return EXIT_OK if (df["Verdict"] != "ERROR").all() else EXIT_NEGATIVE


# ------------------------------------------------------------
# Argument Parser
# ------------------------------------------------------------
def _common(p):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--verbose", action="store_true", help="debug logging on stderr")


def build_parser():
    parser = argparse.ArgumentParser(prog="modseries", description="Exact and modular power series toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a series")
    gen.add_argument("action", choices=["tutte", "family", "hypergeom", "christol", "ratio-2f1", "period-y0"])
    gen.add_argument("--q")
    gen.add_argument("--h1")
    gen.add_argument("--n", type=int)
    gen.add_argument("--mod", type=int)
    gen.add_argument("--upper")
    gen.add_argument("--lower")
    gen.add_argument("--scale")
    gen.add_argument("--normalized", action="store_true", help="divide the q = 4 series by 12·w²")
    gen.add_argument("-o", "--output")
    _common(gen)

    red = sub.add_parser("reduce", help="reduce a series file mod m")
    red.add_argument("--mod", type=int, required=True)
    red.add_argument("inputs", nargs="+")
    red.add_argument("-o", "--output")
    _common(red)

    guess = sub.add_parser("guess", help="guess an operator, relation or identity")
    guess.add_argument("action", choices=["ode", "rel", "frobenius", "lacunary", "truncation"])
    guess.add_argument("inputs", nargs=1)
    for flag in ("--order", "--degree", "--max-order", "--max-degree", "--deg-s", "--deg-w", "--guard",
                 "--budget", "--mod", "--i-max", "--e-max", "--wexp", "--offset", "--prefactor"):
        guess.add_argument(flag, type=int)
    guess.add_argument("--scale")
    guess.add_argument("--reading", choices=TARGET_READINGS)
    guess.add_argument("--kinds", help="comma-separated lacunary kinds, e.g. L3,L6")
    guess.add_argument("-o", "--output")
    _common(guess)

    verify = sub.add_parser("verify", help="certify an object against a series")
    verify.add_argument("action", choices=["rel", "frobenius", "ode-linear", "node", "schwarzian", "lacunary", "power-identity"])
    verify.add_argument("inputs", nargs="*")
    verify.add_argument("--ode", choices=NODE_ODES)
    verify.add_argument("--q")
    verify.add_argument("--from-h", action="store_true", help="input is H; check F = H + w")
    verify.add_argument("--mod", type=int)
    verify.add_argument("--n", type=int)
    verify.add_argument("--scale")
    verify.add_argument("--reading", choices=TARGET_READINGS)
    verify.add_argument("--wexp", type=int)
    verify.add_argument("--offset", type=int)
    _common(verify)

    pc = sub.add_parser("pcurv", help="p-curvature of an operator mod p")
    pc.add_argument("inputs", nargs=1)
    _common(pc)

    dp = sub.add_parser("diffpade", help="exact operator fit and singularity report")
    dp.add_argument("inputs", nargs=1)
    dp.add_argument("--order", type=int, required=True)
    dp.add_argument("--degree", type=int, required=True)
    dp.add_argument("--n-use", type=int)
    dp.add_argument("-o", "--output")
    _common(dp)

    ho = sub.add_parser("holonomy", help="holdout test of exact operator fits")
    ho.add_argument("inputs", nargs=1)
    ho.add_argument("--n-use", type=int)
    ho.add_argument("--holdout", type=int)
    ho.add_argument("--max-order", type=int)
    ho.add_argument("--max-degree", type=int)
    _common(ho)

    rep = sub.add_parser("report", help="run the catalogued certification suite")
    rep.add_argument("--order", "--n", dest="n", type=int, help="truncation order of the generated series")
    rep.add_argument("--workers", type=int)
    rep.add_argument("--csv")
    rep.add_argument("--pdf")
    rep.add_argument("--brief")
    _common(rep)
    return parser


_COMMANDS = {
    "gen": run_gen,
    "reduce": run_reduce,
    "guess": run_guess,
    "verify": run_verify,
    "pcurv": run_pcurv,
    "diffpade": run_diffpade,
    "holonomy": run_holonomy,
    "report": run_report,
}


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    configure_console_logging(getattr(ns, "verbose", False))
    try:
        config = JobConfig.from_args(ns)
        log_event("CLI", f"{config.command} {config.action or ''}".strip())
        return _COMMANDS[config.command](config)
    except RejectedInput as e:
        print(f"⚠ {e}", file=sys.stderr)
        log_event("CLI", str(e), "WARNING")
        return EXIT_USAGE
    except InconclusiveError as e:
        print(f"❔ Inconclusive: {e}", file=sys.stderr)
        log_event("CLI", str(e), "WARNING")
        return EXIT_NEGATIVE
    except ModSeriesError as e:
        print(f"💥 {type(e).__name__}: {e}", file=sys.stderr)
        log_event("CLI", f"{type(e).__name__}: {e}", "ERROR")
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        print(f"💥 Internal error: {e}", file=sys.stderr)
        log_event("CLI", f"internal error: {e!r}", "ERROR")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
