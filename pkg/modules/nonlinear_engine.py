# ============================================================
# 🛠 Modular Series Engine — Nonlinear Engine Module
# v1.0 | Polynomial ODE Residuals, Autonomous Form, Schwarzian Checks
# ============================================================

from dataclasses import dataclass
from fractions import Fraction

from sympy import Poly, Rational, Symbol, expand, symbols, sympify

from modules.diagnostics_engine import ConsistencyError, RejectedInput, log_event
from modules.series_engine import (
    Q,
    SYMBOLIC,
    LaurentRationalSeries,
    QPolySeries,
    RationalSeries,
    as_fraction,
    as_qpoly,
    complementary_period_series,
    hypergeometric_series,
)

# === CONFIGURATION ===
TUTTE_Q = "TUTTE_Q"
TUTTE_Q4_REDUCED = "TUTTE_Q4_REDUCED"
RATIO_2F1 = "RATIO_2F1"
ODE_NAMES = (TUTTE_Q, TUTTE_Q4_REDUCED, RATIO_2F1)
MAX_DERIVATIVE = 3
AUTONOMOUS_CONSTANT = 3 * 2 ** 7

_DERS = symbols("F0:4")


# ------------------------------------------------------------
# Polynomial Differential Equations
# ------------------------------------------------------------
@dataclass(frozen=True)
class NonlinearTerm:
    """coeff · var^wexp · Π F^(k) for k in ders."""

    coeff: object
    wexp: int
    ders: tuple

    def to_json(self):
        coeff = str(self.coeff.as_expr()) if hasattr(self.coeff, "as_expr") else str(self.coeff)
        return {"coeff": coeff, "wexp": self.wexp, "ders": list(self.ders)}


@dataclass(frozen=True)
class NonlinearODE:
    name: str
    terms: tuple
    var: str = "w"

    @property
    def max_wexp(self):
        return max(t.wexp for t in self.terms)

    @property
    def max_derivative(self):
        return max((max(t.ders) for t in self.terms if t.ders), default=0)

    def term_set(self):
        """{(coeff, wexp, ders)} for comparisons."""
        return {(t.coeff, t.wexp, t.ders) for t in self.terms}

    def to_json(self):
        return {"name": self.name, "var": self.var, "terms": [t.to_json() for t in self.terms]}

    @classmethod
    def from_json(cls, obj):
        symbolic = any("q" in str(t["coeff"]) for t in obj["terms"])
        terms = tuple(
            NonlinearTerm(as_qpoly(_sympify(t["coeff"])) if symbolic else as_fraction(str(t["coeff"])), int(t["wexp"]), tuple(sorted(t["ders"])))
            for t in obj["terms"]
        )
        return cls(obj.get("name", "custom"), terms, obj.get("var", "w"))


def _sympify(text):
    return sympify(text, locals={"q": Q})


def _terms_from_expr(expr, var, symbolic):
    poly = Poly(expand(expr), var, *_DERS)
    terms = []
    for monom, coeff in poly.terms():
        wexp, counts = monom[0], monom[1:]
        ders = tuple(k for k, c in enumerate(counts) for _ in range(c))
        value = as_qpoly(coeff) if symbolic else as_fraction(coeff)
        terms.append(NonlinearTerm(value, int(wexp), ders))
    terms.sort(key=lambda t: (-len(t.ders), t.ders, t.wexp))
    return tuple(terms)


def make_ode(name, q=None):
    """Term list of one of the catalogued polynomial ODEs (TUTTE_Q needs q, exact or SYMBOLIC)."""
    F0, F1, F2, F3 = _DERS
    if name == TUTTE_Q:
        if q is None:
            raise RejectedInput("TUTTE_Q needs a value of q")
        symbolic = q is SYMBOLIC
        qv = Q if symbolic else as_fraction(q)
        if not symbolic:
            qv = Rational(qv.numerator, qv.denominator)
        w = Symbol("w")
        expr = (2 * qv ** 2 * (1 - qv) * w
                + (qv * w + 10 * F0 - 6 * w * F1) * F2
                + qv * (4 - qv) * (20 * F0 - 18 * w * F1 + 9 * w ** 2 * F2))
        return NonlinearODE(name, _terms_from_expr(expr, w, symbolic), "w")
    if name == TUTTE_Q4_REDUCED:
        w = Symbol("w")
        expr = (3 * w * F1 - 5 * F0) * F2 + 48 * w
        return NonlinearODE(name, _terms_from_expr(expr, w, False), "w")
    if name == RATIO_2F1:
        x = Symbol("x")
        a, b, c = 27 * x - 1, 16 * x - 1, 72 * x + 1
        expr = (-2 * x ** 2 * a * b * (a * b * F1 - c * F0) * F3
                - 2 * x * (3 * x * b * c * a * F1 - (93312 * x ** 3 - 168 * x ** 2 - 297 * x + 4) * F0) * F2
                + 2 * (29376 * x ** 3 + 5580 * x ** 2 - 221 * x + 1) * F0 * F1
                + 3 * x ** 2 * a ** 2 * b ** 2 * F2 ** 2
                + b * (1944 * x ** 3 - 1569 * x ** 2 + 58 * x - 1) * F1 ** 2
                + (144 * x ** 2 - 432 * x + 1) * F0 ** 2)
        return NonlinearODE(name, _terms_from_expr(expr, x, False), "x")
    raise RejectedInput(f"unknown ODE {name!r}; expected one of {', '.join(ODE_NAMES)}")


# ------------------------------------------------------------
# Residuals
# ------------------------------------------------------------
def _scalar(coeff, s):
    if isinstance(s, QPolySeries):
        return coeff if isinstance(coeff, Poly) else as_qpoly(coeff)
    if isinstance(coeff, Poly):
        raise RejectedInput("a q-polynomial equation needs a q-polynomial series")
    return coeff.numerator if coeff.denominator == 1 else coeff


def residual(ode, s):
    """
    Exact residual of the equation on s. The result is truncated at
    s.n − (max derivative order + max w-exponent).
    """
    top = s.n - (ode.max_derivative + ode.max_wexp)
    if s.n < MAX_DERIVATIVE + ode.max_wexp or top < 0:
        raise RejectedInput(f"series of order {s.n} is too short for {ode.name}")
    derivs = [s]
    for _ in range(ode.max_derivative):
        derivs.append(derivs[-1].derivative())
    total = None
    for term in ode.terms:
        part = None
        for k in term.ders:
            part = derivs[k] if part is None else part * derivs[k]
        c = _scalar(term.coeff, s)
        part = s._constant_like(c) if part is None else part * c
        part = part.shift(term.wexp)
        total = part if total is None else total + part
    out = total.truncate(top)
    log_event("VERIFY", f"{ode.name} residual to order {top}: {'zero' if out.is_zero() else 'nonzero'}", "DEBUG")
    return out


def residual_vanishes(ode, s):
    """(vanishes, order checked)."""
    r = residual(ode, s)
    return r.is_zero(), r.n


def shifted_by_var(H):
    """H + var, the function whose equation at q = 4 is the reduced one."""
    coeffs = [H.coefficient(k) + (1 if k == 1 else 0) for k in range(H.n + 1)]
    return type(H)(coeffs, H.var)


# ------------------------------------------------------------
# Autonomous Form at q = 4
# ------------------------------------------------------------
def verify_autonomous_q4(F):
    """
    With w = u², G = F(u²)/u³ and G_1 = ½θ_u G, G_2 = ½θ_u G_1 (θ_w = ½θ_u),
    checks (G − 6G_1)(3G + 8G_1 + 4G_2) = 384 to the computable order.
    """
    if F.n < 2 or F.coefficient(0) != 0 or F.coefficient(1) != 1:
        raise RejectedInput("F must start with the monomial w")
    coeffs = []
    for e in range(-1, 2 * F.n - 1):
        coeffs.append(F.coefficient((e + 3) // 2) if (e + 3) % 2 == 0 else 0)
    G = LaurentRationalSeries(coeffs, "u", -1)
    half = Fraction(1, 2)
    G1 = G.theta() * half
    G2 = G1.theta() * half
    expr = (G - G1 * 6) * (G * 3 + G1 * 8 + G2 * 4) - AUTONOMOUS_CONSTANT
    ok = expr.is_zero()
    log_event("VERIFY", f"autonomous q=4 form to u^{expr.n}: {ok}", "DEBUG")
    return ok


# ------------------------------------------------------------
# Schwarzian Derivatives
# ------------------------------------------------------------
def _laurent(s):
    if isinstance(s, LaurentRationalSeries):
        return s
    return LaurentRationalSeries([s.coefficient(k) for k in range(s.lead, s.n + 1)], s.var, s.lead)


def schwarzian_from_derivative(d1):
    """{f, x} = f'''/f' − (3/2)(f''/f')² given f' as a (Laurent) series."""
    d1 = _laurent(d1)
    d2 = d1.derivative()
    d3 = d2.derivative()
    inv = d1.inverse()
    ratio = d2 * inv
    return d3 * inv - ratio * ratio * Fraction(3, 2)


def schwarzian(f):
    return schwarzian_from_derivative(f.derivative())


def _monomial(c, e, n, var):
    return LaurentRationalSeries([c] + [0] * (n - e), var, e)


def schwarzian_wrt_square(rho_x):
    """{ρ, λ} for λ = x², from ρ' = dρ/dx: ({ρ, x} + 3/(2x²)) / (4x²)."""
    S_x = schwarzian_from_derivative(rho_x)
    corrected = S_x + _monomial(Fraction(3, 2), -2, S_x.n, rho_x.var)
    return corrected.shift(-2) * Fraction(1, 4)


def schwarzian_residual(n):
    """{ρ, λ} − (λ² − λ + 1)/(2λ²(λ − 1)²) in x, with ρ = ln x + y_0/K and λ = x²."""
    if n < 8:
        raise RejectedInput("order must be at least 8")
    K = hypergeometric_series([Fraction(1, 2), Fraction(1, 2)], [1], 1, n // 2 + 1).substitute(1, 2).truncate(n)
    r = complementary_period_series(n) / K
    rho_x = _monomial(1, -1, r.n - 1, "x") + r.derivative()
    lhs = schwarzian_wrt_square(rho_x)
    odd = [k for k in range(lhs.lead, lhs.n + 1) if k % 2 and lhs.coefficient(k)]
    if odd:
        raise ConsistencyError(f"odd power x^{odd[0]} in a function of x²")
    top = lhs.n + 4
    num = RationalSeries([1, 0, -1, 0, 1] + [0] * max(0, top - 4), "x").truncate(top)
    den = RationalSeries([2, 0, -4, 0, 2] + [0] * max(0, top - 4), "x").truncate(top)
    rhs = (num / den).shift(-4)
    out = lhs - rhs
    log_event("VERIFY", f"Schwarzian residual to x^{out.n}: {'zero' if out.is_zero() else 'nonzero'}")
    return out


def ratio_2f1_series(n):
    """2F1([1/3,1/3],[1],27x) / 2F1([1/2,1/2],[1],16x), an integer series."""
    num = hypergeometric_series([Fraction(1, 3), Fraction(1, 3)], [1], 27, n)
    den = hypergeometric_series([Fraction(1, 2), Fraction(1, 2)], [1], 16, n)
    return (num / den).as_integer_series()

