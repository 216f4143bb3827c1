# ============================================================
# 🛠 Modular Series Engine — Linear ODE Engine Module
# v1.0 | Operator Guessing mod p, Diff-Padé Fits, Singularity Reports
# ============================================================

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import gmpy2
import mpmath
import numpy as np
from sympy import Poly, Rational, Symbol, isprime, sqf_list

from modules.diagnostics_engine import InconclusiveError, RejectedInput, UnsupportedModulus, log_event
from modules.linalg_engine import (
    LARGE_PRIME,
    crt_tree,
    descending_primes,
    kernel_basis_mod_p,
    restrict_kernel,
    restrict_kernel_online,
    rref_mod_p,
    symmetric_lift,
)
from modules.modular_engine import ModSeries, reduce
from modules.series_engine import RationalSeries, as_fraction, as_int, growth_estimate

# === CONFIGURATION ===
DEFAULT_GUARD_ODE = 200
DEFAULT_N_USE_CAP = 1200
DEFAULT_HOLONOMY_BUDGETS = tuple((order, 40) for order in range(1, 13))
ROOT_TOLERANCE = 1e-12
ROOT_PRECISION = 60
ROOT_MAX_STEPS = 400
ROOT_ATTEMPTS = 3
ROOT_CLUSTER = 1e-8
PROBE_PRIMES = 3
MAX_LIFT_PRIMES = 1 << 15
MAX_GUESS_PRIME = 1 << 31
FORMS = ("theta", "D")


# ------------------------------------------------------------
# Polynomial Helpers (ascending coefficient lists)
# ------------------------------------------------------------
def _trim_poly(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _padd(a, b):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for k, c in enumerate(b):
        out[k] = out[k] + c
    return out


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def _pscale(a, c):
    return [c * x for x in a]


def _pshift(a, k):
    return [0] * k + list(a) if a else []


def _pderiv(a):
    return [k * a[k] for k in range(1, len(a))]


def _peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _falling_coeffs(i):
    """Ascending coefficients of ρ(ρ-1)...(ρ-i+1)."""
    c = [1]
    for t in range(i):
        c = _padd(_pshift(c, 1), _pscale(c, -t))
    return c


def _stirling2(n):
    S = [[0] * (n + 1) for _ in range(n + 1)]
    S[0][0] = 1
    for i in range(n):
        for j in range(1, i + 2):
            S[i + 1][j] = j * S[i][j] + S[i][j - 1]
    return S


def _poly_text(p, var):
    parts = []
    for k, c in enumerate(p):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if k == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}{mono}")
    return " + ".join(parts) if parts else "0"


# ------------------------------------------------------------
# Linear Differential Operators
# ------------------------------------------------------------
class LinearDiffOperator:
    """Σ_i p_i(var)·∂^i with ∂ = θ = var·d/dvar (form "theta") or d/dvar (form "D")."""

    def __init__(self, coeffs, modulus=None, form="theta", var="w", meta=None):
        if form not in FORMS:
            raise RejectedInput(f"unknown operator form {form!r}")
        if modulus is not None and modulus < 2:
            raise UnsupportedModulus(f"modulus must be at least 2, got {modulus}")
        self.modulus = modulus
        self.form = form
        self.var = var
        self.meta = dict(meta or {})
        polys = [_trim_poly(self._norm(c) for c in p) for p in coeffs]
        while len(polys) > 1 and not polys[-1]:
            polys.pop()
        if not polys or not polys[-1]:
            raise RejectedInput("operator is identically zero")
        self.coeffs = tuple(tuple(p) for p in polys)

    def _norm(self, c):
        f = as_fraction(c)
        if self.modulus is None:
            return f
        try:
            return f.numerator * pow(f.denominator, -1, self.modulus) % self.modulus
        except ValueError as e:
            raise RejectedInput(f"coefficient {f} has no image mod {self.modulus}") from e

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def degree(self):
        return max(len(p) for p in self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    @property
    def domain(self):
        return "rational" if self.modulus is None else "modp"

    def coefficient(self, i, j):
        if i > self.order or j >= len(self.coeffs[i]):
            return self._norm(0)
        return self.coeffs[i][j]

    def _like(self, coeffs, form=None, meta=None):
        return LinearDiffOperator(coeffs, self.modulus, form or self.form, self.var, meta)

    # --- normalisation ---
    def _lex_leading(self):
        for p in reversed(self.coeffs):
            for c in reversed(p):
                if c:
                    return c
        return None

    def scaled(self, c):
        c = self._norm(c)
        return self._like([[c * x for x in p] for p in self.coeffs], meta=self.meta)

    def normalized(self):
        """Scale so the first nonzero coefficient in (i desc, j desc) order is 1."""
        lead = self._lex_leading()
        if self.modulus is None:
            return self.scaled(1 / lead)
        try:
            return self.scaled(pow(int(lead), -1, self.modulus))
        except ValueError:
            return self

    def primitive(self):
        """Rational operator with coprime integer coefficients and positive lex-leading term."""
        if self.modulus is not None:
            return self
        den = math.lcm(*(c.denominator for p in self.coeffs for c in p if c))
        ints = [[int(c * den) for c in p] for p in self.coeffs]
        g = math.gcd(*(c for p in ints for c in p if c))
        sign = 1 if self._lex_leading() > 0 else -1
        return self._like([[sign * c // g for c in p] for p in ints], meta=self.meta)

    def equivalent(self, other):
        """Equal up to a unit scalar."""
        if self.modulus != other.modulus:
            return False
        a, b = self.normalized(), other.normalized()
        if a.form != b.form:
            a, b = a.to_theta_form().normalized(), b.to_theta_form().normalized()
        return a.coeffs == b.coeffs

    def __eq__(self, other):
        if not isinstance(other, LinearDiffOperator):
            return NotImplemented
        return (self.modulus, self.form, self.var, self.coeffs) == (other.modulus, other.form, other.var, other.coeffs)

    __hash__ = None

    # --- form conversion ---
    def to_d_form(self):
        """θ^i = Σ_j S(i,j)·w^j·D^j with Stirling numbers of the second kind."""
        if self.form == "D":
            return self
        S = _stirling2(self.order)
        out = []
        for j in range(self.order + 1):
            acc = []
            for i in range(j, self.order + 1):
                if S[i][j]:
                    acc = _padd(acc, _pscale(self.coeffs[i], S[i][j]))
            out.append(_pshift(acc, j))
        return self._like(out, form="D", meta=self.meta)

    def to_theta_form(self):
        """var^Q·L rewritten with var^i·D^i = θ(θ-1)...(θ-i+1)."""
        if self.form == "theta":
            return self
        Q = self.order
        out = [[] for _ in range(Q + 1)]
        for i, p in enumerate(self.coeffs):
            shifted = _pshift(p, Q - i)
            for k, s in enumerate(_falling_coeffs(i)):
                if s:
                    out[k] = _padd(out[k], _pscale(shifted, s))
        meta = dict(self.meta, premultiplied=Q)
        return self._like(out, form="theta", meta=meta)

    def compose(self, other):
        """self ∘ other (apply other first)."""
        if (self.modulus, self.var) != (other.modulus, other.var):
            raise RejectedInput("operators live over different rings")
        other = other if other.form == self.form else (other.to_d_form() if self.form == "D" else other.to_theta_form())
        out = {}
        for i, p in enumerate(self.coeffs):
            if not p:
                continue
            for k, m in enumerate(other.coeffs):
                if not m:
                    continue
                if self.form == "theta":
                    # θ^i·w^b = w^b·(θ + b)^i
                    for b, mb in enumerate(m):
                        if not mb:
                            continue
                        for t in range(i + 1):
                            c = math.comb(i, t) * b ** (i - t)
                            if c:
                                term = _pshift(_pscale(p, c * mb), b)
                                out[t + k] = _padd(out.get(t + k, []), term)
                else:
                    # D^i·m(w) = Σ_t C(i,t)·m^(t)(w)·D^(i-t)
                    deriv = list(m)
                    for t in range(i + 1):
                        if deriv:
                            term = _pscale(_pmul(p, deriv), math.comb(i, t))
                            out[i - t + k] = _padd(out.get(i - t + k, []), term)
                        deriv = _pderiv(deriv)
        top = max(out)
        return self._like([out.get(i, []) for i in range(top + 1)])

    def apply(self, s):
        return apply_operator(self, s)

    # --- codecs ---
    def to_json(self):
        return {
            "domain": self.domain,
            "p": self.modulus,
            "form": self.form,
            "var": self.var,
            "coeffs": [[str(c) for c in p] if self.modulus is None else [int(c) for c in p] for p in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        domain = obj.get("domain", "modp" if obj.get("p") else "rational")
        modulus = int(obj["p"]) if domain == "modp" else None
        coeffs = [[as_fraction(c if not isinstance(c, float) else str(c)) for c in p] for p in obj["coeffs"]]
        return cls(coeffs, modulus, obj.get("form", "theta"), obj.get("var", "w"))

    def __str__(self):
        sym = "θ" if self.form == "theta" else "D"
        parts = []
        for i, p in enumerate(self.coeffs):
            if not p:
                continue
            poly = _poly_text(p, self.var)
            if i == 0:
                parts.append(poly)
                continue
            op = sym if i == 1 else f"{sym}^{i}"
            if poly == "1":
                parts.append(op)
            elif len([c for c in p if c]) == 1:
                parts.append(f"{poly}·{op}")
            else:
                parts.append(f"({poly})·{op}")
        ring = f" (mod {self.modulus})" if self.modulus else ""
        return " + ".join(parts) + ring

    def __repr__(self):
        return f"LinearDiffOperator(order={self.order}, degree={self.degree}, domain={self.domain}, form={self.form})"


def spurious_operator(p):
    """θ^p − θ over F_p, which annihilates every series mod p."""
    if not isprime(p):
        raise UnsupportedModulus(f"{p} is not prime")
    coeffs = [[] for _ in range(p + 1)]
    coeffs[1] = [-1]
    coeffs[p] = [1]
    return LinearDiffOperator(coeffs, p)


# ------------------------------------------------------------
# Operator Application
# ------------------------------------------------------------
def apply_operator(L, s):
    """
    Σ p_i(w)·∂^i applied to s.
    θ-form results are returned to order n − degree, D-form results to n − order.
    """
    if L.modulus is not None:
        if not isinstance(s, ModSeries):
            s = reduce(s, L.modulus)
        elif s.m != L.modulus:
            raise RejectedInput(f"series is mod {s.m}, operator is mod {L.modulus}")
        return _apply_modular(L, s)
    if isinstance(s, ModSeries):
        raise RejectedInput("a rational operator cannot act on a residue series")
    if s.lead < 0:
        raise RejectedInput("operators act on power series only")
    vals = [as_fraction(s.coefficient(k)) for k in range(s.n + 1)]
    top = s.n - (L.degree if L.form == "theta" else L.order)
    if top < 0:
        raise RejectedInput(f"series of order {s.n} is too short for this operator")
    out = []
    for k in range(top + 1):
        acc = Fraction(0)
        for i, p in enumerate(L.coeffs):
            for j, c in enumerate(p):
                if not c or j > k:
                    continue
                t = k - j
                if L.form == "theta":
                    acc += c * t ** i * vals[t]
                else:
                    acc += c * math.perm(t + i, i) * vals[t + i] if t + i <= s.n else 0
        out.append(acc)
    return RationalSeries(out, s.var)


def _apply_modular(L, s):
    m = L.modulus
    top = s.n - (L.degree if L.form == "theta" else L.order)
    if top < 0:
        raise RejectedInput(f"series of order {s.n} is too short for this operator")
    out = np.zeros(top + 1, dtype=np.int64)
    vals = s.coeffs
    ts = np.arange(top + 1, dtype=np.int64)
    # theta: t^i; D: (t+1)(t+2)...(t+i)
    factors = [np.ones(top + 1, dtype=np.int64)]
    for i in range(1, L.order + 1):
        step = ts % m if L.form == "theta" else (ts + i) % m
        factors.append(factors[-1] * step % m)
    for i, p in enumerate(L.coeffs):
        shift = 0 if L.form == "theta" else i
        for j, c in enumerate(p):
            if not c or j > top:
                continue
            size = top + 1 - j
            term = (vals[shift:shift + size] * int(c)) % m * factors[i][:size] % m
            out[j:] = (out[j:] + term) % m
    return ModSeries(out, m, s.var)


# ------------------------------------------------------------
# Guessing over F_p
# ------------------------------------------------------------
def _ode_matrix(values, Q, D, row_indices, p):
    """Row k holds the coefficient of w^k in Σ a_ij·w^j·θ^i(s); column i·(D+1) + j."""
    ks = np.asarray(row_indices, dtype=np.int64)
    vals = np.asarray(values, dtype=np.int64) % p
    A = np.zeros((len(ks), (Q + 1) * (D + 1)), dtype=np.int64)
    for j in range(D + 1):
        idx = ks - j
        valid = idx >= 0
        sv = np.where(valid, vals[np.clip(idx, 0, None)], 0)
        base = np.where(valid, idx, 0) % p
        pw = np.ones(len(ks), dtype=np.int64)
        for i in range(Q + 1):
            A[:, i * (D + 1) + j] = pw * sv % p
            pw = pw * base % p
    return A


def _operator_from_vector(vec, Q, D, modulus, meta):
    coeffs = [[int(vec[i * (D + 1) + j]) for j in range(D + 1)] for i in range(Q + 1)]
    return LinearDiffOperator(coeffs, modulus, meta=meta)


def guess_ode_modp(s, Q, D, guard=DEFAULT_GUARD_ODE):
    """
    Operator of order ≤ Q and degree ≤ D annihilating every coefficient of s over F_p.
    Returns the nullspace element with the smallest (order, degree) leading monomial,
    normalised to leading coefficient 1, or None.
    """
    p = s.m
    if not isprime(p):
        raise UnsupportedModulus(f"operator guessing needs a prime modulus, got {p}")
    if p >= MAX_GUESS_PRIME:
        raise UnsupportedModulus(f"prime {p} exceeds the residue-array range")
    if Q < 0 or D < 0:
        raise RejectedInput("order and degree must be nonnegative")
    unknowns = (Q + 1) * (D + 1)
    if unknowns + guard > s.n + 1:
        raise RejectedInput(f"series of order {s.n} is too short for {unknowns} unknowns plus guard {guard}")
    if Q >= p:
        log_event("GUESS", f"order {Q} ≥ p = {p}: θ^p − θ would fit any series", "DEBUG")
        return None
    A = _ode_matrix(s.coeffs, Q, D, np.arange(s.n + 1), p)
    split = unknowns + guard
    K = restrict_kernel(kernel_basis_mod_p(A[:split], p), A[split:], p)
    if K.shape[0] == 0:
        log_event("GUESS", f"no operator mod {p} at (Q={Q}, D={D}) over {s.n + 1} coefficients", "DEBUG")
        return None
    op = _operator_from_vector(K[0], Q, D, p, {"nullity": int(K.shape[0]), "rows": s.n + 1}).normalized()
    log_event("GUESS", f"operator mod {p} of order {op.order}, degree {op.degree} (nullity {K.shape[0]})")
    return op


def search_ode_modp(s, max_order, max_degree, guard=DEFAULT_GUARD_ODE):
    """First operator found over budgets (Q+1)(D+1) ascending, Q ascending within a budget."""
    p = s.m
    orders = range(1, min(max_order, p - 1) + 1)
    budgets = sorted({(Q + 1) * (D + 1) for Q in orders for D in range(max_degree + 1)})
    for B in budgets:
        if B + guard > s.n + 1:
            break
        for Q in orders:
            if B % (Q + 1):
                continue
            D = B // (Q + 1) - 1
            if D > max_degree:
                continue
            op = guess_ode_modp(s, Q, D, guard)
            if op is not None:
                op.meta["budget"] = (Q, D)
                return op
    log_event("GUESS", f"no operator mod {p} up to order {max_order}, degree {max_degree}")
    return None


# ------------------------------------------------------------
# Exact Diff-Padé Fit
# ------------------------------------------------------------
def _residues(ints, p):
    return np.array([int(c % p) for c in ints], dtype=np.int64)


def _scaled_kernel_vector(ints, rows, Q, D, f, p):
    """det(M)·x mod p where x spans the kernel of the (rows × f+1) subsystem with x_f = 1."""
    if f == 0:
        return [1]
    M = _ode_matrix(_residues(ints, p), Q, D, rows, p)[:, :f + 1]
    form = rref_mod_p(M, p)
    if form.pivots != list(range(f)):
        return None
    det = form.det
    return [(-int(v)) * det % p for v in form.rows[:, f]] + [det]


def _annihilates_exactly(ints, Q, D, W, n_use):
    W = [gmpy2.mpz(w) for w in W] + [gmpy2.mpz(0)] * ((Q + 1) * (D + 1) - len(W))
    for k in range(n_use):
        total = gmpy2.mpz(0)
        for j in range(min(k, D) + 1):
            t = k - j
            inner = gmpy2.mpz(0)
            for i in range(Q, -1, -1):
                inner = inner * t + W[i * (D + 1) + j]
            total += inner * ints[t]
        if total:
            return False
    return True


def hermite_pade_ode(s, Q, D, n_use=None, max_primes=MAX_LIFT_PRIMES):
    """
    Exact operator of order ≤ Q, degree ≤ D annihilating the first n_use coefficients.

    Works multimodularly: a pivot-row set is fixed from a few probe primes, the
    determinant-scaled kernel vector is computed modulo many primes, recombined by
    CRT and accepted once it annihilates all n_use equations over the integers.
    """
    unknowns = (Q + 1) * (D + 1)
    if n_use is None:
        n_use = min(unknowns - 1, DEFAULT_N_USE_CAP)
    if n_use < unknowns - 1 or n_use > s.n:
        raise RejectedInput(f"n_use = {n_use} must lie in {unknowns - 1}..{s.n}: one equation per unknown but the scale")
    ints = [gmpy2.mpz(as_int(s.coefficient(k))) for k in range(n_use)]
    log_event("DIFFPADE", f"fit (Q={Q}, D={D}) on {n_use} coefficients")
    primes = descending_primes()
    best = None
    for _ in range(PROBE_PRIMES):
        p = next(primes)
        form = rref_mod_p(_ode_matrix(_residues(ints, p), Q, D, np.arange(n_use), p), p)
        free = form.free_columns()
        if not free:
            log_event("DIFFPADE", f"trivial nullspace at (Q={Q}, D={D})")
            return None
        key = (len(free), -free[0])
        if best is None or key < best[0]:
            best = (key, free[0], sorted(form.pivot_rows[:free[0]]))
    (nullity, _), f, rows = best
    residues, moduli = [], []
    checkpoint = 1
    for p in primes:
        if len(moduli) >= max_primes:
            raise InconclusiveError(f"no exact kernel vector after {max_primes} primes")
        vec = _scaled_kernel_vector(ints, rows, Q, D, f, p)
        if vec is None:
            continue
        residues.append(vec)
        moduli.append(p)
        if len(moduli) < checkpoint:
            continue
        checkpoint *= 2
        W = symmetric_lift(*crt_tree(residues, moduli))
        if any(W) and _annihilates_exactly(ints, Q, D, W, n_use):
            g = math.gcd(*W)
            W = [w // g for w in W] + [0] * (unknowns - len(W))
            meta = {"n_use": n_use, "primes": len(moduli), "nullity": nullity}
            op = _operator_from_vector(W, Q, D, None, meta).primitive()
            log_event("DIFFPADE", f"exact operator of order {op.order}, degree {op.degree} after {len(moduli)} primes")
            return op


# ------------------------------------------------------------
# Holonomy Rejection
# ------------------------------------------------------------
def holonomy_rejection_test(s, budgets=DEFAULT_HOLONOMY_BUDGETS, n_use=2000, holdout=500, p=LARGE_PRIME):
    """
    Per budget (Q, D): does an operator fitted on the first n_use coefficients
    survive the next `holdout` ones? Works mod a large prime; an operator over Q
    reduces to one mod p, so an emptied kernel is a rejection certificate.
    """
    if n_use + holdout > s.n + 1:
        raise RejectedInput(f"n_use + holdout = {n_use + holdout} exceeds the {s.n + 1} available coefficients")
    total = n_use + holdout
    vals = _residues([as_int(s.coefficient(k)) for k in range(total)], p)
    report = []
    for Q, D in budgets:
        B = (Q + 1) * (D + 1)
        if B > n_use:
            raise RejectedInput(f"budget (Q={Q}, D={D}) has more unknowns than n_use = {n_use}")
        A = _ode_matrix(vals, Q, D, np.arange(total), p)
        K = kernel_basis_mod_p(A[:B - 1], p)
        _, failing = restrict_kernel_online(K, A[B - 1:], p, first_index=B - 1)
        entry = {
            "Q": Q,
            "D": D,
            "fit_found": failing is None or failing >= n_use,
            "failing_index": failing,
            "verdict": "PASS" if failing is None else "REJECTED",
        }
        log_event("HOLONOMY", f"(Q={Q}, D={D}) {entry['verdict']} at {failing}", "DEBUG")
        report.append(entry)
    return report


# ------------------------------------------------------------
# Singularity Reports
# ------------------------------------------------------------
@dataclass(frozen=True)
class Singularity:
    location: complex
    multiplicity: int
    exponents: tuple


@dataclass
class SingularityReport:
    entries: list
    radius: Optional[float]
    growth: Optional[object] = None
    infinity_exponents: tuple = ()
    origin_exponents: tuple = ()
    meta: dict = field(default_factory=dict)

    def nearest(self):
        return self.entries[0] if self.entries else None

    def to_json(self):
        return {
            "entries": [
                {
                    "location": [e.location.real, e.location.imag],
                    "multiplicity": e.multiplicity,
                    "exponents": [_json_number(x) for x in e.exponents],
                }
                for e in self.entries
            ],
            "radius": self.radius,
            "growth": None if self.growth is None else {"lambda": self.growth.lambda_, "exponent": self.growth.exponent},
            "infinity_exponents": [_json_number(x) for x in self.infinity_exponents],
            "origin_exponents": [_json_number(x) for x in self.origin_exponents],
        }


def _json_number(x):
    return [x.real, x.imag] if isinstance(x, complex) else x


def _as_sympy_poly(p, w):
    return Poly([Rational(c.numerator, c.denominator) for c in reversed(p)] or [0], w, domain="QQ")


def _roots(coeffs_desc):
    """
    Roots (mpmath, with multiplicity) of a polynomial given by descending mpmath coefficients.
    Durand–Kerner is retried at rising precision; clustered roots, where it cannot
    reach ROOT_TOLERANCE, come from the companion matrix and are merged by averaging.
    """
    degree = len(coeffs_desc) - 1
    if degree < 1:
        return []
    steps = ROOT_MAX_STEPS
    for attempt in range(ROOT_ATTEMPTS):
        dps = ROOT_PRECISION << attempt
        with mpmath.workdps(dps):
            try:
                roots, err = mpmath.polyroots(coeffs_desc, maxsteps=steps, extraprec=4 * dps, error=True)
            except mpmath.libmp.NoConvergence:
                roots, err = None, None
        if roots is not None and err < ROOT_TOLERANCE:
            return roots if isinstance(roots, list) else [roots]
        steps *= 4
    roots = _merge_clusters(_companion_roots(coeffs_desc, ROOT_PRECISION << ROOT_ATTEMPTS))
    log_event("DIFFPADE", f"degree {degree} polynomial has clustered roots, merged by averaging", "WARNING")
    return roots


def _companion_roots(coeffs_desc, dps):
    with mpmath.workdps(dps):
        lead = mpmath.mpmathify(coeffs_desc[0])
        monic = [mpmath.mpmathify(c) / lead for c in coeffs_desc[1:]]
        degree = len(monic)
        if degree == 1:
            return [-monic[0]]
        M = mpmath.zeros(degree, degree)
        for i in range(1, degree):
            M[i, i - 1] = 1
        for i in range(degree):
            M[i, degree - 1] = -monic[degree - 1 - i]
        return list(mpmath.eig(M, left=False, right=False))


def _merge_clusters(roots):
    """Replace every group of roots within ROOT_CLUSTER of each other by its mean, repeated."""
    pending = list(roots)
    merged = []
    while pending:
        seed = pending.pop(0)
        group = [seed]
        for r in list(pending):
            if abs(r - seed) < ROOT_CLUSTER * max(1, abs(seed)):
                group.append(r)
                pending.remove(r)
        mean = mpmath.fsum(group) / len(group)
        merged.extend([mean] * len(group))
    return merged


def _clean(z):
    z = complex(z)
    return z.real if abs(z.imag) < 1e-9 * max(1.0, abs(z)) else z


def _polyval(poly, x):
    return mpmath.polyval([mpmath.mpf(a.p) / a.q for a in poly.all_coeffs()], x)


def _local_exponents(d_coeffs, g, root, w):
    """Roots of the indicial polynomial of the D-form operator at a root of the squarefree factor g."""
    slope = _polyval(g.diff(w), root)
    best = None
    terms = []
    for i, c in enumerate(d_coeffs):
        if c.is_zero:
            continue
        order = 0
        while True:
            quo, rem = c.div(g)
            if not rem.is_zero:
                break
            c, order = quo, order + 1
        value = _polyval(c, root) * slope ** order
        shift = order - i
        terms.append((shift, i, value))
        best = shift if best is None else min(best, shift)
    indicial = [0j]
    for shift, i, value in terms:
        if shift == best:
            indicial = _padd(indicial, _pscale(_falling_coeffs(i), value))
    indicial = _trim_poly(indicial)
    return tuple(sorted((_clean(r) for r in _roots(list(reversed(indicial)))), key=_sort_key))


def _sort_key(z):
    z = complex(z)
    return (z.real, z.imag)


def _indicial_roots(coeffs_asc):
    """Exponents of a rational indicial polynomial; squarefree parts are solved separately."""
    coeffs = _trim_poly(coeffs_asc)
    if len(coeffs) < 2:
        return ()
    rho = Symbol("rho")
    _, factors = sqf_list(_as_sympy_poly(coeffs, rho))
    found = []
    for g, mult in factors:
        g = Poly(g, rho, domain="QQ")
        if g.degree() < 1:
            continue
        desc = [mpmath.mpf(c.p) / c.q for c in g.all_coeffs()]
        found.extend(_clean(r) for r in _roots(desc) for _ in range(int(mult)))
    return tuple(sorted(found, key=_sort_key))


def singularity_report(L, series=None):
    """Finite singularities (roots of the leading coefficient), their local exponents and those at 0 and ∞."""
    if L.modulus is not None:
        raise RejectedInput("singularity reports need an operator over the rationals")
    theta = L.to_theta_form()
    w = Symbol(L.var)
    entries = []
    with mpmath.workdps(ROOT_PRECISION):
        lead = _as_sympy_poly(theta.leading, w)
        if lead.degree() > 0:
            d_coeffs = [_as_sympy_poly(p, w) for p in theta.to_d_form().coeffs]
            _, factors = sqf_list(lead)
            for g, mult in factors:
                g = Poly(g, w, domain="QQ")
                if g.degree() < 1:
                    continue
                desc = [mpmath.mpf(c.p) / c.q for c in g.all_coeffs()]
                for root in _roots(desc):
                    exps = _local_exponents(d_coeffs, g, root, w)
                    entries.append(Singularity(complex(root), int(mult), exps))
        entries.sort(key=lambda e: (abs(e.location), e.location.imag))
        top = theta.degree
        at_infinity = [(-1) ** i * (p[top] if len(p) > top else 0) for i, p in enumerate(theta.coeffs)]
        infinity = _indicial_roots([Fraction(c) for c in at_infinity])
        origin = _indicial_roots([p[0] if p else Fraction(0) for p in theta.coeffs])
    nonzero = [abs(e.location) for e in entries if abs(e.location) > ROOT_TOLERANCE]
    radius = min(nonzero) if nonzero else None
    growth = None
    if series is not None:
        try:
            growth = growth_estimate(series)
        except RejectedInput as e:
            log_event("DIFFPADE", f"no growth estimate: {e}", "WARNING")
    report = SingularityReport(entries, radius, growth, infinity, origin)
    log_event("DIFFPADE", f"{len(entries)} finite singularities, radius {radius}")
    return report
