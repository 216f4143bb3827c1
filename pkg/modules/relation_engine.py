# ============================================================
# 🛠 Modular Series Engine — Relation Engine Module
# v1.0 | Polynomial Relations P(w, S) ≡ 0 mod m, Frobenius Relations
# ============================================================

from dataclasses import dataclass, field

import numpy as np

from modules.diagnostics_engine import RejectedInput, UnsupportedModulus, log_event
from modules.linalg_engine import (
    kernel_basis_mod_p,
    kernel_generators_mod_prime_power,
    modulus_kind,
    prime_power_parts,
    restrict_kernel,
)
from modules.modular_engine import ModSeries, polynomial_mod

# === CONFIGURATION ===
DEFAULT_GUARD_REL = 500
DEFAULT_RELATION_BUDGET = 400
DEFAULT_MAX_DEG_S = 32
FROBENIUS_CEILING = 2 ** 16


def _poly_text(coeffs, var):
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        parts.append(str(c) if k == 0 else (mono if c == 1 else f"{c}{mono}"))
    return " + ".join(reversed(parts)) if parts else "0"


# ------------------------------------------------------------
# Bivariate Relations
# ------------------------------------------------------------
@dataclass
class BivariateRelation:
    """Σ c_ab·w^a·S^b over Z/m, stored sparsely as {(a, b): c}."""

    modulus: int
    terms: dict
    var: str = "w"
    unknown: str = "S"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.modulus < 2:
            raise UnsupportedModulus(f"modulus must be at least 2, got {self.modulus}")
        self.terms = {(int(a), int(b)): int(c) % self.modulus for (a, b), c in self.terms.items() if int(c) % self.modulus}
        if not any(b >= 1 for _, b in self.terms):
            raise RejectedInput("a relation needs at least one term in the unknown")

    @classmethod
    def from_polys(cls, modulus, polys, var="w", unknown="S", meta=None):
        """polys[b] = ascending coefficients of the polynomial multiplying S^b."""
        terms = {(a, int(b)): c for b, coeffs in polys.items() for a, c in enumerate(coeffs)}
        return cls(modulus, terms, var, unknown, dict(meta or {}))

    @property
    def degS(self):
        return max(b for _, b in self.terms)

    @property
    def degW(self):
        return max(a for a, _ in self.terms)

    def poly(self, b):
        """Ascending coefficients of the polynomial in front of S^b."""
        out = [0] * (self.degW + 1)
        for (a, bb), c in self.terms.items():
            if bb == b:
                out[a] = c
        while len(out) > 1 and not out[-1]:
            out.pop()
        return out

    def _leading_unit(self):
        for a, b in sorted(self.terms, key=lambda t: (t[1], t[0]), reverse=True):
            c = self.terms[(a, b)]
            try:
                return pow(c, -1, self.modulus)
            except ValueError:
                continue
        return None

    def normalized(self):
        """Scale so the highest monomial (b desc, a desc) with a unit coefficient becomes 1."""
        inv = self._leading_unit()
        if inv is None:
            return self
        terms = {k: c * inv for k, c in self.terms.items()}
        return BivariateRelation(self.modulus, terms, self.var, self.unknown, self.meta)

    def equivalent(self, other):
        return self.modulus == other.modulus and self.normalized().terms == other.normalized().terms

    def to_json(self):
        return {
            "modulus": self.modulus,
            "var": self.var,
            "unknown": self.unknown,
            "degW": self.degW,
            "degS": self.degS,
            "terms": [{"a": a, "b": b, "c": c} for (a, b), c in sorted(self.terms.items(), key=lambda t: (t[0][1], t[0][0]))],
        }

    @classmethod
    def from_json(cls, obj):
        terms = {(int(t["a"]), int(t["b"])): int(t["c"]) for t in obj["terms"]}
        return cls(int(obj["modulus"]), terms, obj.get("var", "w"), obj.get("unknown", "S"))

    def __str__(self):
        parts = []
        for b in range(self.degS, -1, -1):
            poly = self.poly(b)
            if not any(poly):
                continue
            text = _poly_text(poly, self.var)
            unknown = "" if b == 0 else (self.unknown if b == 1 else f"{self.unknown}^{b}")
            if not unknown:
                parts.append(f"({text})" if "+" in text else text)
            elif text == "1":
                parts.append(unknown)
            else:
                parts.append(f"({text})·{unknown}" if "+" in text else f"{text}·{unknown}")
        return " + ".join(parts) + f" ≡ 0 (mod {self.modulus})"


def evaluate_relation(P, s):
    """Σ_b r_b(w)·s^b by Horner's rule, truncated at the order of s."""
    if P.modulus != s.m:
        raise RejectedInput(f"relation is mod {P.modulus}, series is mod {s.m}")
    total = polynomial_mod(P.poly(P.degS), s.m, s.n, s.var)
    for b in range(P.degS - 1, -1, -1):
        total = total * s + polynomial_mod(P.poly(b), s.m, s.n, s.var)
    return total


def verify_relation(P, s):
    """True iff P(w, s) ≡ 0 through the full truncation order of s."""
    ok = evaluate_relation(P, s).is_zero()
    log_event("VERIFY", f"relation degS={P.degS} degW={P.degW} mod {P.modulus} to order {s.n}: {ok}")
    return ok


# ------------------------------------------------------------
# Guessing
# ------------------------------------------------------------
def _powers(s, top):
    out = [polynomial_mod([1], s.m, s.n, s.var)]
    for _ in range(top):
        out.append(out[-1] * s)
    return out


def _relation_matrix(powers, degS, degW, rows):
    """Column b·(degW+1) + a holds the coefficients of w^a·s^b."""
    A = np.zeros((rows, (degS + 1) * (degW + 1)), dtype=np.int64)
    for b in range(degS + 1):
        coeffs = powers[b].coeffs
        for a in range(min(degW + 1, rows)):
            A[a:, b * (degW + 1) + a] = coeffs[:rows - a]
    return A


def _relation_from_vector(vec, degS, degW, m, var, meta):
    terms = {(a, b): int(vec[b * (degW + 1) + a]) for b in range(degS + 1) for a in range(degW + 1)}
    return BivariateRelation(m, terms, var, meta=meta)


def _check_budget(s, unknowns, guard):
    if unknowns + guard > s.n + 1:
        raise RejectedInput(f"series of order {s.n} is too short for {unknowns} unknowns plus guard {guard}")


def _guess_with_powers(s, powers, degS, degW, guard):
    m = s.m
    kind = modulus_kind(m)
    if kind == "composite":
        raise UnsupportedModulus(f"relation guessing needs a prime or prime-power modulus, got {m}")
    unknowns = (degS + 1) * (degW + 1)
    _check_budget(s, unknowns, guard)
    A = _relation_matrix(powers, degS, degW, s.n + 1)
    if kind == "prime":
        split = unknowns + guard
        K = restrict_kernel(kernel_basis_mod_p(A[:split], m), A[split:], m)
        if K.shape[0] == 0:
            return None
        vec, nullity = K[0], K.shape[0]
    else:
        (p, k), = prime_power_parts(m)
        gens = [g for g in kernel_generators_mod_prime_power(A, p, k) if (g % p).any()]
        if not gens:
            return None
        vec = min(gens, key=lambda g: int(np.flatnonzero(g % p).max()))
        nullity = len(gens)
    meta = {"nullity": int(nullity), "rows": s.n + 1}
    return _relation_from_vector(vec, degS, degW, m, s.var, meta).normalized()


def guess_relation(s, degS, degW, guard=DEFAULT_GUARD_REL):
    """
    Relation of degree ≤ degS in S and ≤ degW in w holding on every coefficient of s.
    Over a prime the nullspace element with the smallest leading monomial is returned.
    """
    if degS < 1 or degW < 0:
        raise RejectedInput("need degS ≥ 1 and degW ≥ 0")
    P = _guess_with_powers(s, _powers(s, degS), degS, degW, guard)
    if P is None or not verify_relation(P, s):
        log_event("GUESS", f"no relation mod {s.m} at (degS={degS}, degW={degW})", "DEBUG")
        return None
    log_event("GUESS", f"relation mod {s.m}: degS={P.degS}, degW={P.degW}")
    return P


def search_relation(s, max_budget=DEFAULT_RELATION_BUDGET, guard=DEFAULT_GUARD_REL, max_deg_s=DEFAULT_MAX_DEG_S):
    """
    Smallest budget (degS+1)(degW+1) carrying a relation, degS ascending on ties.
    For fixed degS existence is monotone in degW, so degW is found by bisection.
    """
    usable = min(max_budget, s.n + 1 - guard)
    powers = _powers(s, 1)
    best = None
    for degS in range(1, min(max_deg_s, usable - 1) + 1):
        cap = (usable if best is None else best[0] - 1) // (degS + 1) - 1
        if cap < 0:
            break
        while len(powers) <= degS:
            powers.append(powers[-1] * s)
        if _guess_with_powers(s, powers, degS, cap, guard) is None:
            continue
        lo, hi = 0, cap
        while lo < hi:
            mid = (lo + hi) // 2
            if _guess_with_powers(s, powers, degS, mid, guard) is None:
                lo = mid + 1
            else:
                hi = mid
        budget = (degS + 1) * (lo + 1)
        if best is None or budget < best[0]:
            best = (budget, degS, lo)
    if best is None:
        log_event("GUESS", f"no relation mod {s.m} within budget {max_budget}")
        return None
    _, degS, degW = best
    P = guess_relation(s, degS, degW, guard)
    if P is not None:
        P.meta["budget"] = (degS, degW)
    return P


# ------------------------------------------------------------
# Frobenius Relations
# ------------------------------------------------------------
@dataclass
class FrobeniusRelation:
    """Σ a_e(x)·S^e ≡ 0 mod p with e ∈ {0} ∪ {p^i}; terms maps e -> ascending coefficients."""

    p: int
    terms: dict
    var: str = "x"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        cleaned = {}
        for e, poly in self.terms.items():
            poly = [int(c) % self.p for c in poly]
            while poly and not poly[-1]:
                poly.pop()
            if poly:
                cleaned[int(e)] = poly
        self.terms = cleaned
        if not any(e >= 1 for e in self.terms):
            raise RejectedInput("a Frobenius relation needs a term in the unknown")
        for e in self.terms:
            if e > 1:
                q = e
                while q % self.p == 0:
                    q //= self.p
                if q != 1:
                    raise RejectedInput(f"exponent {e} is not a power of {self.p}")

    def normalized(self):
        e = max(self.terms)
        inv = pow(self.terms[e][-1], -1, self.p)
        return FrobeniusRelation(self.p, {k: [c * inv for c in v] for k, v in self.terms.items()}, self.var, self.meta)

    def to_json(self):
        def index(e):
            if e == 0:
                return -1
            i = 0
            while e > 1:
                e //= self.p
                i += 1
            return i

        return {"p": self.p, "terms": [{"i": index(e), "poly": poly} for e, poly in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, obj):
        p = int(obj["p"])
        return cls(p, {(0 if t["i"] < 0 else p ** t["i"]): t["poly"] for t in obj["terms"]})

    def __str__(self):
        parts = []
        for e in sorted(self.terms, reverse=True):
            text = _poly_text(self.terms[e], self.var)
            unknown = "" if e == 0 else ("S" if e == 1 else f"S^{e}")
            if not unknown:
                parts.append(f"({text})" if "+" in text else text)
            else:
                parts.append(unknown if text == "1" else f"({text})·{unknown}")
        return " + ".join(parts) + f" ≡ 0 (mod {self.p})"


def _frobenius_image(s, e):
    if e == 0:
        return polynomial_mod([1], s.m, s.n, s.var)
    if e == 1:
        return s
    return s.substitute(e).truncate(s.n)


def verify_frobenius(R, s):
    """Uses s^(p^i) ≡ s(x^(p^i)) mod p."""
    if R.p != s.m:
        raise RejectedInput(f"relation is mod {R.p}, series is mod {s.m}")
    total = ModSeries(np.zeros(s.n + 1, dtype=np.int64), s.m, s.var)
    for e, poly in R.terms.items():
        total = total + polynomial_mod(poly, s.m, s.n, s.var) * _frobenius_image(s, e)
    return total.is_zero()


def guess_frobenius(s, i_max, deg_bound, guard=DEFAULT_GUARD_REL):
    """Polynomials a_e of degree ≤ deg_bound with Σ a_e·s^e ≡ 0, e ∈ {0, 1, p, ..., p^i_max}."""
    p = s.m
    if modulus_kind(p) != "prime":
        raise UnsupportedModulus(f"Frobenius relations need a prime modulus, got {p}")
    if p ** i_max > FROBENIUS_CEILING:
        raise RejectedInput(f"p^i_max = {p ** i_max} exceeds the ceiling {FROBENIUS_CEILING}")
    exponents = [0] + [p ** i for i in range(i_max + 1)]
    width = deg_bound + 1
    unknowns = len(exponents) * width
    _check_budget(s, unknowns, guard)
    rows = s.n + 1
    A = np.zeros((rows, unknowns), dtype=np.int64)
    for t, e in enumerate(exponents):
        coeffs = _frobenius_image(s, e).coeffs
        for a in range(min(width, rows)):
            A[a:, t * width + a] = coeffs[:rows - a]
    split = unknowns + guard
    K = restrict_kernel(kernel_basis_mod_p(A[:split], p), A[split:], p)
    if K.shape[0] == 0:
        log_event("GUESS", f"no Frobenius relation mod {p} with i_max={i_max}, degree {deg_bound}", "DEBUG")
        return None
    vec = K[0]
    terms = {e: [int(vec[t * width + a]) for a in range(width)] for t, e in enumerate(exponents)}
    R = FrobeniusRelation(p, terms, s.var, {"nullity": int(K.shape[0])}).normalized()
    if not verify_frobenius(R, s):
        return None
    log_event("GUESS", f"Frobenius relation mod {p}: {R}")
    return R
