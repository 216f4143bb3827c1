# ============================================================
# 🛠 Modular Series Engine — Hypergeometric Engine Module
# v1.0 | Truncation Polynomials, Frobenius Patterns, Christol 3F2
# ============================================================

from fractions import Fraction
from typing import NamedTuple

import gmpy2
import numpy as np

from modules.diagnostics_engine import ConsistencyError, InconclusiveError, RejectedInput, log_event
from modules.linalg_engine import crt_tree, modulus_kind, prime_power_parts
from modules.modular_engine import ModSeries, frobenius_identity_holds, lacunary_series, reduce
from modules.series_engine import IntegerSeries, as_fraction, hypergeometric_series

# === CONFIGURATION ===
TRUNCATION_MARGIN = 4
E_CEILING_EXPONENT = 6
FROBENIUS_HEAD_TERMS = 4

CHRISTOL_UPPER = (Fraction(1, 9), Fraction(4, 9), Fraction(5, 9))
CHRISTOL_LOWER = (Fraction(1, 3), Fraction(1))
CHRISTOL_SCALE = 3 ** 6
CHRISTOL_DIVISOR = 15

# (upper, lower, scale) of the families with published truncation polynomials
FAMILIES = {
    "4f3": ((Fraction(1, 2),) * 4, (1, 1, 1), 256),
    "5f4": ((Fraction(1, 2),) * 5, (1, 1, 1, 1), 2 ** 10),
    "5f4-mixed": ((Fraction(1, 2),) * 3 + (Fraction(1, 3),) * 2, (1, 1, 1, 1), 2 ** 6 * 3 ** 4),
    "christol": (CHRISTOL_UPPER, CHRISTOL_LOWER, CHRISTOL_SCALE),
}


# ------------------------------------------------------------
# Hypergeometric Coefficients mod m
# ------------------------------------------------------------
def _term_ratio(upper, lower, scale, k):
    num = scale
    for u in upper:
        num *= u + k
    den = Fraction(k + 1)
    for v in lower:
        den *= v + k
    return num / den


def _prime_power_coefficients(upper, lower, scale, n, p, K):
    """Coefficients mod p^K via (valuation, unit part) tracking."""
    q = p ** K
    out = np.zeros(n + 1, dtype=np.int64)
    out[0] = 1 % q
    val = 0
    unit = 1
    for k in range(n):
        f = _term_ratio(upper, lower, scale, k)
        if f == 0:
            break
        a, ea = gmpy2.remove(abs(f.numerator), p)
        b, eb = gmpy2.remove(f.denominator, p)
        val += int(ea) - int(eb)
        if val < 0:
            raise RejectedInput(f"coefficient {k + 1} has a denominator divisible by {p}")
        sign = -1 if f < 0 else 1
        unit = unit * sign * int(a) % q * int(gmpy2.invert(b, q)) % q
        out[k + 1] = unit * pow(p, val, q) % q if val < K else 0
    return out


def hypergeometric_mod(upper, lower, scale, n, m, var="x"):
    """pFq(upper; lower; scale·x) mod m through x^n without exact rationals."""
    upper = [as_fraction(u) for u in upper]
    lower = [as_fraction(v) for v in lower]
    scale = as_fraction(scale)
    for v in lower:
        if v <= 0 and v.denominator == 1:
            raise RejectedInput(f"lower parameter {v} is a nonpositive integer")
    parts = prime_power_parts(m)
    residues = [_prime_power_coefficients(upper, lower, scale, n, p, K) for p, K in parts]
    moduli = [p ** K for p, K in parts]
    if len(parts) == 1:
        values = residues[0]
    else:
        combined, _ = crt_tree(residues, moduli)
        values = [int(v) for v in combined]
    log_event("HYPERGEOM", f"{len(upper)}F{len(lower)} scale {scale} mod {m} to order {n}", "DEBUG")
    return ModSeries(values, m, var)


def family_series(name, n):
    """Exact integer series of a named family ('4f3', '5f4', '5f4-mixed', 'christol')."""
    if name not in FAMILIES:
        raise RejectedInput(f"unknown hypergeometric family {name!r}")
    upper, lower, scale = FAMILIES[name]
    return hypergeometric_series(upper, lower, scale, n).as_integer_series()


def family_mod(name, n, m):
    if name not in FAMILIES:
        raise RejectedInput(f"unknown hypergeometric family {name!r}")
    upper, lower, scale = FAMILIES[name]
    return hypergeometric_mod(upper, lower, scale, n, m)


def christol_series(n):
    """3F2([1/9,4/9,5/9],[1/3,1],729x), exact integers."""
    return family_series("christol", n)


def christol_mod(n, m):
    return family_mod("christol", n, m)


# ------------------------------------------------------------
# Truncation Polynomials
# ------------------------------------------------------------
class TruncationPolynomial(NamedTuple):
    e: int
    poly: list


def _as_residue_series(s, p):
    if isinstance(s, ModSeries):
        return reduce(s, p) if s.m != p else s
    return reduce(s, p)


def _last_nonzero(arr):
    nz = np.flatnonzero(arr)
    return int(nz[-1]) if nz.size else -1


def _search_ceiling(p, n, e_max):
    """Beyond (p-1)·p^t with p^t > n the powers repeat at this truncation."""
    horizon = 1
    while horizon <= n:
        horizon *= p
    ceiling = (p - 1) * (horizon - 1)
    return ceiling if e_max is None else min(e_max, ceiling)


def truncation_polynomial(s, p, e_max=None, margin=TRUNCATION_MARGIN):
    """
    Smallest e ≡ 0 mod (p-1) with s^(-e) mod p a polynomial P, or None.

    P counts as a polynomial when every coefficient past its degree d
    vanishes and at least margin·d such zeros are visible.
    """
    if modulus_kind(p) != "prime":
        raise RejectedInput(f"truncation polynomials need a prime, got {p}")
    S = _as_residue_series(s, p)
    if S.coefficient(0) != 1:
        raise RejectedInput(f"constant term must be 1 mod {p}")
    n = S.n
    e_max = p ** E_CEILING_EXPONENT if e_max is None else e_max
    ceiling = _search_ceiling(p, n, e_max)
    constant = not S.coeffs[1:].any()
    W = S.inverse() ** (p - 1)
    current = W
    log_event("HYPERGEOM", f"truncation search mod {p} to order {n}, e ≤ {ceiling}")
    e = p - 1
    while e <= ceiling:
        d = _last_nonzero(current.coeffs)
        if d == 0 and not constant:
            raise InconclusiveError(f"s^-{e} ≡ 1 mod {p} to order {n}: truncation horizon reached")
        if n - d >= margin * d:
            poly = current.tolist()[:d + 1]
            log_event("HYPERGEOM", f"mod {p}: e={e}, degree {d}")
            return TruncationPolynomial(e, poly)
        if n - d >= d:
            raise InconclusiveError(f"s^-{e} mod {p} vanishes past degree {d} but only {n - d} zeros are visible")
        current = current * W
        e += p - 1
    log_event("HYPERGEOM", f"mod {p}: no truncation polynomial for e ≤ {ceiling}", "DEBUG")
    return None


def finding_json(series_id, p, found, margin=TRUNCATION_MARGIN):
    """{series_id, p, e, poly, margin, verdict} record of one truncation search."""
    if found is None:
        return {"series_id": series_id, "p": p, "e": None, "poly": None, "margin": margin, "verdict": "NONE"}
    return {"series_id": series_id, "p": p, "e": found.e, "poly": list(found.poly), "margin": margin, "verdict": "FOUND"}


# ------------------------------------------------------------
# Frobenius and Power Patterns
# ------------------------------------------------------------
def frobenius_truncation_check(s, p, head_terms=FROBENIUS_HEAD_TERMS):
    """s(x)^p vs s(x^p) mod p, plus the leading nonzero terms of s^p − 1."""
    S = _as_residue_series(s, p)
    holds = frobenius_identity_holds(S, p)
    diff = (S ** p) - 1
    head = [(k, diff.coefficient(k)) for k in diff.nonzero_exponents()[:head_terms]]
    log_event("HYPERGEOM", f"Frobenius check mod {p}: holds={holds}, head={head}")
    return {"identity_holds": holds, "head": head}


def power_pattern(M):
    """Predicted x, x², x³ coefficients of s^M − 1 for the 4F3 series."""
    return (
        16 * M,
        16 * M * (8 * M + 73),
        Fraction(256, 3) * M * (8 * M * M + 219 * M + 1648),
    )


def power_pattern_check(s, M_values):
    """Exact check of the first three coefficients of s^M − 1 against power_pattern(M)."""
    if s.n < 3:
        raise RejectedInput("need the series through x^3")
    head = IntegerSeries([s.coefficient(k) for k in range(4)], s.var)
    for M in M_values:
        if M < 1:
            raise RejectedInput(f"M must be a positive integer, got {M}")
        power = head ** M
        got = tuple(power.coefficient(k) for k in (1, 2, 3))
        if any(g != w for g, w in zip(got, power_pattern(M))):
            log_event("HYPERGEOM", f"power pattern fails at M={M}: {got}", "WARNING")
            return False
    return True


# ------------------------------------------------------------
# Christol Series Reductions
# ------------------------------------------------------------
def christol_transform_mod3(n):
    """1 + (S − 1)/15 mod 3 read rationally: (c/3)·5⁻¹ per coefficient, from S mod 45."""
    S = christol_mod(n, 3 * CHRISTOL_DIVISOR)
    coeffs = S.tolist()
    bad = next((k for k in range(1, n + 1) if coeffs[k] % 3), None)
    if bad is not None:
        raise ConsistencyError(f"coefficient {bad} of the Christol series is not divisible by 3")
    unit = int(gmpy2.invert(CHRISTOL_DIVISOR // 3, 3))
    out = [1] + [(c % 9) // 3 * unit % 3 for c in coeffs[1:]]
    return ModSeries(out, 3, "x")


def christol_lacunary_check(n):
    """True iff 1 + (S − 1)/15 ≡ 1 + x + x^3 + x^9 + ... mod 3 through x^n."""
    lhs = christol_transform_mod3(n)
    rhs = lacunary_series("L3", 3, n) + 1
    ok = np.array_equal(lhs.coeffs, rhs.coeffs)
    log_event("HYPERGEOM", f"Christol transform mod 3 is lacunary to order {n}: {ok}")
    return ok
