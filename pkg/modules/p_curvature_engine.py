# ============================================================
# 🛠 Modular Series Engine — p-Curvature Engine Module
# v1.0 | Companion Recursion over F_p(w), ZERO / NILPOTENT / OTHER
# ============================================================

from dataclasses import dataclass

import gmpy2
import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_monic, gf_quo

from modules.diagnostics_engine import RejectedInput, UnsupportedModulus, log_event

# === CONFIGURATION ===
ZERO = "ZERO"
NILPOTENT = "NILPOTENT"
OTHER = "OTHER"


# ------------------------------------------------------------
# Polynomial Matrices over F_p (shape rows × cols × (degree+1))
# ------------------------------------------------------------
def _trim(M):
    nz = np.flatnonzero(M.reshape(-1, M.shape[-1]).any(axis=0))
    top = int(nz[-1]) + 1 if nz.size else 1
    return M[..., :top]


def _pad(M, length):
    if M.shape[-1] >= length:
        return M
    pad = [(0, 0)] * (M.ndim - 1) + [(0, length - M.shape[-1])]
    return np.pad(M, pad)


def _add(A, B, p):
    length = max(A.shape[-1], B.shape[-1])
    return _trim((_pad(A, length) + _pad(B, length)) % p)


def _deriv(M, p):
    if M.shape[-1] == 1:
        return np.zeros_like(M)
    ks = np.arange(1, M.shape[-1], dtype=np.int64)
    return _trim(M[..., 1:] * ks % p)


def _pack(v, width):
    raw = np.asarray(v, dtype="<u8").view(np.uint8).reshape(-1, 8)[:, :width].tobytes()
    return gmpy2.mpz(int.from_bytes(raw, "little"))


def _unpack(x, width, length):
    raw = int(x).to_bytes(width * length, "little")
    cells = np.zeros((length, 8), dtype=np.uint8)
    cells[:, :width] = np.frombuffer(raw, dtype=np.uint8).reshape(length, width)
    return cells.view("<u8").ravel().astype(np.int64)


def _width(terms, da, db, p):
    bound = terms * min(da, db) * (p - 1) ** 2
    width = bound.bit_length() // 8 + 1
    if width > 8:
        raise RejectedInput("polynomial matrix too large for packed products")
    return width


def polymat_mul(A, B, p):
    """A·B for polynomial matrices mod p; entry products by Kronecker substitution."""
    rows, inner, da = A.shape
    _, cols, db = B.shape
    length = da + db - 1
    width = _width(inner, da, db, p)
    PA = [[_pack(A[i, l], width) if A[i, l].any() else None for l in range(inner)] for i in range(rows)]
    PB = [[_pack(B[l, j], width) if B[l, j].any() else None for j in range(cols)] for l in range(inner)]
    out = np.zeros((rows, cols, length), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            acc = gmpy2.mpz(0)
            for l in range(inner):
                if PA[i][l] is not None and PB[l][j] is not None:
                    acc += PA[i][l] * PB[l][j]
            if acc:
                out[i, j] = _unpack(acc, width, length) % p
    return _trim(out)


def poly_times(a, M, p):
    """Scalar polynomial a(w) times every entry of M."""
    return polymat_mul(np.asarray(a, dtype=np.int64).reshape(1, 1, -1), M.reshape(1, -1, M.shape[-1]), p).reshape(
        M.shape[0], M.shape[1], -1
    )


# ------------------------------------------------------------
# Rational Function Matrices
# ------------------------------------------------------------
def _desc(v):
    return _strip([int(c) for c in reversed(list(v))])


def _strip(f):
    i = 0
    while i < len(f) and f[i] == 0:
        i += 1
    return f[i:]


def _asc(f, length=None):
    out = [int(c) for c in reversed(f)] or [0]
    if length is not None:
        out += [0] * (length - len(out))
    return out


@dataclass
class RationalFunctionMatrix:
    """numerators / denominator over F_p(w), one common denominator."""

    p: int
    numerators: np.ndarray
    denominator: np.ndarray

    @property
    def size(self):
        return self.numerators.shape[0]

    def is_zero(self):
        return not self.numerators.any()

    def entries(self):
        """Per-entry reduced fractions (numerator, monic denominator) as ascending tuples."""
        den = _desc(self.denominator)
        out = []
        for i in range(self.size):
            row = []
            for j in range(self.size):
                num = _desc(self.numerators[i, j])
                if not num:
                    row.append(((0,), (1,)))
                    continue
                g = gf_gcd(num, den, self.p, ZZ)
                n_red = gf_quo(num, g, self.p, ZZ)
                d_red = gf_quo(den, g, self.p, ZZ)
                lc, d_red = gf_monic(d_red, self.p, ZZ)
                inv = pow(int(lc), -1, self.p)
                n_red = [int(c) * inv % self.p for c in n_red]
                row.append((tuple(_asc(n_red)), tuple(_asc(d_red))))
            out.append(tuple(row))
        return tuple(out)

    @property
    def max_entry_degree(self):
        degrees = [max(len(n), len(d)) - 1 for row in self.entries() for n, d in row if any(n)]
        return max(degrees) if degrees else 0

    def to_json(self):
        return {
            "p": self.p,
            "entries": [[{"num": list(n), "den": list(d)} for n, d in row] for row in self.entries()],
        }


# ------------------------------------------------------------
# p-Curvature
# ------------------------------------------------------------
def _companion(L):
    """(C, a): the companion matrix of the monic D-form operator is C / a."""
    p = L.modulus
    ops = L.to_d_form()
    r = ops.order
    a = np.array([int(c) % p for c in ops.leading], dtype=np.int64)
    width = max(len(c) for c in ops.coeffs)
    C = np.zeros((r, r, width), dtype=np.int64)
    for i in range(r - 1):
        C[i, i + 1, :len(a)] = a
    for j in range(r):
        coeffs = [(-int(c)) % p for c in ops.coeffs[j]]
        C[r - 1, j, :len(coeffs)] = coeffs
    return _trim(C), a


def _check_operator(L):
    if L.modulus is None or not isprime(L.modulus):
        raise UnsupportedModulus("p-curvature needs an operator over a prime field")
    if L.order < 1:
        raise RejectedInput("p-curvature needs an operator of order at least 1")


def p_curvature(L, reduce_steps=False):
    """
    Λ_p for Λ_1 = A, Λ_{k+1} = Λ_k' + Λ_k·A with A the companion matrix.
    Without reduction Λ_k = M_k / a^k and M_{k+1} = a·M_k' − k·a'·M_k + M_k·C.
    """
    _check_operator(L)
    p = L.modulus
    C, a = _companion(L)
    log_event("PCURV", f"order {L.order} operator mod {p}, reduce_steps={reduce_steps}", "DEBUG")
    if reduce_steps:
        return _p_curvature_reduced(C, a, p)
    da = _deriv(a.reshape(1, 1, -1), p).ravel()
    M = C
    for k in range(1, p):
        term = poly_times(a, _deriv(M, p), p)
        if da.any():
            term = _add(term, poly_times(da * (p - k) % p, M, p), p)
        M = _add(term, polymat_mul(M, C, p), p)
    # a(w)^p = a(w^p) in characteristic p
    den = np.zeros(p * (len(a) - 1) + 1, dtype=np.int64)
    den[::p] = a
    result = RationalFunctionMatrix(p, M, den)
    log_event("PCURV", f"mod {p}: {'zero' if result.is_zero() else 'nonzero'} p-curvature")
    return result


def _p_curvature_reduced(C, a, p):
    """Same recursion on (N, d) with the common gcd removed after every step."""
    N = C
    d = a.copy()
    for _ in range(1, p):
        dd = _deriv(d.reshape(1, 1, -1), p).ravel()
        inner = poly_times(d, _deriv(N, p), p)
        if dd.any():
            inner = _add(inner, poly_times((-dd) % p, N, p), p)
        N = _add(poly_times(a, inner, p), poly_times(d, polymat_mul(N, C, p), p), p)
        d = poly_times(d, poly_times(d, a.reshape(1, 1, -1), p), p).ravel()
        g = _desc(d)
        for entry in N.reshape(-1, N.shape[-1]):
            if entry.any():
                g = gf_gcd(g, _desc(entry), p, ZZ)
                if len(g) == 1:
                    break
        if len(g) > 1:
            flat = [_asc(gf_quo(_desc(e), g, p, ZZ)) if e.any() else [0] for e in N.reshape(-1, N.shape[-1])]
            length = max(len(f) for f in flat)
            N = _trim(np.array([f + [0] * (length - len(f)) for f in flat], dtype=np.int64).reshape(N.shape[0], N.shape[1], length))
            d = np.array(_asc(gf_quo(_desc(d), g, p, ZZ)), dtype=np.int64)
    return RationalFunctionMatrix(p, N, d)


def classify_p_curvature(L, result=None):
    """ZERO iff Λ_p = 0; NILPOTENT iff Λ_p^r = 0 for the operator order r; OTHER otherwise."""
    result = p_curvature(L) if result is None else result
    if result.is_zero():
        return ZERO
    power = result.numerators
    for _ in range(result.size - 1):
        power = polymat_mul(power, result.numerators, result.p)
        if not power.any():
            break
    verdict = NILPOTENT if not power.any() else OTHER
    log_event("PCURV", f"mod {result.p}: {verdict}")
    return verdict


def p_curvature_summary(L):
    result = p_curvature(L)
    return {"classification": classify_p_curvature(L, result), "max_entry_degree": result.max_entry_degree}
