# ============================================================
# 🛠 Modular Series Engine — Linear Algebra Engine Module
# v1.0 | Elimination over Z/p, Z/p^k and Z/m; Multimodular Lifting
# ============================================================

from dataclasses import dataclass

import gmpy2
import numpy as np
from sympy import factorint, isprime, prevprime

from modules.diagnostics_engine import RejectedInput, UnsupportedModulus

# === CONFIGURATION ===
LARGE_PRIME = prevprime(2 ** 25)
_ACCUMULATE_LIMIT = 2 ** 62


# ------------------------------------------------------------
# Modulus Helpers
# ------------------------------------------------------------
def prime_power_parts(m):
    """[(p, k), ...] with m = Π p^k."""
    if m < 2:
        raise UnsupportedModulus(f"modulus must be at least 2, got {m}")
    return sorted(factorint(m).items())


def modulus_kind(m):
    parts = prime_power_parts(m)
    if len(parts) > 1:
        return "composite"
    return "prime" if parts[0][1] == 1 else "prime_power"


def descending_primes(start=LARGE_PRIME):
    """Deterministic stream of primes below `start` (inclusive)."""
    p = start if isprime(start) else prevprime(start)
    while p > 2:
        yield p
        p = prevprime(p)


def matmul_mod(A, B, m):
    """A @ B mod m without int64 overflow (chunked over the inner dimension)."""
    A = np.asarray(A, dtype=np.int64) % m
    B = np.asarray(B, dtype=np.int64) % m
    inner = A.shape[1]
    step = max(1, _ACCUMULATE_LIMIT // max((m - 1) ** 2, 1))
    if inner <= step:
        return (A @ B) % m
    out = np.zeros((A.shape[0],) + B.shape[1:], dtype=np.int64)
    for s in range(0, inner, step):
        out = (out + (A[:, s:s + step] @ B[s:s + step]) % m) % m
    return out


# ------------------------------------------------------------
# Prime Field Elimination
# ------------------------------------------------------------
@dataclass
class EchelonForm:
    rows: np.ndarray
    pivots: list
    pivot_rows: list
    det: int
    ncols: int

    @property
    def rank(self):
        return len(self.pivots)

    def free_columns(self):
        pivots = set(self.pivots)
        return [c for c in range(self.ncols) if c not in pivots]


def rref_mod_p(A, p):
    """Reduced row echelon form over F_p with a fixed pivot rule (first nonzero row)."""
    R = np.array(A, dtype=np.int64) % p
    if R.ndim != 2:
        raise RejectedInput("matrix must be two-dimensional")
    nrows, ncols = R.shape
    order = np.arange(nrows)
    pivots = []
    det = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
            order[[r, piv]] = order[[piv, r]]
            det = -det
        value = int(R[r, c])
        det = det * value % p
        R[r, c:] = R[r, c:] * pow(value, -1, p) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit, c:] = (R[hit, c:] - np.outer(col[hit], R[r, c:])) % p
        pivots.append(c)
        r += 1
    return EchelonForm(R[:r], pivots, [int(i) for i in order[:r]], det % p, ncols)


def kernel_from_echelon(form, p):
    """Kernel basis; row t has leading (highest) column = t-th free column, coefficient 1."""
    free = form.free_columns()
    K = np.zeros((len(free), form.ncols), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for r, c in enumerate(form.pivots):
            if c < f and form.rows[r, f]:
                K[t, c] = (-int(form.rows[r, f])) % p
    return K


def kernel_basis_mod_p(A, p):
    return kernel_from_echelon(rref_mod_p(A, p), p)


def restrict_kernel(K, rows, p):
    """Subspace of span(K) annihilated by every row of `rows`; minimal-leading order kept."""
    if K.shape[0] == 0 or len(rows) == 0:
        return K
    E = matmul_mod(rows, K.T, p)
    C = kernel_basis_mod_p(E, p)
    if C.shape[0] == 0:
        return np.zeros((0, K.shape[1]), dtype=np.int64)
    return matmul_mod(C, K, p)


def guarded_kernel_mod_p(A, p, split):
    """Kernel of A solved on the first `split` rows, then restricted by the remaining rows."""
    K = kernel_basis_mod_p(A[:split], p)
    return restrict_kernel(K, A[split:], p)


def restrict_kernel_online(K, rows, p, first_index=0):
    """
    Feed rows one at a time; return (K, failing_index) where failing_index is
    the absolute index of the row that empties the kernel, or None.
    """
    K = np.array(K, dtype=np.int64) % p
    if K.shape[0] == 0:
        raise RejectedInput("cannot restrict an empty kernel")
    for offset, row in enumerate(rows):
        e = matmul_mod(K, np.asarray(row, dtype=np.int64).reshape(-1, 1), p).ravel()
        hit = np.flatnonzero(e)
        if hit.size == 0:
            continue
        piv = int(hit[0])
        inv = pow(int(e[piv]), -1, p)
        rest = hit[1:]
        if rest.size:
            factors = e[rest] * inv % p
            K[rest] = (K[rest] - np.outer(factors, K[piv])) % p
        K = np.delete(K, piv, axis=0)
        if K.shape[0] == 0:
            return K, first_index + offset
    return K, None


def solve_mod_p(A, b, p):
    """One solution of A x = b over F_p (free variables 0) or None."""
    A = np.array(A, dtype=np.int64) % p
    aug = np.concatenate([A, np.asarray(b, dtype=np.int64).reshape(-1, 1) % p], axis=1)
    form = rref_mod_p(aug, p)
    ncols = A.shape[1]
    if ncols in form.pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for r, c in enumerate(form.pivots):
        x[c] = form.rows[r, ncols]
    return x


# ------------------------------------------------------------
# Prime Power Elimination (Smith form with transforms)
# ------------------------------------------------------------
@dataclass
class SmithForm:
    p: int
    k: int
    valuations: list
    V: np.ndarray
    rhs: np.ndarray
    nrows: int
    ncols: int

    @property
    def rank(self):
        return len(self.valuations)


def _valuations(X, p, k):
    v = np.zeros(X.shape, dtype=np.int64)
    pe = 1
    for _ in range(k):
        pe *= p
        v += (X % pe == 0)
    return v


def smith_mod_prime_power(A, p, k, rhs=None):
    """
    Diagonalise A over Z/p^k by minimal-valuation full pivoting.
    Returns the valuations of the diagonal, the column transform V and the
    transformed right-hand side (U·rhs).
    """
    q = p ** k
    M = np.array(A, dtype=np.int64) % q
    nrows, ncols = M.shape
    V = np.eye(ncols, dtype=np.int64)
    b = np.zeros(nrows, dtype=np.int64) if rhs is None else np.asarray(rhs, dtype=np.int64) % q
    vals = []
    t = 0
    while t < min(nrows, ncols):
        sub = M[t:, t:]
        if not sub.any():
            break
        v = _valuations(sub, p, k)
        i, j = np.unravel_index(int(np.argmin(v)), v.shape)
        e = int(v[i, j])
        i += t
        j += t
        if i != t:
            M[[t, i]] = M[[i, t]]
            b[[t, i]] = b[[i, t]]
        if j != t:
            M[:, [t, j]] = M[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        pe = p ** e
        unit_inv = pow(int(M[t, t]) // pe, -1, q)
        M[t] = M[t] * unit_inv % q
        b[t] = b[t] * unit_inv % q
        col = M[t + 1:, t] // pe
        hit = np.flatnonzero(col)
        if hit.size:
            rows = t + 1 + hit
            M[rows] = (M[rows] - np.outer(col[hit], M[t])) % q
            b[rows] = (b[rows] - col[hit] * b[t]) % q
        row = M[t, t + 1:] // pe
        hit = np.flatnonzero(row)
        if hit.size:
            cols = t + 1 + hit
            M[:, cols] = (M[:, cols] - np.outer(M[:, t], row[hit])) % q
            V[:, cols] = (V[:, cols] - np.outer(V[:, t], row[hit])) % q
        vals.append(e)
        t += 1
    return SmithForm(p, k, vals, V, b, nrows, ncols)


def kernel_generators_mod_prime_power(A, p, k):
    """Generators of {x : A x ≡ 0 mod p^k}; primitive generators first."""
    form = smith_mod_prime_power(A, p, k)
    q = p ** k
    gens = [form.V[:, t] % q for t in range(form.rank, form.ncols)]
    for t, e in enumerate(form.valuations):
        if e > 0:
            gens.append(form.V[:, t] * p ** (k - e) % q)
    return gens


def solve_mod_prime_power(A, b, p, k):
    q = p ** k
    form = smith_mod_prime_power(A, p, k, rhs=b)
    y = np.zeros(form.ncols, dtype=np.int64)
    for t, e in enumerate(form.valuations):
        pe = p ** e
        if form.rhs[t] % pe:
            return None
        y[t] = (int(form.rhs[t]) // pe) % (q // pe)
    if form.rhs[form.rank:].any():
        return None
    return matmul_mod(form.V, y.reshape(-1, 1), q).ravel()


# ------------------------------------------------------------
# General Modulus
# ------------------------------------------------------------
def crt_pair(r1, m1, r2, m2):
    """Combine x ≡ r1 (m1), x ≡ r2 (m2) for coprime moduli."""
    inv = int(gmpy2.invert(m1, m2))
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


def solve_mod(A, b, m):
    """One solution of A x ≡ b (mod m), or None; composite m is solved per prime power and recombined."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    x = None
    modulus = 1
    for p, k in prime_power_parts(m):
        q = p ** k
        part = solve_mod_p(A, b, p) if k == 1 else solve_mod_prime_power(A, b, p, k)
        if part is None:
            return None
        if x is None:
            x = [int(v) for v in part]
        else:
            x = [crt_pair(u, modulus, int(v), q) for u, v in zip(x, part)]
        modulus *= q
    return np.array(x, dtype=np.int64)


# ------------------------------------------------------------
# Multimodular Lifting
# ------------------------------------------------------------
def crt_tree(residues, moduli):
    """Combine residue vectors (one per modulus) into one vector mod Π moduli."""
    nodes = [([gmpy2.mpz(int(v)) for v in r], gmpy2.mpz(m)) for r, m in zip(residues, moduli)]
    if not nodes:
        raise RejectedInput("no residues to combine")
    while len(nodes) > 1:
        merged = []
        for i in range(0, len(nodes) - 1, 2):
            (va, ma), (vb, mb) = nodes[i], nodes[i + 1]
            inv = gmpy2.invert(ma, mb)
            mm = ma * mb
            merged.append(([(x + ma * (((y - x) * inv) % mb)) % mm for x, y in zip(va, vb)], mm))
        if len(nodes) % 2:
            merged.append(nodes[-1])
        nodes = merged
    values, modulus = nodes[0]
    return values, modulus


def symmetric_lift(values, modulus):
    half = modulus // 2
    return [int(v - modulus) if v > half else int(v) for v in values]
