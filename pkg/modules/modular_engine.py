# ============================================================
# 🛠 Modular Series Engine — Modular Engine Module
# v1.0 | Residue Series, Lacunary Functions, Lacunary Identities
# ============================================================

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from modules.diagnostics_engine import NonIntegralError, RejectedInput, UnsupportedModulus, log_event
from modules.linalg_engine import solve_mod
from modules.series_engine import (
    IntegerSeries,
    LaurentRationalSeries,
    PowerSeries,
    QPolySeries,
    RationalSeries,
    as_fraction,
    int_convolve,
)

# === CONFIGURATION ===
LACUNARY_KINDS = {"L2": (2, 1), "L3": (3, 1), "L6": (3, 2)}
FIT_MARGIN = 4
TARGET_READINGS = ("exact", "residues")
_INT64_LIMIT = 2 ** 63


# ------------------------------------------------------------
# Residue Arithmetic Kernels
# ------------------------------------------------------------
def _as_residues(values, m):
    return np.array([int(v) % m for v in values], dtype=np.int64)


def mulmod(a, b, size, m):
    """First `size` coefficients of a*b mod m (int64 residue arrays)."""
    out = np.zeros(size, dtype=np.int64)
    a = a[:size]
    b = b[:size]
    if len(a) == 0 or len(b) == 0 or size <= 0:
        return out
    if (m - 1) ** 2 * min(len(a), len(b)) < _INT64_LIMIT:
        prod = np.convolve(a, b)[:size] % m
    else:
        prod = np.array([c % m for c in int_convolve(a.tolist(), b.tolist(), size)], dtype=np.int64)
    out[:len(prod)] = prod
    return out


def inverse_mod(value, m):
    try:
        return pow(int(value), -1, m)
    except ValueError as e:
        raise RejectedInput(f"the modular inverse does not exist ({value} mod {m})") from e


# ------------------------------------------------------------
# Residue Series
# ------------------------------------------------------------
class ModSeries:
    """Truncated series over Z/m; coeffs[k] is the residue of var^k."""

    def __init__(self, coeffs, m, var="w"):
        if m < 2:
            raise UnsupportedModulus(f"modulus must be at least 2, got {m}")
        self.m = int(m)
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.int64:
            arr = coeffs % self.m
        else:
            arr = _as_residues(coeffs, self.m)
        arr.setflags(write=False)
        self.coeffs = arr
        self.var = var

    @property
    def n(self):
        return len(self.coeffs) - 1

    def coefficient(self, k):
        if k > self.n:
            raise RejectedInput(f"coefficient {k} requested beyond truncation order {self.n}")
        return int(self.coeffs[k]) if k >= 0 else 0

    __getitem__ = coefficient

    def tolist(self):
        return [int(c) for c in self.coeffs]

    def is_zero(self):
        return not self.coeffs.any()

    def nonzero_exponents(self):
        return [int(k) for k in np.flatnonzero(self.coeffs)]

    def __repr__(self):
        head = ", ".join(str(int(c)) for c in self.coeffs[:10])
        more = ", ..." if len(self.coeffs) > 10 else ""
        return f"ModSeries(m={self.m}, n={self.n}, [{head}{more}])"

    def __eq__(self, other):
        if not isinstance(other, ModSeries):
            return NotImplemented
        return self.m == other.m and self.n == other.n and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def _check(self, other):
        if isinstance(other, ModSeries) and other.m != self.m:
            raise RejectedInput(f"modulus mismatch: {self.m} vs {other.m}")

    def _like(self, arr):
        return ModSeries(np.asarray(arr, dtype=np.int64), self.m, self.var)

    # --- ring operations ---
    def __add__(self, other):
        if isinstance(other, int):
            arr = self.coeffs.copy()
            arr[0] = (int(arr[0]) + other) % self.m
            return self._like(arr)
        self._check(other)
        size = min(len(self.coeffs), len(other.coeffs))
        return self._like((self.coeffs[:size] + other.coeffs[:size]) % self.m)

    __radd__ = __add__

    def __neg__(self):
        return self._like((-self.coeffs) % self.m)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ModSeries) else -int(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like((self.coeffs * (other % self.m)) % self.m)
        if not isinstance(other, ModSeries):
            return NotImplemented
        self._check(other)
        size = min(len(self.coeffs), len(other.coeffs))
        return self._like(mulmod(self.coeffs, other.coeffs, size, self.m))

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = np.zeros(len(self.coeffs), dtype=np.int64)
        result[0] = 1 % self.m
        base = self.coeffs
        size = len(self.coeffs)
        while e:
            if e & 1:
                result = mulmod(result, base, size, self.m)
            e >>= 1
            if e:
                base = mulmod(base, base, size, self.m)
        return self._like(result)

    def inverse(self):
        """Newton iteration b <- b(2 - a·b); the constant term must be a unit."""
        size = len(self.coeffs)
        inv0 = inverse_mod(self.coeffs[0], self.m)
        b = np.array([inv0], dtype=np.int64)
        prec = 1
        while prec < size:
            prec = min(2 * prec, size)
            ab = (-mulmod(self.coeffs, b, prec, self.m)) % self.m
            ab[0] = (ab[0] + 2) % self.m
            b = mulmod(b, ab, prec, self.m)
        return self._like(b)

    # --- structural operations ---
    def substitute(self, k, c=1):
        """Series after var -> c·var^k; known through (n+1)k - 1."""
        size = (self.n + 1) * k
        out = np.zeros(size, dtype=np.int64)
        powers = [pow(c, i, self.m) for i in range(self.n + 1)]
        out[::k] = (self.coeffs * np.array(powers, dtype=np.int64)) % self.m
        return self._like(out)

    def theta(self):
        ks = np.arange(len(self.coeffs), dtype=np.int64) % self.m
        return self._like((self.coeffs * ks) % self.m)

    def derivative(self):
        ks = np.arange(1, len(self.coeffs), dtype=np.int64) % self.m
        return self._like((self.coeffs[1:] * ks) % self.m)

    def shift(self, k):
        if k < 0:
            if self.coeffs[:-k].any():
                raise RejectedInput("shift would drop nonzero coefficients")
            return self._like(self.coeffs[-k:])
        return self._like(np.concatenate([np.zeros(k, dtype=np.int64), self.coeffs]))

    def truncate(self, n):
        if n > self.n:
            raise RejectedInput(f"cannot extend a series of order {self.n} to {n}")
        return self._like(self.coeffs[:n + 1])

    def lift(self):
        """Integer series of the residues in [0, m)."""
        return IntegerSeries(self.tolist(), self.var)


def polynomial_mod(coeffs, m, n, var="w"):
    """Polynomial (ascending integer coefficients) as a ModSeries of order n."""
    arr = np.zeros(n + 1, dtype=np.int64)
    for k, c in enumerate(coeffs[:n + 1]):
        arr[k] = int(c) % m
    return ModSeries(arr, m, var)


# ------------------------------------------------------------
# Reduction
# ------------------------------------------------------------
def reduce(s, m):
    """Coefficientwise residues of an exact (or finer modular) series."""
    if isinstance(s, ModSeries):
        if s.m % m:
            raise UnsupportedModulus(f"cannot reduce a series mod {s.m} to mod {m}")
        return ModSeries(s.coeffs % m, m, s.var)
    if isinstance(s, (QPolySeries, LaurentRationalSeries)):
        raise RejectedInput(f"{type(s).__name__} has no residue image")
    if m < 2:
        raise UnsupportedModulus(f"modulus must be at least 2, got {m}")
    if isinstance(s, IntegerSeries):
        out = [c % m for c in s.coeffs]
    elif isinstance(s, RationalSeries):
        out = []
        for k, c in enumerate(s.coeffs):
            try:
                out.append(c.numerator * pow(c.denominator, -1, m) % m)
            except ValueError as e:
                raise RejectedInput(f"the modular inverse does not exist for coefficient {k} = {c} mod {m}") from e
    else:
        raise RejectedInput(f"cannot reduce {type(s).__name__}")
    log_event("REDUCE", f"reduced order {s.n} series mod {m}", "DEBUG")
    return ModSeries(out, m, s.var)


# ------------------------------------------------------------
# Lacunary Functions
# ------------------------------------------------------------
def lacunary_exponents(kind, n):
    if kind not in LACUNARY_KINDS:
        raise RejectedInput(f"unknown lacunary kind {kind!r}")
    base, e = LACUNARY_KINDS[kind]
    out = []
    while e <= n:
        out.append(e)
        e *= base
    return out


def lacunary_series(kind, m, n):
    """Truncation of the lacunary series of the given kind, reduced mod m."""
    if n < 1:
        raise RejectedInput("order must be at least 1")
    arr = np.zeros(n + 1, dtype=np.int64)
    arr[lacunary_exponents(kind, n)] = 1 % m
    return ModSeries(arr, m)


@dataclass(frozen=True)
class LacunaryTerm:
    coeff: Fraction
    basis: str
    poly: tuple = (1,)
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_fraction(self.coeff))
        object.__setattr__(self, "poly", tuple(int(c) for c in self.poly))
        den = self.coeff.denominator
        if den & (den - 1):
            raise RejectedInput(f"coefficient {self.coeff} has a denominator that is not a power of 2")
        if self.basis != "POLY":
            if self.basis not in LACUNARY_KINDS:
                raise RejectedInput(f"unknown basis {self.basis!r}")
            if self.power < 1:
                raise RejectedInput("lacunary powers must be at least 1")

    def exact(self, top):
        """Sparse exact coefficients {exponent: Fraction} up to exponent `top`."""
        if self.basis == "POLY":
            base = {0: 1}
        else:
            lac = {e: 1 for e in lacunary_exponents(self.basis, top)}
            base = {0: 1}
            for _ in range(self.power):
                base = _sparse_mul(base, lac, top)
        poly = {k: c for k, c in enumerate(self.poly) if c}
        return {k: self.coeff * v for k, v in _sparse_mul(base, poly, top).items()}

    def __str__(self):
        poly = _poly_str(self.poly)
        coeff = "" if self.coeff == 1 else f"{self.coeff}·"
        if self.basis == "POLY":
            return f"{coeff}({poly})" if coeff else poly
        lac = self.basis if self.power == 1 else f"{self.basis}^{self.power}"
        mult = "" if self.poly == (1,) else f"({poly})·"
        return f"{coeff}{mult}{lac}"


def _sparse_mul(a, b, top):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if i + j <= top:
                out[i + j] = out.get(i + j, 0) + x * y
    return out


def _poly_str(coeffs, var="w"):
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if k == 0:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class LacunaryExpr:
    terms: tuple
    prefactor_exp: int = 0

    def exact_coefficients(self, n):
        """Exact coefficients of the expression for exponents prefactor_exp..n."""
        top = n - self.prefactor_exp
        total = {}
        for term in self.terms:
            for k, v in term.exact(top).items():
                total[k] = total.get(k, 0) + v
        return {k + self.prefactor_exp: Fraction(v) for k, v in total.items() if v}

    def to_json(self):
        return {
            "prefactor_exp": self.prefactor_exp,
            "terms": [
                {"coeff": str(t.coeff), "basis": t.basis, "poly": list(t.poly), "power": t.power}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, obj):
        terms = tuple(
            LacunaryTerm(as_fraction(str(t["coeff"])), t["basis"], tuple(t.get("poly", [1])), int(t.get("power", 1)))
            for t in obj["terms"]
        )
        return cls(terms, int(obj.get("prefactor_exp", 0)))

    def __str__(self):
        body = " + ".join(str(t) for t in self.terms) or "0"
        if self.prefactor_exp == 0:
            return body
        return f"w^{self.prefactor_exp}·({body})"


def lacunary_target(S, m, scale=1, wexp=0, offset=0, reading="exact"):
    """
    scale·w^wexp·(S + offset) mod m.

    "exact" scales the exact coefficients and asserts integrality before reducing.
    "residues" divides the representatives in [0, m) by the scale's denominator,
    which must divide each of them, then multiplies by its numerator.
    """
    if reading not in TARGET_READINGS:
        raise RejectedInput(f"unknown target reading {reading!r}; expected one of {TARGET_READINGS}")
    scale = as_fraction(scale)
    out = [0] * wexp
    for k in range(S.n + 1):
        c = as_fraction(S.coefficient(k)) + (offset if k == 0 else 0)
        if reading == "residues":
            if c.denominator != 1:
                raise NonIntegralError(f"coefficient {k} = {c} has no residue mod {m}")
            r = c.numerator % m
            if r % scale.denominator:
                raise NonIntegralError(f"residue {r} of coefficient {k} is not divisible by {scale.denominator}")
            out.append(r // scale.denominator * scale.numerator)
            continue
        v = scale * c
        if v.denominator != 1:
            raise NonIntegralError(f"scaled coefficient {k} = {v} is not an integer")
        out.append(v.numerator)
    return ModSeries(out, m, S.var)


def verify_lacunary_identity(expr, target):
    """True iff expr ≡ target coefficientwise through target.n."""
    exact = expr.exact_coefficients(target.n)
    for k, v in sorted(exact.items()):
        if v.denominator != 1:
            raise NonIntegralError(f"coefficient of w^{k} evaluates to {v}")
    if any(v for k, v in exact.items() if k < 0):
        return False
    image = np.zeros(target.n + 1, dtype=np.int64)
    for k, v in exact.items():
        if k < 0:
            continue
        image[k] = v.numerator % target.m
    ok = bool(np.array_equal(image, target.coeffs))
    log_event("VERIFY", f"lacunary identity mod {target.m} to order {target.n}: {ok}", "DEBUG")
    return ok


@dataclass(frozen=True)
class LacunaryAnsatz:
    max_degree: int
    lacunary: tuple = (("L3", 1),)
    prefactor_exp: int = 0
    lacunary_degree: int = 0


def fit_lacunary(target, ansatz):
    """Solve for ansatz coefficients over Z/m; the result is verified on the whole target."""
    m = target.m
    d = ansatz.max_degree
    if target.n < FIT_MARGIN * max(d, 1):
        raise RejectedInput(f"target order {target.n} is below the margin {FIT_MARGIN}·{d}")
    j = ansatz.prefactor_exp
    rows = target.n - j + 1
    columns = []
    labels = []
    for kind, power in ansatz.lacunary:
        lac = lacunary_series(kind, m, rows - 1) ** power
        for t in range(ansatz.lacunary_degree + 1):
            columns.append(lac.shift(t).coeffs[:rows])
            labels.append((kind, power, t))
    for t in range(d + 1):
        col = np.zeros(rows, dtype=np.int64)
        if t < rows:
            col[t] = 1
        columns.append(col)
        labels.append(("POLY", 0, t))
    unknowns = len(columns)
    if rows < unknowns + FIT_MARGIN:
        raise RejectedInput(f"{rows} equations cannot determine {unknowns} unknowns")
    A = np.stack([np.pad(c, (0, rows - len(c))) for c in columns], axis=1) % m
    b = np.array([target.coefficient(e + j) if e + j >= 0 else 0 for e in range(rows)], dtype=np.int64)
    x = solve_mod(A, b, m)
    if x is None:
        log_event("GUESS", f"lacunary ansatz has no solution mod {m}", "INFO")
        return None
    expr = _expr_from_solution(x, labels, j)
    if not verify_lacunary_identity(expr, target):
        return None
    log_event("GUESS", f"lacunary identity mod {m}: {expr}")
    return expr


def _expr_from_solution(x, labels, prefactor_exp):
    grouped = {}
    poly = []
    for value, (kind, power, t) in zip(x, labels):
        value = int(value)
        if kind == "POLY":
            poly.append(value)
            continue
        grouped.setdefault((kind, power), []).append(value)
    terms = []
    for (kind, power), coeffs in grouped.items():
        coeffs = _trim(coeffs)
        if not any(coeffs):
            continue
        g = coeffs[0] if len(coeffs) == 1 else 1
        terms.append(LacunaryTerm(Fraction(g), kind, (1,) if len(coeffs) == 1 else tuple(coeffs), power))
    poly = _trim(poly)
    if any(poly):
        terms.append(LacunaryTerm(Fraction(1), "POLY", tuple(poly), 0))
    return LacunaryExpr(tuple(terms), prefactor_exp)


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class LacunaryIdentity:
    """A catalogued identity: expr ≡ scale·w^wexp·(S + offset) mod m."""

    name: str
    modulus: int
    expr: LacunaryExpr
    scale: Fraction = Fraction(1)
    wexp: int = 0
    offset: int = 0
    reading: str = "exact"
    meta: dict = field(default_factory=dict, compare=False)

    def target(self, S):
        return lacunary_target(S, self.modulus, self.scale, self.wexp, self.offset, self.reading)

    def certify(self, S):
        return verify_lacunary_identity(self.expr, self.target(S))


# ------------------------------------------------------------
# Power and Support Checks
# ------------------------------------------------------------
def power_identity_check(s, e, p_num, p_den):
    """True iff s^e · p_den ≡ p_num through the truncation order of s."""
    if e < 1:
        raise RejectedInput("exponent must be positive")
    lhs = (s ** e) * polynomial_mod(p_den, s.m, s.n, s.var)
    ok = lhs == polynomial_mod(p_num, s.m, s.n, s.var)
    log_event("VERIFY", f"power identity e={e} mod {s.m} to order {s.n}: {ok}", "DEBUG")
    return ok


def support_check(s, k):
    """True iff every nonzero coefficient sits at an exponent divisible by k."""
    if k < 2:
        raise RejectedInput("support step must be at least 2")
    return all(e % k == 0 for e in s.nonzero_exponents())


def frobenius_identity_holds(s, p):
    """s(w)^p ≡ s(w^p) mod p to truncation."""
    lhs = s ** p
    rhs = s.substitute(p).truncate(s.n)
    return lhs == rhs
