# ============================================================
# 🛠 Modular Series Engine — Series Engine Module
# v1.0 | Exact Power Series, Tutte Recurrence, Hypergeometric Terms
# ============================================================

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2
import numpy as np
from sympy import Basic, Poly, Rational, Symbol, primefactors
from sympy.polys.polyerrors import CoercionFailed, ExactQuotientFailed

from modules.diagnostics_engine import ConsistencyError, RejectedInput, log_event

# === CONFIGURATION ===
DEFAULT_ORDER = 4000
KRONECKER_THRESHOLD = 48
DEFAULT_RESCALE_BOUND = 32
GROWTH_METHODS = ("ratio", "regression")

Q = Symbol("q")
_MPZ = type(gmpy2.mpz(0))


class _SymbolicQ:
    def __repr__(self):
        return "SYMBOLIC"


SYMBOLIC = _SymbolicQ()


# ------------------------------------------------------------
# Coefficient Coercion
# ------------------------------------------------------------
def as_fraction(c) -> Fraction:
    """Exact rational value of an int, Fraction, str, mpz or sympy rational."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _MPZ)):
        return Fraction(int(c))
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, Basic) and c.is_Rational:
        return Fraction(int(c.p), int(c.q))
    raise RejectedInput(f"not an exact rational coefficient: {c!r}")


def as_int(c) -> int:
    if isinstance(c, int):
        return c
    f = as_fraction(c)
    if f.denominator != 1:
        raise RejectedInput(f"non-integral coefficient {f}")
    return f.numerator


def as_qpoly(c) -> Poly:
    if isinstance(c, Poly) and c.gens == (Q,) and c.domain.is_ZZ:
        return c
    try:
        expr = c.as_expr() if isinstance(c, Poly) else c
        return Poly(expr, Q, domain="ZZ")
    except CoercionFailed as e:
        raise RejectedInput(f"coefficient {c!r} is not an integer polynomial in q") from e


def _is_scalar(x):
    return isinstance(x, (int, Fraction, Poly, _MPZ))


# ------------------------------------------------------------
# Convolution Kernels
# ------------------------------------------------------------
def _kronecker_nonneg(a, b, size):
    """First `size` coefficients of a*b for nonnegative integer lists (byte-packed substitution)."""
    top = min(len(a), len(b)) * max(a) * max(b)
    if top == 0:
        return [0] * size
    width = top.bit_length() // 8 + 1
    pa = gmpy2.mpz(int.from_bytes(b"".join(int(c).to_bytes(width, "little") for c in a), "little"))
    pb = gmpy2.mpz(int.from_bytes(b"".join(int(c).to_bytes(width, "little") for c in b), "little"))
    raw = int(pa * pb).to_bytes(width * (len(a) + len(b)), "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(size)]


def _naive_convolve(a, b, size, zero):
    out = [zero] * size
    for i, x in enumerate(a[:size]):
        if not x:
            continue
        for j, y in enumerate(b[:size - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def int_convolve(a, b, size):
    """Truncated product of two integer coefficient lists."""
    a = list(a[:size])
    b = list(b[:size])
    if not a or not b:
        return [0] * size
    if min(len(a), len(b)) < KRONECKER_THRESHOLD:
        return _naive_convolve(a, b, size, 0)
    a_pos = [max(c, 0) for c in a]
    a_neg = [max(-c, 0) for c in a]
    b_pos = [max(c, 0) for c in b]
    b_neg = [max(-c, 0) for c in b]
    out = [0] * size
    for x, y, sign in ((a_pos, b_pos, 1), (a_neg, b_neg, 1), (a_pos, b_neg, -1), (a_neg, b_pos, -1)):
        if any(x) and any(y):
            part = _kronecker_nonneg(x, y, size)
            out = [u + sign * v for u, v in zip(out, part)]
    return out


def fraction_convolve(a, b, size):
    """Truncated product of two Fraction lists via a common denominator."""
    a = list(a[:size])
    b = list(b[:size])
    da = math.lcm(*(c.denominator for c in a)) if a else 1
    db = math.lcm(*(c.denominator for c in b)) if b else 1
    prod = int_convolve([c.numerator * (da // c.denominator) for c in a],
                        [c.numerator * (db // c.denominator) for c in b], size)
    den = da * db
    return [Fraction(v, den) for v in prod]


# ------------------------------------------------------------
# Power Series Types
# ------------------------------------------------------------
class PowerSeries:
    """Truncated power series; coefficients of var^lead .. var^n are known."""

    _rank = 0
    lead = 0

    def __init__(self, coeffs, var="w", lead=0):
        if lead < 0:
            raise RejectedInput(f"{type(self).__name__} cannot start at exponent {lead}")
        self.coeffs = tuple([self._zero()] * lead + [self._coerce(c) for c in coeffs])
        self.var = var

    # --- construction helpers ---
    @staticmethod
    def _coerce(c):
        raise NotImplementedError

    @staticmethod
    def _zero():
        return 0

    @classmethod
    def _make(cls, coeffs, var, lead):
        if lead < 0 and cls is not LaurentRationalSeries:
            return LaurentRationalSeries(coeffs, var, lead)
        return cls(coeffs, var, lead)

    @classmethod
    def constant(cls, c, n, var="w"):
        return cls([c] + [cls._zero()] * n, var)

    # --- accessors ---
    @property
    def n(self):
        return self.lead + len(self.coeffs) - 1

    def coefficient(self, k):
        if k > self.n:
            raise RejectedInput(f"coefficient {k} requested beyond truncation order {self.n}")
        if k < self.lead:
            return self._zero()
        return self.coeffs[k - self.lead]

    __getitem__ = coefficient

    def tolist(self):
        return [self.coefficient(k) for k in range(min(self.lead, 0), self.n + 1)]

    def is_zero(self):
        return not any(self.coeffs)

    def valuation(self):
        """Exponent of the first nonzero coefficient, or None for the zero series."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.lead + i
        return None

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"{type(self).__name__}(var={self.var}, lead={self.lead}, n={self.n}, [{head}{more}])"

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        if self.n != other.n:
            return False
        lo = min(self.lead, other.lead)
        return all(self.coefficient(k) == other.coefficient(k) for k in range(lo, self.n + 1))

    __hash__ = None

    # --- ring operations ---
    def _constant_like(self, c):
        cls = type(self)
        if isinstance(c, Fraction) and c.denominator != 1 and cls is IntegerSeries:
            cls = RationalSeries
        if isinstance(c, Poly) and cls is IntegerSeries:
            cls = QPolySeries
        if cls is LaurentRationalSeries:
            return LaurentRationalSeries([c] + [0] * max(self.n, 0), self.var, 0)
        return cls.constant(c, max(self.n, 0), self.var)

    def __add__(self, other):
        if _is_scalar(other):
            other = self._constant_like(other)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        cls = _promote(self, other)
        lead = min(self.lead, other.lead)
        n = min(self.n, other.n)
        coeffs = [self.coefficient(k) + other.coefficient(k) for k in range(lead, n + 1)]
        return cls._make(coeffs, self.var, lead)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._make([-c for c in self.coeffs], self.var, self.lead)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        cls = type(self)
        if isinstance(c, Fraction):
            if c.denominator == 1:
                c = c.numerator
            elif cls is IntegerSeries:
                cls = RationalSeries
            elif cls is QPolySeries:
                raise RejectedInput("QPolySeries only scales by integers and integer polynomials")
        elif isinstance(c, Poly):
            if cls is IntegerSeries:
                cls = QPolySeries
            elif cls is not QPolySeries:
                raise RejectedInput("polynomial-in-q scalars need an integer or q-polynomial series")
        return cls._make([x * c for x in self.coeffs], self.var, self.lead)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        cls = _promote(self, other)
        lead = self.lead + other.lead
        n = min(self.n + other.lead, other.n + self.lead)
        size = n - lead + 1
        if size <= 0:
            return cls._make([], self.var, lead)
        return cls._make(cls._convolve(self.coeffs, other.coeffs, size), self.var, lead)

    def __rmul__(self, other):
        return self.__mul__(other)

    @staticmethod
    def _convolve(a, b, size):
        return _naive_convolve(list(a), list(b), size, 0)

    def inverse(self):
        """Multiplicative inverse; the coefficient at the lead exponent must be invertible."""
        if not self.coeffs or not self.coeffs[0]:
            raise RejectedInput("series has a zero constant term and cannot be inverted")
        c0 = self.coeffs[0]
        cls = type(self)
        if cls is IntegerSeries and c0 not in (1, -1):
            cls = RationalSeries
        if cls is QPolySeries:
            if c0 not in (Poly(1, Q, domain="ZZ"), Poly(-1, Q, domain="ZZ")):
                raise RejectedInput("q-polynomial series inverts only with constant term ±1")
            inv0 = c0
        elif cls is IntegerSeries:
            inv0 = c0
        else:
            inv0 = 1 / as_fraction(c0)
        a = self.coeffs
        size = len(a)
        out = [inv0]
        for k in range(1, size):
            acc = self._zero()
            for j in range(1, k + 1):
                if a[j]:
                    acc = acc + a[j] * out[k - j]
            out.append(-(acc * inv0))
        return cls._make(out, self.var, -self.lead)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, _MPZ)):
            if other == 0:
                raise RejectedInput("division of a series by zero")
            return self.scale(1 / as_fraction(other))
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        rel = self.n - self.lead
        one = Poly(1, Q, domain="ZZ") if type(self) is QPolySeries else 1
        result = type(self)._make([one] + [self._zero()] * rel, self.var, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # --- structural operations ---
    def substitute(self, c, k=1):
        """Series in var after var -> c·var^k."""
        if k < 1:
            raise RejectedInput("substitution exponent must be a positive integer")
        cls = type(self)
        if isinstance(c, Fraction) and c.denominator == 1:
            c = c.numerator
        if isinstance(c, Fraction) and cls is IntegerSeries:
            cls = RationalSeries
        lead = self.lead * k
        n = (self.n + 1) * k - 1
        out = [self._zero()] * (n - lead + 1)
        for i, a in enumerate(self.coeffs):
            e = self.lead + i
            factor = Fraction(c) ** e if e < 0 else c ** e
            out[i * k] = a * factor
        return cls._make(out, self.var, lead)

    def derivative(self):
        coeffs = [(self.lead + i) * a for i, a in enumerate(self.coeffs)]
        if self.lead == 0:
            return type(self)._make(coeffs[1:], self.var, 0)
        return type(self)._make(coeffs, self.var, self.lead - 1)

    def theta(self):
        """Homogeneous derivative var·d/dvar; keeps the truncation order."""
        return type(self)._make([(self.lead + i) * a for i, a in enumerate(self.coeffs)], self.var, self.lead)

    def shift(self, k):
        """Multiply by var^k."""
        return type(self)._make(list(self.coeffs), self.var, self.lead + k)

    def truncate(self, n):
        if n > self.n:
            raise RejectedInput(f"cannot extend a series of order {self.n} to {n}")
        return type(self)._make(list(self.coeffs[:max(n - self.lead + 1, 0)]), self.var, self.lead)


class IntegerSeries(PowerSeries):
    domain = "int"
    _rank = 0

    @staticmethod
    def _coerce(c):
        return as_int(c)

    @staticmethod
    def _convolve(a, b, size):
        return int_convolve(a, b, size)

    def to_rational(self):
        return RationalSeries(self.coeffs, self.var)

    def as_integer_series(self):
        return self


class RationalSeries(PowerSeries):
    domain = "rat"
    _rank = 1

    @staticmethod
    def _coerce(c):
        return as_fraction(c)

    @staticmethod
    def _zero():
        return Fraction(0)

    @staticmethod
    def _convolve(a, b, size):
        return fraction_convolve(a, b, size)

    def to_rational(self):
        return self

    def as_integer_series(self):
        """Cast to IntegerSeries; every denominator must be 1."""
        bad = next((k for k, c in enumerate(self.coeffs) if c.denominator != 1), None)
        if bad is not None:
            raise RejectedInput(f"coefficient {bad} = {self.coeffs[bad]} is not an integer")
        return IntegerSeries([c.numerator for c in self.coeffs], self.var)


class LaurentRationalSeries(PowerSeries):
    """Rational series allowed to start at a negative exponent."""

    domain = "laurent"
    _rank = 2

    def __init__(self, coeffs, var="w", lead=0):
        coeffs = [as_fraction(c) for c in coeffs]
        skip = 0
        while skip < len(coeffs) and coeffs[skip] == 0:
            skip += 1
        if skip == len(coeffs):
            skip = 0
        self.coeffs = tuple(coeffs[skip:])
        self.lead = lead + skip
        self.var = var

    @staticmethod
    def _coerce(c):
        return as_fraction(c)

    @staticmethod
    def _zero():
        return Fraction(0)

    @staticmethod
    def _convolve(a, b, size):
        return fraction_convolve(a, b, size)

    def to_power_series(self):
        """Plain RationalSeries when no negative exponent remains."""
        if self.lead < 0 and not self.is_zero():
            raise RejectedInput(f"series has a pole of order {-self.lead}")
        return RationalSeries([self.coefficient(k) for k in range(0, self.n + 1)], self.var)


class QPolySeries(PowerSeries):
    """Series whose coefficients are integer polynomials in q."""

    domain = "qpoly"
    _rank = 3

    @staticmethod
    def _coerce(c):
        return as_qpoly(c)

    @staticmethod
    def _zero():
        return Poly(0, Q, domain="ZZ")

    @staticmethod
    def _convolve(a, b, size):
        return _naive_convolve(list(a), list(b), size, Poly(0, Q, domain="ZZ"))

    def evaluate(self, q):
        """Specialise q to an exact rational value."""
        qf = as_fraction(q)
        point = Rational(qf.numerator, qf.denominator)
        values = [as_fraction(c.eval(point)) for c in self.coeffs]
        series = RationalSeries(values, self.var)
        if all(v.denominator == 1 for v in values):
            return series.as_integer_series()
        return series


def _promote(a, b):
    ranks = {type(a), type(b)}
    if QPolySeries in ranks and (RationalSeries in ranks or LaurentRationalSeries in ranks):
        raise RejectedInput("cannot mix q-polynomial and rational series")
    return max((type(a), type(b)), key=lambda c: c._rank)


# ------------------------------------------------------------
# Tutte Recurrence
# ------------------------------------------------------------
def _pair_weight(m, i):
    """Combined weight of the symmetric terms i and m+1-i in the quadratic sum."""
    j = m + 1 - i
    if i == j:
        return i * (i + 1) * (3 * m - 3 * i + 1)
    return i * (i + 1) * (3 * m - 3 * i + 1) + j * (j + 1) * (3 * i - 2)


def _quadratic_sum(h, m):
    total = 0
    for i in range(1, (m + 1) // 2 + 1):
        total = total + _pair_weight(m, i) * (h[i + 1] * h[m + 2 - i])
    return total


def tutte_series(q, n):
    """Coefficients h_0..h_n of Tutte's q-coloured triangulation series H(w)."""
    if n < 2:
        raise RejectedInput(f"order must be at least 2, got {n}")
    if q is SYMBOLIC:
        return _tutte_symbolic(n)
    qf = as_fraction(q)
    if qf == 0:
        raise RejectedInput("q = 0 makes the recurrence divide by zero")
    log_event("SERIES", f"tutte_series q={qf} n={n}")
    if qf.denominator == 1:
        qi = qf.numerator
        h = [gmpy2.mpz(0), gmpy2.mpz(0), gmpy2.mpz(qi * (qi - 1))]
        for m in range(1, n - 1):
            num = qi * (qi - 4) * (3 * m - 1) * (3 * m - 2) * h[m + 1] + 2 * _quadratic_sum(h, m)
            div = qi * (m + 1) * (m + 2)
            quo, rem = gmpy2.f_divmod(num, div)
            if rem:
                raise ConsistencyError(f"inexact division at h_{m + 2} for q={qi}")
            h.append(quo)
        return IntegerSeries([int(c) for c in h[:n + 1]])
    h = [Fraction(0), Fraction(0), qf * (qf - 1)]
    for m in range(1, n - 1):
        num = qf * (qf - 4) * (3 * m - 1) * (3 * m - 2) * h[m + 1] + 2 * _quadratic_sum(h, m)
        h.append(num / (qf * (m + 1) * (m + 2)))
    return RationalSeries(h[:n + 1])


def _tutte_symbolic(n):
    log_event("SERIES", f"tutte_series q=SYMBOLIC n={n}")
    qp = Poly(Q, Q, domain="ZZ")
    zero = Poly(0, Q, domain="ZZ")
    h = [zero, zero, qp * (qp - 1)]
    for m in range(1, n - 1):
        total = zero
        for i in range(1, (m + 1) // 2 + 1):
            total = total + (h[i + 1] * h[m + 2 - i]) * _pair_weight(m, i)
        num = qp * (qp - 4) * h[m + 1] * ((3 * m - 1) * (3 * m - 2)) + total * 2
        try:
            h.append(num.exquo(qp).exquo_ground((m + 1) * (m + 2)))
        except ExactQuotientFailed as e:
            raise ConsistencyError(f"inexact polynomial division at h_{m + 2}") from e
    return QPolySeries(h[:n + 1])


def normalized_series(H, divisor=12):
    """S_k = h_{k+2}/divisor (the q = 4 series divided by 12·w²)."""
    if H.coefficient(0) or H.coefficient(1):
        raise RejectedInput("series must start at w^2")
    out = []
    for k in range(2, H.n + 1):
        c = as_int(H.coefficient(k))
        if c % divisor:
            raise RejectedInput(f"h_{k} = {c} is not divisible by {divisor}")
        out.append(c // divisor)
    return IntegerSeries(out, H.var)


# ------------------------------------------------------------
# Solution Family of the q-Equation
# ------------------------------------------------------------
def family_solution(q, h1, n):
    """Solution of the q-equation with h_0 = 0 and prescribed h_1 (rational arithmetic)."""
    q = as_fraction(q)
    h1 = as_fraction(h1)
    if q == 0:
        raise RejectedInput("q must be nonzero")
    lead = q + 4 * h1
    if lead == 0:
        raise RejectedInput("q + 4·h1 = 0 is a singular parameter")
    h = [Fraction(0), h1]
    for k in range(1, n):
        acc = 2 * q * q * (1 - q) if k == 1 else Fraction(0)
        for a in range(2, k + 1):
            b = k + 2 - a
            acc += (10 - 6 * a) * b * (b - 1) * h[a] * h[b]
        acc += q * (4 - q) * (3 * k - 4) * (3 * k - 5) * h[k]
        h.append(-acc / (k * (k + 1) * lead))
    return RationalSeries(h[:n + 1])


def polynomial_solutions(q, n):
    """The two polynomial solutions reached when U = 0 or V = 0."""
    q = as_fraction(q)
    if q in (0, 4):
        raise RejectedInput("polynomial solutions need q not in {0, 4}")
    if n < 2:
        raise RejectedInput("order must be at least 2")
    first = [0, -q * (q - 1) / (q - 4)] + [0] * (n - 1)
    second = [0, -q * (q - 2) / (2 * (q - 4)), -q * (q - 4) / 2] + [0] * (n - 2)
    return RationalSeries(first), RationalSeries(second)


def scaled_family(F, A):
    """A³·F(w/A²), the scaling image of a solution of the reduced q = 4 equation."""
    A = as_fraction(A)
    if A == 0:
        raise RejectedInput("scale parameter must be nonzero")
    return F.to_rational().substitute(1 / (A * A), 1).scale(A ** 3)


# ------------------------------------------------------------
# Hypergeometric and Ratio Series
# ------------------------------------------------------------
def hypergeometric_series(upper, lower, scale, n, var="x"):
    """pFq(upper; lower; scale·x) truncated at x^n, exact rationals."""
    upper = [as_fraction(u) for u in upper]
    lower = [as_fraction(v) for v in lower]
    for v in lower:
        if v <= 0 and v.denominator == 1:
            raise RejectedInput(f"lower parameter {v} is a nonpositive integer")
    scale = as_fraction(scale)
    c = Fraction(1)
    out = [c]
    for k in range(n):
        num = Fraction(1)
        for u in upper:
            num *= u + k
        den = Fraction(k + 1)
        for v in lower:
            den *= v + k
        c = c * num * scale / den
        out.append(c)
    return RationalSeries(out, var)


def ratio_series(num, den):
    """num/den to the common truncation order."""
    if not den.coefficient(0):
        raise RejectedInput("denominator series has a zero constant term")
    return num / den


def complementary_period_series(n):
    """Power-series part y_0 of the complementary elliptic period (even in x)."""
    if n < 0:
        raise RejectedInput("order must be nonnegative")

    def q4(t):
        return (t + 1) ** 3 * (t + 3)

    def q2(t):
        return -(t * t * (t - 1) * (t + 1) + t * (t + 1) ** 2 * (t + 2))

    def q0(t):
        return t ** 3 * (t - 2)

    c = [Fraction(0), Fraction(0), Fraction(1, 4), Fraction(0)]
    for m in range(4, n + 1):
        c.append(-(q2(m - 2) * c[m - 2] + q4(m - 4) * c[m - 4]) / q0(m))
    return RationalSeries(c[:n + 1], "x")


# ------------------------------------------------------------
# Growth and Integrality Diagnostics
# ------------------------------------------------------------
@dataclass(frozen=True)
class GrowthEstimate:
    lambda_: float
    radius: float
    exponent: Optional[float]
    window: tuple


def growth_estimate(s, window=None, method="ratio"):
    """
    Exponential growth λ of |s_k| over a window of indices, radius 1/λ.

    "ratio" takes the geometric mean of the consecutive ratios s_{k+1}/s_k, i.e.
    |s_hi/s_lo|^(1/(hi-lo)). "regression" fits log|s_k| against 1, k and log k,
    which also yields the singular exponent.
    """
    if method not in GROWTH_METHODS:
        raise RejectedInput(f"unknown growth method {method!r}; expected one of {GROWTH_METHODS}")
    lo, hi = window if window is not None else (s.n // 2, s.n)
    if lo < 1 or hi > s.n or hi - lo < 2:
        raise RejectedInput(f"window {lo}..{hi} is not inside the series 1..{s.n}")
    values = [s.coefficient(k) for k in range(lo, hi + 1)]
    zero = next((lo + i for i, v in enumerate(values) if v == 0), None)
    if zero is not None:
        raise RejectedInput(f"zero coefficient at index {zero} inside the window")
    if method == "ratio":
        lam = math.exp((_log_abs(values[-1]) - _log_abs(values[0])) / (hi - lo))
        return GrowthEstimate(lam, 1.0 / lam, None, (lo, hi))
    ks = np.arange(lo, hi + 1, dtype=float)
    logs = np.array([_log_abs(v) for v in values])
    design = np.column_stack([np.ones_like(ks), ks, np.log(ks)])
    coef, *_ = np.linalg.lstsq(design, logs, rcond=None)
    lam = float(np.exp(coef[1]))
    return GrowthEstimate(lam, 1.0 / lam, float(-coef[2] - 1.0), (lo, hi))


def _log_abs(v):
    f = as_fraction(v)
    return math.log(abs(f.numerator)) - math.log(f.denominator)


@dataclass(frozen=True)
class IntegralityReport:
    bounded_so_far: bool
    clearing_factor: Optional[int]
    denominator_primes: frozenset
    first_nonintegral_index: Optional[int]


def integrality_check(s, rescale_bound=DEFAULT_RESCALE_BOUND):
    """Can x -> c·x (c ≤ rescale_bound) clear every denominator at this truncation?"""
    coeffs = [as_fraction(s.coefficient(k)) for k in range(0, s.n + 1)]
    primes = set()
    for c in coeffs:
        if c.denominator != 1:
            primes.update(primefactors(c.denominator))
    if not primes:
        return IntegralityReport(True, 1, frozenset(), None)
    furthest = 0
    for factor in range(1, rescale_bound + 1):
        failing = next((k for k, c in enumerate(coeffs) if (c * factor ** k).denominator != 1), None)
        if failing is None:
            return IntegralityReport(True, factor, frozenset(primes), None)
        furthest = max(furthest, failing)
    return IntegralityReport(False, None, frozenset(primes), furthest)
