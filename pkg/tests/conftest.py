import random
from fractions import Fraction

import pytest

from modules.diagnostics_engine import clear_event_log
from modules.series_engine import (
    IntegerSeries,
    hypergeometric_series,
    normalized_series,
    tutte_series,
)

SERIES_ORDER = 600
DEEP_ORDER = 3000


@pytest.fixture(scope="session")
def tutte_q4():
    """H(w) at q = 4 through w^(SERIES_ORDER + 2)."""
    return tutte_series(4, SERIES_ORDER + 2)


@pytest.fixture(scope="session")
def S(tutte_q4):
    return normalized_series(tutte_q4)


@pytest.fixture(scope="session")
def tutte_q4_deep():
    """H(w) at q = 4 through w^(DEEP_ORDER + 2), for the slow checks."""
    return tutte_series(4, DEEP_ORDER + 2)


@pytest.fixture(scope="session")
def S_deep(tutte_q4_deep):
    return normalized_series(tutte_q4_deep)


@pytest.fixture(scope="session")
def central_binomial():
    """(1 - 4w)^(-1/2) = Σ C(2k, k) w^k."""
    out = [1]
    for k in range(1, 120):
        out.append(out[-1] * 2 * (2 * k - 1) // k)
    return IntegerSeries(out)


@pytest.fixture(scope="session")
def elliptic_2f1():
    """2F1([1/2, 1/2], [1], 16w) as an integer series in w."""
    s = hypergeometric_series([Fraction(1, 2), Fraction(1, 2)], [1], 16, 200, var="w")
    return s.as_integer_series()


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(autouse=True)
def fresh_event_log():
    clear_event_log()
    yield
