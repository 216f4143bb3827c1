# ============================================================
# 🛠 Modular Series Engine — Diagnostics Engine Module
# v1.0 | Event Logging, Failure Types, Runtime Reporting
# ============================================================

import logging
from datetime import datetime

import pandas as pd

logger = logging.getLogger("modseries")
logger.addHandler(logging.NullHandler())

# Internal event store
_event_log = []

_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
}

EVENT_COLUMNS = ["Timestamp", "Type", "Details", "Severity"]


# ------------------------------------------------------------
# Failure Types
# ------------------------------------------------------------
class ModSeriesError(Exception):
    """Base class of every failure raised by the engines."""


class RejectedInput(ModSeriesError, ValueError):
    """A caller-side precondition does not hold."""


class UnsupportedModulus(RejectedInput):
    """The modulus is outside the domain of the requested operation."""


class ConsistencyError(ModSeriesError):
    """An exactness assertion failed inside a computation.

    Raised when a recurrence division leaves a remainder or a transcribed
    object contradicts its own construction.
    """


class NonIntegralError(ModSeriesError):
    """Exact evaluation of a lacunary expression produced a fraction."""


class InconclusiveError(ModSeriesError):
    """The available evidence cannot decide the question (margin, prime budget)."""


# ------------------------------------------------------------
# Log Event — Called programmatically by every engine
# ------------------------------------------------------------
def log_event(event_type, details="", severity="INFO"):
    """
    Records engine events (generation runs, guesses, verdicts).
    :param event_type: Short label like 'SERIES', 'GUESS', 'VERIFY', 'CLI'
    :param details: Human-readable details
    :param severity: DEBUG, INFO, WARNING, ERROR
    """
    event_entry = {
        "Timestamp": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        "Type": event_type.upper(),
        "Details": details,
        "Severity": severity.upper(),
    }
    _event_log.append(event_entry)
    logger.log(_LEVELS.get(event_entry["Severity"], logging.INFO), "%s | %s", event_entry["Type"], details)


def configure_console_logging(verbose=False):
    """Attach a stderr handler to the modseries logger (once)."""
    level = logging.DEBUG if verbose else logging.WARNING
    logger.setLevel(level)
    if not any(isinstance(h, logging.StreamHandler) and not isinstance(h, logging.NullHandler) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s - %(levelname)s - %(message)s"))
        logger.addHandler(handler)
    for handler in logger.handlers:
        handler.setLevel(level)


# ------------------------------------------------------------
# Event Log Views
# ------------------------------------------------------------
def event_log_frame() -> pd.DataFrame:
    """Return the recorded events as a DataFrame."""
    return pd.DataFrame(list(_event_log), columns=EVENT_COLUMNS)


def events_of_type(event_type):
    return [e for e in _event_log if e["Type"] == event_type.upper()]


# ------------------------------------------------------------
# Utility — Clear Event Log
# ------------------------------------------------------------
def clear_event_log():
    global _event_log
    _event_log = []
