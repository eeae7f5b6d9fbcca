"""Global entropy-unit switch.

All information measures are reported in bits by default. Switching to nats
rescales every entropy-valued quantity in the package; internal caches store
natural-log values, so the switch is consistent even for oracles created
before the call.
"""

import math

from .errors import ValidationError

_LOG_OF_BASE = {"bits": math.log(2.0), "nats": 1.0}

_current = "bits"


def set_entropy_units(units: str) -> None:
    """Select the unit ('bits' or 'nats') for all entropy-valued outputs."""
    global _current
    if units not in _LOG_OF_BASE:
        raise ValidationError(f"unknown entropy unit {units!r}; expected 'bits' or 'nats'")
    _current = units


def entropy_units() -> str:
    return _current


def from_nats(value: float) -> float:
    """Convert a natural-log information value into the configured unit."""
    return value / _LOG_OF_BASE[_current]
