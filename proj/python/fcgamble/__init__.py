"""Utility-based combination of gambles, coherence checks, induced risk and growth simulation."""

from ._core import *  # noqa: F401,F403
from ._core import (
    AcceptanceSet,
    Accumulation,
    DomainError,
    Error,
    Gamble,
    ProbabilityMeasure,
    RangeError,
    StateSpace,
    UtilitySpec,
)

__version__ = "0.1.0"
