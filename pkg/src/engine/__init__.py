"""Discrete-event engine: clock, event queue, slot arithmetic and RNG streams."""

from .simulator import (
    Event,
    EventKind,
    SimTime,
    Simulator,
    next_slot_boundary,
    US_PER_MS,
    US_PER_S,
)
from .streams import (
    RandomStreams,
    RngStream,
    Sampler,
    derive_seed,
    TRAFFIC,
    UL_GRANT,
    GNB_PROC,
    CORE_DELAY,
    LOSS,
    PLACEMENT,
)

__all__ = [
    "Event",
    "EventKind",
    "SimTime",
    "Simulator",
    "next_slot_boundary",
    "US_PER_MS",
    "US_PER_S",
    "RandomStreams",
    "RngStream",
    "Sampler",
    "derive_seed",
    "TRAFFIC",
    "UL_GRANT",
    "GNB_PROC",
    "CORE_DELAY",
    "LOSS",
    "PLACEMENT",
]
