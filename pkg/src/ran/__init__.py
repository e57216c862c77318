"""Radio segment: uplink access, PTM scheduling and delivery, NAK-driven repair."""

from .timing import (
    GrantMode,
    LossModel,
    PtmSchedule,
    RadioTiming,
    UlSegment,
    schedule_ptm,
    ul_segment,
)
from .delivery import (
    PtmOutcome,
    RepairOutcome,
    ptm_deliver,
    repair_unicast,
    survival_probability,
)

__all__ = [
    "GrantMode",
    "LossModel",
    "PtmSchedule",
    "RadioTiming",
    "UlSegment",
    "schedule_ptm",
    "ul_segment",
    "PtmOutcome",
    "RepairOutcome",
    "ptm_deliver",
    "repair_unicast",
    "survival_probability",
]
