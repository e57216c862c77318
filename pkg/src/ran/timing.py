"""Radio timing: uplink access and PTM downlink scheduling on a slot grid.

The PHY is abstracted to slot-granular transmissions: a ~1 kbit packet fits
in a single slot at the cell's bandwidth, so a transmission lasts a whole
number of slots.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..domain import Pdu, PtmBearer
from ..engine import RngStream, Sampler, next_slot_boundary


class GrantMode(Enum):
    CONFIGURED_GRANT = "configured_grant"
    REQUEST_BASED = "request_based"


@dataclass(frozen=True)
class RadioTiming:
    slot_len_us: int = 500
    ul_grant_mode: GrantMode = GrantMode.REQUEST_BASED
    ul_grant_delay: Sampler = field(default_factory=lambda: Sampler.uniform(250, 1000))
    gnb_proc_delay: Sampler = field(default_factory=lambda: Sampler.uniform(1000, 2000))
    dl_tx_slots: int = 1
    ul_tx_slots: int = 1
    nak_window_us: Optional[int] = None
    repair_proc_delay_us: int = 0

    def __post_init__(self):
        if self.slot_len_us <= 0:
            raise ValueError(f"slot_len_us must be positive, got {self.slot_len_us}")
        if self.dl_tx_slots < 1 or self.ul_tx_slots < 1:
            raise ValueError("dl_tx_slots and ul_tx_slots must be >= 1")
        if self.ul_grant_delay.low < 0 or self.gnb_proc_delay.low < 0:
            raise ValueError("sampled delays must be non-negative")
        if self.nak_window_us is not None and self.nak_window_us < 0:
            raise ValueError("nak_window_us must be >= 0")
        if self.repair_proc_delay_us < 0:
            raise ValueError("repair_proc_delay_us must be >= 0")

    @property
    def ul_tx_us(self) -> int:
        return self.ul_tx_slots * self.slot_len_us

    @property
    def dl_tx_us(self) -> int:
        return self.dl_tx_slots * self.slot_len_us

    @property
    def nak_window(self) -> int:
        return self.slot_len_us if self.nak_window_us is None else self.nak_window_us


@dataclass(frozen=True)
class LossModel:
    per_receiver_loss_prob: float = 0.0
    max_repair_attempts: int = 3

    def __post_init__(self):
        if not 0.0 <= self.per_receiver_loss_prob <= 1.0:
            raise ValueError(f"loss probability must lie in [0, 1], got {self.per_receiver_loss_prob}")
        if self.max_repair_attempts < 0:
            raise ValueError("max_repair_attempts must be >= 0")

    def is_lost(self, rng: RngStream) -> bool:
        p = self.per_receiver_loss_prob
        if p <= 0.0:
            return False
        if p >= 1.0:
            return True
        return bool(rng.random() < p)


@dataclass(frozen=True)
class UlSegment:
    """T_rqt (grant wait) and T_UL (PUSCH transmission)."""
    grant_wait: int
    tx_dur: int

    @property
    def total(self) -> int:
        return self.grant_wait + self.tx_dur


@dataclass(frozen=True)
class PtmSchedule:
    """T_DL_schd and T_DL for one PTM transmission."""
    dl_wait: int
    dl_tx: int
    start: int

    @property
    def fire_at(self) -> int:
        return self.start + self.dl_tx


def ul_segment(pdu: Pdu, timing: RadioTiming, rng: RngStream) -> UlSegment:
    draw = timing.ul_grant_delay.sample(rng)
    if timing.ul_grant_mode is GrantMode.CONFIGURED_GRANT:
        # Next configured occasion, never later than a request/grant cycle would take.
        occasion = next_slot_boundary(pdu.created_at, timing.slot_len_us) - pdu.created_at
        grant_wait = max(timing.ul_grant_delay.low, min(occasion, draw))
    else:
        grant_wait = draw
    return UlSegment(grant_wait=grant_wait, tx_dur=timing.ul_tx_us)


def schedule_ptm(
    bearer: PtmBearer,
    ready_at: int,
    timing: RadioTiming,
    slot_start: Optional[int] = None,
    align_from: Optional[int] = None,
) -> PtmSchedule:
    """Place the head-of-queue PDU of a bearer on the PDSCH.

    By default the transmission starts at the first slot boundary at or after
    ready_at. slot_start pins it to a boundary already chosen by the DL
    scheduler; align_from computes the alignment wait from another instant
    instead (used when slot re-alignment is summed analytically).
    """
    if len(bearer) == 0:
        raise ValueError(f"Bearer {bearer.id} has nothing queued")
    slot = timing.slot_len_us
    if align_from is not None:
        start = ready_at + next_slot_boundary(align_from, slot) - align_from
    elif slot_start is not None:
        if slot_start < ready_at or slot_start % slot:
            raise ValueError(f"slot_start {slot_start} is not a boundary at or after {ready_at}")
        start = slot_start
    else:
        start = next_slot_boundary(ready_at, slot)
    return PtmSchedule(dl_wait=start - ready_at, dl_tx=timing.dl_tx_us, start=start)
