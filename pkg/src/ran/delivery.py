"""PTM delivery over the group bearer, NAK collection and selective unicast repair."""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..domain import MulticastGroup, Pdu, UeId
from ..engine import RngStream, next_slot_boundary
from .timing import LossModel, RadioTiming


@dataclass(frozen=True)
class PtmOutcome:
    delivered: Tuple[UeId, ...]
    nak: Tuple[UeId, ...]


@dataclass(frozen=True)
class RepairOutcome:
    ue: UeId
    delivered_at: Optional[int]
    attempts: int

    @property
    def lost(self) -> bool:
        return self.delivered_at is None


def ptm_deliver(pdu: Pdu, group: MulticastGroup, loss: LossModel, rng: RngStream) -> PtmOutcome:
    """One PTM copy; each receiver independently misses it with the configured probability."""
    receivers = group.sorted_receivers
    p = loss.per_receiver_loss_prob
    if p <= 0.0:
        return PtmOutcome(delivered=tuple(receivers), nak=())
    if p >= 1.0:
        return PtmOutcome(delivered=(), nak=tuple(receivers))
    missed = rng.random(len(receivers)) < p
    delivered = tuple(r for r, m in zip(receivers, missed) if not m)
    nak = tuple(r for r, m in zip(receivers, missed) if m)
    return PtmOutcome(delivered=delivered, nak=nak)


def repair_unicast(
    pdu: Pdu,
    nak_set: Iterable[UeId],
    timing: RadioTiming,
    loss: LossModel,
    rng: RngStream,
    at: int,
) -> List[RepairOutcome]:
    """Serve NAK'd receivers one unicast slot each, in ascending id order.

    Receivers that miss the retransmission go into another round, which starts
    one NAK window after the previous round's last transmission, until they
    have used max_repair_attempts.
    """
    pending = sorted(set(nak_set))
    if not pending:
        raise ValueError(f"PDU {pdu.seq}: repair needs a non-empty NAK set")

    attempts: Dict[UeId, int] = {ue: 0 for ue in pending}
    outcomes: Dict[UeId, RepairOutcome] = {}
    if loss.max_repair_attempts == 0:
        return [RepairOutcome(ue, None, 0) for ue in pending]

    cursor = at + timing.repair_proc_delay_us
    while pending:
        tx_start = next_slot_boundary(cursor, timing.slot_len_us)
        failed = []
        for ue in pending:
            attempts[ue] += 1
            tx_end = tx_start + timing.dl_tx_us
            if not loss.is_lost(rng):
                outcomes[ue] = RepairOutcome(ue, tx_end, attempts[ue])
            elif attempts[ue] >= loss.max_repair_attempts:
                outcomes[ue] = RepairOutcome(ue, None, attempts[ue])
            else:
                failed.append(ue)
            tx_start = tx_end
        pending = failed
        cursor = tx_start + timing.nak_window
    return [outcomes[ue] for ue in sorted(outcomes)]


def survival_probability(loss: LossModel) -> float:
    """Chance a receiver eventually gets a PDU: one PTM copy plus the repair attempts."""
    return float(1.0 - np.power(loss.per_receiver_loss_prob, 1 + loss.max_repair_attempts))
