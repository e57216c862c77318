"""Cell population: UEs, multicast groups, uplink PDUs and PTM bearers."""

from collections import deque
from dataclasses import dataclass, field
import math
from typing import Deque, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

UeId = int
GroupId = int
FlowId = int
BearerId = int

Position3D = Tuple[float, float, float]


@dataclass
class Ue:
    id: UeId
    position: Position3D = (0.0, 0.0, 0.0)
    attached: bool = True

    def distance_to(self, point: Position3D) -> float:
        return math.dist(self.position, point)


def place_ues(n: int, radius_m: float, rng: np.random.Generator, height_m: float = 1.5) -> List[Ue]:
    """Drop n UEs uniformly over a disc centred on the cell origin."""
    r = radius_m * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return [
        Ue(id=i, position=(float(r[i] * np.cos(theta[i])), float(r[i] * np.sin(theta[i])), height_m))
        for i in range(n)
    ]


@dataclass(frozen=True, order=True)
class FlowKey:
    """Uplink flow (s, f): source UE and flow id."""
    source: UeId
    flow: FlowId

    def __str__(self) -> str:
        return f"({self.source},{self.flow})"


@dataclass
class MulticastGroup:
    """Group g with designated source s and receiver set R(g)."""
    id: GroupId
    source: UeId
    receivers: FrozenSet[UeId]
    members: FrozenSet[UeId] = frozenset()

    def __post_init__(self):
        self.receivers = frozenset(self.receivers)
        self.members = frozenset(self.members) | self.receivers | {self.source}
        if not self.receivers:
            raise ValueError(f"Group {self.id} has no receivers")
        if self.source in self.receivers:
            raise ValueError(f"Group {self.id}: source {self.source} cannot be one of its own receivers")

    @property
    def sorted_receivers(self) -> List[UeId]:
        return sorted(self.receivers)


@dataclass
class Pdu:
    """One uplink payload; created_at is MAC ingress at the source."""
    seq: int
    key: FlowKey
    size_bits: int
    created_at: int

    def __post_init__(self):
        if self.size_bits <= 0:
            raise ValueError(f"PDU {self.seq}: size_bits must be positive")
        if self.created_at < 0:
            raise ValueError(f"PDU {self.seq}: created_at must be non-negative")


@dataclass
class PtmBearer:
    """Multicast radio bearer B_g with its PDCP FIFO."""
    id: BearerId
    group: GroupId
    qos_marking: str = "urllc"
    capacity_per_slot: int = 1
    pdcp_queue: Deque[Tuple[Pdu, int]] = field(default_factory=deque)
    next_service: Optional[int] = None

    def enqueue(self, pdu: Pdu, at: int):
        self.pdcp_queue.append((pdu, at))

    def dequeue(self) -> Tuple[Pdu, int]:
        return self.pdcp_queue.popleft()

    def __len__(self) -> int:
        return len(self.pdcp_queue)


def receivers_attached(group: MulticastGroup, ues: Iterable[Ue]) -> bool:
    attached = {ue.id for ue in ues if ue.attached}
    return group.receivers <= attached
