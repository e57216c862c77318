"""Local forwarding table FT: (s, f) -> (g, B_g), and the breakout eligibility policy."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Mapping, Optional, Set

from ..errors import InvariantViolation
from .model import BearerId, FlowKey, GroupId, MulticastGroup, PtmBearer, Ue, UeId, receivers_attached


@dataclass(frozen=True)
class ForwardingEntry:
    key: FlowKey
    group: GroupId
    bearer: BearerId


class ForwardingTable:
    """At most one entry per flow key."""

    def __init__(self):
        self._entries: Dict[FlowKey, ForwardingEntry] = {}

    def lookup(self, key: FlowKey) -> Optional[ForwardingEntry]:
        return self._entries.get(key)

    def install(
        self,
        entry: ForwardingEntry,
        groups: Mapping[GroupId, MulticastGroup],
        bearers: Mapping[BearerId, PtmBearer],
    ):
        if entry.key in self._entries:
            raise InvariantViolation(f"FT already has an entry for flow {entry.key}")
        group = groups.get(entry.group)
        if group is None:
            raise InvariantViolation(f"FT entry for {entry.key} points at unknown group {entry.group}")
        bearer = bearers.get(entry.bearer)
        if bearer is None or bearer.group != entry.group:
            raise InvariantViolation(
                f"FT entry for {entry.key}: bearer {entry.bearer} is not the PTM bearer of group {entry.group}"
            )
        if group.source != entry.key.source:
            raise InvariantViolation(
                f"FT entry for {entry.key}: group {entry.group} is sourced by UE {group.source}"
            )
        self._entries[entry.key] = entry

    def remove(self, key: FlowKey) -> Optional[ForwardingEntry]:
        return self._entries.pop(key, None)

    def __contains__(self, key: FlowKey) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[ForwardingEntry]:
        return iter(self._entries.values())


class Eligibility(Enum):
    """Outcome of the local-breakout eligibility check, failures in precedence order."""
    ELIGIBLE = "eligible"
    NOT_ALLOWED = "not_allowed"
    RECEIVERS_NOT_ATTACHED = "receivers_not_attached"
    PRB_EXHAUSTED = "prb_exhausted"


@dataclass
class PolicySet:
    """Local-breakout permissions and the PRB reservation for PTM."""
    allowed_flows: Set[FlowKey] = field(default_factory=set)
    prb_budget: int = 100
    prb_required: int = 4

    def __post_init__(self):
        if self.prb_budget < 0:
            raise ValueError("prb_budget must be >= 0")
        if self.prb_required < 1:
            raise ValueError("prb_required must be >= 1")

    def is_allowed(self, key: FlowKey) -> bool:
        return key in self.allowed_flows

    def grant(self, key: FlowKey):
        self.allowed_flows.add(key)

    def revoke(self, key: FlowKey):
        self.allowed_flows.discard(key)

    @property
    def prb_ok(self) -> bool:
        return self.prb_required <= self.prb_budget

    @property
    def ptm_per_slot(self) -> int:
        # PRB sets span the whole band, so several PTM transmissions share a slot.
        return max(1, self.prb_budget // self.prb_required)


def eligibility(
    key: FlowKey,
    group: MulticastGroup,
    policies: PolicySet,
    ues: Mapping[UeId, Ue],
) -> Eligibility:
    """Check policy, then receiver attachment, then PRB admission."""
    if not policies.is_allowed(key):
        return Eligibility.NOT_ALLOWED
    if not receivers_attached(group, ues.values()):
        return Eligibility.RECEIVERS_NOT_ATTACHED
    if not policies.prb_ok:
        return Eligibility.PRB_EXHAUSTED
    return Eligibility.ELIGIBLE
