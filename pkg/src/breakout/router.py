"""gNB local multicast breakout decision.

For every uplink PDU reaching the gNB: look the flow up in the forwarding
table, check the breakout policy, and either pivot the payload to the group's
PTM bearer or send it to the core. Every PDU gets a decision; a failed check
is a fallback, never an error.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..domain import (
    BearerId,
    Eligibility,
    FlowKey,
    ForwardingTable,
    GroupId,
    MulticastGroup,
    Pdu,
    PolicySet,
    PtmBearer,
    Ue,
    UeId,
    eligibility,
)


class ScenarioMode(Enum):
    LOCAL_BREAKOUT = "local_breakout"
    CORE_ANCHORED = "core_anchored"
    PAIRED = "paired"


class Verdict(Enum):
    LOCAL_BREAKOUT = "local_breakout"
    SEND_TO_CORE = "send_to_core"


class RouteReason(Enum):
    NO_FT_ENTRY = "no_ft_entry"
    NOT_ALLOWED = "not_allowed"
    RECEIVERS_NOT_ATTACHED = "receivers_not_attached"
    PRB_EXHAUSTED = "prb_exhausted"
    FORCED_CORE_SCENARIO = "forced_core_scenario"


_FALLBACK_REASON = {
    Eligibility.NOT_ALLOWED: RouteReason.NOT_ALLOWED,
    Eligibility.RECEIVERS_NOT_ATTACHED: RouteReason.RECEIVERS_NOT_ATTACHED,
    Eligibility.PRB_EXHAUSTED: RouteReason.PRB_EXHAUSTED,
}


@dataclass(frozen=True)
class RouteDecision:
    verdict: Verdict
    group: Optional[GroupId] = None
    bearer: Optional[BearerId] = None
    reason: Optional[RouteReason] = None

    @classmethod
    def local(cls, group: GroupId, bearer: BearerId) -> "RouteDecision":
        return cls(Verdict.LOCAL_BREAKOUT, group=group, bearer=bearer)

    @classmethod
    def to_core(cls, reason: RouteReason) -> "RouteDecision":
        return cls(Verdict.SEND_TO_CORE, reason=reason)

    @property
    def is_local(self) -> bool:
        return self.verdict is Verdict.LOCAL_BREAKOUT

    @property
    def label(self) -> str:
        return self.verdict.value if self.is_local else self.reason.value


@dataclass
class CellState:
    """Everything the router reads and dynamic events mutate."""
    ues: Dict[UeId, Ue]
    groups: Dict[GroupId, MulticastGroup]
    bearers: Dict[BearerId, PtmBearer]
    ft: ForwardingTable = field(default_factory=ForwardingTable)
    policies: PolicySet = field(default_factory=PolicySet)
    core_routes: Dict[FlowKey, GroupId] = field(default_factory=dict)

    def __post_init__(self):
        self._bearer_by_group = {b.group: b for b in self.bearers.values()}

    def bearer_for_group(self, group: GroupId) -> PtmBearer:
        return self._bearer_by_group[group]


def route(pdu: Pdu, state: CellState, mode: ScenarioMode) -> RouteDecision:
    if mode is ScenarioMode.CORE_ANCHORED:
        return RouteDecision.to_core(RouteReason.FORCED_CORE_SCENARIO)
    entry = state.ft.lookup(pdu.key)
    if entry is None:
        return RouteDecision.to_core(RouteReason.NO_FT_ENTRY)
    verdict = eligibility(pdu.key, state.groups[entry.group], state.policies, state.ues)
    if verdict is not Eligibility.ELIGIBLE:
        return RouteDecision.to_core(_FALLBACK_REASON[verdict])
    return RouteDecision.local(entry.group, entry.bearer)


class DynamicEventKind(Enum):
    DETACH = "detach"
    ATTACH = "attach"
    REVOKE = "revoke"
    GRANT = "grant"


@dataclass(frozen=True)
class DynamicEvent:
    at: int
    kind: DynamicEventKind
    ue: Optional[UeId] = None
    key: Optional[FlowKey] = None

    @property
    def is_mobility(self) -> bool:
        return self.kind in (DynamicEventKind.DETACH, DynamicEventKind.ATTACH)


def apply_dynamic_event(ev: DynamicEvent, state: CellState):
    """Mutate attachment or permissions; PDUs already routed keep their decision."""
    if ev.is_mobility:
        if ev.ue not in state.ues:
            raise ValueError(f"{ev.kind.value} at {ev.at} us references unknown UE {ev.ue}")
        state.ues[ev.ue].attached = ev.kind is DynamicEventKind.ATTACH
        logger.info(f"t={ev.at} us: UE {ev.ue} {'attached' if state.ues[ev.ue].attached else 'detached'}")
        return
    if ev.key is None or ev.key.source not in state.ues:
        raise ValueError(f"{ev.kind.value} at {ev.at} us references unknown flow {ev.key}")
    if ev.kind is DynamicEventKind.GRANT:
        state.policies.grant(ev.key)
    else:
        state.policies.revoke(ev.key)
    logger.info(f"t={ev.at} us: local breakout {ev.kind.value}d for flow {ev.key}")


class DecisionCounter:
    """Decision tally by reason plus the per-flow points where the path changed."""

    def __init__(self):
        self.counts: Counter = Counter()
        self.transitions: List[Tuple[int, FlowKey, str]] = []
        self._last: Dict[FlowKey, str] = {}

    def record(self, at: int, pdu: Pdu, decision: RouteDecision):
        label = decision.label
        self.counts[label] += 1
        if self._last.get(pdu.key) != label:
            self.transitions.append((at, pdu.key, label))
            self._last[pdu.key] = label

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def as_dict(self) -> Dict[str, int]:
        return {k: self.counts[k] for k in sorted(self.counts)}
