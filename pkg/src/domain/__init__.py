"""Cell model: UEs, groups, flows, PDUs, PTM bearers, forwarding table and policies."""

from .model import (
    BearerId,
    FlowId,
    FlowKey,
    GroupId,
    MulticastGroup,
    Pdu,
    PtmBearer,
    Ue,
    UeId,
    place_ues,
    receivers_attached,
)
from .forwarding import (
    Eligibility,
    ForwardingEntry,
    ForwardingTable,
    PolicySet,
    eligibility,
)

__all__ = [
    "BearerId",
    "FlowId",
    "FlowKey",
    "GroupId",
    "MulticastGroup",
    "Pdu",
    "PtmBearer",
    "Ue",
    "UeId",
    "place_ues",
    "receivers_attached",
    "Eligibility",
    "ForwardingEntry",
    "ForwardingTable",
    "PolicySet",
    "eligibility",
]
