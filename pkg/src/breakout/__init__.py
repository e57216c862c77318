"""Local breakout routing and the dynamic events that flip eligibility."""

from .router import (
    CellState,
    DecisionCounter,
    DynamicEvent,
    DynamicEventKind,
    RouteDecision,
    RouteReason,
    ScenarioMode,
    Verdict,
    apply_dynamic_event,
    route,
)

__all__ = [
    "CellState",
    "DecisionCounter",
    "DynamicEvent",
    "DynamicEventKind",
    "RouteDecision",
    "RouteReason",
    "ScenarioMode",
    "Verdict",
    "apply_dynamic_event",
    "route",
]
